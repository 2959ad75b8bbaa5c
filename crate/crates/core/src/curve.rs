//! Elliptic curves over prime fields, point counting (exhaustive and
//! baby-step/giant-step over the Hasse interval), and validated Frobenius
//! contexts for abstract (q, t) pairs including prime powers.

use std::collections::BTreeSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::arith::{self, isqrt_u128, kronecker};
use crate::error::{Error, Result};

/// p above this is rejected for exhaustive counting (O(p) symbol evaluations).
pub const NAIVE_LIMIT: u64 = 10_000_000;

/// p above this is rejected for BSGS counting.
pub const BSGS_LIMIT: u64 = 1_000_000_000_000;

/// Exhaustive counting is used below this in `auto` mode, and as the base
/// case inside BSGS where the Hasse interval is too wide relative to the
/// group exponent for order sampling to single out the answer.
const SMALL_P_EXHAUSTIVE: u64 = 1000;

/// q above this would let |t^2 - 4q| overflow the supported 128-bit window.
const Q_LIMIT: u128 = 1 << 124;

/// A nonsingular short Weierstrass curve y^2 = x^3 + ax + b over F_p, p > 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CurvePrimeField {
    p: u64,
    a: u64,
    b: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountMethod {
    Naive,
    Bsgs,
    Auto,
}

impl CurvePrimeField {
    /// Validates p (prime, > 3, within the BSGS range), reduces a and b mod p,
    /// and rejects singular curves (4a^3 + 27b^2 = 0 mod p).
    pub fn new(p: u64, a: u64, b: u64) -> Result<Self> {
        if p <= 3 {
            return Err(Error::InvalidCurve {
                reason: format!("p = {p} too small for short Weierstrass form"),
            });
        }
        if p > BSGS_LIMIT {
            return Err(Error::CountRange {
                p,
                limit: BSGS_LIMIT,
                method: "any",
            });
        }
        if !arith::is_prime(p as u128) {
            return Err(Error::InvalidCurve {
                reason: format!("p = {p} is not prime"),
            });
        }
        let a = a % p;
        let b = b % p;
        let a3 = mulm(a, mulm(a, a, p), p) as u128;
        let b2 = mulm(b, b, p) as u128;
        if (4 * a3 + 27 * b2) % p as u128 == 0 {
            return Err(Error::InvalidCurve {
                reason: format!("singular: 4a^3 + 27b^2 = 0 mod {p}"),
            });
        }
        Ok(Self { p, a, b })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    #[inline]
    fn rhs(&self, x: u64) -> u64 {
        let p = self.p;
        let x2 = mulm(x, x, p);
        let x3 = mulm(x2, x, p);
        addm(addm(x3, mulm(self.a, x, p), p), self.b, p)
    }

    /// #E(F_p) by summing 1 + chi(x^3 + ax + b) over all x, via a
    /// quadratic-residue bitset.
    pub fn count_points_naive(&self) -> Result<u64> {
        let p = self.p;
        if p > NAIVE_LIMIT {
            return Err(Error::CountRange {
                p,
                limit: NAIVE_LIMIT,
                method: "naive",
            });
        }
        let sq = residue_bitset(p);
        let mut count = 1u64; // point at infinity
        for x in 0..p {
            let f = self.rhs(x);
            if f == 0 {
                count += 1;
            } else if sq[(f / 64) as usize] >> (f % 64) & 1 == 1 {
                count += 2;
            }
        }
        Ok(count)
    }

    /// #E(F_p) by baby-step/giant-step search over the Hasse interval,
    /// sampling points on the curve and its quadratic twist until the group
    /// order is pinned down. Deterministically seeded from (p, a, b).
    pub fn count_points_bsgs(&self) -> Result<u64> {
        let p = self.p;
        if p > BSGS_LIMIT {
            return Err(Error::CountRange {
                p,
                limit: BSGS_LIMIT,
                method: "bsgs",
            });
        }
        if p <= SMALL_P_EXHAUSTIVE {
            // interval width ~4 sqrt(p) rivals p itself here; order sampling
            // cannot separate candidates, so count directly
            return self.count_points_naive();
        }
        let width = isqrt_u128(4 * p as u128) as u64; // floor(2 sqrt p)
        let n_lo = p + 1 - width;
        let g = nonresidue(p);
        let twist = TwistedCurve::of(self, g);

        let mut rng = ChaCha8Rng::seed_from_u64(
            0x8f1b_c2d4u64
                .wrapping_mul(p)
                .wrapping_add(self.a.rotate_left(17))
                .wrapping_add(self.b.rotate_left(41)),
        );

        let mut curve_candidates: Option<BTreeSet<u64>> = None;
        let mut twist_candidates: Option<BTreeSet<u64>> = None;
        const MAX_ROUNDS: u32 = 64;
        for _ in 0..MAX_ROUNDS {
            let x = rng.gen_range(0..p);
            let f = self.rhs(x);
            if f == 0 {
                continue;
            }
            let euler = arith::powmod(f as u128, (p as u128 - 1) / 2, p as u128) as u64;
            if euler == 1 {
                let y = sqrt_mod(f, p).expect("euler criterion said QR");
                let pt = Point::Affine(x, y);
                let matches = order_matches(self.a, p, pt, n_lo, 2 * width);
                intersect(&mut curve_candidates, matches);
                if let Some(set) = &curve_candidates {
                    if set.len() == 1 {
                        return Ok(*set.iter().next().unwrap());
                    }
                }
            } else {
                // x gives a point on the twist at gx: (gx)^3 + ag^2(gx) + bg^3 = g^3 f(x)
                let gx = mulm(g, x, p);
                let g3f = mulm(mulm(mulm(g, g, p), g, p), f, p);
                let y = sqrt_mod(g3f, p).expect("g^3 f is a QR when f is not");
                let pt = Point::Affine(gx, y);
                let matches = order_matches(twist.a, p, pt, n_lo, 2 * width);
                intersect(&mut twist_candidates, matches);
                if let Some(set) = &twist_candidates {
                    if set.len() == 1 {
                        let n_twist = *set.iter().next().unwrap();
                        return Ok(2 * p + 2 - n_twist);
                    }
                }
            }
            // cross-constrain: #E + #E_twist = 2p + 2
            if let (Some(ce), Some(ct)) = (&curve_candidates, &twist_candidates) {
                let reflected: BTreeSet<u64> = ct.iter().map(|&m| 2 * p + 2 - m).collect();
                let joint: BTreeSet<u64> = ce.intersection(&reflected).copied().collect();
                if joint.len() == 1 {
                    return Ok(*joint.iter().next().unwrap());
                }
            }
        }
        Err(Error::AmbiguousOrder {
            p,
            a: self.a,
            b: self.b,
            rounds: MAX_ROUNDS,
        })
    }

    pub fn count_points(&self, method: CountMethod) -> Result<u64> {
        match method {
            CountMethod::Naive => self.count_points_naive(),
            CountMethod::Bsgs => self.count_points_bsgs(),
            CountMethod::Auto => {
                if self.p <= 200_000 {
                    self.count_points_naive()
                } else {
                    self.count_points_bsgs()
                }
            }
        }
    }
}

struct TwistedCurve {
    a: u64,
}

impl TwistedCurve {
    /// Quadratic twist y^2 = x^3 + a g^2 x + b g^3 for a nonresidue g.
    /// Only the a-coefficient matters for the group law.
    fn of(curve: &CurvePrimeField, g: u64) -> Self {
        let p = curve.p;
        let g2 = mulm(g, g, p);
        Self {
            a: mulm(curve.a, g2, p),
        }
    }
}

// -- modular helpers on u64 (p <= 1e12 so products fit in u128) --

#[inline]
fn mulm(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
fn addm(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

#[inline]
fn subm(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + (p - b)
    }
}

fn invm(a: u64, p: u64) -> u64 {
    // extended Euclid; p prime and a != 0 mod p
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (p as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    debug_assert_eq!(r, 1, "inverse of {a} mod {p}");
    t.rem_euclid(p as i128) as u64
}

/// Smallest quadratic nonresidue mod p.
fn nonresidue(p: u64) -> u64 {
    let mut g = 2u64;
    loop {
        if kronecker(g as i128, p as i128) == -1 {
            return g;
        }
        g += 1;
    }
}

/// Tonelli–Shanks square root mod prime p; None when a is a nonresidue.
fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a % 2);
    }
    if arith::powmod(a as u128, (p as u128 - 1) / 2, p as u128) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(arith::powmod(a as u128, (p as u128 + 1) / 4, p as u128) as u64);
    }
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    let z = nonresidue(p);
    let mut m = s;
    let mut c = arith::powmod(z as u128, q as u128, p as u128) as u64;
    let mut t = arith::powmod(a as u128, q as u128, p as u128) as u64;
    let mut r = arith::powmod(a as u128, (q as u128 + 1) / 2, p as u128) as u64;
    while t != 1 {
        let mut i = 0u32;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mulm(t2, t2, p);
            i += 1;
            if i == m {
                return None;
            }
        }
        let mut b = c;
        for _ in 0..(m - i - 1) {
            b = mulm(b, b, p);
        }
        m = i;
        c = mulm(b, b, p);
        t = mulm(t, c, p);
        r = mulm(r, b, p);
    }
    Some(r)
}

/// Affine point or the point at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Point {
    Infinity,
    Affine(u64, u64),
}

fn point_neg(pt: Point, p: u64) -> Point {
    match pt {
        Point::Infinity => Point::Infinity,
        Point::Affine(x, y) => Point::Affine(x, if y == 0 { 0 } else { p - y }),
    }
}

fn point_add(lhs: Point, rhs: Point, a: u64, p: u64) -> Point {
    let (x1, y1) = match lhs {
        Point::Infinity => return rhs,
        Point::Affine(x, y) => (x, y),
    };
    let (x2, y2) = match rhs {
        Point::Infinity => return lhs,
        Point::Affine(x, y) => (x, y),
    };
    let lambda = if x1 == x2 {
        if addm(y1, y2, p) == 0 {
            return Point::Infinity;
        }
        // doubling
        let num = addm(mulm(3, mulm(x1, x1, p), p), a, p);
        mulm(num, invm(addm(y1, y1, p), p), p)
    } else {
        mulm(subm(y2, y1, p), invm(subm(x2, x1, p), p), p)
    };
    let x3 = subm(subm(mulm(lambda, lambda, p), x1, p), x2, p);
    let y3 = subm(mulm(lambda, subm(x1, x3, p), p), y1, p);
    Point::Affine(x3, y3)
}

fn point_mul(mut k: u64, pt: Point, a: u64, p: u64) -> Point {
    let mut acc = Point::Infinity;
    let mut base = pt;
    while k > 0 {
        if k & 1 == 1 {
            acc = point_add(acc, base, a, p);
        }
        base = point_add(base, base, a, p);
        k >>= 1;
    }
    acc
}

/// All m in [n_lo, n_lo + range] with m * pt = O, via BSGS: the multiples of
/// ord(pt) that fall in the Hasse interval.
fn order_matches(a: u64, p: u64, pt: Point, n_lo: u64, range: u64) -> BTreeSet<u64> {
    // solve j * pt = -(n_lo * pt) for j in [0, range]
    let target = point_neg(point_mul(n_lo, pt, a, p), p);
    let stride = (isqrt_u128(range as u128) as u64 + 1).max(1);

    let mut baby: std::collections::HashMap<Point, Vec<u64>> = std::collections::HashMap::new();
    let mut cur = Point::Infinity;
    for i in 0..stride {
        baby.entry(cur).or_default().push(i);
        cur = point_add(cur, pt, a, p);
    }
    // cur = stride * pt
    let giant_step = point_neg(cur, p);

    let mut out = BTreeSet::new();
    let mut probe = target;
    let mut k = 0u64;
    while k * stride <= range {
        if let Some(is) = baby.get(&probe) {
            for &i in is {
                let j = k * stride + i;
                if j <= range {
                    out.insert(n_lo + j);
                }
            }
        }
        probe = point_add(probe, giant_step, a, p);
        k += 1;
    }
    out
}

fn intersect(acc: &mut Option<BTreeSet<u64>>, new: BTreeSet<u64>) {
    match acc {
        None => *acc = Some(new),
        Some(old) => {
            let merged: BTreeSet<u64> = old.intersection(&new).copied().collect();
            *acc = Some(merged);
        }
    }
}

fn residue_bitset(p: u64) -> Vec<u64> {
    let mut sq = vec![0u64; (p as usize).div_ceil(64)];
    let half = p / 2;
    for y in 1..=half {
        let v = mulm(y, y, p);
        sq[(v / 64) as usize] |= 1 << (v % 64);
    }
    sq
}

// ---------------------------------------------------------------------------
// Frobenius contexts
// ---------------------------------------------------------------------------

/// A validated (q, t) pair: q = p^k a prime power, t the Frobenius trace,
/// D = t^2 - 4q the discriminant, m = |D|.
///
/// Construction enforces the standing assumptions: the Hasse bound
/// (exact integer comparison), D nonzero and not a perfect square,
/// D = 0 or 1 mod 4, m >= 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrobeniusContext {
    q: u128,
    p: u128,
    k: u32,
    t: i128,
    d: i128,
    m: u128,
    supersingular: bool,
}

impl FrobeniusContext {
    pub fn q(&self) -> u128 {
        self.q
    }

    /// Field characteristic.
    pub fn char(&self) -> u128 {
        self.p
    }

    /// Exponent k with q = p^k.
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn t(&self) -> i128 {
        self.t
    }

    /// Discriminant t^2 - 4q (always negative for a valid context).
    pub fn d(&self) -> i128 {
        self.d
    }

    /// |D|, the modulus of the attached character.
    pub fn m(&self) -> u128 {
        self.m
    }

    /// True iff p divides t.
    pub fn supersingular(&self) -> bool {
        self.supersingular
    }

    /// gcd(t, p) = 1, the condition under which (q, t) can come from an
    /// ordinary curve.
    pub fn ordinary_admissible(&self) -> bool {
        !self.supersingular
    }

    /// chi_E(n) = (D | n).
    pub fn chi(&self, n: i128) -> i32 {
        kronecker(self.d, n)
    }
}

/// Writes q as p^k with p prime, or reports that q is not a prime power.
pub fn prime_power_decompose(q: u128) -> Result<(u128, u32)> {
    if q < 2 {
        return Err(Error::NotPrimePower { q });
    }
    if arith::is_prime(q) {
        return Ok((q, 1));
    }
    for k in 2..=q.ilog2() {
        let r = arith::integer_kth_root(q, k);
        if r.checked_pow(k) == Some(q) && arith::is_prime(r) {
            return Ok((r, k));
        }
    }
    Err(Error::NotPrimePower { q })
}

/// Validates (q, t) against the standing assumptions and derives the
/// discriminant data.
pub fn frobenius_context(q: u128, t: i128) -> Result<FrobeniusContext> {
    if q > Q_LIMIT {
        return Err(Error::QTooLarge { q });
    }
    let (p, k) = prime_power_decompose(q)?;
    let t_abs = t.unsigned_abs();
    if t_abs > isqrt_u128(4 * q) {
        return Err(Error::HasseViolation { q, t });
    }
    let d = t * t - 4 * q as i128;
    if d == 0 {
        return Err(Error::DegenerateDiscriminant {
            q,
            t,
            reason: "t^2 - 4q = 0 (supersingular extreme)".into(),
        });
    }
    if arith::is_perfect_square(d) {
        return Err(Error::DegenerateDiscriminant {
            q,
            t,
            reason: format!("t^2 - 4q = {d} is a perfect square"),
        });
    }
    let m = d.unsigned_abs();
    debug_assert!(d.rem_euclid(4) <= 1, "discriminant is 0 or 1 mod 4");
    debug_assert!(m >= 3);
    let supersingular = t.rem_euclid(p as i128) == 0;
    Ok(FrobeniusContext {
        q,
        p,
        k,
        t,
        d,
        m,
        supersingular,
    })
}

/// Counts points and packages the result as a Frobenius context with
/// t = p + 1 - #E.
pub fn trace_from_curve(curve: &CurvePrimeField, method: CountMethod) -> Result<FrobeniusContext> {
    let n = curve.count_points(method)?;
    let p = curve.p();
    let t = p as i128 + 1 - n as i128;
    debug_assert!(t.unsigned_abs() <= isqrt_u128(4 * p as u128), "Hasse bound");
    frobenius_context(p as u128, t)
}

/// Every admissible trace for q: all t with t^2 <= 4q whose (q, t) passes
/// validation, in increasing t order.
pub fn enumerate_traces(q: u128) -> Result<Vec<FrobeniusContext>> {
    if q > Q_LIMIT {
        return Err(Error::QTooLarge { q });
    }
    prime_power_decompose(q)?;
    let bound = isqrt_u128(4 * q) as i128;
    if bound > 100_000_000 {
        return Err(Error::EnumerationBudget {
            q,
            traces: 2 * bound as u128 + 1,
        });
    }
    let mut out = Vec::with_capacity((2 * bound + 1) as usize);
    for t in -bound..=bound {
        if let Ok(ctx) = frobenius_context(q, t) {
            out.push(ctx);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force point count checking every (x, y) pair.
    fn enumerate_points(p: u64, a: u64, b: u64) -> u64 {
        let mut count = 1u64;
        for x in 0..p {
            for y in 0..p {
                let lhs = mulm(y, y, p);
                let rhs = addm(addm(mulm(mulm(x, x, p), x, p), mulm(a, x, p), p), b, p);
                if lhs == rhs {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn naive_count_examples() {
        let c = CurvePrimeField::new(5, 1, 1).unwrap();
        assert_eq!(c.count_points_naive().unwrap(), 9);
        assert_eq!(enumerate_points(5, 1, 1), 9);

        let c = CurvePrimeField::new(5, 0, 1).unwrap();
        assert_eq!(c.count_points_naive().unwrap(), 6);
        assert_eq!(enumerate_points(5, 0, 1), 6);

        assert!(matches!(
            CurvePrimeField::new(7, 0, 0),
            Err(Error::InvalidCurve { .. })
        ));
    }

    #[test]
    fn naive_matches_enumeration_small() {
        let mut checked = 0;
        for p in [5u64, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59] {
            for (a, b) in [(1, 1), (2, 3), (0, 5), (4, 1)] {
                if let Ok(c) = CurvePrimeField::new(p, a, b) {
                    assert_eq!(
                        c.count_points_naive().unwrap(),
                        enumerate_points(p, a, b),
                        "p={p} a={a} b={b}"
                    );
                    checked += 1;
                }
            }
        }
        assert!(checked >= 50);
    }

    #[test]
    fn bsgs_count_examples() {
        let c = CurvePrimeField::new(10007, 1, 6).unwrap();
        assert_eq!(c.count_points_bsgs().unwrap(), c.count_points_naive().unwrap());

        let c = CurvePrimeField::new(5, 1, 1).unwrap();
        assert_eq!(c.count_points_bsgs().unwrap(), 9);

        let p = 1_000_003u64;
        let c = CurvePrimeField::new(p, 2, 3).unwrap();
        let n = c.count_points_bsgs().unwrap();
        let width = isqrt_u128(4 * p as u128) as u64;
        assert!(n >= p + 1 - width && n <= p + 1 + width, "Hasse: {n}");
        assert_eq!(n, c.count_points_naive().unwrap());
    }

    #[test]
    fn bsgs_large_prime() {
        let c = CurvePrimeField::new(1_000_000_007, 7, 11).unwrap();
        let n = c.count_points_bsgs().unwrap();
        let p = 1_000_000_007u64;
        let width = isqrt_u128(4 * p as u128) as u64;
        assert!(n >= p + 1 - width && n <= p + 1 + width);
    }

    #[test]
    fn context_examples() {
        let ctx = frobenius_context(7, 3).unwrap();
        assert_eq!(ctx.d(), -19);
        assert_eq!(ctx.m(), 19);
        assert!(!ctx.supersingular());

        let ctx = frobenius_context(25, 5).unwrap();
        assert_eq!(ctx.d(), -75);
        assert_eq!(ctx.char(), 5);
        assert_eq!(ctx.k(), 2);
        assert!(ctx.supersingular());

        assert!(matches!(
            frobenius_context(4, 4),
            Err(Error::DegenerateDiscriminant { .. })
        ));
        assert!(matches!(
            frobenius_context(6, 1),
            Err(Error::NotPrimePower { .. })
        ));
        assert!(matches!(
            frobenius_context(5, 5),
            Err(Error::HasseViolation { .. })
        ));
    }

    #[test]
    fn trace_examples() {
        let c = CurvePrimeField::new(5, 1, 1).unwrap();
        let ctx = trace_from_curve(&c, CountMethod::Naive).unwrap();
        assert_eq!(ctx.t(), -3);
        assert_eq!(ctx.d(), -11);

        let c = CurvePrimeField::new(7, 1, 1).unwrap();
        let ctx = trace_from_curve(&c, CountMethod::Auto).unwrap();
        assert_eq!(ctx.t(), 3);
        assert_eq!(ctx.d(), -19);

        // supersingular: y^2 = x^3 + x over F_7 has 8 points, t = 0
        let c = CurvePrimeField::new(7, 1, 0).unwrap();
        assert_eq!(c.count_points_naive().unwrap(), 8);
        let ctx = trace_from_curve(&c, CountMethod::Naive).unwrap();
        assert_eq!(ctx.t(), 0);
        assert_eq!(ctx.d(), -28);
        assert!(ctx.supersingular());
    }

    #[test]
    fn enumerate_traces_examples() {
        let ctxs = enumerate_traces(5).unwrap();
        assert_eq!(ctxs.len(), 9);
        assert_eq!(ctxs.iter().filter(|c| c.ordinary_admissible()).count(), 8);
        let ts: Vec<i128> = ctxs.iter().map(|c| c.t()).collect();
        assert_eq!(ts, (-4..=4).collect::<Vec<i128>>());

        let ctxs = enumerate_traces(2).unwrap();
        assert_eq!(ctxs.len(), 5);

        // q = 4: t = +-4 give D = 0 and are rejected
        let ctxs = enumerate_traces(4).unwrap();
        assert_eq!(ctxs.len(), 7);
        assert!(ctxs.iter().all(|c| c.t().abs() < 4));
    }

    #[test]
    fn sqrt_mod_roundtrip() {
        for p in [10007u64, 1_000_003, 999_999_937] {
            for v in [2u64, 3, 5, 1234, 98765] {
                let a = v % p;
                if kronecker(a as i128, p as i128) == 1 {
                    let r = sqrt_mod(a, p).unwrap();
                    assert_eq!(mulm(r, r, p), a, "p={p} a={a}");
                }
            }
        }
    }
}
