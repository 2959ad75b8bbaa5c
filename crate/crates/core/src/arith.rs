//! Integer and prime-counting primitives used by every other module:
//! deterministic primality, sieving, the Kronecker symbol, the von Mangoldt
//! function, Chebyshev functions, factorization, and exact root tests.
//!
//! Everything here is a pure function of its inputs and safe to call
//! concurrently. Long floating-point sums go through [`KahanSum`] so the
//! relative error stays far below 1e-12 even at X = 1e7.

use crate::error::{Error, Result};

/// Compensated (Kahan) accumulator for long floating-point sums.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    carry: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, term: f64) {
        let y = term - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum
    }
}

// ---------------------------------------------------------------------------
// Modular arithmetic on u128
// ---------------------------------------------------------------------------

#[inline]
fn addmod(a: u128, b: u128, m: u128) -> u128 {
    // a, b < m; avoids overflow for m close to 2^128
    if a >= m - b {
        a - (m - b)
    } else {
        a + b
    }
}

pub fn mulmod(mut a: u128, mut b: u128, m: u128) -> u128 {
    a %= m;
    b %= m;
    if let Some(p) = a.checked_mul(b) {
        return p % m;
    }
    // fall back to double-and-add; only reached for moduli above 2^64
    let mut acc = 0u128;
    while b > 0 {
        if b & 1 == 1 {
            acc = addmod(acc, a, m);
        }
        a = addmod(a, a, m);
        b >>= 1;
    }
    acc
}

pub fn powmod(mut base: u128, mut exp: u128, m: u128) -> u128 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u128;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, m);
        }
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    acc
}

pub fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

// ---------------------------------------------------------------------------
// Deterministic primality
// ---------------------------------------------------------------------------

const TRIAL_PRIMES: [u64; 15] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];

/// Witness set proven sufficient for every n < 2^64.
const WITNESSES_U64: [u64; 7] = [2, 325, 9375, 28178, 450775, 9780504, 1795265022];

/// The first 13 primes are proven sufficient below 3.317e24 (~2^81.5).
const WITNESSES_13: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
const WITNESSES_13_LIMIT: u128 = 3_317_044_064_679_887_385_961_981;

/// Above the proven range a fixed extended base set keeps the answer
/// reproducible; no strong pseudoprime to all of these bases is known.
const WITNESSES_EXT: [u64; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

fn is_sprp(n: u128, base: u128) -> bool {
    let a = base % n;
    if a == 0 {
        return true;
    }
    let d = n - 1;
    let s = d.trailing_zeros();
    let q = d >> s;
    let mut x = powmod(a, q, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mulmod(x, x, n);
        if x == n - 1 {
            return true;
        }
        if x == 1 {
            return false;
        }
    }
    false
}

/// Deterministic primality test for the full 128-bit range.
pub fn is_prime(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &TRIAL_PRIMES {
        if n % p as u128 == 0 {
            return n == p as u128;
        }
    }
    if n < 53 * 53 {
        return true;
    }
    let witnesses: &[u64] = if n < 1 << 64 {
        &WITNESSES_U64
    } else if n < WITNESSES_13_LIMIT {
        &WITNESSES_13
    } else {
        &WITNESSES_EXT
    };
    witnesses.iter().all(|&w| is_sprp(n, w as u128))
}

// ---------------------------------------------------------------------------
// Sieving
// ---------------------------------------------------------------------------

/// Below this limit a flat odd-only bitset is materialized in one piece.
const FLAT_SIEVE_LIMIT: u64 = 10_000_000;

/// Numbers spanned by one segment of the segmented sieve.
const SEGMENT_SPAN: u64 = 1 << 22;

/// Hard cap on sieve limits; a full prime table at this limit stays well
/// under 4 GB.
pub const SIEVE_BUDGET: u64 = 4_000_000_000;

/// Flat odd-only sieve: bit i represents the number 2i + 1, set = composite.
fn sieve_odd_words(limit: u64) -> Vec<u64> {
    let n_odds = ((limit + 1) / 2) as usize;
    let mut words = vec![0u64; n_odds.div_ceil(64).max(1)];
    words[0] |= 1; // 1 is not prime
    let mut p = 3u64;
    while p * p <= limit {
        let idx = (p / 2) as usize;
        if words[idx / 64] >> (idx % 64) & 1 == 0 {
            let mut c = p * p;
            while c <= limit {
                let ci = (c / 2) as usize;
                words[ci / 64] |= 1 << (ci % 64);
                c += 2 * p;
            }
        }
        p += 2;
    }
    words
}

fn flat_odd_primes(limit: u64, f: &mut impl FnMut(u64)) {
    let words = sieve_odd_words(limit);
    let n_odds = ((limit + 1) / 2) as usize;
    for i in 1..n_odds {
        if words[i / 64] >> (i % 64) & 1 == 0 {
            f(2 * i as u64 + 1);
        }
    }
}

/// Visits every prime in `[lo, hi]` in increasing order.
///
/// Uses a flat bitset when `hi` is small and fixed-size segments above
/// [`FLAT_SIEVE_LIMIT`]. Ranges far beyond [`SIEVE_BUDGET`] are accepted as
/// long as the width stays within budget and the base sieve (primes up to
/// sqrt(hi)) fits in the flat limit.
pub fn visit_primes_in(lo: u64, hi: u64, mut f: impl FnMut(u64)) -> Result<()> {
    if hi < 2 || hi < lo {
        return Ok(());
    }
    if hi > SIEVE_BUDGET {
        let width = hi - lo.max(2);
        let root = isqrt_u128(hi as u128) as u64;
        if width > SIEVE_BUDGET || root > FLAT_SIEVE_LIMIT {
            return Err(Error::SieveBudget {
                requested: hi,
                budget: SIEVE_BUDGET,
            });
        }
    }
    let lo = lo.max(2);
    if lo == 2 {
        f(2);
    }
    if hi < 3 {
        return Ok(());
    }
    if hi <= FLAT_SIEVE_LIMIT {
        flat_odd_primes(hi, &mut |p| {
            if p >= lo {
                f(p)
            }
        });
        return Ok(());
    }
    let root = isqrt_u128(hi as u128) as u64;
    let mut base = Vec::new();
    flat_odd_primes(root, &mut |p| base.push(p));
    let mut flags = vec![0u64; (SEGMENT_SPAN as usize / 2).div_ceil(64)];
    let mut start = lo.max(3);
    if start % 2 == 0 {
        start += 1;
    }
    while start <= hi {
        let end = hi.min(start + SEGMENT_SPAN - 2); // inclusive, odd-aligned span
        let n_odds = ((end - start) / 2 + 1) as usize;
        for w in flags.iter_mut() {
            *w = 0;
        }
        for &p in &base {
            if p * p > end {
                break;
            }
            // first odd multiple of p in the segment that is >= p*p
            let mut c = p * p;
            if c < start {
                c = start.div_ceil(p) * p;
                if c % 2 == 0 {
                    c += p;
                }
            }
            while c <= end {
                let i = ((c - start) / 2) as usize;
                flags[i / 64] |= 1 << (i % 64);
                c += 2 * p;
            }
        }
        for i in 0..n_odds {
            if flags[i / 64] >> (i % 64) & 1 == 0 {
                f(start + 2 * i as u64);
            }
        }
        start = end + 2;
    }
    Ok(())
}

/// Visits every prime `<= limit` in increasing order.
pub fn visit_primes(limit: u64, f: impl FnMut(u64)) -> Result<()> {
    if limit > SIEVE_BUDGET {
        return Err(Error::SieveBudget {
            requested: limit,
            budget: SIEVE_BUDGET,
        });
    }
    visit_primes_in(0, limit, f)
}

/// An immutable, shareable table of all primes up to a limit.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
}

impl PrimeTable {
    pub fn up_to(limit: u64) -> Result<Self> {
        let mut primes = Vec::new();
        if limit >= 2 {
            let est = (limit as f64 / (limit.max(3) as f64).ln() * 1.2) as usize + 16;
            primes.reserve(est);
        }
        visit_primes(limit, |p| primes.push(p))?;
        Ok(Self { limit, primes })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// pi(limit): the number of primes in the table.
    pub fn prime_pi(&self) -> usize {
        self.primes.len()
    }

    /// pi(x) for any x <= limit.
    pub fn pi_at(&self, x: u64) -> usize {
        assert!(x <= self.limit, "pi_at({x}) beyond table limit {}", self.limit);
        self.primes.partition_point(|&p| p <= x)
    }
}

/// All primes up to X.
pub fn primes_up_to(x: u64) -> Result<PrimeTable> {
    PrimeTable::up_to(x)
}

// ---------------------------------------------------------------------------
// Factorization
// ---------------------------------------------------------------------------

const TRIAL_DIVISION_BOUND: u64 = 1_000_000;

fn pollard_brent_u64(n: u64) -> Option<u64> {
    // deterministic parameter schedule so repeated runs agree
    let n128 = n as u128;
    for c in 1..64u64 {
        let mut x = 2u64;
        let mut y = 2u64;
        let mut d = 1u64;
        let f = |v: u64| ((mulmod(v as u128, v as u128, n128) + c as u128) % n128) as u64;
        let mut count = 0u64;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd(x.abs_diff(y) as u128, n128) as u64;
            count += 1;
            if count > 1 << 24 {
                break;
            }
        }
        if d != n && d != 1 {
            return Some(d);
        }
    }
    None
}

/// Full factorization of n >= 1 as sorted (prime, exponent) pairs.
///
/// Trial division handles everything at desk scale; leftovers that fit in
/// 64 bits go through Pollard rho, larger leftovers are only accepted when
/// they are prime or a perfect prime power. Anything else exceeds the budget.
pub fn factorize(n: u128) -> Result<Vec<(u128, u32)>> {
    if n == 0 {
        return Err(Error::Domain {
            msg: "factorize(0)".into(),
        });
    }
    let mut factors: Vec<u128> = Vec::new();
    let mut m = n;
    for p in std::iter::once(2u64).chain((3..=TRIAL_DIVISION_BOUND).step_by(2)) {
        let p = p as u128;
        if p * p > m {
            break;
        }
        while m % p == 0 {
            factors.push(p);
            m /= p;
        }
    }
    let mut stack = Vec::new();
    if m > 1 {
        stack.push(m);
    }
    while let Some(v) = stack.pop() {
        if is_prime(v) {
            factors.push(v);
            continue;
        }
        // perfect prime power?
        let mut split = false;
        for k in 2..=7u32 {
            let r = integer_kth_root(v, k);
            if r > 1 && r.checked_pow(k) == Some(v) {
                for _ in 0..k {
                    stack.push(r);
                }
                split = true;
                break;
            }
        }
        if split {
            continue;
        }
        if v <= u64::MAX as u128 {
            match pollard_brent_u64(v as u64) {
                Some(d) => {
                    stack.push(d as u128);
                    stack.push(v / d as u128);
                }
                None => return Err(Error::FactorBudget { n: v }),
            }
        } else {
            return Err(Error::FactorBudget { n: v });
        }
    }
    factors.sort_unstable();
    let mut out: Vec<(u128, u32)> = Vec::new();
    for p in factors {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    Ok(out)
}

/// omega(n) (number of distinct prime factors) and rad(n) (their product).
pub fn omega_and_radical(n: u128) -> Result<(u32, u128)> {
    let fac = factorize(n)?;
    let omega = fac.len() as u32;
    let radical = fac.iter().map(|&(p, _)| p).product();
    Ok((omega, radical))
}

/// Lambda(n): log p when n = p^k, else 0.
pub fn von_mangoldt(n: u64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    match factorize(n as u128) {
        Ok(fac) if fac.len() == 1 => (fac[0].0 as f64).ln(),
        _ => 0.0,
    }
}

// ---------------------------------------------------------------------------
// Chebyshev functions
// ---------------------------------------------------------------------------

/// (psi(X), theta(X)) by exact summation over a sieve.
pub fn chebyshev_psi_theta(x: f64) -> Result<(f64, f64)> {
    if x < 0.0 || !x.is_finite() {
        return Err(Error::Domain {
            msg: format!("chebyshev_psi_theta({x})"),
        });
    }
    let xi = x.floor() as u64;
    if xi < 2 {
        return Ok((0.0, 0.0));
    }
    let mut theta = KahanSum::new();
    visit_primes(xi, |p| theta.add((p as f64).ln()))?;
    // prime powers p^k <= X with k >= 2 only involve p <= sqrt(X)
    let mut extra = KahanSum::new();
    let root = isqrt_u128(xi as u128) as u64;
    visit_primes(root, |p| {
        let lp = (p as f64).ln();
        let mut pk = p as u128 * p as u128;
        while pk <= xi as u128 {
            extra.add(lp);
            pk *= p as u128;
        }
    })?;
    Ok((theta.value() + extra.value(), theta.value()))
}

// ---------------------------------------------------------------------------
// Kronecker symbol
// ---------------------------------------------------------------------------

/// Jacobi symbol (num / den) for odd den >= 1, num arbitrary nonnegative.
fn jacobi_odd(mut num: u128, mut den: u128) -> i32 {
    debug_assert!(den % 2 == 1);
    if den == 1 {
        return 1;
    }
    num %= den;
    let mut acc = 1i32;
    while num != 0 {
        let z = num.trailing_zeros();
        if z % 2 == 1 {
            let d8 = den % 8;
            if d8 == 3 || d8 == 5 {
                acc = -acc;
            }
        }
        num >>= z;
        if num == 1 {
            return acc;
        }
        if num % 4 == 3 && den % 4 == 3 {
            acc = -acc;
        }
        std::mem::swap(&mut num, &mut den);
        num %= den;
    }
    0
}

/// The full Kronecker symbol (a | n), totally extended: n may be zero,
/// negative, or even. Agrees with the Legendre symbol when n is an odd prime.
pub fn kronecker(a: i128, n: i128) -> i32 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut acc = 1i32;
    if n < 0 && a < 0 {
        acc = -acc;
    }
    let mut n_abs = n.unsigned_abs();
    let z = n_abs.trailing_zeros();
    if z > 0 {
        if a % 2 == 0 {
            return 0;
        }
        if z % 2 == 1 {
            // (a | 2) = +1 for a = +-1 mod 8, -1 for a = +-3 mod 8
            let a8 = a.rem_euclid(8);
            if a8 == 3 || a8 == 5 {
                acc = -acc;
            }
        }
        n_abs >>= z;
    }
    if n_abs == 1 {
        return acc;
    }
    let am = a.rem_euclid(n_abs as i128) as u128;
    acc * jacobi_odd(am, n_abs)
}

// ---------------------------------------------------------------------------
// Exact roots
// ---------------------------------------------------------------------------

/// floor(sqrt(n)), exact.
pub fn isqrt_u128(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = 1u128 << (n.ilog2() / 2 + 1);
    loop {
        let y = (x + n / x) / 2;
        if y >= x {
            break;
        }
        x = y;
    }
    x
}

/// floor(n^(1/k)), exact.
pub fn integer_kth_root(n: u128, k: u32) -> u128 {
    if n == 0 || k == 0 {
        return if k == 0 { 1 } else { 0 };
    }
    if k == 1 {
        return n;
    }
    if k == 2 {
        return isqrt_u128(n);
    }
    if k >= 128 {
        return 1;
    }
    let mut lo = 1u128;
    let mut hi = 1u128 << (n.ilog2() / k + 1);
    while lo < hi {
        let mid = (lo + hi + 1) / 2;
        let fits = mid
            .checked_pow(k)
            .map(|v| v <= n)
            .unwrap_or(false);
        if fits {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    lo
}

/// True iff n >= 0 and n = j^2 for some integer j; no floating rounding.
pub fn is_perfect_square(n: i128) -> bool {
    if n < 0 {
        return false;
    }
    let n = n as u128;
    let r = isqrt_u128(n);
    r * r == n
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division_is_prime(n: u64) -> bool {
        if n < 2 {
            return false;
        }
        let mut d = 2u64;
        while d * d <= n {
            if n % d == 0 {
                return false;
            }
            d += 1;
        }
        true
    }

    #[test]
    fn primality_basics() {
        assert!(is_prime(2));
        assert!(!is_prime(1));
        assert!(!is_prime(0));
        assert!(is_prime(1_000_000_007));
        for n in 0..2000u64 {
            assert_eq!(is_prime(n as u128), trial_division_is_prime(n), "n = {n}");
        }
        // straddling the u64 boundary
        assert!(is_prime((1u128 << 64) + 13)); // 2^64 + 13 is prime
        assert!(!is_prime((1u128 << 64) + 14));
    }

    #[test]
    fn primes_up_to_examples() {
        let t = primes_up_to(10).unwrap();
        assert_eq!(t.primes(), &[2, 3, 5, 7]);
        assert_eq!(t.prime_pi(), 4);
        let t = primes_up_to(1).unwrap();
        assert!(t.primes().is_empty());
        assert_eq!(t.prime_pi(), 0);
        let t = primes_up_to(1_000_000).unwrap();
        assert_eq!(t.prime_pi(), 78_498);
        assert_eq!(t.pi_at(10), 4);
        assert_eq!(t.pi_at(2), 1);
    }

    #[test]
    fn segmented_matches_flat() {
        // force the segmented path by visiting a range above the flat limit
        let mut seg = Vec::new();
        visit_primes_in(FLAT_SIEVE_LIMIT + 1, FLAT_SIEVE_LIMIT + 50_000, |p| seg.push(p)).unwrap();
        for &p in &seg {
            assert!(is_prime(p as u128));
        }
        let mut count = 0u64;
        for n in FLAT_SIEVE_LIMIT + 1..=FLAT_SIEVE_LIMIT + 50_000 {
            if is_prime(n as u128) {
                count += 1;
            }
        }
        assert_eq!(seg.len() as u64, count);
    }

    #[test]
    fn von_mangoldt_examples() {
        assert!((von_mangoldt(8) - 2f64.ln()).abs() < 1e-15);
        assert_eq!(von_mangoldt(6), 0.0);
        assert!((von_mangoldt(9) - 3f64.ln()).abs() < 1e-15);
        assert_eq!(von_mangoldt(1), 0.0);
    }

    #[test]
    fn chebyshev_examples() {
        let (psi, theta) = chebyshev_psi_theta(10.0).unwrap();
        assert!((psi - 7.83201418051).abs() < 1e-9);
        assert!((theta - 5.34710753072).abs() < 1e-9);
        assert!((psi - theta - 2.48490664979).abs() < 1e-9);
        let (psi, theta) = chebyshev_psi_theta(1.0).unwrap();
        assert_eq!((psi, theta), (0.0, 0.0));
        let (psi, theta) = chebyshev_psi_theta(100.0).unwrap();
        assert!((psi - theta - 10.3169208303).abs() < 1e-9);
    }

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker(5, 3), -1);
        assert_eq!(kronecker(7, 1), 1);
        assert_eq!(kronecker(-11, 2), -1);
        assert_eq!(kronecker(12, 4), 0);
        // total extension conventions
        assert_eq!(kronecker(1, 0), 1);
        assert_eq!(kronecker(-1, 0), 1);
        assert_eq!(kronecker(2, 0), 0);
        assert_eq!(kronecker(5, -1), 1);
        assert_eq!(kronecker(-5, -1), -1);
        assert_eq!(kronecker(0, 15), 0);
        assert_eq!(kronecker(0, 1), 1);
        // (-3 | -2) = (-3 | -1) * (-3 | 2) = (-1) * (-1) = 1
        assert_eq!(kronecker(-3, -2), 1);
    }

    #[test]
    fn kronecker_euler_criterion() {
        // against a^((p-1)/2) mod p on odd primes
        let table = primes_up_to(500).unwrap();
        for &p in &table.primes()[1..] {
            for a in -30i128..30 {
                let e = powmod(a.rem_euclid(p as i128) as u128, (p as u128 - 1) / 2, p as u128);
                let euler = if e == 0 {
                    0
                } else if e == 1 {
                    1
                } else {
                    -1
                };
                assert_eq!(kronecker(a, p as i128), euler, "a={a} p={p}");
            }
        }
    }

    #[test]
    fn omega_radical_examples() {
        assert_eq!(omega_and_radical(12).unwrap(), (2, 6));
        assert_eq!(omega_and_radical(1).unwrap(), (0, 1));
        assert_eq!(omega_and_radical(2310).unwrap(), (5, 2310));
        let m = 2310f64;
        assert!(5.0 <= 1.3841 * m.ln() / m.ln().ln());
    }

    #[test]
    fn factorize_large() {
        // square of a 64-bit prime exceeds u64 but is a perfect prime power
        let p = 1_000_000_007u128;
        let fac = factorize(p * p).unwrap();
        assert_eq!(fac, vec![(p, 2)]);
        let fac = factorize(2u128.pow(89) - 1).unwrap(); // Mersenne prime
        assert_eq!(fac, vec![(2u128.pow(89) - 1, 1)]);
        let fac = factorize(600_851_475_143).unwrap();
        assert_eq!(fac.last().unwrap().0, 6857);
    }

    #[test]
    fn perfect_square_examples() {
        assert!(is_perfect_square(49));
        assert!(!is_perfect_square(50));
        assert!(is_perfect_square(0));
        assert!(!is_perfect_square(-4));
        let k = 123_456_789_123u128;
        assert!(is_perfect_square((k * k) as i128));
        assert!(!is_perfect_square((k * k + 1) as i128));
    }

    #[test]
    fn kth_roots() {
        assert_eq!(integer_kth_root(1 << 30, 3), 1 << 10);
        assert_eq!(integer_kth_root((1 << 30) - 1, 3), (1 << 10) - 1);
        assert_eq!(isqrt_u128(u128::MAX), (1 << 64) - 1);
    }

    #[test]
    fn kahan_handles_magnitude_spread() {
        let mut s = KahanSum::new();
        s.add(1e16);
        for _ in 0..10_000 {
            s.add(0.1);
        }
        s.add(-1e16);
        assert!((s.value() - 1000.0).abs() < 1e-9);
    }
}
