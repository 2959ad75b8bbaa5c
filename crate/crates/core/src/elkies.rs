//! The Kronecker character attached to a Frobenius context, Elkies/Atkin
//! prime classification, the least Elkies prime, counting up to X with the
//! exact correction terms, deviation diagnostics, and the two audits: the
//! small-discriminant scan and the least-Elkies-prime bound scan.

use std::sync::OnceLock;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{self, kronecker, PrimeTable};
use crate::curve::{enumerate_traces, frobenius_context, FrobeniusContext};
use crate::error::{Error, Result};

/// chi_E mod m = |D| together with the fundamental discriminant D0, the
/// square part f (D = D0 f^2), and the conductor |D0| of the inducing
/// primitive character.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CharacterSpec {
    pub d: i128,
    pub m: u128,
    pub d0: i128,
    pub f: u128,
    pub conductor: u128,
}

impl CharacterSpec {
    /// chi_E(n) = (D | n), the character of modulus m.
    pub fn chi_e(&self, n: i128) -> i32 {
        kronecker(self.d, n)
    }

    /// The inducing primitive character (D0 | n) of modulus |D0|.
    pub fn chi_primitive(&self, n: i128) -> i32 {
        kronecker(self.d0, n)
    }

    /// chi(-1) = -1 here since D < 0.
    pub fn parity_odd(&self) -> bool {
        kronecker(self.d0, -1) == -1
    }
}

/// Splits D = D0 f^2 with D0 fundamental, by exact factorization of |D|.
pub fn character_spec(ctx: &FrobeniusContext) -> Result<CharacterSpec> {
    let m = ctx.m();
    let fac = arith::factorize(m)?;
    let mut kernel: u128 = 1; // squarefree part of m
    let mut g: u128 = 1; // sqrt(m / kernel)
    for &(p, e) in &fac {
        if e % 2 == 1 {
            kernel *= p;
        }
        for _ in 0..e / 2 {
            g *= p;
        }
    }
    let squarefree = -(kernel as i128);
    let (d0, f) = if squarefree.rem_euclid(4) == 1 {
        (squarefree, g)
    } else {
        // D = 0, 1 mod 4 forces g even here, so f = g / 2 is exact
        (4 * squarefree, g / 2)
    };
    debug_assert_eq!(d0 * (f * f) as i128, ctx.d());
    Ok(CharacterSpec {
        d: ctx.d(),
        m,
        d0,
        f,
        conductor: d0.unsigned_abs(),
    })
}

/// Classification of a prime relative to a Frobenius context.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PrimeClass {
    /// chi_E(l) = 1 and l != p: the Frobenius polynomial splits mod l.
    Elkies,
    /// chi_E(l) = -1.
    AtkinInert,
    /// chi_E(l) = 0 with l != p (l divides the discriminant).
    AtkinRamified,
    /// l equals the field characteristic and is excluded outright.
    ExcludedChar,
}

pub fn classify_prime(ctx: &FrobeniusContext, l: u64) -> Result<PrimeClass> {
    if !arith::is_prime(l as u128) {
        return Err(Error::NotPrime { l });
    }
    Ok(classify_prime_unchecked(ctx, l))
}

#[inline]
fn classify_prime_unchecked(ctx: &FrobeniusContext, l: u64) -> PrimeClass {
    if l as u128 == ctx.char() {
        return PrimeClass::ExcludedChar;
    }
    match ctx.chi(l as i128) {
        1 => PrimeClass::Elkies,
        -1 => PrimeClass::AtkinInert,
        _ => PrimeClass::AtkinRamified,
    }
}

static SMALL_PRIMES: OnceLock<Vec<u64>> = OnceLock::new();

fn small_primes() -> &'static [u64] {
    SMALL_PRIMES
        .get_or_init(|| {
            arith::primes_up_to(1 << 16)
                .expect("small sieve fits every budget")
                .primes()
                .to_vec()
        })
        .as_slice()
}

/// The bound (2 log 4q + 4)^2 rounded up, the default search cutoff.
pub fn theorem1_cutoff(q: u128) -> u64 {
    let l = (4.0 * q as f64).ln();
    (2.0 * l + 4.0).powi(2).ceil() as u64
}

/// Smallest prime l <= cutoff with chi_E(l) = 1 and l != p.
pub fn least_elkies_prime(ctx: &FrobeniusContext, cutoff: u64) -> Result<u64> {
    if cutoff < 2 {
        return Err(Error::Domain {
            msg: format!("least_elkies_prime cutoff {cutoff} < 2"),
        });
    }
    for &l in small_primes() {
        if l > cutoff {
            break;
        }
        if l as u128 != ctx.char() && ctx.chi(l as i128) == 1 {
            return Ok(l);
        }
    }
    if cutoff > 1 << 16 {
        let mut found = None;
        arith::visit_primes_in((1 << 16) + 1, cutoff, |l| {
            if found.is_none() && l as u128 != ctx.char() && ctx.chi(l as i128) == 1 {
                found = Some(l);
            }
        })?;
        if let Some(l) = found {
            return Ok(l);
        }
    }
    Err(Error::NoElkiesPrime {
        q: ctx.q(),
        t: ctx.t(),
        cutoff,
    })
}

/// Exact classification counts over all primes l <= X.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ElkiesCounts {
    #[serde(rename = "N_E")]
    pub n_e: u64,
    pub atkin_inert: u64,
    pub atkin_ramified: u64,
    pub excluded: u64,
}

pub fn count_elkies_with(ctx: &FrobeniusContext, x: u64, table: &PrimeTable) -> ElkiesCounts {
    let mut counts = ElkiesCounts {
        n_e: 0,
        atkin_inert: 0,
        atkin_ramified: 0,
        excluded: 0,
    };
    for &l in table.primes() {
        if l > x {
            break;
        }
        match classify_prime_unchecked(ctx, l) {
            PrimeClass::Elkies => counts.n_e += 1,
            PrimeClass::AtkinInert => counts.atkin_inert += 1,
            PrimeClass::AtkinRamified => counts.atkin_ramified += 1,
            PrimeClass::ExcludedChar => counts.excluded += 1,
        }
    }
    counts
}

pub fn count_elkies(ctx: &FrobeniusContext, x: u64) -> Result<ElkiesCounts> {
    if x < 2 {
        return Err(Error::Domain {
            msg: format!("count_elkies X = {x} < 2"),
        });
    }
    let table = PrimeTable::up_to(x)?;
    Ok(count_elkies_with(ctx, x, &table))
}

/// The correction term of the counting identity: 0 when p > X, 1/2 when
/// p <= X and p | t, else 1.
pub fn a_e(ctx: &FrobeniusContext, x: u64) -> f64 {
    if ctx.char() > x as u128 {
        0.0
    } else if ctx.supersingular() {
        0.5
    } else {
        1.0
    }
}

/// Both sides of the counting identity. `rhs_paper` is
/// pi(X)/2 + (1/2) sum chi_E(l) - a_E(X); `rhs_exact` subtracts an extra 1/2
/// per ramified prime l | D, l != p, l <= X, and matches N_E(X) exactly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub lhs: u64,
    pub rhs_exact: f64,
    pub rhs_paper: f64,
    pub ramified_count: u64,
    pub sum_chi: i64,
    pub a_e: f64,
    pub pi: u64,
}

pub fn counting_identity_check(ctx: &FrobeniusContext, x: u64) -> Result<IdentityCheck> {
    if x < 2 {
        return Err(Error::Domain {
            msg: format!("counting_identity_check X = {x} < 2"),
        });
    }
    let table = PrimeTable::up_to(x)?;
    counting_identity_check_with(ctx, x, &table)
}

pub fn counting_identity_check_with(
    ctx: &FrobeniusContext,
    x: u64,
    table: &PrimeTable,
) -> Result<IdentityCheck> {
    let mut counts = ElkiesCounts {
        n_e: 0,
        atkin_inert: 0,
        atkin_ramified: 0,
        excluded: 0,
    };
    let mut sum_chi: i64 = 0;
    for &l in table.primes() {
        if l > x {
            break;
        }
        sum_chi += ctx.chi(l as i128) as i64;
        match classify_prime_unchecked(ctx, l) {
            PrimeClass::Elkies => counts.n_e += 1,
            PrimeClass::AtkinInert => counts.atkin_inert += 1,
            PrimeClass::AtkinRamified => counts.atkin_ramified += 1,
            PrimeClass::ExcludedChar => counts.excluded += 1,
        }
    }
    let pi = table.pi_at(x) as u64;
    let a = a_e(ctx, x);
    let ramified = counts.atkin_ramified;

    // doubled integer arithmetic keeps the check exact
    let lhs2 = 2 * counts.n_e as i128;
    let rhs_paper2 = pi as i128 + sum_chi as i128 - (2.0 * a) as i128;
    let rhs_exact2 = rhs_paper2 - ramified as i128;
    if lhs2 != rhs_exact2 {
        return Err(Error::IdentityViolation {
            q: ctx.q(),
            t: ctx.t(),
            x,
            lhs_doubled: lhs2,
            rhs_doubled: rhs_exact2,
        });
    }
    Ok(IdentityCheck {
        lhs: counts.n_e,
        rhs_exact: rhs_exact2 as f64 / 2.0,
        rhs_paper: rhs_paper2 as f64 / 2.0,
        ramified_count: ramified,
        sum_chi,
        a_e: a,
        pi,
    })
}

/// |N_E(X) - pi(X)/2| against the error-term shape sqrt(X) (log qX)^2 / log X.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeviationReport {
    pub delta: f64,
    pub bound: f64,
    pub ratio: f64,
}

fn deviation_from(n_e: u64, pi: u64, q: u128, x: u64) -> DeviationReport {
    let delta = (n_e as f64 - pi as f64 / 2.0).abs();
    let xf = x as f64;
    let bound = xf.sqrt() * (q as f64 * xf).ln().powi(2) / xf.ln();
    DeviationReport {
        delta,
        bound,
        ratio: delta / bound,
    }
}

pub fn deviation_report(ctx: &FrobeniusContext, x: u64) -> Result<DeviationReport> {
    if x < 3 {
        return Err(Error::Domain {
            msg: format!("deviation_report X = {x} < 3"),
        });
    }
    let table = PrimeTable::up_to(x)?;
    let counts = count_elkies_with(ctx, x, &table);
    Ok(deviation_from(counts.n_e, table.pi_at(x) as u64, ctx.q(), x))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeviationPoint {
    pub x: u64,
    #[serde(rename = "N_E")]
    pub n_e: u64,
    pub pi: u64,
    pub delta: f64,
    pub bound: f64,
    pub ratio: f64,
}

/// Single-pass deviation diagnostics at each checkpoint (sorted, >= 3).
pub fn deviation_sweep(
    ctx: &FrobeniusContext,
    checkpoints: &[u64],
    table: &PrimeTable,
) -> Result<Vec<DeviationPoint>> {
    let mut points = Vec::with_capacity(checkpoints.len());
    let mut n_e = 0u64;
    let mut pi = 0u64;
    let mut iter = table.primes().iter().copied().peekable();
    for &x in checkpoints {
        if x < 3 || x > table.limit() {
            return Err(Error::Domain {
                msg: format!("sweep checkpoint {x} out of range"),
            });
        }
        while let Some(&l) = iter.peek() {
            if l > x {
                break;
            }
            iter.next();
            pi += 1;
            if classify_prime_unchecked(ctx, l) == PrimeClass::Elkies {
                n_e += 1;
            }
        }
        let dev = deviation_from(n_e, pi, ctx.q(), x);
        points.push(DeviationPoint {
            x,
            n_e,
            pi,
            delta: dev.delta,
            bound: dev.bound,
            ratio: dev.ratio,
        });
    }
    Ok(points)
}

// ---------------------------------------------------------------------------
// Small-discriminant audit
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DiscAuditRow {
    pub d: i64,
    pub least: u64,
    pub second: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiscAuditReport {
    pub limit: u64,
    pub cutoff: u64,
    pub discriminants: u64,
    pub max_least: u64,
    pub max_least_at: i64,
    pub max_second: u64,
    pub max_second_at: i64,
    pub rows: Vec<DiscAuditRow>,
}

/// For every discriminant D = 0, 1 mod 4 with -limit < D <= -3, finds the two
/// smallest primes split under (D | .) and checks the least stays below the
/// cutoff. The second-smallest certifies the claim even if one prime were
/// excluded as the field characteristic.
pub fn small_disc_audit(limit: u64, cutoff: u64) -> Result<DiscAuditReport> {
    if limit < 4 {
        return Err(Error::Domain {
            msg: format!("small_disc_audit limit {limit} < 4"),
        });
    }
    let mut rows = Vec::new();
    let mut violations = Vec::new();
    for m in 3..limit {
        if m % 4 != 0 && m % 4 != 3 {
            continue; // D = -m must be 0 or 1 mod 4
        }
        let d = -(m as i128);
        let mut least = 0u64;
        let mut second = 0u64;
        for &l in small_primes() {
            if kronecker(d, l as i128) == 1 {
                if least == 0 {
                    least = l;
                } else {
                    second = l;
                    break;
                }
            }
        }
        debug_assert!(second != 0, "split primes exist well below 2^16");
        rows.push(DiscAuditRow {
            d: d as i64,
            least,
            second,
        });
        if least >= cutoff {
            violations.push((d as i64, least));
        }
    }
    if !violations.is_empty() {
        return Err(Error::DiscAuditFailure { violations });
    }
    let best_least = rows.iter().max_by_key(|r| r.least).expect("rows nonempty");
    let best_second = rows.iter().max_by_key(|r| r.second).expect("rows nonempty");
    Ok(DiscAuditReport {
        limit,
        cutoff,
        discriminants: rows.len() as u64,
        max_least: best_least.least,
        max_least_at: best_least.d,
        max_second: best_second.second,
        max_second_at: best_second.d,
        rows,
    })
}

// ---------------------------------------------------------------------------
// Least-Elkies-prime bound scan
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ScanRow {
    pub q: u128,
    pub traces: u64,
    pub bound_cutoff: u64,
    pub max_least: u64,
    pub argmax_t: i128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundScanReport {
    pub q_min: u128,
    pub q_max: u128,
    pub seed: u64,
    pub sample: Option<u64>,
    pub t_sample: Option<u64>,
    pub prime_powers_scanned: u64,
    pub contexts_checked: u64,
    pub max_least: u64,
    pub max_least_q: u128,
    pub max_least_t: i128,
    pub rows: Vec<ScanRow>,
}

/// Every prime power in [lo, hi], in increasing order.
fn prime_powers_in(lo: u128, hi: u128) -> Result<Vec<u128>> {
    if hi < lo {
        return Ok(Vec::new());
    }
    if hi > u64::MAX as u128 {
        return Err(Error::EnumerationBudget {
            q: hi,
            traces: 0,
        });
    }
    let (lo64, hi64) = (lo as u64, hi as u64);
    let mut out: Vec<u128> = Vec::new();
    arith::visit_primes_in(lo64, hi64, |p| out.push(p as u128))?;
    // prime powers p^k, k >= 2
    for k in 2..=hi64.ilog2() {
        let r_hi = arith::integer_kth_root(hi as u128, k) as u64;
        for p in 2..=r_hi {
            let v = (p as u128).pow(k);
            if v >= lo && v <= hi && arith::is_prime(p as u128) {
                out.push(v);
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Seeded sample of `n` distinct prime powers in [lo, hi] (sorted).
fn sample_prime_powers(lo: u128, hi: u128, n: u64, seed: u64) -> Result<Vec<u128>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut found = std::collections::BTreeSet::new();
    let mut attempts = 0u64;
    let budget = n.saturating_mul(4096).max(1 << 16);
    while (found.len() as u64) < n && attempts < budget {
        attempts += 1;
        let draw = rng.gen_range(lo..=hi);
        // probe upward for the first prime power at or after the draw
        let mut v = draw;
        while v <= hi {
            if crate::curve::prime_power_decompose(v).is_ok() {
                found.insert(v);
                break;
            }
            v += 1;
            attempts += 1;
            if attempts >= budget {
                break;
            }
        }
    }
    Ok(found.into_iter().collect())
}

/// Scans prime powers q in [q_min, q_max] and admissible traces, verifying a
/// least Elkies prime exists below (2 log 4q + 4)^2 for every context.
///
/// A context with no Elkies prime below the cutoff aborts the scan with a
/// counterexample error; it is never swallowed.
pub fn verify_least_elkies_bound(
    q_min: u128,
    q_max: u128,
    sample: Option<u64>,
    t_sample: Option<u64>,
    seed: u64,
) -> Result<BoundScanReport> {
    if q_min < 5 {
        return Err(Error::Domain {
            msg: format!("scan q_min {q_min} < 5"),
        });
    }
    let qs: Vec<u128> = match sample {
        Some(n) => sample_prime_powers(q_min, q_max, n, seed)?,
        None => prime_powers_in(q_min, q_max)?,
    };

    let rows: Vec<ScanRow> = qs
        .par_iter()
        .map(|&q| -> Result<ScanRow> {
            let cutoff = theorem1_cutoff(q);
            let contexts = contexts_for_scan(q, t_sample, seed)?;
            let mut max_least = 0u64;
            let mut argmax_t = 0i128;
            for ctx in &contexts {
                let least = least_elkies_prime(ctx, cutoff)?;
                if least > max_least {
                    max_least = least;
                    argmax_t = ctx.t();
                }
            }
            Ok(ScanRow {
                q,
                traces: contexts.len() as u64,
                bound_cutoff: cutoff,
                max_least,
                argmax_t,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut report = BoundScanReport {
        q_min,
        q_max,
        seed,
        sample,
        t_sample,
        prime_powers_scanned: rows.len() as u64,
        contexts_checked: rows.iter().map(|r| r.traces).sum(),
        max_least: 0,
        max_least_q: 0,
        max_least_t: 0,
        rows,
    };
    for row in &report.rows {
        if row.max_least > report.max_least {
            report.max_least = row.max_least;
            report.max_least_q = row.q;
            report.max_least_t = row.argmax_t;
        }
    }
    Ok(report)
}

fn contexts_for_scan(
    q: u128,
    t_sample: Option<u64>,
    seed: u64,
) -> Result<Vec<FrobeniusContext>> {
    match t_sample {
        None => enumerate_traces(q),
        Some(n) => {
            let bound = arith::isqrt_u128(4 * q) as i128;
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (q as u64).rotate_left(23));
            let mut ts = std::collections::BTreeSet::new();
            let mut attempts = 0u64;
            while (ts.len() as u64) < n && attempts < n * 64 {
                attempts += 1;
                let t = rng.gen_range(-bound..=bound);
                if frobenius_context(q, t).is_ok() {
                    ts.insert(t);
                }
            }
            ts.iter().map(|&t| frobenius_context(q, t)).collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(q: u128, t: i128) -> FrobeniusContext {
        frobenius_context(q, t).unwrap()
    }

    #[test]
    fn character_spec_examples() {
        let spec = character_spec(&ctx(5, -3)).unwrap(); // D = -11
        assert_eq!((spec.d0, spec.f, spec.conductor), (-11, 1, 11));

        let spec = character_spec(&ctx(11, 0)).unwrap(); // D = -44
        assert_eq!((spec.d0, spec.f), (-11, 2));

        let spec = character_spec(&ctx(2, 2)).unwrap(); // D = -4
        assert_eq!((spec.d0, spec.f), (-4, 1));
        assert!(spec.parity_odd());
    }

    #[test]
    fn classify_examples() {
        let c = ctx(7, 3); // D = -19
        assert_eq!(classify_prime(&c, 5).unwrap(), PrimeClass::Elkies);
        assert_eq!(classify_prime(&c, 19).unwrap(), PrimeClass::AtkinRamified);
        assert_eq!(classify_prime(&c, 7).unwrap(), PrimeClass::ExcludedChar);
        assert!(matches!(
            classify_prime(&c, 6),
            Err(Error::NotPrime { l: 6 })
        ));

        let c = ctx(5, -3); // D = -11
        assert_eq!(classify_prime(&c, 2).unwrap(), PrimeClass::AtkinInert);
    }

    #[test]
    fn least_examples() {
        assert_eq!(least_elkies_prime(&ctx(7, 3), 100).unwrap(), 5);
        assert_eq!(least_elkies_prime(&ctx(5, -3), 100).unwrap(), 3);
        // D = -3: the smallest split prime 7 is the characteristic, so 13
        assert_eq!(least_elkies_prime(&ctx(7, 5), 100).unwrap(), 13);
        assert!(matches!(
            least_elkies_prime(&ctx(5, -3), 2),
            Err(Error::NoElkiesPrime { cutoff: 2, .. })
        ));
    }

    #[test]
    fn count_examples() {
        let counts = count_elkies(&ctx(5, -3), 10).unwrap();
        assert_eq!(
            (counts.n_e, counts.atkin_inert, counts.atkin_ramified, counts.excluded),
            (1, 2, 0, 1)
        );

        let counts = count_elkies(&ctx(25, 5), 10).unwrap();
        assert_eq!(
            (counts.n_e, counts.atkin_inert, counts.atkin_ramified, counts.excluded),
            (1, 1, 1, 1)
        );
    }

    #[test]
    fn a_e_examples() {
        assert_eq!(a_e(&ctx(5, -3), 10), 1.0);
        assert_eq!(a_e(&ctx(5, -3), 3), 0.0);
        assert_eq!(a_e(&ctx(25, 5), 10), 0.5);
    }

    #[test]
    fn identity_examples() {
        let r = counting_identity_check(&ctx(5, -3), 10).unwrap();
        assert_eq!(r.lhs, 1);
        assert_eq!(r.rhs_paper, 1.0);
        assert_eq!(r.rhs_exact, 1.0);
        assert_eq!(r.ramified_count, 0);

        let r = counting_identity_check(&ctx(25, 5), 10).unwrap();
        assert_eq!(r.lhs, 1);
        assert_eq!(r.rhs_paper, 1.5);
        assert_eq!(r.rhs_exact, 1.0);
        assert_eq!(r.ramified_count, 1);

        // m > X and p > X: both correction terms vanish
        let c = ctx(101, 1); // D = -403, p = 101
        let r = counting_identity_check(&c, 10).unwrap();
        assert_eq!(r.rhs_paper, r.rhs_exact);
        assert_eq!(r.a_e, 0.0);
    }

    #[test]
    fn deviation_example() {
        let r = deviation_report(&ctx(5, -3), 10).unwrap();
        assert_eq!(r.delta, 1.0);
        assert!((r.bound - 21.017793049017).abs() < 1e-9);
        assert!((r.ratio - 0.0475787347257552).abs() < 1e-9);
    }

    #[test]
    fn disc_audit_small() {
        let report = small_disc_audit(16, 40).unwrap();
        // D = -3, -4, -7, -8, -11, -12, -15
        assert_eq!(report.discriminants, 7);
        let d3 = report.rows.iter().find(|r| r.d == -3).unwrap();
        assert_eq!(d3.least, 7);
        assert_eq!(d3.second, 13);
        let d4 = report.rows.iter().find(|r| r.d == -4).unwrap();
        assert_eq!(d4.least, 5);
        assert_eq!(d4.second, 13);
    }

    #[test]
    fn disc_audit_cutoff_violation() {
        // a cutoff of 3 cannot hold: D = -3 has least split prime 7
        assert!(matches!(
            small_disc_audit(16, 3),
            Err(Error::DiscAuditFailure { .. })
        ));
    }

    #[test]
    fn scan_small_range() {
        let report = verify_least_elkies_bound(5, 30, None, None, 1).unwrap();
        // prime powers in [5, 30]: 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29
        assert_eq!(report.prime_powers_scanned, 13);
        assert!(report.contexts_checked > 0);
        assert!(report.max_least >= 2);
        // q = 5, t = -3 has least 3 <= ceil((2 log 20 + 4)^2) = 100
        assert!(theorem1_cutoff(5) == 100);
    }

    #[test]
    fn scan_empty_range() {
        // 90..96 contains no prime power
        let report = verify_least_elkies_bound(90, 96, None, None, 1).unwrap();
        assert_eq!(report.prime_powers_scanned, 0);
        assert_eq!(report.contexts_checked, 0);
        assert_eq!(report.max_least, 0);
    }

    #[test]
    fn scan_is_seed_deterministic() {
        let a = verify_least_elkies_bound(1000, 4000, Some(5), Some(20), 42).unwrap();
        let b = verify_least_elkies_bound(1000, 4000, Some(5), Some(20), 42).unwrap();
        assert_eq!(a, b);
        let c = verify_least_elkies_bound(1000, 4000, Some(5), Some(20), 43).unwrap();
        assert!(c.rows.len() == 5);
        assert_eq!(a.rows.len(), 5);
    }
}
