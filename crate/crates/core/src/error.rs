use thiserror::Error;

/// Coarse classification of failures, used by front ends to pick exit codes
/// and by the test suites to distinguish "bad input" from "math went wrong".
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed or out-of-domain input.
    InvalidInput,
    /// A mathematical assertion failed: a bound was violated, an identity
    /// broke, or a table that must regenerate exactly did not.
    Verification,
    /// A configured memory or search budget was exceeded.
    Resource,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("sieve limit {requested} exceeds the configured budget {budget}")]
    SieveBudget { requested: u64, budget: u64 },

    #[error("factorization budget exceeded for {n} (composite leftover too large)")]
    FactorBudget { n: u128 },

    #[error("invalid curve: {reason}")]
    InvalidCurve { reason: String },

    #[error("p = {p} exceeds the cutoff {limit} for {method} point counting")]
    CountRange {
        p: u64,
        limit: u64,
        method: &'static str,
    },

    #[error("group order ambiguous for curve ({p}, {a}, {b}) after {rounds} sampling rounds")]
    AmbiguousOrder { p: u64, a: u64, b: u64, rounds: u32 },

    #[error("enumerating all {traces} traces for q = {q} exceeds the enumeration budget")]
    EnumerationBudget { q: u128, traces: u128 },

    #[error("{q} is not a prime power")]
    NotPrimePower { q: u128 },

    #[error("q = {q} is too large (supported range keeps |t^2 - 4q| below 2^126)")]
    QTooLarge { q: u128 },

    #[error("Hasse bound violated: t^2 = {t}^2 > 4q = 4*{q}")]
    HasseViolation { q: u128, t: i128 },

    #[error("degenerate discriminant for (q, t) = ({q}, {t}): {reason}")]
    DegenerateDiscriminant { q: u128, t: i128, reason: String },

    #[error("{l} is not prime")]
    NotPrime { l: u64 },

    #[error("no Elkies prime <= {cutoff} for (q, t) = ({q}, {t}); counterexample candidate")]
    NoElkiesPrime { q: u128, t: i128, cutoff: u64 },

    #[error(
        "counting identity violated for (q, t, X) = ({q}, {t}, {x}): \
         2*N_E = {lhs_doubled} but 2*rhs_exact = {rhs_doubled}"
    )]
    IdentityViolation {
        q: u128,
        t: i128,
        x: u64,
        lhs_doubled: i128,
        rhs_doubled: i128,
    },

    #[error("inequality chain violated at q = {q}: {detail}")]
    ChainViolation { q: u128, detail: String },

    #[error("discriminant audit failed: {} D value(s) with least split prime >= cutoff, first: D = {}", .violations.len(), .violations[0].0)]
    DiscAuditFailure { violations: Vec<(i64, u64)> },

    #[error("zero file line {line}: {msg}")]
    ZeroParse { line: usize, msg: String },

    #[error("zero file line {line}: ordinates must be strictly increasing and positive")]
    ZeroOrder { line: usize },

    #[error("domain error: {msg}")]
    Domain { msg: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::SieveBudget { .. }
            | Error::FactorBudget { .. }
            | Error::QTooLarge { .. }
            | Error::CountRange { .. }
            | Error::AmbiguousOrder { .. }
            | Error::EnumerationBudget { .. } => ErrorKind::Resource,

            Error::NoElkiesPrime { .. }
            | Error::IdentityViolation { .. }
            | Error::ChainViolation { .. }
            | Error::DiscAuditFailure { .. } => ErrorKind::Verification,

            Error::InvalidCurve { .. }
            | Error::NotPrimePower { .. }
            | Error::HasseViolation { .. }
            | Error::DegenerateDiscriminant { .. }
            | Error::NotPrime { .. }
            | Error::ZeroParse { .. }
            | Error::ZeroOrder { .. }
            | Error::Domain { .. }
            | Error::Io(_) => ErrorKind::InvalidInput,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
