use thiserror::Error;

/// Every failure the library can report.
///
/// Precondition failures (bad index, bad modulus, unmet hypothesis) are kept
/// apart from [`Error::InvariantViolation`], which means a guaranteed identity
/// was observed to fail.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid recurrence: {0}")]
    InvalidRecurrence(String),

    #[error("index {0} is outside the sequence domain (indices start at 1)")]
    IndexOutOfDomain(u64),

    #[error("modulus must be at least 1")]
    InvalidModulus,

    #[error("modulus {0} exceeds the supported bound 2^31 - 1")]
    ModulusTooLarge(u64),

    #[error("state orbit exceeded the cap of {cap} visited states")]
    StateCapExceeded { cap: u64 },

    #[error("shift {ell} must exceed k - 1 = {}", .order - 1)]
    InvalidShift { ell: u64, order: usize },

    #[error("order {order} is too small; at least {min} is required")]
    OrderTooSmall { order: usize, min: usize },

    #[error("gcd(h, j) = gcd({h}, {j}) is not 1")]
    CoprimalityViolation { h: u64, j: u64 },

    #[error("t = g*h - i = {g}*{h} - {i} is not positive")]
    NonpositiveShift { g: u64, h: u64, i: u64 },

    #[error("q = {0} must be odd")]
    EvenFamilyParameter(u64),

    #[error("5q + 2 = {0} is not prime")]
    NonPrimeModulus(u64),

    #[error("index {index} is outside [{min}, {max}]")]
    Range { index: u64, min: u64, max: u64 },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),

    #[error("at least one value is required")]
    EmptyInput,

    #[error("{ell} is not a period modulo {modulus}")]
    InvalidPeriod { ell: u64, modulus: u32 },

    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
