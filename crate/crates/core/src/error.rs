use thiserror::Error;

/// Errors raised by the arithmetic, series and interpolation layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("invalid precision {0}: must be at least 1")]
    InvalidPrecision(u32),

    #[error("precision underflow: {0}")]
    PrecisionUnderflow(String),

    #[error("valuation error: {0}")]
    ValuationError(String),

    #[error("degree cap {cap} exceeded by a nonzero coefficient in degree {degree}")]
    DegreeCapExceeded { cap: u32, degree: u32 },

    #[error("certificate violation at m = {m}: {detail}")]
    CertificateViolation { m: usize, detail: String },

    #[error("hypothesis not satisfied: contraction {c} is not above 1/({p}-1)")]
    HypothesisFailed { p: u64, c: String },

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("reduction mod p is not linear: {0}")]
    NotLinearModP(String),

    #[error("linear part is not invertible mod p")]
    NotInvertible,

    #[error("context mismatch: {0}")]
    ContextMismatch(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
