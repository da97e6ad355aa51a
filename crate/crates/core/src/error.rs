use thiserror::Error;

/// Errors produced by the numerical and simulation layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("series did not converge after {terms} terms (last relative term {last_rel:e})")]
    NonConvergence { terms: usize, last_rel: f64 },

    #[error("csc pole: (2+epsilon)/alpha = {ratio} is an integer")]
    PoleError { ratio: f64 },

    #[error("outside closed-form domain: {0}")]
    DomainError(String),

    #[error("no sign change of the fixed-point residual below beta = {upper:e}")]
    BracketFailure { upper: f64 },

    /// With zero noise and at most one interferer per antenna the receiver
    /// can null all interference, so the normalized SINR is unbounded.
    #[error("fixed point has no finite root (sigma2 = 0 and c = {c} <= 1)")]
    NoFiniteRoot { c: f64 },

    #[error("quadrature error estimate {estimate:e} exceeds target {target:e}")]
    QuadratureFailure { estimate: f64, target: f64 },

    #[error("node {index} has zero radius")]
    ZeroRadiusNode { index: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not positive definite (pivot {pivot} = {value:e})")]
    FactorizationFailure { pivot: usize, value: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
