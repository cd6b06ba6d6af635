use thiserror::Error;

/// Errors raised anywhere in the speed-limit pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QslError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("dimension {dim} exceeds the supported cap of {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("operator is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("eigendecomposition failed: {0}")]
    Eigen(String),

    #[error("degenerate variance: {quantity} = {value:e}")]
    DegenerateVariance { quantity: &'static str, value: f64 },

    #[error("state is not orthogonal to the evolved state (residual {0:e})")]
    NotOrthogonal(f64),

    #[error("stationary state: energy spread {0:e}")]
    Stationary(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("{degenerate} of {total} quadrature nodes are degenerate (limit is 5%)")]
    TooManyDegenerate { degenerate: usize, total: usize },

    #[error("no finite one-sided limit of R(t) near t = {0}")]
    NoLimit(f64),

    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),

    #[error("non-finite objective at theta = {theta}, phi = {phi}")]
    NonFiniteObjective { theta: f64, phi: f64 },
}

pub type Result<T> = std::result::Result<T, QslError>;

pub(crate) fn invalid(msg: impl Into<String>) -> QslError {
    QslError::InvalidParameter(msg.into())
}
