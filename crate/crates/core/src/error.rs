use thiserror::Error;

/// Errors raised by the numerical kernels and the state machinery.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GncsError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("convergence error: {0}")]
    Convergence(String),
    #[error("size error: {0}")]
    Size(String),
    #[error("divergence error: {0}")]
    Divergence(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("range error: {0}")]
    Range(String),
    #[error("precision error: {0}")]
    Precision(String),
    #[error("undefined statistics: {0}")]
    UndefinedStatistics(String),
    #[error("degenerate denominator: {0}")]
    DegenerateDenominator(String),
}

pub type Result<T> = std::result::Result<T, GncsError>;
