use thiserror::Error;

/// Errors surfaced by samplers, detectors and threshold solvers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid prior: {0}")]
    InvalidPrior(String),

    #[error("invalid noise model: {0}")]
    InvalidNoise(String),

    #[error("no rate function available: {0}")]
    RateFunction(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("eigensolver did not converge after {iterations} iterations (last residual {residual:.3e}, n = {n})")]
    EigenNoConvergence {
        iterations: usize,
        residual: f64,
        n: usize,
    },

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("support enumeration too large: {0}")]
    SupportTooLarge(String),

    #[error("unsupported prior structure: {0}")]
    Unsupported(String),

    #[error("overflow guard: {0}")]
    Overflow(String),

    #[error("malformed container: {0}")]
    Container(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
