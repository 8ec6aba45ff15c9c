use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("configuration error: {0}")]
    Configuration(String),

    #[error("sampler efficiency too low: acceptance rate {rate:e} after {proposals} proposals")]
    Efficiency { rate: f64, proposals: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
