use thiserror::Error;

/// Errors raised by the numerical kernels and builders.
#[derive(Debug, Error)]
pub enum Error {
    #[error("precision {0} bits is below the 53-bit minimum")]
    PrecisionTooLow(u32),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("coefficient stream exhausted: needed {needed}, got {available}")]
    StreamExhausted { needed: usize, available: usize },

    #[error("coefficient index {index} is beyond the built blocks ({available} coefficients available)")]
    BeyondBuiltBlocks { index: usize, available: usize },

    #[error("ill-conditioned fit at degree {degree}: {detail}; raise the precision or lower the degree")]
    IllConditioned { degree: usize, detail: String },

    #[error("branch resolution failed near the arc endpoints (|w + sqrt(w^2-1)| within {0:e} of 1)")]
    BranchTie(f64),

    #[error("schedule error: {0}")]
    Schedule(String),

    #[error("certificate violation at step {step}: {detail}")]
    Certificate { step: usize, detail: String },

    #[error("artifact format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
