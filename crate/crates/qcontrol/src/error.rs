//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Incompatible matrix or vector dimensions.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// Input failed a structural validation (skew-Hermitian, unitary, density).
    #[error("validation failed: {0}")]
    Validation(String),

    /// A parameter is outside its admissible range.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// A precondition on the call was violated (e.g. empty input list).
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The input is too ill-conditioned to produce a trustworthy integer answer.
    #[error("ill-conditioned input: {0}")]
    Conditioning(String),
}

pub type Result<T> = std::result::Result<T, Error>;
