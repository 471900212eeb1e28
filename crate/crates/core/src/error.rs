//! Error type shared by every module of the crate.

use num_complex::Complex64;
use thiserror::Error;

/// Failure modes of the numerical operations.
#[derive(Debug, Error)]
pub enum Error {
    /// Arguments outside the documented domain of an operation.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Evaluation at a pole of a symbol (ε = 0 only).
    #[error("singularity: {0}")]
    Singularity(String),

    /// An iterative or adaptive procedure did not reach its tolerance.
    #[error("accuracy: {message} (last estimate {last}, previous {previous})")]
    Accuracy {
        message: String,
        last: Complex64,
        previous: Complex64,
    },

    /// Malformed HLZF payload.
    #[error("format: {0}")]
    Format(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
