//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A model or query parameter is outside its admissible range.
    /// The message names the violated range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Two fields that must share a grid do not.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// A data generator constraint was violated.
    #[error("generator constraint violated: {0}")]
    Generator(String),

    /// Adaptive quadrature stopped before reaching the requested tolerance.
    #[error("quadrature did not converge: achieved {achieved:.3e}, requested {requested:.3e}")]
    QuadratureNoConverge { achieved: f64, requested: f64 },

    /// Slope fitting could not be performed on the given samples.
    #[error("fit error: {0}")]
    Fit(String),

    /// A field contains non-finite samples or a malformed byte layout.
    #[error("malformed field data: {0}")]
    MalformedField(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
