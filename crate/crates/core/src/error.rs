//! Error types shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A physical or numerical parameter violates its documented range.
    #[error("invalid parameter `{name}`: {message}")]
    InvalidParameter { name: &'static str, message: String },

    /// A physical-parameter file failed to parse or validate.
    #[error("parameter file error: {0}")]
    ParamFile(String),

    /// Function evaluated outside its domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Malformed input to a numerical primitive.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The requested basis is too large for reliable floating-point work.
    #[error("basis too large: {message}")]
    BasisTooLarge { message: String },

    /// A matrix element came out non-finite.
    #[error("matrix element error: {0}")]
    MatrixElement(String),

    /// Truncation frequency is undefined for a vanishing root.
    #[error("frequency undefined: the beta = 0 truncation root has no associated oscillator frequency unless delta = 0")]
    FrequencyUndefined,

    /// A result contradicts an exact property the solver relies on.
    #[error("internal consistency error: {0}")]
    InternalConsistency(String),

    /// An iterative routine failed to reach its accuracy target.
    #[error("numerical error: {0}")]
    Numerical(String),

    /// Adaptive quadrature could not reach the requested accuracy.
    #[error("quadrature accuracy error: {0}")]
    Accuracy(String),
}
