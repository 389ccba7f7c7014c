use thiserror::Error;

/// Errors surfaced by category and numerics operations.
#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the mathematical domain of the operation (e.g. a modulus
    /// with non-positive imaginary part, or a matrix that is not nilpotent).
    #[error("domain error: {0}")]
    Domain(String),

    /// A quadrature or expansion did not reach the requested accuracy.
    #[error("resolution error: {0}")]
    Resolution(String),

    /// A dense solve was rejected because the system is too ill-conditioned.
    #[error("conditioning error: {0}")]
    Conditioning(String),

    /// Source/target mismatch or other structural failure while composing.
    #[error("composition error: {0}")]
    Composition(String),

    /// The inputs fall outside the case handled by the invoked operation.
    #[error("case error: {0}")]
    Case(String),

    /// Valid data that this model deliberately does not support
    /// (e.g. irrational parameters where exact bookkeeping is required).
    #[error("unsupported input: {0}")]
    Unsupported(String),

    /// Malformed serialized data.
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
    pub fn case(msg: impl Into<String>) -> Self {
        Error::Case(msg.into())
    }
    pub fn composition(msg: impl Into<String>) -> Self {
        Error::Composition(msg.into())
    }
}
