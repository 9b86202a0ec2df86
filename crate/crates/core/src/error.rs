use thiserror::Error;

/// Errors raised by the special functions and the verification engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument is outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// An infinite series or product did not meet its tail bound within the term cap.
    #[error("truncation failure: {what} did not converge within {max_terms} terms")]
    Truncation { what: &'static str, max_terms: usize },

    /// A hypothesis vector for the ratio product is malformed.
    #[error("invalid ratio spec: {0}")]
    InvalidSpec(String),

    /// The function under test produced an unusable value.
    #[error("evaluation error at x = {x}: {reason}")]
    Evaluation { x: f64, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
