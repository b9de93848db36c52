use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// A quantity that must be an integer came out fractional.
    #[error("integrality failure: {0}")]
    Integrality(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// Two independent computations of the same number disagree.
    #[error("verification mismatch: {0}")]
    Mismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
