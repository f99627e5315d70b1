use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of the operation (e.g. `n = 0`).
    #[error("domain error: {0}")]
    Domain(String),
    #[error("arithmetic overflow: {0}")]
    Overflow(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("not found: {0}")]
    NotFound(String),
    #[error("incomplete set: {0}")]
    IncompleteSet(String),
    /// A postcondition that the algebra guarantees did not hold.
    #[error("internal consistency failure: {0}")]
    Consistency(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("runtime error: {0}")]
    Runtime(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn overflow(what: impl Into<String>) -> Error {
    Error::Overflow(what.into())
}
