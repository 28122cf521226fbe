use thiserror::Error;

/// Errors produced by every fallible operation in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or out-of-range input.
    #[error("invalid input: {0}")]
    Invalid(String),
    /// A register or enumeration cap would be exceeded.
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    /// A special function was evaluated outside its domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// The requested quantity has no finite value.
    #[error("unbounded: {0}")]
    Unbounded(String),
    /// An instance or state file could not be parsed.
    #[error("{source_name}:{line}:{column}: {message}")]
    Parse {
        source_name: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}
