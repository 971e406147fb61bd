use thiserror::Error;

/// Errors raised by the library and the command-line front end.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The input exceeds a configured size limit.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// Malformed or inconsistent input text.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A profile failed validation.
    #[error("invalid profile: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
