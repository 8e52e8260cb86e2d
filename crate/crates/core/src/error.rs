use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed call: wrong side, mismatched dimensions, parameter out of range.
    #[error("usage error: {0}")]
    Usage(String),

    /// The request exceeds a hard size cap of the exact algorithms.
    #[error("capability error: {what} (cap: {cap})")]
    Capability { what: String, cap: String },

    /// A documented precondition of an operation does not hold for the input.
    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("solver failure: {0}")]
    Solver(String),

    /// A postcondition that the mathematics guarantees was not met. Always a bug signal.
    #[error("verification failed: {0}")]
    Verification(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn capability(what: impl Into<String>, cap: impl ToString) -> Self {
        Error::Capability { what: what.into(), cap: cap.to_string() }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        // syntax and data errors already carry "at line L column C"
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
