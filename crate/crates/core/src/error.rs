use thiserror::Error;

/// Errors produced by graverkit operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("resource cap exceeded: {cap} (limit {limit})")]
    CapExceeded { cap: &'static str, limit: u64 },

    #[error("kernel is not pointed: ker(A) meets the nonnegative orthant outside 0, fibers are infinite")]
    NotPointed,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("data file {name} failed its transcription checksum")]
    Checksum { name: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }

    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
