//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("{0}")]
    Field(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid algebra: {0}")]
    Algebra(String),

    #[error("quiver is cyclic: {0}")]
    CyclicQuiver(String),

    #[error("not an ideal: {0}")]
    NotAnIdeal(String),

    #[error("not idempotent: {0}")]
    NotIdempotent(String),

    #[error("{0}")]
    Invalid(String),

    #[error("operation requires characteristic zero ({0})")]
    CharZeroRequired(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    pub fn field(msg: impl Into<String>) -> Self {
        Error::Field(msg.into())
    }

    pub fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }

    pub fn algebra(msg: impl Into<String>) -> Self {
        Error::Algebra(msg.into())
    }

    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
}
