use std::io;

use thiserror::Error;

/// Errors raised by every layer of the index, from bit vectors up to the
/// container format.
#[derive(Debug, Error)]
pub enum Error {
    #[error("position {pos} out of range 1..={len}")]
    Range { pos: usize, len: usize },

    #[error("{0}")]
    NotFound(String),

    #[error("usage: {0}")]
    Usage(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("build: {0}")]
    Build(String),

    #[error("configuration: {0}")]
    Config(String),

    #[error("integrity: {0}")]
    Integrity(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }

    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn integrity(msg: impl Into<String>) -> Self {
        Error::Integrity(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
