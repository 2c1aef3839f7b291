use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument outside its documented domain (word size, rotation,
    /// threshold, word value too wide, ...).
    #[error("invalid parameter: {0}")]
    Param(String),

    /// The triple does not satisfy the validity condition, so its weight is
    /// undefined.
    #[error("invalid differential ({a:#x}, {b:#x} -> {c:#x}) for n = {n}")]
    InvalidDifferential { a: u64, b: u64, c: u64, n: u32 },

    #[error("brute-force oracle refused: n = {0} exceeds the limit of 10 bits")]
    OracleTooLarge(u32),

    #[error("table exceeds max_elements = {limit} (aborted after {count} entries)")]
    TooManyElements { count: usize, limit: usize },

    /// Bad edge rule, predicate or format tag.
    #[error("configuration error: {0}")]
    Config(String),

    #[error("unknown node id {0}")]
    UnknownNode(u64),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Param(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
