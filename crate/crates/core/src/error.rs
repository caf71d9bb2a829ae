//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by matrix I/O, shape checks and configuration validation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// Matrix Market (or other text) input that does not parse. `line` is
    /// 1-based and refers to the physical line of the file.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// Operands whose shapes do not line up (matrix vs. vector, permutation
    /// vs. matrix, ...).
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A structurally invalid argument: out-of-range index, non-bijective
    /// permutation, assignment value outside `0..k`, bad cache geometry, ...
    #[error("invalid argument: {0}")]
    Invalid(String),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
