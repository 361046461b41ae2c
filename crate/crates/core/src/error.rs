//! Error type shared by every module.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("non-integer data: {0}")]
    NonInteger(String),
    #[error("alphabet mismatch: {0}")]
    Alphabet(String),
    #[error("unknown symbol {0:?}")]
    UnknownSymbol(String),
    #[error("malformed block word at position {pos}: {reason}")]
    Malformed { pos: usize, reason: String },
    #[error("parse error on line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("refused: {0}")]
    Refused(String),
}

pub type Result<T> = std::result::Result<T, Error>;
