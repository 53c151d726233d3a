use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("{a} is not invertible modulo {q}")]
    NonInvertible { a: i128, q: u64 },
    #[error("capacity exceeded: {what} = {value} (limit {limit})")]
    Capacity { what: &'static str, value: u128, limit: u128 },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("did not converge: {0}")]
    Convergence(String),
    #[error("internal consistency: {0}")]
    Consistency(String),
    #[error("{}: {message}", path.display())]
    Io { path: PathBuf, message: String },
    #[error("usage: {0}")]
    Usage(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn capacity(what: &'static str, value: impl Into<u128>, limit: impl Into<u128>) -> Error {
    Error::Capacity { what, value: value.into(), limit: limit.into() }
}
