//! Error types shared by every module.

use alloc::string::String;
use core::fmt;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// An argument violated a precondition (bad mode index, size mismatch,
    /// out-of-range label, ...).
    Domain(String),
    /// A state could not be normalized because its amplitudes cancel.
    ZeroNorm,
    /// An internal numerical consistency check failed. Indicates a bug or a
    /// non-unitary input, never ordinary rounding.
    Consistency(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::ZeroNorm => write!(f, "normalization error: amplitudes sum to zero"),
            Error::Consistency(msg) => write!(f, "consistency error: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
