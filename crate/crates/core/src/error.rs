//! Error type shared across the library.

use std::fmt;

/// Library-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors reported by mesh construction, assembly and the solvers.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument violated a precondition (non-positive size, inconsistent
    /// lengths, out-of-range material value, ...).
    Invalid(String),
    /// A factorization hit a zero or numerically negligible pivot.  The row
    /// index refers to the matrix as passed in (before any internal
    /// reordering).
    Singular { row: usize },
    /// The operation is not available for the given configuration
    /// (e.g. a 1D-only diagnostic requested on a 2D system).
    Unsupported(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Invalid(msg) => write!(f, "invalid argument: {msg}"),
            Error::Singular { row } => write!(f, "singular system: zero pivot at row {row}"),
            Error::Unsupported(msg) => write!(f, "unsupported: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

impl Error {
    /// Convenience constructor for [`Error::Invalid`].
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    /// Convenience constructor for [`Error::Unsupported`].
    pub fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }
}
