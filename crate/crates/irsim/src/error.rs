//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Two points coincide where a direction or distance is required.
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    /// A numeric or structural argument violates an operation's contract.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The angle-error distribution collapses to a point mass; callers must
    /// special-case it.
    #[error("degenerate distribution: {0}")]
    DegenerateDistribution(String),

    /// A scenario document failed to parse or validate. `key` is the
    /// offending key path.
    #[error("config error at `{key}`: {message}")]
    Config { key: String, message: String },

    /// A closed-form evaluation produced a non-finite intermediate.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// A state the solver should never reach (e.g. an unbounded LP on an
    /// objective that is bounded below by construction).
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            message: message.into(),
        }
    }
}
