use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Malformed textual input (expressions, serialized values).
    #[error("parse error: {0}")]
    Parse(String),
    /// Invalid ensemble or command parameters.
    #[error("parameter error: {0}")]
    Parameter(String),
    /// An internal invariant failed; the computation cannot be trusted.
    #[error("invariant breach: {0}")]
    Invariant(String),
    /// Numerical root tracking or quadrature could not meet its contract.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
