use thiserror::Error;

/// Errors produced by the numeric kernel and the exact pipelines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// An exact result did not have the structure the recurrences force.
    /// Seeing this means a bug in the pipeline, not bad input.
    #[error("internal consistency failure: {0}")]
    Consistency(String),
    #[error("dimension mismatch: expected {expected} values, got {got}")]
    Dimension { expected: usize, got: usize },
    /// The request exceeds the desk-scale enumeration budget.
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("malformed permutation: {0}")]
    Permutation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
