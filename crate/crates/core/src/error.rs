use thiserror::Error;

/// Errors produced by the coverage library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A constructor or configuration argument is out of range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An input lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The operation's mathematical hypothesis does not hold for this input.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// An exhaustive enumeration would exceed the configured size guard.
    #[error("resource limit exceeded: {0}")]
    Resource(String),

    /// Malformed serialized input.
    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
