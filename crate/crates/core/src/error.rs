use thiserror::Error;

/// Library-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A configuration or argument violates a documented invariant.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// Matrix or vector dimensions do not match the operation's contract.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// A quantity left its mathematical domain (nonpositive distance, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Dense linear algebra failed (non positive definite, singular, ...).
    #[error("numerical error: {0}")]
    Numerical(String),

    /// The feedback encoder cannot satisfy the slot/load constraints.
    #[error("infeasible feedback request: {0}")]
    Infeasible(String),

    /// A codeword bit stream could not be parsed.
    #[error("decode error: {0}")]
    Decode(String),
}

pub type Result<T> = std::result::Result<T, Error>;
