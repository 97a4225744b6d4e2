use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("denominator of a rational function must be nonzero")]
    ZeroDenominator,

    #[error("parse error: {0}")]
    Parse(String),

    /// The truncated algebra would exceed the configured dimension cap.
    #[error("truncated algebra dimension {dimension} exceeds the budget of {budget}")]
    Budget { dimension: u128, budget: u64 },

    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    /// An operation was called outside of its documented domain.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A computed quantity contradicts a proven identity; always a bug.
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),

    #[error("arithmetic overflow: {0}")]
    Overflow(String),
}

impl Error {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
