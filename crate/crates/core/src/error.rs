use thiserror::Error;

/// Errors raised by constructions and verifications.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input: bad vertex lists, non-permutations, non-simplicial maps.
    #[error("validation error: {0}")]
    Validation(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    /// A vector was expected to lie in a span and does not.
    #[error("vector does not lie in the span of the given basis")]
    NotInSpan,

    #[error("complex is not connected ({0} components)")]
    Disconnected(usize),

    /// A hypothesis of a construction failed on otherwise valid input.
    #[error("hypothesis error: {0}")]
    Hypothesis(String),

    #[error("quotient is not a simplicial complex: {0}; subdivide (e.g. barycentrically) before quotienting")]
    DegenerateQuotient(String),

    /// An internal consistency assertion failed. Always a bug.
    #[error("internal consistency error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn validation(msg: impl Into<String>) -> Error {
    Error::Validation(msg.into())
}
