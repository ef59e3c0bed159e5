use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("malformed element: {0}")]
    Malformed(String),

    #[error("invalid finite pair: {0}")]
    InvalidPair(String),

    #[error("enumeration budget of {limit} exceeded")]
    BudgetExceeded { limit: usize },

    #[error("backend mismatch: {left} vs {right}")]
    BackendMismatch { left: String, right: String },

    #[error("character parameter z = {0} is singular (z must differ from 0 and 1)")]
    SingularParameter(String),

    #[error("z = {0} lies outside [-q, -1/q] ∪ [1/q, q]")]
    OutsideDomain(String),

    #[error("element is not in the spherical family: {0}")]
    NonSpherical(String),

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

impl Error {
    /// Parse-class errors (bad input syntax) as opposed to domain errors.
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
