use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown variable `{name}` at byte {offset}")]
    UnknownVariable { name: String, offset: usize },

    #[error("exponent at byte {offset} must be a nonnegative integer literal ({kind} exponents are not supported)")]
    BadExponent { offset: usize, kind: &'static str },

    #[error("resource guard: estimated {estimate} monomials exceeds the limit of {limit}")]
    ResourceLimit { estimate: u128, limit: u128 },

    #[error("arithmetic overflow while computing {0}")]
    Overflow(&'static str),

    /// Two certification rules disagree. This is a cross-validation alarm and
    /// indicates a bug, never a property of the input.
    #[error("internal inconsistency between `{first}` and `{second}`: {detail}")]
    InternalInconsistency {
        first: String,
        second: String,
        detail: String,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
