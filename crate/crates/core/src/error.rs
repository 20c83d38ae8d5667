use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid group order {0}: order must be at least 1")]
    InvalidOrder(usize),

    #[error("invalid arity: {0}")]
    InvalidArity(String),

    /// An identifier or symbol outside its declared range or namespace.
    #[error("domain error: {0}")]
    Domain(String),

    /// An operation was called on inputs that violate its contract.
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("malformed code: {0}")]
    MalformedCode(String),

    #[error("resource limit: {what} needs {required}, cap is {cap}")]
    Resource {
        what: String,
        required: u128,
        cap: u128,
    },

    /// A construction that is correct by proof failed its own re-check.
    #[error("internal inconsistency: {0}")]
    Internal(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn malformed(msg: impl Into<String>) -> Self {
        Error::MalformedCode(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
