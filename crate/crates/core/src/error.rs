use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{what} needs {needed}, budget is {limit}")]
    BudgetExceeded {
        what: &'static str,
        needed: String,
        limit: u64,
    },
    #[error("{0} is not an odd prime")]
    NotPrime(u64),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("not a weighing matrix: {0}")]
    NotWeighing(String),
    #[error("basis is singular")]
    Singular,
    #[error("dimension must be positive")]
    EmptyDimension,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("value does not fit in 64 bits: {0}")]
    Overflow(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn budget(what: &'static str, needed: impl ToString, limit: u64) -> Self {
        Error::BudgetExceeded {
            what,
            needed: needed.to_string(),
            limit,
        }
    }
}
