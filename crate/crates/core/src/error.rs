use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid family: {0}")]
    InvalidFamily(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// An operation's precondition does not hold for the given input.
    #[error("precondition `{clause}` violated: {detail}")]
    Precondition { clause: String, detail: String },

    /// A search ran out of its configured budget before reaching a verdict.
    #[error("budget of {budget} exhausted in {what}")]
    BudgetExceeded { what: String, budget: u64 },

    /// Two routes for the same quantity disagreed.
    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub fn precondition(clause: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Precondition { clause: clause.into(), detail: detail.into() }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
