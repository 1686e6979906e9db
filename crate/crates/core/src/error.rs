use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("{what} has {count} atoms, over the enumeration limit of {limit}")]
    LimitExceeded { what: &'static str, count: usize, limit: usize },
    #[error("{0} is not a splitting set: rule `{1}` has a body atom outside it")]
    NotSplitting(String, String),
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error("invalid extension: {0}")]
    Extension(String),
    #[error("cut error: {0}")]
    Cut(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
