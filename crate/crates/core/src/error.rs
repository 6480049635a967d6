use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("vertex budget exceeded: {requested} vertices requested, budget is {budget}")]
    BudgetExceeded { requested: u128, budget: usize },

    #[error("enumeration bound exceeded: {edges} free edges, at most {bound} can be enumerated")]
    EnumerationBound { edges: usize, bound: usize },

    #[error("invalid bracket: {0}")]
    InvalidBracket(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
