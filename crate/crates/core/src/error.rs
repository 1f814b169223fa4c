use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Input data breaks a type invariant (negative profit, width > 1, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A caller broke an operation's precondition.
    #[error("contract violation: {0}")]
    Contract(String),

    /// A computation would exceed its configured resource budget.
    #[error("{what} budget exceeded: needs {needed}, limit is {limit}")]
    Budget {
        what: &'static str,
        needed: u128,
        limit: u128,
    },

    /// Malformed or schema-violating JSON, with a 1-based position.
    #[error("{message} at line {line} column {column}")]
    Parse { line: usize, column: usize, message: String },

    #[error("i/o error: {0}")]
    Io(String),

    #[error("unknown item id `{0}`")]
    UnknownItem(String),

    #[error("item `{0}` is placed more than once")]
    DuplicatePlacement(String),
}

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Budget { .. })
    }
}
