use thiserror::Error;

/// Errors raised by validation, measure computation and file handling.
#[derive(Debug, Error)]
pub enum Error {
    #[error("user {user}: item {item} appears more than once")]
    DuplicateItem { user: String, item: String },

    #[error("user {user}: unknown item {item}")]
    UnknownItem { user: String, item: String },

    #[error("user {user}: rank {found} where rank {expected} was expected")]
    NonContiguousRanks {
        user: String,
        expected: usize,
        found: usize,
    },

    #[error("duplicate identifier {0}")]
    DuplicateId(String),

    #[error("{0} is empty")]
    Empty(&'static str),

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("{measure}: normalization is degenerate ({reason})")]
    Degenerate { measure: &'static str, reason: String },

    #[error("{0} is undefined for this input")]
    Undefined(String),

    #[error("no evaluable users")]
    NoEvaluableUsers,

    #[error("rankings cover different model sets")]
    ModelSetMismatch,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("users without a group: {0:?}")]
    MissingGroup(Vec<String>),

    #[error("{path}:{line}: {message}")]
    Parse { path: String, line: usize, message: String },

    #[error("{path}: {source}")]
    File { path: String, source: std::io::Error },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

pub(crate) fn degenerate(measure: &'static str, reason: impl Into<String>) -> Error {
    Error::Degenerate {
        measure,
        reason: reason.into(),
    }
}
