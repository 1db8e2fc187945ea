use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid circulant spec: {0}")]
    InvalidSpec(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(
        "dimension mismatch: left is {left_rows}x{left_cols}, right is {right_rows}x{right_cols}"
    )]
    DimensionMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },

    /// A parameter falls outside the range a construction or bound is valid for.
    /// `bound` names the violated inequality.
    #[error("parameter out of range: {bound} violated ({detail})")]
    Range { bound: String, detail: String },

    #[error("row {row} has {found} ones, expected {expected}")]
    Uniformity {
        row: usize,
        found: usize,
        expected: usize,
    },

    #[error("t = {t} is not divisible by q = {q}")]
    Divisibility { t: usize, q: usize },

    #[error("not a decomposition: X*Y differs from every cyclic variant of C_{{{p},{q}}}")]
    NotADecomposition { p: usize, q: usize },

    #[error("order {order} exceeds the cap of {cap}")]
    Cap { order: usize, cap: usize },

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("certificate not verified: {0}")]
    Unverified(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn range(bound: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Range {
            bound: bound.into(),
            detail: detail.into(),
        }
    }

    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }
}
