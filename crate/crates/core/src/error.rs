use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("load error at row {row}, column `{column}`: {message}")]
    Load {
        row: usize,
        column: String,
        message: String,
    },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("empty dataset: {0}")]
    EmptyDataset(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("undefined measure: {0}")]
    Undefined(String),

    #[error("import error at {location}: {message}")]
    Import { location: String, message: String },

    #[error("subgroup set update exceeded recursion depth {0}")]
    RecursionLimit(usize),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn load(row: usize, column: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Load {
            row,
            column: column.into(),
            message: message.into(),
        }
    }

    pub(crate) fn import(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Import {
            location: location.into(),
            message: message.into(),
        }
    }
}
