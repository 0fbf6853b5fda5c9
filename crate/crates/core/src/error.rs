//! Crate-wide error type.

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{file}:{line}: malformed row: {message}")]
    MalformedRow {
        file: String,
        line: u64,
        message: String,
    },

    #[error("duplicate {kind} id `{id}`")]
    DuplicateId { kind: &'static str, id: String },

    #[error("journal `{journal_id}` year {year} has an empty category list")]
    EmptyCategories { journal_id: String, year: i32 },

    #[error("publication `{pub_id}` references unknown {kind} `{id}`")]
    DanglingReference {
        pub_id: String,
        kind: &'static str,
        id: String,
    },

    #[error("field `{0}` not present in the field scheme")]
    UnknownField(String),

    #[error("publication field set does not contain the first field `{0}`")]
    NotInScope(String),

    #[error("sample too small: need at least {required} values, got {got}")]
    SampleTooSmall { required: usize, got: usize },

    #[error("degenerate sample: all values identical")]
    DegenerateSample,

    #[error("undefined input: {0}")]
    UndefinedInput(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("csv error in {file}: {source}")]
    Csv {
        file: String,
        #[source]
        source: csv::Error,
    },

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
