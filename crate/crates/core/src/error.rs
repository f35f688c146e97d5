use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{malformed} of {total} lines in {path} are malformed (first at line {first_line}: {first_reason})")]
    TooManyMalformed {
        path: PathBuf,
        malformed: usize,
        total: usize,
        first_line: usize,
        first_reason: String,
    },

    #[error("unsupported corpus schema: {0}")]
    Schema(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("tag {0:?} is not in the tagset")]
    UnknownTag(String),

    #[error("tagger model is untrained")]
    UntrainedTagger,

    #[error("feature context is missing {0}")]
    MissingContext(&'static str),

    #[error("feature registry mismatch: {0}")]
    RegistryMismatch(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },

    #[error("training data has a single class")]
    SingleClass,

    #[error("non-finite feature value in row {row}, column {column}")]
    NonFinite { row: usize, column: usize },

    #[error("need at least {needed} distinct authors for grouped folding, found {found}")]
    TooFewAuthors { needed: usize, found: usize },

    #[error("train and heldout sets share {0} author(s)")]
    AuthorOverlap(usize),

    #[error("prediction sets differ: {0}")]
    MismatchedPairs(String),

    #[error("unknown condition {0:?}")]
    UnknownCondition(String),

    #[error("invalid synthetic spec: {0}")]
    Synthetic(String),

    #[error("{0}")]
    Invalid(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
