//! Crate-wide error type.

use std::path::PathBuf;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error on {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("column '{0}' not found")]
    ColumnNotFound(String),

    #[error("duplicate column name '{0}'")]
    DuplicateColumn(String),

    #[error("empty column name in header")]
    EmptyColumnName,

    #[error("non-binary label: column '{column}' has {distinct} distinct values")]
    NonBinaryLabel { column: String, distinct: usize },

    #[error("unparseable cell at data row {row}, column '{column}': '{value}'")]
    UnparseableCell {
        row: usize,
        column: String,
        value: String,
    },

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("split needs at least 10 rows, got {0}")]
    TooFewRows(usize),

    #[error("class {0} would become empty in a partition")]
    EmptyClassInSplit(u8),

    #[error("training set contains a single class")]
    DegenerateTraining,

    #[error("feature width mismatch: expected {expected}, got {got}")]
    WidthMismatch { expected: usize, got: usize },

    #[error("model file schema version {got} unsupported (expected {expected})")]
    SchemaVersion { expected: u32, got: u32 },

    #[error("malformed model file: {0}")]
    MalformedModel(String),

    #[error("invalid respondent plan: {0}")]
    InvalidPlan(String),

    #[error("response matrix has no discrimination signal")]
    NoDiscriminationSignal,

    #[error("invalid response matrix: {0}")]
    InvalidResponseMatrix(String),

    #[error("rank error: {0}")]
    Rank(String),

    #[error("analytics error: {0}")]
    Analytics(String),

    #[error("respondent {id}: {source}")]
    Respondent {
        id: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Wrap an error with the respondent it occurred in.
    pub fn for_respondent(self, id: usize) -> Self {
        Error::Respondent {
            id,
            source: Box::new(self),
        }
    }
}
