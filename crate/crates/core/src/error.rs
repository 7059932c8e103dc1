use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid layer dimension {dim} at position {position}")]
    InvalidDimension { position: usize, dim: usize },

    #[error("dimension mismatch in {context}: expected {expected}, got {actual}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("label {value} at row {row} is not binary")]
    NonBinaryLabel { row: usize, value: u8 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("AUC undefined: truth vector contains a single class")]
    SingleClass,

    #[error("non-finite score at index {0}")]
    NonFiniteScore(usize),

    #[error("priority weights do not sum to one (sum = {0})")]
    WeightsNotNormalized(f64),

    #[error("dataset `{name}`: {reason}")]
    Dataset { name: String, reason: String },

    #[error("unknown label value `{value}` at line {line}")]
    UnknownLabel { value: String, line: usize },

    #[error("label column `{0}` not found in header")]
    MissingLabelColumn(String),

    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("CSV error in {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("infeasible partition: {0}")]
    Partition(String),
}
