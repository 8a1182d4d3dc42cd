use std::path::PathBuf;
use thiserror::Error;

/// Errors produced by dataset loading, seeding, and the benchmark harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error at row {row}: {message}")]
    Parse { row: usize, message: String },

    #[error("dataset contains no rows")]
    EmptyDataset,

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("centroid of an empty cluster is undefined")]
    EmptyCluster,

    #[error("label {label} out of range for k = {k}")]
    LabelOutOfRange { label: usize, k: usize },

    #[error("cannot select {k} centers: dataset has only {distinct} distinct points")]
    InsufficientDistinctPoints { k: usize, distinct: usize },

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("invalid config: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
