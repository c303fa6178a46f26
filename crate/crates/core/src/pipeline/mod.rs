//! Telemetry ingestion and preparation.
//!
//! Raw CSV rows are grouped into drives, cleaned, augmented with time-of-day
//! and elapsed-time context, labelled per drive by majority vote and split by
//! drive so that no trip contributes samples to more than one partition.
//! [`generate_synthetic`] produces a stand-in fleet with the same shape.

mod dataset;
mod ingest;
mod preprocess;
mod split;
mod synthetic;

use thiserror::Error;

pub use dataset::Dataset;
pub use ingest::{ingest_csv, ingest_reader, write_csv, CsvSchema, Drive, DriveLog, RawSample};
pub use preprocess::{
    context_features, majority_vote, preprocess, MinMaxScaler, AUGMENTED_FEATURES, DEFAULT_FEATURE_RANGE,
};
pub use split::{split_by_drive, DriveSplit, SplitManifest, SplitSpec};
pub use synthetic::{generate_synthetic, SyntheticConfig, SAMPLE_PERIOD_S};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PipelineError {
    #[error("missing mandatory column `{0}`")]
    MissingColumn(String),
    #[error("could not parse input: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("drive `{0}` has no valid samples")]
    EmptyDrive(String),
    #[error("no valid rows remain after cleaning")]
    EmptyDataset,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("label {0} is not binary")]
    NonBinaryLabel(u8),
    #[error("invalid split: {0}")]
    InvalidSplit(String),
    #[error("{0} partition received no drives")]
    EmptyPartition(String),
    #[error("invalid synthetic config: {0}")]
    InvalidConfig(String),
}

impl PipelineError {
    pub fn is_validation(&self) -> bool {
        !matches!(self, PipelineError::Io(_))
    }
}
