use thiserror::Error;

use crate::feature_map::FeatureMapError;
use crate::features::FeatureError;
use crate::harness::HarnessError;
use crate::pipeline::PipelineError;
use crate::qsim::QsimError;
use crate::qubo_svm::QuboError;
use crate::svm::SvmError;
use crate::vqc::VqcError;

/// Top-level error for callers that drive several subsystems at once.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Qsim(#[from] QsimError),
    #[error(transparent)]
    Vqc(#[from] VqcError),
    #[error(transparent)]
    Svm(#[from] SvmError),
    #[error(transparent)]
    Qubo(#[from] QuboError),
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
    #[error(transparent)]
    Features(#[from] FeatureError),
    #[error(transparent)]
    FeatureMap(#[from] FeatureMapError),
    #[error(transparent)]
    Harness(#[from] HarnessError),
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by bad input rather than a failure while running.
    pub fn is_validation(&self) -> bool {
        match self {
            Error::Validation(_) | Error::Json(_) => true,
            Error::Qsim(e) => e.is_validation(),
            Error::Vqc(e) => e.is_validation(),
            Error::Svm(_) => true,
            Error::Qubo(e) => !matches!(e, QuboError::Capacity { .. }),
            Error::Pipeline(e) => e.is_validation(),
            Error::Features(_) | Error::FeatureMap(_) => true,
            Error::Harness(e) => e.is_validation(),
            Error::Io(_) => false,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
