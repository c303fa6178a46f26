//! Accelerator backends, the remote accelerator's operational model and the
//! benchmark that compares methods across them.
//!
//! Remote queueing is simulated on a virtual clock. Nothing sleeps.

mod backend;
mod benchmark;
mod latency;
mod report;

use thiserror::Error;

pub use backend::{BackendError, CircuitJob, Execution, ExecutionBackend, QuantumBackend};
pub use benchmark::{
    balanced_subsample, prepare_datasets, run_benchmark, BenchmarkConfig, DatasetSource, Method, PreparedData, QuboSettings, SvmSettings,
    VqcSettings,
};
pub use latency::{
    batch_circuits, simulate_remote_execution, simulate_remote_timing, BatchTiming, Delay, LatencyModel, TimingRecord,
};
pub use report::{emit_report, format_accuracy, format_duration, BenchmarkReport, ReportFormat, ReportRow, Stat};

use crate::features::FeatureError;
use crate::pipeline::PipelineError;
use crate::qubo_svm::QuboError;
use crate::svm::SvmError;
use crate::vqc::VqcError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HarnessError {
    #[error("unknown method `{0}`")]
    UnknownMethod(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("could not parse configuration: {0}")]
    ConfigParse(String),
    #[error("report has no rows")]
    EmptyReport,
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
    #[error(transparent)]
    Features(#[from] FeatureError),
    #[error(transparent)]
    Svm(#[from] SvmError),
    #[error(transparent)]
    Vqc(#[from] VqcError),
    #[error(transparent)]
    Qubo(#[from] QuboError),
    #[error(transparent)]
    Backend(#[from] BackendError),
    #[error("i/o error: {0}")]
    Io(String),
}

impl HarnessError {
    pub fn is_validation(&self) -> bool {
        match self {
            HarnessError::Pipeline(e) => e.is_validation(),
            HarnessError::Vqc(e) => e.is_validation(),
            HarnessError::Qubo(e) => !matches!(e, QuboError::Capacity { .. }),
            HarnessError::Backend(e) => e.is_validation(),
            HarnessError::Io(_) => false,
            _ => true,
        }
    }
}

/// True iff one classification fits inside the update period (strictly).
pub fn update_loop_check(classify_latency_s: f64, loop_period_s: f64) -> Result<bool, HarnessError> {
    for (name, v) in [("latency", classify_latency_s), ("loop period", loop_period_s)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(HarnessError::InvalidConfig(format!("{name} must be positive, got {v}")));
        }
    }
    Ok(classify_latency_s < loop_period_s)
}

/// Default update period of the in-vehicle loop, seconds.
pub const UPDATE_LOOP_PERIOD_S: f64 = 60.0;
