//! Variational quantum classifier.
//!
//! A sample `x` is embedded by the ZZ feature map, rotated by the trainable
//! ansatz `W(θ)` and measured. The measured bitstring's parity is the label,
//! so `p̂` (the odd-parity shot fraction) estimates P(label = 1) and the
//! prediction is 1 iff `p̂ > 0.5`.

mod ansatz;
mod train;

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use ansatz::{build_ansatz, initial_theta, AnsatzSpec, Entangler, ThetaVector};
pub use train::{empirical_cost, train, train_traced, SpsaGains, TrainConfig, TrainTrace, COST_EPSILON};

use crate::feature_map::{build_feature_map, FeatureMapError, FeatureMapSpec, FeatureVector};
use crate::harness::{BackendError, BatchTiming, CircuitJob, QuantumBackend};
use crate::pipeline::Dataset;
use crate::qsim::{Circuit, QsimError};
use crate::rng::derive_seed;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VqcError {
    #[error("input has {got} features, model expects {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("theta has {got} angles, ansatz needs {expected}")]
    ParameterCount { expected: usize, got: usize },
    #[error("dataset is empty")]
    Empty,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    FeatureMap(#[from] FeatureMapError),
    #[error(transparent)]
    Qsim(#[from] QsimError),
    #[error("{context}: {source}")]
    Backend { context: String, source: BackendError },
    #[error("model file: {0}")]
    Persist(String),
}

impl VqcError {
    pub fn is_validation(&self) -> bool {
        match self {
            VqcError::Qsim(e) => e.is_validation(),
            VqcError::Backend { source, .. } => source.is_validation(),
            _ => true,
        }
    }
}

/// Outcome → label rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LabelRule {
    /// Odd number of ones → 1.
    #[default]
    Parity,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TrainMetadata {
    pub seed: u64,
    pub iterations: usize,
    pub final_cost: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VqcModel {
    pub feature_map_spec: FeatureMapSpec,
    pub ansatz_spec: AnsatzSpec,
    pub theta: ThetaVector,
    pub shots: u64,
    #[serde(default)]
    pub label_rule: LabelRule,
    #[serde(default)]
    pub metadata: TrainMetadata,
}

impl VqcModel {
    pub fn validate(&self) -> Result<(), VqcError> {
        self.ansatz_spec.validate()?;
        if self.feature_map_spec.n_features != self.ansatz_spec.n_qubits {
            return Err(VqcError::InvalidConfig(format!(
                "feature map has {} qubits, ansatz {}",
                self.feature_map_spec.n_features, self.ansatz_spec.n_qubits
            )));
        }
        if self.shots == 0 {
            return Err(VqcError::InvalidConfig("shots must be at least 1".into()));
        }
        self.theta.check(&self.ansatz_spec)
    }

    /// Feature map followed by the ansatz.
    pub fn circuit(&self, x: &FeatureVector) -> Result<Circuit, VqcError> {
        full_circuit(x, &self.feature_map_spec, &self.theta, &self.ansatz_spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, VqcError> {
        let m: VqcModel = serde_json::from_str(s).map_err(|e| VqcError::Persist(e.to_string()))?;
        m.validate()?;
        Ok(m)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), VqcError> {
        std::fs::write(path, self.to_json()).map_err(|e| VqcError::Persist(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, VqcError> {
        let s = std::fs::read_to_string(path).map_err(|e| VqcError::Persist(e.to_string()))?;
        Self::from_json(&s)
    }
}

pub(crate) fn full_circuit(
    x: &FeatureVector,
    fm: &FeatureMapSpec,
    theta: &ThetaVector,
    ansatz: &AnsatzSpec,
) -> Result<Circuit, VqcError> {
    let mut c = build_feature_map(x, fm)?;
    c.extend(&build_ansatz(theta, ansatz)?)?;
    Ok(c)
}

pub(crate) fn label_of(p_hat: f64) -> u8 {
    u8::from(p_hat > 0.5)
}

/// Partial progress when a backend call fails: the first failed circuit's index.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct RunFailure {
    pub index: usize,
    pub error: BackendError,
}

/// Odd-parity fractions for `circuits`, submitted in calls no larger than the
/// backend allows. Circuit `i` uses seed `derive_seed(seed, i)`. On failure
/// the fractions computed so far come back with the failure.
pub(crate) fn parity_fractions(
    circuits: Vec<Circuit>,
    shots: u64,
    seed: u64,
    backend: &dyn QuantumBackend,
) -> (Vec<f64>, Vec<BatchTiming>, Option<RunFailure>) {
    let per_call = backend.max_circuits_per_call().max(1);
    let mut p = Vec::with_capacity(circuits.len());
    let mut timings = Vec::new();
    let jobs: Vec<CircuitJob> = circuits
        .into_iter()
        .enumerate()
        .map(|(i, circuit)| CircuitJob { circuit, seed: derive_seed(seed, i as u64) })
        .collect();
    let mut start = 0;
    let mut call = 0u64;
    while start < jobs.len() {
        let end = jobs.len().min(start.saturating_add(per_call));
        match backend.execute(&jobs[start..end], shots, call) {
            Ok(exec) => {
                p.extend(exec.counts.iter().map(|c| c.odd_parity_fraction()));
                timings.extend(exec.timing);
            }
            Err(error) => return (p, timings, Some(RunFailure { index: start, error })),
        }
        start = end;
        call += 1;
    }
    (p, timings, None)
}

/// Label and `p̂` for one sample. Uses the same seed stream as row 0 of
/// [`predict_batch`].
pub fn classify(
    x: &FeatureVector,
    model: &VqcModel,
    backend: &dyn QuantumBackend,
    seed: u64,
) -> Result<(u8, f64), VqcError> {
    model.validate()?;
    let circuit = model.circuit(x)?;
    let (p, _, failure) = parity_fractions(vec![circuit], model.shots, seed, backend);
    if let Some(f) = failure {
        return Err(VqcError::Backend { context: format!("classify on {}", backend.name()), source: f.error });
    }
    Ok((label_of(p[0]), p[0]))
}

/// Where and why a batch stopped early.
#[derive(Debug, Clone, PartialEq)]
pub struct BatchFailure {
    /// Index of the first sample without a result.
    pub index: usize,
    pub error: BackendError,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BatchPrediction {
    /// Labels for the samples that completed, in order.
    pub labels: Vec<u8>,
    pub p_hat: Vec<f64>,
    /// Accuracy over the completed samples; `None` when there are none.
    pub accuracy: Option<f64>,
    /// Circuits submitted successfully.
    pub circuits: usize,
    pub shots_per_circuit: u64,
    /// Virtual time per remote call; empty for local backends.
    pub batches: Vec<BatchTiming>,
    pub failure: Option<BatchFailure>,
}

/// One circuit per row, each run `model.shots` times.
pub fn predict_batch(
    data: &Dataset,
    model: &VqcModel,
    backend: &dyn QuantumBackend,
    seed: u64,
) -> Result<BatchPrediction, VqcError> {
    model.validate()?;
    if !data.is_empty() && data.n_features() != model.feature_map_spec.n_features {
        return Err(VqcError::DimensionMismatch { expected: model.feature_map_spec.n_features, got: data.n_features() });
    }
    let circuits = (0..data.len())
        .map(|i| model.circuit(&data.feature_vector(i)))
        .collect::<Result<Vec<_>, _>>()?;
    let (p_hat, batches, failure) = parity_fractions(circuits, model.shots, seed, backend);
    let labels: Vec<u8> = p_hat.iter().map(|&p| label_of(p)).collect();
    let accuracy = crate::svm::accuracy(&labels, &data.labels()[..labels.len()]);
    Ok(BatchPrediction {
        circuits: labels.len(),
        labels,
        p_hat,
        accuracy,
        shots_per_circuit: model.shots,
        batches,
        failure: failure.map(|f| BatchFailure { index: f.index, error: f.error }),
    })
}
