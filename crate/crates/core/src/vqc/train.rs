use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::ansatz::{ansatz_gates, initial_theta, AnsatzSpec, ThetaVector};
use super::{parity_fractions, LabelRule, TrainMetadata, VqcError, VqcModel};
use crate::feature_map::{build_feature_map, FeatureMapSpec};
use crate::harness::QuantumBackend;
use crate::pipeline::Dataset;
use crate::qsim::Circuit;
use crate::rng::{derive_seed, stream_rng};

/// Probability clamp for the cross-entropy.
pub const COST_EPSILON: f64 = 1e-6;

/// SPSA gain sequences `a_k = a / (A + k + 1)^α` and `c_k = c / (k + 1)^γ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SpsaGains {
    pub a: f64,
    pub c: f64,
    #[serde(rename = "A")]
    pub big_a: f64,
    pub alpha: f64,
    pub gamma: f64,
}

impl Default for SpsaGains {
    fn default() -> Self {
        SpsaGains { a: 0.2, c: 0.1, big_a: 0.0, alpha: 0.602, gamma: 0.101 }
    }
}

impl SpsaGains {
    fn a_k(&self, k: usize) -> f64 {
        self.a / (self.big_a + k as f64 + 1.0).powf(self.alpha)
    }

    fn c_k(&self, k: usize) -> f64 {
        self.c / (k as f64 + 1.0).powf(self.gamma)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub max_iterations: usize,
    pub shots: u64,
    pub gains: SpsaGains,
    /// Best-cost improvement that resets the patience counter.
    pub convergence_tolerance: f64,
    /// Iterations without such an improvement before stopping.
    pub patience: usize,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            max_iterations: 200,
            shots: 1000,
            gains: SpsaGains::default(),
            convergence_tolerance: 1e-3,
            patience: 20,
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<(), VqcError> {
        if self.max_iterations == 0 || self.shots == 0 || self.patience == 0 {
            return Err(VqcError::InvalidConfig("max_iterations, shots and patience must be at least 1".into()));
        }
        let g = &self.gains;
        if [g.a, g.c, g.big_a, g.alpha, g.gamma, self.convergence_tolerance].iter().any(|v| !v.is_finite()) {
            return Err(VqcError::InvalidConfig("non-finite SPSA setting".into()));
        }
        if g.c == 0.0 {
            return Err(VqcError::InvalidConfig("SPSA perturbation c must be nonzero".into()));
        }
        Ok(())
    }
}

/// Per-iteration record of a training run.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TrainTrace {
    /// Cost at `θ_k + c_k Δ` and `θ_k − c_k Δ`.
    pub evaluations: Vec<(f64, f64)>,
    /// Lowest cost seen up to and including each iteration.
    pub best_costs: Vec<f64>,
    /// θ_k at the start of each iteration, followed by the final iterate.
    pub thetas: Vec<Vec<f64>>,
}

fn check_shapes(data: &Dataset, fm: &FeatureMapSpec, ansatz: &AnsatzSpec) -> Result<(), VqcError> {
    ansatz.validate()?;
    if data.is_empty() {
        return Err(VqcError::Empty);
    }
    if fm.n_features != ansatz.n_qubits {
        return Err(VqcError::InvalidConfig(format!(
            "feature map has {} qubits, ansatz {}",
            fm.n_features, ansatz.n_qubits
        )));
    }
    if data.n_features() != fm.n_features {
        return Err(VqcError::DimensionMismatch { expected: fm.n_features, got: data.n_features() });
    }
    Ok(())
}

/// Training rows embedded once; each cost evaluation only appends the ansatz.
struct Embedded {
    maps: Vec<Circuit>,
    labels: Vec<u8>,
}

impl Embedded {
    fn new(data: &Dataset, fm: &FeatureMapSpec) -> Result<Self, VqcError> {
        let maps = (0..data.len())
            .map(|i| build_feature_map(&data.feature_vector(i), fm))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Embedded { maps, labels: data.labels().to_vec() })
    }

    fn cost(
        &self,
        theta: &ThetaVector,
        ansatz: &AnsatzSpec,
        shots: u64,
        seed: u64,
        backend: &dyn QuantumBackend,
    ) -> Result<f64, VqcError> {
        let w = ansatz_gates(theta, ansatz);
        let circuits: Vec<Circuit> = self
            .maps
            .iter()
            .map(|m| {
                let mut c = m.clone();
                for g in &w {
                    c.push(*g)?;
                }
                Ok(c)
            })
            .collect::<Result<_, VqcError>>()?;
        let (p, _, failure) = parity_fractions(circuits, shots, seed, backend);
        if let Some(f) = failure {
            return Err(VqcError::Backend {
                context: format!("cost evaluation on {} failed at sample {}", backend.name(), f.index),
                source: f.error,
            });
        }
        Ok(cross_entropy(&p, &self.labels))
    }
}

fn cross_entropy(p: &[f64], labels: &[u8]) -> f64 {
    let total: f64 = p
        .iter()
        .zip(labels)
        .map(|(&p, &y)| {
            let p = p.clamp(COST_EPSILON, 1.0 - COST_EPSILON);
            if y == 1 {
                -p.ln()
            } else {
                -(1.0 - p).ln()
            }
        })
        .sum();
    total / p.len() as f64
}

/// Mean binary cross-entropy of the shot estimates `p̂` against the labels.
#[allow(clippy::too_many_arguments)]
pub fn empirical_cost(
    data: &Dataset,
    theta: &ThetaVector,
    fm: &FeatureMapSpec,
    ansatz: &AnsatzSpec,
    shots: u64,
    seed: u64,
    backend: &dyn QuantumBackend,
) -> Result<f64, VqcError> {
    check_shapes(data, fm, ansatz)?;
    theta.check(ansatz)?;
    if shots == 0 {
        return Err(VqcError::InvalidConfig("shots must be at least 1".into()));
    }
    Embedded::new(data, fm)?.cost(theta, ansatz, shots, seed, backend)
}

pub fn train(
    data: &Dataset,
    fm: &FeatureMapSpec,
    ansatz: &AnsatzSpec,
    cfg: &TrainConfig,
    backend: &dyn QuantumBackend,
) -> Result<VqcModel, VqcError> {
    train_traced(data, fm, ansatz, cfg, backend).map(|(m, _)| m)
}

/// SPSA on the cross-entropy. Both perturbed evaluations of an iteration
/// share one shot seed. The returned θ is the lower-cost perturbed point of
/// the best iteration.
pub fn train_traced(
    data: &Dataset,
    fm: &FeatureMapSpec,
    ansatz: &AnsatzSpec,
    cfg: &TrainConfig,
    backend: &dyn QuantumBackend,
) -> Result<(VqcModel, TrainTrace), VqcError> {
    cfg.validate()?;
    check_shapes(data, fm, ansatz)?;
    let embedded = Embedded::new(data, fm)?;

    let mut theta = initial_theta(ansatz, cfg.seed);
    let mut perturb = stream_rng(cfg.seed, 1);
    let mut best = (f64::INFINITY, theta.clone());
    let mut reference = f64::INFINITY;
    let mut stale = 0;
    let mut trace = TrainTrace::default();
    let mut iterations = 0;

    for k in 0..cfg.max_iterations {
        iterations = k + 1;
        trace.thetas.push(theta.0.clone());
        let (ak, ck) = (cfg.gains.a_k(k), cfg.gains.c_k(k));
        let delta: Vec<f64> = (0..theta.len()).map(|_| if perturb.random::<bool>() { 1.0 } else { -1.0 }).collect();
        let shifted = |s: f64| ThetaVector(theta.0.iter().zip(&delta).map(|(t, d)| t + s * ck * d).collect());
        let (plus, minus) = (shifted(1.0), shifted(-1.0));
        let seed = derive_seed(cfg.seed, 2 + k as u64);
        let f_plus = embedded.cost(&plus, ansatz, cfg.shots, seed, backend)?;
        let f_minus = embedded.cost(&minus, ansatz, cfg.shots, seed, backend)?;
        trace.evaluations.push((f_plus, f_minus));

        let diff = f_plus - f_minus;
        for (t, d) in theta.0.iter_mut().zip(&delta) {
            *t -= ak * diff / (2.0 * ck * d);
        }
        let candidate = if f_plus <= f_minus { (f_plus, plus) } else { (f_minus, minus) };
        if candidate.0 < best.0 {
            best = candidate;
        }
        trace.best_costs.push(best.0);

        if reference - best.0 > cfg.convergence_tolerance {
            reference = best.0;
            stale = 0;
        } else {
            stale += 1;
            if stale >= cfg.patience {
                break;
            }
        }
    }
    trace.thetas.push(theta.0);

    let model = VqcModel {
        feature_map_spec: *fm,
        ansatz_spec: *ansatz,
        theta: best.1,
        shots: cfg.shots,
        label_rule: LabelRule::Parity,
        metadata: TrainMetadata { seed: cfg.seed, iterations, final_cost: best.0 },
    };
    Ok((model, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::ExecutionBackend;

    #[test]
    fn cross_entropy_floor_and_max_entropy() {
        let c = cross_entropy(&[0.0, 1.0, 1.0], &[0, 1, 1]);
        assert!((c + (1.0 - COST_EPSILON).ln()).abs() < 1e-15);
        let c = cross_entropy(&[0.5; 4], &[0, 1, 0, 1]);
        assert!((c - std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn gains_follow_schedule() {
        let g = SpsaGains::default();
        assert!((g.a_k(0) - 0.2).abs() < 1e-15);
        assert!((g.c_k(3) - 0.1 / 4f64.powf(0.101)).abs() < 1e-15);
    }

    #[test]
    fn one_step_moves_every_angle() {
        let d = Dataset::from_rows(vec![vec![0.1, 0.7], vec![0.6, 0.2]], vec![0, 1]).unwrap();
        let fm = FeatureMapSpec::new(2);
        let an = AnsatzSpec::new(2);
        let cfg = TrainConfig { max_iterations: 1, shots: 50, ..Default::default() };
        let (m, trace) = train_traced(&d, &fm, &an, &cfg, &ExecutionBackend::SimulatorIdeal).unwrap();
        let init = initial_theta(&an, cfg.seed);
        assert_eq!(m.metadata.iterations, 1);
        assert_eq!(trace.evaluations.len(), 1);
        assert!(m.theta.0.iter().zip(&init.0).all(|(a, b)| a != b));
    }

    #[test]
    fn rejects_mismatched_dimensions() {
        let d = Dataset::from_rows(vec![vec![0.1, 0.7, 0.3]], vec![0]).unwrap();
        let err = train(&d, &FeatureMapSpec::new(2), &AnsatzSpec::new(2), &TrainConfig::default(), &ExecutionBackend::SimulatorIdeal)
            .unwrap_err();
        assert!(matches!(err, VqcError::DimensionMismatch { expected: 2, got: 3 }));
    }
}
