use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::latency::{BatchTiming, LatencyModel};
use crate::qsim::{sample_shots, Circuit, NoiseModel, QsimError, ShotCounts, Simulator};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BackendError {
    #[error(transparent)]
    Qsim(#[from] QsimError),
    #[error("call carries {got} circuits, backend accepts at most {max}")]
    BatchTooLarge { got: usize, max: usize },
    #[error("backend unavailable: {0}")]
    Unavailable(String),
}

impl BackendError {
    pub fn is_validation(&self) -> bool {
        match self {
            BackendError::Qsim(e) => e.is_validation(),
            BackendError::BatchTooLarge { .. } => true,
            BackendError::Unavailable(_) => false,
        }
    }
}

/// One circuit and the seed for its shot sampling and noise.
#[derive(Debug, Clone, PartialEq)]
pub struct CircuitJob {
    pub circuit: Circuit,
    pub seed: u64,
}

/// Results of one backend call, in job order.
#[derive(Debug, Clone, PartialEq)]
pub struct Execution {
    pub counts: Vec<ShotCounts>,
    /// Virtual time charged by a remote backend; `None` for local execution.
    pub timing: Option<BatchTiming>,
}

/// Anything that can run measured circuits.
///
/// `call_index` identifies the call within a run so remote backends can draw
/// reproducible latencies.
pub trait QuantumBackend: Sync {
    fn name(&self) -> String;

    /// Circuits accepted per call.
    fn max_circuits_per_call(&self) -> usize {
        usize::MAX
    }

    fn execute(&self, jobs: &[CircuitJob], shots: u64, call_index: u64) -> Result<Execution, BackendError>;
}

/// The built-in accelerators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExecutionBackend {
    /// Host CPU. Circuits, if any, run on the ideal statevector path.
    ClassicalCpu,
    SimulatorIdeal,
    SimulatorNoisy { noise: NoiseModel },
    RemoteQpuMock { latency: LatencyModel, noise: NoiseModel },
}

impl ExecutionBackend {
    /// Hardware label used in reports.
    pub fn hardware_label(&self) -> &'static str {
        match self {
            ExecutionBackend::ClassicalCpu => "CPU",
            ExecutionBackend::SimulatorIdeal | ExecutionBackend::SimulatorNoisy { .. } => "Simulator",
            ExecutionBackend::RemoteQpuMock { .. } => "QPU (mock)",
        }
    }

    /// Per-circuit execution. The job seed replaces the noise model's own
    /// seed so that zero noise reproduces the ideal path exactly.
    fn run_job(&self, sim: &Simulator, job: &CircuitJob, shots: u64) -> Result<ShotCounts, QsimError> {
        match self {
            ExecutionBackend::ClassicalCpu | ExecutionBackend::SimulatorIdeal => {
                sample_shots(&sim.run(&job.circuit)?, shots, job.seed)
            }
            ExecutionBackend::SimulatorNoisy { noise } | ExecutionBackend::RemoteQpuMock { noise, .. } => {
                let nm = NoiseModel { rng_seed: job.seed, ..noise.clone() };
                sim.run_noisy(&job.circuit, &nm, shots)
            }
        }
    }
}

impl QuantumBackend for ExecutionBackend {
    fn name(&self) -> String {
        match self {
            ExecutionBackend::ClassicalCpu => "classical_cpu".into(),
            ExecutionBackend::SimulatorIdeal => "simulator_ideal".into(),
            ExecutionBackend::SimulatorNoisy { noise } => format!("simulator_noisy(p={})", noise.per_gate_error),
            ExecutionBackend::RemoteQpuMock { noise, .. } => format!("remote_qpu_mock(p={})", noise.per_gate_error),
        }
    }

    fn max_circuits_per_call(&self) -> usize {
        match self {
            ExecutionBackend::RemoteQpuMock { latency, .. } => latency.batch_size,
            _ => usize::MAX,
        }
    }

    fn execute(&self, jobs: &[CircuitJob], shots: u64, call_index: u64) -> Result<Execution, BackendError> {
        let max = self.max_circuits_per_call();
        if jobs.len() > max {
            return Err(BackendError::BatchTooLarge { got: jobs.len(), max });
        }
        if let ExecutionBackend::SimulatorNoisy { noise } | ExecutionBackend::RemoteQpuMock { noise, .. } = self {
            noise.validate()?;
        }
        let sim = Simulator::default();
        let counts = jobs
            .par_iter()
            .map(|j| self.run_job(&sim, j, shots))
            .collect::<Result<Vec<_>, _>>()?;
        let timing = match self {
            ExecutionBackend::RemoteQpuMock { latency, .. } => Some(latency.draw_batch(call_index)),
            _ => None,
        };
        Ok(Execution { counts, timing })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::Gate;

    fn jobs(n: usize) -> Vec<CircuitJob> {
        (0..n)
            .map(|i| CircuitJob {
                circuit: Circuit::from_gates(2, vec![Gate::H(0), Gate::Ry(1, 0.3 * i as f64), Gate::Cz(0, 1)]).unwrap(),
                seed: 100 + i as u64,
            })
            .collect()
    }

    #[test]
    fn zero_noise_matches_ideal() {
        let j = jobs(5);
        let ideal = ExecutionBackend::SimulatorIdeal.execute(&j, 1000, 0).unwrap();
        let noisy = ExecutionBackend::SimulatorNoisy { noise: NoiseModel::ideal(77) }.execute(&j, 1000, 0).unwrap();
        let remote = ExecutionBackend::RemoteQpuMock { latency: LatencyModel::default(), noise: NoiseModel::ideal(1) }
            .execute(&j, 1000, 0)
            .unwrap();
        assert_eq!(ideal.counts, noisy.counts);
        assert_eq!(ideal.counts, remote.counts);
        assert!(ideal.timing.is_none());
        assert!(remote.timing.is_some());
    }

    #[test]
    fn remote_rejects_oversized_calls() {
        let lm = LatencyModel { batch_size: 3, ..Default::default() };
        let b = ExecutionBackend::RemoteQpuMock { latency: lm, noise: NoiseModel::ideal(0) };
        assert_eq!(b.execute(&jobs(4), 10, 0).unwrap_err(), BackendError::BatchTooLarge { got: 4, max: 3 });
    }

    #[test]
    fn json_shape() {
        let b = ExecutionBackend::SimulatorNoisy { noise: NoiseModel::new(0.01, 3) };
        let s = serde_json::to_string(&b).unwrap();
        assert_eq!(s, r#"{"kind":"simulator_noisy","noise":{"per_gate_error":0.01,"rng_seed":3}}"#);
        assert_eq!(serde_json::from_str::<ExecutionBackend>(&s).unwrap(), b);
    }
}
