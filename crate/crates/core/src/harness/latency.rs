use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::backend::{CircuitJob, ExecutionBackend, QuantumBackend};
use super::HarnessError;
use crate::qsim::{Circuit, NoiseModel, ShotCounts};
use crate::rng::{derive_seed, stream_rng, Rng};

/// A distribution over non-negative seconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "dist", rename_all = "snake_case")]
pub enum Delay {
    Fixed { value: f64 },
    Uniform { min: f64, max: f64 },
    LogUniform { min: f64, max: f64 },
}

impl Delay {
    fn validate(&self, what: &str) -> Result<(), HarnessError> {
        let ok = match *self {
            Delay::Fixed { value } => value.is_finite() && value >= 0.0,
            Delay::Uniform { min, max } => min.is_finite() && max.is_finite() && 0.0 <= min && min <= max,
            Delay::LogUniform { min, max } => min.is_finite() && max.is_finite() && 0.0 < min && min <= max,
        };
        if ok {
            Ok(())
        } else {
            Err(HarnessError::InvalidConfig(format!("{what}: invalid distribution {self:?}")))
        }
    }

    pub fn sample(&self, rng: &mut Rng) -> f64 {
        match *self {
            Delay::Fixed { value } => value,
            Delay::Uniform { min, max } if min == max => min,
            Delay::Uniform { min, max } => rng.random_range(min..max),
            Delay::LogUniform { min, max } if min == max => min,
            Delay::LogUniform { min, max } => rng.random_range(min.ln()..max.ln()).exp(),
        }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            Delay::Fixed { value } => value,
            Delay::Uniform { min, max } => 0.5 * (min + max),
            Delay::LogUniform { min, max } if min == max => min,
            Delay::LogUniform { min, max } => (max - min) / (max / min).ln(),
        }
    }

    pub fn support(&self) -> (f64, f64) {
        match *self {
            Delay::Fixed { value } => (value, value),
            Delay::Uniform { min, max } | Delay::LogUniform { min, max } => (min, max),
        }
    }
}

/// Operational model of a shared, remotely queued quantum accelerator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LatencyModel {
    /// Circuits per API call.
    pub batch_size: usize,
    pub shots_per_circuit: u64,
    pub queue_wait: Delay,
    /// Device time charged per call, independent of how full the call is.
    pub qpu_seconds_per_batch: Delay,
    pub network_seconds_per_call: f64,
    pub seed: u64,
}

impl Default for LatencyModel {
    fn default() -> Self {
        LatencyModel {
            batch_size: 75,
            shots_per_circuit: 1000,
            queue_wait: Delay::LogUniform { min: 5.0, max: 3600.0 },
            qpu_seconds_per_batch: Delay::Uniform { min: 88.0, max: 90.0 },
            network_seconds_per_call: 0.5,
            seed: 0,
        }
    }
}

/// Virtual time charged to one call.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BatchTiming {
    pub queue_s: f64,
    pub qpu_s: f64,
    pub network_s: f64,
}

impl BatchTiming {
    pub fn total(&self) -> f64 {
        self.queue_s + self.qpu_s + self.network_s
    }
}

impl LatencyModel {
    /// No queue contention: a dedicated machine.
    pub fn exclusive() -> Self {
        LatencyModel { queue_wait: Delay::Fixed { value: 0.0 }, ..Default::default() }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.batch_size == 0 || self.shots_per_circuit == 0 {
            return Err(HarnessError::InvalidConfig("batch size and shots must be at least 1".into()));
        }
        if !(self.network_seconds_per_call.is_finite() && self.network_seconds_per_call >= 0.0) {
            return Err(HarnessError::InvalidConfig("network time must be non-negative".into()));
        }
        self.queue_wait.validate("queue_wait")?;
        self.qpu_seconds_per_batch.validate("qpu_seconds_per_batch")
    }

    /// Mean device time per circuit execution (one shot), in milliseconds.
    pub fn per_circuit_run_ms(&self) -> f64 {
        1000.0 * self.qpu_seconds_per_batch.mean() / (self.batch_size as f64 * self.shots_per_circuit as f64)
    }

    /// Queue wait and device time for call `call_index`, reproducible from the seed.
    pub fn draw_batch(&self, call_index: u64) -> BatchTiming {
        let mut rng = stream_rng(self.seed, call_index);
        let queue_s = self.queue_wait.sample(&mut rng);
        let qpu_s = self.qpu_seconds_per_batch.sample(&mut rng);
        BatchTiming { queue_s, qpu_s, network_s: self.network_seconds_per_call }
    }

    /// One circuit at `shots` shots on a dedicated machine: device time plus
    /// one network round trip, no queue.
    pub fn single_sample_latency_s(&self, shots: u64) -> f64 {
        self.per_circuit_run_ms() / 1000.0 * shots as f64 + self.network_seconds_per_call
    }
}

/// Wall-clock and virtual timings for one method run.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TimingRecord {
    pub train_wall_s: f64,
    pub validate_wall_s: f64,
    pub circuits: usize,
    /// One entry per remote call, in call order.
    pub batches: Vec<BatchTiming>,
}

impl TimingRecord {
    pub fn batch_count(&self) -> usize {
        self.batches.len()
    }

    pub fn queue_total_s(&self) -> f64 {
        self.batches.iter().map(|b| b.queue_s).sum()
    }

    pub fn qpu_total_s(&self) -> f64 {
        self.batches.iter().map(|b| b.qpu_s).sum()
    }

    pub fn network_total_s(&self) -> f64 {
        self.batches.iter().map(|b| b.network_s).sum()
    }

    /// Σ over calls of queue + device + network time.
    pub fn simulated_total_s(&self) -> f64 {
        self.batches.iter().map(BatchTiming::total).sum()
    }
}

/// `ceil(n_circuits / batch_size)`; both arguments are expected to be ≥ 1.
pub fn batch_circuits(n_circuits: usize, batch_size: usize) -> usize {
    n_circuits.div_ceil(batch_size.max(1))
}

/// Virtual timeline of `n_circuits` remote executions without running them.
pub fn simulate_remote_timing(n_circuits: usize, lm: &LatencyModel) -> Result<TimingRecord, HarnessError> {
    lm.validate()?;
    let batches = (0..batch_circuits(n_circuits, lm.batch_size) as u64).map(|b| lm.draw_batch(b)).collect();
    Ok(TimingRecord { circuits: n_circuits, batches, ..Default::default() })
}

/// Runs `circuits` through the remote mock in calls of `lm.batch_size`.
/// Circuit `i` uses seed `derive_seed(nm.rng_seed, i)`; no real time passes.
pub fn simulate_remote_execution(
    circuits: &[Circuit],
    lm: &LatencyModel,
    nm: &NoiseModel,
) -> Result<(Vec<ShotCounts>, TimingRecord), HarnessError> {
    if circuits.is_empty() {
        return Err(HarnessError::InvalidConfig("no circuits to execute".into()));
    }
    lm.validate()?;
    let backend = ExecutionBackend::RemoteQpuMock { latency: lm.clone(), noise: nm.clone() };
    let mut counts = Vec::with_capacity(circuits.len());
    let mut record = TimingRecord { circuits: circuits.len(), ..Default::default() };
    for (b, chunk) in circuits.chunks(lm.batch_size).enumerate() {
        let base = b * lm.batch_size;
        let jobs: Vec<CircuitJob> = chunk
            .iter()
            .enumerate()
            .map(|(i, c)| CircuitJob { circuit: c.clone(), seed: derive_seed(nm.rng_seed, (base + i) as u64) })
            .collect();
        let exec = backend.execute(&jobs, lm.shots_per_circuit, b as u64)?;
        counts.extend(exec.counts);
        record.batches.extend(exec.timing);
    }
    Ok((counts, record))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::Gate;

    #[test]
    fn batch_counts() {
        assert_eq!(batch_circuits(2327, 75), 32);
        assert_eq!(batch_circuits(75, 75), 1);
        assert_eq!(batch_circuits(76, 75), 2);
    }

    #[test]
    fn per_circuit_time_default() {
        let ms = LatencyModel::default().per_circuit_run_ms();
        assert!((1.15..=1.25).contains(&ms), "{ms}");
    }

    #[test]
    fn degenerate_distributions_are_exact() {
        let lm = LatencyModel {
            queue_wait: Delay::Fixed { value: 0.0 },
            qpu_seconds_per_batch: Delay::Fixed { value: 89.0 },
            network_seconds_per_call: 0.0,
            ..Default::default()
        };
        let t = simulate_remote_timing(2327, &lm).unwrap();
        assert_eq!(t.batch_count(), 32);
        assert_eq!(t.simulated_total_s(), 2848.0);
    }

    #[test]
    fn timing_draws_stay_in_support_and_repeat() {
        let lm = LatencyModel::default().with_seed(5);
        let a = simulate_remote_timing(2327, &lm).unwrap();
        assert_eq!(a, simulate_remote_timing(2327, &lm).unwrap());
        for b in &a.batches {
            assert!((5.0..=3600.0).contains(&b.queue_s));
            assert!((88.0..=90.0).contains(&b.qpu_s));
        }
        let total = a.simulated_total_s();
        assert!(total >= 32.0 * 93.0 && total <= 32.0 * 3690.5);
    }

    #[test]
    fn remote_execution_returns_one_histogram_per_circuit() {
        let c = Circuit::from_gates(1, vec![Gate::H(0)]).unwrap();
        let lm = LatencyModel { batch_size: 4, shots_per_circuit: 10, ..Default::default() };
        let (counts, t) = simulate_remote_execution(&vec![c; 9], &lm, &NoiseModel::ideal(0)).unwrap();
        assert_eq!(counts.len(), 9);
        assert_eq!(t.batch_count(), 3);
        assert!(counts.iter().all(|c| c.total_shots() == 10));
    }

    #[test]
    fn single_sample_latency_fits_a_minute() {
        let s = LatencyModel::exclusive().single_sample_latency_s(1000);
        assert!(s > 1.0 && s < 2.0, "{s}");
    }

    #[test]
    fn log_uniform_mean() {
        let d = Delay::LogUniform { min: 1.0, max: std::f64::consts::E };
        assert!((d.mean() - (std::f64::consts::E - 1.0)).abs() < 1e-12);
    }
}
