use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::shots::{sample_index, sample_shots};
use super::{Circuit, QsimError, ShotCounts, Simulator, StateVector};
use crate::rng::stream_rng;

/// Shots simulated per independent RNG lane.
const LANE_SHOTS: u64 = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    fn matrix(self) -> [[Complex64; 2]; 2] {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match self {
            Pauli::X => [[o, l], [l, o]],
            Pauli::Y => [[o, -i], [i, o]],
            Pauli::Z => [[l, o], [o, -l]],
        }
    }

    fn from_index(i: u32) -> Self {
        match i {
            0 => Pauli::X,
            1 => Pauli::Y,
            _ => Pauli::Z,
        }
    }
}

/// Stochastic Pauli channel applied after every gate.
///
/// After each gate, every target qubit independently suffers a Pauli error
/// with probability `per_gate_error`; the Pauli is X, Y or Z with equal odds
/// unless `forced_pauli` pins it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub per_gate_error: f64,
    pub rng_seed: u64,
    /// Test hook: always inject this Pauli instead of a random one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forced_pauli: Option<Pauli>,
}

impl NoiseModel {
    pub fn new(per_gate_error: f64, rng_seed: u64) -> Self {
        NoiseModel { per_gate_error, rng_seed, forced_pauli: None }
    }

    pub fn ideal(rng_seed: u64) -> Self {
        Self::new(0.0, rng_seed)
    }

    pub fn validate(&self) -> Result<(), QsimError> {
        if !(0.0..=1.0).contains(&self.per_gate_error) {
            return Err(QsimError::InvalidErrorRate(self.per_gate_error));
        }
        Ok(())
    }
}

impl Simulator {
    /// Executes `circuit` once per shot, each shot along its own noisy
    /// trajectory, and histograms the terminal measurements.
    ///
    /// With `per_gate_error == 0` this is exactly [`Simulator::run`] followed by
    /// [`sample_shots`] with the noise seed.
    pub fn run_noisy(&self, circuit: &Circuit, noise: &NoiseModel, shots: u64) -> Result<ShotCounts, QsimError> {
        noise.validate()?;
        if shots == 0 {
            return Err(QsimError::NoShots);
        }
        if noise.per_gate_error == 0.0 {
            let state = self.run(circuit)?;
            return sample_shots(&state, shots, noise.rng_seed);
        }
        self.check_capacity(circuit.n_qubits())?;

        let n_lanes = shots.div_ceil(LANE_SHOTS);
        let dim = 1usize << circuit.n_qubits();
        let histogram = (0..n_lanes)
            .into_par_iter()
            .map(|lane| {
                let lane_shots = LANE_SHOTS.min(shots - lane * LANE_SHOTS);
                let mut rng = stream_rng(noise.rng_seed, lane);
                let mut hist = vec![0u64; dim];
                for _ in 0..lane_shots {
                    let state = trajectory(circuit, noise, &mut rng);
                    hist[sample_index(&state.probabilities(), &mut rng)] += 1;
                }
                hist
            })
            .reduce(
                || vec![0u64; dim],
                |mut a, b| {
                    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                    a
                },
            );
        Ok(ShotCounts::from_histogram(circuit.n_qubits(), &histogram))
    }
}

fn trajectory<R: rand::Rng>(circuit: &Circuit, noise: &NoiseModel, rng: &mut R) -> StateVector {
    let mut state = StateVector::zero(circuit.n_qubits());
    for gate in circuit.gates() {
        state.apply_unchecked(gate);
        for q in gate.targets() {
            if rng.random::<f64>() < noise.per_gate_error {
                let pauli = noise
                    .forced_pauli
                    .unwrap_or_else(|| Pauli::from_index(rng.random_range(0..3)));
                state.apply_matrix2(q, &pauli.matrix());
            }
        }
    }
    state
}

/// [`Simulator::run_noisy`] with the default qubit cap.
pub fn run_noisy(circuit: &Circuit, noise: &NoiseModel, shots: u64) -> Result<ShotCounts, QsimError> {
    Simulator::default().run_noisy(circuit, noise, shots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::{run_statevector, Gate};

    fn small_circuit() -> Circuit {
        Circuit::from_gates(
            2,
            vec![Gate::H(0), Gate::Ry(1, 0.9), Gate::Cnot { control: 0, target: 1 }, Gate::Rx(0, 0.4)],
        )
        .unwrap()
    }

    #[test]
    fn zero_error_matches_ideal_sampling_bit_for_bit() {
        let c = small_circuit();
        let noisy = run_noisy(&c, &NoiseModel::ideal(42), 4000).unwrap();
        let ideal = sample_shots(&run_statevector(&c).unwrap(), 4000, 42).unwrap();
        assert_eq!(noisy, ideal);
    }

    #[test]
    fn error_rate_outside_unit_interval_is_rejected() {
        let c = small_circuit();
        for p in [-0.1, 1.5, f64::NAN] {
            assert!(matches!(
                run_noisy(&c, &NoiseModel::new(p, 0), 10),
                Err(QsimError::InvalidErrorRate(_))
            ));
        }
    }

    #[test]
    fn forced_z_after_hadamard_keeps_even_odds() {
        let c = Circuit::from_gates(1, vec![Gate::H(0)]).unwrap();
        let noise = NoiseModel { per_gate_error: 1.0, rng_seed: 5, forced_pauli: Some(Pauli::Z) };
        let shots = 20_000;
        let counts = run_noisy(&c, &noise, shots).unwrap();
        let sigma = (shots as f64 * 0.25).sqrt();
        assert!((counts.get("0") as f64 - 10_000.0).abs() < 5.0 * sigma);
    }

    #[test]
    fn forced_x_flips_deterministic_outcome() {
        let c = Circuit::from_gates(1, vec![Gate::Rz(0, 0.3)]).unwrap();
        let noise = NoiseModel { per_gate_error: 1.0, rng_seed: 5, forced_pauli: Some(Pauli::X) };
        assert_eq!(run_noisy(&c, &noise, 300).unwrap().get("1"), 300);
    }

    #[test]
    fn seeded_noisy_runs_repeat() {
        let c = small_circuit();
        let n = NoiseModel::new(0.05, 9);
        assert_eq!(run_noisy(&c, &n, 1000).unwrap(), run_noisy(&c, &n, 1000).unwrap());
    }
}
