//! Dense statevector simulation.
//!
//! States are stored as `2^n` complex amplitudes with qubit `q` in bit `q` of
//! the basis index. Measurement is terminal and always covers the whole
//! register. Noise is modelled by sampling Pauli-error trajectories rather
//! than evolving a density matrix.

mod circuit;
mod gate;
mod noise;
mod shots;
mod state;

use thiserror::Error;

pub use circuit::Circuit;
pub use gate::{Gate, GateKind, GateRecord};
pub use noise::{run_noisy, NoiseModel, Pauli};
pub use shots::{sample_shots, ShotCounts};
pub use state::{apply_gate, StateVector};

/// Default register cap: 12 qubits, 64 KiB of amplitudes.
pub const DEFAULT_MAX_QUBITS: usize = 12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QsimError {
    #[error("qubit {qubit} out of range for a {n_qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },
    #[error("gate lists qubit {0} more than once")]
    DuplicateTarget(usize),
    #[error("malformed gate: {0}")]
    MalformedGate(String),
    #[error("{requested} qubits exceeds the simulator cap of {cap}")]
    Capacity { requested: usize, cap: usize },
    #[error("expected {expected} amplitudes, got {got}")]
    AmplitudeLength { expected: usize, got: usize },
    #[error("circuit register width {got} does not match {expected}")]
    RegisterMismatch { expected: usize, got: usize },
    #[error("per-gate error probability {0} is outside [0, 1]")]
    InvalidErrorRate(f64),
    #[error("shot count must be at least 1")]
    NoShots,
}

impl QsimError {
    pub fn is_validation(&self) -> bool {
        !matches!(self, QsimError::Capacity { .. })
    }
}

/// Ideal and noisy circuit execution with a configurable register cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Simulator {
    pub max_qubits: usize,
}

impl Default for Simulator {
    fn default() -> Self {
        Simulator { max_qubits: DEFAULT_MAX_QUBITS }
    }
}

impl Simulator {
    fn check_capacity(&self, n_qubits: usize) -> Result<(), QsimError> {
        if n_qubits > self.max_qubits {
            return Err(QsimError::Capacity { requested: n_qubits, cap: self.max_qubits });
        }
        Ok(())
    }

    /// Applies every gate of `circuit` to |0…0⟩.
    pub fn run(&self, circuit: &Circuit) -> Result<StateVector, QsimError> {
        self.check_capacity(circuit.n_qubits())?;
        let mut state = StateVector::zero(circuit.n_qubits());
        for gate in circuit.gates() {
            state.apply_unchecked(gate);
        }
        Ok(state)
    }
}

/// [`Simulator::run`] with the default qubit cap.
pub fn run_statevector(circuit: &Circuit) -> Result<StateVector, QsimError> {
    Simulator::default().run(circuit)
}
