use serde::{Deserialize, Serialize};

use super::{Gate, QsimError};

/// An ordered gate list over a fixed register.
///
/// Serialized as `{"n_qubits": n, "gates": [{"kind", "targets", "angle"}, ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCircuit")]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
}

#[derive(Deserialize)]
struct RawCircuit {
    n_qubits: usize,
    gates: Vec<Gate>,
}

impl TryFrom<RawCircuit> for Circuit {
    type Error = QsimError;

    fn try_from(raw: RawCircuit) -> Result<Self, Self::Error> {
        Circuit::from_gates(raw.n_qubits, raw.gates)
    }
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Circuit { n_qubits, gates: Vec::new() }
    }

    pub fn from_gates(n_qubits: usize, gates: Vec<Gate>) -> Result<Self, QsimError> {
        for g in &gates {
            g.validate(n_qubits)?;
        }
        Ok(Circuit { n_qubits, gates })
    }

    pub fn push(&mut self, gate: Gate) -> Result<&mut Self, QsimError> {
        gate.validate(self.n_qubits)?;
        self.gates.push(gate);
        Ok(self)
    }

    /// Appends every gate of `other`. Both circuits must share a register width.
    pub fn extend(&mut self, other: &Circuit) -> Result<&mut Self, QsimError> {
        if other.n_qubits != self.n_qubits {
            return Err(QsimError::RegisterMismatch {
                expected: self.n_qubits,
                got: other.n_qubits,
            });
        }
        self.gates.extend_from_slice(&other.gates);
        Ok(self)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("circuit serialization is infallible")
    }

    pub fn from_json(s: &str) -> Result<Self, QsimError> {
        serde_json::from_str(s).map_err(|e| QsimError::MalformedGate(e.to_string()))
    }
}
