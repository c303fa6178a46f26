use std::f64::consts::PI;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::VqcError;
use crate::qsim::{Circuit, Gate};
use crate::rng::stream_rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Entangler {
    /// CZ on neighbouring qubits `(q, q+1)`.
    #[default]
    LinearCz,
    /// CZ on every pair.
    FullCz,
}

/// Layered hardware-efficient ansatz: per layer an RX and an RY on every
/// qubit, then a CZ entangling pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnsatzSpec {
    pub n_qubits: usize,
    pub layers: usize,
    #[serde(default)]
    pub entangler: Entangler,
}

impl AnsatzSpec {
    /// Two layers, linear entangler.
    pub fn new(n_qubits: usize) -> Self {
        AnsatzSpec { n_qubits, layers: 2, entangler: Entangler::LinearCz }
    }

    pub fn n_parameters(&self) -> usize {
        2 * self.n_qubits * self.layers
    }

    pub fn entangling_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.n_qubits;
        match self.entangler {
            Entangler::LinearCz => (1..n).map(|q| (q - 1, q)).collect(),
            Entangler::FullCz => (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect(),
        }
    }

    pub fn validate(&self) -> Result<(), VqcError> {
        if self.n_qubits == 0 || self.layers == 0 {
            return Err(VqcError::InvalidConfig("ansatz needs at least one qubit and one layer".into()));
        }
        Ok(())
    }
}

/// Ansatz angles, layer-major: `[rx_0 … rx_{n−1}, ry_0 … ry_{n−1}]` per layer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ThetaVector(pub Vec<f64>);

impl ThetaVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn check(&self, spec: &AnsatzSpec) -> Result<(), VqcError> {
        if self.len() != spec.n_parameters() {
            return Err(VqcError::ParameterCount { expected: spec.n_parameters(), got: self.len() });
        }
        if self.0.iter().any(|t| !t.is_finite()) {
            return Err(VqcError::InvalidConfig("theta contains a non-finite angle".into()));
        }
        Ok(())
    }
}

/// Uniform on `[−π, π]`, reproducible from `seed`.
pub fn initial_theta(spec: &AnsatzSpec, seed: u64) -> ThetaVector {
    let mut rng = stream_rng(seed, 0);
    ThetaVector((0..spec.n_parameters()).map(|_| rng.random_range(-PI..=PI)).collect())
}

pub(crate) fn ansatz_gates(theta: &ThetaVector, spec: &AnsatzSpec) -> Vec<Gate> {
    let n = spec.n_qubits;
    let pairs = spec.entangling_pairs();
    let mut gates = Vec::with_capacity(spec.layers * (2 * n + pairs.len()));
    for layer in theta.0.chunks(2 * n) {
        gates.extend((0..n).map(|q| Gate::Rx(q, layer[q])));
        gates.extend((0..n).map(|q| Gate::Ry(q, layer[n + q])));
        gates.extend(pairs.iter().map(|&(a, b)| Gate::Cz(a, b)));
    }
    gates
}

pub fn build_ansatz(theta: &ThetaVector, spec: &AnsatzSpec) -> Result<Circuit, VqcError> {
    spec.validate()?;
    theta.check(spec)?;
    Ok(Circuit::from_gates(spec.n_qubits, ansatz_gates(theta, spec))?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_angles_layout() {
        let c = build_ansatz(&ThetaVector(vec![0.0; 4]), &AnsatzSpec { layers: 1, ..AnsatzSpec::new(2) }).unwrap();
        assert_eq!(c.gates(), &[Gate::Rx(0, 0.0), Gate::Rx(1, 0.0), Gate::Ry(0, 0.0), Gate::Ry(1, 0.0), Gate::Cz(0, 1)]);
    }

    #[test]
    fn parameter_count() {
        assert_eq!(AnsatzSpec::new(2).n_parameters(), 8);
        let err = build_ansatz(&ThetaVector(vec![0.0; 7]), &AnsatzSpec::new(2)).unwrap_err();
        assert!(matches!(err, VqcError::ParameterCount { expected: 8, got: 7 }));
    }

    #[test]
    fn full_entangler_pairs() {
        let s = AnsatzSpec { entangler: Entangler::FullCz, ..AnsatzSpec::new(3) };
        assert_eq!(s.entangling_pairs(), vec![(0, 1), (0, 2), (1, 2)]);
        assert_eq!(AnsatzSpec::new(3).entangling_pairs(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn initial_theta_in_range_and_seeded() {
        let s = AnsatzSpec::new(3);
        let t = initial_theta(&s, 4);
        assert_eq!(t.len(), 12);
        assert!(t.0.iter().all(|v| v.abs() <= PI));
        assert_eq!(t, initial_theta(&s, 4));
        assert_ne!(t, initial_theta(&s, 5));
    }
}
