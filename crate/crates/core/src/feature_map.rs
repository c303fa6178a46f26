//! Second-order ZZ data embedding.
//!
//! The embedded state is `U_Φ(x) H⊗n U_Φ(x) H⊗n |0…0⟩` where the diagonal
//! block `U_Φ(x)` is a product of `exp(i φ_k(x) Z_k)` single-qubit phases and
//! `exp(i φ_kl(x) Z_k Z_l)` pair couplings, with
//!
//! ```text
//! φ_k(x)  = x_k
//! φ_kl(x) = (π − x_k)(π − x_l)
//! ```
//!
//! Both exponentials are realised exactly, with a positive sign in the
//! exponent. In the simulator's half-angle convention `exp(i φ Z)` is
//! `Rz(−2φ)`; the pair term maps directly onto [`Gate::Rzz`], which is
//! defined without a half angle.
//!
//! Inputs are expected to be pre-scaled by the pipeline so that every
//! component lies in `[0, π]`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::qsim::{run_statevector, Circuit, Gate, QsimError, StateVector};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FeatureMapError {
    #[error("feature index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("pair coupling needs two distinct qubits, got ({0}, {0})")]
    SameIndex(usize),
    #[error("feature vector has dimension {got}, map expects {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("feature value {0} is not finite")]
    NonFinite(f64),
    #[error(transparent)]
    Qsim(#[from] QsimError),
}

/// A real-valued input point, one component per qubit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FeatureVector(pub Vec<f64>);

impl FeatureVector {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for FeatureVector {
    fn from(v: Vec<f64>) -> Self {
        FeatureVector(v)
    }
}

impl From<&[f64]> for FeatureVector {
    fn from(v: &[f64]) -> Self {
        FeatureVector(v.to_vec())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureMapSpec {
    pub n_features: usize,
    pub repetitions: usize,
    pub include_two_body: bool,
}

impl FeatureMapSpec {
    pub fn new(n_features: usize) -> Self {
        FeatureMapSpec { n_features, repetitions: 2, include_two_body: true }
    }

    /// Coupled qubit pairs: `(0, 1)` for two features, a linear chain beyond.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        if !self.include_two_body {
            return Vec::new();
        }
        (1..self.n_features).map(|k| (k - 1, k)).collect()
    }
}

/// φ_k(x) = x_k.
pub fn phase_one_body(x: &FeatureVector, k: usize) -> Result<f64, FeatureMapError> {
    x.0.get(k)
        .copied()
        .ok_or(FeatureMapError::IndexOutOfRange { index: k, dim: x.dim() })
}

/// φ_kl(x) = (π − x_k)(π − x_l).
pub fn phase_two_body(x: &FeatureVector, k: usize, l: usize) -> Result<f64, FeatureMapError> {
    if k == l {
        return Err(FeatureMapError::SameIndex(k));
    }
    let xk = phase_one_body(x, k)?;
    let xl = phase_one_body(x, l)?;
    Ok((PI - xk) * (PI - xl))
}

/// `exp(i θ Z)` on `qubit`.
pub fn phase_z(qubit: usize, theta: f64) -> Gate {
    Gate::Rz(qubit, -2.0 * theta)
}

/// `exp(i θ Z⊗Z)` on a pair.
pub fn phase_zz(a: usize, b: usize, theta: f64) -> Gate {
    Gate::Rzz(a, b, theta)
}

/// Builds the embedding circuit for `x`.
///
/// The gate kinds and their order depend only on `spec`; `x` only changes
/// angles.
pub fn build_feature_map(x: &FeatureVector, spec: &FeatureMapSpec) -> Result<Circuit, FeatureMapError> {
    if x.dim() != spec.n_features {
        return Err(FeatureMapError::DimensionMismatch { expected: spec.n_features, got: x.dim() });
    }
    if let Some(&bad) = x.0.iter().find(|v| !v.is_finite()) {
        return Err(FeatureMapError::NonFinite(bad));
    }
    let n = spec.n_features;
    let pairs = spec.pairs();
    let mut gates = Vec::with_capacity(spec.repetitions * (2 * n + pairs.len()));
    for _ in 0..spec.repetitions {
        gates.extend((0..n).map(Gate::H));
        for k in 0..n {
            gates.push(phase_z(k, phase_one_body(x, k)?));
        }
        for &(k, l) in &pairs {
            gates.push(phase_zz(k, l, phase_two_body(x, k, l)?));
        }
    }
    Ok(Circuit::from_gates(n, gates)?)
}

/// The embedded state |Φ(x)⟩.
pub fn embed(x: &FeatureVector, spec: &FeatureMapSpec) -> Result<StateVector, FeatureMapError> {
    Ok(run_statevector(&build_feature_map(x, spec)?)?)
}

/// |⟨Φ(x1)|Φ(x2)⟩|².
pub fn embedding_fidelity(
    x1: &FeatureVector,
    x2: &FeatureVector,
    spec: &FeatureMapSpec,
) -> Result<f64, FeatureMapError> {
    let a = embed(x1, spec)?;
    let b = embed(x2, spec)?;
    Ok(a.inner(&b)?.norm_sqr().min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::GateKind;

    fn fv(v: &[f64]) -> FeatureVector {
        FeatureVector(v.to_vec())
    }

    #[test]
    fn one_body_is_identity() {
        assert_eq!(phase_one_body(&fv(&[0.5, 0.3]), 0).unwrap(), 0.5);
        assert_eq!(phase_one_body(&fv(&[0.0, 0.0]), 1).unwrap(), 0.0);
        assert_eq!(phase_one_body(&fv(&[PI, PI]), 0).unwrap(), PI);
        assert!(phase_one_body(&fv(&[0.1]), 1).is_err());
    }

    #[test]
    fn two_body_values() {
        assert_eq!(phase_two_body(&fv(&[PI, PI]), 0, 1).unwrap(), 0.0);
        assert_eq!(phase_two_body(&fv(&[0.0, 0.0]), 0, 1).unwrap(), PI * PI);
        assert!((phase_two_body(&fv(&[PI / 2.0, PI / 2.0]), 0, 1).unwrap() - PI * PI / 4.0).abs() < 1e-15);
        assert_eq!(phase_two_body(&fv(&[1.0, 2.0]), 1, 1), Err(FeatureMapError::SameIndex(1)));
    }

    #[test]
    fn two_feature_map_has_ten_gates() {
        let c = build_feature_map(&fv(&[0.5, 0.3]), &FeatureMapSpec::new(2)).unwrap();
        assert_eq!(c.len(), 10);
        let kinds: Vec<_> = c.gates().iter().map(|g| g.kind()).collect();
        use GateKind::*;
        assert_eq!(kinds, vec![H, H, Rz, Rz, Rzz, H, H, Rz, Rz, Rzz]);
    }

    #[test]
    fn corner_input_silences_pair_term() {
        let c = build_feature_map(&fv(&[PI, PI]), &FeatureMapSpec::new(2)).unwrap();
        for g in c.gates() {
            if let Gate::Rzz(_, _, a) = g {
                assert_eq!(*a, 0.0);
            }
        }
    }

    #[test]
    fn structure_does_not_depend_on_input() {
        let spec = FeatureMapSpec::new(3);
        let a = build_feature_map(&fv(&[0.1, 0.2, 0.3]), &spec).unwrap();
        let b = build_feature_map(&fv(&[2.9, 1.0, 0.0]), &spec).unwrap();
        let shape = |c: &Circuit| c.gates().iter().map(|g| (g.kind(), g.targets().collect::<Vec<_>>())).collect::<Vec<_>>();
        assert_eq!(shape(&a), shape(&b));
        assert_eq!(spec.pairs(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn dimension_mismatch() {
        let err = build_feature_map(&fv(&[0.1]), &FeatureMapSpec::new(2)).unwrap_err();
        assert_eq!(err, FeatureMapError::DimensionMismatch { expected: 2, got: 1 });
        assert!(embedding_fidelity(&fv(&[0.1, 0.2]), &fv(&[0.1]), &FeatureMapSpec::new(2)).is_err());
    }

    #[test]
    fn self_fidelity_is_one() {
        let x = fv(&[0.7, 0.2]);
        let f = embedding_fidelity(&x, &x, &FeatureMapSpec::new(2)).unwrap();
        assert!((f - 1.0).abs() < 1e-10);
    }
}
