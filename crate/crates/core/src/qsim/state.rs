use num_complex::Complex64;

use super::gate::{zz_eigenvalue, Gate, Matrix2};
use super::QsimError;

/// Dense pure state of an n-qubit register.
///
/// Amplitude index `i` encodes qubit `q` in bit `q` of `i` (qubit 0 is the
/// least significant bit).
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// |0…0⟩ on `n_qubits` qubits.
    pub fn zero(n_qubits: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        StateVector { n_qubits, amplitudes }
    }

    /// Computational basis state `index`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self, QsimError> {
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(QsimError::QubitOutOfRange { qubit: index, n_qubits });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n_qubits, amplitudes })
    }

    /// Wraps raw amplitudes. The length must be a power of two matching
    /// `n_qubits`; normalisation is the caller's responsibility.
    pub fn from_amplitudes(n_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self, QsimError> {
        if amplitudes.len() != 1usize << n_qubits {
            return Err(QsimError::AmplitudeLength {
                expected: 1usize << n_qubits,
                got: amplitudes.len(),
            });
        }
        Ok(StateVector { n_qubits, amplitudes })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Born-rule probabilities |α_i|².
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64, QsimError> {
        if self.n_qubits != other.n_qubits {
            return Err(QsimError::AmplitudeLength {
                expected: self.amplitudes.len(),
                got: other.amplitudes.len(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Applies `gate` in place.
    pub fn apply(&mut self, gate: &Gate) -> Result<(), QsimError> {
        gate.validate(self.n_qubits)?;
        self.apply_unchecked(gate);
        Ok(())
    }

    /// Applies an already validated gate.
    pub(crate) fn apply_unchecked(&mut self, gate: &Gate) {
        if let Some(m) = gate.single_qubit_matrix() {
            let q = gate.targets().next().expect("single-qubit gate has a target");
            self.apply_matrix2(q, &m);
            return;
        }
        match *gate {
            Gate::Rzz(a, b, phi) => {
                let plus = Complex64::from_polar(1.0, phi);
                let minus = Complex64::from_polar(1.0, -phi);
                for (i, amp) in self.amplitudes.iter_mut().enumerate() {
                    let z = zz_eigenvalue((i >> a) & 1, (i >> b) & 1);
                    *amp *= if z > 0.0 { plus } else { minus };
                }
            }
            Gate::Cz(a, b) => {
                let mask = (1 << a) | (1 << b);
                for (i, amp) in self.amplitudes.iter_mut().enumerate() {
                    if i & mask == mask {
                        *amp = -*amp;
                    }
                }
            }
            Gate::Cnot { control, target } => {
                let c = 1 << control;
                let t = 1 << target;
                for i in 0..self.amplitudes.len() {
                    if i & c != 0 && i & t == 0 {
                        self.amplitudes.swap(i, i | t);
                    }
                }
            }
            _ => unreachable!("single-qubit gates handled above"),
        }
    }

    pub(crate) fn apply_matrix2(&mut self, qubit: usize, m: &Matrix2) {
        let bit = 1usize << qubit;
        for i in 0..self.amplitudes.len() {
            if i & bit == 0 {
                let j = i | bit;
                let a = self.amplitudes[i];
                let b = self.amplitudes[j];
                self.amplitudes[i] = m[0][0] * a + m[0][1] * b;
                self.amplitudes[j] = m[1][0] * a + m[1][1] * b;
            }
        }
    }

    /// Bit string for a basis index: character `q` is the value of qubit `q`.
    pub fn outcome_label(index: usize, n_qubits: usize) -> String {
        (0..n_qubits)
            .map(|q| if (index >> q) & 1 == 1 { '1' } else { '0' })
            .collect()
    }
}

/// Returns `state` transformed by `gate`.
pub fn apply_gate(mut state: StateVector, gate: &Gate) -> Result<StateVector, QsimError> {
    state.apply(gate)?;
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn hadamard_on_zero() {
        let s = apply_gate(StateVector::zero(1), &Gate::H(0)).unwrap();
        for a in s.amplitudes() {
            assert!((a - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn rzz_phases_follow_zz_eigenvalue() {
        let phi = 0.37;
        // |01⟩: qubit 0 = 0, qubit 1 = 1 → index 2
        let s = apply_gate(StateVector::basis(2, 2).unwrap(), &Gate::Rzz(0, 1, phi)).unwrap();
        assert!((s.amplitudes()[2] - Complex64::from_polar(1.0, -phi)).norm() < 1e-15);
        let s = apply_gate(StateVector::zero(2), &Gate::Rzz(0, 1, phi)).unwrap();
        assert!((s.amplitudes()[0] - Complex64::from_polar(1.0, phi)).norm() < 1e-15);
    }

    #[test]
    fn cnot_builds_bell_pair() {
        // (|00⟩ + |10⟩)/√2 in qubit-0-first labels: indices 0 and 1
        let h = FRAC_1_SQRT_2;
        let s = StateVector::from_amplitudes(2, vec![c(h, 0.0), c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        let s = apply_gate(s, &Gate::Cnot { control: 0, target: 1 }).unwrap();
        let expect = [h, 0.0, 0.0, h];
        for (a, e) in s.amplitudes().iter().zip(expect) {
            assert!((a - c(e, 0.0)).norm() < 1e-15);
        }
        assert_eq!(StateVector::outcome_label(3, 2), "11");
        assert_eq!(StateVector::outcome_label(1, 2), "10");
    }

    #[test]
    fn out_of_range_qubit_is_rejected() {
        let err = apply_gate(StateVector::zero(2), &Gate::Rx(5, 0.1)).unwrap_err();
        assert!(matches!(err, QsimError::QubitOutOfRange { qubit: 5, .. }));
    }

    #[test]
    fn bad_amplitude_length() {
        assert!(StateVector::from_amplitudes(2, vec![c(1.0, 0.0); 3]).is_err());
    }
}
