use std::collections::BTreeMap;

use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use super::{QsimError, StateVector};
use crate::rng::rng_from_seed;

/// Measurement histogram over full-register bit strings.
///
/// Keys use the [`StateVector::outcome_label`] convention: character `q` is
/// the value of qubit `q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShotCounts {
    n_bits: usize,
    counts: BTreeMap<String, u64>,
    total_shots: u64,
}

impl ShotCounts {
    /// Builds counts from a per-basis-index histogram; zero entries are dropped.
    pub fn from_histogram(n_bits: usize, histogram: &[u64]) -> Self {
        let mut counts = BTreeMap::new();
        let mut total_shots = 0;
        for (i, &c) in histogram.iter().enumerate() {
            if c > 0 {
                counts.insert(StateVector::outcome_label(i, n_bits), c);
                total_shots += c;
            }
        }
        ShotCounts { n_bits, counts, total_shots }
    }

    pub fn n_bits(&self) -> usize {
        self.n_bits
    }

    pub fn total_shots(&self) -> u64 {
        self.total_shots
    }

    pub fn counts(&self) -> &BTreeMap<String, u64> {
        &self.counts
    }

    pub fn get(&self, outcome: &str) -> u64 {
        self.counts.get(outcome).copied().unwrap_or(0)
    }

    pub fn frequency(&self, outcome: &str) -> f64 {
        self.get(outcome) as f64 / self.total_shots as f64
    }

    /// Fraction of shots whose bit string has an odd number of ones.
    pub fn odd_parity_fraction(&self) -> f64 {
        let odd: u64 = self
            .counts
            .iter()
            .filter(|(k, _)| k.bytes().filter(|&b| b == b'1').count() % 2 == 1)
            .map(|(_, &v)| v)
            .sum();
        odd as f64 / self.total_shots as f64
    }
}

/// Draws `shots` i.i.d. full-register measurements from `state`.
///
/// The multinomial is sampled as a chain of conditional binomials over the
/// basis states in index order, which is exact and costs O(2^n) per call
/// regardless of the shot count.
pub fn sample_shots(state: &StateVector, shots: u64, seed: u64) -> Result<ShotCounts, QsimError> {
    if shots == 0 {
        return Err(QsimError::NoShots);
    }
    let probs = state.probabilities();
    let histogram = multinomial(&probs, shots, seed);
    Ok(ShotCounts::from_histogram(state.n_qubits(), &histogram))
}

pub(crate) fn multinomial(probs: &[f64], shots: u64, seed: u64) -> Vec<u64> {
    let mut rng = rng_from_seed(seed);
    let mut histogram = vec![0u64; probs.len()];
    let mut remaining = shots;
    let mut mass: f64 = probs.iter().sum();
    for (i, &p) in probs.iter().enumerate() {
        if remaining == 0 {
            break;
        }
        if i + 1 == probs.len() {
            histogram[i] = remaining;
            break;
        }
        let q = if mass > 0.0 { (p / mass).clamp(0.0, 1.0) } else { 0.0 };
        let drawn = if q >= 1.0 {
            remaining
        } else if q <= 0.0 {
            0
        } else {
            Binomial::new(remaining, q).expect("q in (0,1)").sample(&mut rng)
        };
        histogram[i] = drawn;
        remaining -= drawn;
        mass -= p;
    }
    histogram
}

/// Inverse-CDF draw of a single basis index.
pub(crate) fn sample_index<R: rand::Rng>(probs: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.random();
    let total: f64 = probs.iter().sum();
    let mut acc = 0.0;
    let target = u * total;
    for (i, p) in probs.iter().enumerate() {
        acc += p;
        if target < acc {
            return i;
        }
    }
    // rounding left a sliver past the last bucket; land on the last nonzero one
    probs.iter().rposition(|&p| p > 0.0).unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::Gate;

    #[test]
    fn deterministic_state_collapses_to_one_outcome() {
        let c = sample_shots(&StateVector::zero(2), 1000, 1).unwrap();
        assert_eq!(c.get("00"), 1000);
        assert_eq!(c.counts().len(), 1);
        assert_eq!(c.total_shots(), 1000);
    }

    #[test]
    fn balanced_coin_within_five_sigma() {
        let mut s = StateVector::zero(1);
        s.apply(&Gate::H(0)).unwrap();
        let shots = 100_000u64;
        let c = sample_shots(&s, shots, 99).unwrap();
        let sigma = (shots as f64 * 0.25).sqrt();
        for k in ["0", "1"] {
            assert!((c.get(k) as f64 - 50_000.0).abs() < 5.0 * sigma, "{k}: {}", c.get(k));
        }
    }

    #[test]
    fn same_seed_same_counts() {
        let mut s = StateVector::zero(2);
        s.apply(&Gate::H(0)).unwrap();
        s.apply(&Gate::Ry(1, 0.7)).unwrap();
        assert_eq!(sample_shots(&s, 5000, 3).unwrap(), sample_shots(&s, 5000, 3).unwrap());
        assert_ne!(sample_shots(&s, 5000, 3).unwrap(), sample_shots(&s, 5000, 4).unwrap());
    }

    #[test]
    fn zero_shots_rejected() {
        assert!(matches!(sample_shots(&StateVector::zero(1), 0, 0), Err(QsimError::NoShots)));
    }

    #[test]
    fn parity_fraction_counts_odd_strings() {
        let c = ShotCounts::from_histogram(2, &[10, 20, 30, 40]);
        // labels: 0→"00", 1→"10", 2→"01", 3→"11"
        assert!((c.odd_parity_fraction() - 0.5).abs() < 1e-15);
        let c = ShotCounts::from_histogram(2, &[0, 0, 0, 7]);
        assert_eq!(c.odd_parity_fraction(), 0.0);
    }
}
