use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{QuboError, QuboMatrix};
use crate::rng::stream_rng;

/// Largest dimension accepted by [`solve_exhaustive`].
pub const EXHAUSTIVE_MAX_DIM: usize = 24;

#[derive(Debug, Clone, PartialEq)]
pub struct QuboSolution {
    pub bits: Vec<u8>,
    pub energy: f64,
}

/// Geometric cooling from `initial_temperature` to `final_temperature` over
/// `sweeps` Metropolis sweeps, repeated `restarts` times from random states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AnnealSchedule {
    pub initial_temperature: f64,
    pub final_temperature: f64,
    pub sweeps: usize,
    pub restarts: usize,
    pub seed: u64,
}

impl Default for AnnealSchedule {
    fn default() -> Self {
        AnnealSchedule { initial_temperature: 5.0, final_temperature: 0.01, sweeps: 1000, restarts: 10, seed: 0 }
    }
}

impl AnnealSchedule {
    pub fn validate(&self) -> Result<(), QuboError> {
        let (t0, t1) = (self.initial_temperature, self.final_temperature);
        if !(t0.is_finite() && t1.is_finite() && t0 > 0.0 && t1 > 0.0) {
            return Err(QuboError::Schedule(format!("temperatures must be positive, got {t0} and {t1}")));
        }
        if t1 > t0 {
            return Err(QuboError::Schedule("final temperature exceeds the initial one".into()));
        }
        if self.restarts == 0 {
            return Err(QuboError::Schedule("at least one restart is required".into()));
        }
        Ok(())
    }

    fn temperature(&self, sweep: usize) -> f64 {
        if self.sweeps <= 1 {
            return self.initial_temperature;
        }
        let t = sweep as f64 / (self.sweeps - 1) as f64;
        self.initial_temperature * (self.final_temperature / self.initial_temperature).powf(t)
    }
}

/// Σ_{j≠i} Q_ij b_j for every i.
fn local_fields(q: &QuboMatrix, bits: &[u8]) -> Vec<f64> {
    let d = q.dim();
    let mut h = vec![0.0; d];
    for i in 0..d {
        for j in 0..d {
            if j != i && bits[j] != 0 {
                h[i] += q.coupling(i, j);
            }
        }
    }
    h
}

fn flip(q: &QuboMatrix, bits: &mut [u8], h: &mut [f64], i: usize) {
    let sign = if bits[i] == 0 { 1.0 } else { -1.0 };
    bits[i] ^= 1;
    for (j, hj) in h.iter_mut().enumerate() {
        if j != i {
            *hj += sign * q.coupling(i, j);
        }
    }
}

/// Energy change from flipping bit `i`.
#[inline]
fn delta(q: &QuboMatrix, bits: &[u8], h: &[f64], i: usize) -> f64 {
    let gain = q.get(i, i) + h[i];
    if bits[i] == 0 {
        gain
    } else {
        -gain
    }
}

/// Global minimum by enumerating all `2^d` bitstrings in Gray-code order.
/// Ties go to the lexicographically smallest bitstring, bit 0 first.
pub fn solve_exhaustive(q: &QuboMatrix) -> Result<QuboSolution, QuboError> {
    let d = q.dim();
    if d > EXHAUSTIVE_MAX_DIM {
        return Err(QuboError::Capacity { dim: d, cap: EXHAUSTIVE_MAX_DIM });
    }
    let lex_key = |mask: u32| mask.reverse_bits();
    let mut bits = vec![0u8; d];
    let mut h = vec![0.0; d];
    let mut mask = 0u32;
    let mut e = 0.0;
    let (mut best_mask, mut best_e) = (0u32, 0.0f64);
    for step in 1u64..(1u64 << d) {
        let i = step.trailing_zeros() as usize;
        e += delta(q, &bits, &h, i);
        flip(q, &mut bits, &mut h, i);
        mask ^= 1 << i;
        // incremental sums drift by a few ulps, so near-equal energies count as ties
        let tol = 1e-12 * (1.0 + best_e.abs());
        if e < best_e - tol || (e <= best_e + tol && lex_key(mask) < lex_key(best_mask)) {
            best_e = e;
            best_mask = mask;
        }
    }
    let bits: Vec<u8> = (0..d).map(|i| ((best_mask >> i) & 1) as u8).collect();
    let energy = q.energy_unchecked(&bits);
    Ok(QuboSolution { bits, energy })
}

fn anneal_once(q: &QuboMatrix, sched: &AnnealSchedule, restart: usize) -> QuboSolution {
    let d = q.dim();
    let mut rng = stream_rng(sched.seed, restart as u64);
    let mut bits: Vec<u8> = (0..d).map(|_| rng.random_range(0..2u8)).collect();
    let mut h = local_fields(q, &bits);
    let mut e = q.energy_unchecked(&bits);
    let mut best = QuboSolution { bits: bits.clone(), energy: e };
    for sweep in 0..sched.sweeps {
        let beta = 1.0 / sched.temperature(sweep);
        for i in 0..d {
            let de = delta(q, &bits, &h, i);
            if de <= 0.0 || rng.random::<f64>() < (-beta * de).exp() {
                flip(q, &mut bits, &mut h, i);
                e += de;
                if e < best.energy {
                    best.energy = e;
                    best.bits.copy_from_slice(&bits);
                }
            }
        }
    }
    best.energy = q.energy_unchecked(&best.bits);
    best
}

/// Simulated annealing with single-bit Metropolis moves. Restarts run in
/// parallel on independent seeds; the lowest energy wins, earliest restart on ties.
pub fn solve_annealing(q: &QuboMatrix, sched: &AnnealSchedule) -> Result<QuboSolution, QuboError> {
    sched.validate()?;
    let runs: Vec<QuboSolution> = (0..sched.restarts).into_par_iter().map(|r| anneal_once(q, sched, r)).collect();
    Ok(runs
        .into_iter()
        .reduce(|a, b| if b.energy < a.energy { b } else { a })
        .expect("restarts >= 1"))
}
