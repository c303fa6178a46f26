//! SVM training as a QUBO.
//!
//! Each dual coefficient is a base-`B` number of `K` binary digits,
//! `α_i = Σ_{j<K} B^j b_{iK+j}`, so the box `0 ≤ α_i ≤ Σ_j B^j` is implicit.
//! The equality constraint `Σ α_i y_i = 0` becomes the penalty `ξ (Σ α_i y_i)²`
//! and the energy of a bitstring is
//!
//! ```text
//! E(b) = ½ Σ_im α_i α_m y_i y_m K(x_i, x_m) − Σ_i α_i + ξ (Σ_i α_i y_i)²
//! ```
//!
//! expanded into an upper-triangular matrix using `b² = b`.

mod anneal;
mod matrix;
mod probe;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use anneal::{solve_annealing, solve_exhaustive, AnnealSchedule, QuboSolution, EXHAUSTIVE_MAX_DIM};
pub use matrix::{energy, QuboMatrix};
pub use probe::{qubo_scaling_probe, ScalingRow};

use crate::pipeline::Dataset;
use crate::svm::{KernelSpec, SvmError, SvmModel, SUPPORT_THRESHOLD};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuboError {
    #[error("invalid encoding: {0}")]
    InvalidEncoding(String),
    #[error("training data is empty")]
    Empty,
    #[error("encoding expects {expected} samples, data has {got}")]
    SampleMismatch { expected: usize, got: usize },
    #[error("bitstring has length {got}, expected {expected}")]
    BitLength { expected: usize, got: usize },
    #[error("QUBO dimension {dim} exceeds the exhaustive limit of {cap}")]
    Capacity { dim: usize, cap: usize },
    #[error("invalid anneal schedule: {0}")]
    Schedule(String),
    #[error("malformed QUBO: {0}")]
    Shape(String),
    #[error("decoded model has no support vectors")]
    Degenerate,
    #[error(transparent)]
    Svm(#[from] SvmError),
}

/// Discretisation of the dual variables.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuboEncoding {
    pub n_samples: usize,
    /// Binary digits per coefficient (K).
    pub precision_bits: usize,
    /// Place-value base (B).
    pub base: f64,
    /// Weight of the squared equality-constraint penalty (ξ).
    pub penalty: f64,
}

impl QuboEncoding {
    /// `B = 2`, `ξ = 1`.
    pub fn new(n_samples: usize, precision_bits: usize) -> Self {
        QuboEncoding { n_samples, precision_bits, base: 2.0, penalty: 1.0 }
    }

    pub fn with_penalty(mut self, penalty: f64) -> Self {
        self.penalty = penalty;
        self
    }

    pub fn dimension(&self) -> usize {
        self.n_samples * self.precision_bits
    }

    /// Place values `B^j`, `j = 0..K`.
    pub fn weights(&self) -> Vec<f64> {
        (0..self.precision_bits).map(|j| self.base.powi(j as i32)).collect()
    }

    /// Largest representable coefficient, acting as the SVM's `C`.
    pub fn alpha_max(&self) -> f64 {
        self.weights().iter().sum()
    }

    pub fn validate(&self) -> Result<(), QuboError> {
        if self.precision_bits < 1 {
            return Err(QuboError::InvalidEncoding("precision bits K must be at least 1".into()));
        }
        if !(self.base.is_finite() && self.base > 0.0) {
            return Err(QuboError::InvalidEncoding(format!("base must be positive, got {}", self.base)));
        }
        if !(self.penalty.is_finite() && self.penalty >= 0.0) {
            return Err(QuboError::InvalidEncoding(format!("penalty must be non-negative, got {}", self.penalty)));
        }
        Ok(())
    }

    pub fn decode_alphas(&self, bits: &[u8]) -> Result<Vec<f64>, QuboError> {
        self.validate()?;
        if bits.len() != self.dimension() {
            return Err(QuboError::BitLength { expected: self.dimension(), got: bits.len() });
        }
        let w = self.weights();
        Ok(bits
            .chunks(self.precision_bits)
            .map(|c| c.iter().zip(&w).filter(|(b, _)| **b != 0).map(|(_, w)| w).sum())
            .collect())
    }
}

fn check_data(data: &Dataset, enc: &QuboEncoding) -> Result<(), QuboError> {
    enc.validate()?;
    if data.is_empty() {
        return Err(QuboError::Empty);
    }
    if data.len() != enc.n_samples {
        return Err(QuboError::SampleMismatch { expected: enc.n_samples, got: data.len() });
    }
    Ok(())
}

pub fn build_qubo(data: &Dataset, kernel: &KernelSpec, enc: &QuboEncoding) -> Result<QuboMatrix, QuboError> {
    check_data(data, enc)?;
    let k = kernel.resolve(data.n_features())?;
    let g = k.gamma_value();
    let y = data.signed_labels();
    let w = enc.weights();
    let (n, kb, xi) = (data.len(), enc.precision_bits, enc.penalty);
    let mut q = QuboMatrix::zeros(enc.dimension());
    for i in 0..n {
        for m in i..n {
            let kim = k.eval_unchecked(g, data.row(i), data.row(m));
            let s = y[i] * y[m];
            for a in 0..kb {
                let u = i * kb + a;
                // same-sample pairs start past the diagonal digit
                let b0 = if i == m { a } else { 0 };
                for b in b0..kb {
                    let v = m * kb + b;
                    let ww = w[a] * w[b];
                    let coef = if u == v { (0.5 * kim + xi) * ww - w[a] } else { (kim + 2.0 * xi) * s * ww };
                    q.add(u, v, coef);
                }
            }
        }
    }
    Ok(q)
}

/// Rebuilds a classifier from a solution bitstring. The bias is the mean of
/// `y_i − Σ_j α_j y_j K(x_j, x_i)` over support vectors.
pub fn decode_model(bits: &[u8], enc: &QuboEncoding, data: &Dataset, kernel: &KernelSpec) -> Result<SvmModel, QuboError> {
    check_data(data, enc)?;
    let alpha = enc.decode_alphas(bits)?;
    let k = kernel.resolve(data.n_features())?;
    let g = k.gamma_value();
    let y = data.signed_labels();
    let sv: Vec<usize> = (0..alpha.len()).filter(|&i| alpha[i] > SUPPORT_THRESHOLD).collect();
    if sv.is_empty() {
        return Err(QuboError::Degenerate);
    }
    let bias = sv
        .iter()
        .map(|&i| {
            let f: f64 = sv.iter().map(|&j| alpha[j] * y[j] * k.eval_unchecked(g, data.row(j), data.row(i))).sum();
            y[i] - f
        })
        .sum::<f64>()
        / sv.len() as f64;
    Ok(SvmModel {
        kernel: k,
        c: enc.alpha_max(),
        support_vectors: sv.iter().map(|&i| data.row(i).to_vec()).collect(),
        dual_coefs: sv.iter().map(|&i| y[i] * alpha[i]).collect(),
        bias,
    })
}
