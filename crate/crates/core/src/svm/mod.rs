//! Soft-margin kernel SVM trained by SMO.
//!
//! Labels are `{0, 1}` at the API boundary and `{−1, +1}` inside the solver.
//! `predict` returns 1 only for a strictly positive margin.

mod kernel;
mod smo;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use kernel::{kernel_eval, Gamma, KernelKind, KernelSpec};

use crate::pipeline::Dataset;

/// Dual coefficients at or below this are not kept as support vectors.
pub const SUPPORT_THRESHOLD: f64 = 1e-8;
pub const DEFAULT_C: f64 = 1.0;
pub const DEFAULT_TOL: f64 = 1e-3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SvmError {
    #[error("training data must contain both classes")]
    SingleClass,
    #[error("training data is empty")]
    Empty,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("input has dimension {got}, model expects {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("no candidate kernels given")]
    NoCandidates,
}

/// A trained classifier. Serialized as
/// `{"kernel", "C", "support_vectors", "dual_coefs", "bias"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmModel {
    /// Resolved kernel (gamma is always an explicit value).
    pub kernel: KernelSpec,
    #[serde(rename = "C")]
    pub c: f64,
    pub support_vectors: Vec<Vec<f64>>,
    /// `y_i α_i` per support vector.
    pub dual_coefs: Vec<f64>,
    pub bias: f64,
}

/// Solver diagnostics from [`fit_with_stats`].
#[derive(Debug, Clone, PartialEq)]
pub struct FitStats {
    /// Dual variables for every training row.
    pub alpha: Vec<f64>,
    /// `½ αᵀQα − Σα` at the solution.
    pub objective: f64,
    pub iterations: usize,
}

impl SvmModel {
    pub fn n_features(&self) -> usize {
        self.support_vectors.first().map_or(0, Vec::len)
    }

    /// `Σ_i dual_coefs_i · K(sv_i, x) + b`.
    pub fn decision_function(&self, x: &[f64]) -> Result<f64, SvmError> {
        let d = self.n_features();
        if x.len() != d {
            return Err(SvmError::DimensionMismatch { expected: d, got: x.len() });
        }
        let g = self.kernel.gamma_value();
        Ok(self
            .support_vectors
            .iter()
            .zip(&self.dual_coefs)
            .map(|(sv, a)| a * self.kernel.eval_unchecked(g, sv, x))
            .sum::<f64>()
            + self.bias)
    }

    pub fn predict(&self, x: &[f64]) -> Result<u8, SvmError> {
        Ok(u8::from(self.decision_function(x)? > 0.0))
    }

    pub fn predict_dataset(&self, data: &Dataset) -> Result<Vec<u8>, SvmError> {
        data.features().par_iter().map(|x| self.predict(x)).collect()
    }

    /// Fraction of rows predicted correctly; `None` for an empty dataset.
    pub fn accuracy(&self, data: &Dataset) -> Result<Option<f64>, SvmError> {
        let preds = self.predict_dataset(data)?;
        Ok(accuracy(&preds, data.labels()))
    }
}

pub(crate) fn accuracy(pred: &[u8], truth: &[u8]) -> Option<f64> {
    if truth.is_empty() {
        return None;
    }
    let hits = pred.iter().zip(truth).filter(|(a, b)| a == b).count();
    Some(hits as f64 / truth.len() as f64)
}

pub fn decision_function(model: &SvmModel, x: &[f64]) -> Result<f64, SvmError> {
    model.decision_function(x)
}

pub fn predict(model: &SvmModel, x: &[f64]) -> Result<u8, SvmError> {
    model.predict(x)
}

pub fn fit(data: &Dataset, spec: &KernelSpec, c: f64, tol: f64) -> Result<SvmModel, SvmError> {
    fit_with_stats(data, spec, c, tol).map(|(m, _)| m)
}

/// Trains on `data` and also returns the full dual solution.
pub fn fit_with_stats(data: &Dataset, spec: &KernelSpec, c: f64, tol: f64) -> Result<(SvmModel, FitStats), SvmError> {
    if data.is_empty() {
        return Err(SvmError::Empty);
    }
    if !(c.is_finite() && c > 0.0) {
        return Err(SvmError::InvalidParameter(format!("C must be positive, got {c}")));
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(SvmError::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    let (zeros, ones) = data.class_counts();
    if zeros == 0 || ones == 0 {
        return Err(SvmError::SingleClass);
    }
    let kernel = spec.resolve(data.n_features())?;
    let y = data.signed_labels();
    let q = smo::QMatrix::new(data.features(), &y, kernel);
    let sol = smo::solve(&q, c, tol)?;

    let mut support_vectors = Vec::new();
    let mut dual_coefs = Vec::new();
    for (i, &a) in sol.alpha.iter().enumerate() {
        if a > SUPPORT_THRESHOLD {
            support_vectors.push(data.row(i).to_vec());
            dual_coefs.push(y[i] * a);
        }
    }
    let model = SvmModel { kernel, c, support_vectors, dual_coefs, bias: -sol.rho };
    let stats = FitStats { alpha: sol.alpha, objective: sol.objective, iterations: sol.iterations };
    Ok((model, stats))
}

/// `½ Σ_ij α_i α_j y_i y_j K(x_i, x_j) − Σ_i α_i` for arbitrary `α`.
pub fn dual_objective(data: &Dataset, spec: &KernelSpec, alpha: &[f64]) -> Result<f64, SvmError> {
    if alpha.len() != data.len() {
        return Err(SvmError::DimensionMismatch { expected: data.len(), got: alpha.len() });
    }
    let k = spec.resolve(data.n_features())?;
    let g = k.gamma_value();
    let y = data.signed_labels();
    let mut quad = 0.0;
    for i in 0..alpha.len() {
        if alpha[i] == 0.0 {
            continue;
        }
        for j in 0..alpha.len() {
            quad += alpha[i] * alpha[j] * y[i] * y[j] * k.eval_unchecked(g, data.row(i), data.row(j));
        }
    }
    Ok(0.5 * quad - alpha.iter().sum::<f64>())
}

/// Result of [`select_kernel`]: the winner and every candidate's test accuracy.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelSelection {
    pub best: KernelSpec,
    pub accuracies: Vec<(KernelSpec, f64)>,
}

/// Fits each candidate on `train`, scores it on `test` and keeps the most
/// accurate; ties go to the earlier candidate.
pub fn select_kernel(
    train: &Dataset,
    test: &Dataset,
    candidates: &[KernelSpec],
    c: f64,
) -> Result<KernelSelection, SvmError> {
    if candidates.is_empty() {
        return Err(SvmError::NoCandidates);
    }
    if test.is_empty() {
        return Err(SvmError::Empty);
    }
    let mut accuracies = Vec::with_capacity(candidates.len());
    let mut best: Option<(KernelSpec, f64)> = None;
    for spec in candidates {
        let model = fit(train, spec, c, DEFAULT_TOL)?;
        let acc = model.accuracy(test)?.unwrap_or(0.0);
        accuracies.push((*spec, acc));
        if best.is_none_or(|(_, b)| acc > b) {
            best = Some((*spec, acc));
        }
    }
    Ok(KernelSelection { best: best.expect("nonempty candidates").0, accuracies })
}
