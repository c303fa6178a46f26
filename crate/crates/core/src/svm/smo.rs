use rayon::prelude::*;

use super::{KernelSpec, SvmError};

/// Largest problem for which the full Gram matrix is cached (≈72 MB).
const DENSE_GRAM_LIMIT: usize = 3000;
const TAU: f64 = 1e-12;

/// Signed kernel rows `Q_ij = y_i y_j K(x_i, x_j)`, either cached or computed on demand.
pub(crate) struct QMatrix<'a> {
    x: &'a [Vec<f64>],
    y: &'a [f64],
    kernel: KernelSpec,
    gamma: f64,
    dense: Option<Vec<f64>>,
    diag: Vec<f64>,
}

impl<'a> QMatrix<'a> {
    pub(crate) fn new(x: &'a [Vec<f64>], y: &'a [f64], kernel: KernelSpec) -> Self {
        let gamma = kernel.gamma_value();
        let n = x.len();
        let diag = (0..n).map(|i| kernel.eval_unchecked(gamma, &x[i], &x[i])).collect();
        let dense = (n <= DENSE_GRAM_LIMIT).then(|| {
            let mut q = vec![0.0; n * n];
            q.par_chunks_mut(n.max(1)).enumerate().for_each(|(i, row)| {
                for (j, v) in row.iter_mut().enumerate() {
                    *v = y[i] * y[j] * kernel.eval_unchecked(gamma, &x[i], &x[j]);
                }
            });
            q
        });
        QMatrix { x, y, kernel, gamma, dense, diag }
    }

    fn row(&self, i: usize) -> std::borrow::Cow<'_, [f64]> {
        let n = self.x.len();
        match &self.dense {
            Some(q) => std::borrow::Cow::Borrowed(&q[i * n..(i + 1) * n]),
            None => std::borrow::Cow::Owned(
                (0..n)
                    .into_par_iter()
                    .map(|j| self.y[i] * self.y[j] * self.kernel.eval_unchecked(self.gamma, &self.x[i], &self.x[j]))
                    .collect(),
            ),
        }
    }
}

pub(crate) struct SmoSolution {
    pub alpha: Vec<f64>,
    pub rho: f64,
    pub iterations: usize,
    pub objective: f64,
}

/// Solves `min ½ αᵀQα − Σα` s.t. `0 ≤ α ≤ C`, `yᵀα = 0` by sequential
/// minimal optimisation with maximal-violating-pair working sets.
///
/// Stops when the KKT gap `m(α) − M(α)` falls below `tol`.
pub(crate) fn solve(q: &QMatrix<'_>, c: f64, tol: f64) -> Result<SmoSolution, SvmError> {
    let y = q.y;
    let n = y.len();
    let mut alpha = vec![0.0; n];
    let mut grad = vec![-1.0; n];
    let max_iter = (100 * n).max(10_000_000);
    let mut iterations = 0;

    let in_up = |a: f64, yt: f64| (yt > 0.0 && a < c) || (yt < 0.0 && a > 0.0);
    let in_low = |a: f64, yt: f64| (yt > 0.0 && a > 0.0) || (yt < 0.0 && a < c);

    while iterations < max_iter {
        let mut gmax = f64::NEG_INFINITY;
        let mut gmin = f64::INFINITY;
        let (mut i, mut j) = (usize::MAX, usize::MAX);
        for t in 0..n {
            let v = -y[t] * grad[t];
            if in_up(alpha[t], y[t]) && v > gmax {
                gmax = v;
                i = t;
            }
            if in_low(alpha[t], y[t]) && v < gmin {
                gmin = v;
                j = t;
            }
        }
        if i == usize::MAX || j == usize::MAX || gmax - gmin < tol {
            break;
        }
        iterations += 1;

        let qi = q.row(i);
        let qj = q.row(j);
        let (old_i, old_j) = (alpha[i], alpha[j]);
        let mut ai = old_i;
        let mut aj = old_j;

        if y[i] != y[j] {
            let quad = (q.diag[i] + q.diag[j] + 2.0 * qi[j]).max(TAU);
            let delta = (-grad[i] - grad[j]) / quad;
            let diff = old_i - old_j;
            ai += delta;
            aj += delta;
            if diff > 0.0 {
                if aj < 0.0 {
                    aj = 0.0;
                    ai = diff;
                }
            } else if ai < 0.0 {
                ai = 0.0;
                aj = -diff;
            }
            if diff > 0.0 {
                if ai > c {
                    ai = c;
                    aj = c - diff;
                }
            } else if aj > c {
                aj = c;
                ai = c + diff;
            }
        } else {
            let quad = (q.diag[i] + q.diag[j] - 2.0 * qi[j]).max(TAU);
            let delta = (grad[i] - grad[j]) / quad;
            let sum = old_i + old_j;
            ai -= delta;
            aj += delta;
            if sum > c {
                if ai > c {
                    ai = c;
                    aj = sum - c;
                }
            } else if aj < 0.0 {
                aj = 0.0;
                ai = sum;
            }
            if sum > c {
                if aj > c {
                    aj = c;
                    ai = sum - c;
                }
            } else if ai < 0.0 {
                ai = 0.0;
                aj = sum;
            }
        }
        let (di, dj) = (ai - old_i, aj - old_j);
        alpha[i] = ai;
        alpha[j] = aj;
        for t in 0..n {
            grad[t] += qi[t] * di + qj[t] * dj;
        }
    }

    // ρ from free vectors, else the midpoint of the feasible interval
    let mut free_sum = 0.0;
    let mut n_free = 0usize;
    let mut ub = f64::INFINITY;
    let mut lb = f64::NEG_INFINITY;
    for t in 0..n {
        let yg = y[t] * grad[t];
        if alpha[t] > 0.0 && alpha[t] < c {
            free_sum += yg;
            n_free += 1;
        } else if alpha[t] >= c {
            if y[t] < 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else if y[t] > 0.0 {
            ub = ub.min(yg);
        } else {
            lb = lb.max(yg);
        }
    }
    let rho = if n_free > 0 {
        free_sum / n_free as f64
    } else if ub.is_finite() && lb.is_finite() {
        (ub + lb) / 2.0
    } else if ub.is_finite() {
        ub
    } else {
        lb
    };

    // f(α) = ½ αᵀQα − Σα = ½ Σ α_t (G_t − 1)
    let objective = 0.5 * alpha.iter().zip(&grad).map(|(a, g)| a * (g - 1.0)).sum::<f64>();
    Ok(SmoSolution { alpha, rho, iterations, objective })
}
