//! Independent reference implementations shared by the integration tests.
//!
//! Nothing here calls into the simulator or the solvers under test: unitaries
//! are built from Pauli matrices with nalgebra's matrix exponential, the SVM
//! dual is solved by active-set enumeration and QUBO energies are evaluated
//! straight from the SVM objective.

#![allow(dead_code)]

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qaccel::pipeline::Dataset;

pub type CMat = DMatrix<Complex64>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn pauli_x() -> CMat {
    CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])
}

pub fn pauli_y() -> CMat {
    CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)])
}

pub fn pauli_z() -> CMat {
    CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)])
}

pub fn hadamard() -> CMat {
    (pauli_x() + pauli_z()) * c(1.0 / 2f64.sqrt(), 0.0)
}

/// Places one 2×2 operator per qubit into the full register. Qubit `q` is bit
/// `q` of the basis index, so qubit 0 is the rightmost Kronecker factor.
pub fn tensor(ops: &[CMat]) -> CMat {
    let n = ops.len();
    let mut m = ops[n - 1].clone();
    for q in (0..n - 1).rev() {
        m = m.kronecker(&ops[q]);
    }
    m
}

pub fn on_qubit(op: &CMat, q: usize, n: usize) -> CMat {
    let ops: Vec<CMat> = (0..n).map(|k| if k == q { op.clone() } else { CMat::identity(2, 2) }).collect();
    tensor(&ops)
}

pub fn on_pair(a: &CMat, qa: usize, b: &CMat, qb: usize, n: usize) -> CMat {
    let ops: Vec<CMat> = (0..n)
        .map(|k| {
            if k == qa {
                a.clone()
            } else if k == qb {
                b.clone()
            } else {
                CMat::identity(2, 2)
            }
        })
        .collect();
    tensor(&ops)
}

/// exp(i·scale·G) for a Hermitian generator.
pub fn expi(g: &CMat, scale: f64) -> CMat {
    (g * c(0.0, scale)).exp()
}

/// exp(−iθP/2).
pub fn rotation(p: &CMat, q: usize, n: usize, theta: f64) -> CMat {
    expi(&on_qubit(p, q, n), -theta / 2.0)
}

pub fn controlled_z(a: usize, b: usize, n: usize) -> CMat {
    let dim = 1 << n;
    CMat::from_diagonal(&DVector::from_fn(dim, |i, _| {
        if (i >> a) & 1 == 1 && (i >> b) & 1 == 1 {
            c(-1.0, 0.0)
        } else {
            c(1.0, 0.0)
        }
    }))
}

pub fn cnot(control: usize, target: usize, n: usize) -> CMat {
    let p0 = (CMat::identity(2, 2) + pauli_z()) * c(0.5, 0.0);
    let p1 = (CMat::identity(2, 2) - pauli_z()) * c(0.5, 0.0);
    on_qubit(&p0, control, n) + on_pair(&p1, control, &pauli_x(), target, n)
}

pub fn zero_state(n: usize) -> DVector<Complex64> {
    let mut v = DVector::from_element(1 << n, c(0.0, 0.0));
    v[0] = c(1.0, 0.0);
    v
}

/// Reference embedding: (exp(i Σ φ_S Π Z) · H^⊗n)^reps |0⟩ with a linear
/// chain of two-body terms.
pub fn feature_map_state(x: &[f64], reps: usize) -> DVector<Complex64> {
    let n = x.len();
    let dim = 1 << n;
    let mut g = CMat::zeros(dim, dim);
    for (k, &xk) in x.iter().enumerate() {
        g += on_qubit(&pauli_z(), k, n) * c(xk, 0.0);
    }
    for k in 1..n {
        let phi = (PI - x[k - 1]) * (PI - x[k]);
        g += on_pair(&pauli_z(), k - 1, &pauli_z(), k, n) * c(phi, 0.0);
    }
    let h = tensor(&vec![hadamard(); n]);
    let layer = expi(&g, 1.0) * h;
    let mut s = zero_state(n);
    for _ in 0..reps {
        s = &layer * s;
    }
    s
}

/// Reference ansatz unitary: per layer RX on every qubit, RY on every qubit,
/// then CZ along a linear chain.
pub fn ansatz_unitary(theta: &[f64], n: usize) -> CMat {
    let mut u = CMat::identity(1 << n, 1 << n);
    for layer in theta.chunks(2 * n) {
        for q in 0..n {
            u = rotation(&pauli_x(), q, n, layer[q]) * u;
        }
        for q in 0..n {
            u = rotation(&pauli_y(), q, n, layer[n + q]) * u;
        }
        for q in 1..n {
            u = controlled_z(q - 1, q, n) * u;
        }
    }
    u
}

pub fn rbf(u: &[f64], v: &[f64], gamma: f64) -> f64 {
    let d2: f64 = u.iter().zip(v).map(|(a, b)| (a - b) * (a - b)).sum();
    (-gamma * d2).exp()
}

pub fn linear(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

/// `½ αᵀ(yyᵀ∘K)α − Σα`.
pub fn dual_value(k: &DMatrix<f64>, y: &[f64], alpha: &[f64]) -> f64 {
    let n = alpha.len();
    let mut quad = 0.0;
    for i in 0..n {
        for j in 0..n {
            quad += alpha[i] * alpha[j] * y[i] * y[j] * k[(i, j)];
        }
    }
    0.5 * quad - alpha.iter().sum::<f64>()
}

/// Minimum of the box- and equality-constrained SVM dual, found by trying
/// every assignment of each α_i to {0, free, C} and solving the KKT system of
/// the free block. The problem is convex, so the best feasible stationary
/// point is the global optimum.
pub fn svm_dual_oracle(k: &DMatrix<f64>, y: &[f64], c_box: f64) -> f64 {
    let n = y.len();
    let q = DMatrix::from_fn(n, n, |i, j| y[i] * y[j] * k[(i, j)]);
    let mut best = f64::INFINITY;
    let total = 3usize.pow(n as u32);
    for code in 0..total {
        let mut state = vec![0u8; n];
        let mut t = code;
        for s in state.iter_mut() {
            *s = (t % 3) as u8;
            t /= 3;
        }
        let free: Vec<usize> = (0..n).filter(|&i| state[i] == 1).collect();
        let mut alpha: Vec<f64> = state.iter().map(|&s| if s == 2 { c_box } else { 0.0 }).collect();
        if !free.is_empty() {
            let f = free.len();
            // [Q_FF  y_F] [α_F]   [1 − Q_FB α_B]
            // [y_Fᵀ  0  ] [ b ] = [  −y_Bᵀ α_B ]
            let mut a = DMatrix::<f64>::zeros(f + 1, f + 1);
            let mut rhs = DVector::<f64>::zeros(f + 1);
            for (r, &i) in free.iter().enumerate() {
                for (s, &j) in free.iter().enumerate() {
                    a[(r, s)] = q[(i, j)];
                }
                a[(r, f)] = y[i];
                a[(f, r)] = y[i];
                rhs[r] = 1.0 - (0..n).filter(|&j| state[j] == 2).map(|j| q[(i, j)] * c_box).sum::<f64>();
            }
            rhs[f] = -(0..n).filter(|&j| state[j] == 2).map(|j| y[j] * c_box).sum::<f64>();
            let Some(sol) = a.lu().solve(&rhs) else { continue };
            if free.iter().enumerate().any(|(r, _)| !(sol[r] > -1e-9 && sol[r] < c_box + 1e-9)) {
                continue;
            }
            for (r, &i) in free.iter().enumerate() {
                alpha[i] = sol[r].clamp(0.0, c_box);
            }
        }
        let eq: f64 = alpha.iter().zip(y).map(|(a, y)| a * y).sum();
        if eq.abs() > 1e-7 {
            continue;
        }
        best = best.min(dual_value(k, y, &alpha));
    }
    best
}

/// Dual objective plus squared-constraint penalty at the coefficients encoded
/// by `bits`, with α_i = Σ_j base^j b_{iK+j}.
pub fn qubo_direct_energy(k: &DMatrix<f64>, y: &[f64], bits: &[u8], precision: usize, base: f64, penalty: f64) -> f64 {
    let n = y.len();
    let alpha: Vec<f64> = (0..n)
        .map(|i| (0..precision).map(|j| base.powi(j as i32) * f64::from(bits[i * precision + j])).sum())
        .collect();
    let eq: f64 = alpha.iter().zip(y).map(|(a, y)| a * y).sum();
    dual_value(k, y, &alpha) + penalty * eq * eq
}

pub fn bits_of(mask: u64, d: usize) -> Vec<u8> {
    (0..d).map(|i| ((mask >> i) & 1) as u8).collect()
}

/// Two Gaussian blobs in two dimensions with centres (0.5, 0.5) and
/// (2.5, 2.5), σ = 0.3, then min-max scaled to `range`.
pub fn blobs(n: usize, seed: u64, range: (f64, f64)) -> Dataset {
    use rand_distr::{Distribution, Normal};
    let mut r = rng(seed);
    let noise = Normal::new(0.0, 0.3).unwrap();
    let mut rows = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let y = (i % 2) as u8;
        let centre = if y == 0 { 0.5 } else { 2.5 };
        rows.push(vec![centre + noise.sample(&mut r), centre + noise.sample(&mut r)]);
        labels.push(y);
    }
    let data = Dataset::from_rows(rows, labels).unwrap();
    qaccel::pipeline::MinMaxScaler::fit_with_range(&data, range).unwrap().transform(&data).unwrap()
}

pub fn random_points(r: &mut ChaCha8Rng, n: usize, dim: usize) -> (Vec<Vec<f64>>, Vec<u8>) {
    loop {
        let x: Vec<Vec<f64>> = (0..n).map(|_| (0..dim).map(|_| r.random_range(0.0..1.0)).collect()).collect();
        let y: Vec<u8> = (0..n).map(|_| r.random_range(0..2u8)).collect();
        if y.contains(&0) && y.contains(&1) {
            return (x, y);
        }
    }
}

pub fn gram(x: &[Vec<f64>], kernel: impl Fn(&[f64], &[f64]) -> f64) -> DMatrix<f64> {
    DMatrix::from_fn(x.len(), x.len(), |i, j| kernel(&x[i], &x[j]))
}

pub fn signed(y: &[u8]) -> Vec<f64> {
    y.iter().map(|&l| if l == 1 { 1.0 } else { -1.0 }).collect()
}

pub fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        (v[m - 1] + v[m]) / 2.0
    }
}
