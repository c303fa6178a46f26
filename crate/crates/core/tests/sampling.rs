mod common;

use std::f64::consts::PI;

use rand::Rng;

use qaccel::qsim::{run_noisy, run_statevector, sample_shots, Circuit, Gate, NoiseModel, Pauli};

#[test]
fn hadamard_counts_within_five_sigma() {
    let c = Circuit::from_gates(1, vec![Gate::H(0)]).unwrap();
    let counts = sample_shots(&run_statevector(&c).unwrap(), 100_000, 4).unwrap();
    let sigma = (100_000.0f64 * 0.25).sqrt();
    for outcome in ["0", "1"] {
        assert!((counts.get(outcome) as f64 - 50_000.0).abs() < 5.0 * sigma);
    }
}

#[test]
fn frequencies_converge_in_total_variation() {
    let mut r = common::rng(30);
    for seed in 0..5 {
        let gates = (0..8)
            .map(|_| match r.random_range(0..3) {
                0 => Gate::Ry(r.random_range(0..2), r.random_range(-PI..PI)),
                1 => Gate::Rx(r.random_range(0..2), r.random_range(-PI..PI)),
                _ => Gate::Cnot { control: 0, target: 1 },
            })
            .collect();
        let state = run_statevector(&Circuit::from_gates(2, gates).unwrap()).unwrap();
        let counts = sample_shots(&state, 100_000, seed).unwrap();
        let tv: f64 = state
            .probabilities()
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let label = format!("{}{}", i & 1, (i >> 1) & 1);
                (counts.frequency(&label) - p).abs()
            })
            .sum::<f64>()
            / 2.0;
        assert!(tv < 0.02, "tv {tv}");
    }
}

#[test]
fn zero_error_rate_matches_ideal_sampling() {
    let c = Circuit::from_gates(2, vec![Gate::H(0), Gate::Cnot { control: 0, target: 1 }, Gate::Ry(1, 0.4)]).unwrap();
    let ideal = sample_shots(&run_statevector(&c).unwrap(), 5000, 77).unwrap();
    assert_eq!(run_noisy(&c, &NoiseModel::new(0.0, 77), 5000).unwrap(), ideal);
}

#[test]
fn forced_phase_flip_keeps_hadamard_statistics() {
    let c = Circuit::from_gates(1, vec![Gate::H(0)]).unwrap();
    let noise = NoiseModel { forced_pauli: Some(Pauli::Z), ..NoiseModel::new(1.0, 5) };
    let counts = run_noisy(&c, &noise, 100_000).unwrap();
    let sigma = (100_000.0f64 * 0.25).sqrt();
    assert!((counts.get("0") as f64 - 50_000.0).abs() < 5.0 * sigma);
}

/// Uniform Pauli errors with total probability p shrink every Bloch component
/// by 1 − 4p/3, and H only permutes components, so after m gates
/// P(0) = (1 + (1 − 4p/3)^m) / 2.
fn return_probability(p: f64, gates: usize) -> f64 {
    (1.0 + (1.0 - 4.0 * p / 3.0).powi(gates as i32)) / 2.0
}

#[test]
fn identity_circuit_decay_matches_analytic_channel() {
    let p = 0.01;
    let shots = 200_000u64;
    let mut last = 1.0;
    for depth in [1, 5, 20, 50] {
        let c = Circuit::from_gates(1, vec![Gate::H(0); 2 * depth]).unwrap();
        let counts = run_noisy(&c, &NoiseModel::new(p, depth as u64), shots).unwrap();
        let got = counts.frequency("0");
        let want = return_probability(p, 2 * depth);
        let sigma = (want * (1.0 - want) / shots as f64).sqrt();
        assert!((got - want).abs() < 3.0 * sigma + 1e-12, "depth {depth}: {got} vs {want}");
        assert!(got < last);
        last = got;
    }
}

#[test]
fn noisy_runs_are_seeded() {
    let c = Circuit::from_gates(2, vec![Gate::H(0), Gate::Rzz(0, 1, 0.7), Gate::H(1)]).unwrap();
    let nm = NoiseModel::new(0.05, 123);
    assert_eq!(run_noisy(&c, &nm, 3000).unwrap(), run_noisy(&c, &nm, 3000).unwrap());
}
