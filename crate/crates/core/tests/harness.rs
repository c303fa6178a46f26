use qaccel::harness::{
    batch_circuits, emit_report, run_benchmark, simulate_remote_execution, simulate_remote_timing, update_loop_check,
    BenchmarkConfig, DatasetSource, Delay, HarnessError, LatencyModel, Method, ReportFormat, UPDATE_LOOP_PERIOD_S,
};
use qaccel::pipeline::SyntheticConfig;
use qaccel::qsim::{Circuit, Gate, NoiseModel};

fn small_config(methods: Vec<Method>, repetitions: usize) -> BenchmarkConfig {
    BenchmarkConfig {
        methods,
        repetitions,
        dataset: DatasetSource::Synthetic(SyntheticConfig { total_samples: 5000, ..Default::default() }),
        train_samples: 400,
        omit_wall_clock: true,
        ..Default::default()
    }
}

#[test]
fn svm_only_benchmark_has_one_populated_row() {
    let cfg = BenchmarkConfig { omit_wall_clock: false, ..small_config(vec![Method::ClassicalSvm], 3) };
    let report = run_benchmark(&cfg).unwrap();
    assert_eq!(report.rows.len(), 1);
    let row = &report.rows[0];
    assert_eq!(row.runs, 3);
    assert_eq!(row.accuracies.len(), 3);
    assert!(row.accuracy.mean > 0.8 && row.accuracy.mean <= 1.0);
    assert!(row.train_time.mean > 0.0);
    assert_eq!(row.train_hardware, "CPU");
}

#[test]
fn single_repetition_has_zero_spread() {
    let report = run_benchmark(&small_config(vec![Method::ClassicalSvm, Method::QuboSvm], 1)).unwrap();
    for row in &report.rows {
        assert_eq!(row.accuracy.spread, 0.0);
        assert_eq!(row.train_time.spread, 0.0);
    }
}

#[test]
fn noiseless_remote_mock_agrees_with_the_simulator() {
    let mut cfg = small_config(vec![Method::VqcSimulator, Method::VqcRemoteMock], 2);
    cfg.latency = LatencyModel::exclusive();
    let report = run_benchmark(&cfg).unwrap();
    let sim = report.row(Method::VqcSimulator).unwrap();
    let remote = report.row(Method::VqcRemoteMock).unwrap();
    assert_eq!(sim.accuracies, remote.accuracies);
    assert_eq!(remote.validate_hardware, "QPU (mock)");
    assert!(remote.validate_time.mean > 0.0);
}

#[test]
fn rows_follow_configured_order_and_reports_are_reproducible() {
    let methods = vec![Method::QuboSvm, Method::ClassicalSvm, Method::VqcSimulator];
    let cfg = small_config(methods.clone(), 2);
    let a = run_benchmark(&cfg).unwrap();
    let b = run_benchmark(&cfg).unwrap();
    assert_eq!(a.rows.iter().map(|r| r.method).collect::<Vec<_>>(), methods);
    for format in [ReportFormat::Markdown, ReportFormat::Csv, ReportFormat::Json] {
        assert_eq!(emit_report(&a, format).unwrap(), emit_report(&b, format).unwrap());
    }
    let md = emit_report(&a, ReportFormat::Markdown).unwrap();
    assert_eq!(md.lines().count(), 2 + methods.len());
}

#[test]
fn config_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bench.toml");
    std::fs::write(
        &path,
        r#"
methods = ["classical_svm", "vqc_remote_mock"]
repetitions = 2
seed = 9

[dataset]
source = "synthetic"
total_samples = 3000

[latency]
batch_size = 50
queue_wait = { dist = "fixed", value = 0.0 }
"#,
    )
    .unwrap();
    let cfg = BenchmarkConfig::from_path(&path).unwrap();
    assert_eq!(cfg.methods, vec![Method::ClassicalSvm, Method::VqcRemoteMock]);
    assert_eq!((cfg.repetitions, cfg.seed, cfg.latency.batch_size), (2, 9, 50));
    assert_eq!(cfg.latency.queue_wait, Delay::Fixed { value: 0.0 });

    let json = dir.path().join("bench.json");
    std::fs::write(&json, serde_json::to_string(&cfg).unwrap()).unwrap();
    assert_eq!(BenchmarkConfig::from_path(&json).unwrap(), cfg);

    assert!(matches!(BenchmarkConfig::from_toml("methods = [\"nope\"]"), Err(HarnessError::ConfigParse(_))));
}

#[test]
fn invalid_configs_are_rejected_before_running() {
    let bad = BenchmarkConfig { repetitions: 0, ..small_config(vec![Method::ClassicalSvm], 1) };
    let err = run_benchmark(&bad).unwrap_err();
    assert!(err.is_validation());
    let bad = BenchmarkConfig { methods: vec![], ..small_config(vec![], 1) };
    assert!(run_benchmark(&bad).unwrap_err().is_validation());
}

#[test]
fn remote_run_of_the_validation_set() {
    assert_eq!(batch_circuits(2327, 75), 32);
    assert_eq!(batch_circuits(75, 75), 1);
    assert_eq!(batch_circuits(76, 75), 2);

    let lm = LatencyModel::default();
    let t = simulate_remote_timing(2327, &lm).unwrap();
    let total = t.simulated_total_s();
    assert!((32.0 * 93.0..=32.0 * 3690.5).contains(&total), "{total}");
    assert_eq!(t, simulate_remote_timing(2327, &lm).unwrap());

    let fixed = LatencyModel {
        queue_wait: Delay::Fixed { value: 0.0 },
        qpu_seconds_per_batch: Delay::Fixed { value: 89.0 },
        network_seconds_per_call: 0.0,
        ..Default::default()
    };
    assert_eq!(simulate_remote_timing(2327, &fixed).unwrap().simulated_total_s(), 2848.0);
}

#[test]
fn remote_execution_returns_counts_per_circuit() {
    let circuits: Vec<Circuit> =
        (0..160).map(|i| Circuit::from_gates(1, vec![Gate::Ry(0, 0.01 * i as f64)]).unwrap()).collect();
    let (counts, record) = simulate_remote_execution(&circuits, &LatencyModel::default(), &NoiseModel::ideal(3)).unwrap();
    assert_eq!(counts.len(), 160);
    assert_eq!(record.batch_count(), 3);
    assert!(counts.iter().all(|c| c.total_shots() == 1000));
}

#[test]
fn update_loop_feasibility() {
    let latency = LatencyModel::exclusive().single_sample_latency_s(1000);
    assert!(update_loop_check(latency, UPDATE_LOOP_PERIOD_S).unwrap());
    assert!(!update_loop_check(61.0, 60.0).unwrap());
    assert!(!update_loop_check(60.0, 60.0).unwrap());
}
