//! `qaccel` command-line entry point.
//!
//! Exit codes: 0 on success, 1 for invalid input or arguments, 2 when a run fails.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use qaccel::features::fisher_score;
use qaccel::harness::{
    balanced_subsample, emit_report, prepare_datasets, run_benchmark, BenchmarkConfig, DatasetSource, ExecutionBackend,
    LatencyModel, Method, ReportFormat,
};
use qaccel::pipeline::{generate_synthetic, write_csv, Dataset, MinMaxScaler, SyntheticConfig};
use qaccel::qsim::NoiseModel;
use qaccel::qubo_svm::{build_qubo, decode_model, qubo_scaling_probe, AnnealSchedule, QuboEncoding};
use qaccel::rng::derive_seed;
use qaccel::svm::{fit, select_kernel, SvmModel, DEFAULT_TOL};
use qaccel::vqc::{predict_batch, train, AnsatzSpec, TrainConfig, VqcModel};
use qaccel::{Error, Result};

#[derive(Parser)]
#[command(name = "qaccel", version, about = "Quantum and classical classifiers for vehicle telemetry")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a synthetic drive log as CSV.
    Generate(GenerateArgs),
    /// Rank features by Fisher score.
    SelectFeatures(SelectArgs),
    /// Train a classifier and write it as JSON.
    Train(TrainArgs),
    /// Label a dataset with a trained model.
    Predict(PredictArgs),
    /// Run the method comparison and print the report.
    Benchmark(BenchmarkArgs),
    /// Measure QUBO size and annealing time against sample count.
    QuboProbe(ProbeArgs),
}

#[derive(Args)]
struct Common {
    /// Seed for every stochastic step.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DataArgs {
    /// Drive log CSV. Without it a synthetic log is generated from --seed.
    #[arg(long)]
    data: Option<PathBuf>,
    /// Benchmark config (TOML or JSON) supplying split and method settings.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct GenerateArgs {
    #[command(flatten)]
    common: Common,
    /// Synthetic generator settings (TOML or JSON).
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct SelectArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    data: DataArgs,
    /// Keep only the k best features.
    #[arg(long)]
    k: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum MethodArg {
    Svm,
    Vqc,
    Qubo,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BackendArg {
    Simulator,
    Noisy,
    Remote,
}

#[derive(Args)]
struct BackendArgs {
    #[arg(long, value_enum, default_value_t = BackendArg::Simulator)]
    backend: BackendArg,
    /// Per-gate Pauli error probability.
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    /// Circuits per remote call.
    #[arg(long, default_value_t = 75)]
    batch_size: usize,
}

impl BackendArgs {
    fn build(&self, seed: u64) -> ExecutionBackend {
        let noise = NoiseModel::new(self.noise, seed);
        match self.backend {
            BackendArg::Simulator if self.noise == 0.0 => ExecutionBackend::SimulatorIdeal,
            BackendArg::Simulator | BackendArg::Noisy => ExecutionBackend::SimulatorNoisy { noise },
            BackendArg::Remote => {
                let latency = LatencyModel { batch_size: self.batch_size, ..LatencyModel::default().with_seed(seed) };
                ExecutionBackend::RemoteQpuMock { latency, noise }
            }
        }
    }
}

#[derive(Args)]
struct TrainArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    backend: BackendArgs,
    #[arg(long, value_enum, default_value_t = MethodArg::Vqc)]
    method: MethodArg,
    #[arg(long)]
    shots: Option<u64>,
    /// Number of selected features (one qubit each for the VQC).
    #[arg(long)]
    k: Option<usize>,
    /// SPSA iteration cap.
    #[arg(long)]
    iterations: Option<usize>,
    /// Training rows drawn from the training partition.
    #[arg(long)]
    train_samples: Option<usize>,
}

#[derive(Args)]
struct PredictArgs {
    #[command(flatten)]
    common: Common,
    /// Model file written by `train`.
    #[arg(long)]
    model: PathBuf,
    /// Drive log CSV. Without it a synthetic log is generated from --seed.
    #[arg(long)]
    data: Option<PathBuf>,
    #[command(flatten)]
    backend: BackendArgs,
    #[arg(long)]
    shots: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Markdown,
    Csv,
    Json,
}

#[derive(Args)]
struct BenchmarkArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Methods to run, in order; overrides the config.
    #[arg(long = "method", value_delimiter = ',')]
    methods: Vec<String>,
    #[arg(long)]
    repetitions: Option<usize>,
    #[arg(long)]
    shots: Option<u64>,
    #[arg(long)]
    noise: Option<f64>,
    #[arg(long)]
    k: Option<usize>,
    /// Circuits per remote call.
    #[arg(long)]
    batch_size: Option<usize>,
    #[arg(long, value_enum, default_value_t = FormatArg::Markdown)]
    format: FormatArg,
    /// Report measured wall-clock times as zero.
    #[arg(long)]
    omit_wall_clock: bool,
}

#[derive(Args)]
struct ProbeArgs {
    #[command(flatten)]
    common: Common,
    /// Sample counts to probe.
    #[arg(long, value_delimiter = ',', default_value = "8,16,32,64")]
    sizes: Vec<usize>,
    /// Precision bits per dual coefficient.
    #[arg(long, default_value_t = 2)]
    bits: usize,
    #[arg(long, default_value_t = 200)]
    sweeps: usize,
    /// Report measured times as zero.
    #[arg(long)]
    omit_wall_clock: bool,
}

/// A trained classifier together with the preprocessing it expects.
#[derive(Serialize, Deserialize)]
struct ModelBundle {
    method: MethodArg,
    /// Input columns by name, in model order.
    features: Vec<String>,
    scaler: MinMaxScaler,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    svm: Option<SvmModel>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    vqc: Option<VqcModel>,
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn read_config<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
        Ok(serde_json::from_str(&text)?)
    } else {
        toml::from_str(&text).map_err(|e| Error::Validation(e.to_string()))
    }
}

fn bench_config(path: &Option<PathBuf>) -> Result<BenchmarkConfig> {
    Ok(match path {
        Some(p) => BenchmarkConfig::from_path(p)?,
        None => BenchmarkConfig::default(),
    })
}

fn load_data(data: &Option<PathBuf>, cfg: &BenchmarkConfig, seed: u64) -> Result<Dataset> {
    let source = match data {
        Some(path) => DatasetSource::Csv { path: path.clone(), schema: Default::default() },
        None => match &cfg.dataset {
            DatasetSource::Synthetic(s) => DatasetSource::Synthetic(SyntheticConfig { seed, ..s.clone() }),
            other => other.clone(),
        },
    };
    Ok(source.load()?)
}

fn generate(a: GenerateArgs) -> Result<()> {
    let mut cfg: SyntheticConfig = match &a.config {
        Some(p) => read_config(p)?,
        None => SyntheticConfig::default(),
    };
    cfg.seed = a.common.seed;
    let log = generate_synthetic(&cfg)?;
    let mut buf = Vec::new();
    write_csv(&log, &mut buf)?;
    emit(&a.common.out, &String::from_utf8(buf).expect("csv is utf-8"))?;
    eprintln!("generated {} drives, {} samples", log.drives.len(), log.n_samples());
    Ok(())
}

fn select_features(a: SelectArgs) -> Result<()> {
    let cfg = bench_config(&a.data.config)?;
    let data = load_data(&a.data.data, &cfg, a.common.seed)?;
    let mut ranking = fisher_score(&data)?;
    if let Some(k) = a.k {
        ranking.order = qaccel::features::select_top_k(&ranking, k)?;
    }
    let mut buf = Vec::new();
    ranking.write_csv(data.feature_names(), &mut buf)?;
    emit(&a.common.out, &String::from_utf8(buf).expect("csv is utf-8"))
}

fn train_cmd(a: TrainArgs) -> Result<()> {
    let cfg = bench_config(&a.data.config)?;
    let seed = a.common.seed;
    let k = a.k.unwrap_or(cfg.k);
    let data = load_data(&a.data.data, &cfg, seed)?;
    let prepared = prepare_datasets(&data, &cfg.split, k, cfg.feature_range)?;
    let train_rows = prepared.train.subsample(a.train_samples.unwrap_or(cfg.train_samples), derive_seed(seed, u64::MAX));
    let features: Vec<String> = prepared.selected.iter().map(|&j| data.feature_names()[j].clone()).collect();
    let mut bundle = ModelBundle { method: a.method, features, scaler: prepared.scaler.clone(), svm: None, vqc: None };

    let t = Instant::now();
    match a.method {
        MethodArg::Svm => {
            let sel = select_kernel(&train_rows, &prepared.test, &cfg.svm.kernels, cfg.svm.c)?;
            bundle.svm = Some(fit(&train_rows, &sel.best, cfg.svm.c, DEFAULT_TOL)?);
        }
        MethodArg::Qubo => {
            let q = &cfg.qubo;
            let sub = balanced_subsample(&train_rows, q.n_samples, derive_seed(seed, 2));
            let enc = QuboEncoding { n_samples: sub.len(), precision_bits: q.precision_bits, base: q.base, penalty: q.penalty };
            let matrix = build_qubo(&sub, &q.kernel, &enc)?;
            let sol = qaccel::qubo_svm::solve_annealing(&matrix, &AnnealSchedule { seed, ..q.anneal })?;
            bundle.svm = Some(decode_model(&sol.bits, &enc, &sub, &q.kernel)?);
        }
        MethodArg::Vqc => {
            let n = train_rows.n_features();
            let fm = qaccel::feature_map::FeatureMapSpec {
                repetitions: cfg.vqc.feature_map_repetitions,
                ..qaccel::feature_map::FeatureMapSpec::new(n)
            };
            let ansatz = AnsatzSpec { n_qubits: n, layers: cfg.vqc.layers, entangler: cfg.vqc.entangler };
            let tc = TrainConfig {
                seed,
                shots: a.shots.unwrap_or(cfg.shots),
                max_iterations: a.iterations.unwrap_or(cfg.vqc.train.max_iterations),
                ..cfg.vqc.train
            };
            bundle.vqc = Some(train(&train_rows, &fm, &ansatz, &tc, &a.backend.build(seed))?);
        }
    }
    eprintln!("trained on {} rows in {:.2} s", train_rows.len(), t.elapsed().as_secs_f64());
    emit(&a.common.out, &(serde_json::to_string_pretty(&bundle)? + "\n"))
}

fn predict_cmd(a: PredictArgs) -> Result<()> {
    let bundle: ModelBundle = serde_json::from_str(&fs::read_to_string(&a.model)?)?;
    let data = load_data(&a.data, &BenchmarkConfig::default(), a.common.seed)?;
    let columns = bundle
        .features
        .iter()
        .map(|name| {
            data.feature_names()
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| Error::Validation(format!("input lacks feature `{name}`")))
        })
        .collect::<Result<Vec<_>>>()?;
    let rows = bundle.scaler.transform(&data.select_features(&columns)?)?;

    let (labels, scores): (Vec<u8>, Vec<f64>) = match (&bundle.svm, &bundle.vqc) {
        (Some(m), _) => {
            let scores = rows.features().iter().map(|r| m.decision_function(r)).collect::<Result<Vec<_>, _>>()?;
            (scores.iter().map(|&s| u8::from(s > 0.0)).collect(), scores)
        }
        (None, Some(m)) => {
            let mut m = m.clone();
            if let Some(s) = a.shots {
                m.shots = s;
            }
            let pred = predict_batch(&rows, &m, &a.backend.build(a.common.seed), a.common.seed)?;
            if let Some(f) = pred.failure {
                return Err(qaccel::vqc::VqcError::Backend { context: format!("sample {}", f.index), source: f.error }.into());
            }
            (pred.labels, pred.p_hat)
        }
        (None, None) => return Err(Error::Validation("model file holds no model".into())),
    };

    let mut out = String::from("index,drive_id,label,score\n");
    for (i, (l, s)) in labels.iter().zip(&scores).enumerate() {
        out.push_str(&format!("{i},{},{l},{s}\n", rows.drive_ids()[i]));
    }
    let correct = labels.iter().zip(rows.labels()).filter(|(a, b)| a == b).count();
    if !labels.is_empty() {
        eprintln!("accuracy {:.4} over {} rows", correct as f64 / labels.len() as f64, labels.len());
    }
    emit(&a.common.out, &out)
}

fn benchmark_cmd(a: BenchmarkArgs) -> Result<()> {
    let mut cfg = bench_config(&a.config)?;
    if let Some(s) = a.seed {
        cfg.seed = s;
    }
    if !a.methods.is_empty() {
        cfg.methods = a.methods.iter().map(|m| m.parse::<Method>()).collect::<Result<_, _>>()?;
    }
    if let Some(r) = a.repetitions {
        cfg.repetitions = r;
    }
    if let Some(s) = a.shots {
        cfg.shots = s;
    }
    if let Some(p) = a.noise {
        cfg.noise.per_gate_error = p;
    }
    if let Some(k) = a.k {
        cfg.k = k;
    }
    if let Some(b) = a.batch_size {
        cfg.latency.batch_size = b;
    }
    cfg.omit_wall_clock |= a.omit_wall_clock;
    let report = run_benchmark(&cfg)?;
    let format = match a.format {
        FormatArg::Markdown => ReportFormat::Markdown,
        FormatArg::Csv => ReportFormat::Csv,
        FormatArg::Json => ReportFormat::Json,
    };
    emit(&a.out, &emit_report(&report, format)?)
}

fn probe_cmd(a: ProbeArgs) -> Result<()> {
    let synth = SyntheticConfig { seed: a.common.seed, total_samples: 4000, ..Default::default() };
    let data = DatasetSource::Synthetic(synth).load()?;
    let prepared = prepare_datasets(&data, &Default::default(), 2, qaccel::pipeline::DEFAULT_FEATURE_RANGE)?;
    let sched = AnnealSchedule { sweeps: a.sweeps, seed: a.common.seed, ..Default::default() };
    let rows = qubo_scaling_probe(&prepared.train, &a.sizes, a.bits, &qaccel::svm::KernelSpec::rbf(), &sched)?;
    let mut out = String::from("n,dimension,entries,build_time_s,solve_time_s\n");
    for r in rows {
        let (b, s) = if a.omit_wall_clock { (0.0, 0.0) } else { (r.build_time, r.solve_time) };
        out.push_str(&format!("{},{},{},{b:.6},{s:.6}\n", r.n, r.dimension, r.entries));
    }
    emit(&a.common.out, &out)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate(a) => generate(a),
        Command::SelectFeatures(a) => select_features(a),
        Command::Train(a) => train_cmd(a),
        Command::Predict(a) => predict_cmd(a),
        Command::Benchmark(a) => benchmark_cmd(a),
        Command::QuboProbe(a) => probe_cmd(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let missing_input = matches!(&e, Error::Io(io) if io.kind() == std::io::ErrorKind::NotFound);
            ExitCode::from(if e.is_validation() || missing_input { 1 } else { 2 })
        }
    }
}
