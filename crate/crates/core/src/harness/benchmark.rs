use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::backend::ExecutionBackend;
use super::latency::{LatencyModel, TimingRecord};
use super::report::{BenchmarkReport, ReportRow, Stat};
use super::HarnessError;
use crate::feature_map::FeatureMapSpec;
use crate::features::{fisher_score, select_top_k};
use crate::pipeline::{
    generate_synthetic, ingest_csv, preprocess, split_by_drive, CsvSchema, Dataset, MinMaxScaler, SplitSpec,
    SyntheticConfig, DEFAULT_FEATURE_RANGE,
};
use crate::qsim::NoiseModel;
use crate::qubo_svm::{build_qubo, decode_model, solve_annealing, AnnealSchedule, QuboEncoding};
use crate::rng::{derive_seed, rng_from_seed};
use crate::svm::{fit, select_kernel, KernelSpec, DEFAULT_C, DEFAULT_TOL};
use crate::vqc::{predict_batch, train, AnsatzSpec, Entangler, TrainConfig, VqcModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClassicalSvm,
    VqcSimulator,
    VqcRemoteMock,
    QuboSvm,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::ClassicalSvm, Method::VqcSimulator, Method::VqcRemoteMock, Method::QuboSvm];

    pub fn id(&self) -> &'static str {
        match self {
            Method::ClassicalSvm => "classical_svm",
            Method::VqcSimulator => "vqc_simulator",
            Method::VqcRemoteMock => "vqc_remote_mock",
            Method::QuboSvm => "qubo_svm",
        }
    }

    /// Name shown in reports.
    pub fn label(&self) -> &'static str {
        match self {
            Method::ClassicalSvm => "SVM",
            Method::VqcSimulator | Method::VqcRemoteMock => "VQC",
            Method::QuboSvm => "QUBO-SVM",
        }
    }
}

impl FromStr for Method {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Method::ALL
            .into_iter()
            .find(|m| m.id() == s)
            .ok_or_else(|| HarnessError::UnknownMethod(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum DatasetSource {
    Synthetic(SyntheticConfig),
    Csv {
        path: PathBuf,
        #[serde(default)]
        schema: CsvSchema,
    },
}

impl Default for DatasetSource {
    fn default() -> Self {
        DatasetSource::Synthetic(SyntheticConfig::default())
    }
}

impl DatasetSource {
    /// Raw log → cleaned, augmented, drive-labelled (unscaled) dataset.
    pub fn load(&self) -> Result<Dataset, HarnessError> {
        let log = match self {
            DatasetSource::Synthetic(cfg) => generate_synthetic(cfg)?,
            DatasetSource::Csv { path, schema } => ingest_csv(path, schema)?,
        };
        Ok(preprocess(&log)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SvmSettings {
    #[serde(rename = "C")]
    pub c: f64,
    /// Candidates compared on the test partition.
    pub kernels: Vec<KernelSpec>,
}

impl Default for SvmSettings {
    fn default() -> Self {
        SvmSettings { c: DEFAULT_C, kernels: KernelSpec::standard_candidates() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct VqcSettings {
    pub layers: usize,
    pub entangler: Entangler,
    pub feature_map_repetitions: usize,
    /// `seed` and `shots` are overridden per repetition from the benchmark.
    pub train: TrainConfig,
}

impl Default for VqcSettings {
    fn default() -> Self {
        VqcSettings { layers: 2, entangler: Entangler::LinearCz, feature_map_repetitions: 2, train: TrainConfig::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuboSettings {
    /// Training rows, drawn class-balanced from the training subsample.
    pub n_samples: usize,
    pub precision_bits: usize,
    pub base: f64,
    pub penalty: f64,
    pub kernel: KernelSpec,
    pub anneal: AnnealSchedule,
}

impl Default for QuboSettings {
    fn default() -> Self {
        QuboSettings {
            n_samples: 30,
            precision_bits: 2,
            base: 2.0,
            penalty: 1.0,
            kernel: KernelSpec::rbf(),
            anneal: AnnealSchedule::default(),
        }
    }
}

/// Everything a benchmark run needs. Loadable from JSON or TOML.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BenchmarkConfig {
    pub methods: Vec<Method>,
    pub repetitions: usize,
    pub seed: u64,
    pub dataset: DatasetSource,
    pub split: SplitSpec,
    /// Features kept after Fisher ranking.
    pub k: usize,
    /// Training rows used by every method.
    pub train_samples: usize,
    pub shots: u64,
    pub feature_range: (f64, f64),
    pub svm: SvmSettings,
    pub vqc: VqcSettings,
    pub qubo: QuboSettings,
    pub latency: LatencyModel,
    /// Gate noise for the simulator and the remote mock; zero means ideal.
    pub noise: NoiseModel,
    /// Report measured wall-clock times as zero so output is reproducible.
    pub omit_wall_clock: bool,
}

impl Default for BenchmarkConfig {
    fn default() -> Self {
        BenchmarkConfig {
            methods: Method::ALL.to_vec(),
            repetitions: 3,
            seed: 0,
            dataset: DatasetSource::default(),
            split: SplitSpec::default(),
            k: 2,
            train_samples: 1813,
            shots: 1000,
            feature_range: DEFAULT_FEATURE_RANGE,
            svm: SvmSettings::default(),
            vqc: VqcSettings::default(),
            qubo: QuboSettings::default(),
            latency: LatencyModel::default(),
            noise: NoiseModel::ideal(0),
            omit_wall_clock: false,
        }
    }
}

impl BenchmarkConfig {
    /// Parses JSON when the extension is `.json`, TOML otherwise.
    pub fn from_path(path: impl AsRef<Path>) -> Result<Self, HarnessError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))?;
        if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
            Self::from_json(&text)
        } else {
            Self::from_toml(&text)
        }
    }

    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        serde_json::from_str(text).map_err(|e| HarnessError::ConfigParse(e.to_string()))
    }

    pub fn from_toml(text: &str) -> Result<Self, HarnessError> {
        toml::from_str(text).map_err(|e| HarnessError::ConfigParse(e.to_string()))
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.methods.is_empty() {
            return Err(HarnessError::InvalidConfig("no methods configured".into()));
        }
        if self.repetitions == 0 {
            return Err(HarnessError::InvalidConfig("repetitions must be at least 1".into()));
        }
        if self.k == 0 || self.train_samples == 0 || self.shots == 0 {
            return Err(HarnessError::InvalidConfig("k, train_samples and shots must be at least 1".into()));
        }
        self.split.validate()?;
        self.latency.validate()?;
        self.noise.validate().map_err(|e| HarnessError::InvalidConfig(e.to_string()))?;
        self.vqc.train.validate()?;
        self.qubo.anneal.validate()?;
        Ok(())
    }

    fn local_backend(&self) -> ExecutionBackend {
        if self.noise.per_gate_error == 0.0 {
            ExecutionBackend::SimulatorIdeal
        } else {
            ExecutionBackend::SimulatorNoisy { noise: self.noise.clone() }
        }
    }
}

/// Partitions after drive split, Fisher selection on the training partition
/// and min-max scaling fitted on the training partition.
#[derive(Debug, Clone, PartialEq)]
pub struct PreparedData {
    pub train: Dataset,
    pub test: Dataset,
    pub validation: Dataset,
    /// Column indices into the unscaled dataset, best first.
    pub selected: Vec<usize>,
    /// Scaler over the selected columns.
    pub scaler: MinMaxScaler,
}

pub fn prepare_datasets(
    data: &Dataset,
    split: &SplitSpec,
    k: usize,
    range: (f64, f64),
) -> Result<PreparedData, HarnessError> {
    let parts = split_by_drive(data, split)?;
    let ranking = fisher_score(&parts.train)?;
    let selected = select_top_k(&ranking, k)?;
    let pick = |d: &Dataset| d.select_features(&selected);
    let (train, test, validation) = (pick(&parts.train)?, pick(&parts.test)?, pick(&parts.validation)?);
    let scaler = MinMaxScaler::fit_with_range(&train, range)?;
    Ok(PreparedData {
        train: scaler.transform(&train)?,
        test: scaler.transform(&test)?,
        validation: scaler.transform(&validation)?,
        selected,
        scaler,
    })
}

/// Up to `n` rows with the classes as even as the data allows, in original order.
pub fn balanced_subsample(data: &Dataset, n: usize, seed: u64) -> Dataset {
    let mut rng = rng_from_seed(seed);
    let mut by_class: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
    for (i, &y) in data.labels().iter().enumerate() {
        by_class[y as usize].push(i);
    }
    by_class.iter_mut().for_each(|c| c.shuffle(&mut rng));
    let half = n / 2;
    let take1 = by_class[1].len().min(n - half.min(by_class[0].len()));
    let take0 = by_class[0].len().min(n - take1);
    let mut rows: Vec<usize> = by_class[0][..take0].iter().chain(&by_class[1][..take1]).copied().collect();
    rows.sort_unstable();
    data.select_rows(&rows)
}

struct Run {
    kernel: String,
    train_hardware: String,
    validate_hardware: String,
    timing: TimingRecord,
    validate_s: f64,
    accuracy: f64,
}

struct Context<'a> {
    cfg: &'a BenchmarkConfig,
    train: Dataset,
    test: &'a Dataset,
    validation: &'a Dataset,
}

impl Context<'_> {
    fn wall(&self, t: Instant) -> f64 {
        if self.cfg.omit_wall_clock {
            0.0
        } else {
            t.elapsed().as_secs_f64()
        }
    }

    fn vqc_train(&self, seed: u64) -> Result<(VqcModel, f64), HarnessError> {
        let n = self.train.n_features();
        let fm = FeatureMapSpec { repetitions: self.cfg.vqc.feature_map_repetitions, ..FeatureMapSpec::new(n) };
        let ansatz = AnsatzSpec { n_qubits: n, layers: self.cfg.vqc.layers, entangler: self.cfg.vqc.entangler };
        let tc = TrainConfig { seed, shots: self.cfg.shots, ..self.cfg.vqc.train };
        let t = Instant::now();
        let model = train(&self.train, &fm, &ansatz, &tc, &self.cfg.local_backend())?;
        Ok((model, self.wall(t)))
    }

    fn run(&self, method: Method, rep: usize, cached: &mut Option<(VqcModel, f64)>) -> Result<Run, HarnessError> {
        let cfg = self.cfg;
        let seed = derive_seed(cfg.seed, rep as u64);
        match method {
            Method::ClassicalSvm => {
                let sel = select_kernel(&self.train, self.test, &cfg.svm.kernels, cfg.svm.c)?;
                let t = Instant::now();
                let model = fit(&self.train, &sel.best, cfg.svm.c, DEFAULT_TOL)?;
                let train_s = self.wall(t);
                let t = Instant::now();
                let acc = model.accuracy(self.validation)?.unwrap_or(0.0);
                let validate_s = self.wall(t);
                Ok(Run {
                    kernel: sel.best.to_string(),
                    train_hardware: "CPU".into(),
                    validate_hardware: "CPU".into(),
                    timing: TimingRecord { train_wall_s: train_s, validate_wall_s: validate_s, ..Default::default() },
                    validate_s,
                    accuracy: acc,
                })
            }
            Method::VqcSimulator | Method::VqcRemoteMock => {
                if cached.is_none() {
                    *cached = Some(self.vqc_train(seed)?);
                }
                let (model, train_s) = cached.clone().expect("trained above");
                let backend = match method {
                    Method::VqcSimulator => cfg.local_backend(),
                    _ => ExecutionBackend::RemoteQpuMock {
                        latency: cfg.latency.clone().with_seed(derive_seed(cfg.latency.seed, rep as u64)),
                        noise: cfg.noise.clone(),
                    },
                };
                let t = Instant::now();
                let pred = predict_batch(self.validation, &model, &backend, derive_seed(seed, 1))?;
                let wall = self.wall(t);
                if let Some(f) = pred.failure {
                    return Err(f.error.into());
                }
                let timing = TimingRecord {
                    train_wall_s: train_s,
                    validate_wall_s: wall,
                    circuits: pred.circuits,
                    batches: pred.batches,
                };
                let validate_s = match method {
                    Method::VqcRemoteMock => timing.simulated_total_s(),
                    _ => wall,
                };
                Ok(Run {
                    kernel: "ZZ feature map".into(),
                    train_hardware: cfg.local_backend().hardware_label().into(),
                    validate_hardware: backend.hardware_label().into(),
                    timing,
                    validate_s,
                    accuracy: pred.accuracy.unwrap_or(0.0),
                })
            }
            Method::QuboSvm => {
                let q = &cfg.qubo;
                let sub = balanced_subsample(&self.train, q.n_samples, derive_seed(seed, 2));
                let enc = QuboEncoding { n_samples: sub.len(), precision_bits: q.precision_bits, base: q.base, penalty: q.penalty };
                let sched = AnnealSchedule { seed: derive_seed(seed, 3), ..q.anneal };
                let t = Instant::now();
                let matrix = build_qubo(&sub, &q.kernel, &enc)?;
                let sol = solve_annealing(&matrix, &sched)?;
                let model = decode_model(&sol.bits, &enc, &sub, &q.kernel)?;
                let train_s = self.wall(t);
                let t = Instant::now();
                let acc = model.accuracy(self.validation)?.unwrap_or(0.0);
                let validate_s = self.wall(t);
                Ok(Run {
                    kernel: q.kernel.to_string(),
                    train_hardware: "CPU (annealing)".into(),
                    validate_hardware: "CPU".into(),
                    timing: TimingRecord { train_wall_s: train_s, validate_wall_s: validate_s, ..Default::default() },
                    validate_s,
                    accuracy: acc,
                })
            }
        }
    }
}

/// Split → select k features → train → validate, for every configured method
/// and repetition. Data preparation and the training subsample are shared by
/// all repetitions; each repetition reseeds training and measurement.
pub fn run_benchmark(cfg: &BenchmarkConfig) -> Result<BenchmarkReport, HarnessError> {
    cfg.validate()?;
    let data = cfg.dataset.load()?;
    let prepared = prepare_datasets(&data, &cfg.split, cfg.k, cfg.feature_range)?;
    let ctx = Context {
        cfg,
        train: prepared.train.subsample(cfg.train_samples, derive_seed(cfg.seed, u64::MAX)),
        test: &prepared.test,
        validation: &prepared.validation,
    };

    let mut runs: Vec<Vec<Run>> = cfg.methods.iter().map(|_| Vec::new()).collect();
    for rep in 0..cfg.repetitions {
        let mut cached = None;
        for (m, method) in cfg.methods.iter().enumerate() {
            runs[m].push(ctx.run(*method, rep, &mut cached)?);
        }
    }

    let rows = cfg
        .methods
        .iter()
        .zip(runs)
        .map(|(method, runs)| {
            let train_times: Vec<f64> = runs.iter().map(|r| r.timing.train_wall_s).collect();
            let validate_times: Vec<f64> = runs.iter().map(|r| r.validate_s).collect();
            let accuracies: Vec<f64> = runs.iter().map(|r| r.accuracy).collect();
            let first = &runs[0];
            ReportRow {
                method: *method,
                kernel: first.kernel.clone(),
                train_hardware: first.train_hardware.clone(),
                train_time: Stat::from_runs(&train_times),
                validate_hardware: first.validate_hardware.clone(),
                validate_time: Stat::from_runs(&validate_times),
                accuracy: Stat::from_runs(&accuracies),
                runs: runs.len(),
                train_times,
                validate_times,
                accuracies,
            }
        })
        .collect();
    Ok(BenchmarkReport { repetitions: cfg.repetitions, seed: cfg.seed, rows })
}
