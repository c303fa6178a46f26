use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::benchmark::Method;
use super::HarnessError;

/// Mean and half-range over repeated runs.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Stat {
    pub mean: f64,
    pub spread: f64,
}

impl Stat {
    pub fn from_runs(values: &[f64]) -> Stat {
        if values.is_empty() {
            return Stat::default();
        }
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        Stat { mean, spread: (max - min) / 2.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub method: Method,
    pub kernel: String,
    pub train_hardware: String,
    /// Seconds.
    pub train_time: Stat,
    pub validate_hardware: String,
    /// Seconds; virtual time for the remote mock.
    pub validate_time: Stat,
    /// Fraction in [0, 1].
    pub accuracy: Stat,
    pub runs: usize,
    pub train_times: Vec<f64>,
    pub validate_times: Vec<f64>,
    pub accuracies: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkReport {
    pub repetitions: usize,
    pub seed: u64,
    pub rows: Vec<ReportRow>,
}

impl BenchmarkReport {
    pub fn row(&self, method: Method) -> Option<&ReportRow> {
        self.rows.iter().find(|r| r.method == method)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Markdown,
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "markdown" | "md" => Ok(ReportFormat::Markdown),
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(HarnessError::InvalidConfig(format!("unknown report format `{other}`"))),
        }
    }
}

fn decimals(v: f64) -> usize {
    if v >= 10.0 {
        0
    } else if v >= 1.0 {
        1
    } else {
        2
    }
}

/// `value ±spread unit`, with the unit picked from the mean: ms below one
/// second, s below a minute, m above.
pub fn format_duration(seconds: Stat) -> String {
    let (scale, unit) = if seconds.mean < 1.0 {
        (1000.0, "ms")
    } else if seconds.mean < 60.0 {
        (1.0, "s")
    } else {
        (1.0 / 60.0, "m")
    };
    let (v, s) = (seconds.mean * scale, seconds.spread * scale);
    let d = decimals(v);
    format!("{v:.d$} ±{s:.d$} {unit}")
}

/// Percentage with one decimal, e.g. `93.2 ±0.0%`.
pub fn format_accuracy(acc: Stat) -> String {
    format!("{:.1} ±{:.1}%", acc.mean * 100.0, acc.spread * 100.0)
}

const COLUMNS: [&str; 7] =
    ["Method", "Kernel", "Train Hardware", "Train Time", "Validate Hardware", "Validate Time", "Accuracy"];

fn cells(row: &ReportRow) -> [String; 7] {
    [
        row.method.label().to_string(),
        row.kernel.clone(),
        row.train_hardware.clone(),
        format_duration(row.train_time),
        row.validate_hardware.clone(),
        format_duration(row.validate_time),
        format_accuracy(row.accuracy),
    ]
}

pub fn emit_report(report: &BenchmarkReport, format: ReportFormat) -> Result<String, HarnessError> {
    if report.rows.is_empty() {
        return Err(HarnessError::EmptyReport);
    }
    match format {
        ReportFormat::Markdown => {
            let mut out = String::new();
            writeln!(out, "| {} |", COLUMNS.join(" | ")).unwrap();
            writeln!(out, "|{}", "---|".repeat(COLUMNS.len())).unwrap();
            for row in &report.rows {
                writeln!(out, "| {} |", cells(row).join(" | ")).unwrap();
            }
            Ok(out)
        }
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let err = |e: csv::Error| HarnessError::Io(e.to_string());
            w.write_record(COLUMNS).map_err(err)?;
            for row in &report.rows {
                w.write_record(cells(row)).map_err(err)?;
            }
            let bytes = w.into_inner().map_err(|e| HarnessError::Io(e.to_string()))?;
            Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
        }
        ReportFormat::Json => Ok(serde_json::to_string_pretty(report).expect("report serializes") + "\n"),
    }
}
