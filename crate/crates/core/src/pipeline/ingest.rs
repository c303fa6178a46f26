use std::collections::HashMap;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::PipelineError;

/// One telemetry row. Rows with unparseable cells are kept but marked invalid
/// so that cleaning can report and drop them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawSample {
    /// Seconds since the Unix epoch (UTC).
    pub timestamp: i64,
    pub seat_heating: bool,
    pub values: Vec<f64>,
    pub valid: bool,
}

/// A single trip, samples in timestamp order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Drive {
    pub drive_id: String,
    pub samples: Vec<RawSample>,
}

impl Drive {
    pub fn valid_samples(&self) -> impl Iterator<Item = &RawSample> {
        self.samples.iter().filter(|s| s.valid)
    }
}

/// Drives plus the names of their raw feature columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DriveLog {
    pub feature_names: Vec<String>,
    pub drives: Vec<Drive>,
}

impl DriveLog {
    pub fn n_samples(&self) -> usize {
        self.drives.iter().map(|d| d.samples.len()).sum()
    }

    pub fn invalid_rows(&self) -> usize {
        self.drives.iter().flat_map(|d| &d.samples).filter(|s| !s.valid).count()
    }
}

/// Names of the mandatory columns; every other column is a feature.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct CsvSchema {
    pub drive_id: String,
    pub timestamp: String,
    pub seat_heating: String,
}

impl Default for CsvSchema {
    fn default() -> Self {
        CsvSchema {
            drive_id: "drive_id".into(),
            timestamp: "timestamp".into(),
            seat_heating: "seat_heating".into(),
        }
    }
}

fn parse_state(cell: &str) -> Option<bool> {
    match cell.trim().to_ascii_lowercase().as_str() {
        "on" | "1" | "true" => Some(true),
        "off" | "0" | "false" => Some(false),
        _ => None,
    }
}

pub fn ingest_csv(path: impl AsRef<Path>, schema: &CsvSchema) -> Result<DriveLog, PipelineError> {
    let file = std::fs::File::open(path.as_ref())
        .map_err(|e| PipelineError::Io(format!("{}: {e}", path.as_ref().display())))?;
    ingest_reader(file, schema)
}

/// Reads telemetry CSV from any reader.
///
/// Drives appear in order of first occurrence; samples are sorted by
/// timestamp and a repeated timestamp within a drive marks the later row
/// invalid.
pub fn ingest_reader<R: Read>(reader: R, schema: &CsvSchema) -> Result<DriveLog, PipelineError> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).flexible(true).from_reader(reader);
    let headers = rdr.headers().map_err(|e| PipelineError::Parse(e.to_string()))?.clone();
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| PipelineError::MissingColumn(name.to_string()))
    };
    let id_col = find(&schema.drive_id)?;
    let ts_col = find(&schema.timestamp)?;
    let state_col = find(&schema.seat_heating)?;
    let feature_cols: Vec<usize> = (0..headers.len()).filter(|c| ![id_col, ts_col, state_col].contains(c)).collect();
    let feature_names = feature_cols.iter().map(|&c| headers[c].trim().to_string()).collect();

    let mut index: HashMap<String, usize> = HashMap::new();
    let mut drives: Vec<Drive> = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| PipelineError::Parse(e.to_string()))?;
        let drive_id = record.get(id_col).unwrap_or("").trim().to_string();
        let ts = record.get(ts_col).and_then(|c| c.trim().parse::<i64>().ok());
        let state = record.get(state_col).and_then(parse_state);
        let values: Vec<Option<f64>> = feature_cols
            .iter()
            .map(|&c| record.get(c).and_then(|v| v.trim().parse::<f64>().ok()).filter(|v| v.is_finite()))
            .collect();
        let valid = ts.is_some() && state.is_some() && values.iter().all(Option::is_some);
        let sample = RawSample {
            timestamp: ts.unwrap_or(i64::MIN),
            seat_heating: state.unwrap_or(false),
            values: values.into_iter().map(|v| v.unwrap_or(f64::NAN)).collect(),
            valid,
        };
        let slot = *index.entry(drive_id.clone()).or_insert_with(|| {
            drives.push(Drive { drive_id, samples: Vec::new() });
            drives.len() - 1
        });
        drives[slot].samples.push(sample);
    }
    for drive in &mut drives {
        drive.samples.sort_by_key(|s| s.timestamp);
        let mut last: Option<i64> = None;
        for s in drive.samples.iter_mut().filter(|s| s.valid) {
            if last == Some(s.timestamp) {
                s.valid = false;
            } else {
                last = Some(s.timestamp);
            }
        }
    }
    Ok(DriveLog { feature_names, drives })
}

/// Writes telemetry in the layout [`ingest_reader`] expects.
pub fn write_csv<W: Write>(log: &DriveLog, writer: W) -> Result<(), PipelineError> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header = vec!["drive_id".to_string(), "timestamp".into(), "seat_heating".into()];
    header.extend(log.feature_names.iter().cloned());
    w.write_record(&header).map_err(|e| PipelineError::Io(e.to_string()))?;
    for drive in &log.drives {
        for s in &drive.samples {
            let mut row = vec![
                drive.drive_id.clone(),
                s.timestamp.to_string(),
                if s.seat_heating { "on" } else { "off" }.to_string(),
            ];
            row.extend(s.values.iter().map(|v| v.to_string()));
            w.write_record(&row).map_err(|e| PipelineError::Io(e.to_string()))?;
        }
    }
    w.flush().map_err(|e| PipelineError::Io(e.to_string()))?;
    Ok(())
}
