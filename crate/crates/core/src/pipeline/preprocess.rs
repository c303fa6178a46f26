use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use super::{Dataset, Drive, DriveLog, PipelineError};

/// Names of the context features appended by [`preprocess`].
pub const AUGMENTED_FEATURES: [&str; 5] = ["hour_sin", "hour_cos", "elapsed_minutes", "weekday_sin", "weekday_cos"];

/// Target interval for scaled features.
///
/// The embedding phases wrap quickly over the full `[0, π]` interval, so
/// features are mapped onto its lower quarter by default.
pub const DEFAULT_FEATURE_RANGE: (f64, f64) = (0.0, PI / 4.0);

/// 1 when strictly more than half of the valid samples have the heater on.
pub fn majority_vote(drive: &Drive) -> Result<u8, PipelineError> {
    let (on, total) = drive
        .valid_samples()
        .fold((0usize, 0usize), |(on, n), s| (on + s.seat_heating as usize, n + 1));
    if total == 0 {
        return Err(PipelineError::EmptyDrive(drive.drive_id.clone()));
    }
    Ok(u8::from(2 * on > total))
}

/// Hour of day (fractional) and weekday (Monday = 0) for a Unix timestamp.
fn clock(timestamp: i64) -> (f64, f64) {
    let secs_of_day = timestamp.rem_euclid(86_400);
    let day = timestamp.div_euclid(86_400);
    // 1970-01-01 was a Thursday
    let weekday = (day + 3).rem_euclid(7);
    (secs_of_day as f64 / 3600.0, weekday as f64)
}

/// Context features for a sample at `timestamp` in a drive that began at `start`.
pub fn context_features(timestamp: i64, start: i64) -> [f64; 5] {
    let (hour, weekday) = clock(timestamp);
    let h = TAU * hour / 24.0;
    let d = TAU * weekday / 7.0;
    [h.sin(), h.cos(), (timestamp - start) as f64 / 60.0, d.sin(), d.cos()]
}

/// Drops invalid rows, labels every sample with its drive's majority vote and
/// appends the context features. The result is unscaled; fit a
/// [`MinMaxScaler`] on the training partition afterwards.
pub fn preprocess(log: &DriveLog) -> Result<Dataset, PipelineError> {
    let mut features = Vec::new();
    let mut labels = Vec::new();
    let mut drive_ids = Vec::new();
    for drive in &log.drives {
        let Some(start) = drive.valid_samples().map(|s| s.timestamp).next() else {
            continue;
        };
        let label = majority_vote(drive)?;
        for s in drive.valid_samples() {
            let mut row = s.values.clone();
            row.extend(context_features(s.timestamp, start));
            features.push(row);
            labels.push(label);
            drive_ids.push(drive.drive_id.clone());
        }
    }
    if features.is_empty() {
        return Err(PipelineError::EmptyDataset);
    }
    let mut names = log.feature_names.clone();
    names.extend(AUGMENTED_FEATURES.iter().map(|s| s.to_string()));
    Dataset::new(features, labels, drive_ids, names)
}

/// Per-feature min-max scaling fitted on one dataset and applied to others.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinMaxScaler {
    pub mins: Vec<f64>,
    pub maxs: Vec<f64>,
    pub range: (f64, f64),
}

impl MinMaxScaler {
    pub fn fit(data: &Dataset) -> Result<Self, PipelineError> {
        Self::fit_with_range(data, DEFAULT_FEATURE_RANGE)
    }

    pub fn fit_with_range(data: &Dataset, range: (f64, f64)) -> Result<Self, PipelineError> {
        if data.is_empty() {
            return Err(PipelineError::EmptyDataset);
        }
        if !(range.0 < range.1) {
            return Err(PipelineError::Shape(format!("invalid scaling range {range:?}")));
        }
        let n = data.n_features();
        let mut mins = vec![f64::INFINITY; n];
        let mut maxs = vec![f64::NEG_INFINITY; n];
        for row in data.features() {
            for (j, &v) in row.iter().enumerate() {
                mins[j] = mins[j].min(v);
                maxs[j] = maxs[j].max(v);
            }
        }
        Ok(MinMaxScaler { mins, maxs, range })
    }

    /// Maps each feature onto `range` using the fitted bounds. Values beyond
    /// the fitted bounds are clamped; a constant feature maps to the lower end.
    pub fn transform(&self, data: &Dataset) -> Result<Dataset, PipelineError> {
        if data.n_features() != self.mins.len() {
            return Err(PipelineError::Shape(format!(
                "scaler fitted on {} features, got {}",
                self.mins.len(),
                data.n_features()
            )));
        }
        let rows = data.features().iter().map(|r| self.transform_row(r)).collect();
        Dataset::new(rows, data.labels().to_vec(), data.drive_ids().to_vec(), data.feature_names().to_vec())
    }

    pub fn transform_row(&self, row: &[f64]) -> Vec<f64> {
        let (lo, hi) = self.range;
        row.iter()
            .enumerate()
            .map(|(j, &v)| {
                let span = self.maxs[j] - self.mins[j];
                if span <= 0.0 {
                    lo
                } else {
                    lo + ((v - self.mins[j]) / span).clamp(0.0, 1.0) * (hi - lo)
                }
            })
            .collect()
    }

    /// Restricts the scaler to a subset of features.
    pub fn select(&self, columns: &[usize]) -> MinMaxScaler {
        MinMaxScaler {
            mins: columns.iter().map(|&c| self.mins[c]).collect(),
            maxs: columns.iter().map(|&c| self.maxs[c]).collect(),
            range: self.range,
        }
    }
}
