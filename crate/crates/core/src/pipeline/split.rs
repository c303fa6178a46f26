use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::{Dataset, PipelineError};
use crate::rng::rng_from_seed;

/// Drive-level partition fractions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SplitSpec {
    pub train: f64,
    pub test: f64,
    pub validation: f64,
    pub seed: u64,
}

impl Default for SplitSpec {
    fn default() -> Self {
        SplitSpec { train: 0.8, test: 0.1, validation: 0.1, seed: 0 }
    }
}

impl SplitSpec {
    pub fn validate(&self) -> Result<(), PipelineError> {
        let fr = [self.train, self.test, self.validation];
        if fr.iter().any(|f| !(f.is_finite() && *f > 0.0)) {
            return Err(PipelineError::InvalidSplit(format!("fractions must be positive, got {fr:?}")));
        }
        if fr.iter().sum::<f64>() > 1.0 + 1e-9 {
            return Err(PipelineError::InvalidSplit(format!("fractions sum above 1: {fr:?}")));
        }
        Ok(())
    }

    /// Drive counts per partition. When the fractions sum to one the
    /// validation partition absorbs rounding; otherwise the remainder stays
    /// unassigned.
    pub fn counts(&self, n_drives: usize) -> Result<[usize; 3], PipelineError> {
        self.validate()?;
        let n = n_drives as f64;
        let train = (self.train * n).round() as usize;
        let test = (self.test * n).round() as usize;
        let sum = self.train + self.test + self.validation;
        let validation = if (sum - 1.0).abs() < 1e-9 {
            n_drives.saturating_sub(train + test)
        } else {
            (self.validation * n).round() as usize
        };
        if train + test + validation > n_drives {
            return Err(PipelineError::InvalidSplit(format!(
                "{train}+{test}+{validation} drives requested from {n_drives}"
            )));
        }
        for (name, c) in [("train", train), ("test", test), ("validation", validation)] {
            if c == 0 {
                return Err(PipelineError::EmptyPartition(name.into()));
            }
        }
        Ok([train, test, validation])
    }
}

/// Drive ids per partition, written alongside results for reproducibility.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitManifest {
    pub seed: u64,
    pub fractions: [f64; 3],
    pub train: Vec<String>,
    pub test: Vec<String>,
    pub validation: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DriveSplit {
    pub train: Dataset,
    pub test: Dataset,
    pub validation: Dataset,
    pub manifest: SplitManifest,
}

/// Shuffles drives (never individual samples) and partitions them, so every
/// drive lands wholly inside one partition.
pub fn split_by_drive(data: &Dataset, spec: &SplitSpec) -> Result<DriveSplit, PipelineError> {
    let mut drives: Vec<String> = data.drives().into_iter().map(str::to_string).collect();
    let [n_train, n_test, n_val] = spec.counts(drives.len())?;
    drives.shuffle(&mut rng_from_seed(spec.seed));

    let mut parts = [
        drives[..n_train].to_vec(),
        drives[n_train..n_train + n_test].to_vec(),
        drives[n_train + n_test..n_train + n_test + n_val].to_vec(),
    ];
    for p in &mut parts {
        p.sort();
    }
    let pick = |ids: &[String]| data.filter_drives(&ids.iter().cloned().collect::<BTreeSet<_>>());
    let [train_ids, test_ids, val_ids] = parts;
    Ok(DriveSplit {
        train: pick(&train_ids),
        test: pick(&test_ids),
        validation: pick(&val_ids),
        manifest: SplitManifest {
            seed: spec.seed,
            fractions: [spec.train, spec.test, spec.validation],
            train: train_ids,
            test: test_ids,
            validation: val_ids,
        },
    })
}
