use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::PipelineError;
use crate::feature_map::FeatureVector;
use crate::rng::rng_from_seed;

/// Sample-level feature matrix with binary labels and drive provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    features: Vec<Vec<f64>>,
    labels: Vec<u8>,
    drive_ids: Vec<String>,
    feature_names: Vec<String>,
}

impl Dataset {
    pub fn new(
        features: Vec<Vec<f64>>,
        labels: Vec<u8>,
        drive_ids: Vec<String>,
        feature_names: Vec<String>,
    ) -> Result<Self, PipelineError> {
        if features.len() != labels.len() || features.len() != drive_ids.len() {
            return Err(PipelineError::Shape(format!(
                "{} feature rows, {} labels, {} drive ids",
                features.len(),
                labels.len(),
                drive_ids.len()
            )));
        }
        if let Some((i, row)) = features.iter().enumerate().find(|(_, r)| r.len() != feature_names.len()) {
            return Err(PipelineError::Shape(format!(
                "row {i} has {} values, expected {}",
                row.len(),
                feature_names.len()
            )));
        }
        if let Some(&l) = labels.iter().find(|&&l| l > 1) {
            return Err(PipelineError::NonBinaryLabel(l));
        }
        Ok(Dataset { features, labels, drive_ids, feature_names })
    }

    /// Convenience constructor for in-memory fixtures: one drive per row,
    /// features named `f0`, `f1`, ...
    pub fn from_rows(features: Vec<Vec<f64>>, labels: Vec<u8>) -> Result<Self, PipelineError> {
        let width = features.first().map_or(0, Vec::len);
        let drive_ids = (0..features.len()).map(|i| format!("row{i}")).collect();
        let names = (0..width).map(|j| format!("f{j}")).collect();
        Dataset::new(features, labels, drive_ids, names)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    pub fn features(&self) -> &[Vec<f64>] {
        &self.features
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.features[i]
    }

    pub fn feature_vector(&self, i: usize) -> FeatureVector {
        FeatureVector(self.features[i].clone())
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn drive_ids(&self) -> &[String] {
        &self.drive_ids
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    /// Distinct drive ids in sorted order.
    pub fn drives(&self) -> BTreeSet<&str> {
        self.drive_ids.iter().map(String::as_str).collect()
    }

    /// (count of label 0, count of label 1).
    pub fn class_counts(&self) -> (usize, usize) {
        let ones = self.labels.iter().filter(|&&l| l == 1).count();
        (self.len() - ones, ones)
    }

    pub fn select_rows(&self, rows: &[usize]) -> Dataset {
        Dataset {
            features: rows.iter().map(|&i| self.features[i].clone()).collect(),
            labels: rows.iter().map(|&i| self.labels[i]).collect(),
            drive_ids: rows.iter().map(|&i| self.drive_ids[i].clone()).collect(),
            feature_names: self.feature_names.clone(),
        }
    }

    pub fn select_features(&self, columns: &[usize]) -> Result<Dataset, PipelineError> {
        if let Some(&c) = columns.iter().find(|&&c| c >= self.n_features()) {
            return Err(PipelineError::Shape(format!(
                "feature index {c} out of range for {} features",
                self.n_features()
            )));
        }
        Ok(Dataset {
            features: self
                .features
                .iter()
                .map(|r| columns.iter().map(|&c| r[c]).collect())
                .collect(),
            labels: self.labels.clone(),
            drive_ids: self.drive_ids.clone(),
            feature_names: columns.iter().map(|&c| self.feature_names[c].clone()).collect(),
        })
    }

    /// Seeded sample of `n` rows without replacement, kept in original order.
    /// Returns the whole dataset when `n >= len`.
    pub fn subsample(&self, n: usize, seed: u64) -> Dataset {
        if n >= self.len() {
            return self.clone();
        }
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.shuffle(&mut rng_from_seed(seed));
        idx.truncate(n);
        idx.sort_unstable();
        self.select_rows(&idx)
    }

    /// Rows whose drive id is in `drives`.
    pub fn filter_drives(&self, drives: &BTreeSet<String>) -> Dataset {
        let rows: Vec<usize> = (0..self.len()).filter(|&i| drives.contains(&self.drive_ids[i])).collect();
        self.select_rows(&rows)
    }

    /// Labels as ±1.
    pub fn signed_labels(&self) -> Vec<f64> {
        self.labels.iter().map(|&l| if l == 1 { 1.0 } else { -1.0 }).collect()
    }

    pub fn concat(&self, other: &Dataset) -> Result<Dataset, PipelineError> {
        if self.feature_names != other.feature_names {
            return Err(PipelineError::Shape("feature names differ".into()));
        }
        let mut out = self.clone();
        out.features.extend(other.features.iter().cloned());
        out.labels.extend_from_slice(&other.labels);
        out.drive_ids.extend(other.drive_ids.iter().cloned());
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_ragged_and_non_binary() {
        assert!(Dataset::from_rows(vec![vec![1.0, 2.0], vec![1.0]], vec![0, 1]).is_err());
        assert!(matches!(
            Dataset::from_rows(vec![vec![1.0]], vec![2]),
            Err(PipelineError::NonBinaryLabel(2))
        ));
        assert!(Dataset::new(vec![vec![1.0]], vec![0, 1], vec!["a".into()], vec!["x".into()]).is_err());
    }

    #[test]
    fn subsample_is_seeded_and_ordered() {
        let ds = Dataset::from_rows((0..50).map(|i| vec![i as f64]).collect(), vec![0; 50]).unwrap();
        let a = ds.subsample(10, 3);
        assert_eq!(a, ds.subsample(10, 3));
        assert_eq!(a.len(), 10);
        assert!(a.features().windows(2).all(|w| w[0][0] < w[1][0]));
        assert_eq!(ds.subsample(80, 3), ds);
    }

    #[test]
    fn select_features_keeps_names() {
        let ds = Dataset::from_rows(vec![vec![1.0, 2.0, 3.0]], vec![1]).unwrap();
        let s = ds.select_features(&[2, 0]).unwrap();
        assert_eq!(s.row(0), &[3.0, 1.0]);
        assert_eq!(s.feature_names(), &["f2".to_string(), "f0".to_string()]);
        assert!(ds.select_features(&[3]).is_err());
    }
}
