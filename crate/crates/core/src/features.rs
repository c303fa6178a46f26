//! Fisher-score filter feature selection for binary labels.
//!
//! For feature `j` with overall mean `μ_j`, class means `μ_cj`, class sizes
//! `n_c` and within-class population variances `σ²_cj`:
//!
//! ```text
//! F_j = Σ_c n_c (μ_cj − μ_j)² / (Σ_c n_c σ²_cj + ε),   ε = 1e-12
//! ```

use std::io::Write;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pipeline::Dataset;

pub const VARIANCE_FLOOR: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FeatureError {
    #[error("Fisher score needs samples from both classes (got {zeros} zeros, {ones} ones)")]
    SingleClass { zeros: usize, ones: usize },
    #[error("k = {k} outside 1..={n}")]
    KOutOfRange { k: usize, n: usize },
    #[error("ranking export failed: {0}")]
    Export(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureRanking {
    pub scores: Vec<f64>,
    /// Feature indices by descending score; ties keep ascending index order.
    pub order: Vec<usize>,
}

impl FeatureRanking {
    pub fn from_scores(scores: Vec<f64>) -> Self {
        let mut order: Vec<usize> = (0..scores.len()).collect();
        order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
        FeatureRanking { scores, order }
    }

    /// Writes `feature_name,score,rank` rows, best feature first, rank from 1.
    pub fn write_csv<W: Write>(&self, names: &[String], writer: W) -> Result<(), FeatureError> {
        let mut w = csv::Writer::from_writer(writer);
        let err = |e: csv::Error| FeatureError::Export(e.to_string());
        w.write_record(["feature_name", "score", "rank"]).map_err(err)?;
        for (rank, &j) in self.order.iter().enumerate() {
            let name = names.get(j).cloned().unwrap_or_else(|| format!("f{j}"));
            w.write_record([name, self.scores[j].to_string(), (rank + 1).to_string()])
                .map_err(err)?;
        }
        w.flush().map_err(|e| FeatureError::Export(e.to_string()))
    }
}

pub fn fisher_score(data: &Dataset) -> Result<FeatureRanking, FeatureError> {
    let (zeros, ones) = data.class_counts();
    if zeros == 0 || ones == 0 {
        return Err(FeatureError::SingleClass { zeros, ones });
    }
    let m = data.n_features();
    let mut sum = [vec![0.0; m], vec![0.0; m]];
    for (row, &y) in data.features().iter().zip(data.labels()) {
        for (s, v) in sum[y as usize].iter_mut().zip(row) {
            *s += v;
        }
    }
    let n = [zeros as f64, ones as f64];
    let class_mean: [Vec<f64>; 2] = [0, 1].map(|c| sum[c].iter().map(|s| s / n[c]).collect());

    // second pass for numerically stable variances
    let mut sq = [vec![0.0; m], vec![0.0; m]];
    for (row, &y) in data.features().iter().zip(data.labels()) {
        let c = y as usize;
        for j in 0..m {
            let d = row[j] - class_mean[c][j];
            sq[c][j] += d * d;
        }
    }
    let total = n[0] + n[1];
    let scores = (0..m)
        .map(|j| {
            let mu = (sum[0][j] + sum[1][j]) / total;
            let between: f64 = (0..2).map(|c| n[c] * (class_mean[c][j] - mu).powi(2)).sum();
            // n_c σ²_c is the class sum of squared deviations
            let within: f64 = sq[0][j] + sq[1][j];
            between / (within + VARIANCE_FLOOR)
        })
        .collect();
    Ok(FeatureRanking::from_scores(scores))
}

pub fn select_top_k(ranking: &FeatureRanking, k: usize) -> Result<Vec<usize>, FeatureError> {
    let n = ranking.order.len();
    if k == 0 || k > n {
        return Err(FeatureError::KOutOfRange { k, n });
    }
    Ok(ranking.order[..k].to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ds(rows: Vec<Vec<f64>>, labels: Vec<u8>) -> Dataset {
        Dataset::from_rows(rows, labels).unwrap()
    }

    #[test]
    fn label_independent_feature_scores_zero() {
        let d = ds(vec![vec![1.0, 0.0], vec![2.0, 0.0], vec![1.0, 1.0], vec![2.0, 1.0]], vec![0, 0, 1, 1]);
        let r = fisher_score(&d).unwrap();
        assert_eq!(r.scores[0], 0.0);
        assert_eq!(r.order, vec![1, 0]);
    }

    #[test]
    fn within_class_constant_hits_the_floor() {
        let d = ds(vec![vec![0.0], vec![0.0], vec![1.0], vec![1.0]], vec![0, 0, 1, 1]);
        let f = fisher_score(&d).unwrap().scores[0];
        // between = 2·0.25 + 2·0.25 = 1
        assert!(f.is_finite());
        assert!((f - 1.0 / VARIANCE_FLOOR).abs() / f < 1e-9);
    }

    #[test]
    fn single_class_rejected() {
        let d = ds(vec![vec![0.0], vec![1.0]], vec![1, 1]);
        assert_eq!(fisher_score(&d).unwrap_err(), FeatureError::SingleClass { zeros: 0, ones: 2 });
    }

    #[test]
    fn top_k_bounds_and_ties() {
        let r = FeatureRanking::from_scores(vec![1.0, 3.0, 1.0, 3.0]);
        assert_eq!(r.order, vec![1, 3, 0, 2]);
        assert_eq!(select_top_k(&r, 4).unwrap(), vec![1, 3, 0, 2]);
        assert_eq!(select_top_k(&r, 1).unwrap(), vec![1]);
        assert!(select_top_k(&r, 0).is_err());
        assert!(select_top_k(&r, 5).is_err());
    }

    #[test]
    fn csv_export() {
        let r = FeatureRanking::from_scores(vec![0.5, 2.0]);
        let mut buf = Vec::new();
        r.write_csv(&["a".into(), "b".into()], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "feature_name,score,rank\nb,2,1\na,0.5,2\n");
    }
}
