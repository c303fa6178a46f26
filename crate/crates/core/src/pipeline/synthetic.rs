use rand::seq::SliceRandom;
use rand::Rng as _;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::{Drive, DriveLog, PipelineError, RawSample};
use crate::rng::stream_rng;

/// Sampling period of the telemetry, seconds.
pub const SAMPLE_PERIOD_S: i64 = 5;

/// Shape of the synthetic telemetry set.
///
/// The defaults mirror the recorded fleet: 79 drives (27 with the heater on),
/// 116 raw signals and about 20458 samples. Preprocessing later appends five
/// context features, bringing the total to 121.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SyntheticConfig {
    pub n_drives: usize,
    pub n_on_drives: usize,
    pub n_raw_features: usize,
    /// Raw feature columns whose distribution depends on the drive label.
    pub informative_features: Vec<usize>,
    /// Class-mean separation of informative features, in noise standard deviations.
    pub separation: f64,
    /// Per-sample noise standard deviation, in units of each signal's scale.
    pub noise_level: f64,
    /// Standard deviation of a per-drive offset shared by all of its samples.
    pub drive_offset: f64,
    /// Total sample count, distributed across drives.
    pub total_samples: usize,
    /// Share of samples with the heater on within an "on" drive.
    pub on_share_in_on_drives: f64,
    /// Share of samples with the heater on within an "off" drive.
    pub on_share_in_off_drives: f64,
    /// Earliest drive start, Unix seconds.
    pub start_epoch: i64,
    pub seed: u64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        SyntheticConfig {
            n_drives: 79,
            n_on_drives: 27,
            n_raw_features: 116,
            informative_features: vec![7, 52],
            separation: 2.0,
            noise_level: 1.0,
            drive_offset: 0.0,
            total_samples: 20458,
            on_share_in_on_drives: 0.8,
            on_share_in_off_drives: 0.1,
            start_epoch: 1_546_300_800, // 2019-01-01T00:00:00Z
            seed: 0,
        }
    }
}

impl SyntheticConfig {
    pub fn validate(&self) -> Result<(), PipelineError> {
        let bad = |m: String| Err(PipelineError::InvalidConfig(m));
        if self.n_drives == 0 {
            return bad("n_drives must be positive".into());
        }
        if self.n_on_drives > self.n_drives {
            return bad(format!("{} on-drives out of {}", self.n_on_drives, self.n_drives));
        }
        if self.informative_features.len() > self.n_raw_features {
            return bad(format!(
                "{} informative features requested but only {} features exist",
                self.informative_features.len(),
                self.n_raw_features
            ));
        }
        let mut seen = self.informative_features.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != self.informative_features.len() {
            return bad("informative feature indices repeat".into());
        }
        if let Some(&i) = seen.iter().find(|&&i| i >= self.n_raw_features) {
            return bad(format!("informative index {i} out of range"));
        }
        if self.total_samples < self.n_drives {
            return bad("fewer samples than drives".into());
        }
        if !(self.separation.is_finite() && self.noise_level > 0.0 && self.drive_offset >= 0.0) {
            return bad("separation, noise level and drive offset must be finite and non-negative".into());
        }
        for s in [self.on_share_in_on_drives, self.on_share_in_off_drives] {
            if !(0.0..=1.0).contains(&s) {
                return bad(format!("share {s} outside [0, 1]"));
            }
        }
        if self.on_share_in_on_drives <= 0.5 || self.on_share_in_off_drives >= 0.5 {
            return bad("heater shares must keep the majority vote equal to the drive label".into());
        }
        Ok(())
    }

    pub fn feature_names(&self) -> Vec<String> {
        let mut names: Vec<String> = (0..self.n_raw_features).map(|j| format!("signal_{j:03}")).collect();
        let labels = ["outside_temperature", "evaporator_temperature"];
        for (slot, &j) in self.informative_features.iter().enumerate() {
            if let Some(l) = labels.get(slot) {
                names[j] = l.to_string();
            }
        }
        names
    }
}

/// Splits `total` across drives proportionally to random weights, exactly,
/// with at least one sample per drive.
fn allocate_samples(total: usize, n_drives: usize, rng: &mut impl rand::Rng) -> Vec<usize> {
    let weights: Vec<f64> = (0..n_drives).map(|_| rng.random_range(0.5..1.5)).collect();
    let spare = (total - n_drives) as f64;
    let wsum: f64 = weights.iter().sum();
    let exact: Vec<f64> = weights.iter().map(|w| spare * w / wsum).collect();
    let mut counts: Vec<usize> = exact.iter().map(|e| e.floor() as usize + 1).collect();
    let mut left = total - counts.iter().sum::<usize>();
    let mut by_remainder: Vec<usize> = (0..n_drives).collect();
    by_remainder.sort_by(|&a, &b| {
        let ra = exact[a] - exact[a].floor();
        let rb = exact[b] - exact[b].floor();
        rb.total_cmp(&ra).then(a.cmp(&b))
    });
    for &d in by_remainder.iter().cycle() {
        if left == 0 {
            break;
        }
        counts[d] += 1;
        left -= 1;
    }
    counts
}

/// Generates synthetic drives.
///
/// Each drive gets a label; its informative signals are Gaussian with a class
/// mean that is `separation` noise units lower when the heater is on (colder
/// conditions). Every other signal is label-independent Gaussian noise. The
/// per-sample heater state follows the label closely enough that the drive's
/// majority vote reproduces it.
pub fn generate_synthetic(cfg: &SyntheticConfig) -> Result<DriveLog, PipelineError> {
    cfg.validate()?;
    let mut rng = stream_rng(cfg.seed, 0);

    // signal scale parameters
    let mut means = Vec::with_capacity(cfg.n_raw_features);
    let mut scales = Vec::with_capacity(cfg.n_raw_features);
    for _ in 0..cfg.n_raw_features {
        means.push(rng.random_range(-50.0..50.0));
        scales.push(rng.random_range(0.5..10.0));
    }
    let mut is_informative = vec![false; cfg.n_raw_features];
    for (slot, &j) in cfg.informative_features.iter().enumerate() {
        is_informative[j] = true;
        // physically flavoured: outside air and evaporator temperatures in °C
        let (m, s) = if slot % 2 == 0 { (10.0, 5.0) } else { (6.0, 3.0) };
        means[j] = m;
        scales[j] = s;
    }

    let mut labels: Vec<bool> = (0..cfg.n_drives).map(|d| d < cfg.n_on_drives).collect();
    labels.shuffle(&mut rng);
    let counts = allocate_samples(cfg.total_samples, cfg.n_drives, &mut rng);

    let mut drives = Vec::with_capacity(cfg.n_drives);
    for (d, (&on, &n)) in labels.iter().zip(&counts).enumerate() {
        let mut drng = stream_rng(cfg.seed, 1 + d as u64);
        let day = drng.random_range(0..365i64);
        let start = cfg.start_epoch + day * 86_400 + drng.random_range(6 * 3600..22 * 3600);
        let share = if on { cfg.on_share_in_on_drives } else { cfg.on_share_in_off_drives };
        let n_on = if on { (share * n as f64).ceil() as usize } else { (share * n as f64).floor() as usize };
        let offsets: Vec<f64> = (0..cfg.n_raw_features)
            .map(|_| {
                let z: f64 = StandardNormal.sample(&mut drng);
                cfg.drive_offset * z
            })
            .collect();
        let shift = if on { -cfg.separation * cfg.noise_level } else { 0.0 };

        let samples = (0..n)
            .map(|i| {
                let values = (0..cfg.n_raw_features)
                    .map(|j| {
                        let z: f64 = StandardNormal.sample(&mut drng);
                        let class_shift = if is_informative[j] { shift } else { 0.0 };
                        means[j] + scales[j] * (cfg.noise_level * z + offsets[j] + class_shift)
                    })
                    .collect();
                RawSample {
                    timestamp: start + SAMPLE_PERIOD_S * i as i64,
                    seat_heating: i < n_on,
                    values,
                    valid: true,
                }
            })
            .collect();
        drives.push(Drive { drive_id: format!("drive_{d:03}"), samples });
    }
    Ok(DriveLog { feature_names: cfg.feature_names(), drives })
}
