use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{build_qubo, solve_annealing, AnnealSchedule, QuboEncoding, QuboError};
use crate::pipeline::Dataset;
use crate::rng::derive_seed;
use crate::svm::KernelSpec;

/// One line of the scaling table. Times are wall-clock seconds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub n: usize,
    pub dimension: usize,
    /// Upper-triangular slots including the diagonal.
    pub entries: usize,
    pub build_time: f64,
    pub solve_time: f64,
}

/// Builds and anneals QUBOs for `n` rows drawn from `pool`, for each `n` in
/// `n_list`. Sizes larger than the pool are capped at the pool size.
pub fn qubo_scaling_probe(
    pool: &Dataset,
    n_list: &[usize],
    precision_bits: usize,
    kernel: &KernelSpec,
    sched: &AnnealSchedule,
) -> Result<Vec<ScalingRow>, QuboError> {
    sched.validate()?;
    let mut rows = Vec::with_capacity(n_list.len());
    for (idx, &n) in n_list.iter().enumerate() {
        let data = pool.subsample(n, derive_seed(sched.seed, idx as u64));
        let enc = QuboEncoding::new(data.len(), precision_bits);
        let t = Instant::now();
        let q = build_qubo(&data, kernel, &enc)?;
        let build_time = t.elapsed().as_secs_f64();
        let t = Instant::now();
        solve_annealing(&q, sched)?;
        let solve_time = t.elapsed().as_secs_f64();
        rows.push(ScalingRow { n: data.len(), dimension: q.dim(), entries: q.upper_entries(), build_time, solve_time });
    }
    Ok(rows)
}
