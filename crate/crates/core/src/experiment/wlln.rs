//! Weak-law runner: the fraction of replicates with
//! `|S_n/(n·log_r n) - s·p| > eps`, and the replicate median of the
//! normalized sum, across an increasing `n` schedule.
//!
//! Replicate `j` restarts stream `j` at each `n`, so the sums along the
//! schedule are prefix-coupled: the exceedance ordering across `n` is
//! read on the same underlying paths.

use rayon::prelude::*;

use super::report::{wilson_interval, ReportRow, WILSON_Z95};
use super::ExperimentConfig;
use crate::error::Result;
use crate::rng::RngStream;
use crate::sampler::PayoffSampler;

pub fn run(cfg: &ExperimentConfig) -> Result<Vec<ReportRow>> {
    let eps = cfg.eps.expect("validated");
    let params = cfg.params;
    let sp = params.sp();
    let mut rows = Vec::new();
    for &n in &cfg.n_list {
        let norm = n as f64 * params.log_r(n as f64);
        let mut ratios: Vec<f64> = (0..cfg.replicates)
            .into_par_iter()
            .map(|j| {
                let mut rng = RngStream::new(cfg.seed, j);
                let sampler = PayoffSampler::new(params);
                let mut sum = 0.0;
                for _ in 0..n {
                    sum += sampler.payoff(&mut rng).0;
                }
                sum / norm
            })
            .collect();
        let hits = ratios.iter().filter(|&&v| !((v - sp).abs() <= eps)).count() as u64;
        let fraction = hits as f64 / cfg.replicates as f64;
        let (ci_lo, ci_hi) = wilson_interval(hits, cfg.replicates, WILSON_Z95);
        let mut row = cfg.row("exceedance");
        row.n = Some(n as u64);
        row.eps = Some(eps);
        row.distance = Some(fraction);
        row.ci_lo = Some(ci_lo);
        row.ci_hi = Some(ci_hi);
        rows.push(row);

        ratios.sort_by(|a, b| a.partial_cmp(b).expect("finite ratios"));
        let mid = ratios.len() / 2;
        let median = if ratios.len() % 2 == 1 {
            ratios[mid]
        } else {
            0.5 * (ratios[mid - 1] + ratios[mid])
        };
        let mut row = cfg.row("median_ratio");
        row.n = Some(n as u64);
        row.eps = Some(eps);
        row.target = Some(sp);
        row.distance = Some(median);
        rows.push(row);
    }
    Ok(rows)
}
