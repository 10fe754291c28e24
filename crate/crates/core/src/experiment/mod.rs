//! Theorem-verification experiments at desk scale.
//!
//! Each runner validates its hypotheses, draws replicates (one RNG stream
//! per replicate index, so reports are identical under any worker count),
//! compares against targets produced by the model modules, and emits
//! [`report::ReportRow`]s.

pub mod deviations;
pub mod gameover;
pub mod limsup;
pub mod report;
pub mod ruin;
pub mod subseq;
pub mod wlln;

use std::time::Instant;

use crate::error::{Error, Result};
use crate::game::{GameParams, Regime};
use crate::limits::admissible_ruin_rates;
use report::ReportRow;

/// Which verification runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    Wlln,
    Subsequence,
    GameOver,
    Ruin,
    Deviations,
    LimsupDemo,
}

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::Wlln => "wlln",
            ExperimentKind::Subsequence => "subseq",
            ExperimentKind::GameOver => "gameover",
            ExperimentKind::Ruin => "ruin",
            ExperimentKind::Deviations => "deviations",
            ExperimentKind::LimsupDemo => "limsup-demo",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "wlln" => ExperimentKind::Wlln,
            "subseq" => ExperimentKind::Subsequence,
            "gameover" => ExperimentKind::GameOver,
            "ruin" => ExperimentKind::Ruin,
            "deviations" => ExperimentKind::Deviations,
            "limsup-demo" => ExperimentKind::LimsupDemo,
            _ => return None,
        })
    }
}

/// Full description of one experiment run.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub params: GameParams<f64>,
    /// Schedule: sample sizes (wlln, deviations) or subsequence indices
    /// (subseq, gameover, ruin).
    pub n_list: Vec<u32>,
    pub u: f64,
    pub b: Option<f64>,
    pub eps: Option<f64>,
    pub a: Option<f64>,
    pub replicates: u64,
    pub seed: u64,
    /// CF comparison grid for the subsequence and ruin runners.
    pub t_grid: Vec<f64>,
    /// Absolute tolerance of the exponent series / inversion quadrature.
    pub series_tol: f64,
    /// Stopping tolerance of the discounted-series sampler.
    pub stop_tol: f64,
    /// Trajectory length for the limsup demo.
    pub trajectory_len: u64,
    /// Stamp wall times into rows (breaks byte-identical reruns).
    pub timings: bool,
}

impl ExperimentConfig {
    pub fn new(kind: ExperimentKind, params: GameParams<f64>) -> Self {
        ExperimentConfig {
            kind,
            params,
            n_list: vec![10],
            u: 1.0,
            b: None,
            eps: None,
            a: None,
            replicates: 1000,
            seed: crate::DEFAULT_SEED,
            t_grid: vec![0.5, 1.0, 2.0],
            series_tol: 1e-12,
            stop_tol: 1e-12,
            trajectory_len: 10_000_000,
            timings: false,
        }
    }

    /// Check the hypotheses of the targeted theorem before any sampling.
    pub fn validate(&self) -> Result<()> {
        if self.replicates < 1 {
            return Err(Error::domain("replicates must be >= 1".to_string()));
        }
        if self.n_list.is_empty() {
            return Err(Error::domain("the n schedule must be nonempty".to_string()));
        }
        let regime = self.params.regime();
        let rq = self.params.r() * self.params.q();
        match self.kind {
            ExperimentKind::Wlln => {
                if regime != Regime::Feller {
                    return Err(Error::domain(format!(
                        "the weak law along n·log_r n holds on the boundary r = 1/q; got rq = {rq}"
                    )));
                }
                if self.n_list.windows(2).any(|w| w[0] >= w[1]) || self.n_list[0] < 2 {
                    return Err(Error::domain(
                        "wlln needs a strictly increasing n list with n >= 2 (log_r n must be positive)"
                            .to_string(),
                    ));
                }
                let eps = self.eps.unwrap_or(0.0);
                if !(eps > 0.0) {
                    return Err(Error::domain("wlln requires eps > 0".to_string()));
                }
            }
            ExperimentKind::Subsequence => {
                if regime == Regime::FiniteMean {
                    return Err(Error::domain(format!(
                        "the subsequence limits require rq >= 1; got rq = {rq}"
                    )));
                }
                if !(self.u > 0.0) {
                    return Err(Error::domain("subseq requires u > 0".to_string()));
                }
            }
            ExperimentKind::GameOver => {
                if regime == Regime::FiniteMean {
                    return Err(Error::domain(format!(
                        "the game-over limits require rq >= 1; got rq = {rq}"
                    )));
                }
            }
            ExperimentKind::Ruin => {
                let (s, r, q) = (self.params.s(), self.params.r(), self.params.q());
                if regime != Regime::Feller || (s - r).abs() > 1e-12 * r {
                    return Err(Error::domain(format!(
                        "the ruin approximation is stated for s = r = 1/q; got s = {s}, r = {r}, 1/q = {}",
                        q.recip()
                    )));
                }
                let a = self.a.ok_or_else(|| Error::domain("ruin requires the rate a".to_string()))?;
                let x = (q * a * a).recip();
                if !(x > 1.0 && x < r) {
                    let (lo, hi) = admissible_ruin_rates(&self.params);
                    return Err(Error::domain(format!(
                        "ruin requires 1 < 1/(q a^2) < r; a = {a} gives {x}; admissible a interval is ({lo}, {hi})"
                    )));
                }
            }
            ExperimentKind::Deviations => {
                let b = self.b.unwrap_or(2.0);
                if !(b > 1.0) {
                    return Err(Error::domain(format!(
                        "polynomial-size deviations require b > 1, got {b}"
                    )));
                }
            }
            ExperimentKind::LimsupDemo => {
                if regime != Regime::Feller {
                    return Err(Error::domain(format!(
                        "the limsup demo normalizes by n·log_r n and requires r = 1/q; got rq = {rq}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Validate and run, parallelizing replicates over `jobs` workers
    /// (0 = library default). Reports are identical for any job count.
    pub fn run(&self, jobs: usize) -> Result<Vec<ReportRow>> {
        self.validate()?;
        let started = Instant::now();
        let work = || -> Result<Vec<ReportRow>> {
            match self.kind {
                ExperimentKind::Wlln => wlln::run(self),
                ExperimentKind::Subsequence => subseq::run(self),
                ExperimentKind::GameOver => gameover::run(self),
                ExperimentKind::Ruin => ruin::run(self),
                ExperimentKind::Deviations => deviations::run(self),
                ExperimentKind::LimsupDemo => limsup::run(self),
            }
        };
        let mut rows = if jobs == 0 {
            work()?
        } else {
            rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build()
                .map_err(|e| Error::numerical(format!("thread pool: {e}")))?
                .install(work)?
        };
        if self.timings {
            let elapsed = started.elapsed().as_secs_f64() * 1e3;
            for row in &mut rows {
                row.walltime_ms = Some(elapsed);
            }
        }
        Ok(rows)
    }

    /// Row pre-filled with the parameter snapshot; runners fill the rest.
    pub(crate) fn row(&self, statistic: impl Into<String>) -> ReportRow {
        ReportRow {
            experiment: self.kind.name().to_string(),
            p: self.params.p(),
            q: self.params.q(),
            s: self.params.s(),
            r: self.params.r(),
            n: None,
            u: None,
            b: None,
            eps: None,
            a: None,
            gamma: None,
            replicates: Some(self.replicates),
            seed: self.seed,
            statistic: statistic.into(),
            target: None,
            distance: None,
            ci_lo: None,
            ci_hi: None,
            walltime_ms: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hypothesis_validation_rejects_wrong_regimes() {
        let finite = GameParams::new(0.5, 2.0, 1.8).unwrap();
        let cfg = ExperimentConfig::new(ExperimentKind::Wlln, finite);
        let msg = format!("{}", cfg.validate().unwrap_err());
        assert!(msg.contains("r = 1/q"), "{msg}");

        let heavy = GameParams::new(0.4, 1.0, 2.0).unwrap();
        let mut cfg = ExperimentConfig::new(ExperimentKind::Ruin, heavy);
        cfg.a = Some(1.2);
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn ruin_validation_reports_admissible_interval() {
        let classical = GameParams::classical();
        let mut cfg = ExperimentConfig::new(ExperimentKind::Ruin, classical);
        cfg.a = Some(2.0);
        let msg = format!("{}", cfg.validate().unwrap_err());
        assert!(msg.contains("admissible a interval"), "{msg}");
        cfg.a = Some(1.2);
        assert!(cfg.validate().is_ok());
    }

    #[test]
    fn wlln_needs_increasing_n_and_positive_eps() {
        let classical = GameParams::classical();
        let mut cfg = ExperimentConfig::new(ExperimentKind::Wlln, classical);
        cfg.eps = Some(0.5);
        cfg.n_list = vec![256, 256];
        assert!(cfg.validate().is_err());
        cfg.n_list = vec![1, 256];
        assert!(cfg.validate().is_err());
        cfg.n_list = vec![256, 65536];
        assert!(cfg.validate().is_ok());
        cfg.eps = None;
        assert!(cfg.validate().is_err());
    }
}
