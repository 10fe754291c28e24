//! Geometric-subsequence runner: draws the normalized sums along
//! `N = r^n`, compares their empirical characteristic function against
//! the limit CF `exp(u·g(t))` on the configured `t` grid, and reports a
//! bracketed Kolmogorov-Smirnov distance against the inverted limit CDF.

use rayon::prelude::*;

use super::report::ReportRow;
use super::ExperimentConfig;
use crate::error::{Error, Result};
use crate::game::Regime;
use crate::inversion::{empirical_cf, ks_distance_bracketed, CachedCfInverter, EmpiricalCdf};
use crate::limits::{CenteringSchedule, LevyExponentSpec};
use crate::rng::RngStream;
use crate::sampler::PayoffSampler;

/// Jump cap, inverter, and factorization constant for the capped law.
/// `F(x) = e^{-u·mass}·F_capped(x)` holds for `x` strictly below the
/// smallest removed jump, which the cap keeps far above `x_hi`.
pub(crate) fn capped_inverter(
    spec: &LevyExponentSpec<f64>,
    u_eff: f64,
    x_lo: f64,
    x_hi: f64,
    tol: f64,
) -> Result<(CachedCfInverter<f64>, f64)> {
    let params = *spec.params();
    let (s, r) = (params.s(), params.r());
    let mut cap = 1i64;
    while s * r.powi(cap as i32 + 1) < 2.0 * x_hi.abs() + 100.0 {
        cap += 1;
        if cap > 200 {
            return Err(Error::numerical("jump cap search ran away".to_string()));
        }
    }
    let capped = spec.with_jump_cap(cap);
    let factor = (-u_eff * capped.capped_mass()).exp();
    let max_freq = (s * r.powi(cap as i32)).max(x_hi.abs()).max(x_lo.abs()).max(1.0);
    let cf = move |t: f64| capped.cf(u_eff, t).expect("validated spec");
    let inverter = CachedCfInverter::build(&cf, max_freq, tol, 1e4)?;
    Ok((inverter, factor))
}

pub fn run(cfg: &ExperimentConfig) -> Result<Vec<ReportRow>> {
    let params = cfg.params;
    let feller = params.regime() == Regime::Feller;
    let spec = if feller {
        LevyExponentSpec::compensated_feller(params, cfg.series_tol)?
    } else {
        LevyExponentSpec::uncompensated(params, cfg.series_tol)?
    };
    let mut rows = Vec::new();
    for &n in &cfg.n_list {
        let sched = if feller {
            CenteringSchedule::feller(&params, n, cfg.u)?
        } else {
            CenteringSchedule::heavy(&params, n, cfg.u)?
        };
        let u_eff = sched.effective_u();
        let values: Vec<f64> = (0..cfg.replicates)
            .into_par_iter()
            .map(|j| {
                let mut rng = RngStream::new(cfg.seed, j);
                let sampler = PayoffSampler::new(params);
                let mut sum = 0.0;
                for _ in 0..sched.count {
                    sum += sampler.payoff(&mut rng).0;
                }
                sched.statistic(sum)
            })
            .collect();

        // empirical CF against the limit CF on the t grid
        for &t in &cfg.t_grid {
            let emp = empirical_cf(&values, t);
            let target = spec.cf(u_eff, t)?;
            for (tag, got, want) in [("re", emp.re, target.re), ("im", emp.im, target.im)] {
                let mut row = cfg.row(format!("ecf_{tag}(t={t})"));
                row.n = Some(n as u64);
                row.u = Some(cfg.u);
                row.target = Some(want);
                row.distance = Some((got - want).abs());
                rows.push(row);
            }
        }

        // KS against the inverted limit CDF, bracketed through the capped
        // law (see capped_inverter)
        let emp = EmpiricalCdf::new(values)?;
        let lo_sample = emp.values()[0];
        let hi_sample = *emp.values().last().expect("nonempty");
        let idx998 = ((emp.len() as f64) * 0.998) as usize;
        let x_hi = emp.values()[idx998.min(emp.len() - 1)].max(lo_sample + 1.0);
        let x_lo = lo_sample - 1.0;
        let (inverter, factor) = capped_inverter(&spec, u_eff, x_lo, x_hi, 1e-5)?;
        let eval = |x: f64| factor * inverter.cdf(x);
        let ks = ks_distance_bracketed(&emp, &eval, x_lo, x_hi.min(hi_sample + 1.0), 1e-3, 20_000)?;
        let mut row = cfg.row("ks");
        row.n = Some(n as u64);
        row.u = Some(cfg.u);
        row.distance = Some(ks.hi);
        row.ci_lo = Some(ks.lo);
        row.ci_hi = Some(ks.hi);
        rows.push(row);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::ExperimentKind;
    use crate::game::GameParams;

    #[test]
    fn small_feller_run_produces_expected_rows() {
        let mut cfg = ExperimentConfig::new(ExperimentKind::Subsequence, GameParams::classical());
        cfg.n_list = vec![6];
        cfg.replicates = 400;
        cfg.t_grid = vec![0.5, 1.0];
        let rows = cfg.run(0).unwrap();
        assert_eq!(rows.len(), 5); // 2 t's x (re, im) + ks
        let ks = rows.last().unwrap();
        assert_eq!(ks.statistic, "ks");
        assert!(ks.distance.unwrap() < 0.2, "tiny run should still be roughly right");
        assert!(ks.ci_lo.unwrap() <= ks.distance.unwrap());
    }

    #[test]
    fn heavy_variant_runs() {
        let heavy = GameParams::new(0.4, 1.0, 2.0).unwrap();
        let mut cfg = ExperimentConfig::new(ExperimentKind::Subsequence, heavy);
        cfg.n_list = vec![6];
        cfg.replicates = 300;
        cfg.t_grid = vec![0.5];
        let rows = cfg.run(0).unwrap();
        assert_eq!(rows.len(), 3);
    }
}
