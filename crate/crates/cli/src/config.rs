//! TOML run configuration: `[[run]]` tables mapping onto
//! [`ExperimentConfig`]. Unknown keys and malformed values surface as
//! parse errors naming the offending field and position; theorem
//! hypotheses are checked for every run before anything executes.

use petersburg::error::{Error, Result};
use petersburg::{ExperimentConfig, ExperimentKind, GameParams};
use serde::Deserialize;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    #[serde(default)]
    run: Vec<RawRun>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRun {
    kind: String,
    p: Option<f64>,
    s: Option<f64>,
    r: Option<f64>,
    /// `r = 1/q` exactly, instead of an explicit `r`.
    feller: Option<bool>,
    n: Option<Vec<u32>>,
    u: Option<f64>,
    b: Option<f64>,
    eps: Option<f64>,
    a: Option<f64>,
    replicates: Option<u64>,
    seed: Option<u64>,
    t_grid: Option<Vec<f64>>,
    series_tol: Option<f64>,
    stop_tol: Option<f64>,
    trajectory_len: Option<u64>,
}

/// Inline defaults shared by flag-built and file-built runs.
pub struct RunDefaults {
    pub seed: u64,
    pub timings: bool,
}

fn build_params(p: Option<f64>, s: Option<f64>, r: Option<f64>, feller: Option<bool>) -> Result<GameParams<f64>> {
    let p = p.unwrap_or(0.5);
    let s = s.unwrap_or(2.0);
    if feller == Some(true) {
        if r.is_some() {
            return Err(Error::domain(
                "field `feller` and field `r` are mutually exclusive".to_string(),
            ));
        }
        GameParams::feller(p, s)
    } else {
        GameParams::new(p, s, r.unwrap_or(2.0))
    }
}

fn convert(raw: &RawRun, defaults: &RunDefaults) -> Result<ExperimentConfig> {
    let kind = ExperimentKind::from_name(&raw.kind).ok_or_else(|| {
        Error::domain(format!(
            "field `kind`: unknown experiment `{}` (expected wlln | subseq | gameover | ruin | deviations | limsup-demo)",
            raw.kind
        ))
    })?;
    let params = build_params(raw.p, raw.s, raw.r, raw.feller)?;
    let mut cfg = ExperimentConfig::new(kind, params);
    if let Some(n) = &raw.n {
        cfg.n_list = n.clone();
    }
    if let Some(u) = raw.u {
        cfg.u = u;
    }
    cfg.b = raw.b.or(cfg.b);
    cfg.eps = raw.eps.or(cfg.eps);
    cfg.a = raw.a.or(cfg.a);
    if let Some(r) = raw.replicates {
        cfg.replicates = r;
    }
    cfg.seed = raw.seed.unwrap_or(defaults.seed);
    if let Some(grid) = &raw.t_grid {
        cfg.t_grid = grid.clone();
    }
    if let Some(tol) = raw.series_tol {
        cfg.series_tol = tol;
    }
    if let Some(tol) = raw.stop_tol {
        cfg.stop_tol = tol;
    }
    if let Some(len) = raw.trajectory_len {
        cfg.trajectory_len = len;
    }
    cfg.timings = defaults.timings;
    cfg.validate()?;
    Ok(cfg)
}

/// Parse a config document into validated run configs, keeping only runs
/// of `kind` when a filter is given.
pub fn parse_config(
    text: &str,
    filter: Option<ExperimentKind>,
    defaults: &RunDefaults,
) -> Result<Vec<ExperimentConfig>> {
    let file: ConfigFile = toml::from_str(text)
        .map_err(|e| Error::domain(format!("config parse error: {e}")))?;
    let mut out = Vec::new();
    for (idx, raw) in file.run.iter().enumerate() {
        let cfg = convert(raw, defaults)
            .map_err(|e| Error::domain(format!("run #{}: {e}", idx + 1)))?;
        if filter.map_or(true, |k| cfg.kind == k) {
            out.push(cfg);
        }
    }
    // an empty run list is a successful no-op; runs of only other kinds
    // under a kind filter are a user error worth naming
    if let Some(k) = filter {
        if out.is_empty() && !file.run.is_empty() {
            return Err(Error::domain(format!(
                "config contains no `{}` runs",
                k.name()
            )));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn defaults() -> RunDefaults {
        RunDefaults { seed: petersburg::DEFAULT_SEED, timings: false }
    }

    #[test]
    fn minimal_wlln_config_round_trips() {
        let text = r#"
            [[run]]
            kind = "wlln"
            p = 0.5
            s = 2.0
            r = 2.0
            n = [256, 65536]
            eps = 0.5
            replicates = 500
        "#;
        let runs = parse_config(text, None, &defaults()).unwrap();
        assert_eq!(runs.len(), 1);
        assert_eq!(runs[0].kind, ExperimentKind::Wlln);
        assert_eq!(runs[0].n_list, vec![256, 65536]);
        assert_eq!(runs[0].replicates, 500);
        assert_eq!(runs[0].seed, petersburg::DEFAULT_SEED);
    }

    #[test]
    fn wrong_regime_is_rejected_with_the_hypothesis() {
        let text = r#"
            [[run]]
            kind = "wlln"
            p = 0.5
            s = 2.0
            r = 1.8
            n = [16, 64]
            eps = 0.5
        "#;
        let err = parse_config(text, None, &defaults()).unwrap_err();
        let msg = format!("{err}");
        assert!(msg.contains("r = 1/q"), "{msg}");
    }

    #[test]
    fn inadmissible_ruin_rate_reports_the_interval() {
        let text = r#"
            [[run]]
            kind = "ruin"
            a = 2.0
            n = [10]
        "#;
        let err = parse_config(text, None, &defaults()).unwrap_err();
        let msg = format!("{err}");
        assert!(msg.contains("admissible a interval"), "{msg}");
        assert!(msg.contains('('), "{msg}");
    }

    #[test]
    fn unknown_keys_are_named() {
        let text = r#"
            [[run]]
            kind = "wlln"
            bogus_field = 1.0
        "#;
        let err = parse_config(text, None, &defaults()).unwrap_err();
        let msg = format!("{err}");
        assert!(msg.contains("bogus_field"), "{msg}");
    }

    #[test]
    fn non_numeric_values_are_parse_errors() {
        let text = r#"
            [[run]]
            kind = "wlln"
            p = "half"
        "#;
        let err = parse_config(text, None, &defaults()).unwrap_err();
        let msg = format!("{err}");
        assert!(msg.contains("p"), "{msg}");
    }

    #[test]
    fn filter_by_kind() {
        let text = r#"
            [[run]]
            kind = "gameover"
            n = [10]
            [[run]]
            kind = "wlln"
            n = [16, 64]
            eps = 0.5
        "#;
        let runs = parse_config(text, Some(ExperimentKind::Wlln), &defaults()).unwrap();
        assert_eq!(runs.len(), 1);
        assert!(parse_config(text, Some(ExperimentKind::Ruin), &defaults()).is_err());
    }
}
