//! Structured result rows and their CSV/JSON serializations.
//!
//! Every runner emits [`ReportRow`]s with a fixed column set. The
//! `statistic` column names what was measured, `target` holds the
//! model-produced reference value (never hard-coded numbers), and
//! `distance` holds the measured distance or estimate. Inapplicable
//! fields serialize as empty CSV cells / JSON nulls. Wall times are
//! stamped only when timings are requested, since they would break the
//! byte-identical-rerun contract.

use serde::Serialize;

/// Version stamp of the JSON report layout; see `schemas/report.schema.json`
/// in the CLI crate.
pub const REPORT_SCHEMA_VERSION: u32 = 1;

pub const CSV_HEADER: &str =
    "experiment,p,q,s,r,n,u,b,eps,a,gamma,R,seed,statistic,target,distance,ci_lo,ci_hi,walltime_ms";

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ReportRow {
    pub experiment: String,
    pub p: f64,
    pub q: f64,
    pub s: f64,
    pub r: f64,
    pub n: Option<u64>,
    pub u: Option<f64>,
    pub b: Option<f64>,
    pub eps: Option<f64>,
    pub a: Option<f64>,
    pub gamma: Option<f64>,
    #[serde(rename = "R")]
    pub replicates: Option<u64>,
    pub seed: u64,
    pub statistic: String,
    pub target: Option<f64>,
    pub distance: Option<f64>,
    pub ci_lo: Option<f64>,
    pub ci_hi: Option<f64>,
    pub walltime_ms: Option<f64>,
}

#[derive(Debug, Serialize)]
struct JsonReport<'a> {
    schema_version: u32,
    rows: &'a [ReportRow],
}

fn fmt_opt_f(v: Option<f64>) -> String {
    // `{}` prints the shortest representation that round-trips, with a '.'
    // separator independent of locale
    v.map(|x| format!("{x}")).unwrap_or_default()
}

fn fmt_opt_u(v: Option<u64>) -> String {
    v.map(|x| format!("{x}")).unwrap_or_default()
}

pub fn rows_to_csv(rows: &[ReportRow]) -> String {
    let mut out = String::with_capacity(128 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            row.experiment,
            row.p,
            row.q,
            row.s,
            row.r,
            fmt_opt_u(row.n),
            fmt_opt_f(row.u),
            fmt_opt_f(row.b),
            fmt_opt_f(row.eps),
            fmt_opt_f(row.a),
            fmt_opt_f(row.gamma),
            fmt_opt_u(row.replicates),
            row.seed,
            row.statistic,
            fmt_opt_f(row.target),
            fmt_opt_f(row.distance),
            fmt_opt_f(row.ci_lo),
            fmt_opt_f(row.ci_hi),
            fmt_opt_f(row.walltime_ms),
        ));
    }
    out
}

pub fn rows_to_json(rows: &[ReportRow]) -> String {
    serde_json::to_string_pretty(&JsonReport {
        schema_version: REPORT_SCHEMA_VERSION,
        rows,
    })
    .expect("report rows serialize")
}

/// Wilson score interval for a binomial proportion; with zero hits the
/// lower end is 0 but the upper end stays informative, which is what the
/// rare-event rows report instead of a bare zero.
pub fn wilson_interval(hits: u64, total: u64, z: f64) -> (f64, f64) {
    if total == 0 {
        return (0.0, 1.0);
    }
    let n = total as f64;
    let phat = hits as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (phat + z2 / (2.0 * n)) / denom;
    let half = z * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if hits == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if hits == total { 1.0 } else { (center + half).min(1.0) };
    (lo, hi)
}

/// z-value of the two-sided 95% normal quantile used by the Wilson rows.
pub const WILSON_Z95: f64 = 1.959963984540054;

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_row() -> ReportRow {
        ReportRow {
            experiment: "wlln".to_string(),
            p: 0.5,
            q: 0.5,
            s: 2.0,
            r: 2.0,
            n: Some(256),
            u: None,
            b: None,
            eps: Some(0.5),
            a: None,
            gamma: None,
            replicates: Some(500),
            seed: 0xC0FFEE,
            statistic: "exceedance".to_string(),
            target: None,
            distance: Some(0.25),
            ci_lo: Some(0.21),
            ci_hi: Some(0.29),
            walltime_ms: None,
        }
    }

    #[test]
    fn csv_has_exact_columns_and_empty_inapplicable_cells() {
        let csv = rows_to_csv(&[sample_row()]);
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER);
        let data = lines.next().unwrap();
        let cells: Vec<&str> = data.split(',').collect();
        assert_eq!(cells.len(), CSV_HEADER.split(',').count());
        assert_eq!(cells[0], "wlln");
        assert_eq!(cells[6], ""); // u inapplicable
        assert_eq!(cells[8], "0.5"); // eps
        assert_eq!(cells[12], "12648430"); // seed
        assert_eq!(cells[18], ""); // walltime off
    }

    #[test]
    fn csv_numbers_round_trip() {
        let mut row = sample_row();
        row.distance = Some(0.1 + 0.2);
        let csv = rows_to_csv(&[row]);
        let cell = csv.lines().nth(1).unwrap().split(',').nth(15).unwrap();
        assert_eq!(cell.parse::<f64>().unwrap(), 0.1 + 0.2);
    }

    #[test]
    fn json_carries_schema_version_and_nulls() {
        let json = rows_to_json(&[sample_row()]);
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["schema_version"], REPORT_SCHEMA_VERSION);
        assert!(v["rows"][0]["u"].is_null());
        assert_eq!(v["rows"][0]["R"], 500);
    }

    #[test]
    fn wilson_zero_hits_has_positive_upper_bound() {
        let (lo, hi) = wilson_interval(0, 1000, WILSON_Z95);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0 && hi < 0.01);
        let (lo, hi) = wilson_interval(500, 1000, WILSON_Z95);
        assert!(lo < 0.5 && 0.5 < hi);
        assert!((hi - lo) < 0.07);
    }
}
