//! Command-line front end: experiment dispatch, deterministic seeding,
//! and CSV/JSON report emission.

mod config;

use std::env;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use petersburg::error::Error;
use petersburg::experiment::report::{rows_to_csv, rows_to_json, ReportRow};
use petersburg::limits::LevyExponentSpec;
use petersburg::{ExperimentConfig, ExperimentKind, GameParams, MomentOrder};

use config::RunDefaults;

const USAGE: &str = "\
petersburg - simulation laboratory for generalized St. Petersburg games

USAGE:
  petersburg <COMMAND> [OPTIONS]

COMMANDS:
  wlln          weak-law exceedance along an increasing n schedule
  subseq        distributional convergence along the geometric subsequence
  gameover      scaled total gain until game over vs the exponential law
  ruin          discounted-game ruin probability vs the closed form
  deviations    polynomial-size deviations and the exact maximum sandwich
  limsup-demo   one long trajectory's running ratio and its records
  exact         closed-form model queries (pmf, tail, moments, ...)
  cf            print the Lévy exponent g(t) and limit CF over a t grid

SHARED OPTIONS:
  --config PATH   TOML file with [[run]] tables; executes the entries
                  matching the chosen command
  --out DIR       report directory (default: reports)
  --seed N        base seed (decimal or 0x-hex);
                  precedence: --seed > PETERSBURG_SEED > 0xC0FFEE
  --seed-from-time  seed from the wall clock (printed for replay)
  --format F      csv | json (default: csv)
  --jobs K        worker threads (default: library default)
  --timings       stamp wall times into rows (breaks byte-identical reruns)
  --quiet         suppress progress output

INLINE EXPERIMENT OPTIONS (instead of --config):
  --p F --s F --r F | --feller     payoff parameters (default 0.5, 2, 2)
  --n LIST                         schedule, comma separated (e.g. 256,65536)
  --u F  --b F  --eps F  --a F     theorem parameters
  --R N                            replicates
  --t-grid LIST                    CF comparison grid
  --series-tol F  --stop-tol F     numerical tolerances
  --traj-len N                     limsup-demo trajectory length

EXACT QUERY OPTIONS:
  --query Q       pmf | tail | moment | tmean | mu | maxcdf
  --k N           duration index (pmf)
  --x F           evaluation point (tail, tmean, mu, maxcdf)
  --beta F        moment order (moment)
  --n LIST        maximum count (maxcdf)

CF OPTIONS:
  --variant V     feller | heavy | discounted
  --a F           discount rate (discounted)
  --u F           process time (default 1)
  --t-min F --t-max F --t-points N   output grid (default 0.1 .. 10, 64)

EXIT CODES:
  0 success, 2 validation failure, 3 numerical failure
";

struct Manifest {
    command: String,
    config_path: Option<PathBuf>,
    out_dir: PathBuf,
    seed: u64,
    format: Format,
    jobs: usize,
    quiet: bool,
    timings: bool,
    // inline experiment fields
    p: Option<f64>,
    s: Option<f64>,
    r: Option<f64>,
    feller: bool,
    n_list: Option<Vec<u32>>,
    u: Option<f64>,
    b: Option<f64>,
    eps: Option<f64>,
    a: Option<f64>,
    replicates: Option<u64>,
    t_grid: Option<Vec<f64>>,
    series_tol: Option<f64>,
    stop_tol: Option<f64>,
    traj_len: Option<u64>,
    // exact / cf fields
    query: Option<String>,
    k: Option<u32>,
    x: Option<f64>,
    beta: Option<f64>,
    variant: Option<String>,
    t_min: f64,
    t_max: f64,
    t_points: u32,
}

#[derive(Clone, Copy, PartialEq)]
enum Format {
    Csv,
    Json,
}

fn parse_u64_flag(v: &str) -> Result<u64, String> {
    let parsed = if let Some(hex) = v.strip_prefix("0x").or_else(|| v.strip_prefix("0X")) {
        u64::from_str_radix(hex, 16)
    } else {
        v.parse::<u64>()
    };
    parsed.map_err(|_| format!("expected an unsigned integer, got `{v}`"))
}

fn parse_f64_flag(v: &str) -> Result<f64, String> {
    v.parse::<f64>().map_err(|_| format!("expected a number, got `{v}`"))
}

fn parse_list_u32(v: &str) -> Result<Vec<u32>, String> {
    v.split(',')
        .map(|s| s.trim().parse::<u32>().map_err(|_| format!("expected integers, got `{s}`")))
        .collect()
}

fn parse_list_f64(v: &str) -> Result<Vec<f64>, String> {
    v.split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| format!("expected numbers, got `{s}`")))
        .collect()
}

impl Manifest {
    fn parse(mut args: impl Iterator<Item = String>) -> Result<Self, String> {
        let command = match args.next() {
            Some(c) if c == "--help" || c == "-h" => return Err(String::new()),
            Some(c) => c,
            None => return Err("missing command".to_string()),
        };
        let mut m = Manifest {
            command,
            config_path: None,
            out_dir: PathBuf::from("reports"),
            seed: match env::var("PETERSBURG_SEED") {
                Ok(v) => parse_u64_flag(&v).map_err(|e| format!("PETERSBURG_SEED: {e}"))?,
                Err(_) => petersburg::DEFAULT_SEED,
            },
            format: Format::Csv,
            jobs: 0,
            quiet: false,
            timings: false,
            p: None,
            s: None,
            r: None,
            feller: false,
            n_list: None,
            u: None,
            b: None,
            eps: None,
            a: None,
            replicates: None,
            t_grid: None,
            series_tol: None,
            stop_tol: None,
            traj_len: None,
            query: None,
            k: None,
            x: None,
            beta: None,
            variant: None,
            t_min: 0.1,
            t_max: 10.0,
            t_points: 64,
        };
        while let Some(arg) = args.next() {
            let mut value_of = |name: &str| {
                args.next().ok_or_else(|| format!("missing value for {name}"))
            };
            match arg.as_str() {
                "--help" | "-h" => return Err(String::new()),
                "--quiet" => m.quiet = true,
                "--timings" => m.timings = true,
                "--feller" => m.feller = true,
                "--seed-from-time" => {
                    let nanos = std::time::SystemTime::now()
                        .duration_since(std::time::UNIX_EPOCH)
                        .map_err(|e| e.to_string())?
                        .subsec_nanos() as u64;
                    let secs = std::time::SystemTime::now()
                        .duration_since(std::time::UNIX_EPOCH)
                        .map_err(|e| e.to_string())?
                        .as_secs();
                    m.seed = (secs << 30) ^ nanos;
                    eprintln!("seed chosen from wall clock: {} (pass --seed {} to replay)", m.seed, m.seed);
                }
                "--config" => m.config_path = Some(PathBuf::from(value_of("--config")?)),
                "--out" => m.out_dir = PathBuf::from(value_of("--out")?),
                "--seed" => m.seed = parse_u64_flag(&value_of("--seed")?)?,
                "--format" => {
                    m.format = match value_of("--format")?.as_str() {
                        "csv" => Format::Csv,
                        "json" => Format::Json,
                        other => return Err(format!("unknown format `{other}` (csv | json)")),
                    }
                }
                "--jobs" => m.jobs = parse_u64_flag(&value_of("--jobs")?)? as usize,
                "--p" => m.p = Some(parse_f64_flag(&value_of("--p")?)?),
                "--s" => m.s = Some(parse_f64_flag(&value_of("--s")?)?),
                "--r" => m.r = Some(parse_f64_flag(&value_of("--r")?)?),
                "--n" => m.n_list = Some(parse_list_u32(&value_of("--n")?)?),
                "--u" => m.u = Some(parse_f64_flag(&value_of("--u")?)?),
                "--b" => m.b = Some(parse_f64_flag(&value_of("--b")?)?),
                "--eps" => m.eps = Some(parse_f64_flag(&value_of("--eps")?)?),
                "--a" => m.a = Some(parse_f64_flag(&value_of("--a")?)?),
                "--R" => m.replicates = Some(parse_u64_flag(&value_of("--R")?)?),
                "--t-grid" => m.t_grid = Some(parse_list_f64(&value_of("--t-grid")?)?),
                "--series-tol" => m.series_tol = Some(parse_f64_flag(&value_of("--series-tol")?)?),
                "--stop-tol" => m.stop_tol = Some(parse_f64_flag(&value_of("--stop-tol")?)?),
                "--traj-len" => m.traj_len = Some(parse_u64_flag(&value_of("--traj-len")?)?),
                "--query" => m.query = Some(value_of("--query")?),
                "--k" => m.k = Some(parse_u64_flag(&value_of("--k")?)? as u32),
                "--x" => m.x = Some(parse_f64_flag(&value_of("--x")?)?),
                "--beta" => m.beta = Some(parse_f64_flag(&value_of("--beta")?)?),
                "--variant" => m.variant = Some(value_of("--variant")?),
                "--t-min" => m.t_min = parse_f64_flag(&value_of("--t-min")?)?,
                "--t-max" => m.t_max = parse_f64_flag(&value_of("--t-max")?)?,
                "--t-points" => m.t_points = parse_u64_flag(&value_of("--t-points")?)? as u32,
                other => return Err(format!("unknown argument `{other}`")),
            }
        }
        Ok(m)
    }

    fn params(&self) -> Result<GameParams<f64>, Error> {
        let p = self.p.unwrap_or(0.5);
        let s = self.s.unwrap_or(2.0);
        if self.feller {
            if self.r.is_some() {
                return Err(Error::domain("--feller and --r are mutually exclusive".to_string()));
            }
            GameParams::feller(p, s)
        } else {
            GameParams::new(p, s, self.r.unwrap_or(2.0))
        }
    }

    fn inline_config(&self, kind: ExperimentKind) -> Result<ExperimentConfig, Error> {
        let mut cfg = ExperimentConfig::new(kind, self.params()?);
        cfg.seed = self.seed;
        cfg.timings = self.timings;
        if let Some(n) = &self.n_list {
            cfg.n_list = n.clone();
        }
        if let Some(u) = self.u {
            cfg.u = u;
        }
        cfg.b = self.b.or(cfg.b);
        cfg.eps = self.eps.or(cfg.eps);
        cfg.a = self.a.or(cfg.a);
        if let Some(r) = self.replicates {
            cfg.replicates = r;
        }
        if let Some(grid) = &self.t_grid {
            cfg.t_grid = grid.clone();
        }
        if let Some(tol) = self.series_tol {
            cfg.series_tol = tol;
        }
        if let Some(tol) = self.stop_tol {
            cfg.stop_tol = tol;
        }
        if let Some(len) = self.traj_len {
            cfg.trajectory_len = len;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn unique_path(dir: &Path, stem: &str, ext: &str) -> PathBuf {
    let first = dir.join(format!("{stem}.{ext}"));
    if !first.exists() {
        return first;
    }
    for i in 2.. {
        let candidate = dir.join(format!("{stem}_{i}.{ext}"));
        if !candidate.exists() {
            return candidate;
        }
    }
    unreachable!()
}

fn write_reports(m: &Manifest, configs: &[ExperimentConfig]) -> Result<(), Error> {
    fs::create_dir_all(&m.out_dir)
        .map_err(|e| Error::domain(format!("cannot create output directory {:?}: {e}", m.out_dir)))?;
    for cfg in configs {
        let rows: Vec<ReportRow> = cfg.run(m.jobs)?;
        let (ext, body) = match m.format {
            Format::Csv => ("csv", rows_to_csv(&rows)),
            Format::Json => ("json", rows_to_json(&rows)),
        };
        let path = unique_path(&m.out_dir, cfg.kind.name(), ext);
        fs::write(&path, body)
            .map_err(|e| Error::domain(format!("cannot write {path:?}: {e}")))?;
        if !m.quiet {
            println!("wrote {} ({} rows)", path.display(), rows.len());
        }
    }
    Ok(())
}

fn run_experiment(m: &Manifest, kind: ExperimentKind) -> Result<(), Error> {
    let defaults = RunDefaults { seed: m.seed, timings: m.timings };
    let configs = match &m.config_path {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::domain(format!("cannot read config {path:?}: {e}")))?;
            config::parse_config(&text, Some(kind), &defaults)?
        }
        None => vec![m.inline_config(kind)?],
    };
    write_reports(m, &configs)
}

fn run_exact(m: &Manifest) -> Result<(), Error> {
    let params = m.params()?;
    let query = m.query.as_deref().unwrap_or("tail");
    let line = match query {
        "pmf" => {
            let k = m.k.ok_or_else(|| Error::domain("pmf needs --k".to_string()))?;
            let (value, prob) = params.pmf(k)?;
            format!("pmf k={k}: value={value} prob={prob}")
        }
        "tail" => {
            let x = m.x.ok_or_else(|| Error::domain("tail needs --x".to_string()))?;
            format!("tail x={x}: {}", params.tail(x))
        }
        "moment" => {
            let beta = m.beta.ok_or_else(|| Error::domain("moment needs --beta".to_string()))?;
            match params.moment(MomentOrder::new(beta)?) {
                petersburg::Extended::Finite(v) => format!("moment beta={beta}: {v}"),
                petersburg::Extended::Infinite => format!("moment beta={beta}: infinite"),
            }
        }
        "tmean" => {
            let x = m.x.ok_or_else(|| Error::domain("tmean needs --x".to_string()))?;
            format!(
                "truncated_mean x={x}: {} (asymptote {})",
                params.truncated_mean(x),
                params.truncated_mean_asymptote(x)
            )
        }
        "mu" => {
            let x = m.x.ok_or_else(|| Error::domain("mu needs --x".to_string()))?;
            format!("mu x={x}: {}", params.mu(x)?)
        }
        "maxcdf" => {
            let x = m.x.ok_or_else(|| Error::domain("maxcdf needs --x".to_string()))?;
            let n = m
                .n_list
                .as_ref()
                .and_then(|l| l.first().copied())
                .ok_or_else(|| Error::domain("maxcdf needs --n".to_string()))?;
            format!("max_cdf n={n} x={x}: {}", params.exact_max_cdf(n as u64, x)?)
        }
        other => {
            return Err(Error::domain(format!(
                "unknown query `{other}` (pmf | tail | moment | tmean | mu | maxcdf)"
            )))
        }
    };
    println!("{line}");
    Ok(())
}

fn run_cf(m: &Manifest) -> Result<(), Error> {
    let params = m.params()?;
    let tol = m.series_tol.unwrap_or(1e-12);
    let spec = match m.variant.as_deref().unwrap_or("feller") {
        "feller" => LevyExponentSpec::compensated_feller(params, tol)?,
        "heavy" => LevyExponentSpec::uncompensated(params, tol)?,
        "discounted" => {
            let a = m.a.ok_or_else(|| Error::domain("discounted variant needs --a".to_string()))?;
            LevyExponentSpec::discounted(params, a, tol)?
        }
        other => {
            return Err(Error::domain(format!(
                "unknown variant `{other}` (feller | heavy | discounted)"
            )))
        }
    };
    if m.t_points < 2 || !(m.t_max > m.t_min) {
        return Err(Error::domain("cf needs t_min < t_max and at least 2 points".to_string()));
    }
    let u = m.u.unwrap_or(1.0);
    println!("t,g_re,g_im,cf_re,cf_im");
    for i in 0..m.t_points {
        let t = m.t_min + (m.t_max - m.t_min) * i as f64 / (m.t_points - 1) as f64;
        let g = spec.exponent(t);
        let phi = spec.cf(u, t)?;
        println!("{t},{},{},{},{}", g.re, g.im, phi.re, phi.im);
    }
    Ok(())
}

fn dispatch(m: &Manifest) -> Result<(), Error> {
    match m.command.as_str() {
        "exact" => run_exact(m),
        "cf" => run_cf(m),
        name => match ExperimentKind::from_name(name) {
            Some(kind) => run_experiment(m, kind),
            None => Err(Error::domain(format!("unknown command `{name}`"))),
        },
    }
}

fn main() -> ExitCode {
    let manifest = match Manifest::parse(env::args().skip(1)) {
        Ok(m) => m,
        Err(msg) => {
            if msg.is_empty() {
                println!("{USAGE}");
                return ExitCode::SUCCESS;
            }
            eprintln!("error: {msg}\n\n{USAGE}");
            return ExitCode::from(2);
        }
    };
    match dispatch(&manifest) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ (Error::Domain(_) | Error::Resource(_))) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e @ Error::Numerical(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
