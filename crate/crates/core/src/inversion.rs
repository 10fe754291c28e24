//! Characteristic-function inversion and goodness-of-fit machinery: the
//! limit laws are specified only through their characteristic functions,
//! so Gil-Pelaez inversion is the bridge from `exp(u·g(t))` to the CDFs
//! the Kolmogorov-Smirnov comparisons need.

use std::sync::Arc;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::quad;
use crate::scalar::Scalar;

/// Default upper integration limit for the inversion integral.
pub const T_MAX_DEFAULT: f64 = 1e3;

/// Pre-clamp slack allowed on an inverted CDF value.
pub const EPS_INV: f64 = 1e-6;

/// Empirical CDF of a sample; steps of exactly `1/R` at the sorted values.
#[derive(Debug, Clone)]
pub struct EmpiricalCdf<F = f64> {
    sorted: Vec<F>,
}

impl<F: Scalar> EmpiricalCdf<F> {
    pub fn new(mut values: Vec<F>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::domain("empirical CDF requires a nonempty sample".to_string()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain(
                "empirical CDF requires finite sample values (saturated draws must be handled upstream)"
                    .to_string(),
            ));
        }
        values.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
        Ok(EmpiricalCdf { sorted: values })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn values(&self) -> &[F] {
        &self.sorted
    }

    pub fn eval(&self, x: F) -> F {
        let count = self.sorted.partition_point(|&v| v <= x);
        F::of_usize(count) / F::of_usize(self.sorted.len())
    }
}

/// A reference CDF: an evaluator plus an optional support lower bound.
/// Output is clamped to `[0, 1]`; the raw evaluator is exposed for range
/// diagnostics.
#[derive(Clone)]
pub struct CdfFunction<F = f64> {
    eval: Arc<dyn Fn(F) -> F + Send + Sync>,
    support_lo: Option<F>,
}

impl<F: Scalar> CdfFunction<F> {
    pub fn from_fn(f: impl Fn(F) -> F + Send + Sync + 'static, support_lo: Option<F>) -> Self {
        CdfFunction { eval: Arc::new(f), support_lo }
    }

    pub fn support_lo(&self) -> Option<F> {
        self.support_lo
    }

    pub fn eval_raw(&self, x: F) -> F {
        (self.eval)(x)
    }

    pub fn eval(&self, x: F) -> F {
        (self.eval)(x).max(F::zero()).min(F::one())
    }
}

/// CDF of `scale·E + shift` for a standard exponential `E`. The limit laws
/// of the game-over totals are the centered case `shift = -scale`, i.e.
/// `F(x) = 1 - e^{-(x/scale + 1)}` on `x >= -scale`.
pub fn shifted_exponential_cdf<F: Scalar>(scale: F, shift: F) -> Result<CdfFunction<F>> {
    if !(scale > F::zero()) || !scale.is_finite() {
        return Err(Error::domain(format!("exponential scale must be positive, got {scale}")));
    }
    if !shift.is_finite() {
        return Err(Error::domain(format!("shift must be finite, got {shift}")));
    }
    Ok(CdfFunction::from_fn(
        move |x: F| {
            if x < shift {
                F::zero()
            } else {
                -((-(x - shift) / scale).exp_m1())
            }
        },
        Some(shift),
    ))
}

/// Empirical characteristic function `(1/R)·sum_j e^{i t x_j}`.
pub fn empirical_cf<F: Scalar>(values: &[F], t: F) -> Complex<F> {
    let mut acc = Complex::new(F::zero(), F::zero());
    for &x in values {
        let y = t * x;
        acc = acc + Complex::new(y.cos(), y.sin());
    }
    acc / F::of_usize(values.len().max(1))
}

/// Iterated-averaging (Euler) estimate from a window of partial sums;
/// returns the accelerated value and the last-level change.
fn euler_estimate<F: Scalar>(sums: &[F]) -> (F, F) {
    let window = sums.len().min(12);
    let mut level: Vec<F> = sums[sums.len() - window..].to_vec();
    let mut prev = *level.last().expect("nonempty window");
    let mut change = F::infinity();
    while level.len() > 1 {
        for i in 0..level.len() - 1 {
            level[i] = (level[i] + level[i + 1]) * F::of(0.5);
        }
        level.pop();
        let cur = *level.last().expect("nonempty");
        change = (cur - prev).abs();
        prev = cur;
    }
    (prev, change)
}

/// Asymptotic phase slope of the characteristic function, estimated from
/// finite differences of `arg φ` at two scales with Richardson
/// extrapolation. The integrand `Im(e^{-itx} φ(t))/t` oscillates with
/// frequency `|x - slope|`, which is what the half-period chunking must
/// follow (for a law centered away from zero, `|x|` alone is wrong).
fn phase_slope<F, C>(cf: &C) -> F
where
    F: Scalar,
    C: Fn(F) -> Complex<F>,
{
    // probe where |cf| has decayed but is still well above noise
    let mut t_star = F::of(256.0);
    for i in 0..9 {
        let t = F::of(f64::powi(2.0, i - 1));
        let m = cf(t).norm();
        if m < F::of(0.5) {
            t_star = t;
            break;
        }
    }
    let slope_at = |t: F| {
        let delta = t * F::of(0.01);
        let a = cf(t);
        let b = cf(t + delta);
        if a.norm() < F::of(1e-13) || b.norm() < F::of(1e-13) {
            return None;
        }
        Some((b * a.conj()).arg() / delta)
    };
    let t1 = t_star * F::of(4.0);
    match (slope_at(t1), slope_at(t1 + t1)) {
        // slope(t) ~ m + c/t^2 for the laws here; eliminate the 1/t^2 term
        (Some(s1), Some(s2)) => (F::of(4.0) * s2 - s1) / F::of(3.0),
        _ => F::zero(),
    }
}

/// Gil-Pelaez inversion: `F(x) = 1/2 - (1/pi) ∫_0^∞ Im(e^{-itx} φ(t))/t dt`.
///
/// The integral is chunked on the half-period grid of the integrand's
/// asymptotic frequency (or on a geometrically growing grid when the
/// frequency is negligible), each chunk integrated adaptively.
/// Integration stops when the measured envelope decay bounds the
/// remaining tail below `tol`, or - for slowly decaying integrands - when
/// iterated averaging of the alternating chunk sums converges. If neither
/// certificate is reached by `t_max`, a numerical error with diagnostics
/// is returned.
pub fn gil_pelaez_cdf<F, C>(cf: &C, x: F, t_max: F, tol: F) -> Result<F>
where
    F: Scalar,
    C: Fn(F) -> Complex<F>,
{
    if !(tol > F::zero()) {
        return Err(Error::domain("inversion tolerance must be positive".to_string()));
    }
    let integrand = |t: F| {
        let phi = cf(t);
        let rot = Complex::new((t * x).cos(), -(t * x).sin());
        let v = (rot * phi).im / t;
        Complex::new(v, F::zero())
    };
    let freq = (x - phase_slope(cf)).abs();
    let half_period = if freq > F::of(1e-12) {
        F::PI() / freq
    } else {
        F::infinity()
    };
    let budget = tol / F::of(3.0);
    // The integrand has a log(1/t) singularity at the origin (the phase
    // slope of a semistable law diverges logarithmically), so the first
    // chunk is integrated on a dyadic mesh shrinking into 0; the log
    // integrand is analytic on every [h, 2h].
    let first_chunk = |b: F, tol_c: F| -> F {
        let mut total = F::zero();
        let mut hi = b;
        for j in 0..200u32 {
            let lo = hi * F::of(0.5);
            let scale = F::of(((j + 2) * (j + 1)) as f64);
            let piece = quad::adaptive(&integrand, lo, hi, tol_c / scale).re;
            total = total + piece;
            hi = lo;
            if j >= 8 && piece.abs() < tol_c * F::of(0.25) {
                break;
            }
        }
        total
    };
    let mut t0 = F::zero();
    let mut total = F::zero();
    let mut sums: Vec<F> = Vec::with_capacity(64);
    let mut env_prev = F::one();
    let mut alternations = 0u32;
    let mut prev_sign = F::zero();
    let mut chunk_tol = budget * F::of(0.5);
    for j in 0..200_000u32 {
        let width = if half_period.is_finite() {
            half_period
        } else {
            (F::of(0.5) + F::of(0.6) * t0).min(t_max)
        };
        let t1 = t0 + width;
        let piece = if j == 0 {
            first_chunk(t1, chunk_tol)
        } else {
            quad::adaptive(&integrand, t0, t1, chunk_tol).re
        };
        chunk_tol = (chunk_tol * F::of(0.75)).max(budget * F::of(1e-4));
        total = total + piece;
        sums.push(total);

        // alternation bookkeeping for the oscillatory stop
        let sign = if piece > F::zero() {
            F::one()
        } else if piece < F::zero() {
            -F::one()
        } else {
            F::zero()
        };
        if sign * prev_sign < F::zero() {
            alternations += 1;
        } else {
            alternations = alternations.saturating_sub(1);
        }
        prev_sign = sign;

        // envelope certificate: measured geometric decay of |cf|
        let env = cf(t1).norm();
        let ratio = (env / env_prev.max(F::of(1e-300))).min(F::of(0.97)).max(F::zero());
        env_prev = env;
        let tail_bound = env * width / (t1 * (F::one() - ratio)) * F::of(4.0);
        if tail_bound < budget {
            let result = total;
            return finish_gil_pelaez(result, tol);
        }

        // Euler certificate for alternating half-period sums
        if half_period.is_finite() && j >= 10 && alternations >= 6 {
            let (est, change) = euler_estimate(&sums);
            if change < budget && (est - total).abs() < F::of(0.5) {
                return finish_gil_pelaez(est, tol);
            }
        }

        t0 = t1;
        if t0 >= t_max {
            return Err(Error::numerical(format!(
                "Gil-Pelaez inversion did not certify convergence by t_max = {t_max} \
                 (x = {x}, |cf| envelope {env}, tail bound {tail_bound}, {} chunks)",
                j + 1
            )));
        }
    }
    Err(Error::numerical(format!(
        "Gil-Pelaez inversion exceeded the chunk budget (x = {x})"
    )))
}

fn finish_gil_pelaez<F: Scalar>(integral: F, _tol: F) -> Result<F> {
    let raw = F::of(0.5) - integral / F::PI();
    let eps = F::of(EPS_INV);
    if raw < -eps || raw > F::one() + eps {
        return Err(Error::numerical(format!(
            "inverted CDF value {raw} lies outside [-{EPS_INV}, 1 + {EPS_INV}]; \
             the quadrature likely lost the oscillatory tail"
        )));
    }
    Ok(raw.max(F::zero()).min(F::one()))
}

/// Wrap a characteristic function as a reference CDF. The evaluator is
/// probed at a few points so obviously non-convergent setups surface as
/// errors at construction rather than inside a KS scan.
pub fn cdf_from_cf<F, C>(cf: C, t_max: F, tol: F, support_lo: Option<F>) -> Result<CdfFunction<F>>
where
    F: Scalar,
    C: Fn(F) -> Complex<F> + Send + Sync + 'static,
{
    for &probe in &[-1.0f64, 0.7, 3.0] {
        gil_pelaez_cdf(&cf, F::of(probe), t_max, tol)?;
    }
    Ok(CdfFunction::from_fn(
        move |x: F| {
            gil_pelaez_cdf(&cf, x, t_max, tol)
                .expect("inversion validated at construction")
        },
        support_lo,
    ))
}

/// Kolmogorov-Smirnov distance between an empirical CDF and a reference
/// CDF: the sup over sample points of both one-sided gaps.
pub fn ks_distance<F: Scalar>(emp: &EmpiricalCdf<F>, cdf: &CdfFunction<F>) -> F {
    let r = F::of_usize(emp.len());
    let mut worst = F::zero();
    for (i, &x) in emp.values().iter().enumerate() {
        let f = cdf.eval(x);
        let hi = (F::of_usize(i + 1) / r - f).abs();
        let lo = (F::of_usize(i) / r - f).abs();
        worst = worst.max(hi).max(lo);
    }
    worst
}

/// Inversion engine with the quadrature nodes and CF values precomputed
/// on a fixed panel grid, shared across every evaluation point.
///
/// The grid must resolve both the modulation `e^{-itx}` for the largest
/// `|x|` queried and the highest frequency present in the CF itself, so
/// this is only sound for band-limited CFs (an exponent with a jump cap).
/// Panels stop once the measured envelope decay certifies the remaining
/// tail below the tolerance.
pub struct CachedCfInverter<F = f64> {
    /// per node: (t, weight·phi/t) with the Gauss weight folded in
    nodes: Vec<(F, Complex<F>)>,
    tol: F,
}

impl<F: Scalar> CachedCfInverter<F> {
    pub fn build<C>(cf: &C, max_freq: F, tol: F, t_max: F) -> Result<Self>
    where
        C: Fn(F) -> Complex<F>,
    {
        if !(tol > F::zero()) || !(max_freq > F::zero()) {
            return Err(Error::domain(
                "cached inverter needs positive tolerance and frequency bound".to_string(),
            ));
        }
        let width = (F::of(2.0) * F::PI() / max_freq) / F::of(2.5);
        let mut nodes: Vec<(F, Complex<F>)> = Vec::new();
        let push_panel = |a: F, b: F, nodes: &mut Vec<(F, Complex<F>)>| {
            let mid = (a + b) * F::of(0.5);
            let half = (b - a) * F::of(0.5);
            for (x, w) in quad::gl15_nodes::<F>() {
                let t = mid + half * x;
                let phi = cf(t);
                nodes.push((t, phi * (w * half / t)));
            }
        };
        // dyadic mesh into the origin across the first panel
        let mut hi = width;
        for _ in 0..120 {
            let lo = hi * F::of(0.5);
            push_panel(lo, hi, &mut nodes);
            hi = lo;
            if hi < F::of(1e-14) * width {
                break;
            }
        }
        // main panels with the envelope certificate
        let mut t0 = width;
        let mut env_prev = F::one();
        loop {
            let t1 = t0 + width;
            push_panel(t0, t1, &mut nodes);
            let env = cf(t1).norm();
            let ratio = (env / env_prev.max(F::of(1e-300))).min(F::of(0.97)).max(F::zero());
            env_prev = env;
            let tail_bound = env * width / (t1 * (F::one() - ratio)) * F::of(4.0);
            if tail_bound < tol * F::of(0.3) {
                break;
            }
            t0 = t1;
            if t0 >= t_max {
                return Err(Error::numerical(format!(
                    "cached inverter: envelope did not certify by t_max = {t_max} \
                     (|cf| = {env} at t = {t1})"
                )));
            }
        }
        Ok(CachedCfInverter { nodes, tol })
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn tol(&self) -> F {
        self.tol
    }

    /// Inverted CDF at `x` (clamped to [0, 1]).
    pub fn cdf(&self, x: F) -> F {
        let mut acc = F::zero();
        for &(t, v) in &self.nodes {
            let y = t * x;
            let (sin, cos) = (y.sin(), y.cos());
            // Im(e^{-iy}·v) = v.im·cos - v.re·sin
            acc = acc + v.im * cos - v.re * sin;
        }
        (F::of(0.5) - acc / F::PI()).max(F::zero()).min(F::one())
    }
}

/// Two-sided enclosure of a KS distance computed through monotone
/// bracketing: the reference CDF is evaluated on an adaptively refined
/// grid and every sample's CDF value is pinned between the bracketing
/// grid values, so `true KS ∈ [lo, hi]` holds whenever the evaluator is
/// (numerically) monotone.
#[derive(Debug, Clone, Copy)]
pub struct BracketedKs<F> {
    pub lo: F,
    pub hi: F,
    pub grid_evals: usize,
}

/// Bracketed KS distance of a sample against a monotone CDF evaluator on
/// `[x_lo, x_hi]`. Samples outside the grid are bracketed by
/// `[0, F(x_lo)]` and `[F(x_hi), 1]`. Cells containing samples are
/// bisected until their CDF increment drops below `gap` (or the budget is
/// exhausted, which still yields a valid, just wider, enclosure).
pub fn ks_distance_bracketed<F, E>(
    emp: &EmpiricalCdf<F>,
    eval: &E,
    x_lo: F,
    x_hi: F,
    gap: F,
    max_evals: usize,
) -> Result<BracketedKs<F>>
where
    F: Scalar,
    E: Fn(F) -> F,
{
    if !(x_lo < x_hi) || !(gap > F::zero()) {
        return Err(Error::domain("bracketed KS needs x_lo < x_hi and gap > 0".to_string()));
    }
    let mut grid: Vec<(F, F)> = vec![(x_lo, eval(x_lo)), (x_hi, eval(x_hi))];
    let mut evals = 2usize;
    let contains_sample = |a: F, b: F, values: &[F]| {
        let lo = values.partition_point(|&v| v <= a);
        let hi = values.partition_point(|&v| v <= b);
        hi > lo
    };
    loop {
        let mut inserted = false;
        let mut next: Vec<(F, F)> = Vec::with_capacity(grid.len() * 2);
        for i in 0..grid.len() {
            next.push(grid[i]);
            if i + 1 == grid.len() {
                break;
            }
            let (a, fa) = grid[i];
            let (b, fb) = grid[i + 1];
            if fb - fa > gap && evals < max_evals && contains_sample(a, b, emp.values()) {
                let mid = (a + b) * F::of(0.5);
                if mid > a && mid < b {
                    next.push((mid, eval(mid)));
                    evals += 1;
                    inserted = true;
                }
            }
        }
        grid = next;
        if !inserted {
            break;
        }
    }
    // enforce monotonicity against sub-tolerance quadrature jitter
    for i in 1..grid.len() {
        grid[i].1 = grid[i].1.max(grid[i - 1].1);
    }
    let r = F::of_usize(emp.len());
    let (mut lo, mut hi) = (F::zero(), F::zero());
    for (i, &x) in emp.values().iter().enumerate() {
        let pos = grid.partition_point(|&(g, _)| g <= x);
        let (f_lo, f_hi) = if pos == 0 {
            (F::zero(), grid[0].1)
        } else if pos == grid.len() {
            (grid[grid.len() - 1].1, F::one())
        } else {
            (grid[pos - 1].1, grid[pos].1)
        };
        for c in [F::of_usize(i + 1) / r, F::of_usize(i) / r] {
            // max over F in [f_lo, f_hi] of |c - F| sits at an endpoint;
            // min is the distance to the interval
            hi = hi.max((c - f_lo).abs()).max((c - f_hi).abs());
            lo = lo.max((c - f_hi).max(f_lo - c).max(F::zero()));
        }
    }
    Ok(BracketedKs { lo, hi, grid_evals: evals })
}
