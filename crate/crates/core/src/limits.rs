//! Numerical evaluation of the limit laws: the Lévy exponents behind the
//! geometric-subsequence limits, the discounted-value law, semistability
//! residuals, the Lévy-measure tail, and the closed-form deviation and
//! ruin constants.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::game::{GameParams, Regime};
use crate::quad;
use crate::scalar::Scalar;

/// Which exponent `g(t)` a [`LevyExponentSpec`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExponentVariant {
    /// Boundary regime `rq = 1`: small jumps compensated, `c_k = 1` for
    /// `k < 0` and `c_k = 0` for `k >= 0`.
    CompensatedFeller,
    /// Heavy regime `rq > 1`: no compensation anywhere.
    Uncompensated,
    /// Exponent of the discounted total `U`, with the same compensation
    /// indicator and the drift term `i·t·s·q`.
    DiscountedU,
}

/// Compensation indicator `c_k`.
#[inline]
pub fn compensation_indicator(k: i64) -> bool {
    k < 0
}

/// Exponent evaluator: variant, parameters, optional discount rate, and
/// the absolute truncation tolerance for the series / quadrature.
///
/// A spec may carry a jump-size cap (see [`Self::with_jump_cap`]): the
/// exponent then describes the law with all jumps above `s·r^cap`
/// removed. The full law is the independent sum of that capped law and a
/// compound Poisson of the removed jumps (total rate [`Self::capped_mass`]),
/// which is how the inversion machinery sidesteps the fractal
/// high-frequency content of the exact characteristic function.
#[derive(Debug, Clone, Copy)]
pub struct LevyExponentSpec<F = f64> {
    variant: ExponentVariant,
    params: GameParams<F>,
    a: Option<F>,
    tol: F,
    jump_cap: Option<i64>,
}

/// Where the e^{iu}/u integral switches from direct quadrature to the
/// integration-by-parts expansion.
const OSC_SWITCH: f64 = 40.0;

impl<F: Scalar> LevyExponentSpec<F> {
    pub fn compensated_feller(params: GameParams<F>, tol: F) -> Result<Self> {
        if params.regime() != Regime::Feller {
            return Err(Error::domain(format!(
                "the compensated exponent requires r = 1/q; got rq = {}",
                params.r() * params.q()
            )));
        }
        Self::checked(ExponentVariant::CompensatedFeller, params, None, tol)
    }

    pub fn uncompensated(params: GameParams<F>, tol: F) -> Result<Self> {
        if params.regime() != Regime::Heavy {
            return Err(Error::domain(format!(
                "the uncompensated exponent requires r > 1/q; got rq = {}",
                params.r() * params.q()
            )));
        }
        Self::checked(ExponentVariant::Uncompensated, params, None, tol)
    }

    pub fn discounted(params: GameParams<F>, a: F, tol: F) -> Result<Self> {
        if params.regime() != Regime::Feller {
            return Err(Error::domain(format!(
                "the discounted exponent requires r = 1/q; got rq = {}",
                params.r() * params.q()
            )));
        }
        if !(a > F::zero()) || !a.is_finite() {
            return Err(Error::domain(format!("discount rate a must be positive, got {a}")));
        }
        Self::checked(ExponentVariant::DiscountedU, params, Some(a), tol)
    }

    fn checked(variant: ExponentVariant, params: GameParams<F>, a: Option<F>, tol: F) -> Result<Self> {
        if !(tol > F::zero()) || !tol.is_finite() {
            return Err(Error::domain(format!("series tolerance must be positive, got {tol}")));
        }
        Ok(LevyExponentSpec { variant, params, a, tol, jump_cap: None })
    }

    /// Restrict the exponent to jumps of index `k <= cap` (sizes up to
    /// `s·r^cap`). For any `x` below the smallest removed jump size, the
    /// CDF of the full law factors exactly as
    /// `F(x) = e^{-u·capped_mass}·F_capped(x)`.
    pub fn with_jump_cap(mut self, cap: i64) -> Self {
        self.jump_cap = Some(cap);
        self
    }

    /// Total Lévy mass removed by the jump cap (zero when uncapped): the
    /// rate of the split-off compound Poisson of big jumps.
    pub fn capped_mass(&self) -> F {
        let cap = match self.jump_cap {
            Some(c) => c,
            None => return F::zero(),
        };
        let q = self.params.q();
        match self.variant {
            // point masses p·q^k for k > cap sum to q^{cap+1}
            ExponentVariant::CompensatedFeller | ExponentVariant::Uncompensated => {
                powi_i64(q, cap + 1)
            }
            // interval densities q^k/x on (s·r^{k-1}, s·r^k] integrate to
            // q^k·ln r each
            ExponentVariant::DiscountedU => {
                powi_i64(q, cap + 1) * self.params.r().ln() / self.params.p()
            }
        }
    }

    /// Smallest jump size removed by the cap (`+inf` when uncapped); the
    /// capped-law factorization of the CDF is valid strictly below this.
    pub fn cap_size(&self) -> F {
        let cap = match self.jump_cap {
            Some(c) => c,
            None => return F::infinity(),
        };
        match self.variant {
            ExponentVariant::CompensatedFeller | ExponentVariant::Uncompensated => {
                self.params.s() * powi_i64(self.params.r(), cap + 1)
            }
            ExponentVariant::DiscountedU => self.params.s() * powi_i64(self.params.r(), cap),
        }
    }

    pub fn variant(&self) -> ExponentVariant {
        self.variant
    }

    pub fn params(&self) -> &GameParams<F> {
        &self.params
    }

    pub fn rate(&self) -> Option<F> {
        self.a
    }

    pub fn tol(&self) -> F {
        self.tol
    }

    /// Series cuts `(k_neg, k_pos)`: indices `k in [-k_neg, k_pos]` are
    /// retained so the rigorous tail bounds contribute less than `tol`.
    pub fn series_cuts(&self, t: F) -> (i64, i64) {
        let (p, q, s, r) = (self.params.p(), self.params.q(), self.params.s(), self.params.r());
        let t = t.abs().max(F::of(1e-300));
        let quarter = self.tol * F::of(0.25);
        // positive side: terms bounded by 2pq^k (series) or 2·ln(r)·q^k
        // (interval integrals); the geometric tail must drop below tol/4
        let pos_coeff = match self.variant {
            ExponentVariant::DiscountedU => F::of(2.0) * r.ln() / p,
            _ => F::of(2.0),
        };
        let k_pos = ((pos_coeff / quarter).ln() / q.recip().ln())
            .ceil()
            .max(F::one());
        // negative side: compensated terms shrink like (q r^2)^k = r^k on
        // the boundary, uncompensated ones like (rq)^k
        let (w, coeff) = match self.variant {
            ExponentVariant::Uncompensated => (r * q, p * t * s),
            ExponentVariant::CompensatedFeller => {
                (q * r * r, p * t * t * s * s * F::of(0.5))
            }
            ExponentVariant::DiscountedU => {
                let w = q * r * r;
                (w, t * t * s * s * F::of(0.25) * (F::one() - (r * r).recip()))
            }
        };
        let k_neg = ((coeff / (quarter * (w - F::one()))).ln() / w.ln())
            .ceil()
            .max(F::one());
        (cap_cut(k_neg), cap_cut(k_pos))
    }

    /// The Lévy exponent `g(t)`; `g(0) = 0` exactly and
    /// `g(-t) = conj(g(t))`.
    pub fn exponent(&self, t: F) -> Complex<F> {
        if t == F::zero() {
            return Complex::new(F::zero(), F::zero());
        }
        if t < F::zero() {
            return self.exponent(-t).conj();
        }
        match self.variant {
            ExponentVariant::CompensatedFeller => self.series_exponent(t, true),
            ExponentVariant::Uncompensated => self.series_exponent(t, false),
            ExponentVariant::DiscountedU => self.integral_exponent(t),
        }
    }

    /// Point-mass series, summed from the small-magnitude ends inward.
    fn series_exponent(&self, t: F, compensated: bool) -> Complex<F> {
        let (p, q, s, r) = (self.params.p(), self.params.q(), self.params.s(), self.params.r());
        let (k_neg, mut k_pos) = self.series_cuts(t);
        if let Some(cap) = self.jump_cap {
            k_pos = k_pos.min(cap.max(0));
        }
        let mut acc = Complex::new(F::zero(), F::zero());
        // negative side, k = -k_neg .. -1
        let mut rk = r.powi(-(k_neg as i32)); // r^k
        let mut qk = q.powi(-(k_neg as i32)); // q^k
        for _ in 0..k_neg {
            let y = t * s * rk;
            let re = -F::of(2.0) * (y * F::of(0.5)).sin().powi(2);
            let im = if compensated { y.sin() - y } else { y.sin() };
            let w = p * qk;
            acc = acc + Complex::new(re * w, im * w);
            rk = rk * r;
            qk = qk * q;
        }
        // positive side, summed downward from k_pos to 0
        let mut rk = r.powi(k_pos as i32);
        let mut qk = q.powi(k_pos as i32);
        let mut pos = Complex::new(F::zero(), F::zero());
        for _ in 0..=k_pos {
            let y = t * s * rk;
            let re = -F::of(2.0) * (y * F::of(0.5)).sin().powi(2);
            let w = p * qk;
            pos = pos + Complex::new(re * w, y.sin() * w);
            rk = rk / r;
            qk = qk / q;
        }
        acc + pos
    }

    /// Interval-integral exponent of the discounted law:
    /// `i·t·s·q + sum_k q^k ∫ (e^{itx} - 1 - itx·c_k) dx/x`.
    fn integral_exponent(&self, t: F) -> Complex<F> {
        let (q, s, r) = (self.params.q(), self.params.s(), self.params.r());
        let (k_neg, mut k_pos) = self.series_cuts(t);
        if let Some(cap) = self.jump_cap {
            k_pos = k_pos.min(cap.max(0));
        }
        let intervals = (k_neg + k_pos + 1) as usize;
        let tol_interval = self.tol * F::of(0.5) / F::of_usize(intervals);
        let mut acc = Complex::new(F::zero(), t * s * q);
        for k in -k_neg..=k_pos {
            let qk = powi_i64(q, k);
            let alpha = t * s * powi_i64(r, k - 1);
            let beta = t * s * powi_i64(r, k);
            let c = compensation_indicator(k);
            let w = scaled_interval_integral(alpha, beta, c, tol_interval / qk);
            acc = acc + w * qk;
        }
        acc
    }

    /// Limit characteristic function: `exp(u·g(t))` for the process
    /// variants, `exp(g(t)/a)` for the discounted law.
    pub fn cf(&self, u: F, t: F) -> Result<Complex<F>> {
        let g = match self.variant {
            ExponentVariant::DiscountedU => {
                self.exponent(t) / self.a.expect("discounted spec carries a")
            }
            _ => {
                if !(u > F::zero()) {
                    return Err(Error::domain(format!("process time u must be positive, got {u}")));
                }
                self.exponent(t) * u
            }
        };
        Ok(g.exp())
    }
}

fn cap_cut<F: Scalar>(k: F) -> i64 {
    let capped = k.min(F::of(5e6));
    capped.to_i64().unwrap_or(1).max(1)
}

fn powi_i64<F: Scalar>(base: F, k: i64) -> F {
    base.powi(k.clamp(i32::MIN as i64, i32::MAX as i64) as i32)
}

/// `∫_alpha^beta (e^{iu} - 1 - i·c·u)/u du` with `0 < alpha < beta`.
fn scaled_interval_integral<F: Scalar>(alpha: F, beta: F, c: bool, tol: F) -> Complex<F> {
    let switch = F::of(OSC_SWITCH);
    let integrand = move |u: F| {
        let re = -F::of(2.0) * (u * F::of(0.5)).sin().powi(2);
        let im = if c { u.sin() - u } else { u.sin() };
        Complex::new(re / u, im / u)
    };
    if beta <= switch {
        return quad::adaptive(&integrand, alpha, beta, tol);
    }
    if alpha >= switch {
        return analytic_tail_integral(alpha, beta, c);
    }
    quad::adaptive(&integrand, alpha, switch, tol) + analytic_tail_integral(switch, beta, c)
}

/// Same integral for `alpha >= OSC_SWITCH`: split off the exactly
/// integrable parts and expand `∫ e^{iu}/u du` by parts, which converges
/// factorially fast once `u >= 40`.
fn analytic_tail_integral<F: Scalar>(alpha: F, beta: F, c: bool) -> Complex<F> {
    let mut acc = Complex::new(-(beta / alpha).ln(), F::zero());
    if c {
        acc.im = acc.im - (beta - alpha);
    }
    acc + osc_over_u(alpha, beta)
}

/// `∫_alpha^beta e^{iu}/u du` by repeated integration by parts:
/// `sum_j (j-1)!/(i^j) [e^{iu}/u^j]` with remainder below `(J-1)!/alpha^J`.
fn osc_over_u<F: Scalar>(alpha: F, beta: F) -> Complex<F> {
    let ea = Complex::new(F::zero(), alpha).exp();
    let eb = Complex::new(F::zero(), beta).exp();
    let inv_i = Complex::new(F::zero(), -F::one()); // 1/i
    let mut coeff = inv_i; // (j-1)!/i^j at j = 1
    let mut inva = alpha.recip();
    let mut invb = beta.recip();
    let mut acc = Complex::new(F::zero(), F::zero());
    let mut best = F::infinity();
    for j in 1..=30u32 {
        let term = (eb * invb - ea * inva) * coeff;
        let size = term.norm();
        if size > best {
            break; // asymptotic series started diverging
        }
        acc = acc + term;
        best = size;
        if size < F::of(1e-18) {
            break;
        }
        coeff = coeff * inv_i * F::of(j as f64);
        inva = inva / alpha;
        invb = invb / beta;
    }
    acc
}

/// Residual of the semistability identity, which both compensated
/// exponents satisfy in the mutually inverse forms
///
/// * solved for the scaled argument: `g(t·q^m) = q^m·(g(t) + i·t·s·p·m)`
///   (checked for the discounted exponent), and
/// * solved for the base argument: `g(t) = q^{-m}·g(t·q^m) - i·t·s·p·m`
///   (checked for the boundary-regime exponent).
///
/// The drift correction is what distinguishes these laws from strict
/// stability: invariance holds only along the geometric subgroup
/// `t -> t·q^m`. The uncompensated exponent has no drift term and is
/// rejected; its shift identity is a plain re-indexing of partial sums.
pub fn semistability_residual<F: Scalar>(
    spec: &LevyExponentSpec<F>,
    t: F,
    m: i32,
) -> Result<F> {
    let params = spec.params();
    let (p, q, s) = (params.p(), params.q(), params.s());
    let qm = q.powi(m);
    let drift = Complex::new(F::zero(), t * s * p * F::of(m as f64));
    match spec.variant() {
        ExponentVariant::CompensatedFeller => {
            let lhs = spec.exponent(t);
            let rhs = spec.exponent(t * qm) / qm - drift;
            Ok((lhs - rhs).norm())
        }
        ExponentVariant::DiscountedU => {
            let lhs = spec.exponent(t * qm);
            let rhs = (spec.exponent(t) + drift) * qm;
            Ok((lhs - rhs).norm())
        }
        ExponentVariant::Uncompensated => Err(Error::domain(
            "the uncompensated exponent has no centering term; its shift identity \
             is a re-indexing of partial sums, tested as a property"
                .to_string(),
        )),
    }
}

/// Upper tail of the Lévy measure of the discounted law: exact piecewise
/// integration of the density `q^k/(a·y)` on `(s·r^{k-1}, s·r^k]`.
pub fn levy_tail<F: Scalar>(params: &GameParams<F>, a: F, x: F) -> Result<F> {
    if params.regime() != Regime::Feller {
        return Err(Error::domain(format!(
            "the discounted Lévy tail requires r = 1/q; got rq = {}",
            params.r() * params.q()
        )));
    }
    if !(a > F::zero()) {
        return Err(Error::domain(format!("rate a must be positive, got {a}")));
    }
    if !(x > F::zero()) {
        return Err(Error::domain(format!("Lévy tail requires x > 0, got {x}")));
    }
    let (p, q, s, r) = (params.p(), params.q(), params.s(), params.r());
    // locate k0 with s·r^{k0-1} < x <= s·r^{k0}
    let mut k0: i64 = 0;
    let mut hi = s;
    if x > s {
        while hi < x {
            hi = hi * r;
            k0 += 1;
        }
    } else {
        while hi / r >= x {
            hi = hi / r;
            k0 -= 1;
        }
    }
    let qk0 = powi_i64(q, k0);
    Ok((qk0 * (hi / x).ln() + qk0 * q * r.ln() / p) / a)
}

/// Admissible discount-rate interval for the ruin approximation: the pair
/// `(1/sqrt(qr), 1/sqrt(q))` bounding `1 < 1/(q a^2) < r`.
pub fn admissible_ruin_rates<F: Scalar>(params: &GameParams<F>) -> (F, F) {
    let q = params.q();
    let r = params.r();
    ((q * r).sqrt().recip(), q.sqrt().recip())
}

/// Closed-form ruin approximation `(1/(a·r^n))·((1/p)·ln r - ln x)` with
/// `x = 1/(q·a^2)`, valid for `s = r = 1/q` and `1 < x < r`.
pub fn ruin_probability_approx<F: Scalar>(params: &GameParams<F>, a: F, n: u32) -> Result<F> {
    let (p, q, s, r) = (params.p(), params.q(), params.s(), params.r());
    if params.regime() != Regime::Feller || (s - r).abs() > F::param_tol() * r {
        return Err(Error::domain(format!(
            "ruin approximation requires s = r = 1/q; got s = {s}, r = {r}, 1/q = {}",
            q.recip()
        )));
    }
    if !(a > F::zero()) {
        return Err(Error::domain(format!("rate a must be positive, got {a}")));
    }
    let x = (q * a * a).recip();
    if !(x > F::one() && x < r) {
        let (lo, hi) = admissible_ruin_rates(params);
        return Err(Error::domain(format!(
            "ruin approximation needs 1 < 1/(q a^2) < r; a = {a} gives {x}; admissible a interval is ({lo}, {hi})"
        )));
    }
    Ok((p.recip() * r.ln() - x.ln()) / (a * r.powi(n as i32)))
}

/// `E(gamma^T X) = s·p·gamma/(1 - gamma)` for `r = 1/q`.
pub fn discounted_value_mean<F: Scalar>(params: &GameParams<F>, gamma: F) -> Result<F> {
    if params.regime() != Regime::Feller {
        return Err(Error::domain(format!(
            "the discounted mean requires r = 1/q; got rq = {}",
            params.r() * params.q()
        )));
    }
    if !(gamma > F::zero() && gamma < F::one()) {
        return Err(Error::domain(format!(
            "discount factor must lie in (0, 1), got {gamma}"
        )));
    }
    Ok(params.sp() * gamma / (F::one() - gamma))
}

/// Polynomial-size deviation limit: `lim log_r P(S_n > n^b)/log_r n = 1-b`
/// for `b > 1` (and the same for the maximum).
pub fn deviation_limit_polynomial<F: Scalar>(b: F) -> Result<F> {
    if !(b > F::one()) {
        return Err(Error::domain(format!("polynomial deviations require b > 1, got {b}")));
    }
    Ok(F::one() - b)
}

/// Geometric-size deviation limit `-log_r b`, under the moment hypothesis
/// `E X^{1/b} < inf`, i.e. `r^{1/b}·q < 1`.
pub fn deviation_limit_geometric<F: Scalar>(params: &GameParams<F>, b: F) -> Result<F> {
    if !(b > F::zero()) {
        return Err(Error::domain(format!("geometric deviations require b > 0, got {b}")));
    }
    let growth = params.r().powf(b.recip()) * params.q();
    if !(growth < F::one()) {
        return Err(Error::domain(format!(
            "geometric deviations require E X^(1/b) finite, i.e. r^(1/b)·q < 1; got {growth} (b must exceed 1/log_r(1/q) = {})",
            params.q().recip().ln().recip() * params.r().ln()
        )));
    }
    Ok(-(b.ln() / params.r().ln()))
}

/// Geometric-subsequence bookkeeping: `N = r^n`, `M = q^{-n}`, the floored
/// replicate count, and the centering for the compensated statistic.
#[derive(Debug, Clone, Copy)]
pub struct CenteringSchedule<F = f64> {
    pub n: u32,
    pub big_n: F,
    pub big_m: F,
    pub u: F,
    /// Number of summands, `floor(u·N)` or `floor(u·M)`.
    pub count: u64,
    /// Normalization: the statistic divides by `N`.
    pub scale: F,
    /// Total centering subtracted from the sum (zero when uncompensated).
    pub center: F,
}

impl<F: Scalar> CenteringSchedule<F> {
    /// Schedule for the compensated boundary statistic
    /// `(S_{floor(uN)} - s·p·floor(uN)·n)/N`.
    pub fn feller(params: &GameParams<F>, n: u32, u: F) -> Result<Self> {
        if params.regime() != Regime::Feller {
            return Err(Error::domain("subsequence schedule (compensated) requires r = 1/q".to_string()));
        }
        if !(u > F::zero()) || n < 1 {
            return Err(Error::domain(format!("schedule requires u > 0 and n >= 1, got u = {u}, n = {n}")));
        }
        let big_n = params.r().powi(n as i32);
        let count = (u * big_n).floor();
        let center = params.sp() * count * F::of(n as f64);
        Ok(CenteringSchedule {
            n,
            big_n,
            big_m: big_n,
            u,
            count: count.to_u64().unwrap_or(u64::MAX),
            scale: big_n,
            center,
        })
    }

    /// Schedule for the heavy-regime statistic `S_{floor(uM)}/N`.
    pub fn heavy(params: &GameParams<F>, n: u32, u: F) -> Result<Self> {
        if params.regime() != Regime::Heavy {
            return Err(Error::domain("subsequence schedule (uncompensated) requires rq > 1".to_string()));
        }
        if !(u > F::zero()) || n < 1 {
            return Err(Error::domain(format!("schedule requires u > 0 and n >= 1, got u = {u}, n = {n}")));
        }
        let big_n = params.r().powi(n as i32);
        let big_m = params.q().powi(-(n as i32));
        let count = (u * big_m).floor();
        Ok(CenteringSchedule {
            n,
            big_n,
            big_m,
            u,
            count: count.to_u64().unwrap_or(u64::MAX),
            scale: big_n,
            center: F::zero(),
        })
    }

    /// Effective process time after flooring, `count/N` or `count/M`
    /// (the two coincide on the boundary, where `M = N`).
    pub fn effective_u(&self) -> F {
        F::of_u64(self.count) / self.big_m
    }

    /// Normalize a raw sum of `count` payoffs into the limit statistic.
    pub fn statistic(&self, sum: F) -> F {
        (sum - self.center) / self.scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn classical_unit() -> GameParams<f64> {
        GameParams::new(0.5, 2.0, 2.0).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "expected {b}, got {a} (tol {tol})");
    }

    /// Brute-force series oracle, independent of the cut selection.
    /// `cos(y) - 1` is written as `-2 sin^2(y/2)`: the direct difference
    /// rounds to zero for small `y` while the weights `q^k` are huge, which
    /// would silently drop real mass from the sum.
    fn oracle_feller(params: &GameParams<f64>, t: f64, k_lo: i64, k_hi: i64) -> Complex<f64> {
        let (p, q, s, r) = (params.p(), params.q(), params.s(), params.r());
        let mut acc = Complex::new(0.0, 0.0);
        for k in k_lo..=k_hi {
            let y = t * s * r.powi(k as i32);
            let w = p * q.powi(k as i32);
            let re = -2.0 * (0.5 * y).sin().powi(2);
            let term = if k < 0 {
                Complex::new(re * w, (y.sin() - y) * w)
            } else {
                Complex::new(re * w, y.sin() * w)
            };
            acc += term;
        }
        acc
    }

    #[test]
    fn exponent_vanishes_at_zero() {
        let spec = LevyExponentSpec::compensated_feller(classical_unit(), 1e-13).unwrap();
        assert_eq!(spec.exponent(0.0), Complex::new(0.0, 0.0));
        let d = LevyExponentSpec::discounted(classical_unit(), 1.0, 1e-12).unwrap();
        assert_eq!(d.exponent(0.0), Complex::new(0.0, 0.0));
    }

    #[test]
    fn conjugate_symmetry() {
        let spec = LevyExponentSpec::compensated_feller(classical_unit(), 1e-13).unwrap();
        for &t in &[0.5, 1.0, 2.0] {
            let gp = spec.exponent(t);
            let gm = spec.exponent(-t);
            assert!((gm - gp.conj()).norm() < 1e-15);
        }
    }

    #[test]
    fn feller_exponent_matches_brute_force_oracle() {
        let spec = LevyExponentSpec::compensated_feller(classical_unit(), 1e-14).unwrap();
        for &t in &[0.1, 0.5, 1.0, 2.0, 5.0, 10.0] {
            let got = spec.exponent(t);
            let want = oracle_feller(&classical_unit(), t, -60, 120);
            assert!((got - want).norm() < 1e-13, "t = {t}: {got} vs {want}");
        }
    }

    #[test]
    fn feller_exponent_regression_pin() {
        // frozen from the brute-force oracle (k in [-60, 120]) at t = 1
        let spec = LevyExponentSpec::compensated_feller(classical_unit(), 1e-14).unwrap();
        let g = spec.exponent(1.0);
        close(g.re, REGRESSION_RE, 1e-10);
        close(g.im, REGRESSION_IM, 1e-10);
    }

    // frozen output of oracle_feller(classical s=2, t=1, k in [-60, 120])
    const REGRESSION_RE: f64 = -2.37702942358589508;
    const REGRESSION_IM: f64 = 0.19051282992011692;

    #[test]
    fn truncation_is_stable_under_doubled_depth() {
        let params = classical_unit();
        let tol = 1e-12;
        let spec = LevyExponentSpec::compensated_feller(params, tol).unwrap();
        for &t in &[0.1, 1.0, 2.0, 3.0, 5.0, 7.0, 10.0] {
            let (k_neg, k_pos) = spec.series_cuts(t);
            let got = spec.exponent(t);
            let deeper = oracle_feller(&params, t, -2 * k_neg, 2 * k_pos);
            assert!((got - deeper).norm() < tol, "t = {t}");
        }
    }

    #[test]
    fn uncompensated_reindexing_partial_sums() {
        // partial sums over [-K, K] satisfy the exact re-indexing identity
        // sum(t, [-K, K]) = q^{-m} · sum(t·r^{-m}, [-K+m, K+m])
        let params = GameParams::new(0.4, 1.0, 2.0).unwrap();
        let (p, q, s, r) = (params.p(), params.q(), params.s(), params.r());
        let partial = |t: f64, lo: i64, hi: i64| -> Complex<f64> {
            let mut acc = Complex::new(0.0, 0.0);
            for k in lo..=hi {
                let y = t * s * r.powi(k as i32);
                let w = p * q.powi(k as i32);
                acc += Complex::new((y.cos() - 1.0) * w, y.sin() * w);
            }
            acc
        };
        let k = 40;
        for &t in &[0.3, 1.0, 2.7] {
            for m in [-3i64, -1, 1, 2, 5] {
                let lhs = partial(t, -k, k);
                let rhs = partial(t * r.powi(-m as i32), -k + m, k + m) * q.powi(-m as i32);
                assert!((lhs - rhs).norm() < 1e-12, "t = {t}, m = {m}");
            }
        }
    }

    #[test]
    fn semistability_residual_compensated() {
        let spec = LevyExponentSpec::compensated_feller(classical_unit(), 1e-14).unwrap();
        assert_eq!(semistability_residual(&spec, 1.0, 0).unwrap(), 0.0);
        assert!(semistability_residual(&spec, 1.0, 1).unwrap() < 1e-10);
        assert!(semistability_residual(&spec, 2.7, -3).unwrap() < 1e-9);
    }

    #[test]
    fn semistability_residual_discounted() {
        let spec = LevyExponentSpec::discounted(classical_unit(), 1.0, 1e-12).unwrap();
        assert_eq!(semistability_residual(&spec, 1.0, 0).unwrap(), 0.0);
        for m in [-2i32, 1, 3] {
            let res = semistability_residual(&spec, 1.0, m).unwrap();
            assert!(res < 1e-9, "m = {m}: residual {res}");
        }
    }

    #[test]
    fn semistability_rejects_uncompensated() {
        let params = GameParams::new(0.4, 1.0, 2.0).unwrap();
        let spec = LevyExponentSpec::uncompensated(params, 1e-12).unwrap();
        assert!(semistability_residual(&spec, 1.0, 1).is_err());
    }

    #[test]
    fn cf_modulus_and_symmetry() {
        let spec = LevyExponentSpec::compensated_feller(classical_unit(), 1e-12).unwrap();
        for i in 0..64 {
            let t = -8.0 + 0.25 * i as f64;
            let phi = spec.cf(1.0, t).unwrap();
            assert!(phi.norm() <= 1.0 + 1e-12);
            let mirrored = spec.cf(1.0, -t).unwrap();
            assert!((mirrored - phi.conj()).norm() < 1e-12);
        }
        assert_eq!(spec.cf(1.0, 0.0).unwrap(), Complex::new(1.0, 0.0));
    }

    #[test]
    fn cf_composes_along_process_time() {
        // Lévy structure: phi(2u) = phi(u)^2 exactly
        let spec = LevyExponentSpec::compensated_feller(classical_unit(), 1e-12).unwrap();
        for &t in &[0.5, 1.0, 2.0] {
            let one = spec.cf(1.0, t).unwrap();
            let two = spec.cf(2.0, t).unwrap();
            assert!((two - one * one).norm() < 1e-14);
        }
    }

    #[test]
    fn levy_tail_examples() {
        let params = classical_unit();
        close(levy_tail(&params, 1.0, 2.0).unwrap(), 2f64.ln(), 1e-14);
        assert!(levy_tail(&params, 1.0, 0.0).is_err());
        assert!(levy_tail(&params, 0.0, 1.0).is_err());
    }

    #[test]
    fn levy_tail_matches_quadrature_and_closed_form() {
        let params = classical_unit();
        let (p, q, s, r) = (params.p(), params.q(), params.s(), params.r());
        let a = 1.7;
        // quadrature oracle: ~50 Gauss nodes per interval (4 GL15 panels),
        // over intervals up to k = 60 (the rest is bounded by q^61/a)
        let oracle = |x: f64| -> f64 {
            let mut total = 0.0;
            for k in -8i32..=60 {
                let lo = (s * r.powi(k - 1)).max(x);
                let hi = s * r.powi(k);
                if lo >= hi {
                    continue;
                }
                let dens = |y: f64| Complex::new(q.powi(k) / (a * y), 0.0);
                let h = (hi - lo) / 4.0;
                for i in 0..4 {
                    total += crate::quad::gl15(&dens, lo + i as f64 * h, lo + (i + 1) as f64 * h).re;
                }
            }
            total
        };
        for k in -5i32..=5 {
            for &frac in &[0.05, 0.3, 0.7, 0.95] {
                let x = s * r.powi(k - 1) * (1.0 + frac * (r - 1.0));
                let got = levy_tail(&params, a, x).unwrap();
                close(got, oracle(x), 1e-10);
                // closed form on qs < y < s
                let y = x / r.powi(k);
                if y > q * s && y < s {
                    let want = q.powi(k) / a * ((q / p) * r.ln() - (y / s).ln());
                    close(got, want, 1e-12);
                }
            }
        }
    }

    #[test]
    fn levy_tail_continuity_and_monotonicity() {
        let params = classical_unit();
        let a = 1.0;
        for k in -5i32..=5 {
            let x = params.s() * params.r().powi(k);
            let below = levy_tail(&params, a, x * (1.0 - 1e-12)).unwrap();
            let at = levy_tail(&params, a, x).unwrap();
            let above = levy_tail(&params, a, x * (1.0 + 1e-12)).unwrap();
            // the density reaches q^{-5} = 32, so a 1e-12 nudge moves the
            // tail by up to ~3e-11
            assert!((below - at).abs() < 1e-10);
            assert!((above - at).abs() < 1e-10);
        }
        let mut prev = f64::INFINITY;
        for i in 1..200 {
            let x = 0.05 * i as f64;
            let v = levy_tail(&params, a, x).unwrap();
            assert!(v <= prev + 1e-14);
            prev = v;
        }
        assert!(levy_tail(&params, a, 1e9).unwrap() < 1e-8);
    }

    #[test]
    fn ruin_approximation() {
        let params = classical_unit();
        let got = ruin_probability_approx(&params, 1.2, 10).unwrap();
        let x: f64 = 1.0 / (0.5 * 1.44);
        let want = (2.0 * 2f64.ln() - x.ln()) / (1.2 * 1024.0);
        close(got, want, 1e-16);
        close(got, 8.608e-4, 5e-7);
        // scaling in n
        let r11 = ruin_probability_approx(&params, 1.2, 11).unwrap();
        close(r11 / got, 0.5, 1e-12);
        // a = 1/sqrt(qr) puts x = r exactly: outside the open interval
        assert!(ruin_probability_approx(&params, 1.0, 10).is_err());
        let err = ruin_probability_approx(&params, 2.0, 10).unwrap_err();
        let msg = format!("{err}");
        assert!(msg.contains("admissible"), "{msg}");
    }

    #[test]
    fn discounted_mean() {
        let params = classical_unit();
        close(discounted_value_mean(&params, 0.5).unwrap(), 1.0, 1e-15);
        close(discounted_value_mean(&params, 0.9).unwrap(), 9.0, 1e-12);
        // series oracle
        let series: f64 = (1..600)
            .map(|k| 0.9f64.powi(k) * 2.0 * 2f64.powi(k - 1) * 0.5 * 0.5f64.powi(k - 1))
            .sum();
        close(discounted_value_mean(&params, 0.9).unwrap(), series, 1e-9);
        assert!(discounted_value_mean(&params, 1.0).is_err());
        assert!(discounted_value_mean(&params, 0.0).is_err());
    }

    #[test]
    fn deviation_limits() {
        close(deviation_limit_polynomial(2.0).unwrap(), -1.0, 0.0);
        close(deviation_limit_polynomial(1.5).unwrap(), -0.5, 0.0);
        assert!(deviation_limit_polynomial(1.0).is_err());
        let params = classical_unit();
        close(deviation_limit_geometric(&params, 2.0).unwrap(), -1.0, 1e-15);
        assert!(deviation_limit_geometric(&params, 0.9).is_err());
    }

    #[test]
    fn schedules() {
        let params = classical_unit();
        let sched = CenteringSchedule::feller(&params, 10, 1.0).unwrap();
        assert_eq!(sched.count, 1024);
        close(sched.big_n, 1024.0, 0.0);
        close(sched.center, 1.0 * 1024.0 * 10.0, 0.0);
        close(sched.statistic(11264.0), 1.0, 1e-12);

        let heavy = GameParams::new(0.4, 1.0, 2.0).unwrap();
        let sched = CenteringSchedule::heavy(&heavy, 10, 1.0).unwrap();
        assert_eq!(sched.count, (0.6f64.powi(-10)).floor() as u64);
        close(sched.scale, 1024.0, 0.0);
        assert_eq!(sched.center, 0.0);
        assert!(CenteringSchedule::feller(&heavy, 10, 1.0).is_err());
        assert!(CenteringSchedule::heavy(&params, 10, 1.0).is_err());
    }
}
