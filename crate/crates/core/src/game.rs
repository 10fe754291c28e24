//! Exact model formulas for the payoff law `P(X = s·r^{k-1}) = p·q^{k-1}`:
//! pmf, tail, moments, truncated means, the integrated tail, and small-`n`
//! brute-force distributions used as oracles elsewhere.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Parameter regime, split on the product `r·q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `rq < 1`: the payoff has a finite mean and the strong law applies.
    FiniteMean,
    /// `rq = 1` (within [`Scalar::regime_tol`]): the Feller-normalization regime.
    Feller,
    /// `rq > 1`.
    Heavy,
}

/// Moment exponent `beta > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentOrder<F> {
    beta: F,
}

impl<F: Scalar> MomentOrder<F> {
    pub fn new(beta: F) -> Result<Self> {
        if !(beta > F::zero()) || !beta.is_finite() {
            return Err(Error::domain(format!(
                "moment order beta must be a positive real, got {beta}"
            )));
        }
        Ok(MomentOrder { beta })
    }

    pub fn beta(&self) -> F {
        self.beta
    }
}

/// A value on the extended real line; moments of the payoff may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Extended<F> {
    Finite(F),
    Infinite,
}

impl<F: Scalar> Extended<F> {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Extended::Infinite)
    }

    pub fn finite(&self) -> Option<F> {
        match self {
            Extended::Finite(v) => Some(*v),
            Extended::Infinite => None,
        }
    }
}

/// Finitely supported distribution used as a brute-force oracle; the mass
/// beyond the enumeration cap is carried explicitly, never dropped.
#[derive(Debug, Clone)]
pub struct ExactDistribution<F> {
    pub atoms: Vec<(F, F)>,
    pub truncation_mass: F,
}

impl<F: Scalar> ExactDistribution<F> {
    pub fn mean(&self) -> F {
        self.atoms.iter().map(|&(v, p)| v * p).sum()
    }

    pub fn total_mass(&self) -> F {
        self.atoms.iter().map(|&(_, p)| p).sum::<F>() + self.truncation_mass
    }

    /// CDF of the enumerated part at `x` (the truncated mass sits above).
    pub fn cdf(&self, x: F) -> F {
        self.atoms
            .iter()
            .take_while(|&&(v, _)| v <= x)
            .map(|&(_, p)| p)
            .sum()
    }
}

/// Enumeration cap used by brute-force helpers when the caller does not
/// pick one; the discarded mass `q^64` is reported alongside the atoms.
pub const DEFAULT_K_CAP: u32 = 64;

/// The tuple `(p, q, s, r)` with `q = 1 - p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GameParams<F = f64> {
    p: F,
    q: F,
    s: F,
    r: F,
}

impl<F: Scalar> GameParams<F> {
    pub fn new(p: F, s: F, r: F) -> Result<Self> {
        if !(p > F::zero() && p < F::one()) || !p.is_finite() {
            return Err(Error::domain(format!("p must lie in (0, 1), got {p}")));
        }
        if !(s > F::zero()) || !s.is_finite() {
            return Err(Error::domain(format!("s must be positive, got {s}")));
        }
        if !(r > F::zero()) || !r.is_finite() {
            return Err(Error::domain(format!("r must be positive, got {r}")));
        }
        Ok(GameParams { p, q: F::one() - p, s, r })
    }

    /// Parameters on the boundary `r = 1/q`.
    pub fn feller(p: F, s: F) -> Result<Self> {
        let q = F::one() - p;
        Self::new(p, s, q.recip())
    }

    /// The classical game: fair coin, payoff `2^k`.
    pub fn classical() -> Self {
        Self::new(F::of(0.5), F::of(2.0), F::of(2.0)).expect("classical parameters are valid")
    }

    pub fn p(&self) -> F {
        self.p
    }

    pub fn q(&self) -> F {
        self.q
    }

    pub fn s(&self) -> F {
        self.s
    }

    pub fn r(&self) -> F {
        self.r
    }

    /// `s·p`, the Feller-law limit constant.
    pub fn sp(&self) -> F {
        self.s * self.p
    }

    pub fn regime(&self) -> Regime {
        let rq = self.r * self.q;
        if (rq - F::one()).abs() <= F::regime_tol() {
            Regime::Feller
        } else if rq < F::one() {
            Regime::FiniteMean
        } else {
            Regime::Heavy
        }
    }

    /// Logarithm relative to base `r`.
    pub fn log_r(&self, y: F) -> F {
        y.ln() / self.r.ln()
    }

    /// Payoff at duration `k`: `s·r^{k-1}`, built by the same multiplication
    /// chain as `floor_payoff_index` so lattice comparisons are bit-exact.
    pub fn payoff_value(&self, k: u32) -> F {
        let mut v = self.s;
        for _ in 1..k {
            v = v * self.r;
        }
        v
    }

    /// Largest `m >= 0` with `s·r^m <= x`, i.e. the integer part of
    /// `log_r(x/s)`; `None` when `x < s`. Found by integer search on the
    /// powers of `r` because a floating logarithm is off by one ulp at the
    /// lattice points `x = s·r^k`. Requires `r > 1`.
    pub fn floor_payoff_index(&self, x: F) -> Option<u64> {
        if !(x >= self.s) {
            return None;
        }
        let mut v = self.s;
        let mut m = 0u64;
        loop {
            let next = v * self.r;
            if next.is_finite() && next <= x {
                v = next;
                m += 1;
            } else {
                return Some(m);
            }
        }
    }

    /// `(s·r^{k-1}, p·q^{k-1})`.
    pub fn pmf(&self, k: u32) -> Result<(F, F)> {
        if k < 1 {
            return Err(Error::domain(format!("pmf index k must be >= 1, got {k}")));
        }
        Ok((self.payoff_value(k), self.p * self.q.powi(k as i32 - 1)))
    }

    /// `P(X > x)`: `q^{floor(log_r(x/s)) + 1}` for `x >= s` when the
    /// lattice ascends (`r > 1`), `1` below the support. With `r < 1` the
    /// lattice descends toward 0 and the tail below `s` is the complement
    /// `1 - q^K` over the `K` atoms above `x`; with `r = 1` all mass sits
    /// at `s`. Right-continuous, with `P(X > s·r^{k-1}) = q^k` for `r > 1`.
    pub fn tail(&self, x: F) -> F {
        if x < self.s {
            if self.r >= F::one() || x <= F::zero() {
                return F::one();
            }
            // atoms s·r^{k-1} > x for k = 1..=K
            let mut v = self.s;
            let mut count = 0i32;
            while v > x && v > F::min_positive_value() && count < 100_000 {
                v = v * self.r;
                count += 1;
            }
            return F::one() - self.q.powi(count);
        }
        if self.r <= F::one() {
            // every payoff is at most s
            return F::zero();
        }
        match self.floor_payoff_index(x) {
            Some(m) => {
                if m >= i32::MAX as u64 {
                    F::zero()
                } else {
                    self.q.powi(m as i32 + 1)
                }
            }
            None => F::one(),
        }
    }

    /// `E X^beta`: `s^beta·p/(1 - r^beta·q)` when `r^beta·q < 1`, infinite
    /// otherwise.
    pub fn moment(&self, order: MomentOrder<F>) -> Extended<F> {
        let growth = self.r.powf(order.beta) * self.q;
        if growth < F::one() {
            Extended::Finite(self.s.powf(order.beta) * self.p / (F::one() - growth))
        } else {
            Extended::Infinite
        }
    }

    /// Exact truncated mean `E[X·1{X <= x}]`, summed over the supported
    /// atoms; `0` below an ascending lattice's scale `s`.
    pub fn truncated_mean(&self, x: F) -> F {
        if self.r < F::one() {
            // finite mean; remove the K atoms above x
            let full = self.s * self.p / (F::one() - self.r * self.q);
            if x >= self.s {
                return full;
            }
            if x <= F::zero() {
                return F::zero();
            }
            let mut v = self.s;
            let mut count = 0i32;
            while v > x && v > F::min_positive_value() && count < 100_000 {
                v = v * self.r;
                count += 1;
            }
            return full * (self.r * self.q).powi(count);
        }
        if x < self.s {
            return F::zero();
        }
        if self.r <= F::one() {
            return self.s; // constant payoff: every atom equals s
        }
        let m = match self.floor_payoff_index(x) {
            Some(m) => m,
            None => return F::zero(),
        };
        // terms s·r^{k-1}·p·q^{k-1} for k = 1..=m+1
        let mut total = F::zero();
        let mut value = self.s;
        let mut prob = self.p;
        for i in 0..=m {
            total = total + value * prob;
            if i < m {
                value = value * self.r;
                prob = prob * self.q;
            }
        }
        total
    }

    /// The asymptotic comparator `s·p·log_r(x/s)` for the truncated mean in
    /// the `rq = 1` regime.
    pub fn truncated_mean_asymptote(&self, x: F) -> F {
        self.sp() * self.log_r(x / self.s)
    }

    /// Integrated tail `mu(x) = ∫_0^x P(X > y) dy`, evaluated exactly from
    /// the piecewise-constant tail.
    pub fn mu(&self, x: F) -> Result<F> {
        if !(x >= F::zero()) {
            return Err(Error::domain(format!("mu requires x >= 0, got {x}")));
        }
        if x == F::zero() {
            return Ok(F::zero());
        }
        if self.r < F::one() {
            // tail vanishes above s, so mu saturates at the (finite) mean;
            // below s integrate the complement over the K pieces in [x, s)
            let full = self.s * self.p / (F::one() - self.r * self.q);
            if x >= self.s {
                return Ok(full);
            }
            let mut upper = F::zero(); // ∫_x^s tail
            let mut hi = self.s;
            let mut qk = self.q;
            // multiplying the smallest subnormal by r in [1/2, 1) rounds
            // back to itself, so a plain `hi > x` never ends at x = 0
            while hi > x && hi > F::min_positive_value() {
                let lo = (hi * self.r).max(x);
                upper = upper + (F::one() - qk) * (hi - lo);
                hi = hi * self.r;
                qk = qk * self.q;
            }
            return Ok(full - upper);
        }
        if x <= self.s {
            return Ok(x);
        }
        if self.r <= F::one() {
            return Ok(self.s);
        }
        // tail = q^k on [s·r^{k-1}, s·r^k)
        let mut total = self.s;
        let mut lo = self.s;
        let mut qk = self.q;
        loop {
            let hi = lo * self.r;
            if hi.is_finite() && hi < x {
                total = total + qk * (hi - lo);
                lo = hi;
                qk = qk * self.q;
            } else {
                total = total + qk * (x - lo);
                return Ok(total);
            }
        }
    }

    /// Exact law of `S_n` restricted to durations `<= k_cap` per game; the
    /// discarded probability `1 - (1 - q^k_cap)^n` rides along explicitly.
    pub fn exact_sum_distribution(&self, n: u32, k_cap: u32) -> Result<ExactDistribution<F>> {
        if n == 0 || k_cap == 0 {
            return Err(Error::domain(format!(
                "exact_sum_distribution requires n >= 1 and k_cap >= 1, got n={n}, k_cap={k_cap}"
            )));
        }
        if n > 6 || k_cap > 20 {
            return Err(Error::resource(format!(
                "exact_sum_distribution enumeration bound exceeded (n <= 6, k_cap <= 20), got n={n}, k_cap={k_cap}"
            )));
        }
        let single: Vec<(F, F)> = (1..=k_cap)
            .map(|k| self.pmf(k).expect("k >= 1"))
            .collect();
        let mut atoms = single.clone();
        for _ in 1..n {
            let mut next: Vec<(F, F)> = Vec::with_capacity(atoms.len() * single.len());
            for &(v, pv) in &atoms {
                for &(w, pw) in &single {
                    next.push((v + w, pv * pw));
                }
            }
            atoms = merge_atoms(next);
        }
        if n == 1 {
            atoms = merge_atoms(atoms);
        }
        let kept = F::one() - self.q.powi(k_cap as i32);
        let truncation_mass = F::one() - kept.powi(n as i32);
        Ok(ExactDistribution { atoms, truncation_mass })
    }

    /// `P(M_n <= x) = (1 - P(X > x))^n` for the maximum of `n` payoffs.
    pub fn exact_max_cdf(&self, n: u64, x: F) -> Result<F> {
        if n < 1 {
            return Err(Error::domain("exact_max_cdf requires n >= 1".to_string()));
        }
        let t = self.tail(x);
        Ok(pow_u64(F::one() - t, n))
    }

    /// `P(M_n > x) = 1 - (1 - tail)^n`, computed through `ln_1p`/`exp_m1`
    /// so tiny tails do not round to zero.
    pub fn exact_max_tail(&self, n: u64, x: F) -> Result<F> {
        if n < 1 {
            return Err(Error::domain("exact_max_tail requires n >= 1".to_string()));
        }
        let t = self.tail(x);
        if t >= F::one() {
            return Ok(F::one());
        }
        Ok(-((F::of_u64(n) * (-t).ln_1p()).exp_m1()))
    }
}

fn pow_u64<F: Scalar>(base: F, mut n: u64) -> F {
    let mut acc = F::one();
    let mut b = base;
    while n > 0 {
        if n & 1 == 1 {
            acc = acc * b;
        }
        b = b * b;
        n >>= 1;
    }
    acc
}

/// Sort and coalesce atoms whose values agree up to a few ulps; different
/// addition orders of the same payoff multiset may differ in the last bit.
fn merge_atoms<F: Scalar>(mut atoms: Vec<(F, F)>) -> Vec<(F, F)> {
    atoms.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite atom values"));
    let rel = F::of(32.0) * F::epsilon();
    let mut out: Vec<(F, F)> = Vec::with_capacity(atoms.len());
    for (v, p) in atoms {
        match out.last_mut() {
            Some(last) if (v - last.0).abs() <= rel * v.abs() => last.1 = last.1 + p,
            _ => out.push((v, p)),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "expected {b}, got {a} (tol {tol})");
    }

    #[test]
    fn pmf_matches_the_law() {
        let classical = GameParams::<f64>::classical();
        let (v, p) = classical.pmf(3).unwrap();
        assert_eq!(v, 8.0);
        assert_eq!(p, 0.125);

        let constant = GameParams::new(0.3, 1.0, 1.0).unwrap();
        let (v, p) = constant.pmf(5).unwrap();
        assert_eq!(v, 1.0);
        close(p, 0.3 * 0.7f64.powi(4), 1e-15);

        let g = GameParams::new(1.0 / 3.0, 3.0, 1.5).unwrap();
        let (v, p) = g.pmf(2).unwrap();
        close(v, 4.5, 1e-15);
        close(p, 2.0 / 9.0, 1e-15);
    }

    #[test]
    fn pmf_rejects_k_zero() {
        assert!(GameParams::<f64>::classical().pmf(0).is_err());
    }

    #[test]
    fn tail_examples() {
        let classical = GameParams::<f64>::classical();
        close(classical.tail(2.0), 0.5, 0.0);
        assert_eq!(classical.tail(1.0), 1.0);

        let g = GameParams::new(0.4, 1.0, 2.0).unwrap();
        close(g.tail(10.0), 0.6f64.powi(4), 1e-15);
    }

    #[test]
    fn tail_is_strictly_greater_at_lattice_points() {
        let g = GameParams::new(0.4, 1.5, 2.0).unwrap();
        for k in 1..12u32 {
            let x = g.payoff_value(k);
            close(g.tail(x), 0.6f64.powi(k as i32), 1e-15);
        }
    }

    #[test]
    fn tail_agrees_with_pmf_summation() {
        let g = GameParams::new(0.35, 0.7, 1.8).unwrap();
        for &x in &[0.5, 0.7, 1.0, 1.26, 5.0, 123.4] {
            let direct: f64 = (1..200)
                .map(|k| g.pmf(k).unwrap())
                .filter(|&(v, _)| v > x)
                .map(|(_, p)| p)
                .sum();
            close(g.tail(x), direct, 1e-13);
        }
    }

    #[test]
    fn moments() {
        let g = GameParams::new(2.0 / 3.0, 1.0, 2.0).unwrap();
        let m1 = g.moment(MomentOrder::new(1.0).unwrap());
        close(m1.finite().unwrap(), 2.0, 1e-12);

        let classical = GameParams::<f64>::classical();
        assert!(classical.moment(MomentOrder::new(1.0).unwrap()).is_infinite());

        let half = classical.moment(MomentOrder::new(0.5).unwrap());
        // series oracle: sum until the geometric remainder is negligible
        let g2 = GameParams::<f64>::new(0.5, 1.0, 2.0).unwrap();
        let oracle: f64 = (1..400)
            .map(|k| {
                let (v, p) = g2.pmf(k).unwrap();
                v.sqrt() * p
            })
            .sum();
        let expected = 2f64.sqrt() * oracle; // s = 2 scales by sqrt(2)
        close(half.finite().unwrap(), expected, 1e-10);
        close(half.finite().unwrap() / 2f64.sqrt(), 0.5 / (1.0 - 2f64.sqrt() / 2.0), 1e-9);
    }

    #[test]
    fn truncated_mean_examples() {
        let g = GameParams::new(0.5, 1.0, 2.0).unwrap();
        close(g.truncated_mean(8.0), 2.0, 1e-14);
        assert_eq!(g.truncated_mean(0.5), 0.0);
        close(g.truncated_mean_asymptote(8.0), 1.5, 1e-14);
    }

    #[test]
    fn truncated_mean_plus_upper_part_recovers_the_mean() {
        let g = GameParams::new(0.7, 1.3, 1.2).unwrap();
        assert_eq!(g.regime(), Regime::FiniteMean);
        let mean = g.moment(MomentOrder::new(1.0).unwrap()).finite().unwrap();
        let x = 40.0;
        let upper: f64 = (1..600)
            .map(|k| g.pmf(k).unwrap())
            .filter(|&(v, _)| v > x)
            .map(|(v, p)| v * p)
            .sum();
        close(g.truncated_mean(x) + upper, mean, 1e-10);
    }

    #[test]
    fn mu_examples() {
        let g = GameParams::new(0.5, 1.0, 2.0).unwrap();
        assert_eq!(g.mu(0.0).unwrap(), 0.0);
        close(g.mu(1.0).unwrap(), 1.0, 0.0);
        close(g.mu(2.0).unwrap(), 1.5, 1e-15);
        assert!(g.mu(-1.0).is_err());
    }

    #[test]
    fn mu_slope_matches_tail_between_lattice_points() {
        let g = GameParams::new(0.45, 0.8, 2.2).unwrap();
        for &x in &[1.1, 2.0, 3.5, 7.9, 30.0] {
            let h = 1e-6;
            let slope = (g.mu(x + h).unwrap() - g.mu(x - h).unwrap()) / (2.0 * h);
            close(slope, g.tail(x), 1e-6);
        }
    }

    #[test]
    fn exact_sum_single_game() {
        let g = GameParams::classical();
        let d = g.exact_sum_distribution(1, 3).unwrap();
        assert_eq!(d.atoms.len(), 3);
        assert_eq!(d.atoms[0], (2.0, 0.5));
        assert_eq!(d.atoms[1], (4.0, 0.25));
        assert_eq!(d.atoms[2], (8.0, 0.125));
        close(d.truncation_mass, 0.125, 1e-15);
        close(d.total_mass(), 1.0, 1e-12);
    }

    #[test]
    fn exact_sum_mean_is_bounded_by_linearity() {
        let g = GameParams::classical();
        let d = g.exact_sum_distribution(2, 12).unwrap();
        let cap = g.payoff_value(12);
        assert!(d.mean() <= 2.0 * g.truncated_mean(cap) + 1e-12);
        close(d.total_mass(), 1.0, 1e-12);
        // values strictly increasing
        for w in d.atoms.windows(2) {
            assert!(w[0].0 < w[1].0);
        }
    }

    #[test]
    fn exact_sum_bounds() {
        let g = GameParams::<f64>::classical();
        assert!(matches!(g.exact_sum_distribution(0, 3), Err(Error::Domain(_))));
        assert!(matches!(g.exact_sum_distribution(7, 3), Err(Error::Resource(_))));
        assert!(matches!(g.exact_sum_distribution(2, 21), Err(Error::Resource(_))));
    }

    #[test]
    fn exact_max_cdf_examples() {
        let g = GameParams::classical();
        let x = 3.7;
        close(g.exact_max_cdf(1, x).unwrap(), 1.0 - g.tail(x), 1e-15);
        close(g.exact_max_cdf(2, 2.0).unwrap(), 0.25, 1e-15);
    }

    #[test]
    fn max_tail_sandwich_on_grid() {
        let g = GameParams::classical();
        for n in [4u64, 16, 256, 4096] {
            for &x in &[64.0, 1024.0, 65536.0, 2f64.powi(30)] {
                let t = g.tail(x);
                if n as f64 * t <= 0.5 {
                    let p = g.exact_max_tail(n, x).unwrap();
                    assert!(p <= n as f64 * t * (1.0 + 1e-12));
                    assert!(p >= 0.5 * n as f64 * t);
                }
            }
        }
    }

    #[test]
    fn descending_lattice_tail_and_means() {
        // r < 1: the payoff lattice descends toward 0
        let g = GameParams::new(0.2, 0.5, 0.625).unwrap();
        assert_eq!(g.regime(), Regime::FiniteMean);
        assert_eq!(g.tail(0.5), 0.0);
        assert_eq!(g.tail(0.7), 0.0);
        for &x in &[0.4, 0.2, 0.05, 0.001] {
            let direct: f64 = (1..4000)
                .map(|k| g.pmf(k).unwrap())
                .filter(|&(v, _)| v > x)
                .map(|(_, p)| p)
                .sum();
            close(g.tail(x), direct, 1e-13);
        }
        let mean = g.moment(MomentOrder::new(1.0).unwrap()).finite().unwrap();
        close(g.truncated_mean(0.5), mean, 1e-14);
        let upper: f64 = (1..4000)
            .map(|k| g.pmf(k).unwrap())
            .filter(|&(v, _)| v > 0.2)
            .map(|(v, p)| v * p)
            .sum();
        close(g.truncated_mean(0.2) + upper, mean, 1e-13);
        // mu saturates at the mean and integrates the complement below s
        close(g.mu(0.5).unwrap(), mean, 1e-13);
        close(g.mu(10.0).unwrap(), mean, 1e-13);
        let h = 1e-7;
        for &x in &[0.3, 0.11] {
            let slope = (g.mu(x + h).unwrap() - g.mu(x - h).unwrap()) / (2.0 * h);
            close(slope, g.tail(x), 1e-5);
        }
        assert_eq!(g.mu(0.0).unwrap(), 0.0);
    }

    #[test]
    fn regimes() {
        assert_eq!(GameParams::new(0.5, 1.0, 1.9).unwrap().regime(), Regime::FiniteMean);
        assert_eq!(GameParams::<f64>::classical().regime(), Regime::Feller);
        assert_eq!(GameParams::<f64>::feller(0.4, 1.0).unwrap().regime(), Regime::Feller);
        assert_eq!(GameParams::new(0.4, 1.0, 2.0).unwrap().regime(), Regime::Heavy);
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(GameParams::new(0.0, 1.0, 2.0).is_err());
        assert!(GameParams::new(1.0, 1.0, 2.0).is_err());
        assert!(GameParams::new(0.5, 0.0, 2.0).is_err());
        assert!(GameParams::new(0.5, 1.0, -2.0).is_err());
        assert!(GameParams::new(f64::NAN, 1.0, 2.0).is_err());
    }

    #[test]
    fn formulas_instantiate_at_f32() {
        let g = GameParams::<f32>::new(0.5, 2.0, 2.0).unwrap();
        assert_eq!(g.regime(), Regime::Feller);
        assert_eq!(g.pmf(3).unwrap(), (8.0f32, 0.125));
        assert!((g.tail(2.0) - 0.5).abs() < 1e-6);
        assert!((g.mu(2.0).unwrap() - 2.0).abs() < 1e-5);
        assert!(g.moment(MomentOrder::new(1.0).unwrap()).is_infinite());
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn tail_always_matches_pmf_summation(
                p in 0.05f64..0.95,
                r in 1.05f64..3.0,
                s in 0.1f64..4.0,
                mult in 0.2f64..200.0,
            ) {
                let g = GameParams::new(p, s, r).unwrap();
                let x = s * mult;
                let direct: f64 = (1..3000)
                    .map(|k| g.pmf(k).unwrap())
                    .take_while(|&(_, pr)| pr > 1e-19)
                    .filter(|&(v, _)| v > x)
                    .map(|(_, pr)| pr)
                    .sum();
                prop_assert!((g.tail(x) - direct).abs() < 1e-13);
            }

            #[test]
            fn mu_is_nondecreasing(
                p in 0.05f64..0.95,
                r in 1.05f64..3.0,
                s in 0.1f64..4.0,
                x in 0.0f64..50.0,
                dx in 1e-6f64..5.0,
            ) {
                let g = GameParams::new(p, s, r).unwrap();
                let lo = g.mu(x).unwrap();
                let hi = g.mu(x + dx).unwrap();
                prop_assert!(hi >= lo - 1e-12);
                // slope of the integrated tail never exceeds 1
                prop_assert!(hi - lo <= dx * (1.0 + 1e-12));
            }
        }
    }
}
