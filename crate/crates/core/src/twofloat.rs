//! Compensated (double-word) arithmetic for sums whose terms grow like
//! `(rq)^n` but cancel to zero. Plain accumulation loses the result to
//! rounding once the terms pass ~1e6, so the fairness identity is summed
//! with an error-free transformation instead.

use num_traits::Float;

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Debug, Clone, Copy)]
pub struct TwoFloat<F> {
    pub hi: F,
    pub lo: F,
}

#[inline]
fn two_sum<F: Float>(a: F, b: F) -> (F, F) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn two_prod<F: Float>(a: F, b: F) -> (F, F) {
    let p = a * b;
    let err = a.mul_add(b, -p);
    (p, err)
}

impl<F: Float> TwoFloat<F> {
    pub fn zero() -> Self {
        TwoFloat {
            hi: F::zero(),
            lo: F::zero(),
        }
    }

    pub fn from_single(x: F) -> Self {
        TwoFloat { hi: x, lo: F::zero() }
    }

    pub fn add(self, other: Self) -> Self {
        let (s, e) = two_sum(self.hi, other.hi);
        let lo = e + self.lo + other.lo;
        let (hi, lo) = two_sum(s, lo);
        TwoFloat { hi, lo }
    }

    pub fn mul(self, other: Self) -> Self {
        let (p, e) = two_prod(self.hi, other.hi);
        let lo = e + self.hi * other.lo + self.lo * other.hi;
        let (hi, lo) = two_sum(p, lo);
        TwoFloat { hi, lo }
    }

    pub fn mul_single(self, x: F) -> Self {
        self.mul(TwoFloat::from_single(x))
    }

    pub fn sub(self, other: Self) -> Self {
        self.add(TwoFloat {
            hi: -other.hi,
            lo: -other.lo,
        })
    }

    pub fn div_single(self, x: F) -> Self {
        let q1 = self.hi / x;
        // remainder of the first quotient, folded back in
        let (p, e) = two_prod(q1, x);
        let r = ((self.hi - p) - e) + self.lo;
        let q2 = r / x;
        let (hi, lo) = two_sum(q1, q2);
        TwoFloat { hi, lo }
    }

    pub fn value(self) -> F {
        self.hi + self.lo
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancellation_is_exact() {
        // 1e16 + 1 - 1e16 fails in plain f64, survives in TwoFloat.
        let big = 1e16f64;
        let acc = TwoFloat::from_single(big)
            .add(TwoFloat::from_single(1.0))
            .add(TwoFloat::from_single(-big));
        assert_eq!(acc.value(), 1.0);
    }

    #[test]
    fn product_keeps_low_bits() {
        let a = 1.0 + 2f64.powi(-30);
        let acc = TwoFloat::from_single(a).mul_single(a);
        let exact = 1.0 + 2f64.powi(-29) + 2f64.powi(-60);
        assert!((acc.hi - exact).abs() <= f64::EPSILON * 2.0);
        assert!(acc.lo.abs() > 0.0);
    }

    #[test]
    fn division_round_trip() {
        let x = TwoFloat::from_single(1.0).div_single(3.0);
        let back = x.mul_single(3.0);
        assert!((back.value() - 1.0).abs() < 1e-31);
    }
}
