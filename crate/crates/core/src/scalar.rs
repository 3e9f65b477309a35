//! Floating-point scalars and closed intervals with outward rounding.

use std::fmt;
use std::ops::{Mul, Neg};

use num_rational::BigRational;
use num_traits::Float;
use serde::Serialize;

/// Any IEEE float usable for the weighted sums and certified products.
pub trait Scalar: Float + Send + Sync + fmt::Debug + fmt::Display + 'static {
    fn of_f64(x: f64) -> Self;
}

impl Scalar for f64 {
    fn of_f64(x: f64) -> Self {
        x
    }
}

impl Scalar for f32 {
    fn of_f64(x: f64) -> Self {
        x as f32
    }
}

fn down<F: Scalar>(x: F) -> F {
    x - x.abs() * F::epsilon() - F::min_positive_value()
}

fn up<F: Scalar>(x: F) -> F {
    x + x.abs() * F::epsilon() + F::min_positive_value()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval<F: Scalar> {
    pub lo: F,
    pub hi: F,
}

impl<F: Scalar> Interval<F> {
    pub fn new(lo: F, hi: F) -> Self {
        assert!(lo <= hi, "empty interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn point(x: F) -> Self {
        Interval { lo: x, hi: x }
    }

    /// An interval certainly containing the rational `q`.
    pub fn from_rational(q: &BigRational) -> Self {
        let x = F::of_f64(crate::curves::to_f64(q));
        let slack = x.abs() * F::epsilon() * F::of_f64(4.0) + F::min_positive_value();
        Interval { lo: x - slack, hi: x + slack }
    }

    pub fn width(&self) -> F {
        self.hi - self.lo
    }

    pub fn mid(&self) -> F {
        (self.lo + self.hi) / F::of_f64(2.0)
    }

    pub fn contains(&self, x: F) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(&self, o: &Interval<F>) -> bool {
        self.lo <= o.lo && o.hi <= self.hi
    }

    /// `[e^{−r}, e^{r}]`.
    pub fn exp_ball(r: F) -> Self {
        Interval { lo: down((-r).exp()), hi: up(r.exp()) }
    }
}

impl<F: Scalar> Mul for Interval<F> {
    type Output = Interval<F>;

    fn mul(self, o: Interval<F>) -> Interval<F> {
        let c = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        let lo = c.iter().copied().fold(F::infinity(), F::min);
        let hi = c.iter().copied().fold(F::neg_infinity(), F::max);
        Interval { lo: down(lo), hi: up(hi) }
    }
}

impl<F: Scalar> Neg for Interval<F> {
    type Output = Interval<F>;

    fn neg(self) -> Interval<F> {
        Interval { lo: -self.hi, hi: -self.lo }
    }
}

impl<F: Scalar> fmt::Display for Interval<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    #[test]
    fn rational_enclosure() {
        let i = Interval::<f64>::from_rational(&rat(1, 3));
        assert!(i.lo < 1.0 / 3.0 + 1e-17 && i.hi > 1.0 / 3.0 - 1e-17);
        assert!(i.width() < 1e-15);
    }

    #[test]
    fn products_track_sign() {
        let a = Interval::new(-2.0f64, 1.0);
        let b = Interval::new(3.0f64, 4.0);
        let c = a * b;
        assert!(c.contains(-8.0) && c.contains(4.0));
        assert!((-c).contains(8.0));
    }

    #[test]
    fn works_in_single_precision() {
        let a = Interval::<f32>::from_rational(&rat(2, 21));
        let b = a * Interval::exp_ball(0.01);
        assert!(b.contains(2.0 / 21.0));
    }
}
