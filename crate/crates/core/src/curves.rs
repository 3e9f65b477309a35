//! Weierstrass curves `w·y² = x³ + a2·x² + a4·x + a6` over Q and Q(t):
//! invariants, the group law, torsion probing and traces of Frobenius.

use std::fmt::{self, Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::algebra::modu;
use crate::error::{Error, Result};
use crate::poly::{QPoly, RatFunc};

/// Field operations shared by Q and Q(t).
pub trait Field: Clone + PartialEq + Debug + Display {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    fn from_rat(q: BigRational) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Option<Self>;
    fn neg(&self) -> Self;
}

impl Field for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn from_rat(q: BigRational) -> Self {
        q
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Option<Self> {
        if Zero::is_zero(o) {
            None
        } else {
            Some(self / o)
        }
    }
    fn neg(&self) -> Self {
        -self
    }
}

impl Field for RatFunc {
    fn zero() -> Self {
        RatFunc::from_poly(QPoly::zero())
    }
    fn one() -> Self {
        RatFunc::from_poly(QPoly::one())
    }
    fn from_i64(n: i64) -> Self {
        RatFunc::constant(BigRational::from_integer(BigInt::from(n)))
    }
    fn from_rat(q: BigRational) -> Self {
        RatFunc::constant(q)
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        RatFunc::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        RatFunc::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        RatFunc::mul(self, o)
    }
    fn div(&self, o: &Self) -> Option<Self> {
        RatFunc::div(self, o)
    }
    fn neg(&self) -> Self {
        RatFunc::neg(self)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Curve<K: Field> {
    pub a2: K,
    pub a4: K,
    pub a6: K,
    pub twist: K,
}

pub type QCurve = Curve<BigRational>;

#[derive(Debug, Clone, PartialEq)]
pub struct CurveInvariants<K: Field> {
    pub c4: K,
    pub c6: K,
    pub disc: K,
    pub j: Option<K>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Point<K: Field> {
    Infinity,
    Affine(K, K),
}

impl<K: Field> Point<K> {
    pub fn affine(x: K, y: K) -> Self {
        Point::Affine(x, y)
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }
}

impl<K: Field> Display for Point<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Infinity => write!(f, "O"),
            Point::Affine(x, y) => write!(f, "({x}, {y})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TorsionProbe {
    Order(u32),
    NonTorsion,
}

impl<K: Field> Curve<K> {
    pub fn new(a2: K, a4: K, a6: K) -> Self {
        Curve { a2, a4, a6, twist: K::one() }
    }

    pub fn twisted(a2: K, a4: K, a6: K, twist: K) -> Result<Self> {
        if twist.is_zero() {
            return Err(Error::InvalidParameter("twist must be nonzero".into()));
        }
        Ok(Curve { a2, a4, a6, twist })
    }

    pub fn is_twisted(&self) -> bool {
        self.twist != K::one()
    }

    /// `y² = x³ + w·a2·x² + w²·a4·x + w³·a6`, isomorphic via `(x, y) ↦ (wx, w²y)`.
    pub fn untwisted(&self) -> Curve<K> {
        let w = &self.twist;
        let w2 = w.mul(w);
        Curve::new(self.a2.mul(w), self.a4.mul(&w2), self.a6.mul(&w2.mul(w)))
    }

    pub fn invariants(&self) -> CurveInvariants<K> {
        let c = self.untwisted();
        let n = |x: i64| K::from_i64(x);
        let a2sq = c.a2.mul(&c.a2);
        let c4 = n(16).mul(&a2sq.sub(&n(3).mul(&c.a4)));
        let c6 = n(32).mul(
            &n(-2).mul(&a2sq.mul(&c.a2)).add(&n(9).mul(&c.a2).mul(&c.a4)).sub(&n(27).mul(&c.a6)),
        );
        let c4cube = c4.mul(&c4).mul(&c4);
        let disc = c4cube.sub(&c6.mul(&c6)).div(&n(1728)).unwrap();
        let j = c4cube.div(&disc);
        CurveInvariants { c4, c6, disc, j }
    }

    pub fn is_singular(&self) -> bool {
        self.invariants().disc.is_zero()
    }

    /// Right-hand side `x³ + a2·x² + a4·x + a6`.
    pub fn rhs(&self, x: &K) -> K {
        x.mul(x).mul(x).add(&self.a2.mul(x).mul(x)).add(&self.a4.mul(x)).add(&self.a6)
    }

    pub fn contains(&self, p: &Point<K>) -> bool {
        match p {
            Point::Infinity => true,
            Point::Affine(x, y) => self.twist.mul(y).mul(y) == self.rhs(x),
        }
    }

    fn to_untwisted(&self, p: &Point<K>) -> Point<K> {
        match p {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, y) => {
                let w = &self.twist;
                Point::Affine(x.mul(w), y.mul(&w.mul(w)))
            }
        }
    }

    fn from_untwisted(&self, p: Point<K>) -> Point<K> {
        match p {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, y) => {
                let w = &self.twist;
                Point::Affine(x.div(w).unwrap(), y.div(&w.mul(w)).unwrap())
            }
        }
    }

    pub fn neg_point(&self, p: &Point<K>) -> Point<K> {
        match p {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, y) => Point::Affine(x.clone(), y.neg()),
        }
    }

    pub fn add(&self, p: &Point<K>, q: &Point<K>) -> Result<Point<K>> {
        if !self.contains(p) || !self.contains(q) {
            return Err(Error::OffCurve);
        }
        if self.is_twisted() {
            let u = self.untwisted();
            let r = u.add_unchecked(&self.to_untwisted(p), &self.to_untwisted(q));
            return Ok(self.from_untwisted(r));
        }
        Ok(self.add_unchecked(p, q))
    }

    pub fn double(&self, p: &Point<K>) -> Result<Point<K>> {
        self.add(p, p)
    }

    /// `n·P` by double-and-add; `n ≥ 0`.
    pub fn mul(&self, p: &Point<K>, n: u32) -> Result<Point<K>> {
        if !self.contains(p) {
            return Err(Error::OffCurve);
        }
        let (c, base) = if self.is_twisted() { (self.untwisted(), self.to_untwisted(p)) } else { (self.clone(), p.clone()) };
        let mut acc = Point::Infinity;
        let mut b = base;
        let mut m = n;
        while m > 0 {
            if m & 1 == 1 {
                acc = c.add_unchecked(&acc, &b);
            }
            b = c.add_unchecked(&b, &b);
            m >>= 1;
        }
        Ok(if self.is_twisted() { self.from_untwisted(acc) } else { acc })
    }

    fn add_unchecked(&self, p: &Point<K>, q: &Point<K>) -> Point<K> {
        let (x1, y1, x2, y2) = match (p, q) {
            (Point::Infinity, _) => return q.clone(),
            (_, Point::Infinity) => return p.clone(),
            (Point::Affine(x1, y1), Point::Affine(x2, y2)) => (x1, y1, x2, y2),
        };
        let lambda = if x1 == x2 {
            if y1.add(y2).is_zero() {
                return Point::Infinity;
            }
            let num = K::from_i64(3).mul(x1).mul(x1).add(&K::from_i64(2).mul(&self.a2).mul(x1)).add(&self.a4);
            num.div(&K::from_i64(2).mul(y1)).unwrap()
        } else {
            y2.sub(y1).div(&x2.sub(x1)).unwrap()
        };
        let x3 = lambda.mul(&lambda).sub(&self.a2).sub(x1).sub(x2);
        let y3 = lambda.mul(&x1.sub(&x3)).sub(y1);
        Point::Affine(x3, y3)
    }
}

impl QCurve {
    pub fn from_i64(a2: i64, a4: i64, a6: i64) -> QCurve {
        let r = |n: i64| BigRational::from_integer(BigInt::from(n));
        Curve::new(r(a2), r(a4), r(a6))
    }

    /// Integer coefficients of the untwisted model, if integral.
    pub fn integral_coeffs(&self) -> Option<[BigInt; 3]> {
        let u = self.untwisted();
        if u.a2.is_integer() && u.a4.is_integer() && u.a6.is_integer() {
            Some([u.a2.to_integer(), u.a4.to_integer(), u.a6.to_integer()])
        } else {
            None
        }
    }

    /// `a_p = −Σ_x (f(x)/p)`, and 0 when `p` divides the discriminant.
    pub fn trace_ap(&self, p: u64) -> Result<i64> {
        if p < 3 {
            return Err(Error::Unsupported("trace of Frobenius at p = 2".into()));
        }
        if !crate::algebra::is_prime_u64(p) {
            return Err(Error::NotPrime(p.to_string()));
        }
        let [a2, a4, a6] = self
            .integral_coeffs()
            .ok_or_else(|| Error::InvalidParameter("trace_ap needs an integral model".into()))?;
        let disc = self.untwisted().invariants().disc;
        if modu(disc.numer(), p) == 0 {
            return Ok(0);
        }
        let table = QrTable::new(p);
        Ok(table.trace(modu(&a2, p), modu(&a4, p), modu(&a6, p)))
    }

    /// Order of `P` if some `nP = O` with `n ≤ n_max`, else a non-torsion witness.
    pub fn torsion_probe(&self, p: &Point<BigRational>, n_max: u32) -> Result<TorsionProbe> {
        if !self.contains(p) {
            return Err(Error::OffCurve);
        }
        if self.is_singular() {
            return Err(Error::Singular("torsion probe on a singular curve".into()));
        }
        let c = self.untwisted();
        let base = self.to_untwisted(p);
        let mut acc = Point::Infinity;
        for n in 1..=n_max {
            acc = c.add_unchecked(&acc, &base);
            if acc.is_infinity() {
                return Ok(TorsionProbe::Order(n));
            }
        }
        Ok(TorsionProbe::NonTorsion)
    }
}

/// Quadratic characters modulo an odd prime, one table lookup per symbol.
#[derive(Debug, Clone)]
pub struct QrTable {
    pub p: u64,
    chi: Vec<i8>,
}

impl QrTable {
    pub fn new(p: u64) -> Self {
        let mut chi = vec![-1i8; p as usize];
        chi[0] = 0;
        for x in 1..=(p / 2) {
            chi[((x * x) % p) as usize] = 1;
        }
        QrTable { p, chi }
    }

    #[inline]
    pub fn chi(&self, x: u64) -> i8 {
        self.chi[(x % self.p) as usize]
    }

    /// `−Σ_x χ(x³ + a2x² + a4x + a6)` with reduced coefficients.
    pub fn trace(&self, a2: u64, a4: u64, a6: u64) -> i64 {
        let p = self.p;
        let mut s: i64 = 0;
        for x in 0..p {
            let f = (((x + a2) % p * x % p + a4) % p * x % p + a6) % p;
            s += self.chi[f as usize] as i64;
        }
        -s
    }
}

/// Rational from an `i64` pair.
pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> BigRational {
    q(n, 1)
}

pub fn to_f64(x: &BigRational) -> f64 {
    x.numer().to_f64().unwrap_or(f64::NAN) / x.denom().to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn washington_at_zero() {
        let c = QCurve::from_i64(0, -3, 1);
        let inv = c.invariants();
        assert_eq!(inv.c4, qi(144));
        assert_eq!(inv.c6, qi(-864));
        assert_eq!(inv.disc, qi(1296));
    }

    #[test]
    fn fs_c4() {
        // F_5 at t = 1: a2 = 3, a4 = 15, a6 = 5
        let c = QCurve::from_i64(3, 15, 5);
        assert_eq!(c.invariants().c4, qi(-576));
    }

    #[test]
    fn traces() {
        assert_eq!(QCurve::from_i64(0, 0, 1).trace_ap(5).unwrap(), 0);
        assert_eq!(QCurve::from_i64(0, -1, 0).trace_ap(3).unwrap(), 0);
        assert!(QCurve::from_i64(0, -1, 0).trace_ap(2).is_err());
    }

    #[test]
    fn group_law_basics() {
        let c = QCurve::from_i64(5, -8, 1);
        let p = Point::affine(qi(0), qi(1));
        assert_eq!(c.add(&p, &c.neg_point(&p)).unwrap(), Point::Infinity);
        assert_eq!(c.add(&p, &Point::Infinity).unwrap(), p);
        assert_eq!(c.torsion_probe(&p, 12).unwrap(), TorsionProbe::NonTorsion);
        let two = QCurve::from_i64(0, -1, 0);
        assert_eq!(two.torsion_probe(&Point::affine(qi(1), qi(0)), 12).unwrap(), TorsionProbe::Order(2));
        assert_eq!(c.add(&Point::affine(qi(0), qi(2)), &p), Err(Error::OffCurve));
    }

    #[test]
    fn twisted_doubling_matches_untwisted() {
        // 3y² = x³ + x + 1 contains (1, 1)
        let c = Curve::twisted(qi(0), qi(1), qi(1), qi(3)).unwrap();
        let p = Point::affine(qi(1), qi(1));
        let d = c.double(&p).unwrap();
        assert!(c.contains(&d));
    }
}
