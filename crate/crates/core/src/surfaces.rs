//! Elliptic surfaces `w·y² = x³ + a2(t)x² + a4(t)x + a6(t)` over Q(t): the
//! family catalogue, specialization and classification of bad places.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::curves::{Curve, QCurve};
use crate::error::{Error, Result};
use crate::poly::{factor_over_q, IntPoly};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "family")]
pub enum FamilyId {
    Fs { s: i64 },
    Gw { w: i64 },
    Hw { w: i64 },
    Iw { w: i64 },
    Jmw { m: i64, w: i64 },
    Lwsv { w: i64, s: i64, v: i64 },
    Wa { a: i64 },
    Va { a: i64 },
    /// `W_1^{(d)}(t) = W_d(dt)`
    W1Twist { d: i64 },
    /// `W_a†(t) = W_{a²}(2t² − 2at − a²)`
    WDagger { a: i64 },
    /// `W*_{p,a}(t) = W_{p²}(pt + a)`
    WStar { p: i64, a: i64 },
    /// `W**_{p,b}(t) = W_p(pt + b)`
    WStarStar { p: i64, b: i64 },
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FamilyId::Fs { s } => write!(f, "F_{s}"),
            FamilyId::Gw { w } => write!(f, "G_{w}"),
            FamilyId::Hw { w } => write!(f, "H_{w}"),
            FamilyId::Iw { w } => write!(f, "I_{w}"),
            FamilyId::Jmw { m, w } => write!(f, "J_{{{m},{w}}}"),
            FamilyId::Lwsv { w, s, v } => write!(f, "L_{{{w},{s},{v}}}"),
            FamilyId::Wa { a } => write!(f, "W_{a}"),
            FamilyId::Va { a } => write!(f, "V_{a}"),
            FamilyId::W1Twist { d } => write!(f, "W_1^({d})"),
            FamilyId::WDagger { a } => write!(f, "W†_{a}"),
            FamilyId::WStar { p, a } => write!(f, "W*_{{{p},{a}}}"),
            FamilyId::WStarStar { p, b } => write!(f, "W**_{{{p},{b}}}"),
        }
    }
}

impl FamilyId {
    /// Every family of the catalogue at a representative parameter.
    pub fn catalogue() -> Vec<FamilyId> {
        vec![
            FamilyId::Fs { s: -12 },
            FamilyId::Fs { s: 5 },
            FamilyId::Gw { w: 1 },
            FamilyId::Gw { w: 3 },
            FamilyId::Hw { w: 1 },
            FamilyId::Hw { w: 2 },
            FamilyId::Iw { w: 1 },
            FamilyId::Jmw { m: 1, w: 1 },
            FamilyId::Lwsv { w: 1, s: 1, v: 9 },
            FamilyId::Lwsv { w: 6, s: -27, v: 0 },
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Surface {
    pub label: String,
    pub a2: IntPoly,
    pub a4: IntPoly,
    pub a6: IntPoly,
    #[serde(serialize_with = "crate::ser::bigint")]
    pub twist: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurfaceInvariants {
    pub c4: IntPoly,
    pub c6: IntPoly,
    pub disc: IntPoly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Place {
    Finite(IntPoly),
    Infinity,
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Place::Finite(q) => s.serialize_str(&q.to_string()),
            Place::Infinity => s.serialize_str("-deg"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Reduction {
    Good,
    Multiplicative,
    Additive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlaceEntry {
    pub place: Place,
    pub reduction: Reduction,
    pub quite_bad: bool,
    /// `(v(c4), v(c6), v(Δ))`; `None` stands for an identically zero invariant.
    pub valuations: (Option<u32>, Option<u32>, Option<u32>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlaceReport {
    pub places: Vec<PlaceEntry>,
    pub m_poly: IntPoly,
    pub b_poly: IntPoly,
}

/// `F_s(map(t))` with `s` possibly depending on `t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionMap {
    pub s: IntPoly,
    pub t_map: IntPoly,
}

impl ReductionMap {
    pub fn at(&self, t: &BigInt) -> (BigInt, BigInt) {
        (self.s.eval(t), self.t_map.eval(t))
    }
}

fn p(c: &[i64]) -> IntPoly {
    IntPoly::from_i64(c)
}

fn c(n: i64) -> IntPoly {
    IntPoly::from_i64(&[n])
}

impl Surface {
    pub fn new(label: impl Into<String>, a2: IntPoly, a4: IntPoly, a6: IntPoly, twist: BigInt) -> Result<Surface> {
        if twist.is_zero() {
            return Err(Error::InvalidParameter("twist must be nonzero".into()));
        }
        let s = Surface { label: label.into(), a2, a4, a6, twist };
        if s.invariants().disc.is_zero() {
            return Err(Error::Singular("discriminant vanishes identically".into()));
        }
        Ok(s)
    }

    /// `W_{a(t)}(q(t))`.
    pub fn wa_composite(label: impl Into<String>, a: &IntPoly, q: &IntPoly) -> Result<Surface> {
        let a4 = a.mul(&q.add(&a.scale(&BigInt::from(3)))).neg();
        Surface::new(label, q.clone(), a4, a.pow(3), BigInt::one())
    }

    /// Substitute `t ↦ g(t)`.
    pub fn compose(&self, label: impl Into<String>, g: &IntPoly) -> Result<Surface> {
        Surface::new(label, self.a2.compose(g), self.a4.compose(g), self.a6.compose(g), self.twist.clone())
    }

    pub fn max_degree(&self) -> usize {
        self.a2.degree().max(self.a4.degree()).max(self.a6.degree())
    }

    /// Coefficients of the model `y² = x³ + w·a2x² + w²·a4x + w³·a6`.
    pub fn untwisted(&self) -> [IntPoly; 3] {
        let w = &self.twist;
        [self.a2.scale(w), self.a4.scale(&(w * w)), self.a6.scale(&(w * w * w))]
    }

    pub fn invariants(&self) -> SurfaceInvariants {
        let [a2, a4, a6] = self.untwisted();
        let k = |n: i64| BigInt::from(n);
        let a2sq = a2.mul(&a2);
        let c4 = a2sq.sub(&a4.scale(&k(3))).scale(&k(16));
        let c6 = a2sq.mul(&a2).scale(&k(-2)).add(&a2.mul(&a4).scale(&k(9))).sub(&a6.scale(&k(27))).scale(&k(32));
        let disc = a2sq
            .mul(&a4.mul(&a4))
            .sub(&a4.pow(3).scale(&k(4)))
            .sub(&a2sq.mul(&a2).mul(&a6).scale(&k(4)))
            .add(&a2.mul(&a4).mul(&a6).scale(&k(18)))
            .sub(&a6.mul(&a6).scale(&k(27)))
            .scale(&k(16));
        SurfaceInvariants { c4, c6, disc }
    }

    pub fn specialize(&self, t0: &BigRational) -> QCurve {
        let q = BigRational::from_integer;
        Curve {
            a2: self.a2.eval_rat(t0),
            a4: self.a4.eval_rat(t0),
            a6: self.a6.eval_rat(t0),
            twist: q(self.twist.clone()),
        }
    }

    pub fn specialize_int(&self, t0: i64) -> QCurve {
        self.specialize(&BigRational::from_integer(BigInt::from(t0)))
    }

    pub fn is_singular_at(&self, t0: &BigRational) -> bool {
        self.invariants().disc.eval_rat(t0).is_zero()
    }

    pub fn classify_places(&self) -> Result<PlaceReport> {
        let inv = self.invariants();
        let fac = factor_over_q(&inv.disc)?;
        let mut places = Vec::new();
        let mut m_poly = IntPoly::one();
        let mut b_poly = IntPoly::one();
        for (q, _) in &fac.factors {
            let v4 = place_val(&inv.c4, q);
            let v6 = place_val(&inv.c6, q);
            let vd = place_val(&inv.disc, q);
            let (reduction, quite_bad) = reduction_type(v4, v6, vd);
            if reduction == Reduction::Multiplicative {
                m_poly = m_poly.mul(q);
            }
            if quite_bad {
                b_poly = b_poly.mul(q);
            }
            places.push(PlaceEntry { place: Place::Finite(q.clone()), reduction, quite_bad, valuations: (v4, v6, vd) });
        }
        let [a2, a4, a6] = self.untwisted();
        let ceil = |d: usize, k: usize| d.div_ceil(k);
        let n = ceil(a2.degree(), 2).max(ceil(a4.degree(), 4)).max(ceil(a6.degree(), 6));
        let vinf = |f: &IntPoly, w: usize| if f.is_zero() { None } else { Some((w * n - f.degree()) as u32) };
        let (v4, v6, vd) = (vinf(&inv.c4, 4), vinf(&inv.c6, 6), vinf(&inv.disc, 12));
        let (reduction, quite_bad) = reduction_type(v4, v6, vd);
        places.push(PlaceEntry { place: Place::Infinity, reduction, quite_bad, valuations: (v4, v6, vd) });
        Ok(PlaceReport { places, m_poly, b_poly })
    }

    /// No finite place of multiplicative reduction.
    pub fn potentially_parity_biased(&self) -> Result<bool> {
        Ok(self.classify_places()?.m_poly.is_constant())
    }

    /// Parse `a2=<poly>; a4=<poly>; a6=<poly>; w=<int>`.
    pub fn parse_literal(src: &str) -> Result<Surface> {
        let (mut a2, mut a4, mut a6) = (IntPoly::zero(), IntPoly::zero(), IntPoly::zero());
        let mut w = BigInt::one();
        for part in src.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = part.split_once('=').ok_or_else(|| Error::Parse(format!("expected key=value in '{part}'")))?;
            match k.trim() {
                "a2" => a2 = IntPoly::parse(v, "t")?,
                "a4" => a4 = IntPoly::parse(v, "t")?,
                "a6" => a6 = IntPoly::parse(v, "t")?,
                "w" => w = BigInt::from_str(v.trim()).map_err(|_| Error::Parse(format!("bad twist '{v}'")))?,
                other => return Err(Error::Parse(format!("unknown key '{other}'"))),
            }
        }
        Surface::new(src.trim(), a2, a4, a6, w)
    }
}

fn place_val(f: &IntPoly, q: &IntPoly) -> Option<u32> {
    if f.is_zero() {
        return None;
    }
    let mut g = f.clone();
    let mut e = 0;
    while let Some(h) = divide_q(&g, q) {
        g = h;
        e += 1;
    }
    Some(e)
}

fn divide_q(f: &IntPoly, q: &IntPoly) -> Option<IntPoly> {
    let (quo, r) = f.to_q().div_rem(&q.to_q());
    if r.is_zero() {
        Some(quo.to_primitive_int())
    } else {
        None
    }
}

/// A place is quite bad when no quadratic twist has good reduction there:
/// the valuation triple is not `(0, 0, 0)` or `(2, 3, 6)` modulo `(4, 6, 12)`.
fn reduction_type(v4: Option<u32>, v6: Option<u32>, vd: Option<u32>) -> (Reduction, bool) {
    let vd = vd.unwrap_or(0);
    if vd == 0 {
        return (Reduction::Good, false);
    }
    if v4 == Some(0) {
        return (Reduction::Multiplicative, true);
    }
    let fits = |a: u32, b: u32, c: u32| {
        v4.is_none_or(|x| x % 4 == a) && v6.is_none_or(|x| x % 6 == b) && vd % 12 == c
    };
    (Reduction::Additive, !(fits(0, 0, 0) || fits(2, 3, 6)))
}

pub fn make_family(id: FamilyId) -> Result<Surface> {
    let nz = |x: i64, name: &str| {
        if x == 0 {
            Err(Error::InvalidParameter(format!("{name} must be nonzero")))
        } else {
            Ok(())
        }
    };
    let b = BigInt::from;
    let label = id.to_string();
    match id {
        FamilyId::Fs { s } => {
            nz(s, "s")?;
            Surface::new(label, p(&[0, 3]), c(3 * s), p(&[0, s]), b(1))
        }
        FamilyId::Gw { w } => {
            nz(w, "w")?;
            Surface::new(label, p(&[0, 3]), p(&[0, 3]), p(&[0, 0, 1]), b(w))
        }
        FamilyId::Hw { w } => {
            nz(w, "w")?;
            Surface::new(label, p(&[3, -7, 8]), p(&[3, -6]), p(&[1, 1]), b(w))
        }
        FamilyId::Iw { w } => {
            nz(w, "w")?;
            Surface::new(label, p(&[0, -7, 1]), p(&[0, 36, -6]), p(&[0, -54, 10]), b(w))
        }
        FamilyId::Jmw { m, w } => {
            nz(m, "m")?;
            nz(w, "w")?;
            Surface::new(label, p(&[0, 0, 3]), p(&[0, -3 * m]), c(m * m), b(w))
        }
        FamilyId::Lwsv { w, s, v } => {
            nz(w, "w")?;
            nz(s, "s")?;
            Surface::new(label, p(&[3 * v, 0, 3]), c(3 * s), p(&[s * v, 0, s]), b(w))
        }
        FamilyId::Wa { a } => {
            nz(a, "a")?;
            Surface::wa_composite(label, &c(a), &IntPoly::x())
        }
        FamilyId::Va { a } => {
            nz(a, "a")?;
            Surface::new(label, p(&[0, 3]), p(&[0, 3 * a]), p(&[0, a * a]), b(1))
        }
        FamilyId::W1Twist { d } => {
            nz(d, "d")?;
            Surface::new(label, p(&[0, d]), p(&[-3 * d * d, -d * d]), c(d * d * d), b(1))
        }
        FamilyId::WDagger { a } => {
            nz(a, "a")?;
            Surface::wa_composite(label, &c(a * a), &p(&[-a * a, -2 * a, 2]))
        }
        FamilyId::WStar { p: q, a } => {
            nz(q, "p")?;
            Surface::wa_composite(label, &c(q * q), &p(&[a, q]))
        }
        FamilyId::WStarStar { p: q, b: bb } => {
            nz(q, "p")?;
            Surface::wa_composite(label, &c(q), &p(&[bb, q]))
        }
    }
}

/// Isomorphism onto a specialization of `F_s`, when the catalogue records one.
pub fn reduction_to_fs(id: FamilyId) -> Option<ReductionMap> {
    let wa = |a: i64, inner: IntPoly| ReductionMap {
        s: c(-972 * a * a),
        t_map: inner.scale(&BigInt::from(12)).add(&c(18 * a)),
    };
    Some(match id {
        FamilyId::Fs { s } => ReductionMap { s: c(s), t_map: IntPoly::x() },
        FamilyId::Wa { a } => wa(a, IntPoly::x()),
        FamilyId::Va { a } => ReductionMap { s: c(4 * a * a), t_map: p(&[-2 * a, 4]) },
        FamilyId::Gw { w } => ReductionMap { s: p(&[0, w * w]), t_map: p(&[0, w]) },
        FamilyId::Lwsv { w, s, v } => ReductionMap { s: c(s * w * w), t_map: p(&[w * v, 0, w]) },
        FamilyId::WDagger { a } => ReductionMap { s: c(-12 * (3 * a).pow(4)), t_map: p(&[-a, 2]).pow(2).scale(&BigInt::from(6)) },
        FamilyId::W1Twist { d } => wa(d, p(&[0, d])),
        FamilyId::WStar { p: q, a } => wa(q * q, p(&[a, q])),
        FamilyId::WStarStar { p: q, b } => wa(q, p(&[b, q])),
        _ => return None,
    })
}
