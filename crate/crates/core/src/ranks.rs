//! Generic ranks over Q(t): Nagao's estimator, closed-form rank predicates,
//! the L-family factor count, and symbolic checks of generic points.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{is_rational_fourth_power, is_square, modu, primes_up_to};
use crate::curves::{Curve, Point, QCurve, QrTable, TorsionProbe};
use crate::error::{Error, Result};
use crate::poly::{factor_over_q, IntPoly, RatFunc};
use crate::scalar::Scalar;
use crate::surfaces::{make_family, FamilyId, Surface};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NagaoMethod {
    Direct,
    Charsum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "rank", rename_all = "lowercase")]
pub enum RankVerdict {
    Certified(u32),
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NagaoEstimate<F: Scalar = f64> {
    #[serde(rename = "X")]
    pub x: u64,
    pub checkpoints: Vec<(u64, F)>,
    #[serde(rename = "final")]
    pub estimate: F,
    pub verdict: RankVerdict,
}

impl<F: Scalar> NagaoEstimate<F> {
    pub fn nearest(&self) -> i64 {
        self.estimate.round().to_i64().unwrap_or(i64::MIN)
    }

    pub fn residual(&self) -> F {
        self.estimate - self.estimate.round()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Certificate {
    Rule { rule: String },
    FactorCounts { r: u32, c: u32, delta1: u32, delta2: u32 },
    Points { points: Vec<String> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankResult {
    pub rank: u32,
    pub certificate: Certificate,
}

fn rule(rank: u32, rule: impl Into<String>) -> RankResult {
    RankResult { rank, certificate: Certificate::Rule { rule: rule.into() } }
}

/// `w·f_t(x) = w·(A(x)t² + B(x)t + C(x))`.
#[derive(Debug, Clone)]
struct QuadraticFibre {
    a: IntPoly,
    b: IntPoly,
    c: IntPoly,
    disc: IntPoly,
    twist: BigInt,
}

impl QuadraticFibre {
    fn new(s: &Surface) -> Result<Self> {
        if s.max_degree() > 2 {
            return Err(Error::UnsupportedDegree(s.max_degree()));
        }
        let col = |k: usize| {
            IntPoly::new(vec![s.a6.coeff(k), s.a4.coeff(k), s.a2.coeff(k)])
        };
        let a = col(2);
        let b = col(1);
        let c = col(0).add(&IntPoly::x().pow(3));
        let disc = b.mul(&b).sub(&a.mul(&c).scale(&BigInt::from(4)));
        Ok(QuadraticFibre { a, b, c, disc, twist: s.twist.clone() })
    }
}

/// Forward differences of a polynomial mod `p`, stepping `x ↦ x + 1` with additions only.
struct Stepper {
    d: [u64; 7],
    deg: usize,
    p: u64,
}

impl Stepper {
    fn new(f: &IntPoly, p: u64) -> Self {
        let deg = f.degree();
        let cs = f.reduce_mod(p);
        let eval = |x: u64| cs.iter().rev().fold(0u64, |acc, &c| (acc * (x % p) + c) % p);
        let mut d = [0u64; 7];
        for (j, slot) in d.iter_mut().enumerate().take(deg + 1) {
            *slot = eval(j as u64);
        }
        for level in 1..=deg {
            for j in (level..=deg).rev() {
                d[j] = (d[j] + p - d[j - 1]) % p;
            }
        }
        Stepper { d, deg, p }
    }

    #[inline]
    fn value(&self) -> u64 {
        self.d[0]
    }

    #[inline]
    fn step(&mut self) {
        for i in 0..self.deg {
            let s = self.d[i] + self.d[i + 1];
            self.d[i] = if s >= self.p { s - self.p } else { s };
        }
    }
}

/// `Σ_x Σ_t χ(A(x)t² + B(x)t + C(x))` in `O(p)`.
fn charsum_rows(f: &QuadraticFibre, p: u64, table: &QrTable) -> i64 {
    let (mut a, mut b, mut c, mut d) =
        (Stepper::new(&f.a, p), Stepper::new(&f.b, p), Stepper::new(&f.c, p), Stepper::new(&f.disc, p));
    let pi = p as i64;
    let mut total = 0i64;
    for _ in 0..p {
        let av = a.value();
        if av != 0 {
            let chi = table.chi(av) as i64;
            total -= chi;
            if d.value() == 0 {
                total += pi * chi;
            }
        } else if b.value() == 0 {
            total += pi * table.chi(c.value()) as i64;
        }
        a.step();
        b.step();
        c.step();
        d.step();
    }
    total
}

fn direct_rows(s: &Surface, p: u64, table: &QrTable) -> i64 {
    let (c2, c4, c6) = (s.a2.reduce_mod(p), s.a4.reduce_mod(p), s.a6.reduce_mod(p));
    let ev = |cs: &[u64], t: u64| cs.iter().rev().fold(0u64, |acc, &c| (acc * t + c) % p);
    (0..p).map(|t| -table.trace(ev(&c2, t), ev(&c4, t), ev(&c6, t))).sum()
}

fn af_numerator(s: &Surface, f: &QuadraticFibre, p: u64, method: NagaoMethod) -> i64 {
    let table = QrTable::new(p);
    let rows = match method {
        NagaoMethod::Charsum => charsum_rows(f, p, &table),
        NagaoMethod::Direct => direct_rows(s, p, &table),
    };
    -(table.chi(modu(&f.twist, p)) as i64) * rows
}

/// `A_F(p) = (1/p)Σ_t a_{F(t)}(p)`, singular fibres included.
pub fn nagao_af(s: &Surface, p: u64, method: NagaoMethod) -> Result<BigRational> {
    if p < 5 || !crate::algebra::is_prime_u64(p) {
        return Err(Error::InvalidParameter(format!("nagao_af needs a prime p ≥ 5, got {p}")));
    }
    let f = QuadraticFibre::new(s)?;
    Ok(BigRational::new(af_numerator(s, &f, p, method).into(), BigInt::from(p)))
}

/// Default checkpoints for a run up to `x`.
pub fn default_checkpoints(x: u64) -> Vec<u64> {
    let mut out: Vec<u64> = [1_000u64, 2_000, 5_000, 10_000, 20_000, 50_000, 100_000, 200_000, 500_000, 1_000_000]
        .into_iter()
        .filter(|&c| c < x)
        .collect();
    out.push(x);
    out
}

/// `(1/X)Σ_{5 ≤ p ≤ X} −A_F(p) log p` with running checkpoints. An integer
/// `r` is certified when the final estimate is within 0.35 of `r` and the
/// last three checkpoints approach it monotonically.
pub fn nagao_rank<F: Scalar>(s: &Surface, x: u64, checkpoints: &[u64]) -> Result<NagaoEstimate<F>> {
    let f = QuadraticFibre::new(s)?;
    let primes: Vec<u64> = primes_up_to(x).into_iter().filter(|&p| p >= 5).collect();
    let terms: Vec<i64> = primes.par_iter().map(|&p| af_numerator(s, &f, p, NagaoMethod::Charsum)).collect();
    let mut marks: Vec<u64> = checkpoints.iter().copied().filter(|&c| c <= x).collect();
    if marks.last() != Some(&x) {
        marks.push(x);
    }
    let mut out = Vec::with_capacity(marks.len());
    let (mut sum, mut comp) = (F::zero(), F::zero());
    let mut next = 0;
    let push_until = |bound: u64, sum: F, out: &mut Vec<(u64, F)>, next: &mut usize| {
        while *next < marks.len() && marks[*next] < bound {
            out.push((marks[*next], sum / F::of_f64(marks[*next] as f64)));
            *next += 1;
        }
    };
    for (&p, &n) in primes.iter().zip(&terms) {
        push_until(p, sum, &mut out, &mut next);
        let term = F::of_f64(-(n as f64) / p as f64 * (p as f64).ln());
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    push_until(u64::MAX, sum, &mut out, &mut next);
    let estimate = out.last().map(|c| c.1).unwrap_or_else(F::zero);
    let r = estimate.round();
    let dist: Vec<F> = out.iter().rev().take(3).map(|c| (c.1 - r).abs()).collect();
    let approaching = dist.len() == 3 && dist[0] <= dist[1] && dist[1] <= dist[2];
    let verdict = if r >= F::zero() && (estimate - r).abs() <= F::of_f64(0.35) && approaching {
        RankVerdict::Certified(r.to_u32().unwrap_or(0))
    } else {
        RankVerdict::Inconclusive
    };
    Ok(NagaoEstimate { x, checkpoints: out, estimate, verdict })
}

fn q(n: &BigInt) -> BigRational {
    BigRational::from_integer(n.clone())
}

/// The cubic `C(x)` and sextic `R(x)` whose factor counts give the rank of `L_{w,s,v}`.
pub fn l_polynomials(w: &BigInt, s: &BigInt, v: &BigInt) -> (IntPoly, IntPoly) {
    let b = |n: i64| BigInt::from(n);
    let c_poly = IntPoly::new(vec![s * v, b(3) * s, b(3) * v, b(1)]);
    let r_poly = IntPoly::new(vec![
        b(-64) * s.pow(3) * w.pow(3),
        b(0),
        b(48) * s * s * w * w,
        b(0),
        b(15) * s * w - b(27) * v * v * w,
        b(0),
        b(1),
    ]);
    (c_poly, r_poly)
}

/// Rank of `L_{w,s,v}` from the irreducible factors of `C` and `R`.
pub fn rank_l(w: &BigInt, s: &BigInt, v: &BigInt) -> Result<RankResult> {
    if w.is_zero() || s.is_zero() {
        return Err(Error::InvalidParameter("s and w must be nonzero".into()));
    }
    let b = |n: i64| BigInt::from(n);
    let delta2 = is_rational_fourth_power(&(q(&(b(-4) * w * w * s)) / q(&b(3)))) as u32;
    let (c_poly, r_poly) = l_polynomials(w, s, v);
    let nr = factor_over_q(&r_poly)?.count_with_multiplicity();
    let nc = factor_over_q(&c_poly)?.count_with_multiplicity();
    let rank = if *s == v * v {
        is_square(w) as i64 + delta2 as i64
    } else {
        let sq = |n: BigInt| is_square(&n);
        let delta1 = if v.is_zero() && !sq(-b(3) * s) && !sq(s * w) {
            if sq(b(-2) * s * w) {
                2
            } else {
                1
            }
        } else {
            0
        };
        let rank = nr as i64 - nc as i64 - delta1 + delta2 as i64;
        if !(0..=3).contains(&rank) {
            return Err(Error::Unsupported(format!("L-family rank {rank} outside [0, 3] for ({w}, {s}, {v})")));
        }
        return Ok(RankResult {
            rank: rank as u32,
            certificate: Certificate::FactorCounts { r: nr, c: nc, delta1: delta1 as u32, delta2 },
        });
    };
    Ok(RankResult {
        rank: rank as u32,
        certificate: Certificate::FactorCounts { r: nr, c: nc, delta1: 2, delta2 },
    })
}

fn square_or_minus(a: &BigInt) -> bool {
    is_square(&a.abs())
}

/// Closed-form generic rank of a catalogue family.
pub fn closed_rank(id: FamilyId) -> Result<RankResult> {
    make_family(id)?;
    let b = BigInt::from;
    Ok(match id {
        FamilyId::Fs { s } => {
            let k4 = BigRational::new(b(-s), b(12));
            rule(is_rational_fourth_power(&k4) as u32, "fs: s = -12k^4")
        }
        FamilyId::Gw { w } => {
            let hit = is_square(&b(w)) || (w % 2 == 0 && is_square(&b(-w / 2)));
            rule(hit as u32, "gw: w square or -2 times a square")
        }
        FamilyId::Iw { w } => rule(is_square(&b(w)) as u32, "iw: w square"),
        FamilyId::Hw { w } => rule(is_square(&b(2 * w)) as u32, "hw: w = 2 times a square"),
        FamilyId::Jmw { w, .. } => rule(is_square(&b(w)) as u32, "jmw: w square"),
        FamilyId::Lwsv { w, s, v } => rank_l(&b(w), &b(s), &b(v))?,
        FamilyId::Wa { a } => rule(square_or_minus(&b(a)) as u32, "wa: a = ±n^2"),
        FamilyId::Va { .. } => rule(0, "va: rank 0"),
        FamilyId::W1Twist { d } => rule(square_or_minus(&b(d)) as u32, "w1twist: W_d(dt), d = ±n^2"),
        FamilyId::WDagger { a } => rank_l(&b(6), &(b(-27) * b(a).pow(4)), &b(0))?,
        FamilyId::WStar { p, .. } => rule(square_or_minus(&b(p * p)) as u32, "wstar: W_{p^2} under t -> pt + a"),
        FamilyId::WStarStar { p, .. } => rule(square_or_minus(&b(p)) as u32, "wstarstar: W_p under t -> pt + b"),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PointCheck {
    VerifiedNonTorsion,
    OnCurveTorsion,
    Fail,
}

pub type FPoint = Point<RatFunc>;

pub fn function_field_curve(s: &Surface) -> Curve<RatFunc> {
    let f = RatFunc::from_int_poly;
    Curve { a2: f(&s.a2), a4: f(&s.a4), a6: f(&s.a6), twist: RatFunc::constant(q(&s.twist)) }
}

fn specialize_point(p: &FPoint, t: &BigRational) -> Option<Point<BigRational>> {
    match p {
        Point::Infinity => Some(Point::Infinity),
        Point::Affine(x, y) => Some(Point::Affine(x.eval(t)?, y.eval(t)?)),
    }
}

/// Symbolic on-curve check over Q(t), then a non-torsion witness at three
/// or more nonsingular integer specializations (Mazur: orders ≤ 12).
pub fn verify_generic_point(s: &Surface, p: &FPoint) -> PointCheck {
    if !function_field_curve(s).contains(p) {
        return PointCheck::Fail;
    }
    if p.is_infinity() {
        return PointCheck::OnCurveTorsion;
    }
    let mut witnesses = 0;
    let mut tried = 0;
    for t0 in (1i64..).flat_map(|n| [n, -n]).take(60) {
        let t = BigRational::from_integer(t0.into());
        let e: QCurve = s.specialize(&t);
        if e.is_singular() {
            continue;
        }
        let Some(pt) = specialize_point(p, &t) else { continue };
        tried += 1;
        if let Ok(TorsionProbe::NonTorsion) = e.torsion_probe(&pt, 12) {
            witnesses += 1;
        }
        if witnesses >= 3 || tried >= 8 {
            break;
        }
    }
    if witnesses >= 3 {
        PointCheck::VerifiedNonTorsion
    } else {
        PointCheck::OnCurveTorsion
    }
}

fn rf(num: &str, den: &str) -> RatFunc {
    let p = |s: &str| IntPoly::parse(s, "t").expect("catalogue polynomial");
    RatFunc::from_ratio(&p(num), &p(den)).expect("nonzero denominator")
}

#[derive(Debug, Clone)]
pub struct GenericPoint {
    pub label: String,
    pub surface: Surface,
    pub point: FPoint,
}

/// The generic points displayed for the catalogue families.
pub fn catalogue_points() -> Result<Vec<GenericPoint>> {
    let mk = |label: &str, id: FamilyId, x: RatFunc, y: RatFunc| -> Result<GenericPoint> {
        Ok(GenericPoint { label: label.into(), surface: make_family(id)?, point: Point::Affine(x, y) })
    };
    let one = "1";
    let mut out = vec![
        mk("F_-12 (-2k^2, 8k^3), k = 1", FamilyId::Fs { s: -12 }, rf("-2", one), rf("8", one))?,
        mk("F_-192 (-2k^2, 8k^3), k = 2", FamilyId::Fs { s: -192 }, rf("-8", one), rf("64", one))?,
        mk("G_1 (0, t)", FamilyId::Gw { w: 1 }, rf("0", one), rf("t", one))?,
        mk("G_-2 (-3, 2t)", FamilyId::Gw { w: -2 }, rf("-3", one), rf("2t", one))?,
        mk("I_1 (9/4, 5t/4 - 27/8)", FamilyId::Iw { w: 1 }, rf("9", "4"), rf("10t - 27", "8"))?,
        mk("H_2 (-1, 2t)", FamilyId::Hw { w: 2 }, rf("-1", one), rf("2t", one))?,
        mk("J_{1,1} (0, m)", FamilyId::Jmw { m: 1, w: 1 }, rf("0", one), rf("1", one))?,
        mk("J_{5,1} (0, m)", FamilyId::Jmw { m: 5, w: 1 }, rf("0", one), rf("5", one))?,
        mk(
            "L_{1,1,9} trace point",
            FamilyId::Lwsv { w: 1, s: 1, v: 9 },
            rf("15t^2 + 144", "t^2"),
            rf("2(13t^4 + 216t^2 + 864)", "t^3"),
        )?,
        mk("W_1 (0, 1)", FamilyId::Wa { a: 1 }, rf("0", one), rf("1", one))?,
    ];
    for u in [2i64, 5] {
        let du = IntPoly::from_i64(&[u * u * u - 3 * u + 1, u * (u - 1)]);
        let t = IntPoly::x();
        let surface = Surface::new(
            format!("W_1^(d_{u}(t))"),
            du.mul(&t),
            du.mul(&du).mul(&t.add(&IntPoly::from_i64(&[3]))).neg(),
            du.pow(3),
            BigInt::one(),
        )?;
        let x = RatFunc::from_int_poly(&du.scale(&BigInt::from(u)));
        let y = RatFunc::from_int_poly(&du.mul(&du));
        out.push(GenericPoint { label: format!("twisted Washington (u d_u, d_u^2), u = {u}"), surface, point: Point::Affine(x, y) });
    }
    Ok(out)
}

/// A rank-3 L-surface from `(a, b, ℓ)` together with its three displayed points.
#[derive(Debug, Clone)]
pub struct Rank3Family {
    pub surface: Surface,
    pub w: BigInt,
    pub s: BigInt,
    pub v: BigInt,
    pub points: [FPoint; 3],
}

pub fn rank3_family(a: i64, b: i64, l: i64) -> Result<Rank3Family> {
    if a <= 0 || b <= 0 || l <= 0 {
        return Err(Error::InvalidParameter("a, b, ℓ must be positive".into()));
    }
    if a == b {
        return Err(Error::InvalidParameter("a = b makes y = 0 and the points collide".into()));
    }
    let bi = |n: i64| BigInt::from(n);
    let r = |n: BigInt, d: BigInt| BigRational::new(n, d);
    let (a2, b2) = (bi(a * a), bi(b * b));
    let y = bi(6) * (&b2 - &a2);
    let k = bi(6) * (&b2 + &a2);
    if y.abs() == k.abs() {
        return Err(Error::InvalidParameter("degenerate y = ±k".into()));
    }
    let s = bi(-3) * &k * &k;
    let vq = r(&y * (&y * &y - bi(9) * &k * &k), bi(3) * (&k * &k - &y * &y));
    let wq = r(bi(l * l), bi(12) * (&a2 + &b2));
    let x2 = -q(&k);
    let x4 = r(bi(-6) * (&a2 + &b2) * (bi(2) * &a2 + &b2), b2.clone());
    let x5 = r(bi(6) * (&a2 + &b2) * (&a2 + bi(2) * &b2), a2.clone());
    let ys = [
        (r(bi(4) * &k * &k, bi(l)), false),
        (r(bi(2 * a) * &k * &k, &b2 * bi(l)), true),
        (r(bi(2 * b) * &k * &k, &a2 * bi(l)), true),
    ];
    let (wn, wd) = (wq.numer().clone(), wq.denom().clone());
    let (vp, vd) = (vq.numer().clone(), vq.denom().clone());
    let twist = &wn * &wd;
    let s_int = &s * vd.pow(4);
    let v_int = &vp * &vd;
    let big_v = IntPoly::constant(v_int.clone());
    let t2 = IntPoly::x().pow(2);
    let surface = Surface::new(
        format!("L_{{{wq},{s},{vq}}} rank 3 ({a}, {b}, {l})"),
        t2.add(&big_v).scale(&bi(3)),
        IntPoly::constant(bi(3) * &s_int),
        t2.add(&big_v).scale(&s_int),
        twist.clone(),
    )?;
    let vd2 = q(&(&vd * &vd));
    let make = |x: &BigRational, yc: &BigRational, linear: bool| -> FPoint {
        let xx = RatFunc::constant(x * &vd2);
        let c = yc / q(&wd);
        let yy = if linear {
            RatFunc::from_poly(crate::poly::QPoly::new(vec![BigRational::zero(), c * &vd2]))
        } else {
            RatFunc::constant(c * &vd2 * q(&vd))
        };
        Point::Affine(xx, yy)
    };
    let xs = [x2, x4, x5];
    let points = [
        make(&xs[0], &ys[0].0, ys[0].1),
        make(&xs[1], &ys[1].0, ys[1].1),
        make(&xs[2], &ys[2].0, ys[2].1),
    ];
    Ok(Rank3Family { surface, w: twist, s: s_int, v: v_int, points })
}

/// Smoke check that no combination `Σ n_i P_i` with `n_i ∈ {−1, 0, 1}`, not
/// all zero, is torsion at the specialization `t0`.
pub fn no_small_relations(s: &Surface, points: &[FPoint], t0: i64) -> Result<bool> {
    let t = BigRational::from_integer(t0.into());
    let e = s.specialize(&t);
    if e.is_singular() {
        return Err(Error::Singular(format!("{} at t = {t0}", s.label)));
    }
    let pts: Vec<Point<BigRational>> = points
        .iter()
        .map(|p| specialize_point(p, &t).ok_or_else(|| Error::Singular("point pole".into())))
        .collect::<Result<_>>()?;
    let n = pts.len() as u32;
    for mask in 1..3u32.pow(n) {
        let mut digits = Vec::with_capacity(n as usize);
        let mut m = mask;
        for _ in 0..n {
            digits.push(m % 3);
            m /= 3;
        }
        let lead = digits.iter().rev().find(|&&d| d != 0).copied();
        if lead != Some(1) {
            continue;
        }
        let mut acc = Point::Infinity;
        for (d, p) in digits.iter().zip(&pts) {
            match d {
                1 => acc = e.add(&acc, p)?,
                2 => acc = e.add(&acc, &e.neg_point(p))?,
                _ => {}
            }
        }
        if acc.is_infinity() || matches!(e.torsion_probe(&acc, 12)?, TorsionProbe::Order(_)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Smallest nonnegative `t` with `Δ(t) ≠ 0` and the points defined.
pub fn first_good_specialization(s: &Surface, points: &[FPoint]) -> i64 {
    (1i64..)
        .find(|&t| {
            let tq = BigRational::from_integer(t.into());
            !s.is_singular_at(&tq) && points.iter().all(|p| specialize_point(p, &tq).is_some())
        })
        .unwrap_or(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn methods_agree_on_the_catalogue() {
        for id in [
            FamilyId::Fs { s: 1 },
            FamilyId::Gw { w: -2 },
            FamilyId::Hw { w: 2 },
            FamilyId::Iw { w: 3 },
            FamilyId::Jmw { m: 2, w: 1 },
            FamilyId::Lwsv { w: 1, s: 1, v: 9 },
            FamilyId::WDagger { a: 1 },
            FamilyId::Va { a: 1 },
        ] {
            let s = make_family(id).unwrap();
            for p in crate::algebra::primes_up_to(150).into_iter().filter(|&p| p >= 5) {
                assert_eq!(
                    nagao_af(&s, p, NagaoMethod::Direct).unwrap(),
                    nagao_af(&s, p, NagaoMethod::Charsum).unwrap(),
                    "{id} p = {p}"
                );
            }
        }
    }

    #[test]
    fn degree_three_is_unsupported() {
        let s = Surface::parse_literal("a2=t^3; a4=1; a6=1").unwrap();
        assert!(matches!(nagao_af(&s, 7, NagaoMethod::Charsum), Err(Error::UnsupportedDegree(3))));
    }

    #[test]
    fn closed_rank_examples() {
        assert_eq!(closed_rank(FamilyId::Fs { s: -192 }).unwrap().rank, 1);
        assert_eq!(closed_rank(FamilyId::Fs { s: 5 }).unwrap().rank, 0);
        assert_eq!(closed_rank(FamilyId::Hw { w: 2 }).unwrap().rank, 1);
        assert_eq!(closed_rank(FamilyId::Hw { w: 3 }).unwrap().rank, 0);
        assert_eq!(closed_rank(FamilyId::Wa { a: 4 }).unwrap().rank, 1);
        assert_eq!(closed_rank(FamilyId::Wa { a: -9 }).unwrap().rank, 1);
        assert_eq!(closed_rank(FamilyId::Wa { a: 3 }).unwrap().rank, 0);
        assert_eq!(closed_rank(FamilyId::Gw { w: -8 }).unwrap().rank, 1);
        assert_eq!(closed_rank(FamilyId::Gw { w: 3 }).unwrap().rank, 0);
    }

    #[test]
    fn rank_l_examples() {
        let r = rank_l(&b(1), &b(1), &b(9)).unwrap();
        assert_eq!(r.rank, 1);
        assert_eq!(r.certificate, Certificate::FactorCounts { r: 2, c: 1, delta1: 0, delta2: 0 });
        assert_eq!(rank_l(&b(6), &b(-27), &b(0)).unwrap().rank, 3);
        let sv = rank_l(&b(1), &b(4), &b(2)).unwrap();
        assert_eq!(sv.rank, 1);
        assert!(matches!(sv.certificate, Certificate::FactorCounts { delta1: 2, .. }));
        assert_eq!(rank_l(&b(3), &b(4), &b(2)).unwrap().rank, 0);
    }

    #[test]
    fn catalogue_points_check() {
        for g in catalogue_points().unwrap() {
            let got = verify_generic_point(&g.surface, &g.point);
            let want = if g.label.starts_with("G_-2") { PointCheck::Fail } else { PointCheck::VerifiedNonTorsion };
            assert_eq!(got, want, "{}", g.label);
        }
    }

    #[test]
    fn rank3_points() {
        let f = rank3_family(1, 2, 30).unwrap();
        assert_eq!(f.w, b(15));
        assert_eq!(f.s, b(-2700));
        assert_eq!(f.v, b(-81));
        for p in &f.points {
            assert_eq!(verify_generic_point(&f.surface, p), PointCheck::VerifiedNonTorsion);
        }
        let t0 = first_good_specialization(&f.surface, &f.points);
        assert!(no_small_relations(&f.surface, &f.points, t0).unwrap());
        assert_eq!(rank_l(&f.w, &f.s, &f.v).unwrap().rank, 3);
    }

    #[test]
    fn rank3_with_fractional_parameters() {
        let f = rank3_family(1, 3, 2).unwrap();
        for p in &f.points {
            assert_eq!(verify_generic_point(&f.surface, p), PointCheck::VerifiedNonTorsion);
        }
    }
}
