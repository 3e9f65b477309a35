//! Average root numbers: exact Euler products, certified infinite products,
//! empirical means over Z and Q, and p-adic integrals of local signs.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{factorize, is_prime_u64, modu, primes_up_to, unit_part, val};
use crate::error::{Error, Result};
use crate::scalar::{Interval, Scalar};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum EulerProductValue<F: Scalar = f64> {
    Exact {
        #[serde(serialize_with = "crate::ser::rational")]
        value: BigRational,
    },
    Interval {
        interval: Interval<F>,
        prime_cutoff: u64,
    },
}

impl<F: Scalar> EulerProductValue<F> {
    pub fn exact(&self) -> Option<&BigRational> {
        match self {
            EulerProductValue::Exact { value } => Some(value),
            EulerProductValue::Interval { .. } => None,
        }
    }

    pub fn interval(&self) -> Option<&Interval<F>> {
        match self {
            EulerProductValue::Exact { .. } => None,
            EulerProductValue::Interval { interval, .. } => Some(interval),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmpiricalAverage {
    pub sum: i64,
    /// Nonsingular specializations.
    pub count: u64,
    /// Every parameter enumerated, singular or not.
    pub total: u64,
    #[serde(serialize_with = "crate::ser::rational")]
    pub mean: BigRational,
    #[serde(rename = "T")]
    pub t: u64,
    /// `sum·π²/(12T²)` for averages over Q.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub asymptotic_mean: Option<f64>,
}

impl EmpiricalAverage {
    pub fn mean_f64(&self) -> f64 {
        crate::curves::to_f64(&self.mean)
    }
}

fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn ri(n: BigInt) -> BigRational {
    BigRational::from_integer(n)
}

/// `p^{−e}` as a rational.
fn pinv(p: u64, e: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(p).pow(e))
}

fn check_prime(p: u64) -> Result<()> {
    if is_prime_u64(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p.to_string()))
    }
}

/// Euler factor `E_{W_a}(p)` for a prime `p | 2a`.
pub fn euler_factor_wa(a: &BigInt, p: u64) -> Result<BigRational> {
    if a.is_zero() {
        return Err(Error::InvalidParameter("a must be nonzero".into()));
    }
    check_prime(p)?;
    let v = val(a, p);
    if p != 2 && v == 0 {
        return Err(Error::InvalidParameter(format!("{p} does not divide 2a for a = {a}")));
    }
    if p == 2 {
        let plus_minus_one = matches!(modu(&unit_part(a, 2), 8), 1 | 7);
        return Ok(match v {
            0 if plus_minus_one => r(1, 1),
            0 => r(1, 2),
            1 => r(0, 1),
            2 if plus_minus_one => r(1, 2),
            2 => r(3, 8),
            3 => r(1, 4),
            _ if v % 2 == 0 => {
                let tail = (ri(BigInt::from(2).pow(v - 4) - 1)) / ri(BigInt::from(3) * BigInt::from(2).pow(v - 4));
                let head = if plus_minus_one { r(2, 1) * pinv(2, v) } else { r(3, 1) * pinv(2, v + 1) };
                head - tail
            }
            _ => {
                let q = BigInt::from(2).pow(v - 3);
                r(2, 1) * pinv(2, v) + (ri(1 - &q)) / ri(BigInt::from(3) * q)
            }
        });
    }
    let shells = (BigRational::one() - pinv(p, v / 2 * 2)) / r(p as i64 + 1, 1);
    Ok(if p % 4 == 1 {
        shells + pinv(p, v)
    } else if v % 2 == 0 {
        pinv(p, v) - shells
    } else {
        -shells - pinv(p, v)
    })
}

/// The odd-prime factor in the alternating form
/// `−(p − 1)/(p² + 1)·(1 − (−p^{−2})^{⌊v/2⌋}) + (−1)^v p^{−v}` for
/// `p ≡ 3 (mod 4)`; it agrees with [`euler_factor_wa`] only for `v_p(a) ≤ 3`.
pub fn euler_factor_wa_alternating(a: &BigInt, p: u64) -> Result<BigRational> {
    if p % 4 != 3 {
        return euler_factor_wa(a, p);
    }
    euler_factor_wa(a, p)?;
    let v = val(a, p);
    let pr = r(p as i64, 1);
    let half = v / 2;
    let neg = if half % 2 == 0 { pinv(p, 2 * half) } else { -pinv(p, 2 * half) };
    let sign = if v % 2 == 0 { BigRational::one() } else { -BigRational::one() };
    let one = BigRational::one();
    Ok(-(&pr - &one) / (&pr * &pr + &one) * (one - neg) + sign * pinv(p, v))
}

/// `Av_Z(ε_{W_a}) = −∏_{p | 2a} E_{W_a}(p)`.
pub fn av_wa(a: &BigInt) -> Result<EulerProductValue> {
    if a.is_zero() {
        return Err(Error::InvalidParameter("a must be nonzero".into()));
    }
    let support = factorize(&(BigInt::from(2) * a))?;
    let mut prod = BigRational::one();
    for (p, _) in &support.factors {
        prod *= euler_factor_wa(a, p.to_u64().ok_or_else(|| Error::Unsupported(format!("prime {p} beyond u64")))?)?;
    }
    Ok(EulerProductValue::Exact { value: -prod })
}

/// Euler factor `E_{V_a}(p)`.
pub fn euler_factor_va(a: &BigInt, p: u64) -> Result<BigRational> {
    if a.is_zero() {
        return Err(Error::InvalidParameter("a must be nonzero".into()));
    }
    check_prime(p)?;
    let v = val(a, p);
    let third = r(1, 3);
    Ok(match p {
        2 => match v {
            0 => r(-1, 2),
            1 => r(0, 1),
            2 => r(1, 8),
            _ if v % 2 == 1 => r(2, 1) * pinv(2, v) + third * (pinv(4, (v - 3) / 2) - BigRational::one()),
            _ => pinv(2, v + 1) + third * (pinv(4, (v - 4) / 2) - BigRational::one()),
        },
        3 => {
            let head = r(6, 7) * pinv(3, v + 2);
            if v % 2 == 0 {
                head + r(3, 4) * (pinv(3, v) - BigRational::one())
            } else {
                head + r(3, 4) * (r(3, 1) * pinv(3, v) - BigRational::one())
            }
        }
        _ => {
            let j = v % 2;
            let chi = if p % 4 == 1 { 1 } else { -1 };
            let x = if p % 3 == 1 {
                BigRational::one()
            } else {
                let pb = BigInt::from(p);
                let num = BigInt::from(4) * (&pb - 1) * (pb.pow(1 - j) + pb.pow(3 + j));
                BigRational::one() - BigRational::new(num, pb.pow(6) - 1)
            };
            let lead = BigRational::from_integer(chi.into()) * (BigRational::one() - pinv(p, v - j)) / r(p as i64 + 1, 1);
            let sj = if j == 1 { chi } else { 1 };
            lead + BigRational::from_integer(sj.into()) * pinv(p, v) * x
        }
    })
}

/// `Av_Z(ε_{V_a}) = −∏_p E_{V_a}(p)`, enclosed by the product over
/// `p ≤ cutoff` and the tail bound `|log ∏_{p > N} E(p)| ≤ 8/(N − 1)`.
pub fn av_va<F: Scalar>(a: &BigInt, cutoff: u64) -> Result<EulerProductValue<F>> {
    if a.is_zero() {
        return Err(Error::InvalidParameter("a must be nonzero".into()));
    }
    if cutoff < 5 {
        return Err(Error::InvalidParameter("cutoff must be at least 5".into()));
    }
    let exact_small = euler_factor_va(a, 2)? * euler_factor_va(a, 3)?;
    let primes: Vec<u64> = primes_up_to(cutoff).into_iter().filter(|&p| p >= 5).collect();
    let factors: Vec<Interval<F>> = primes
        .par_iter()
        .map(|&p| euler_factor_va(a, p).map(|e| Interval::from_rational(&e)))
        .collect::<Result<_>>()?;
    let mut prod = Interval::from_rational(&exact_small);
    for f in factors {
        prod = prod * f;
    }
    let tail = F::of_f64(8.0) / (F::of_f64(cutoff as f64) - F::one());
    prod = prod * Interval::exp_ball(tail);
    Ok(EulerProductValue::Interval { interval: -prod, prime_cutoff: cutoff })
}

/// Mean of `ε(t)` over `t ∈ [−T, T]`, divided by `2T + 1`; singular fibres
/// contribute 0 and are reported by `rn` as 0.
pub fn empirical_av_z<R>(rn: R, t_max: u64) -> Result<EmpiricalAverage>
where
    R: Fn(i64) -> Result<i8> + Sync,
{
    if t_max == 0 {
        return Err(Error::InvalidParameter("T must be positive".into()));
    }
    let t = t_max as i64;
    let (sum, count) = (-t..=t)
        .into_par_iter()
        .map(|x| rn(x).map(|e| (e as i64, (e != 0) as u64)))
        .try_reduce(|| (0, 0), |a, b| Ok((a.0 + b.0, a.1 + b.1)))?;
    let total = 2 * t_max + 1;
    Ok(EmpiricalAverage {
        sum,
        count,
        total,
        mean: r(sum, total as i64),
        t: t_max,
        asymptotic_mean: None,
    })
}

/// Mean of `ε(r/s)` over coprime pairs with `|r| ≤ T`, `1 ≤ s ≤ T`,
/// normalized by the number of pairs enumerated.
pub fn empirical_av_q<R>(rn: R, t_max: u64) -> Result<EmpiricalAverage>
where
    R: Fn(&BigRational) -> Result<i8> + Sync,
{
    if t_max == 0 {
        return Err(Error::InvalidParameter("T must be positive".into()));
    }
    let t = t_max as i64;
    let (sum, count, total) = (1..=t)
        .into_par_iter()
        .map(|s| {
            let mut acc = (0i64, 0u64, 0u64);
            for num in -t..=t {
                if num.gcd(&s) != 1 {
                    continue;
                }
                let e = rn(&r(num, s))?;
                acc.0 += e as i64;
                acc.1 += (e != 0) as u64;
                acc.2 += 1;
            }
            Ok(acc)
        })
        .try_reduce(|| (0, 0, 0), |a, b| Ok((a.0 + b.0, a.1 + b.1, a.2 + b.2)))?;
    let tf = t_max as f64;
    Ok(EmpiricalAverage {
        sum,
        count,
        total,
        mean: r(sum, total as i64),
        t: t_max,
        asymptotic_mean: Some(sum as f64 * PI * PI / (12.0 * tf * tf)),
    })
}

fn refinement(p: u64) -> u32 {
    match p {
        2 => 5,
        3 => 2,
        _ => 1,
    }
}

/// `∫_{Z_p} w(t) dt` for a sign function that is locally constant away from
/// the `centers`. Residues mod `p^{depth + c}` are summed directly outside the
/// balls `t ≡ z (mod p^depth)`; inside each ball the shells `v_p(t − z) = k`
/// must repeat with period 6 in `k` over twelve shells, and the geometric
/// series over them is summed exactly.
pub fn local_integral<W>(w: W, p: u64, centers: &[BigInt], depth: u32) -> Result<BigRational>
where
    W: Fn(&BigInt) -> i8 + Sync,
{
    check_prime(p)?;
    let c = refinement(p);
    let pb = BigInt::from(p);
    let ball = pb.pow(depth);
    let modulus = pb.pow(depth + c);
    let m = modulus.to_u64().ok_or_else(|| Error::InvalidParameter(format!("depth {depth} too large for p = {p}")))?;
    let near: Vec<u64> = centers.iter().map(|z| modu(z, ball.to_u64().unwrap_or(u64::MAX))).collect();
    let ball_u = ball.to_u64().unwrap_or(u64::MAX);
    let body: i64 = (0..m)
        .into_par_iter()
        .filter(|t| !near.contains(&(t % ball_u)))
        .map(|t| w(&BigInt::from(t)) as i64)
        .sum();
    let mut total = r(body, 1) / ri(modulus);
    let units: Vec<u64> = (1..p.pow(c)).filter(|u| u % p != 0).collect();
    let geometric = BigRational::one() / (BigRational::one() - pinv(p, 6));
    let mut seen = Vec::new();
    for z in centers {
        let zr = modu(z, ball_u);
        if seen.contains(&zr) {
            continue;
        }
        seen.push(zr);
        let shells: Vec<i64> = (0..12)
            .map(|k| {
                let step = pb.pow(depth + k);
                units.iter().map(|&u| w(&(z + &step * u)) as i64).sum()
            })
            .collect();
        if shells[..6] != shells[6..] {
            return Err(Error::UnstableTail { p, depth });
        }
        for (k, h) in shells[..6].iter().enumerate() {
            total += r(*h, 1) * pinv(p, depth + k as u32 + c) * &geometric;
        }
    }
    Ok(total)
}

/// Depth at which the family engines are stationary: `v_p(a) + 6` at 2 and
/// 3, `v_p(a) + 2` beyond.
pub fn default_depth(a: &BigInt, p: u64) -> u32 {
    val(a, p) + if p <= 3 { 6 } else { 2 }
}

/// `∫_{Z_p} w_p*` for `W_a`, which equals `E_{W_a}(p)`.
pub fn local_integral_wa(a: &BigInt, p: u64) -> Result<BigRational> {
    let pb = BigInt::from(p);
    local_integral(|t| crate::root_numbers::wstar_wa(a, t, &pb), p, &[BigInt::zero()], default_depth(a, p))
}

/// `∫_{Z_p} w_p*` for `V_a`, which equals `E_{V_a}(p)`.
pub fn local_integral_va(a: &BigInt, p: u64) -> Result<BigRational> {
    let pb = BigInt::from(p);
    let centers = [BigInt::zero(), a.clone()];
    local_integral(
        |t| crate::root_numbers::wstar_va(a, t, &pb).unwrap_or(0),
        p,
        &centers,
        default_depth(a, p),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Formula,
    Empirical,
    LocalIntegral,
}

pub const INTERVAL_DIGITS: i32 = 9;

/// `[lo, hi]` widened to `INTERVAL_DIGITS` decimals.
pub fn decimal_bounds(lo: f64, hi: f64) -> (String, String) {
    let k = 10f64.powi(INTERVAL_DIGITS);
    let d = INTERVAL_DIGITS as usize;
    let lo = (lo * k).floor() / k;
    let hi = (hi * k).ceil() / k;
    (format!("{lo:.d$}"), format!("{hi:.d$}"))
}

/// The JSON record emitted for every computed average.
#[derive(Debug, Clone, Serialize)]
pub struct AverageRecord {
    pub family: String,
    pub params: serde_json::Value,
    pub method: Method,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    /// Endpoints as decimal strings, rounded outward to [`INTERVAL_DIGITS`] places.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interval: Option<(String, String)>,
    #[serde(rename = "T", skip_serializing_if = "Option::is_none")]
    pub t: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<u64>,
}

impl AverageRecord {
    pub fn from_euler(family: String, params: serde_json::Value, v: &EulerProductValue) -> Self {
        let (value, interval, cutoff) = match v {
            EulerProductValue::Exact { value } => (Some(value.to_string()), None, None),
            EulerProductValue::Interval { interval, prime_cutoff } => {
                (None, Some(decimal_bounds(interval.lo, interval.hi)), Some(*prime_cutoff))
            }
        };
        AverageRecord { family, params, method: Method::Formula, value, interval, t: None, cutoff }
    }

    pub fn from_empirical(family: String, params: serde_json::Value, e: &EmpiricalAverage) -> Self {
        AverageRecord {
            family,
            params,
            method: Method::Empirical,
            value: Some(e.mean.to_string()),
            interval: None,
            t: Some(e.t),
            cutoff: None,
        }
    }
}

/// Closed form of `Av_Z(ε_{W_a})` for odd square-free `a`, by `a mod 8`.
pub fn av_wa_odd_squarefree(a: i64) -> BigRational {
    match a.rem_euclid(8) {
        1 => r(-1, a),
        3 => r(1, 2 * a),
        5 => r(-1, 2 * a),
        _ => r(1, a),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_numbers::{eps_va, eps_wa};
    use num_traits::Signed;

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn wa_factor_examples() {
        assert_eq!(euler_factor_wa(&b(2), 2).unwrap(), r(0, 1));
        assert_eq!(euler_factor_wa(&b(8), 2).unwrap(), r(1, 4));
        assert_eq!(euler_factor_wa(&b(3), 3).unwrap(), r(-1, 3));
        assert!(euler_factor_wa(&b(3), 5).is_err());
        assert!(euler_factor_wa(&b(3), 9).is_err());
    }

    #[test]
    fn wa_averages() {
        assert_eq!(av_wa(&b(1)).unwrap().exact().unwrap(), &r(-1, 1));
        assert_eq!(av_wa(&b(7)).unwrap().exact().unwrap(), &r(1, 7));
        assert_eq!(av_wa(&b(5)).unwrap().exact().unwrap(), &r(-1, 10));
    }

    #[test]
    fn odd_squarefree_closed_form() {
        for a in (-49i64..=49).step_by(2) {
            if crate::algebra::kernel(&b(a)).unwrap() != b(a) {
                continue;
            }
            assert_eq!(av_wa(&b(a)).unwrap().exact().unwrap(), &av_wa_odd_squarefree(a), "a = {a}");
        }
    }

    #[test]
    fn alternating_form_diverges_from_v4() {
        for (a, agree) in [(3i64, true), (9, true), (27, true), (81, false), (7 * 7 * 7 * 7, false)] {
            let p = if a % 3 == 0 { 3 } else { 7 };
            let same = euler_factor_wa(&b(a), p).unwrap() == euler_factor_wa_alternating(&b(a), p).unwrap();
            assert_eq!(same, agree, "a = {a}");
        }
        assert_eq!(euler_factor_wa(&b(81), 3).unwrap(), r(-19, 81));
    }

    #[test]
    fn va_factor_examples() {
        assert_eq!(euler_factor_va(&b(4), 2).unwrap(), r(1, 8));
        assert_eq!(euler_factor_va(&b(1), 3).unwrap(), r(2, 21));
        assert_eq!(euler_factor_va(&b(1), 7).unwrap(), r(1, 1));
    }

    #[test]
    fn wa_integrals_match_factors() {
        for a in [1i64, 2, 3, 5, 7, 8, 12, 16, 25, 27, 32, 45, 64, -3, -20, 81, 125] {
            let support = factorize(&b(2 * a)).unwrap();
            for (p, _) in &support.factors {
                let p = p.to_u64().unwrap();
                assert_eq!(local_integral_wa(&b(a), p).unwrap(), euler_factor_wa(&b(a), p).unwrap(), "a = {a}, p = {p}");
            }
        }
    }

    #[test]
    fn va_integrals_match_factors() {
        for a in [1i64, -1, 2, 3, 4, 5, 6, 8, 9, 12, 16, 25, 27, 32, 49, 7, 11] {
            for p in [2u64, 3, 5, 7, 11, 13] {
                assert_eq!(local_integral_va(&b(a), p).unwrap(), euler_factor_va(&b(a), p).unwrap(), "a = {a}, p = {p}");
            }
        }
    }

    #[test]
    fn va_interval_for_one() {
        let v = av_va::<f64>(&b(1), 100_000).unwrap();
        let i = v.interval().unwrap();
        assert!(i.contains(0.038562), "{i}");
        assert!(i.width() <= 1e-3);
    }

    #[test]
    fn empirical_washington_is_minus_one() {
        let e = empirical_av_z(|t| eps_wa(&b(1), &b(t)), 1000).unwrap();
        assert_eq!(e.mean, r(-1, 1));
    }

    #[test]
    fn empirical_va_is_close_to_the_product() {
        let e = empirical_av_z(|t| eps_va(&b(1), &b(t)), 20_000).unwrap();
        assert!((e.mean_f64() - 0.038562).abs() < 0.02, "{}", e.mean_f64());
    }

    #[test]
    fn empirical_over_q() {
        let c = empirical_av_q(|_| Ok(-1), 30).unwrap();
        assert_eq!(c.mean, r(-1, 1));
        let s = empirical_av_q(|x| Ok(if x.is_negative() { -1 } else { 1 }), 30).unwrap();
        assert_eq!(s.mean, r(1, s.total as i64));
    }
}
