//! Families `W_{a(t)}(Q(t))` built to have a prescribed average root number.
//!
//! Three constructions are provided: a single-prime design whose root number
//! is governed by one `p`-adic factor, a periodic design assembled from one
//! block per prime of the denominator, and an isotrivial design over `Q`
//! whose root number is the sign of a binary form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::algebra::{factorize, is_prime_u64, legendre, unit_part, val, Budget};
use crate::averages::{empirical_av_q, empirical_av_z, local_integral, EmpiricalAverage};
use crate::error::{Error, Result};
use crate::poly::{rational_roots, squarefree_part, IntPoly, QPoly};
use crate::root_numbers::eps_wa_with;
use crate::surfaces::Surface;

/// Largest exponent sum `s` accepted by [`prescribed_zero_poly`].
pub const MAX_EXPONENT_SUM: u64 = 1 << 20;

/// Largest modulus `p^ℓ` whose residue classes are checked one by one.
const MAX_CLASSES: u64 = 1_000_000;

fn bi(n: i64) -> BigInt {
    BigInt::from(n)
}

fn target(h: i64, k: i64) -> Result<BigRational> {
    if k <= 0 {
        return Err(Error::InvalidParameter(format!("denominator {k} must be positive")));
    }
    Ok(BigRational::new(bi(h), bi(k)))
}

fn inadmissible(q: &BigRational, reason: &str) -> Error {
    Error::Inadmissible { target: q.to_string(), reason: reason.into() }
}

// ---------------------------------------------------------------------------
// Ratio decomposition

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RatioTerm {
    #[serde(serialize_with = "crate::ser::bigint")]
    pub d: BigInt,
    pub p: u64,
    pub u: u32,
}

impl RatioTerm {
    pub fn value(&self) -> BigRational {
        BigRational::new(self.d.clone(), BigInt::from(self.p).pow(self.u))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RatioDecomposition {
    #[serde(serialize_with = "crate::ser::rational")]
    pub target: BigRational,
    pub terms: Vec<RatioTerm>,
}

impl RatioDecomposition {
    pub fn product(&self) -> BigRational {
        self.terms.iter().fold(BigRational::one(), |acc, t| acc * t.value())
    }
}

/// Exponents tried per prime pair in [`decompose_ratio`].
const RATIO_SEARCH: u32 = 1 << 20;

fn ln_big(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 900;
    (n >> shift as usize).to_f64().unwrap_or(f64::INFINITY).ln() + shift as f64 * std::f64::consts::LN_2
}

/// Write `h/k` as `∏ d_i/p_i^{u_i}` over the primes of `k`, each factor in
/// `(−1, 1)` and every `d_i` built from primes of `hk`.
pub fn decompose_ratio(h: i64, k: i64) -> Result<RatioDecomposition> {
    let q = target(h, k)?;
    if q.is_zero() || q.abs() >= BigRational::one() {
        return Err(inadmissible(&q, "need 0 < |h/k| < 1"));
    }
    let mut num = q.numer().clone();
    let mut den = q.denom().clone();
    let mut primes: Vec<u64> = Vec::new();
    for (p, _) in factorize(&den)?.factors {
        primes.push(p.to_u64().ok_or_else(|| Error::InvalidParameter(format!("prime {p} exceeds 64 bits")))?);
    }
    let mut terms = Vec::new();
    while primes.len() > 1 {
        // m factors remain; asking (q^v/p^u)^(m−1) > |num/den| keeps the
        // remainder far enough from 1 for the later searches
        let m = primes.len() as u32;
        let p = primes.remove(0);
        let q_prime = primes[0];
        let (pb, qb) = (BigInt::from(p), BigInt::from(q_prime));
        let e = val(&den, p);
        let pe = pb.pow(e);
        let (lp, lq) = ((p as f64).ln(), (q_prime as f64).ln());
        let lr = ln_big(&num.abs()) - ln_big(&den);
        let mut found = None;
        for u in e..e + RATIO_SEARCH {
            let mut v = (u as f64 * lp / lq).floor();
            let mut x = v * lq - u as f64 * lp;
            if x >= 0.0 {
                v -= 1.0;
                x -= lq;
            }
            if (m - 1) as f64 * x < lr - 1e-9 {
                continue;
            }
            let pu = pb.pow(u);
            let mut qv = qb.pow(v.max(0.0) as u32);
            while qv >= pu {
                qv /= &qb;
            }
            while &qv * &qb < pu {
                qv *= &qb;
            }
            if num.abs() * pu.pow(m - 1) < qv.pow(m - 1) * &den {
                found = Some((u, qv, pu));
                break;
            }
        }
        let (u, qv, pu) = found.ok_or(Error::SearchExhausted(RATIO_SEARCH as u64))?;
        terms.push(RatioTerm { d: qv.clone(), p, u });
        num = num * (&pu / &pe);
        den = den / &pe * &qv;
        let g = num.gcd(&den);
        num /= &g;
        den /= &g;
    }
    let p = primes[0];
    terms.push(RatioTerm { d: num, p, u: val(&den, p) });
    let out = RatioDecomposition { target: q, terms };
    debug_assert_eq!(out.product(), out.target);
    if out.product() != out.target {
        return Err(Error::InvalidParameter("ratio decomposition does not reconstruct its target".into()));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Polynomials with a prescribed number of deep zeros

/// `P(t) = ∏ (t − b_i)^{c_i}` with exactly `m·p^r` residues mod `p^{r+ℓ}`
/// satisfying `v_p(P(t)) ≥ r + ℓ`, and `v_p(P(t)) ≤ r + ℓ − u` elsewhere.
/// Kept in factored form; the exponents grow like `ℓ^m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrescribedZeros {
    pub p: u64,
    pub ell: u32,
    pub m: u64,
    pub u: u32,
    /// Exponent sum target; the deep zeros have `v_p(P) ≥ s = r + ℓ`.
    pub s: u64,
    pub r: u64,
    /// `(b_i, c_i)`.
    pub factors: Vec<(u64, u64)>,
    /// Whether the residues mod `p^{r+ℓ}` were also enumerated one by one.
    pub enumerated: bool,
}

impl PrescribedZeros {
    pub fn degree(&self) -> u64 {
        self.factors.iter().map(|(_, c)| c).sum()
    }

    /// `v_p(P(t))`, or `None` at a root.
    pub fn valuation_at(&self, t: &BigInt) -> Option<u64> {
        let mut v = 0;
        for (b, c) in &self.factors {
            let d = t - BigInt::from(*b);
            if d.is_zero() {
                return None;
            }
            v += c * val(&d, self.p) as u64;
        }
        Some(v)
    }

    /// Expanded polynomial; refuses degrees above `max_degree`.
    pub fn polynomial(&self, max_degree: u64) -> Result<IntPoly> {
        if self.degree() > max_degree {
            return Err(Error::InvalidParameter(format!(
                "prescribed-zero polynomial has degree {} > {max_degree}",
                self.degree()
            )));
        }
        let mut out = IntPoly::one();
        for (b, c) in &self.factors {
            out = out.mul(&IntPoly::new(vec![-BigInt::from(*b), BigInt::one()]).pow(*c as u32));
        }
        Ok(out)
    }
}

/// Base-`p` digit reversal of `j` over `ell` digits.
fn reversed(j: u64, p: u64, ell: u32) -> u64 {
    let mut x = j;
    let mut out = 0;
    for _ in 0..ell {
        out = out * p + x % p;
        x /= p;
    }
    out
}

fn val_u64(n: u64, p: u64) -> u32 {
    let mut n = n;
    let mut e = 0;
    while n % p == 0 {
        n /= p;
        e += 1;
    }
    e
}

pub fn prescribed_zero_poly(p: u64, ell: u32, m: u64, u: u32) -> Result<PrescribedZeros> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    if ell == 0 || u == 0 {
        return Err(Error::InvalidParameter("ℓ and u must be positive".into()));
    }
    let classes = p
        .checked_pow(ell)
        .filter(|&c| c <= MAX_CLASSES)
        .ok_or_else(|| Error::InvalidParameter(format!("p^ℓ = {p}^{ell} exceeds the work budget")))?;
    if m > classes {
        return Err(Error::InvalidParameter(format!("m = {m} exceeds p^ℓ = {classes}")));
    }
    if m == 0 {
        let r = u.saturating_sub(ell) as u64;
        return Ok(PrescribedZeros { p, ell, m, u, s: r + ell as u64, r, factors: vec![], enumerated: true });
    }
    let s = (ell as u64)
        .checked_pow(m as u32)
        .and_then(|x| x.checked_mul(u as u64))
        .filter(|&x| x <= MAX_EXPONENT_SUM)
        .ok_or_else(|| Error::InvalidParameter(format!("ℓ^m·u = {ell}^{m}·{u} exceeds the work budget")))?;
    let b: Vec<u64> = (0..classes).map(|j| reversed(j, p, ell)).collect();
    let mut c: Vec<u64> = Vec::with_capacity(m as usize);
    for j in 0..m as usize {
        let used: u64 = (0..j).map(|i| c[i] * val_u64(b[j].abs_diff(b[i]), p) as u64).sum();
        let rest = s.checked_sub(used).filter(|x| x % ell as u64 == 0).ok_or_else(|| {
            Error::InvalidParameter(format!("exponent recursion failed at j = {j} for (p, ℓ, m, u) = ({p}, {ell}, {m}, {u})"))
        })?;
        let cj = rest / ell as u64;
        if cj < u as u64 {
            return Err(Error::InvalidParameter(format!("exponent c_{j} = {cj} below u = {u}")));
        }
        c.push(cj);
    }
    let r = s - ell as u64;
    let mut out = PrescribedZeros {
        p,
        ell,
        m,
        u,
        s,
        r,
        factors: b.iter().take(m as usize).copied().zip(c.iter().copied()).collect(),
        enumerated: false,
    };
    verify_classes(&out, &b)?;
    let modulus = (p as u128).checked_pow(s as u32).filter(|&x| x <= MAX_CLASSES as u128);
    if let Some(modulus) = modulus {
        verify_enumeration(&out, modulus as u64)?;
        out.enumerated = true;
    }
    Ok(out)
}

/// Per class `t ≡ b_j (mod p^ℓ)`: deep zeros for `j < m`, and for `j ≥ m`
/// the valuation `Σ c_i v_p(b_j − b_i)` shared by every lift.
fn verify_classes(z: &PrescribedZeros, b: &[u64]) -> Result<()> {
    let ell = z.ell as u64;
    for (j, bj) in b.iter().enumerate() {
        let mut v = 0u64;
        for (i, (bi_, ci)) in z.factors.iter().enumerate() {
            v += if i == j { ci * ell } else { ci * val_u64(bj.abs_diff(*bi_), z.p) as u64 };
        }
        let ok = if (j as u64) < z.m { v >= z.s } else { v + z.u as u64 <= z.s };
        if !ok {
            return Err(Error::InvalidParameter(format!("prescribed-zero check failed on the class of {bj}")));
        }
    }
    Ok(())
}

fn verify_enumeration(z: &PrescribedZeros, modulus: u64) -> Result<()> {
    let poly = z.polynomial(u64::MAX)?;
    let mb = BigInt::from(modulus);
    let mut zeros = 0u64;
    for t in 0..modulus {
        let x = poly.eval(&BigInt::from(t)).mod_floor(&mb);
        if x.is_zero() {
            zeros += 1;
        } else if val(&x, z.p) as u64 + z.u as u64 > z.s {
            return Err(Error::InvalidParameter(format!("residue {t} has valuation above r + ℓ − u")));
        }
    }
    if zeros != z.m * z.p.pow(z.r as u32) {
        return Err(Error::InvalidParameter(format!("found {zeros} zeros, expected m·p^r = {}", z.m * z.p.pow(z.r as u32))));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Designed families

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Construction {
    /// Root number driven by the local sign at one prime `p = 2rk − 1`.
    SinglePrime,
    /// Periodic root number, one block per prime of the denominator.
    Periodic,
    /// Isotrivial over `Q`: the root number is the sign of a binary form.
    Isotrivial,
    /// A fixed family whose root number is constant or `(−1)^{t+1}`.
    Passthrough,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockAudit {
    pub p: u64,
    pub u: u32,
    pub r: u64,
    #[serde(serialize_with = "crate::ser::bigint")]
    pub d: BigInt,
    /// Number of residues mod `p^u` in the `+1` set.
    pub m: u64,
    /// Zeros requested from the prescribed-zero polynomial.
    pub zeros: u64,
    pub q: IntPoly,
    pub b: IntPoly,
    #[serde(serialize_with = "crate::ser::rational")]
    pub mean: BigRational,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Audit {
    SinglePrime {
        p: u64,
        r: u64,
        m: u64,
        /// `+1` or `−1`, the sign carried by the target.
        sign: i8,
        #[serde(serialize_with = "crate::ser::rational")]
        local_integral: BigRational,
    },
    Periodic {
        blocks: Vec<BlockAudit>,
        crt_exponent: u32,
    },
    Isotrivial {
        p: IntPoly,
        c_infinity: CInfinity,
    },
    Passthrough {
        family: String,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DesignedFamily {
    pub surface: Surface,
    pub a: IntPoly,
    pub q: IntPoly,
    #[serde(serialize_with = "crate::ser::rational")]
    pub predicted_average: BigRational,
    pub construction: Construction,
    /// Period of the root number, or the prime governing it.
    #[serde(serialize_with = "crate::ser::bigint")]
    pub modulus: BigInt,
    pub audit: Audit,
}

impl DesignedFamily {
    fn build(
        label: String,
        a: IntPoly,
        q: IntPoly,
        predicted: BigRational,
        construction: Construction,
        modulus: BigInt,
        audit: Audit,
    ) -> Result<DesignedFamily> {
        let surface = Surface::wa_composite(label, &a, &q)?;
        Ok(DesignedFamily { surface, a, q, predicted_average: predicted, construction, modulus, audit })
    }

    pub fn evaluator(&self) -> Result<CompositeEvaluator> {
        CompositeEvaluator::new(&self.a, &self.q)
    }
}

fn passthrough(q: &BigRational) -> Result<Option<DesignedFamily>> {
    let (a, lin, name, modulus) = if q == &BigRational::one() {
        (3, [1, 12], "W_3(1+12t)", 1)
    } else if q == &-BigRational::one() {
        (1, [0, 1], "W_1(t)", 1)
    } else if q.is_zero() {
        (2, [1, 4], "W_2(1+4t)", 2)
    } else {
        return Ok(None);
    };
    let ap = IntPoly::from_i64(&[a]);
    let qp = IntPoly::from_i64(&lin);
    DesignedFamily::build(
        name.into(),
        ap,
        qp,
        q.clone(),
        Construction::Passthrough,
        bi(modulus),
        Audit::Passthrough { family: name.into() },
    )
    .map(Some)
}

/// Gate for [`design_single_prime`]: any rational in `[−1, 1]`.
pub fn single_prime_gate(h: i64, k: i64) -> Result<BigRational> {
    let q = target(h, k)?;
    if q.abs() > BigRational::one() {
        return Err(inadmissible(&q, "|h/k| must not exceed 1"));
    }
    Ok(q)
}

/// Non-isotrivial family with `Av_Z = h/k`, driven by one prime
/// `p = 2rk − 1` (smallest `r`). The predicted value is recomputed as a
/// `p`-adic integral of the local sign and checked against the closed form
/// `±(1 − m/(p+1))`.
pub fn design_single_prime(h: i64, k: i64) -> Result<DesignedFamily> {
    design_single_prime_with(h, k, &Budget::from_env())
}

pub fn design_single_prime_with(h: i64, k: i64, budget: &Budget) -> Result<DesignedFamily> {
    let q = single_prime_gate(h, k)?;
    if let Some(d) = passthrough(&q)? {
        return Ok(d);
    }
    let hh = q.numer().to_i64().unwrap();
    let kk = q.denom().to_u64().unwrap();
    let (r, p) = (1..=budget.prime_search)
        .map(|r| (r, 2 * r * kk - 1))
        .find(|&(_, p)| is_prime_u64(p))
        .ok_or(Error::SearchExhausted(budget.prime_search))?;
    let m = p + 1 - 2 * r * hh.unsigned_abs();
    let sign: i8 = if hh > 0 { 1 } else { -1 };
    let mut prod = IntPoly::one();
    for i in 1..=m as i64 {
        prod = prod.mul(&IntPoly::linear_root(i));
    }
    let pb = BigInt::from(p);
    let pp = prod.scale(&(-BigInt::from(sign) * &pb));
    let a = pp.scale(&(BigInt::from(16) * &pb));
    let q_poly = IntPoly::new(vec![BigInt::one(), BigInt::zero(), BigInt::from(4) * &pb]).mul(&pp);

    let closed = BigRational::from_integer(bi(sign as i64))
        * (BigRational::one() - BigRational::new(BigInt::from(m), BigInt::from(p + 1)));
    let qp = q_poly.clone();
    let w = move |t: &BigInt| {
        let x = qp.eval(t);
        if x.is_zero() {
            return 0;
        }
        let e = 1 + val(&x, p);
        let l = legendre(&unit_part(&x, p), p);
        let s = if e % 2 == 0 { 1 } else { -l };
        s
    };
    let centers: Vec<BigInt> = (1..=m as i64).map(bi).collect();
    let integral = local_integral(w, p, &centers, 2)?;
    let from_integral = BigRational::from_integer(bi(sign as i64)) * &integral;
    if closed != q || from_integral != q {
        return Err(Error::InvalidParameter(format!(
            "single-prime design for {q}: closed form {closed}, local integral {from_integral}"
        )));
    }
    DesignedFamily::build(
        format!("W_a(t)(Q(t)) for {q}"),
        a,
        q_poly,
        q,
        Construction::SinglePrime,
        pb,
        Audit::SinglePrime { p, r, m, sign, local_integral: integral },
    )
}

/// Gate for [`design_periodic`]: `h` odd, `|h/k| ≤ 1`, and
/// `|h/k| ≤ 1 − 2^{−v₂(k)}` when `k` is even.
pub fn periodic_gate(h: i64, k: i64) -> Result<BigRational> {
    if k <= 0 {
        return Err(Error::InvalidParameter(format!("denominator {k} must be positive")));
    }
    if h.gcd(&k) != 1 {
        return Err(Error::InvalidParameter(format!("{h}/{k} is not in lowest terms")));
    }
    let q = target(h, k)?;
    if h % 2 == 0 {
        return Err(inadmissible(&q, "numerator must be odd"));
    }
    if q.abs() > BigRational::one() {
        return Err(inadmissible(&q, "|h/k| must not exceed 1"));
    }
    let v = k.trailing_zeros();
    if v > 0 {
        let bound = BigRational::one() - BigRational::new(BigInt::one(), BigInt::one() << v as usize);
        if q.abs() > bound {
            return Err(inadmissible(&q, &format!("|h/k| exceeds 1 − 2^-{v} for v₂(k) = {v}")));
        }
    }
    Ok(q)
}

fn inverse_mod(x: &BigInt, p: u64) -> BigInt {
    let pb = BigInt::from(p);
    let e = x.extended_gcd(&pb);
    e.x.mod_floor(&pb)
}

/// Family with exactly periodic root number and `Av_Z = h/k`.
pub fn design_periodic(h: i64, k: i64) -> Result<DesignedFamily> {
    let q = periodic_gate(h, k)?;
    if let Some(d) = passthrough(&q)? {
        return Ok(d);
    }
    let v2 = k.trailing_zeros();
    let mut blocks: Vec<BlockAudit> = Vec::new();
    let mut exps: Vec<(u64, u32)> = Vec::new();

    // 2-adic block
    if v2 == 0 {
        blocks.push(BlockAudit {
            p: 2,
            u: 1,
            r: 0,
            d: bi(-2),
            m: 0,
            zeros: 0,
            q: IntPoly::one(),
            b: IntPoly::from_i64(&[-2]),
            mean: -BigRational::one(),
        });
        exps.push((2, 3));
    } else {
        let u0 = v2 + 1;
        let z = prescribed_zero_poly(2, u0, 1, 2)?;
        let q0 = z.polynomial(1 << 12)?;
        let r0 = z.r as u32;
        let b0 = q0.pow(2).scale(&bi(2)).sub(&IntPoly::constant(BigInt::one() << (2 * r0 + 2 * u0 - 1) as usize)).neg();
        let mean = BigRational::new(bi(2), BigInt::one() << u0 as usize) - BigRational::one();
        blocks.push(BlockAudit {
            p: 2,
            u: u0,
            r: z.r,
            d: bi(2) - (BigInt::one() << u0 as usize),
            m: 1,
            zeros: 1,
            q: q0,
            b: b0,
            mean,
        });
        exps.push((2, 2 * r0 + 2 * u0 + 1));
    }

    // odd blocks
    let two_part = if v2 == 0 {
        BigRational::one()
    } else {
        let pw = BigInt::one() << v2 as usize;
        BigRational::new(&pw - 1, pw)
    };
    let rest = &q / &two_part;
    let terms: Vec<RatioTerm> = if rest == BigRational::one() {
        vec![]
    } else if rest == -BigRational::one() {
        vec![RatioTerm { d: bi(-3), p: 3, u: 1 }]
    } else {
        let (hn, kd) = (rest.numer().to_i64(), rest.denom().to_i64());
        let (hn, kd) = hn.zip(kd).ok_or_else(|| Error::InvalidParameter("target too large".into()))?;
        decompose_ratio(hn, kd)?.terms
    };
    for t in terms {
        let pu = BigInt::from(t.p).pow(t.u);
        let too_large = || Error::Unsupported(format!("periodic block modulus {}^{} exceeds 64 bits", t.p, t.u));
        let pu64 = pu.to_u64().ok_or_else(too_large)?;
        let m = ((&t.d + &pu) / bi(2)).to_u64().ok_or_else(too_large)?;
        let zeros = if t.p % 4 == 3 { m } else { pu64 - m };
        let z = prescribed_zero_poly(t.p, t.u, zeros, 1)?;
        let qi = z.polynomial(1 << 12)?;
        let r = z.r as u32;
        let pb = BigInt::from(t.p);
        let bi_poly = qi.pow(2).scale(&pb).sub(&IntPoly::constant(pb.pow(2 * r + 2 * t.u)));
        blocks.push(BlockAudit {
            p: t.p,
            u: t.u,
            r: z.r,
            d: t.d.clone(),
            m,
            zeros,
            q: qi,
            b: bi_poly,
            mean: t.value(),
        });
        exps.push((t.p, 2 * r + 2 * t.u + 1));
    }

    let predicted = -blocks.iter().fold(BigRational::one(), |acc, b| acc * &b.mean);
    if predicted != q {
        return Err(Error::InvalidParameter(format!("periodic design for {q} predicts {predicted}")));
    }
    let a = exps.iter().fold(bi(4), |acc, (p, e)| acc * BigInt::from(*p).pow(*e));
    let crt_exponent = 2 * blocks.iter().map(|b| b.u + b.r as u32 + 1).max().unwrap();
    let rad: BigInt = blocks.iter().map(|b| BigInt::from(b.p)).product();
    let mut q_poly = IntPoly::zero();
    for b in &blocks {
        let cof = &rad / BigInt::from(b.p);
        let x = inverse_mod(&cof, b.p);
        let weight = (cof * x).pow(crt_exponent);
        q_poly = q_poly.add(&b.b.scale(&weight));
    }
    let modulus: BigInt = blocks
        .iter()
        .filter(|b| !b.q.is_constant())
        .map(|b| BigInt::from(b.p).pow(b.r as u32 + b.u))
        .product();
    DesignedFamily::build(
        format!("W_a(Q(t)) for {q}"),
        IntPoly::constant(a),
        q_poly,
        q,
        Construction::Periodic,
        modulus,
        Audit::Periodic { blocks, crt_exponent },
    )
}

/// Isotrivial family `W_{−16P(t)}(−P(t))` with `P = k²t² − (k − |h|)²`,
/// negated for negative targets, so that `Av_Q = c_∞(P) = h/k`.
pub fn design_isotrivial(h: i64, k: i64) -> Result<DesignedFamily> {
    let q = target(h, k)?;
    if q.abs() > BigRational::one() {
        return Err(inadmissible(&q, "|h/k| must not exceed 1"));
    }
    let (hn, kd) = (q.numer().clone(), q.denom().clone());
    let b = &kd - hn.abs();
    let mut p = IntPoly::new(vec![-(&b * &b), BigInt::zero(), &kd * &kd]);
    if hn.is_negative() {
        p = p.neg();
    }
    let c = c_infinity(&p)?;
    if c.exact() != Some(&q) {
        return Err(Error::InvalidParameter(format!("isotrivial design for {q} gives c_∞ = {c:?}")));
    }
    DesignedFamily::build(
        format!("W_(-16P)(-P) for {q}"),
        p.scale(&bi(-16)),
        p.neg(),
        q,
        Construction::Isotrivial,
        BigInt::one(),
        Audit::Isotrivial { p, c_infinity: c },
    )
}

// ---------------------------------------------------------------------------
// The archimedean constant

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CInfinity {
    Exact {
        #[serde(serialize_with = "crate::ser::rational")]
        value: BigRational,
    },
    Interval {
        #[serde(serialize_with = "crate::ser::rational")]
        lo: BigRational,
        #[serde(serialize_with = "crate::ser::rational")]
        hi: BigRational,
    },
}

impl CInfinity {
    pub fn exact(&self) -> Option<&BigRational> {
        match self {
            CInfinity::Exact { value } => Some(value),
            CInfinity::Interval { .. } => None,
        }
    }

    pub fn bounds(&self) -> (BigRational, BigRational) {
        match self {
            CInfinity::Exact { value } => (value.clone(), value.clone()),
            CInfinity::Interval { lo, hi } => (lo.clone(), hi.clone()),
        }
    }
}

/// `(1/4)∫_{−1}^{1} sgn P + (1/4)∫_1^∞ (sgn P(x) + sgn P(−x))/x² dx`, the
/// limiting density of `sgn P(r, s)` over coprime pairs. Exact when every
/// real root of `P` is rational, otherwise an interval of width ≤ 10⁻⁶.
pub fn c_infinity(p: &IntPoly) -> Result<CInfinity> {
    if p.is_zero() {
        return Err(Error::InvalidParameter("zero polynomial".into()));
    }
    let deg = p.degree();
    if deg % 2 == 1 {
        return Err(Error::InvalidParameter(format!("c_∞ needs even degree, got {deg}")));
    }
    let rev = IntPoly::new(p.coeffs().iter().rev().cloned().collect());
    let eps = BigRational::new(BigInt::one(), BigInt::from(1_000_000u64 * (2 * deg as u64 + 2)));
    let (a_lo, a_hi) = sign_integral(p, &eps)?;
    let (b_lo, b_hi) = sign_integral(&rev, &eps)?;
    let quarter = BigRational::new(BigInt::one(), bi(4));
    let lo = (a_lo + b_lo) * &quarter;
    let hi = (a_hi + b_hi) * &quarter;
    Ok(if lo == hi { CInfinity::Exact { value: lo } } else { CInfinity::Interval { lo, hi } })
}

fn sgn_at(p: &IntPoly, x: &BigRational) -> i64 {
    let v = p.eval_rat(x);
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

/// Bounds on `∫_{−1}^{1} sgn f`.
fn sign_integral(f: &IntPoly, eps: &BigRational) -> Result<(BigRational, BigRational)> {
    let one = BigRational::one();
    if f.is_constant() {
        let s = sgn_at(f, &BigRational::zero());
        let v = BigRational::from_integer(bi(2 * s));
        return Ok((v.clone(), v));
    }
    let sf = squarefree_part(f);
    let roots: Vec<BigRational> = rational_roots(&sf)?.into_iter().filter(|r| r.abs() < one).collect();
    let mut rest = sf.clone();
    for r in rational_roots(&sf)? {
        let lin = IntPoly::new(vec![-r.numer().clone(), r.denom().clone()]);
        while let Some(g) = rest.div_exact(&lin) {
            rest = g;
        }
    }
    let boxes = isolate_roots(&rest, eps);
    let mut cuts: Vec<BigRational> = vec![-one.clone(), one.clone()];
    cuts.extend(roots);
    for (lo, hi) in &boxes {
        cuts.push(lo.clone());
        cuts.push(hi.clone());
    }
    cuts.sort();
    cuts.dedup();
    let mut lo_sum = BigRational::zero();
    let mut hi_sum = BigRational::zero();
    let two = BigRational::from_integer(bi(2));
    for w in cuts.windows(2) {
        let len = &w[1] - &w[0];
        let uncertain = boxes.iter().any(|(lo, hi)| lo <= &w[0] && &w[1] <= hi);
        if uncertain {
            lo_sum -= &len;
            hi_sum += &len;
        } else {
            let s = BigRational::from_integer(bi(sgn_at(f, &((&w[0] + &w[1]) / &two))));
            lo_sum += &s * &len;
            hi_sum += &s * &len;
        }
    }
    Ok((lo_sum, hi_sum))
}

fn sturm_chain(f: &IntPoly) -> Vec<QPoly> {
    let mut chain = vec![f.to_q(), f.to_q().derivative()];
    while !chain.last().unwrap().is_zero() && chain.last().unwrap().degree() > 0 {
        let n = chain.len();
        let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
        if r.is_zero() {
            break;
        }
        chain.push(r.neg());
    }
    chain
}

fn variations(chain: &[QPoly], x: &BigRational) -> usize {
    let signs: Vec<bool> = chain
        .iter()
        .map(|p| p.eval(x))
        .filter(|v| !v.is_zero())
        .map(|v| v.is_positive())
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Disjoint rational boxes of width ≤ `eps`, each holding one real root of
/// `f` in `(−1, 1)`; `f` must be square-free with no rational roots.
fn isolate_roots(f: &IntPoly, eps: &BigRational) -> Vec<(BigRational, BigRational)> {
    if f.degree() == 0 {
        return vec![];
    }
    let chain = sturm_chain(f);
    let count = |a: &BigRational, b: &BigRational| variations(&chain, a) - variations(&chain, b);
    let two = BigRational::from_integer(bi(2));
    let mut out = Vec::new();
    let mut stack = vec![(-BigRational::one(), BigRational::one())];
    while let Some((a, b)) = stack.pop() {
        let n = count(&a, &b);
        if n == 0 {
            continue;
        }
        if n == 1 && &(&b - &a) <= eps {
            out.push((a, b));
            continue;
        }
        let mid = (&a + &b) / &two;
        stack.push((a, mid.clone()));
        stack.push((mid, b));
    }
    out.sort();
    out
}

// ---------------------------------------------------------------------------
// Independent validation through the closed root-number formula

/// Root numbers of `W_{a(t)}(Q(t))` from the closed formula alone. The
/// primes of `a(r, s)` are found by splitting off the rational linear
/// factors of `a`, so values built from many small factors stay cheap.
#[derive(Debug, Clone)]
pub struct CompositeEvaluator {
    a: IntPoly,
    q: IntPoly,
    degree: usize,
    content_primes: Vec<BigInt>,
    linear: Vec<IntPoly>,
    cofactor: IntPoly,
}

impl CompositeEvaluator {
    pub fn new(a: &IntPoly, q: &IntPoly) -> Result<CompositeEvaluator> {
        if a.is_zero() {
            return Err(Error::InvalidParameter("a(t) vanishes identically".into()));
        }
        let d = a.degree().max(q.degree());
        let degree = d + d % 2;
        let content_primes = factorize(&a.content())?.factors.into_iter().map(|(p, _)| p).collect();
        let mut cofactor = a.primitive();
        let mut linear = Vec::new();
        if !cofactor.is_constant() {
            for r in rational_roots(&cofactor)? {
                let lin = IntPoly::new(vec![-r.numer().clone(), r.denom().clone()]);
                while let Some(g) = cofactor.div_exact(&lin) {
                    cofactor = g;
                }
                linear.push(lin);
            }
        }
        Ok(CompositeEvaluator { a: a.clone(), q: q.clone(), degree, content_primes, linear, cofactor })
    }

    /// `ε` at `t = r/s` (`s > 0`, coprime), or 0 where `a` vanishes.
    pub fn sign_at(&self, r: &BigInt, s: &BigInt) -> Result<i8> {
        let av = self.a.eval_homogeneous(r, s, self.degree);
        if av.is_zero() {
            return Ok(0);
        }
        let qv = self.q.eval_homogeneous(r, s, self.degree);
        let mut primes = self.content_primes.clone();
        let mut add = |n: BigInt| -> Result<()> {
            if !n.is_zero() {
                primes.extend(factorize(&n)?.factors.into_iter().map(|(p, _)| p));
            }
            Ok(())
        };
        for l in &self.linear {
            add(l.eval_homogeneous(r, s, 1))?;
        }
        add(self.cofactor.eval_homogeneous(r, s, self.cofactor.degree()))?;
        add(s.clone())?;
        primes.sort();
        primes.dedup();
        primes.retain(|p| p != &bi(2));
        Ok(eps_wa_with(&av, &primes, &qv))
    }

    pub fn sign_at_int(&self, t: i64) -> Result<i8> {
        self.sign_at(&bi(t), &BigInt::one())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundTrip {
    #[serde(serialize_with = "crate::ser::rational")]
    pub predicted: BigRational,
    pub empirical: EmpiricalAverage,
    pub tolerance: f64,
    pub deviation: f64,
    pub pass: bool,
}

/// Empirical `Av_Z` over `|t| ≤ T` against the prediction, with tolerance
/// `0.02 + modulus/T`.
pub fn roundtrip_z(design: &DesignedFamily, t_max: u64) -> Result<RoundTrip> {
    let ev = design.evaluator()?;
    let emp = empirical_av_z(|t| ev.sign_at_int(t), t_max)?;
    let modulus = crate::curves::to_f64(&BigRational::from_integer(design.modulus.clone()));
    let tolerance = 0.02 + modulus / t_max as f64;
    let deviation = (emp.mean_f64() - crate::curves::to_f64(&design.predicted_average)).abs();
    Ok(RoundTrip { predicted: design.predicted_average.clone(), empirical: emp, tolerance, deviation, pass: deviation <= tolerance })
}

/// Empirical `Av_Q` over coprime `r/s` with `|r|, s ≤ T`, tolerance 0.02.
pub fn roundtrip_q(design: &DesignedFamily, t_max: u64) -> Result<RoundTrip> {
    let ev = design.evaluator()?;
    let emp = empirical_av_q(|x| ev.sign_at(x.numer(), x.denom()), t_max)?;
    let tolerance = 0.02;
    let deviation = (emp.mean_f64() - crate::curves::to_f64(&design.predicted_average)).abs();
    Ok(RoundTrip { predicted: design.predicted_average.clone(), empirical: emp, tolerance, deviation, pass: deviation <= tolerance })
}

/// Number of `t` with `|t| ≤ span` whose root number differs from that of
/// `t mod modulus`.
pub fn periodicity_defects(design: &DesignedFamily, span: i64) -> Result<u64> {
    let ev = design.evaluator()?;
    let m = design
        .modulus
        .to_i64()
        .ok_or_else(|| Error::InvalidParameter("modulus exceeds 64 bits".into()))?;
    let base: Vec<i8> = (0..m).map(|t| ev.sign_at_int(t)).collect::<Result<_>>()?;
    let mut defects = 0;
    for t in -span..=span {
        let e = ev.sign_at_int(t)?;
        if e != 0 && e != base[t.rem_euclid(m) as usize] {
            defects += 1;
        }
    }
    Ok(defects)
}

/// `sgn P(r, s)` with `P` homogenised to its own (even) degree.
pub fn form_sign(p: &IntPoly, r: &BigInt, s: &BigInt) -> i8 {
    let v = p.eval_homogeneous(r, s, p.degree());
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    #[test]
    fn ratio_examples() {
        let d = decompose_ratio(1, 3).unwrap();
        assert_eq!(d.terms, vec![RatioTerm { d: bi(1), p: 3, u: 1 }]);
        let d = decompose_ratio(-2, 5).unwrap();
        assert_eq!(d.terms, vec![RatioTerm { d: bi(-2), p: 5, u: 1 }]);
        for (h, k) in [(1, 15), (7, 15), (-13, 105), (1, 1155), (3, 10), (-1, 6), (-2631, 2684), (649, 655), (1671, 1691)] {
            let d = decompose_ratio(h, k).unwrap();
            assert_eq!(d.product(), rat(h, k));
            assert!(d.terms.iter().all(|t| t.value().abs() < BigRational::one()));
        }
        assert!(decompose_ratio(0, 3).is_err());
        assert!(decompose_ratio(3, 3).is_err());
    }

    #[test]
    fn prescribed_zero_examples() {
        let z = prescribed_zero_poly(3, 1, 1, 1).unwrap();
        assert_eq!(z.factors, vec![(0, 1)]);
        assert_eq!(z.r, 0);
        assert!(z.enumerated);
        let z = prescribed_zero_poly(2, 3, 7, 1).unwrap();
        assert_eq!(z.factors.iter().map(|f| f.0).collect::<Vec<_>>(), vec![0, 4, 2, 6, 1, 5, 3]);
        assert_eq!(z.s, 2187);
        let z = prescribed_zero_poly(5, 2, 13, 2).unwrap();
        assert_eq!(z.s, 16384);
        let z = prescribed_zero_poly(2, 3, 1, 2).unwrap();
        assert_eq!((z.r, z.factors.clone(), z.enumerated), (3, vec![(0, 2)], true));
        let z = prescribed_zero_poly(7, 1, 0, 1).unwrap();
        assert_eq!(z.degree(), 0);
    }

    #[test]
    fn c_infinity_examples() {
        let half = c_infinity(&IntPoly::from_i64(&[-1, 0, 4])).unwrap();
        assert_eq!(half.exact(), Some(&rat(1, 2)));
        assert_eq!(c_infinity(&IntPoly::from_i64(&[1, 0, 1])).unwrap().exact(), Some(&rat(1, 1)));
        assert_eq!(c_infinity(&IntPoly::from_i64(&[-1, 0, -1])).unwrap().exact(), Some(&rat(-1, 1)));
        assert!(c_infinity(&IntPoly::from_i64(&[1, 1])).is_err());
        // x² − 2: c_∞ = √2/2 − 1
        let c = c_infinity(&IntPoly::from_i64(&[-2, 0, 1])).unwrap();
        let (lo, hi) = c.bounds();
        let target = 2f64.sqrt() / 2.0 - 1.0;
        assert!(crate::curves::to_f64(&(&hi - &lo)) <= 1e-6);
        assert!(crate::curves::to_f64(&lo) <= target + 1e-12 && target - 1e-12 <= crate::curves::to_f64(&hi));
    }

    #[test]
    fn single_prime_parameters() {
        let d = design_single_prime(1, 3).unwrap();
        match d.audit {
            Audit::SinglePrime { p, r, m, .. } => assert_eq!((p, r, m), (5, 1, 4)),
            _ => panic!(),
        }
        let d = design_single_prime(-2, 5).unwrap();
        match d.audit {
            Audit::SinglePrime { p, m, .. } => assert_eq!((p, m), (19, 12)),
            _ => panic!(),
        }
        assert_eq!(design_single_prime(-1, 1).unwrap().construction, Construction::Passthrough);
    }

    #[test]
    fn periodic_gate_rules() {
        assert!(periodic_gate(2, 5).is_err());
        assert!(periodic_gate(1, 2).is_ok());
        assert!(periodic_gate(3, 4).is_ok());
        assert!(periodic_gate(5, 6).is_err());
        assert!(periodic_gate(7, 8).is_ok());
        assert!(periodic_gate(3, 10).is_ok());
    }
}
