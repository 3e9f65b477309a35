//! Univariate polynomials over Z and Q, rational functions, resultants
//! and factorization over Q (degree at most 6).

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::algebra::{is_prime_u64, modu};
use crate::error::{Error, Result};

/// Integer polynomial, constant term first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl Serialize for IntPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        IntPoly::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPoly::constant(BigInt::one())
    }

    pub fn x() -> Self {
        IntPoly::from_i64(&[0, 1])
    }

    pub fn constant(c: BigInt) -> Self {
        IntPoly::new(vec![c])
    }

    /// `x - r`
    pub fn linear_root(r: i64) -> Self {
        IntPoly::from_i64(&[-r, 1])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divide by the content and make the leading coefficient positive.
    pub fn primitive(&self) -> IntPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = self.content();
        if self.leading().is_negative() {
            c = -c;
        }
        IntPoly::new(self.coeffs.iter().map(|x| x / &c).collect())
    }

    pub fn scale(&self, k: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn add(&self, o: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, o: &IntPoly) -> IntPoly {
        if self.is_zero() || o.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    pub fn pow(&self, e: u32) -> IntPoly {
        let mut r = IntPoly::one();
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_i64(&self, x: i64) -> BigInt {
        self.eval(&BigInt::from(x))
    }

    pub fn eval_rat(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + BigRational::from_integer(c.clone()))
    }

    /// Homogenised value `s^deg * P(r/s)`, with `deg` given by the caller.
    pub fn eval_homogeneous(&self, r: &BigInt, s: &BigInt, deg: usize) -> BigInt {
        let mut acc = BigInt::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            acc += c * num_traits::pow(r.clone(), i) * num_traits::pow(s.clone(), deg - i);
        }
        acc
    }

    /// Coefficients reduced modulo a word-size prime.
    pub fn reduce_mod(&self, p: u64) -> Vec<u64> {
        self.coeffs.iter().map(|c| modu(c, p)).collect()
    }

    /// `P(Q(x))`
    pub fn compose(&self, q: &IntPoly) -> IntPoly {
        self.coeffs.iter().rev().fold(IntPoly::zero(), |acc, c| acc.mul(q).add(&IntPoly::constant(c.clone())))
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect())
    }

    pub fn to_q(&self) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect())
    }

    /// Exact quotient over Z, if the division leaves no remainder.
    pub fn div_exact(&self, d: &IntPoly) -> Option<IntPoly> {
        let (q, r) = self.to_q().div_rem(&d.to_q());
        if !r.is_zero() {
            return None;
        }
        if q.coeffs().iter().all(|c| c.is_integer()) {
            Some(IntPoly::new(q.coeffs().iter().map(|c| c.to_integer()).collect()))
        } else {
            None
        }
    }

    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if i == 0 {
                s.push_str(&a.to_string());
            } else if a.is_one() {
                s.push_str(&mono);
            } else {
                s.push_str(&format!("{a}*{mono}"));
            }
        }
        s
    }

    /// Parse an integer-coefficient expression in one variable, e.g. `3t^2 - (t+1)*(t-7)`.
    pub fn parse(src: &str, var: &str) -> Result<IntPoly> {
        Parser::new(src, var).parse()
    }

    fn cmp_key(&self, o: &IntPoly) -> Ordering {
        self.degree().cmp(&o.degree()).then_with(|| self.coeffs.cmp(&o.coeffs))
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("t"))
    }
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    var: &'a str,
}

impl<'a> Parser<'a> {
    fn new(src: &str, var: &'a str) -> Self {
        Parser { chars: src.chars().filter(|c| !c.is_whitespace()).collect(), pos: 0, var }
    }

    fn parse(mut self) -> Result<IntPoly> {
        let p = self.expr()?;
        if self.pos != self.chars.len() {
            return Err(Error::Parse(format!("unexpected '{}' at {}", self.chars[self.pos], self.pos)));
        }
        Ok(p)
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<IntPoly> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                '+' => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                '-' => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<IntPoly> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.unary()?);
                }
                Some(c) if c == '(' || c.is_ascii_digit() || self.at_var() => {
                    acc = acc.mul(&self.power()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<IntPoly> {
        match self.peek() {
            Some('-') => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<IntPoly> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let e = self.integer()?;
            let e = e.to_u32().filter(|&e| e <= 64).ok_or_else(|| Error::Parse("bad exponent".into()))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn at_var(&self) -> bool {
        let v: Vec<char> = self.var.chars().collect();
        self.chars.len() >= self.pos + v.len() && self.chars[self.pos..self.pos + v.len()] == v[..]
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::Parse(format!("expected integer at {start}")));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| Error::Parse(s))
    }

    fn atom(&mut self) -> Result<IntPoly> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(Error::Parse("missing ')'".into()));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => Ok(IntPoly::constant(self.integer()?)),
            _ if self.at_var() => {
                self.pos += self.var.chars().count();
                Ok(IntPoly::x())
            }
            Some(c) => Err(Error::Parse(format!("unexpected '{c}' at {}", self.pos))),
            None => Err(Error::Parse("unexpected end of input".into())),
        }
    }
}

/// Polynomial with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct QPoly {
    coeffs: Vec<BigRational>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        QPoly::constant(BigRational::one())
    }

    pub fn x() -> Self {
        QPoly::new(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn constant(c: BigRational) -> Self {
        QPoly::new(vec![c])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, o: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        QPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        QPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn neg(&self) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, k: &BigRational) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn mul(&self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }

    pub fn div_rem(&self, d: &QPoly) -> (QPoly, QPoly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let mut r = self.coeffs.clone();
        let dd = d.degree();
        let lc = d.leading();
        if r.len() < d.coeffs.len() {
            return (QPoly::zero(), self.clone());
        }
        let mut q = vec![BigRational::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = &r[i + dd] / &lc;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[i + j] -= &c * dc;
                }
            }
            q[i] = c;
        }
        r.truncate(dd);
        (QPoly::new(q), QPoly::new(r))
    }

    pub fn monic(&self) -> QPoly {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.leading();
        QPoly::new(self.coeffs.iter().map(|c| c / &lc).collect())
    }

    pub fn gcd(&self, o: &QPoly) -> QPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> QPoly {
        QPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// Primitive integer polynomial proportional to this one.
    pub fn to_primitive_int(&self) -> IntPoly {
        let l = self.coeffs.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        IntPoly::new(self.coeffs.iter().map(|c| (c * BigRational::from_integer(l.clone())).to_integer()).collect())
            .primitive()
    }

    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            let cs = if c.is_integer() { c.numer().to_string() } else { format!("({c})") };
            parts.push(if i == 0 { cs } else { format!("{cs}*{mono}") });
        }
        parts.join(" + ")
    }
}

/// Element of Q(t): reduced quotient with monic denominator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: QPoly,
    den: QPoly,
}

impl RatFunc {
    pub fn new(num: QPoly, den: QPoly) -> Result<RatFunc> {
        if den.is_zero() {
            return Err(Error::InvalidParameter("zero denominator".into()));
        }
        if num.is_zero() {
            return Ok(RatFunc { num, den: QPoly::one() });
        }
        let g = num.gcd(&den);
        let (n, _) = num.div_rem(&g);
        let (d, _) = den.div_rem(&g);
        let lc = d.leading();
        Ok(RatFunc { num: n.scale(&lc.recip()), den: d.monic() })
    }

    pub fn from_poly(p: QPoly) -> RatFunc {
        RatFunc { num: p, den: QPoly::one() }
    }

    pub fn from_int_poly(p: &IntPoly) -> RatFunc {
        RatFunc::from_poly(p.to_q())
    }

    pub fn from_ratio(num: &IntPoly, den: &IntPoly) -> Result<RatFunc> {
        RatFunc::new(num.to_q(), den.to_q())
    }

    pub fn constant(c: BigRational) -> RatFunc {
        RatFunc::from_poly(QPoly::constant(c))
    }

    pub fn num(&self) -> &QPoly {
        &self.num
    }

    pub fn den(&self) -> &QPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn eval(&self, t: &BigRational) -> Option<BigRational> {
        let d = self.den.eval(t);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(t) / d)
        }
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        RatFunc::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den)).unwrap()
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        RatFunc::new(self.num.mul(&o.den).sub(&o.num.mul(&self.den)), self.den.mul(&o.den)).unwrap()
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        RatFunc::new(self.num.mul(&o.num), self.den.mul(&o.den)).unwrap()
    }

    pub fn div(&self, o: &RatFunc) -> Option<RatFunc> {
        if o.is_zero() {
            return None;
        }
        RatFunc::new(self.num.mul(&o.den), self.den.mul(&o.num)).ok()
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == 0 && self.den.leading().is_one() {
            write!(f, "{}", self.num.display_in("t"))
        } else {
            write!(f, "({}) / ({})", self.num.display_in("t"), self.den.display_in("t"))
        }
    }
}

/// Primitive gcd over Q with positive leading coefficient.
pub fn poly_gcd(p: &IntPoly, q: &IntPoly) -> IntPoly {
    if p.is_zero() {
        return q.primitive();
    }
    if q.is_zero() {
        return p.primitive();
    }
    p.to_q().gcd(&q.to_q()).to_primitive_int()
}

/// `P / gcd(P, P')`, primitive.
pub fn squarefree_part(p: &IntPoly) -> IntPoly {
    if p.is_constant() {
        return p.primitive();
    }
    let g = poly_gcd(p, &p.derivative());
    p.to_q().div_rem(&g.to_q()).0.to_primitive_int()
}

/// Resultant in `z` of two polynomials whose coefficients lie in Z[x],
/// given as coefficient lists (constant term first). Fraction-free
/// elimination on the Sylvester matrix.
pub fn resultant_poly(p: &[IntPoly], q: &[IntPoly]) -> IntPoly {
    let m = p.len() - 1;
    let n = q.len() - 1;
    let size = m + n;
    if size == 0 {
        return IntPoly::one();
    }
    let mut a = vec![vec![IntPoly::zero(); size]; size];
    for i in 0..n {
        for (j, c) in p.iter().rev().enumerate() {
            a[i][i + j] = c.clone();
        }
    }
    for i in 0..m {
        for (j, c) in q.iter().rev().enumerate() {
            a[n + i][i + j] = c.clone();
        }
    }
    let mut sign = false;
    let mut prev = IntPoly::one();
    for k in 0..size {
        if a[k][k].is_zero() {
            match (k + 1..size).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = !sign;
                }
                None => return IntPoly::zero(),
            }
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let num = a[i][j].mul(&a[k][k]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = num.div_exact(&prev).expect("fraction-free elimination is exact");
            }
            a[i][k] = IntPoly::zero();
        }
        prev = a[k][k].clone();
    }
    let det = a[size - 1][size - 1].clone();
    if sign {
        det.neg()
    } else {
        det
    }
}

/// Resultant of two integer polynomials.
pub fn resultant(p: &IntPoly, q: &IntPoly) -> BigInt {
    let lift = |f: &IntPoly| f.coeffs().iter().map(|c| IntPoly::constant(c.clone())).collect::<Vec<_>>();
    resultant_poly(&lift(p), &lift(q)).coeff(0)
}

/// Factorization over Q: `content * prod factor^mult`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QFactorization {
    #[serde(serialize_with = "crate::ser::rational")]
    pub content: BigRational,
    pub factors: Vec<(IntPoly, u32)>,
}

impl QFactorization {
    /// Number of irreducible factors counted with multiplicity.
    pub fn count_with_multiplicity(&self) -> u32 {
        self.factors.iter().map(|(_, m)| m).sum()
    }

    pub fn count_distinct(&self) -> usize {
        self.factors.len()
    }

    pub fn expand(&self) -> QPoly {
        self.factors
            .iter()
            .fold(QPoly::constant(self.content.clone()), |acc, (f, m)| (0..*m).fold(acc, |a, _| a.mul(&f.to_q())))
    }
}

/// Each square-free component of the input must have degree at most 6.
pub fn factor_over_q(p: &IntPoly) -> Result<QFactorization> {
    if p.is_zero() {
        return Err(Error::InvalidParameter("cannot factor the zero polynomial".into()));
    }
    let prim = p.primitive();
    let content = BigRational::new(p.leading(), prim.leading());
    let parts = yun(&prim);
    if let Some((g, _)) = parts.iter().find(|(g, _)| g.degree() > 6) {
        return Err(Error::UnsupportedDegree(g.degree()));
    }
    let mut factors: Vec<(IntPoly, u32)> = Vec::new();
    for (g, mult) in parts {
        for f in factor_squarefree(&g) {
            factors.push((f, mult));
        }
    }
    factors.sort_by(|a, b| a.0.cmp_key(&b.0).then(a.1.cmp(&b.1)));
    Ok(QFactorization { content, factors })
}

/// Square-free decomposition (Yun), primitive parts, nonconstant only.
fn yun(f: &IntPoly) -> Vec<(IntPoly, u32)> {
    let mut out = Vec::new();
    if f.is_constant() {
        return out;
    }
    let fq = f.to_q();
    let df = fq.derivative();
    let a0 = fq.gcd(&df);
    let mut b = fq.div_rem(&a0).0;
    let mut c = df.div_rem(&a0).0;
    let mut d = c.sub(&b.derivative());
    let mut i = 1;
    while b.degree() > 0 {
        let a = b.gcd(&d);
        if a.degree() > 0 {
            out.push((a.to_primitive_int(), i));
        }
        b = b.div_rem(&a).0;
        c = d.div_rem(&a).0;
        d = c.sub(&b.derivative());
        i += 1;
    }
    out
}

fn factor_squarefree(f: &IntPoly) -> Vec<IntPoly> {
    let f = f.primitive();
    if f.degree() <= 1 {
        return vec![f];
    }
    if f.coeff(0).is_zero() {
        let rest = f.div_exact(&IntPoly::x()).unwrap();
        let mut out = vec![IntPoly::x()];
        out.extend(factor_squarefree(&rest));
        return out;
    }
    zassenhaus(&f)
}

// ---- arithmetic in F_p[x], coefficients as u64, constant term first ----

fn ptrim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod(a: u64, p: u64) -> u64 {
    crate::algebra::powmod(a, p - 2, p)
}

fn psub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    ptrim((0..n).map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p).collect())
}

fn pmul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + crate::algebra::mulmod(x, y, p)) % p;
        }
    }
    ptrim(out)
}

fn pdivrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let b = ptrim(b.to_vec());
    let mut r = ptrim(a.to_vec());
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let db = b.len() - 1;
    let inv = inv_mod(*b.last().unwrap(), p);
    let mut q = vec![0u64; r.len() - db];
    for i in (0..q.len()).rev() {
        let c = crate::algebra::mulmod(r[i + db], inv, p);
        if c != 0 {
            for (j, &bc) in b.iter().enumerate() {
                r[i + j] = (r[i + j] + p - crate::algebra::mulmod(c, bc, p)) % p;
            }
        }
        q[i] = c;
    }
    r.truncate(db);
    (ptrim(q), ptrim(r))
}

fn pmonic(a: &[u64], p: u64) -> Vec<u64> {
    let a = ptrim(a.to_vec());
    match a.last() {
        None => a,
        Some(&lc) => {
            let inv = inv_mod(lc, p);
            a.iter().map(|&c| crate::algebra::mulmod(c, inv, p)).collect()
        }
    }
}

fn pgcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (ptrim(a.to_vec()), ptrim(b.to_vec()));
    while !b.is_empty() {
        let (_, r) = pdivrem(&a, &b, p);
        a = b;
        b = r;
    }
    pmonic(&a, p)
}

/// Extended gcd: returns (g, s, t) with s*a + t*b = g monic.
fn pxgcd(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>, Vec<u64>) {
    let (mut r0, mut r1) = (ptrim(a.to_vec()), ptrim(b.to_vec()));
    let (mut s0, mut s1) = (vec![1u64], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = pdivrem(&r0, &r1, p);
        let s2 = psub(&s0, &pmul(&q, &s1, p), p);
        let t2 = psub(&t0, &pmul(&q, &t1, p), p);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
        t0 = t1;
        t1 = t2;
    }
    let inv = inv_mod(*r0.last().unwrap(), p);
    let sc = |v: &[u64]| ptrim(v.iter().map(|&c| crate::algebra::mulmod(c, inv, p)).collect());
    (sc(&r0), sc(&s0), sc(&t0))
}

fn ppowmod(base: &[u64], mut e: u128, m: &[u64], p: u64) -> Vec<u64> {
    let mut r = vec![1u64];
    let mut b = pdivrem(base, m, p).1;
    while e > 0 {
        if e & 1 == 1 {
            r = pdivrem(&pmul(&r, &b, p), m, p).1;
        }
        b = pdivrem(&pmul(&b, &b, p), m, p).1;
        e >>= 1;
    }
    r
}

/// Distinct-degree then equal-degree factorization of a monic square-free polynomial.
fn factor_mod_p(f: &[u64], p: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut f = pmonic(f, p);
    let x = vec![0u64, 1];
    let mut h = x.clone();
    let mut d = 1;
    while f.len() - 1 >= 2 * d {
        h = ppowmod(&h, p as u128, &f, p);
        let g = pgcd(&psub(&h, &x, p), &f, p);
        if g.len() > 1 {
            edf(&g, d, p, &mut out);
            f = pdivrem(&f, &g, p).0;
            h = pdivrem(&h, &f, p).1;
        }
        d += 1;
    }
    if f.len() > 1 {
        out.push(pmonic(&f, p));
    }
    out
}

fn edf(g: &[u64], d: usize, p: u64, out: &mut Vec<Vec<u64>>) {
    let n = g.len() - 1;
    if n == d {
        out.push(g.to_vec());
        return;
    }
    let e = ((p as u128).pow(d as u32) - 1) / 2;
    let mut seed = 0x9e37_79b9_7f4a_7c15u64;
    loop {
        let a: Vec<u64> = (0..n)
            .map(|_| {
                seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                (seed >> 17) % p
            })
            .collect();
        let a = ptrim(a);
        if a.len() < 2 {
            continue;
        }
        let b = psub(&ppowmod(&a, e, g, p), &[1], p);
        let c = pgcd(&b, g, p);
        if c.len() > 1 && c.len() < g.len() {
            edf(&c, d, p, out);
            edf(&pdivrem(g, &c, p).0, d, p, out);
            return;
        }
    }
}

// ---- arithmetic modulo p^k with BigInt coefficients ----

fn mtrim(mut a: Vec<BigInt>) -> Vec<BigInt> {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

fn mred(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    mtrim(a.iter().map(|c| c.mod_floor(m)).collect())
}

fn mmul(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    mred(&out, m)
}

fn to_big(a: &[u64]) -> Vec<BigInt> {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

fn to_small(a: &[BigInt], p: u64) -> Vec<u64> {
    ptrim(a.iter().map(|c| modu(c, p)).collect())
}

/// Lift `f ≡ lc*g*h (mod p)` (g, h monic, coprime) to modulus `p^k`.
fn hensel_pair(f: &IntPoly, g: &[u64], h: &[u64], p: u64, k: u32) -> (Vec<BigInt>, Vec<BigInt>) {
    let lc = f.leading();
    let (one, _, t) = pxgcd(g, h, p);
    debug_assert_eq!(one, vec![1]);
    let pb = BigInt::from(p);
    let lc_inv_p = inv_mod(modu(&lc, p), p);
    let (mut gb, mut hb) = (to_big(g), to_big(h));
    let mut pj = pb.clone();
    for _ in 1..k {
        let next = &pj * &pb;
        let prod = mmul(&mmul(&[lc.clone()], &gb, &next), &hb, &next);
        let diff = mred(&f.coeffs().iter().zip(prod.iter().chain(std::iter::repeat(&BigInt::zero()))).map(|(a, b)| a - b).collect::<Vec<_>>(), &next);
        let e: Vec<u64> = ptrim(diff.iter().map(|c| modu(&(c / &pj), p)).collect());
        let e: Vec<u64> = e.iter().map(|&c| crate::algebra::mulmod(c, lc_inv_p, p)).collect();
        // h*dg + g*dh = e with deg dg < deg g
        let dg = pdivrem(&pmul(&t, &e, p), g, p).1;
        let dh = pdivrem(&psub(&e, &pmul(h, &dg, p), p), g, p).0;
        let add = |x: &[BigInt], d: &[u64]| -> Vec<BigInt> {
            let n = x.len().max(d.len());
            mred(
                &(0..n)
                    .map(|i| x.get(i).cloned().unwrap_or_default() + &pj * BigInt::from(d.get(i).copied().unwrap_or(0)))
                    .collect::<Vec<_>>(),
                &next,
            )
        };
        gb = add(&gb, &dg);
        hb = add(&hb, &dh);
        pj = next;
    }
    (gb, hb)
}

fn hensel_multi(f: &IntPoly, factors: &[Vec<u64>], p: u64, k: u32) -> Vec<Vec<BigInt>> {
    let m = BigInt::from(p).pow(k);
    if factors.len() == 1 {
        let inv = modinv_big(&f.leading(), &m);
        return vec![mred(&f.coeffs().iter().map(|c| c * &inv).collect::<Vec<_>>(), &m)];
    }
    let mid = factors.len() / 2;
    let g = factors[..mid].iter().fold(vec![1u64], |acc, x| pmul(&acc, x, p));
    let h = factors[mid..].iter().fold(vec![1u64], |acc, x| pmul(&acc, x, p));
    let (gb, hb) = hensel_pair(f, &g, &h, p, k);
    // recurse on the monic lifted pieces, which are exact integer polys mod p^k
    let gi = IntPoly::new(gb);
    let hi = IntPoly::new(hb);
    let mut out = hensel_multi_mod(&gi, &factors[..mid], p, k, &m);
    out.extend(hensel_multi_mod(&hi, &factors[mid..], p, k, &m));
    out
}

fn hensel_multi_mod(f: &IntPoly, factors: &[Vec<u64>], p: u64, k: u32, m: &BigInt) -> Vec<Vec<BigInt>> {
    if factors.len() == 1 {
        return vec![mred(f.coeffs(), m)];
    }
    let out = hensel_multi(f, factors, p, k);
    out.into_iter().map(|v| mred(&v, m)).collect()
}

fn modinv_big(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    e.x.mod_floor(m)
}

fn symmetric(a: &[BigInt], m: &BigInt) -> IntPoly {
    let half: BigInt = m / 2;
    IntPoly::new(
        a.iter()
            .map(|c| {
                let c = c.mod_floor(m);
                if c > half {
                    c - m
                } else {
                    c
                }
            })
            .collect(),
    )
}

/// Factor a primitive square-free polynomial of degree >= 2 over Z.
fn zassenhaus(f: &IntPoly) -> Vec<IntPoly> {
    let n = f.degree();
    let lc = f.leading();
    let df = f.derivative();
    let mut p = 3u64;
    let modular = loop {
        if is_prime_u64(p) && !(modu(&lc, p) == 0) {
            let fp = to_small(f.coeffs(), p);
            let dp = to_small(df.coeffs(), p);
            if fp.len() == n + 1 && pgcd(&fp, &dp, p) == vec![1] {
                break factor_mod_p(&fp, p);
            }
        }
        p += 2;
    };
    if modular.len() == 1 {
        return vec![f.clone()];
    }
    // coefficient bound for lc times any factor
    let norm2: BigInt = f.coeffs().iter().map(|c| c * c).sum::<BigInt>().sqrt() + 1;
    let bound = (BigInt::one() << n) * norm2 * lc.abs() * 2;
    let mut k = 1u32;
    while BigInt::from(p).pow(k) <= bound {
        k += 1;
    }
    let m = BigInt::from(p).pow(k);
    let mut lifted = hensel_multi(f, &modular, p, k);
    let mut rest = f.clone();
    let mut found = Vec::new();
    let mut size = 1;
    while 2 * size <= lifted.len() {
        let mut hit = None;
        for subset in combinations(lifted.len(), size) {
            let rlc = rest.leading();
            let prod = subset.iter().fold(vec![rlc.clone()], |acc, &i| mmul(&acc, &lifted[i], &m));
            let cand = symmetric(&prod, &m).primitive();
            if cand.degree() == 0 {
                continue;
            }
            if let Some(q) = rest.div_exact(&cand) {
                hit = Some((subset, cand, q));
                break;
            }
        }
        match hit {
            Some((subset, cand, q)) => {
                found.push(cand);
                rest = q.primitive();
                lifted = lifted.into_iter().enumerate().filter(|(i, _)| !subset.contains(i)).map(|(_, v)| v).collect();
            }
            None => size += 1,
        }
    }
    found.push(rest.primitive());
    found
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Certificate that a factor of degree at most 3 is irreducible over Q:
/// no rational root, and for quadratics a non-square discriminant.
pub fn low_degree_irreducible(f: &IntPoly) -> Option<bool> {
    match f.degree() {
        1 => Some(true),
        2 => {
            let d = f.coeff(1) * f.coeff(1) - BigInt::from(4) * f.coeff(2) * f.coeff(0);
            Some(!crate::algebra::is_square(&d))
        }
        3 => Some(rational_roots(f).ok()?.is_empty()),
        _ => None,
    }
}

/// Rational roots by the divisor test on constant and leading coefficients.
pub fn rational_roots(f: &IntPoly) -> Result<Vec<BigRational>> {
    if f.is_zero() {
        return Err(Error::InvalidParameter("zero polynomial".into()));
    }
    let mut roots = Vec::new();
    let mut g = f.clone();
    while !g.is_zero() && g.coeff(0).is_zero() {
        if !roots.contains(&BigRational::zero()) {
            roots.push(BigRational::zero());
        }
        g = g.div_exact(&IntPoly::x()).unwrap();
    }
    if g.degree() == 0 {
        return Ok(roots);
    }
    let num_divs = divisors(&g.coeff(0))?;
    let den_divs = divisors(&g.leading())?;
    for a in &num_divs {
        for b in &den_divs {
            for sgn in [1i64, -1] {
                let r = BigRational::new(a * sgn, b.clone());
                if !roots.contains(&r) && g.eval_rat(&r).is_zero() {
                    roots.push(r);
                }
            }
        }
    }
    roots.sort();
    Ok(roots)
}

fn divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    let f = crate::algebra::factorize(n)?;
    let mut out = vec![BigInt::one()];
    for (p, e) in &f.factors {
        let mut next = Vec::new();
        for d in &out {
            let mut pk = BigInt::one();
            for _ in 0..=*e {
                next.push(d * &pk);
                pk *= p;
            }
        }
        out = next;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(poly_gcd(&ip(&[-1, 0, 1]), &ip(&[-1, 1])), ip(&[-1, 1]));
        assert_eq!(poly_gcd(&ip(&[4, 2, 6]), &IntPoly::zero()), ip(&[2, 1, 3]));
    }

    #[test]
    fn resultant_of_linear_factors() {
        let z = |c: i64| IntPoly::from_i64(&[c]);
        // Res_z(z - a, z - b) with a = x, b = 3 is x - 3.
        let p = vec![ip(&[0, -1]), z(1)];
        let q = vec![z(-3), z(1)];
        assert_eq!(resultant_poly(&p, &q), ip(&[3, -1]).neg());
        assert_eq!(resultant(&ip(&[-2, 1]), &ip(&[-5, 1])), BigInt::from(-3));
    }

    #[test]
    fn squarefree_examples() {
        let p = ip(&[-1, 1]).pow(2).mul(&ip(&[3, 1]));
        assert_eq!(squarefree_part(&p), ip(&[-1, 1]).mul(&ip(&[3, 1])));
        assert_eq!(squarefree_part(&ip(&[0, 0, 0, 0, 0, 1])), ip(&[0, 1]));
    }

    #[test]
    fn factor_l_sextic() {
        let r = ip(&[-64, 0, 48, 0, -2172, 0, 1]);
        let f = factor_over_q(&r).unwrap();
        assert_eq!(f.factors.len(), 2);
        assert!(f.factors.contains(&(ip(&[-8, -28, -46, 1]), 1)));
        assert!(f.factors.contains(&(ip(&[8, -28, 46, 1]), 1)));
        assert_eq!(f.expand(), r.to_q());
    }

    #[test]
    fn factor_cubic_irreducible_and_power() {
        let c = ip(&[9, 3, 27, 1]);
        let f = factor_over_q(&c).unwrap();
        assert_eq!(f.factors, vec![(c.clone(), 1)]);
        assert_eq!(low_degree_irreducible(&c), Some(true));
        let cube = ip(&[2, 1]).pow(3);
        let f = factor_over_q(&cube).unwrap();
        assert_eq!(f.factors, vec![(ip(&[2, 1]), 3)]);
    }

    #[test]
    fn factor_quartic_without_rational_roots() {
        // x^4 + 4 = (x^2 + 2x + 2)(x^2 - 2x + 2)
        let f = factor_over_q(&ip(&[4, 0, 0, 0, 1])).unwrap();
        assert_eq!(f.factors.len(), 2);
        let g = factor_over_q(&ip(&[3, 0, 0, 0, 1])).unwrap();
        assert_eq!(g.factors.len(), 1);
    }

    #[test]
    fn factor_with_content_and_sign() {
        let p = ip(&[-6, 0, 6]).scale(&BigInt::from(-1));
        let f = factor_over_q(&p).unwrap();
        assert_eq!(f.expand(), p.to_q());
        assert_eq!(f.factors.len(), 2);
    }

    #[test]
    fn degree_limit() {
        assert_eq!(factor_over_q(&ip(&[1, 0, 0, 0, 0, 0, 0, 1])), Err(Error::UnsupportedDegree(7)));
    }

    #[test]
    fn parse_roundtrip() {
        let p = IntPoly::parse("3t^2 - (t+1)*(t-7) + 2", "t").unwrap();
        assert_eq!(p, ip(&[9, 6, 2]));
        assert_eq!(IntPoly::parse(&p.to_string(), "t").unwrap(), p);
        assert!(IntPoly::parse("t^", "t").is_err());
        assert_eq!(IntPoly::parse("-t", "t").unwrap(), ip(&[0, -1]));
    }

    #[test]
    fn ratfunc_normalises() {
        let a = RatFunc::from_ratio(&ip(&[-1, 0, 1]), &ip(&[-2, 2])).unwrap();
        assert_eq!(a, RatFunc::from_int_poly(&ip(&[1, 1])).mul(&RatFunc::constant(BigRational::new(1.into(), 2.into()))));
    }
}
