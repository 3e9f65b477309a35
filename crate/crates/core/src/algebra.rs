//! Integer arithmetic: p-adic splitting, Kronecker symbols, primality,
//! factorization and prime search.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// `n = p^exponent * unit` with `p` not dividing `unit`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PadicSplit {
    pub exponent: u32,
    #[serde(serialize_with = "crate::ser::bigint")]
    pub unit: BigInt,
}

/// Prime factorization of `|n|`, primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct PrimeFactorization {
    #[serde(serialize_with = "crate::ser::factor_list")]
    pub factors: Vec<(BigInt, u32)>,
}

impl PrimeFactorization {
    pub fn primes(&self) -> impl Iterator<Item = &BigInt> {
        self.factors.iter().map(|(p, _)| p)
    }

    pub fn product(&self) -> BigInt {
        self.factors
            .iter()
            .fold(BigInt::one(), |acc, (p, e)| acc * num_traits::pow(p.clone(), *e as usize))
    }

    pub fn exponent_of(&self, p: &BigInt) -> u32 {
        self.factors.iter().find(|(q, _)| q == p).map_or(0, |(_, e)| *e)
    }

    /// Product of two factorizations (exponents add).
    pub fn merge(&self, other: &PrimeFactorization) -> PrimeFactorization {
        let mut out: Vec<(BigInt, u32)> = self.factors.clone();
        for (p, e) in &other.factors {
            match out.iter_mut().find(|(q, _)| q == p) {
                Some(slot) => slot.1 += e,
                None => out.push((p.clone(), *e)),
            }
        }
        out.sort();
        PrimeFactorization { factors: out }
    }
}

/// Work limits for factorization and prime search.
#[derive(Debug, Clone, Copy)]
pub struct Budget {
    /// Pollard-Brent iterations spent on a cofactor beyond 64 bits.
    pub pollard_iterations: u64,
    /// Candidates examined by [`find_prime_with`].
    pub prime_search: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { pollard_iterations: 4_000_000, prime_search: 10_000_000 }
    }
}

impl Budget {
    /// Defaults overridden by `ELLFAM_POLLARD_BUDGET` and `ELLFAM_PRIME_SEARCH_BUDGET`.
    pub fn from_env() -> Self {
        let mut b = Budget::default();
        if let Some(v) = std::env::var("ELLFAM_POLLARD_BUDGET").ok().and_then(|s| s.parse().ok()) {
            b.pollard_iterations = v;
        }
        if let Some(v) = std::env::var("ELLFAM_PRIME_SEARCH_BUDGET").ok().and_then(|s| s.parse().ok()) {
            b.prime_search = v;
        }
        b
    }
}

pub fn padic_split(n: &BigInt, p: &BigInt) -> Result<PadicSplit> {
    if n.is_zero() {
        return Err(Error::ZeroValuation);
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    let mut unit = n.clone();
    let mut exponent = 0;
    loop {
        let (q, r) = unit.div_rem(p);
        if !r.is_zero() {
            break;
        }
        unit = q;
        exponent += 1;
    }
    Ok(PadicSplit { exponent, unit })
}

/// Valuation of a nonzero integer at a small prime.
pub fn val(n: &BigInt, p: u64) -> u32 {
    debug_assert!(!n.is_zero());
    if p == 2 {
        return n.trailing_zeros().unwrap_or(0) as u32;
    }
    if let Some(x) = n.to_i128() {
        let mut x = x;
        let p = p as i128;
        let mut e = 0;
        while x % p == 0 {
            x /= p;
            e += 1;
        }
        return e;
    }
    let pb = BigInt::from(p);
    let mut m = n.clone();
    let mut e = 0;
    loop {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            return e;
        }
        m = q;
        e += 1;
    }
}

/// The signed unit part `n_p = n / p^{v_p(n)}`.
pub fn unit_part(n: &BigInt, p: u64) -> BigInt {
    let e = val(n, p);
    n / num_traits::pow(BigInt::from(p), e as usize)
}

/// Nonnegative residue of `n` modulo `m`.
pub fn modu(n: &BigInt, m: u64) -> u64 {
    if let Some(x) = n.to_i128() {
        return x.rem_euclid(m as i128) as u64;
    }
    n.mod_floor(&BigInt::from(m)).to_u64().unwrap()
}

/// Kronecker symbol `(a/n)` with the full extension to even, negative and zero `n`.
pub fn kronecker(a: &BigInt, n: &BigInt) -> i8 {
    if let (Some(x), Some(y)) = (a.to_i64(), n.to_i64()) {
        return kronecker_i64(x, y);
    }
    if n.is_zero() {
        return if a.abs().is_one() { 1 } else { 0 };
    }
    let mut result: i8 = 1;
    let mut n = n.clone();
    if n.is_negative() {
        n = -n;
        if a.is_negative() {
            result = -result;
        }
    }
    let tz = n.trailing_zeros().unwrap_or(0);
    if tz > 0 {
        if a.is_even() {
            return 0;
        }
        let a8 = modu(a, 8);
        if tz % 2 == 1 && (a8 == 3 || a8 == 5) {
            result = -result;
        }
        n >>= tz as usize;
    }
    let mut a = a.mod_floor(&n);
    while !a.is_zero() {
        let tz = a.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            a >>= tz as usize;
            let n8 = modu(&n, 8);
            if tz % 2 == 1 && (n8 == 3 || n8 == 5) {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if modu(&a, 4) == 3 && modu(&n, 4) == 3 {
            result = -result;
        }
        a = a.mod_floor(&n);
    }
    if n.is_one() {
        result
    } else {
        0
    }
}

/// Kronecker symbol on machine integers.
pub fn kronecker_i64(a: i64, n: i64) -> i8 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut result: i8 = 1;
    let mut n = n as i128;
    let a0 = a as i128;
    if n < 0 {
        n = -n;
        if a0 < 0 {
            result = -result;
        }
    }
    let tz = n.trailing_zeros();
    if tz > 0 {
        if a0 % 2 == 0 {
            return 0;
        }
        let a8 = a0.rem_euclid(8);
        if tz % 2 == 1 && (a8 == 3 || a8 == 5) {
            result = -result;
        }
        n >>= tz;
    }
    let mut n = n as u64;
    let mut a = a0.rem_euclid(n as i128) as u64;
    while a != 0 {
        let tz = a.trailing_zeros();
        a >>= tz;
        if tz % 2 == 1 && (n % 8 == 3 || n % 8 == 5) {
            result = -result;
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// Legendre symbol of `a` modulo an odd prime `p`.
pub fn legendre(a: &BigInt, p: u64) -> i8 {
    kronecker_i64(modu(a, p) as i64, p as i64)
}

pub fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    r
}

const SMALL_PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &SMALL_PRIMES {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primality: deterministic below 2^64, 64 Miller-Rabin rounds above.
pub fn is_prime(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    if let Some(x) = n.to_u64() {
        return is_prime_u64(x);
    }
    for p in primes_up_to(1000) {
        if (n % p).is_zero() {
            return false;
        }
    }
    let one = BigInt::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s as usize;
    'witness: for a in primes_up_to(320).into_iter().take(64) {
        let mut x = BigInt::from(a).modpow(&d, n);
        if x.is_one() || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i as u64).collect()
}

fn pollard_brent_u64(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mulmod(x, x, n) + c) % n;
        let (mut x, mut y, mut g, mut q) = (2u64, 2u64, 1u64, 1u64);
        let mut ys = 0u64;
        let mut r = 1u64;
        let m = 128u64;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..m.min(r - k) {
                    y = f(y);
                    q = mulmod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += m;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

/// Factorization of a nonzero 64-bit magnitude.
pub fn factorize_u64(n: u64) -> Vec<(u64, u32)> {
    assert!(n != 0, "factorize_u64(0)");
    let mut out: Vec<(u64, u32)> = Vec::new();
    let mut n = n;
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
    }
    let mut p = 53u64;
    while p < 1024 && p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 2;
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime_u64(m) {
            match out.iter_mut().find(|(q, _)| *q == m) {
                Some(slot) => slot.1 += 1,
                None => out.push((m, 1)),
            }
            continue;
        }
        let d = pollard_brent_u64(m);
        stack.push(d);
        stack.push(m / d);
    }
    out.sort();
    out
}

fn pollard_brent_big(n: &BigInt, budget: u64) -> Option<BigInt> {
    let one = BigInt::one();
    let mut spent = 0u64;
    for c in 1u32..50 {
        let c = BigInt::from(c);
        let f = |x: &BigInt| (x * x + &c) % n;
        let (mut x, mut y) = (BigInt::from(2), BigInt::from(2));
        let mut ys = y.clone();
        let mut g = one.clone();
        let mut q = one.clone();
        let mut r = 1u64;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..128u64.min(r - k) {
                    y = f(&y);
                    q = (q * (&x - &y).abs()) % n;
                }
                g = q.gcd(n);
                k += 128;
                spent += 128;
                if spent > budget {
                    return None;
                }
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                g = (&x - &ys).abs().gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if &g != n {
            return Some(g);
        }
    }
    None
}

pub fn factorize(n: &BigInt) -> Result<PrimeFactorization> {
    factorize_with(n, &Budget::default())
}

pub fn factorize_with(n: &BigInt, budget: &Budget) -> Result<PrimeFactorization> {
    if n.is_zero() {
        return Err(Error::InvalidParameter("factorize(0)".into()));
    }
    let m = n.abs();
    if let Some(x) = m.to_u64() {
        let factors = factorize_u64(x).into_iter().map(|(p, e)| (BigInt::from(p), e)).collect();
        return Ok(PrimeFactorization { factors });
    }
    let mut out = PrimeFactorization::default();
    let mut rest = m.clone();
    for p in primes_up_to(1 << 16) {
        if (&rest % p).is_zero() {
            let mut e = 0;
            while (&rest % p).is_zero() {
                rest /= p;
                e += 1;
            }
            out.factors.push((BigInt::from(p), e));
        }
        if rest.is_one() {
            break;
        }
    }
    let mut stack = vec![rest];
    let mut found: Vec<BigInt> = Vec::new();
    while let Some(c) = stack.pop() {
        if c.is_one() {
            continue;
        }
        if let Some(x) = c.to_u64() {
            for (p, e) in factorize_u64(x) {
                for _ in 0..e {
                    found.push(BigInt::from(p));
                }
            }
            continue;
        }
        if is_prime(&c) {
            found.push(c);
            continue;
        }
        match pollard_brent_big(&c, budget.pollard_iterations) {
            Some(d) => {
                let other = &c / &d;
                stack.push(d);
                stack.push(other);
            }
            None => {
                return Err(Error::IncompleteFactorization { n: n.to_string(), cofactor: c.to_string() })
            }
        }
    }
    for p in found {
        match out.factors.iter_mut().find(|(q, _)| *q == p) {
            Some(slot) => slot.1 += 1,
            None => out.factors.push((p, 1)),
        }
    }
    out.factors.sort();
    Ok(out)
}

/// Smallest prime `p >= floor` with `p ≡ residue (mod k)`.
pub fn find_prime_with(k: &BigInt, residue: &BigInt, floor: &BigInt, budget: &Budget) -> Result<BigInt> {
    if !k.is_positive() {
        return Err(Error::InvalidParameter("modulus must be positive".into()));
    }
    let r = residue.mod_floor(k);
    if !r.gcd(k).is_one() {
        return Err(Error::InvalidParameter(format!("gcd({residue}, {k}) != 1")));
    }
    let two = BigInt::from(2);
    let lo = if floor < &two { two } else { floor.clone() };
    let mut x = &lo + (&r - &lo).mod_floor(k);
    for _ in 0..budget.prime_search {
        if is_prime(&x) {
            return Ok(x);
        }
        x += k;
    }
    Err(Error::SearchExhausted(budget.prime_search))
}

/// Product of the distinct primes dividing `a`.
pub fn kernel(a: &BigInt) -> Result<BigInt> {
    Ok(factorize(a)?.primes().fold(BigInt::one(), |acc, p| acc * p))
}

pub fn is_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

pub fn is_rational_square(q: &BigRational) -> bool {
    is_square(q.numer()) && is_square(q.denom())
}

fn is_nth_power(n: &BigInt, k: u32) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.nth_root(k);
    num_traits::pow(r, k as usize) == *n
}

/// True iff `q` is the fourth power of a nonzero rational.
pub fn is_rational_fourth_power(q: &BigRational) -> bool {
    q.is_positive() && is_nth_power(q.numer(), 4) && is_nth_power(q.denom(), 4)
}

pub fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_split(mut n: i64, p: i64) -> (u32, i64) {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        (e, n)
    }

    #[test]
    fn padic_split_examples() {
        let s = padic_split(&big(12), &big(2)).unwrap();
        assert_eq!((s.exponent, s.unit), (2, big(3)));
        let s = padic_split(&big(972), &big(3)).unwrap();
        assert_eq!((s.exponent, s.unit), (5, big(4)));
        let s = padic_split(&big(-972 * 4), &big(2)).unwrap();
        assert_eq!(brute_split(-972 * 4, 2), (4, -243));
        assert_eq!((s.exponent, s.unit), (4, big(-243)));
        assert_eq!(padic_split(&big(0), &big(2)), Err(Error::ZeroValuation));
    }

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker(&big(-1), &big(7)), -1);
        assert_eq!(kronecker(&big(-3), &big(7)), 1);
        assert_eq!((1..17).find(|x| x * x % 17 == 2), Some(6));
        assert_eq!(kronecker(&big(2), &big(17)), 1);
        assert_eq!(kronecker(&big(5), &big(0)), 0);
        assert_eq!(kronecker(&big(-1), &big(0)), 1);
        assert_eq!(kronecker(&big(3), &big(-1)), 1);
        assert_eq!(kronecker(&big(-3), &big(-1)), -1);
    }

    #[test]
    fn kronecker_big_path_matches_small() {
        let big_shift = BigInt::from(1u8) << 70;
        for a in -30i64..30 {
            for n in [3i64, 5, 7, 8, 12, 15, 21] {
                let bn = BigInt::from(n);
                let a_big = BigInt::from(a) + &big_shift * &bn;
                assert_eq!(kronecker(&a_big, &bn), kronecker_i64(a, n), "a={a} n={n}");
            }
        }
    }

    #[test]
    fn factorize_examples() {
        let f = factorize(&big(6)).unwrap();
        assert_eq!(f.factors, vec![(big(2), 1), (big(3), 1)]);
        let f = factorize(&big(1728)).unwrap();
        assert_eq!(f.factors, vec![(big(2), 6), (big(3), 3)]);
        assert_eq!(144i64.pow(3) - 864i64.pow(2), 2239488);
        let f = factorize(&big(2239488)).unwrap();
        assert_eq!(f.factors, vec![(big(2), 10), (big(3), 7)]);
    }

    #[test]
    fn factorize_beyond_64_bits() {
        let p = BigInt::from(1_000_000_007u64);
        let q = BigInt::from(998_244_353u64);
        let r = BigInt::from(4_294_967_291u64);
        let n = &p * &q * &r * 12;
        let f = factorize(&n).unwrap();
        assert_eq!(f.product(), n);
        assert!(f.primes().all(is_prime));
        assert_eq!(f.factors.len(), 5);
    }

    #[test]
    fn find_prime_examples() {
        let b = Budget::default();
        assert_eq!(find_prime_with(&big(6), &big(5), &big(2), &b).unwrap(), big(5));
        assert_eq!(find_prime_with(&big(6), &big(-1), &big(6), &b).unwrap(), big(11));
        assert_eq!(find_prime_with(&big(16), &big(15), &big(2), &b).unwrap(), big(31));
        assert!(find_prime_with(&big(6), &big(3), &big(2), &b).is_err());
    }

    #[test]
    fn primality_agrees_with_sieve() {
        let ps = primes_up_to(5000);
        for n in 0..5000u64 {
            assert_eq!(is_prime_u64(n), ps.binary_search(&n).is_ok(), "{n}");
        }
        assert!(is_prime_u64(18446744073709551557));
        assert!(!is_prime_u64(3215031751));
    }

    #[test]
    fn fourth_powers() {
        assert!(is_rational_fourth_power(&rat(81, 16)));
        assert!(!is_rational_fourth_power(&rat(-81, 16)));
        assert!(!is_rational_fourth_power(&rat(9, 1)));
        assert!(is_rational_square(&rat(9, 4)));
    }
}
