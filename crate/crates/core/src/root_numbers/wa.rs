//! `W_a: y² = x³ + tx² − a(t + 3a)x + a³`.
//!
//! The global sign comes from the closed mod-4 formula; local signs are
//! reported separately and never feed the global value.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::{leg, leg_i, md, pow_sign, sgn, unit, units, v, vs, LocalSign, RootNumberReport, INF};
use crate::algebra::factorize;
use crate::error::{Error, Result};

/// The 2-adic sign `s_a(t)`, defined by `w_2(t) ≡ s_a(t) f_a(t)_2 (mod 4)`.
pub fn sa(a: &BigInt, t: &BigInt) -> (i8, &'static str) {
    let va = vs(a, 2);
    let vt = vs(t, 2);
    let a2 = units(a, 2);
    let t2 = if t.is_zero() { BigInt::one() } else { units(t, 2) };
    let a4 = md(&a2, 4);
    let a8 = md(&a2, 8);
    let t4 = md(&t2, 4);
    let t8 = md(&t2, 8);
    if va <= vt {
        let x = md(&(t >> va as usize), 4);
        if va % 2 == 0 {
            return match a8 {
                1 | 7 => (1, "sa/va<=vt/va-even/a=±1(8)"),
                3 => (sgn(x != 0), "sa/va<=vt/va-even/a=3(8)"),
                _ => (sgn(x != 1), "sa/va<=vt/va-even/a=5(8)"),
            };
        }
        if a4 == 1 {
            return (sgn(matches!(x, 1 | 2)), "sa/va<=vt/va-odd/a=1(4)");
        }
        return (sgn(matches!(x, 0 | 1)), "sa/va<=vt/va-odd/a=3(4)");
    }
    let d = va - vt;
    let even = vt % 2 == 0;
    match (d, even) {
        (1, true) if a4 == 1 => (sgn(matches!(t8, 1 | 3)), "sa/va=vt+1/vt-even/a=1(4)"),
        (1, true) => (sgn(matches!(t8, 1 | 7)), "sa/va=vt+1/vt-even/a=3(4)"),
        (1, false) => (sgn(md(&(&t2 - &a2), 4) == 0), "sa/va=vt+1/vt-odd"),
        (2, true) if a4 == 1 => (sgn(matches!(t8, 3 | 5 | 7)), "sa/va=vt+2/vt-even/a=1(4)"),
        (2, true) => (sgn(matches!(t8, 1 | 3 | 7)), "sa/va=vt+2/vt-even/a=3(4)"),
        (2, false) => (sgn(t4 == 1), "sa/va=vt+2/vt-odd"),
        (3, true) => (sgn(matches!(t8, 3 | 5 | 7)), "sa/va=vt+3/vt-even"),
        (4, true) => (sgn(t4 == 1), "sa/va=vt+4/vt-even"),
        (_, true) => (sgn(t8 == 5), "sa/va>=vt+5/vt-even"),
        (_, false) => (sgn(t4 == 1), "sa/va>=vt+3/vt-odd"),
    }
}

/// Global root number of `W_a(t)` from the closed formula; `odd_primes`
/// must contain every prime dividing the odd part of `a`.
pub fn eps_wa_with(a: &BigInt, odd_primes: &[BigInt], t: &BigInt) -> i8 {
    let a2 = units(a, 2);
    let g = a2.gcd(t);
    let rest = &a2 / &g;
    let mut val: i64 = -(sa(a, t).0 as i64) * (md(&g, 4) as i64);
    for p in odd_primes {
        if (&rest % p).is_zero() {
            let e = 1 + v(t, p);
            val *= (pow_sign(-1, e) * pow_sign(leg(&unit(t, p), p), e)) as i64;
        }
    }
    sgn(val.rem_euclid(4) == 1)
}

/// Global root number of `W_a(t)`.
pub fn eps_wa(a: &BigInt, t: &BigInt) -> Result<i8> {
    if a.is_zero() {
        return Err(Error::InvalidParameter("a must be nonzero".into()));
    }
    let primes = odd_primes(a)?;
    Ok(eps_wa_with(a, &primes, t))
}

pub(crate) fn odd_primes(a: &BigInt) -> Result<Vec<BigInt>> {
    Ok(factorize(a)?.factors.into_iter().map(|(p, _)| p).filter(|p| p.to_u64() != Some(2)).collect())
}

pub(crate) fn f_a(a: &BigInt, t: &BigInt) -> BigInt {
    t * t + BigInt::from(3) * a * t + BigInt::from(9) * a * a
}

/// Local root number of `W_a(t)` at an odd prime.
pub fn wp_wa(a: &BigInt, t: &BigInt, p: &BigInt) -> (i8, &'static str) {
    let va = v(a, p);
    let vt = v(t, p);
    if va <= vt {
        let vf = v(&f_a(a, t), p);
        return (pow_sign(leg_i(-1, p), va + vf), "wa/odd/va<=vt");
    }
    if vt % 2 == 0 {
        return (-leg(&unit(t, p), p), "wa/odd/vt<va/vt-even");
    }
    (leg_i(-1, p), "wa/odd/vt<va/vt-odd")
}

/// Root number of `W_a(t)` with its local signs.
pub fn rn_wa(a: &BigInt, t: &BigInt) -> Result<RootNumberReport> {
    if a.is_zero() {
        return Err(Error::InvalidParameter("a must be nonzero".into()));
    }
    let global = eps_wa(a, t)?;
    let f = f_a(a, t);
    let support = factorize(&(BigInt::from(6) * a * &f))?;
    let mut locals = Vec::new();
    for (p, _) in &support.factors {
        let (value, rule) = if p.to_u64() == Some(2) {
            let s = sa(a, t).0 as i64;
            (sgn((s * md(&units(&f, 2), 4) as i64).rem_euclid(4) == 1), "wa/2/s_a*f_2")
        } else {
            wp_wa(a, t, p)
        };
        locals.push(LocalSign { p: p.clone(), value, rule });
    }
    Ok(RootNumberReport { family: format!("W_{a}({t})"), global, locals, support })
}

/// Modified local sign whose `p`-adic integral is the Euler factor `E_{W_a}(p)`.
pub fn wstar_wa(a: &BigInt, t: &BigInt, p: &BigInt) -> i8 {
    if p.to_u64() == Some(2) {
        return sa(a, t).0;
    }
    let va = v(a, p);
    let vt = v(t, p);
    if vt < va && vt != INF {
        let m1 = leg_i(-1, p);
        return pow_sign(m1, vt) * pow_sign(-1, 1 + vt) * pow_sign(leg(&unit(t, p), p), 1 + vt);
    }
    pow_sign(leg_i(-1, p), va)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn sa_examples() {
        assert_eq!(sa(&b(3), &b(4)).0, -1);
        assert_eq!(sa(&b(3), &b(1)).0, 1);
        for t in -20..20 {
            assert_eq!(sa(&b(7), &b(t)).0, 1);
            assert_eq!(sa(&b(-1), &b(t)).0, 1);
        }
    }

    #[test]
    fn washington_is_minus_one() {
        for t in -200..=200 {
            assert_eq!(eps_wa(&b(1), &b(t)).unwrap(), -1);
        }
    }

    #[test]
    fn w2_of_one_plus_4u_alternates() {
        for u in -30..30 {
            let e = eps_wa(&b(2), &b(1 + 4 * u)).unwrap();
            assert_eq!(e, if u % 2 == 0 { -1 } else { 1 }, "u = {u}");
        }
    }

    #[test]
    fn locals_reproduce_global() {
        for a in [1, 2, 3, -5, 12, 18, -36] {
            for t in -40..40 {
                let r = rn_wa(&b(a), &b(t)).unwrap();
                assert_eq!(r.product_of_locals(), r.global, "a = {a}, t = {t}");
            }
        }
    }
}
