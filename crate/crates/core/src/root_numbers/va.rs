//! `V_a: y² = x³ + 3tx² + 3atx + a²t`, with `t ∉ {0, a}`.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{leg, leg_i, m4, md, pow_sign, sgn, unit, units, v, vs, LocalSign, RootNumberReport};
use crate::algebra::factorize;
use crate::error::{Error, Result};

fn check(a: &BigInt, t: &BigInt) -> Result<()> {
    if a.is_zero() {
        return Err(Error::InvalidParameter("a must be nonzero".into()));
    }
    if t.is_zero() || t == a {
        return Err(Error::Singular(format!("V_{a} at t = {t}")));
    }
    Ok(())
}

/// Local sign at 2.
pub fn w2_va(a: &BigInt, t: &BigInt) -> (i8, &'static str) {
    let va = vs(a, 2);
    let vt = vs(t, 2);
    let a2 = units(a, 2);
    let t2 = units(t, 2);
    let a4 = md(&a2, 4);
    let a8 = md(&a2, 8);
    let t4 = md(&t2, 4);
    let t8 = md(&t2, 8);
    if va < vt {
        let d = vt - va;
        if va % 2 == 0 {
            return match (d, d % 6) {
                (_, 0) => (-1, "va/2/va<vt/va-even/d=0(6)"),
                (1, _) => (sgn(md(&(&t2 - &a2), 4) != 0), "va/2/va<vt/va-even/d=1"),
                (_, 1) => (m4(&t2), "va/2/va<vt/va-even/d=1(6)"),
                (2, _) => (
                    sgn(t4 == 3 || (t8 == 1 && matches!(a8, 3 | 7)) || (t8 == 5 && matches!(a8, 1 | 5))),
                    "va/2/va<vt/va-even/d=2",
                ),
                (_, 2) => (-1, "va/2/va<vt/va-even/d=2(6)"),
                _ => (m4(&t2), "va/2/va<vt/va-even/d=3,4,5(6)"),
            };
        }
        return match (d, d % 6) {
            (_, 0 | 2 | 4) => (m4(&t2), "va/2/va<vt/va-odd/d-even"),
            (1, _) => (
                sgn(t8 == 1 || matches!((t8, a8), (3, 1) | (3, 5) | (7, 3) | (7, 7))),
                "va/2/va<vt/va-odd/d=1",
            ),
            (_, 1) => (m4(&t2), "va/2/va<vt/va-odd/d=1(6)"),
            (3, _) => (sgn(t8 != 5), "va/2/va<vt/va-odd/d=3"),
            _ => (-1, "va/2/va<vt/va-odd/d=3,5(6)"),
        };
    }
    if vt + 1 < va {
        let d = va - vt;
        if vt % 2 == 0 {
            return match d {
                2 => (
                    sgn((matches!(t8, 1 | 5 | 7) && a4 == 1) || (matches!(t8, 1 | 3 | 5) && a4 == 3)),
                    "va/2/vt<va-1/vt-even/d=2",
                ),
                3 => (sgn(matches!(t8, 1 | 5 | 7)), "va/2/vt<va-1/vt-even/d=3"),
                4 => (sgn(t4 == 3), "va/2/vt<va-1/vt-even/d=4"),
                _ => (sgn(t8 == 7), "va/2/vt<va-1/vt-even/d>=5"),
            };
        }
        return (sgn(t4 == 3), "va/2/vt<va-1/vt-odd");
    }
    if vt + 1 == va {
        if vt % 2 == 0 {
            return (
                sgn(t8 == 7 || (t8 == 1 && a4 == 1) || (t8 == 5 && a4 == 3)),
                "va/2/vt=va-1/vt-even",
            );
        }
        return (sgn(md(&(&t2 - &a2), 4) != 0), "va/2/vt=va-1/vt-odd");
    }
    let dt = t - a;
    let d = vs(&dt, 2) - va;
    let d2 = units(&dt, 2);
    let diff = &t2 - &a2;
    if vt % 2 == 0 {
        return match (d, d % 6) {
            (_, 0) => (-1, "va/2/vt=va/vt-even/d=0(6)"),
            (1, _) => (
                sgn(matches!((t8, a8), (1, 3) | (3, 1) | (5, 7) | (7, 5))),
                "va/2/vt=va/vt-even/d=1",
            ),
            (_, 1) => (m4(&d2), "va/2/vt=va/vt-even/d=1(6)"),
            (2, _) => (
                sgn(md(&diff, 16) == 12
                    || (a4 == 1 && md(&(&diff - 4), 32) == 0)
                    || (a4 == 3 && md(&(&diff - 20), 32) == 0)),
                "va/2/vt=va/vt-even/d=2",
            ),
            (_, 2) => (-1, "va/2/vt=va/vt-even/d=2(6)"),
            _ => (m4(&d2), "va/2/vt=va/vt-even/d=3,4,5(6)"),
        };
    }
    match (d, d % 6) {
        (_, 0) => (m4(&d2), "va/2/vt=va/vt-odd/d=0(6)"),
        (1, _) => (
            sgn(md(&diff, 16) == 2
                || (a4 == 1 && md(&(&diff - 14), 16) == 0)
                || (a4 == 3 && md(&(&diff - 6), 16) == 0)),
            "va/2/vt=va/vt-odd/d=1",
        ),
        (_, 1 | 2) => (m4(&d2), "va/2/vt=va/vt-odd/d=1,2(6)"),
        (3, _) => (sgn(md(&d2, 8) != 5), "va/2/vt=va/vt-odd/d=3"),
        (_, 3) => (-1, "va/2/vt=va/vt-odd/d=3(6)"),
        (_, 4) => (m4(&d2), "va/2/vt=va/vt-odd/d=4(6)"),
        _ => (-1, "va/2/vt=va/vt-odd/d=5(6)"),
    }
}

/// Local sign at 3.
pub fn w3_va(a: &BigInt, t: &BigInt) -> (i8, &'static str) {
    let va = vs(a, 3);
    let vt = vs(t, 3);
    let a3 = units(a, 3);
    let t3 = units(t, 3);
    let sq = &a3 * &a3;
    if va < vt {
        let d = vt - va;
        if d % 3 == 0 {
            let x = md(&(BigInt::from(pow_sign(-1, vt)) * &sq * &t3), 9);
            return (sgn(!matches!(x, 5 | 7)), "va/3/va<vt/d=0(3)");
        }
        let x = md(&(BigInt::from(pow_sign(-1, va)) * &t3), 3);
        if matches!(d % 6, 1 | 2) {
            return (sgn(x != 1), "va/3/va<vt/d=1,2(6)");
        }
        return (sgn(x != 2), "va/3/va<vt/d=4,5(6)");
    }
    if vt == va {
        let dt = t - a;
        let vd = vs(&dt, 3);
        let dd = vd - va;
        if dd > 0 {
            let d3 = units(&dt, 3);
            if dd % 3 == 0 {
                let x = md(&(BigInt::from(pow_sign(-1, vd)) * &sq * &d3), 9);
                return (sgn(!matches!(x, 5 | 7)), "va/3/vt=va/t=a(3)/d=0(3)");
            }
            let x = md(&(BigInt::from(pow_sign(-1, va)) * &d3), 3);
            if matches!(dd % 6, 1 | 2) {
                return (sgn(x != 1), "va/3/vt=va/t=a(3)/d=1,2(6)");
            }
            return (sgn(x != 2), "va/3/vt=va/t=a(3)/d=4,5(6)");
        }
        let e = BigInt::from(2) * t - a;
        let de = vs(&e, 3) - va;
        if de == 1 {
            let x = BigInt::from(2) * &t3 - &a3 - BigInt::from(6 * pow_sign(-1, va) as i64);
            return (sgn(md(&x, 9) == 0), "va/3/vt=va/t=-a(3)/e=1");
        }
        return (1, "va/3/vt=va/t=-a(3)/e>=2");
    }
    if vt % 2 == 0 {
        if va - vt == 1 {
            return (sgn(md(&t3, 3) == 1), "va/3/vt<va/vt-even/gap=1");
        }
        return (-1, "va/3/vt<va/vt-even/gap>=2");
    }
    (sgn(md(&t3, 3) == 2), "va/3/vt<va/vt-odd")
}

/// Local sign at a prime `p ≥ 5`.
pub fn wp_va(a: &BigInt, t: &BigInt, p: &BigInt) -> (i8, &'static str) {
    let va = v(a, p);
    let vt = v(t, p);
    if va <= vt {
        let vd = v(&(t - a), p);
        let k = vd as i64 - vt as i64 + 3 * va as i64;
        if k.rem_euclid(6) != 0 {
            return (leg_i(-3, p) * pow_sign(leg_i(3, p), vt + vd + va), "va/p>3/va<=vt/generic");
        }
        return (1, "va/p>3/va<=vt/6|k");
    }
    if vt % 2 == 0 {
        return (-leg(&(BigInt::from(3) * unit(t, p)), p), "va/p>3/vt<va/vt-even");
    }
    (leg_i(-1, p), "va/p>3/vt<va/vt-odd")
}

fn support(a: &BigInt, t: &BigInt) -> Result<crate::algebra::PrimeFactorization> {
    factorize(&(BigInt::from(6) * a * t * (t - a)))
}

fn local(a: &BigInt, t: &BigInt, p: &BigInt) -> (i8, &'static str) {
    match p.to_u64() {
        Some(2) => w2_va(a, t),
        Some(3) => w3_va(a, t),
        _ => wp_va(a, t, p),
    }
}

/// Global root number, zero on the singular fibres `t ∈ {0, a}`.
pub fn eps_va(a: &BigInt, t: &BigInt) -> Result<i8> {
    if a.is_zero() {
        return Err(Error::InvalidParameter("a must be nonzero".into()));
    }
    if t.is_zero() || t == a {
        return Ok(0);
    }
    let sup = support(a, t)?;
    Ok(-sup.factors.iter().map(|(p, _)| local(a, t, p).0).product::<i8>())
}

pub fn rn_va(a: &BigInt, t: &BigInt) -> Result<RootNumberReport> {
    if a.is_zero() {
        return Err(Error::InvalidParameter("a must be nonzero".into()));
    }
    let family = format!("V_{a}({t})");
    if t.is_zero() || t == a {
        return Ok(RootNumberReport::singular(family));
    }
    let support = support(a, t)?;
    let locals: Vec<LocalSign> = support
        .factors
        .iter()
        .map(|(p, _)| {
            let (value, rule) = local(a, t, p);
            LocalSign { p: p.clone(), value, rule }
        })
        .collect();
    let mut r = RootNumberReport { family, global: 0, locals, support };
    r.global = r.product_of_locals();
    Ok(r)
}

/// Modified local sign `w_p*`; `∫_{Z_p} w_p*` is the Euler factor `E_{V_a}(p)`.
pub fn wstar_va(a: &BigInt, t: &BigInt, p: &BigInt) -> Result<i8> {
    check(a, t)?;
    let dt = t - a;
    Ok(match p.to_u64() {
        Some(2) => {
            let w = w2_va(a, t).0 as i64;
            let x = units(t, 2) * units(&dt, 2) * BigInt::from(w);
            m4(&x)
        }
        Some(3) => pow_sign(-1, vs(t, 3) + vs(&dt, 3)) * w3_va(a, t).0,
        _ => wp_va(a, t, p).0 * pow_sign(leg_i(-1, p), v(&dt, p) + v(t, p)),
    })
}

/// The starred decomposition `ε = −w_∞*·∏ w_p*`: returns `w_∞* = sgn(t(t − a))`
/// and the starred signs over the support.
pub fn va_starred(a: &BigInt, t: &BigInt) -> Result<(i8, Vec<LocalSign>)> {
    check(a, t)?;
    let winf = if (t * (t - a)).is_positive() { 1 } else { -1 };
    let sup = support(a, t)?;
    let mut out = Vec::new();
    for (p, _) in &sup.factors {
        out.push(LocalSign { p: p.clone(), value: wstar_va(a, t, p)?, rule: "va/starred" });
    }
    Ok((winf, out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn singular_values() {
        assert_eq!(eps_va(&b(3), &b(0)).unwrap(), 0);
        assert_eq!(eps_va(&b(3), &b(3)).unwrap(), 0);
        assert!(wstar_va(&b(3), &b(3), &b(5)).is_err());
    }

    #[test]
    fn starred_product_matches_global() {
        for a in [1, -1, 2, 3, 4, 6, 9, 12, -18, 25] {
            for t in -60..60 {
                if t == 0 || t == a {
                    continue;
                }
                let e = eps_va(&b(a), &b(t)).unwrap();
                let (winf, st) = va_starred(&b(a), &b(t)).unwrap();
                let prod: i8 = st.iter().map(|l| l.value).product();
                assert_eq!(-winf * prod, e, "a = {a}, t = {t}");
            }
        }
    }

    #[test]
    fn branch_vt_below_va() {
        // p = 5, a = 25, t = 5*... vt = 0 < va = 2, vt even: −(3t_p/p)
        let (w, rule) = wp_va(&b(25), &b(2), &b(5));
        assert_eq!(rule, "va/p>3/vt<va/vt-even");
        assert_eq!(w, -crate::algebra::kronecker_i64(6, 5));
    }
}
