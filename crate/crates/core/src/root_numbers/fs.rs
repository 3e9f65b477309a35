//! The master oracle: local root numbers of `F_s: y² = x³ + 3tx² + 3sx + st`
//! at every prime, keyed on `v_p(s)`, `v_p(t)` and `v_p(t² − s)`.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::{leg, leg_i, md, pow_sign, sgn, units, v, vs, LocalSign, RootNumberReport};
use crate::algebra::factorize;
use crate::error::{Error, Result};

/// Local root number of `F_s(t)` at the prime `p`.
pub fn wp_fs(s: &BigInt, t: &BigInt, p: &BigInt) -> Result<LocalSign> {
    if s.is_zero() {
        return Err(Error::InvalidParameter("s must be nonzero".into()));
    }
    let d = t * t - s;
    if d.is_zero() {
        return Err(Error::Singular(format!("F_{s} at t = {t}")));
    }
    let (value, rule) = match p.to_u64() {
        Some(2) => w2(s, t, &d),
        Some(3) => w3(s, t, &d),
        _ => wbig(s, t, &d, p),
    };
    Ok(LocalSign { p: p.clone(), value, rule })
}

/// Root number of `F_s(t)`, zero on the singular fibres `t² = s`.
pub fn rn_fs(s: &BigInt, t: &BigInt) -> Result<RootNumberReport> {
    if s.is_zero() {
        return Err(Error::InvalidParameter("s must be nonzero".into()));
    }
    let family = format!("F_{s}({t})");
    let d = t * t - s;
    if d.is_zero() {
        return Ok(RootNumberReport::singular(family));
    }
    let support = factorize(&(BigInt::from(6) * s * &d))?;
    let mut locals = Vec::with_capacity(support.factors.len());
    for (p, _) in &support.factors {
        let (value, rule) = match p.to_u64() {
            Some(2) => w2(s, t, &d),
            Some(3) => w3(s, t, &d),
            _ => wbig(s, t, &d, p),
        };
        locals.push(LocalSign { p: p.clone(), value, rule });
    }
    let mut r = RootNumberReport { family, global: 0, locals, support };
    r.global = r.product_of_locals();
    Ok(r)
}

fn wbig(s: &BigInt, t: &BigInt, d: &BigInt, p: &BigInt) -> (i8, &'static str) {
    let vs_ = v(s, p);
    let vt = v(t, p);
    if vs_ < 2 * vt {
        if vs_ % 2 == 0 {
            return (pow_sign(leg_i(-1, p), vs_ / 2), "fs/p>3/vs<2vt/vs-even");
        }
        return (leg_i(-2, p), "fs/p>3/vs<2vt/vs-odd");
    }
    if 2 * vt < vs_ {
        if vt % 2 == 0 {
            let tp = super::unit(t, p);
            return (-leg(&(BigInt::from(3) * tp), p), "fs/p>3/2vt<vs/vt-even");
        }
        return (leg_i(-1, p), "fs/p>3/2vt<vs/vt-odd");
    }
    let e = v(d, p);
    if e % 2 == vt % 2 {
        if (e + vt) % 3 == 0 {
            return (1, "fs/p>3/vs=2vt/same-parity/3|e+vt");
        }
        return (leg_i(-3, p), "fs/p>3/vs=2vt/same-parity");
    }
    (leg_i(-1, p), "fs/p>3/vs=2vt/mixed-parity")
}

fn w3(s: &BigInt, t: &BigInt, d: &BigInt) -> (i8, &'static str) {
    let vs_ = vs(s, 3);
    let vt = vs(t, 3);
    let s3 = units(s, 3);
    let t3 = units(t, 3);
    if vs_ < 2 * vt {
        return match vs_ % 4 {
            0 if vt == 1 + vs_ / 2 => (sgn(md(&t3, 3) == 1), "fs/3/vs<2vt/vs=0(4)/edge"),
            0 => (1, "fs/3/vs<2vt/vs=0(4)"),
            1 if 2 * vt == vs_ + 1 => (sgn(md(&s3, 3) == 1), "fs/3/vs<2vt/vs=1(4)/edge"),
            1 => (-1, "fs/3/vs<2vt/vs=1(4)"),
            2 if vt == 1 + vs_ / 2 => (sgn(md(&(&t3 - &s3), 3) != 0), "fs/3/vs<2vt/vs=2(4)/edge"),
            2 => (1, "fs/3/vs<2vt/vs=2(4)"),
            _ => (1, "fs/3/vs<2vt/vs=3(4)"),
        };
    }
    if 2 * vt < vs_ {
        let dd = vs_ - 2 * vt;
        return if vt % 2 == 0 {
            match dd {
                1 => (1, "fs/3/2vt<vs/vt-even/d=1"),
                2 => (sgn(md(&(&t3 - &s3), 3) == 0), "fs/3/2vt<vs/vt-even/d=2"),
                _ => (-1, "fs/3/2vt<vs/vt-even/d>=3"),
            }
        } else {
            match dd {
                1 => (sgn(md(&s3, 3) == 1), "fs/3/2vt<vs/vt-odd/d=1"),
                2 => (sgn(md(&t3, 3) == 2), "fs/3/2vt<vs/vt-odd/d=2"),
                3 => (1, "fs/3/2vt<vs/vt-odd/d=3"),
                _ => (sgn(md(&t3, 3) == 2), "fs/3/2vt<vs/vt-odd/d>=4"),
            }
        };
    }
    let e = vs(d, 3) - 2 * vt;
    let u = &t3 * units(d, 3);
    if e == 0 {
        let st = md(&(&s3 * &t3), 9);
        return (sgn(md(&s3, 3) == 2 && st != 2 && st != 4), "fs/3/vs=2vt/e=0");
    }
    let u9 = md(&u, 9);
    let u3 = u9 % 3;
    let m = e % 6;
    if vt % 2 == 0 {
        match m {
            0 => (sgn(u9 != 7 && u9 != 8), "fs/3/vs=2vt/vt-even/e=0(6)"),
            1 | 2 => (sgn(u3 == 1), "fs/3/vs=2vt/vt-even/e=1,2(6)"),
            3 => (sgn(u9 != 1 && u9 != 2), "fs/3/vs=2vt/vt-even/e=3(6)"),
            _ => (sgn(u3 == 2), "fs/3/vs=2vt/vt-even/e=4,5(6)"),
        }
    } else {
        match m {
            0 => (sgn(u9 != 1 && u9 != 2), "fs/3/vs=2vt/vt-odd/e=0(6)"),
            1 | 2 => (sgn(u3 == 2), "fs/3/vs=2vt/vt-odd/e=1,2(6)"),
            3 => (sgn(u9 != 7 && u9 != 8), "fs/3/vs=2vt/vt-odd/e=3(6)"),
            _ => (sgn(u3 == 1), "fs/3/vs=2vt/vt-odd/e=4,5(6)"),
        }
    }
}

fn w2(s: &BigInt, t: &BigInt, d: &BigInt) -> (i8, &'static str) {
    let vs_ = vs(s, 2);
    let vt = vs(t, 2);
    let s2 = units(s, 2);
    let t2 = if t.is_zero() { BigInt::from(1) } else { units(t, 2) };
    let s4 = md(&s2, 4);
    let s8 = md(&s2, 8);
    let s16 = md(&s2, 16);
    let t4 = md(&t2, 4);
    let t8 = md(&t2, 8);
    if vs_ < 2 * vt {
        let q = vs_ % 4;
        if q == 0 || q == 2 {
            let dl = vt - vs_ / 2;
            if q == 0 {
                return match dl {
                    1 => (
                        sgn(s4 == 3 || (matches!(s16, 1 | 13) && t4 == 3) || (matches!(s16, 5 | 9) && t4 == 1)),
                        "fs/2/vs<2vt/vs=0(4)/dl=1",
                    ),
                    2 => (sgn(matches!(s16, 5 | 9)), "fs/2/vs<2vt/vs=0(4)/dl=2"),
                    _ => (sgn(matches!(s16, 1 | 13)), "fs/2/vs<2vt/vs=0(4)/dl>=3"),
                };
            }
            return match dl {
                1 => (
                    sgn(s4 == 1 || (matches!(s16, 3 | 7) && t4 == 1) || (matches!(s16, 11 | 15) && t4 == 3)),
                    "fs/2/vs<2vt/vs=2(4)/dl=1",
                ),
                2 => (sgn(matches!(s16, 7 | 11)), "fs/2/vs<2vt/vs=2(4)/dl=2"),
                _ => (sgn(matches!(s16, 3 | 15)), "fs/2/vs<2vt/vs=2(4)/dl>=3"),
            };
        }
        let half = 2 * vt - vs_;
        if q == 1 {
            if half == 1 {
                return (
                    sgn((matches!(s8, 1 | 3) && t4 == 3) || (matches!(s8, 5 | 7) && t4 == 1)),
                    "fs/2/vs<2vt/vs=1(4)/gap=1",
                );
            }
            return (sgn(matches!(s8, 5 | 7)), "fs/2/vs<2vt/vs=1(4)/gap>1");
        }
        if half == 1 {
            return (
                sgn((matches!(s8, 1 | 7) && t4 == 1) || (matches!(s8, 3 | 5) && t4 == 3)),
                "fs/2/vs<2vt/vs=3(4)/gap=1",
            );
        }
        return (sgn(matches!(s8, 1 | 3)), "fs/2/vs<2vt/vs=3(4)/gap>1");
    }
    if 2 * vt < vs_ {
        let dd = vs_ - 2 * vt;
        if vt % 2 == 0 {
            return match dd {
                1 => (
                    sgn((s4 == 1 && matches!(t8, 1 | 7)) || (s4 == 3 && matches!(t8, 1 | 3))),
                    "fs/2/2vt<vs/vt-even/d=1",
                ),
                2 => (
                    sgn((s8 == 1 && matches!(t8, 3 | 5 | 7)) || (s8 == 5 && matches!(t8, 1 | 3 | 7))),
                    "fs/2/2vt<vs/vt-even/d=2",
                ),
                3 => (
                    sgn((s4 == 1 && matches!(t8, 3 | 5)) || (s4 == 3 && matches!(t8, 1 | 3))),
                    "fs/2/2vt<vs/vt-even/d=3",
                ),
                4 => (sgn(t4 == 1 || (s4 == 1 && t8 == 3) || (s4 == 3 && t8 == 7)), "fs/2/2vt<vs/vt-even/d=4"),
                5 => (sgn(t4 == 1 || t8 == 7), "fs/2/2vt<vs/vt-even/d=5"),
                6 => (sgn(t4 == 3), "fs/2/2vt<vs/vt-even/d=6"),
                _ => (sgn(t8 == 7), "fs/2/2vt<vs/vt-even/d>=7"),
            };
        }
        let diff8 = md(&(&t2 - &s2), 8);
        return match dd {
            1 => (sgn(diff8 == 0 || diff8 == 2), "fs/2/2vt<vs/vt-odd/d=1"),
            2 => (sgn(diff8 % 4 == 0), "fs/2/2vt<vs/vt-odd/d=2"),
            3 => (sgn(s4 == 3), "fs/2/2vt<vs/vt-odd/d=3"),
            _ => (sgn(t4 == 3), "fs/2/2vt<vs/vt-odd/d>=4"),
        };
    }
    let e = vs(d, 2) - 2 * vt;
    let d2 = units(d, 2);
    let d4 = md(&d2, 4);
    let d8 = md(&d2, 8);
    let u = md(&(&t2 * &d2), 8);
    let same = t4 == d4;
    let m = e % 6;
    if vt % 2 == 0 {
        if m == 0 {
            return (sgn(same), "fs/2/vs=2vt/vt-even/e=0(6)");
        }
        if e == 1 {
            return (
                sgn((t4 == 1 && matches!(u, 1 | 7)) || (t4 == 3 && matches!(u, 5 | 7))),
                "fs/2/vs=2vt/vt-even/e=1",
            );
        }
        if m == 1 {
            return (-1, "fs/2/vs=2vt/vt-even/e=1(6)");
        }
        if e == 2 {
            return (sgn(t4 == 3), "fs/2/vs=2vt/vt-even/e=2");
        }
        if m == 2 {
            return (sgn(same), "fs/2/vs=2vt/vt-even/e=2(6)");
        }
        if e == 3 {
            return (
                sgn((t4 == 1 && matches!(u, 5 | 7)) || (t4 == 3 && matches!(u, 3 | 5))),
                "fs/2/vs=2vt/vt-even/e=3",
            );
        }
        if m == 3 || m == 4 {
            return (sgn(same), "fs/2/vs=2vt/vt-even/e=3,4(6)");
        }
        if e == 5 {
            return (sgn(matches!(u, 1 | 3 | 7)), "fs/2/vs=2vt/vt-even/e=5");
        }
        return (-1, "fs/2/vs=2vt/vt-even/e=5(6)");
    }
    if m == 0 {
        return (sgn(same), "fs/2/vs=2vt/vt-odd/e=0(6)");
    }
    if e == 1 {
        return (
            sgn(t8 == 3 || (t8 == 1 && matches!(d8, 1 | 5)) || (t8 == 5 && matches!(d8, 3 | 7))),
            "fs/2/vs=2vt/vt-odd/e=1",
        );
    }
    if m == 1 {
        return (sgn(same), "fs/2/vs=2vt/vt-odd/e=1(6)");
    }
    if e == 2 {
        return (sgn((t4 == 1 && d4 == 1) || (t8 == 7 && d4 == 1)), "fs/2/vs=2vt/vt-odd/e=2");
    }
    if m == 2 {
        return (-1, "fs/2/vs=2vt/vt-odd/e=2(6)");
    }
    if e == 3 {
        return (sgn(d4 == 3), "fs/2/vs=2vt/vt-odd/e=3");
    }
    if m == 3 {
        return (sgn(same), "fs/2/vs=2vt/vt-odd/e=3(6)");
    }
    if e == 4 {
        return (
            sgn((t4 == 1 && matches!(u, 3 | 5 | 7)) || (t4 == 3 && matches!(u, 1 | 3 | 7))),
            "fs/2/vs=2vt/vt-odd/e=4",
        );
    }
    if m == 4 {
        return (-1, "fs/2/vs=2vt/vt-odd/e=4(6)");
    }
    (sgn(same), "fs/2/vs=2vt/vt-odd/e=5(6)")
}
