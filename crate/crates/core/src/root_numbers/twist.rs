//! Quadratic twists `W_1^{(d)}(t): y² = x³ + dtx² − (t + 3)d²x + d³` of
//! Washington's family.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::{md, sgn, units, vs};
use crate::error::{Error, Result};

/// Root number of `W_1^{(d)}(t)` from the closed case split on `v_2(d)`,
/// `d_2 mod 8` and `t mod 4`.
pub fn rn_w1twist(d: &BigInt, t: &BigInt) -> Result<i8> {
    if d.is_zero() {
        return Err(Error::InvalidParameter("d must be nonzero".into()));
    }
    let d2 = units(d, 2);
    let sign = if d2.is_positive() { 1 } else { -1 };
    let t4 = md(t, 4);
    if vs(d, 2) % 2 == 1 {
        return Ok(if matches!(t4, 0 | 3) { sign } else { -sign });
    }
    Ok(match md(&d2, 8) {
        1 | 7 => sgn(md(&(-d2.abs()), 4) == 1),
        3 => {
            if t4 != 0 {
                sign
            } else {
                -sign
            }
        }
        _ => {
            if t4 == 1 {
                sign
            } else {
                -sign
            }
        }
    })
}

/// `d_u(t) = u(u − 1)t + u³ − 3u + 1`, the twist parameter carrying the
/// point `(u d_u(t), d_u(t)²)`.
pub fn d_u(u: &BigInt, t: &BigInt) -> BigInt {
    u * (u - 1) * t + u * u * u - BigInt::from(3) * u + 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_numbers::eps_wa;

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn agrees_with_the_washington_formula() {
        for d in -40i64..=40 {
            if d == 0 {
                continue;
            }
            for t in -20..=20 {
                let direct = eps_wa(&b(d), &b(d * t)).unwrap();
                assert_eq!(rn_w1twist(&b(d), &b(t)).unwrap(), direct, "d = {d}, t = {t}");
            }
        }
    }

    #[test]
    fn u5_sign_change_at_minus_five() {
        let u = b(5);
        for t in -60..60 {
            let d = d_u(&u, &b(t));
            let e = rn_w1twist(&d, &b(t)).unwrap();
            assert_eq!(e == 1, t >= -5, "t = {t}");
        }
    }
}
