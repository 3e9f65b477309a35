//! Local and global root numbers for the catalogue families.
//!
//! Every local sign carries a rule id naming the branch of the case tree
//! that produced it, so disagreements between engines point at a branch.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::algebra::{self, PrimeFactorization};
use crate::error::{Error, Result};
use crate::surfaces::{reduction_to_fs, FamilyId};

pub mod fs;
pub mod twist;
pub mod va;
pub mod wa;

pub use fs::{rn_fs, wp_fs};
pub use twist::rn_w1twist;
pub use va::{eps_va, rn_va, va_starred, wstar_va};
pub use wa::{eps_wa, eps_wa_with, rn_wa, sa, wp_wa, wstar_wa};

/// Root number of a catalogue family at an integer parameter. Families
/// without a closed engine go through their isomorphism onto `F_s`.
pub fn family_root_number(id: FamilyId, t: &BigInt) -> Result<RootNumberReport> {
    let b = BigInt::from;
    let mut report = match id {
        FamilyId::Fs { s } => rn_fs(&b(s), t)?,
        FamilyId::Wa { a } => rn_wa(&b(a), t)?,
        FamilyId::Va { a } => rn_va(&b(a), t)?,
        FamilyId::W1Twist { d } => rn_wa(&b(d), &(b(d) * t))?,
        _ => {
            let map = reduction_to_fs(id)
                .ok_or_else(|| Error::Unsupported(format!("no root number engine for {id}")))?;
            let (s, u) = map.at(t);
            if s.is_zero() {
                RootNumberReport::singular(String::new())
            } else {
                rn_fs(&s, &u)?
            }
        }
    };
    report.family = format!("{id}({t})");
    Ok(report)
}

/// Valuation used for `t = 0`; larger than any valuation that occurs.
pub const INF: u32 = u32::MAX / 4;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalSign {
    #[serde(serialize_with = "crate::ser::bigint")]
    pub p: BigInt,
    pub value: i8,
    pub rule: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RootNumberReport {
    pub family: String,
    pub global: i8,
    pub locals: Vec<LocalSign>,
    pub support: PrimeFactorization,
}

impl RootNumberReport {
    pub(crate) fn singular(family: String) -> Self {
        RootNumberReport { family, global: 0, locals: Vec::new(), support: PrimeFactorization::default() }
    }

    /// `-prod w_p` over the reported locals.
    pub fn product_of_locals(&self) -> i8 {
        -self.locals.iter().map(|l| l.value).product::<i8>()
    }

    pub fn rule_at(&self, p: u64) -> Option<&'static str> {
        let p = BigInt::from(p);
        self.locals.iter().find(|l| l.p == p).map(|l| l.rule)
    }
}

/// `v_p(n)`, with `INF` for `n = 0`.
pub(crate) fn v(n: &BigInt, p: &BigInt) -> u32 {
    if n.is_zero() {
        return INF;
    }
    if let Some(q) = p.to_u64() {
        return algebra::val(n, q);
    }
    let mut m = n.clone();
    let mut e = 0;
    loop {
        let (q, r) = m.div_rem(p);
        if !r.is_zero() {
            return e;
        }
        m = q;
        e += 1;
    }
}

pub(crate) fn vs(n: &BigInt, p: u64) -> u32 {
    if n.is_zero() {
        INF
    } else {
        algebra::val(n, p)
    }
}

/// Unit part `n_p`; zero maps to zero.
pub(crate) fn unit(n: &BigInt, p: &BigInt) -> BigInt {
    if n.is_zero() {
        return BigInt::zero();
    }
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(p);
        if !r.is_zero() {
            return m;
        }
        m = q;
    }
}

pub(crate) fn units(n: &BigInt, p: u64) -> BigInt {
    if n.is_zero() {
        BigInt::zero()
    } else {
        algebra::unit_part(n, p)
    }
}

/// Nonnegative residue.
pub(crate) fn md(n: &BigInt, m: u64) -> u64 {
    algebra::modu(n, m)
}

pub(crate) fn leg(a: &BigInt, p: &BigInt) -> i8 {
    match p.to_u64() {
        Some(q) => algebra::legendre(a, q),
        None => algebra::kronecker(a, p),
    }
}

pub(crate) fn leg_i(a: i64, p: &BigInt) -> i8 {
    leg(&BigInt::from(a), p)
}

pub(crate) fn sgn(b: bool) -> i8 {
    if b {
        1
    } else {
        -1
    }
}

pub(crate) fn pow_sign(x: i8, e: u32) -> i8 {
    if e % 2 == 0 {
        1
    } else {
        x
    }
}

/// `+1` if `x ≡ 1 (mod 4)`, else `-1`; `x` odd.
pub(crate) fn m4(x: &BigInt) -> i8 {
    sgn(md(x, 4) == 1)
}
