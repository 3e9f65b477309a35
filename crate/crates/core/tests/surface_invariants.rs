use ellfam::poly::IntPoly;
use ellfam::surfaces::{make_family, FamilyId};

fn poly(src: &str) -> IntPoly {
    IntPoly::parse(src, "t").unwrap()
}

fn check(id: FamilyId, c4: &str, c6: &str, disc: &str) {
    let inv = make_family(id).unwrap().invariants();
    assert_eq!(inv.c4, poly(c4), "{id} c4");
    assert_eq!(inv.c6, poly(c6), "{id} c6");
    assert_eq!(inv.disc, poly(disc), "{id} disc");
}

#[test]
fn fs_displays() {
    for s in [-12i64, -3, 1, 5, 49] {
        check(
            FamilyId::Fs { s },
            &format!("144*(t^2 - ({s}))"),
            &format!("-1728*t*(t^2 - ({s}))"),
            &format!("-1728*({s})*(t^2 - ({s}))^2"),
        );
    }
}

#[test]
fn gw_displays() {
    for w in [-2i64, 1, 3] {
        check(
            FamilyId::Gw { w },
            &format!("144*({w})^2*t*(t - 1)"),
            &format!("-1728*({w})^3*t^2*(t - 1)"),
            &format!("-1728*({w})^6*t^3*(t - 1)^2"),
        );
    }
}

#[test]
fn lwsv_displays() {
    for (w, s, v) in [(1i64, 1i64, 9i64), (2, -3, 1), (6, -27, 0)] {
        let q = format!("(t^4 + 2*t^2*({v}) + ({v})^2 - ({s}))");
        check(
            FamilyId::Lwsv { w, s, v },
            &format!("144*({w})^2*{q}"),
            &format!("-1728*({w})^3*(t^2 + ({v}))*{q}"),
            &format!("-1728*({s})*({w})^6*{q}^2"),
        );
    }
}

#[test]
fn hw_displays() {
    for w in [1i64, -5] {
        check(
            FamilyId::Hw { w },
            &format!("16*({w})^2*t*(8*t - 3)*(8*t^2 - 11*t + 8)"),
            &format!("-64*({w})^3*t^2*(8*t^2 - 11*t + 8)*(64*t^2 - 80*t + 45)"),
            &format!("-512*({w})^6*t^3*(8*t^2 - 11*t + 8)^2"),
        );
    }
}

#[test]
fn iw_displays() {
    for w in [1i64, 7] {
        check(
            FamilyId::Iw { w },
            &format!("16*({w})^2*(t - 4)*t*(t^2 - 10*t + 27)"),
            &format!("-64*({w})^3*(t - 1)*t*(t^2 - 10*t + 27)^2"),
            &format!("-64*({w})^6*t^2*(t^2 - 10*t + 27)^3"),
        );
    }
}

#[test]
fn jmw_displays() {
    for (m, w) in [(1i64, 1i64), (-2, 3)] {
        check(
            FamilyId::Jmw { m, w },
            &format!("144*({w})^2*t*(t^3 + ({m}))"),
            &format!("-864*({w})^3*(t^3 + ({m}))*(2*t^3 + ({m}))"),
            &format!("-432*({w})^6*({m})^2*(t^3 + ({m}))^2"),
        );
    }
}

#[test]
fn wa_displays() {
    for a in [1i64, -2, 6] {
        check(
            FamilyId::Wa { a },
            &format!("16*(t^2 + 3*({a})*t + 9*({a})^2)"),
            &format!("-32*(t^2 + 3*({a})*t + 9*({a})^2)*(3*({a}) + 2*t)"),
            &format!("16*({a})^2*(t^2 + 3*({a})*t + 9*({a})^2)^2"),
        );
    }
}

#[test]
fn va_displays() {
    for a in [1i64, -3, 10] {
        check(
            FamilyId::Va { a },
            &format!("144*t*(t - ({a}))"),
            &format!("-864*t*(t - ({a}))*(2*t - ({a}))"),
            &format!("-432*({a})^2*t^2*(t - ({a}))^2"),
        );
    }
}

#[test]
fn catalogue_discriminant_identity() {
    for id in FamilyId::catalogue() {
        let inv = make_family(id).unwrap().invariants();
        let lhs = inv.c4.pow(3).sub(&inv.c6.mul(&inv.c6));
        assert_eq!(lhs, inv.disc.scale(&1728.into()), "{id}");
    }
}

#[test]
fn catalogue_has_no_multiplicative_place() {
    for id in FamilyId::catalogue() {
        let s = make_family(id).unwrap();
        let r = s.classify_places().unwrap();
        assert!(r.m_poly.is_constant(), "{id}");
        assert!(s.potentially_parity_biased().unwrap(), "{id}");
        let support = r.places.iter().filter_map(|e| match &e.place {
            ellfam::surfaces::Place::Finite(q) => Some(q.clone()),
            ellfam::surfaces::Place::Infinity => None,
        });
        let prod = support.fold(IntPoly::one(), |acc, q| acc.mul(&q));
        let sqf = ellfam::poly::squarefree_part(&s.invariants().disc);
        assert_eq!(prod.primitive(), sqf.primitive(), "{id}");
    }
}

#[test]
fn hw_finite_places_are_additive() {
    let r = make_family(FamilyId::Hw { w: 1 }).unwrap().classify_places().unwrap();
    let finite: Vec<_> = r.places.iter().filter(|e| matches!(e.place, ellfam::surfaces::Place::Finite(_))).collect();
    assert_eq!(finite.len(), 2);
    assert!(finite.iter().all(|e| e.reduction == ellfam::surfaces::Reduction::Additive));
}
