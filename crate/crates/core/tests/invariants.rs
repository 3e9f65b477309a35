use ellfam::algebra::{factorize, is_prime, is_prime_u64, kronecker, padic_split, primes_up_to};
use ellfam::averages::av_va;
use ellfam::curves::{Curve, Point, QCurve};
use ellfam::poly::{factor_over_q, low_degree_irreducible, poly_gcd, rational_roots, resultant, squarefree_part, IntPoly};
use ellfam::ranks::{nagao_af, rank3_family, rank_l, NagaoMethod};
use ellfam::root_numbers::{eps_wa, family_root_number, rn_va, rn_wa, sa};
use ellfam::surfaces::{make_family, reduction_to_fs, FamilyId, Surface};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn b(n: i64) -> BigInt {
    BigInt::from(n)
}

fn qi(n: &BigInt) -> BigRational {
    BigRational::from_integer(n.clone())
}

fn small_poly(max_deg: usize) -> impl Strategy<Value = IntPoly> {
    prop::collection::vec(-6i64..=6, 1..=max_deg + 1).prop_map(|c| IntPoly::from_i64(&c))
}

fn nonconstant_poly(max_deg: usize) -> impl Strategy<Value = IntPoly> {
    small_poly(max_deg).prop_filter("nonconstant", |p| p.degree() >= 1)
}

/// Discriminant of `x³ + a2x² + a4x + a6` times 16.
fn cubic_disc16(a2: &BigInt, a4: &BigInt, a6: &BigInt) -> BigInt {
    let d = a2 * a2 * a4 * a4 - b(4) * a4.pow(3) - b(4) * a2.pow(3) * a6 + b(18) * a2 * a4 * a6 - b(27) * a6 * a6;
    b(16) * d
}

#[test]
fn kronecker_matches_squares_mod_p() {
    for p in primes_up_to(500).into_iter().skip(1) {
        let mut square = vec![false; p as usize];
        for x in 1..p {
            square[(x * x % p) as usize] = true;
        }
        for a in 0..p {
            let want = if a == 0 { 0 } else if square[a as usize] { 1 } else { -1 };
            assert_eq!(kronecker(&b(a as i64), &b(p as i64)), want, "({a}/{p})");
        }
    }
}

#[test]
fn dagger_family_signs_follow_the_case_split() {
    // ε(W†_p(t)) = (2/p) off p | t and −1 on it, through W_{p²}(2t² − 2pt − p²)
    for p in [3i64, 5, 7, 17] {
        let two = kronecker(&b(2), &b(p));
        for t in -300i64..=300 {
            let u = 2 * t * t - 2 * p * t - p * p;
            let e = eps_wa(&b(p * p), &b(u)).unwrap();
            if e == 0 {
                continue;
            }
            let want = if t % p == 0 { -1 } else { two };
            assert_eq!(e, want, "p = {p}, t = {t}");
            assert_eq!(family_root_number(FamilyId::WDagger { a: p }, &b(t)).unwrap().global, want, "bridge p = {p}, t = {t}");
        }
    }
    // shifted by pt + ℓ with p ≡ ±1 (mod 8): constant +1
    for l in 1..7i64 {
        for t in -1000i64..=1000 {
            let e = family_root_number(FamilyId::WDagger { a: 7 }, &b(7 * t + l)).unwrap().global;
            assert!(e == 1 || e == 0, "ℓ = {l}, t = {t}");
        }
    }
}

#[test]
fn nagao_methods_agree_on_random_surfaces() {
    let mut rng = 0x2545_f491_4f6c_dd1du64;
    let mut next = move || {
        rng ^= rng << 13;
        rng ^= rng >> 7;
        rng ^= rng << 17;
        (rng % 11) as i64 - 5
    };
    let mut tested = 0;
    while tested < 20 {
        let mut c = || IntPoly::from_i64(&[next(), next(), next()]);
        let (a2, a4, a6) = (c(), c(), c());
        let Ok(s) = Surface::new("random", a2, a4, a6, BigInt::one()) else { continue };
        tested += 1;
        for p in primes_up_to(500).into_iter().filter(|&p| p >= 5) {
            assert_eq!(
                nagao_af(&s, p, NagaoMethod::Direct).unwrap(),
                nagao_af(&s, p, NagaoMethod::Charsum).unwrap(),
                "{s:?} at p = {p}"
            );
        }
    }
}

#[test]
fn rank3_points_satisfy_associativity() {
    let f = rank3_family(1, 2, 30).unwrap();
    let mut checked = 0;
    for t0 in 1..40i64 {
        let t = qi(&b(t0));
        if f.surface.is_singular_at(&t) {
            continue;
        }
        let c = f.surface.specialize(&t);
        let pts: Option<Vec<Point<BigRational>>> = f
            .points
            .iter()
            .map(|p| match p {
                Point::Affine(x, y) => Some(Point::Affine(x.eval(&t)?, y.eval(&t)?)),
                Point::Infinity => Some(Point::Infinity),
            })
            .collect();
        let Some(pts) = pts else { continue };
        let (p, q, r) = (&pts[0], &pts[1], &pts[2]);
        let left = c.add(&c.add(p, q).unwrap(), r).unwrap();
        let right = c.add(p, &c.add(q, r).unwrap()).unwrap();
        assert_eq!(left, right, "t = {t0}");
        assert!(c.contains(&left));
        checked += 1;
        if checked == 6 {
            break;
        }
    }
    assert!(checked >= 3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn padic_split_reconstructs(n in prop::num::i64::ANY.prop_filter("nonzero", |n| *n != 0), p in prop::sample::select(vec![2i64, 3, 5, 7, 101, 65537])) {
        let s = padic_split(&b(n), &b(p)).unwrap();
        prop_assert_eq!(b(p).pow(s.exponent) * &s.unit, b(n));
        prop_assert!(!(&s.unit % b(p)).is_zero());
    }

    #[test]
    fn kronecker_is_multiplicative(a in -10_000i64..=10_000, c in -10_000i64..=10_000, m in -10_000i64..=10_000, n in -10_000i64..=10_000) {
        prop_assume!(m != 0 && n != 0);
        prop_assert_eq!(kronecker(&b(a * c), &b(n)), kronecker(&b(a), &b(n)) * kronecker(&b(c), &b(n)));
        prop_assert_eq!(kronecker(&b(a), &b(m * n)), kronecker(&b(a), &b(m)) * kronecker(&b(a), &b(n)));
    }

    #[test]
    fn factorize_round_trips(n in prop::num::u64::ANY.prop_filter("n > 1", |n| *n > 1)) {
        let f = factorize(&BigInt::from(n)).unwrap();
        prop_assert_eq!(f.product(), BigInt::from(n));
        for (p, _) in &f.factors {
            prop_assert!(is_prime(p));
            if let Ok(q) = u64::try_from(p) {
                prop_assert!(is_prime_u64(q));
            }
        }
    }

    #[test]
    fn polynomial_factorization_round_trips(fs in prop::collection::vec(nonconstant_poly(2), 1..=3), k in -4i64..=4) {
        prop_assume!(k != 0);
        let p = fs.iter().fold(IntPoly::from_i64(&[k]), |acc, f| acc.mul(f));
        prop_assume!(squarefree_part(&p).degree() <= 6);
        let fac = factor_over_q(&p).unwrap();
        prop_assert_eq!(fac.expand(), p.to_q());
        for (f, _) in &fac.factors {
            if let Some(irr) = low_degree_irreducible(f) {
                prop_assert!(irr, "{} claimed irreducible", f);
            } else {
                prop_assert!(rational_roots(f).unwrap().is_empty());
            }
        }
        // every input factor is accounted for
        let got = fac.count_with_multiplicity();
        let lower: u32 = fs.iter().map(|f| factor_over_q(f).unwrap().count_with_multiplicity()).sum();
        prop_assert_eq!(got, lower);
    }

    #[test]
    fn resultant_vanishes_iff_common_factor(p in nonconstant_poly(3), q in nonconstant_poly(3)) {
        let common = !poly_gcd(&p, &q).is_constant();
        prop_assert_eq!(resultant(&p, &q).is_zero(), common);
    }

    #[test]
    fn squarefree_part_is_squarefree(fs in prop::collection::vec(nonconstant_poly(2), 1..=3), e in 1u32..=3) {
        let p = fs.iter().fold(IntPoly::one(), |acc, f| acc.mul(&f.pow(e)));
        let s = squarefree_part(&p);
        prop_assert!(poly_gcd(&s, &s.derivative()).is_constant());
        prop_assert!(p.to_q().div_rem(&s.to_q()).1.is_zero());
    }

    #[test]
    fn discriminant_matches_the_cubic(a2 in -50i64..=50, a4 in -50i64..=50, a6 in -50i64..=50) {
        let c = QCurve::from_i64(a2, a4, a6);
        let inv = c.invariants();
        prop_assert_eq!(inv.disc, qi(&cubic_disc16(&b(a2), &b(a4), &b(a6))));
    }

    #[test]
    fn hasse_bound_and_twists(a2 in -20i64..=20, a4 in -20i64..=20, a6 in -20i64..=20, w in prop::sample::select(vec![-7i64, -3, -1, 2, 5, 6, 11])) {
        let c = QCurve::from_i64(a2, a4, a6);
        prop_assume!(!c.is_singular());
        let r = |n: i64| qi(&b(n));
        let tw = Curve::twisted(r(a2), r(a4), r(a6), r(w)).unwrap();
        let disc = cubic_disc16(&b(a2), &b(a4), &b(a6));
        for p in primes_up_to(200).into_iter().filter(|&p| p >= 3) {
            let pb = b(p as i64);
            if (&disc % &pb).is_zero() || (2 * w) % p as i64 == 0 {
                continue;
            }
            let ap = c.trace_ap(p).unwrap();
            prop_assert!((ap * ap) as u64 <= 4 * p);
            prop_assert_eq!(tw.trace_ap(p).unwrap(), kronecker(&b(w), &pb) as i64 * ap, "p = {}", p);
        }
    }

    #[test]
    fn reduction_maps_are_isomorphisms(which in 0usize..6, param in 1i64..=6, t in -300i64..=300) {
        let id = [
            FamilyId::Wa { a: param },
            FamilyId::Va { a: param },
            FamilyId::Gw { w: param },
            FamilyId::Lwsv { w: param, s: 2, v: 1 },
            FamilyId::WDagger { a: param },
            FamilyId::W1Twist { d: param },
        ][which];
        let src = make_family(id).unwrap().specialize_int(t);
        prop_assume!(!src.is_singular());
        let (s, u) = reduction_to_fs(id).unwrap().at(&b(t));
        let fs = Curve::new(qi(&(b(3) * &u)), qi(&(b(3) * &s)), qi(&(&s * &u)));
        prop_assert_eq!(src.invariants().j, fs.invariants().j);
        let (ds, df) = (src.untwisted().invariants().disc, fs.invariants().disc);
        let mut compared = 0;
        for p in primes_up_to(200).into_iter().filter(|&p| p >= 5) {
            let pb = qi(&b(p as i64));
            let bad = |d: &BigRational| (d.numer() % pb.numer()).is_zero() || (d.denom() % pb.numer()).is_zero();
            if bad(&ds) || bad(&df) || src.integral_coeffs().is_none() {
                continue;
            }
            prop_assert_eq!(src.trace_ap(p).unwrap(), fs.trace_ap(p).unwrap(), "{} t = {} p = {}", id, t, p);
            compared += 1;
            if compared == 5 {
                break;
            }
        }
    }

    #[test]
    fn places_cover_the_discriminant(a2 in small_poly(2), a4 in small_poly(2), a6 in small_poly(2)) {
        let Ok(s) = Surface::new("random", a2, a4, a6, BigInt::one()) else { return Ok(()) };
        let disc = s.invariants().disc;
        let Ok(report) = s.classify_places() else { return Ok(()) };
        let product = report.places.iter().fold(IntPoly::one(), |acc, e| match &e.place {
            ellfam::surfaces::Place::Finite(q) => acc.mul(q),
            ellfam::surfaces::Place::Infinity => acc,
        });
        let want = squarefree_part(&disc).primitive();
        prop_assert!(product.primitive() == want || product.primitive() == want.neg());
    }

    #[test]
    fn washington_is_periodic(a in -30i64..=30, t in -5000i64..=5000) {
        prop_assume!(a != 0);
        let e = rn_wa(&b(a), &b(t)).unwrap().global;
        let f = rn_wa(&b(a), &b(t + 4 * a.abs())).unwrap().global;
        if e != 0 && f != 0 {
            prop_assert_eq!(e, f);
        }
        let m = 1i64 << (ellfam::algebra::val(&b(a), 2) + 2);
        prop_assert_eq!(sa(&b(a), &b(t)).0, sa(&b(a), &b(t + m)).0);
    }

    #[test]
    fn signs_are_units(a in -40i64..=40, t in -100_000i64..=100_000) {
        prop_assume!(a != 0);
        for r in [rn_wa(&b(a), &b(t)).unwrap(), rn_va(&b(a), &b(t)).unwrap()] {
            let singular = r.global == 0;
            prop_assert!(r.global.abs() <= 1);
            if !singular {
                prop_assert!(r.locals.iter().all(|l| l.value == 1 || l.value == -1));
                prop_assert_eq!(r.product_of_locals(), r.global);
            }
        }
        // V_a is singular exactly at t ∈ {0, a}
        prop_assert_eq!(rn_va(&b(a), &b(t)).unwrap().global == 0, t == 0 || t == a);
    }

    #[test]
    fn rank_l_stays_in_range(w in -12i64..=12, s in -30i64..=30, v in -12i64..=12) {
        prop_assume!(w != 0 && s != 0);
        let r = rank_l(&b(w), &b(s), &b(v)).unwrap();
        prop_assert!(r.rank <= 3);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn larger_cutoffs_shrink_the_interval(a in prop::sample::select(vec![1i64, -1, 3, 4, 5, 12, 25, -7]), n in 100u64..3000) {
        let wide = av_va::<f64>(&b(a), n).unwrap().interval().cloned().unwrap();
        let narrow = av_va::<f64>(&b(a), 4 * n).unwrap().interval().cloned().unwrap();
        prop_assert!(wide.contains_interval(&narrow), "{} vs {}", wide, narrow);
    }

    #[test]
    fn gcd_divides_both(p in nonconstant_poly(3), q in nonconstant_poly(3), r in nonconstant_poly(2)) {
        let (pr, qr) = (p.mul(&r), q.mul(&r));
        let g = poly_gcd(&pr, &qr);
        prop_assert!(pr.to_q().div_rem(&g.to_q()).1.is_zero());
        prop_assert!(qr.to_q().div_rem(&g.to_q()).1.is_zero());
        prop_assert!(g.to_q().div_rem(&r.to_q()).1.is_zero());
    }
}
