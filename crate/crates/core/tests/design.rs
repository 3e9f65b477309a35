use ellfam::algebra::rat;
use ellfam::density::*;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};
use proptest::prelude::*;

fn single_prime_params(h: i64, k: i64) -> (u64, u64, u64) {
    match design_single_prime(h, k).unwrap().audit {
        Audit::SinglePrime { p, r, m, .. } => (p, r, m),
        other => panic!("unexpected audit {other:?}"),
    }
}

#[test]
fn single_prime_searches_smallest_prime() {
    assert_eq!(single_prime_params(1, 3), (5, 1, 4));
    assert_eq!(single_prime_params(-2, 5), (19, 2, 12));
    assert_eq!(single_prime_params(3, 10), (19, 1, 14));
    assert_eq!(single_prime_params(1, 2), (3, 1, 2));
}

#[test]
fn passthrough_families() {
    for (h, label) in [(-1, "W_1(t)"), (1, "W_3(1+12t)"), (0, "W_2(1+4t)")] {
        let d = design_single_prime(h, 1).unwrap();
        assert_eq!(d.construction, Construction::Passthrough);
        assert_eq!(d.audit, Audit::Passthrough { family: label.into() });
        let ev = d.evaluator().unwrap();
        for t in -200..=200 {
            let e = ev.sign_at_int(t).unwrap();
            let expect = match h {
                0 => if t.rem_euclid(2) == 0 { -1 } else { 1 },
                _ => h as i8,
            };
            assert_eq!(e, expect, "{label} at t = {t}");
        }
    }
}

#[test]
fn single_prime_sweeps_match_target() {
    for (h, k) in [(1, 3), (-2, 5)] {
        let d = design_single_prime(h, k).unwrap();
        let rt = roundtrip_z(&d, 20_000).unwrap();
        assert!(rt.pass, "{h}/{k}: {} vs tolerance {}", rt.deviation, rt.tolerance);
    }
}

#[test]
fn periodic_designs_are_exactly_periodic() {
    for (h, k) in [(3, 10), (1, 2), (1, 3), (-1, 15), (-7, 8), (1, 6), (-3, 7)] {
        let d = design_periodic(h, k).unwrap();
        assert_eq!(d.construction, Construction::Periodic);
        let m: i64 = d.modulus.to_string().parse().unwrap();
        assert_eq!(periodicity_defects(&d, 10 * m).unwrap(), 0, "{h}/{k} mod {m}");
        // the exact mean over one period is the prediction
        let ev = d.evaluator().unwrap();
        let sum: i64 = (0..m).map(|t| ev.sign_at_int(t).unwrap() as i64).sum();
        assert_eq!(BigRational::new(sum.into(), m.into()), rat(h, k), "{h}/{k}");
    }
}

#[test]
fn periodic_block_data() {
    let d = design_periodic(3, 10).unwrap();
    let Audit::Periodic { blocks, .. } = &d.audit else { panic!() };
    assert_eq!(blocks.len(), 2);
    // 3/10 = (1/2)(3/5); d₁ = 2m₁ − 5 with d₁ = 3
    assert_eq!((blocks[1].p, blocks[1].u, blocks[1].m), (5, 1, 4));
    assert_eq!(blocks[1].zeros, 1);
    assert_eq!(d.modulus, BigInt::from(80));
}

#[test]
fn periodic_rejections() {
    assert!(matches!(design_periodic(2, 5), Err(ellfam::Error::Inadmissible { .. })));
    assert!(matches!(design_periodic(3, 4).map(|_| ()), Ok(())));
    assert!(matches!(design_periodic(5, 6), Err(ellfam::Error::Inadmissible { .. })));
    assert!(matches!(design_periodic(7, 4), Err(ellfam::Error::Inadmissible { .. })));
    assert!(design_periodic(1, 2).is_ok());
}

#[test]
fn isotrivial_sign_is_sign_of_form() {
    for (h, k) in [(1, 2), (-2, 3), (0, 1), (1, 1), (-1, 1), (3, 7)] {
        let d = design_isotrivial(h, k).unwrap();
        let Audit::Isotrivial { p, c_infinity } = &d.audit else { panic!() };
        assert_eq!(c_infinity.exact(), Some(&rat(h, k)));
        let ev = d.evaluator().unwrap();
        for s in 1..=25i64 {
            for r in -25..=25i64 {
                if r.gcd(&s) != 1 {
                    continue;
                }
                let (rb, sb) = (BigInt::from(r), BigInt::from(s));
                let expect = form_sign(p, &rb, &sb);
                assert_eq!(ev.sign_at(&rb, &sb).unwrap(), expect, "{h}/{k} at {r}/{s}");
            }
        }
    }
}

#[test]
fn isotrivial_half_over_q() {
    let d = design_isotrivial(1, 2).unwrap();
    assert_eq!(d.a, ellfam::poly::IntPoly::from_i64(&[16, 0, -64]));
    let rt = roundtrip_q(&d, 150).unwrap();
    assert!(rt.pass, "deviation {}", rt.deviation);
}

#[test]
fn designs_serialize() {
    let v = serde_json::to_value(design_periodic(3, 10).unwrap()).unwrap();
    assert_eq!(v["predicted_average"], "3/10");
    assert_eq!(v["construction"], "periodic");
    assert!(v["surface"]["a4"].is_string());
    let v = serde_json::to_value(design_single_prime(1, 3).unwrap()).unwrap();
    assert_eq!(v["audit"]["p"], 5);
}

fn brute_c_infinity(p: &ellfam::poly::IntPoly) -> f64 {
    // midpoint rule on both halves after x = 1/y
    let n = 200_000;
    let f = |x: f64| p.coeffs().iter().rev().fold(0.0, |acc, c| acc * x + c.to_string().parse::<f64>().unwrap());
    let d = p.degree() as i32;
    let mut sum = 0.0;
    for i in 0..n {
        let x = -1.0 + (i as f64 + 0.5) * 2.0 / n as f64;
        sum += f(x).signum();
        sum += (f(1.0 / x) * x.powi(d)).signum();
    }
    sum * 2.0 / n as f64 / 4.0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ratio_decomposition_reconstructs(h in -3000i64..3000, k in 2i64..3000) {
        prop_assume!(h != 0 && h.gcd(&k) == 1 && h.abs() < k);
        let d = decompose_ratio(h, k).unwrap();
        prop_assert_eq!(d.product(), rat(h, k));
        let hk = BigInt::from(h * k);
        for t in &d.terms {
            prop_assert!(t.value().abs() < BigRational::one());
            prop_assert_eq!(k % t.p as i64, 0);
            // every prime of d divides hk
            let mut rest = t.d.abs();
            let g = loop {
                let g = rest.gcd(&hk);
                if g.is_one() { break rest.clone(); }
                rest /= g;
            };
            prop_assert!(g.is_one());
        }
    }

    #[test]
    fn periodic_gate_is_complete(h in -400i64..400, k in 1i64..400) {
        prop_assume!(h.gcd(&k) == 1 && h.abs() <= k);
        let v = k.trailing_zeros();
        let admissible = h % 2 != 0 && (v == 0 || (h.abs() as i128) << v <= ((1i128 << v) - 1) * k as i128);
        prop_assert_eq!(periodic_gate(h, k).is_ok(), admissible);
    }

    #[test]
    fn single_prime_gate_is_complete(h in -400i64..400, k in 1i64..400) {
        prop_assume!(h.gcd(&k) == 1);
        prop_assert_eq!(single_prime_gate(h, k).is_ok(), h.abs() <= k);
    }

    #[test]
    fn prescribed_zeros_hold(p in prop::sample::select(vec![2u64, 3, 5, 7]), ell in 1u32..=2, frac in 0.0f64..=1.0, u in 1u32..=2) {
        let classes = p.pow(ell);
        let m = (frac * classes as f64).round() as u64;
        prop_assume!(ell == 1 || m <= 10);
        let z = prescribed_zero_poly(p, ell, m, u).unwrap();
        prop_assert_eq!(z.factors.len() as u64, m);
        prop_assert!(z.factors.iter().all(|f| f.1 >= u as u64));
        // deep zeros exactly on the chosen classes, sampled mod p^{r+ℓ}
        let modulus = BigInt::from(p).pow((z.r + ell as u64) as u32);
        let sample = 2000u64.min(classes * 50);
        for i in 0..sample {
            let t = BigInt::from(i * 7919 + 13) % &modulus;
            let Some(v) = z.valuation_at(&t) else { continue };
            if (0..m as usize).any(|j| (&t - BigInt::from(z.factors[j].0)) % BigInt::from(classes) == BigInt::from(0)) {
                prop_assert!(v >= z.r + ell as u64);
            } else {
                prop_assert!(v + u as u64 <= z.r + ell as u64);
            }
        }
    }

    #[test]
    fn c_infinity_matches_quadrature(roots in prop::collection::vec((-9i64..=9, 1i64..=4), 1..=2), lead in prop::sample::select(vec![-3i64, -1, 1, 2])) {
        // even degree with rational roots ±r/s
        let mut p = ellfam::poly::IntPoly::from_i64(&[lead]);
        for (r, s) in &roots {
            p = p.mul(&ellfam::poly::IntPoly::from_i64(&[-r * r, 0, s * s]));
        }
        let c = c_infinity(&p).unwrap();
        let exact = c.exact().expect("rational roots give an exact value");
        let x = ellfam::curves::to_f64(exact);
        prop_assert!((x - brute_c_infinity(&p)).abs() < 1e-3, "{} vs {}", x, brute_c_infinity(&p));
    }

    #[test]
    fn c_infinity_interval_contains_quadrature(a in -20i64..20, b in 1i64..20) {
        // x² − a/b·… with irrational roots in general
        let p = ellfam::poly::IntPoly::from_i64(&[a, 0, b, 0, -1]);
        prop_assume!(!p.is_zero());
        let (lo, hi) = c_infinity(&p).unwrap().bounds();
        let (lo, hi) = (ellfam::curves::to_f64(&lo), ellfam::curves::to_f64(&hi));
        prop_assert!(hi - lo <= 1e-6);
        let q = brute_c_infinity(&p);
        prop_assert!(lo - 1e-3 <= q && q <= hi + 1e-3);
    }
}
