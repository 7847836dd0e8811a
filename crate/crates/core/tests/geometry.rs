mod common;

use std::f64::consts::PI;

use approx::assert_abs_diff_eq;
use common::{c2, convex_curve, corpus, integrate, quad_area, quad_length, series};
use convexflow::geometry::{
    self, center, convexity_margin, embed, higher_integrals, int_inv_k, parallel_offset, summarize,
    translate_dilate,
};
use convexflow::io::{curve_from_json, curve_to_json};
use convexflow::{analyze, synthesize, Error, FourierSupport, SampledField};
use proptest::prelude::*;

#[test]
fn length_and_area_examples() {
    let circle = FourierSupport::circle(2.0);
    assert_abs_diff_eq!(geometry::length(&circle), 4.0 * PI, epsilon = 1e-12);
    assert_abs_diff_eq!(geometry::area(&circle), 4.0 * PI, epsilon = 1e-12);

    let shifted = FourierSupport::circle(1.0).with_cos(1, 0.3);
    assert_abs_diff_eq!(geometry::length(&shifted), 2.0 * PI, epsilon = 1e-12);
    assert_abs_diff_eq!(geometry::area(&shifted), PI, epsilon = 1e-12);

    let fs = c2();
    assert_abs_diff_eq!(geometry::area(&fs), 3.0944688, epsilon = 1e-7);
    assert_abs_diff_eq!(geometry::area(&fs), quad_area(&fs), epsilon = 1e-10);
    assert_abs_diff_eq!(geometry::length(&fs), quad_length(&fs), epsilon = 1e-10);
}

#[test]
fn higher_integral_examples() {
    let r = 1.5;
    let h = higher_integrals(&FourierSupport::circle(r)).unwrap();
    assert_abs_diff_eq!(h.int_inv_k, 2.0 * PI * r * r, epsilon = 1e-12);
    assert_abs_diff_eq!(h.entropy, 0.0, epsilon = 1e-12);

    let fs = c2();
    let quad = integrate(1024, |t| series(&fs, t).1.powi(2));
    assert_abs_diff_eq!(int_inv_k(&fs), 2.09 * PI, epsilon = 1e-12);
    assert_abs_diff_eq!(int_inv_k(&fs), quad, epsilon = 1e-10);

    let e = higher_integrals(&FourierSupport::circle(1.0).with_cos(3, 0.02)).unwrap().entropy;
    assert!(e > 0.0, "{e}");

    let flat = FourierSupport::circle(1.0).with_cos(2, 1.0 / 3.0);
    assert!(matches!(higher_integrals(&flat), Err(Error::NotConvex { .. })));
}

#[test]
fn summary_examples() {
    let s = summarize(&FourierSupport::circle(1.0));
    assert_abs_diff_eq!(s.length, 2.0 * PI, epsilon = 1e-12);
    assert_abs_diff_eq!(s.area, PI, epsilon = 1e-12);
    assert_abs_diff_eq!(s.ipd, 0.0, epsilon = 1e-12);
    assert_abs_diff_eq!(s.ipr, 1.0, epsilon = 1e-12);
    assert_abs_diff_eq!(s.entropy.unwrap(), 0.0, epsilon = 1e-12);
    assert_abs_diff_eq!(s.int_inv_k, 2.0 * PI, epsilon = 1e-12);
    assert_eq!(s.center, [0.0, 0.0]);
    assert_abs_diff_eq!(s.margin, 1.0, epsilon = 1e-12);

    let moved = FourierSupport::circle(1.0).with_cos(1, 0.3).with_sin(1, 0.4);
    let c = summarize(&moved).center;
    let qx = integrate(1024, |t| series(&moved, t).0 * t.cos()) / PI;
    let qy = integrate(1024, |t| series(&moved, t).0 * t.sin()) / PI;
    assert_abs_diff_eq!(c[0], qx, epsilon = 1e-12);
    assert_abs_diff_eq!(c[1], qy, epsilon = 1e-12);
    assert_abs_diff_eq!(c[0], 0.3, epsilon = 1e-12);

    assert_abs_diff_eq!(summarize(&c2()).ipd, 0.06 * PI * PI, epsilon = 1e-12);
}

#[test]
fn embedding_and_margin() {
    let fs = c2();
    // X(θ) = u N + u' T with N = (cos θ, sin θ)
    let p = embed(&fs, 0.0);
    assert_abs_diff_eq!(p[0], 1.1, epsilon = 1e-14);
    assert_abs_diff_eq!(p[1], 0.0, epsilon = 1e-14);
    assert_abs_diff_eq!(convexity_margin(&fs), 0.7, epsilon = 1e-9);
    let q = embed(&fs, PI / 4.0);
    assert_abs_diff_eq!(q[0] * (PI / 4.0).cos() + q[1] * (PI / 4.0).sin(), fs.eval(PI / 4.0), epsilon = 1e-14);
}

#[test]
fn synthesize_analyze_round_trip() {
    let fs = corpus(3);
    let m = 2 * fs.order() + 2;
    let (u, radius) = synthesize(&fs, m).unwrap();
    let back = analyze(&u).unwrap();
    assert!(common::max_coeff_gap(&back, &fs) <= 1e-12);
    for j in 0..m {
        let (su, sr) = series(&fs, u.theta(j));
        assert_abs_diff_eq!(u.values()[j], su, epsilon = 1e-12);
        assert_abs_diff_eq!(radius.values()[j], sr, epsilon = 1e-11);
    }
    let four = analyze(&SampledField::from_fn(4, |t| 2.0 + t.cos())).unwrap();
    assert_eq!(four.order(), 1);
    assert_abs_diff_eq!(four.a(0), 4.0, epsilon = 1e-14);
    assert_abs_diff_eq!(four.a(1), 1.0, epsilon = 1e-14);
}

#[test]
fn corpus_satisfies_isoperimetric() {
    for seed in 0..1000 {
        let s = summarize(&corpus(seed));
        assert!(s.ipd >= 0.0 && s.margin >= 0.1, "seed {seed}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn json_round_trip_is_exact(fs in convex_curve()) {
        prop_assert_eq!(curve_from_json(&curve_to_json(&fs)).unwrap(), fs);
    }

    #[test]
    fn closed_forms_match_quadrature(fs in convex_curve()) {
        let scale = 1.0 + geometry::area(&fs);
        prop_assert!((geometry::length(&fs) - quad_length(&fs)).abs() <= 1e-10 * scale);
        prop_assert!((geometry::area(&fs) - quad_area(&fs)).abs() <= 1e-10 * scale);
        let q = integrate(1024, |t| series(&fs, t).1.powi(2));
        prop_assert!((int_inv_k(&fs) - q).abs() <= 1e-10 * (1.0 + q));
    }

    #[test]
    fn translation_invariance(fs in convex_curve(), a in -5.0f64..5.0, b in -5.0f64..5.0) {
        let moved = translate_dilate(&fs, 1.0, a, b).unwrap();
        let (s, t) = (summarize(&fs), summarize(&moved));
        for (x, y) in [
            (s.length, t.length), (s.area, t.area), (s.ipd, t.ipd), (s.ipr, t.ipr),
            (s.int_inv_k, t.int_inv_k), (s.entropy.unwrap(), t.entropy.unwrap()),
        ] {
            prop_assert!((x - y).abs() <= 1e-12 * (1.0 + x.abs()), "{} vs {}", x, y);
        }
        let c = center(&moved);
        prop_assert!((c[0] - center(&fs)[0] - a).abs() <= 1e-12 * (1.0 + a.abs()));
    }

    #[test]
    fn parallel_invariants(fs in convex_curve(), r in 0.0f64..10.0) {
        let p = parallel_offset(&fs, r).unwrap();
        prop_assert!((geometry::ipd(&p) - geometry::ipd(&fs)).abs() <= 1e-10);
        let (x, y) = (int_inv_k(&p) - 2.0 * geometry::area(&p), int_inv_k(&fs) - 2.0 * geometry::area(&fs));
        prop_assert!((x - y).abs() <= 1e-10 * (1.0 + x.abs()));
        prop_assert!(geometry::ipr(&p) <= geometry::ipr(&fs) + 1e-12);
    }

    #[test]
    fn isoperimetric_holds(fs in convex_curve()) {
        let s = summarize(&fs);
        prop_assert!(s.ipd >= -1e-10);
        prop_assert!(s.ipr >= 1.0 - 1e-12);
        prop_assert!(s.entropy.unwrap() >= -1e-12);
        prop_assert!(s.int_inv_k >= 2.0 / PI * s.ipd + 2.0 * s.area - 1e-9 * s.int_inv_k);
    }
}
