use std::f64::consts::{FRAC_PI_2, PI, TAU};

use lch_core::reference_bodies::{
    laplace_lens, laplace_spindle, lens2_measures, lens3_from_inradius, lens3_from_surface_area, lens3_measures,
    lens_nd_measures, match_and_compare, spindle_measures, Lens2, Lens3,
};
use proptest::prelude::*;

/// Composite Simpson on `n` (even) panels.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn gamma(x: f64) -> f64 {
    // Γ on half-integers and integers by recursion
    if (x - 0.5).abs() < 1e-12 {
        PI.sqrt()
    } else if (x - 1.0).abs() < 1e-12 {
        1.0
    } else {
        (x - 1.0) * gamma(x - 1.0)
    }
}

#[test]
fn spindle_in_three_dimensions() {
    for h in [0.0, 0.1, 0.25, 0.5, 0.8, 0.95] {
        let t0 = f64::acos(h);
        let s = t0.sin();
        let area = 4.0 * PI * (s - h * t0);
        let volume = TAU * (s - s * s * s / 3.0 - h * t0);
        let m = spindle_measures(3, 1.0, h).unwrap();
        assert!(rel(m.surface_area(), area) < 1e-12, "h1 = {h}");
        assert!(rel(m.volume(), volume) < 1e-12, "h1 = {h}");
    }
}

#[test]
fn flat_spindle_is_the_ball() {
    for n in 2..40u32 {
        let sphere = 2.0 * PI.powf(n as f64 / 2.0) / gamma(n as f64 / 2.0);
        let m = spindle_measures(n, 1.0, 0.0).unwrap();
        assert!(rel(m.surface_area(), sphere) < 1e-11, "n = {n}");
        assert!(rel(m.volume(), sphere / n as f64) < 1e-11, "n = {n}");
    }
}

#[test]
fn measures_against_plain_simpson() {
    for n in [4u32, 9, 20, 41, 60] {
        let k = n as f64;
        for h1 in [0.2, 0.3, 0.5] {
            let t0 = f64::acos(h1);
            let area = 2.0 * simpson(|t| (t.cos() - h1).powf(k - 2.0), 0.0, t0, 20_000);
            let vol = 2.0 * simpson(|t| (t.cos() - h1).powf(k - 1.0) * t.cos(), 0.0, t0, 20_000);
            let m = spindle_measures(n, 1.0, h1).unwrap();
            assert!(rel(m.normalized_area(), area) < 1e-9, "n={n} h1={h1}");
            assert!(rel(m.normalized_volume(), vol) < 1e-9, "n={n} h1={h1}");
        }
        for h2 in [0.3, 0.7, 0.9] {
            let p0 = f64::asin(h2);
            let area = 2.0 * simpson(|t| t.sin().powf(k - 2.0), 0.0, p0, 20_000);
            let vol = 2.0 * simpson(|t| t.sin().powf(k), 0.0, p0, 20_000);
            let m = lens_nd_measures(n, 1.0, h2).unwrap();
            assert!(rel(m.normalized_area(), area) < 1e-9, "n={n} h2={h2}");
            assert!(rel(m.normalized_volume(), vol) < 1e-9, "n={n} h2={h2}");
        }
    }
}

#[test]
fn laplace_terms_approach_the_integrals() {
    for h1 in [0.2, 0.3, 0.5] {
        let mut prev = f64::INFINITY;
        for n in [50u32, 100, 200, 400, 800] {
            let m = spindle_measures(n, 1.0, h1).unwrap();
            let l = laplace_spindle(n, h1);
            let err = rel(l.area, m.normalized_area()).max(rel(l.volume, m.normalized_volume()));
            assert!(err < prev, "n={n} h1={h1}");
            assert!(err * n as f64 <= 5.0);
            prev = err;
        }
    }
    for h2 in [0.5, 0.8] {
        let m = lens_nd_measures(400, 1.0, h2).unwrap();
        let l = laplace_lens(400, h2);
        assert!(rel(l.area, m.normalized_area()) < 5.0 / 400.0);
        assert!(rel(l.volume, m.normalized_volume()) < 5.0 / 400.0);
    }
}

#[test]
fn planar_lens_anchor() {
    let l = Lens2::from_perimeter(1.0, PI).unwrap();
    assert!((l.area() - (FRAC_PI_2 - 1.0)).abs() < 1e-15);
    assert!((lens2_measures(1.0, PI).unwrap() - (FRAC_PI_2 - 1.0)).abs() < 1e-15);
    assert!((l.vertex_angle() - FRAC_PI_2).abs() < 1e-15);
    let back = Lens2::from_inradius(1.0, l.inradius()).unwrap();
    assert!((back.theta - l.theta).abs() < 1e-12);
}

proptest! {
    #[test]
    fn lens3_matches_cap_formulas(alpha in 0.01f64..FRAC_PI_2, lambda in 0.2f64..5.0) {
        let l = Lens3::new(lambda, alpha).unwrap();
        let h = (1.0 - alpha.cos()) / lambda;
        let r = 1.0 / lambda;
        let caps = 2.0 * PI * h * h * (3.0 * r - h) / 3.0;
        prop_assert!(rel(l.volume(), caps) < 1e-12);
        prop_assert!(rel(l.volume_from_caps(), caps) < 1e-12);
        prop_assert!(rel(l.surface_area(), 2.0 * TAU * r * h) < 1e-13);
        let (a, v, ir) = lens3_measures(lambda, alpha).unwrap();
        prop_assert_eq!((a, v, ir), (l.surface_area(), l.volume(), l.inradius()));
        prop_assert!((lens3_from_surface_area(lambda, a).unwrap().alpha - alpha).abs() < 1e-9);
        prop_assert!((lens3_from_inradius(lambda, ir).unwrap().alpha - alpha).abs() < 1e-9);
        let nd = lens_nd_measures(3, lambda, alpha.sin()).unwrap();
        prop_assert!(rel(nd.volume(), caps) < 1e-10);
        prop_assert!(rel(nd.surface_area(), l.surface_area()) < 1e-10);
    }

    #[test]
    fn matched_lens_is_smaller(n in 3u32..80, h1 in 0.05f64..0.9) {
        let c = match_and_compare(n, 1.0, h1).unwrap();
        prop_assert!((c.lens.ln_surface_area() - c.spindle.ln_surface_area()).abs() < 1e-9);
        prop_assert!(c.lens_smaller);
        prop_assert!(c.lens.volume() < c.spindle.volume());
    }
}
