use std::f64::consts::{PI, TAU};

use lch::gen::{random_polygon, random_polytope, GenSpec};
use lch::mc::{mc_area2, mc_volume, surface_oracle};
use lch_core::arc_polygon::{build2, LambdaDisk2};
use lch_core::{BallPolytope3, ModelSpace, Vec2, Vec3};

fn ball() -> BallPolytope3 {
    BallPolytope3::build(1.0, &[Vec3::ZERO]).unwrap()
}

fn lens() -> BallPolytope3 {
    let c = (PI / 3.0).cos();
    BallPolytope3::build(1.0, &[Vec3::new(0.0, 0.0, c), Vec3::new(0.0, 0.0, -c)]).unwrap()
}

#[test]
fn ball_volume_by_sampling() {
    let e = mc_volume(&ball(), 1_000_000, 1).unwrap();
    assert!(e.sigmas_from(4.0 * PI / 3.0) < 3.0, "{e:?}");
}

#[test]
fn lens_volume_by_sampling() {
    let e = mc_volume(&lens(), 1_000_000, 2).unwrap();
    assert!(e.sigmas_from(5.0 * PI / 12.0) < 3.0, "{e:?}");
}

#[test]
fn random_polytope_volume_by_sampling() {
    for seed in 0..5 {
        let spec = GenSpec { seed, m: 4 + seed as usize, inradius: 0.3, lambda: 1.0, dim: 3, curvature: 0 };
        let k = random_polytope(&spec).unwrap();
        let e = mc_volume(&k, 1_000_000, 100 + seed).unwrap();
        assert!(e.sigmas_from(k.volume()) < 3.0, "seed {seed}: {e:?} vs {}", k.volume());
    }
}

#[test]
fn sampling_is_deterministic_across_thread_counts() {
    let k = lens();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| mc_volume(&k, 300_000, 7).unwrap())
    };
    let one = run(1);
    assert_eq!(one, run(3));
    assert_eq!(one, run(1));
    assert!(mc_volume(&k, 999, 7).is_err());
}

#[test]
fn surface_by_volume_differences() {
    let o = surface_oracle(&ball(), 1e-4).unwrap();
    assert!((o.plain - 4.0 * PI).abs() < 1e-3 * 4.0 * PI);
    let o = surface_oracle(&lens(), 1e-4).unwrap();
    assert!((o.plain - TAU).abs() < 1e-3 * TAU);
    assert!((o.richardson - TAU).abs() < 1e-7 * TAU);
    for seed in 0..5 {
        let spec = GenSpec { seed, m: 6, inradius: 0.4, lambda: 1.0, dim: 3, curvature: 0 };
        let k = random_polytope(&spec).unwrap();
        let o = surface_oracle(&k, 1e-4).unwrap();
        assert!((o.richardson - k.surface_area()).abs() < 1e-5 * k.surface_area(), "seed {seed}");
    }
    assert!(surface_oracle(&lens(), 0.2).is_err());
}

#[test]
fn planar_areas_by_sampling() {
    let s = ModelSpace::plane(1).unwrap();
    let cap = build2(s, 1.0, &[LambdaDisk2::ball(s, 1.0, Vec2::new(0.2, 0.1)).unwrap()]).unwrap();
    let e = mc_area2(&cap, 400_000, 3).unwrap();
    assert!(e.sigmas_from(TAU * (1.0 - (PI / 4.0).cos())) < 3.0, "{e:?}");

    let h = ModelSpace::plane(-1).unwrap();
    let disk = build2(h, 2.0, &[LambdaDisk2::ball(h, 2.0, Vec2::new(-0.1, 0.3)).unwrap()]).unwrap();
    let rho = 0.5 * 3.0f64.ln();
    let e = mc_area2(&disk, 400_000, 4).unwrap();
    assert!(e.sigmas_from(TAU * (rho.cosh() - 1.0)) < 3.0, "{e:?}");

    for (c, lambda, r0) in [(0, 1.0, 0.4), (1, 1.5, 0.3), (-1, 1.0, 0.5), (-1, 0.5, 0.3), (-1, 3.0, 0.2)] {
        let spec = GenSpec { seed: 9, m: 5, inradius: r0, lambda, dim: 2, curvature: c };
        let p = random_polygon(&spec).unwrap();
        let e = mc_area2(&p, 400_000, 5).unwrap();
        assert!(e.sigmas_from(p.area()) < 3.0, "c={c} λ={lambda}: {e:?} vs {}", p.area());
    }
}
