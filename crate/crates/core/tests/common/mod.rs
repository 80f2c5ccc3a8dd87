#![allow(dead_code)]

use lch_core::arc_polygon::{build2, LambdaDisk2};
use lch_core::inradius::halfspace_condition;
use lch_core::{ArcPolygon2, BallPolytope3, ModelSpace, Vec2, Vec3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn unit(rng: &mut ChaCha8Rng) -> Vec3 {
    let v = Vec3::new(StandardNormal.sample(rng), StandardNormal.sample(rng), StandardNormal.sample(rng));
    v.normalized()
}

/// Unit balls centered at `(r0 − 1)u_k`; all contain `B(0, r0)`.
pub fn body(seed: u64, m: usize, r0: f64) -> BallPolytope3 {
    let mut g = rng(seed);
    let centers: Vec<Vec3> = (0..m).map(|_| unit(&mut g) * (r0 - 1.0)).collect();
    BallPolytope3::build(1.0, &centers).expect("bodies around a common ball build")
}

/// As `body`, but the directions surround the origin so every facet touches `B(0, r0)`.
pub fn touching_body(seed: u64, m: usize, r0: f64) -> BallPolytope3 {
    let mut g = rng(seed);
    loop {
        let dirs: Vec<Vec3> = (0..m.max(4)).map(|_| unit(&mut g)).collect();
        if halfspace_condition(&dirs, Vec3::ZERO) {
            let centers: Vec<Vec3> = dirs.iter().map(|&u| u * (r0 - 1.0)).collect();
            return BallPolytope3::build(1.0, &centers).expect("touching bodies build");
        }
    }
}

/// Polygon of `m` λ-disks touching the disk of radius `r0` about the chart origin.
pub fn touching_polygon(c: i32, lambda: f64, seed: u64, m: usize, r0: f64) -> Option<ArcPolygon2> {
    let space = ModelSpace::plane(c).ok()?;
    let mut g = rng(seed);
    let disks: Vec<LambdaDisk2> = (0..m)
        .map(|_| {
            let a = std::f64::consts::TAU * g.random::<f64>();
            LambdaDisk2::touching(space, lambda, Vec2::from_angle(a), r0).ok()
        })
        .collect::<Option<_>>()?;
    build2(space, lambda, &disks).ok()
}
