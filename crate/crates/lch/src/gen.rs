//! Random λ-convex bodies with a prescribed inscribed ball.
//!
//! Centers sit at `(r0 − 1/λ)·u_k` for unit directions `u_k` whose hull holds
//! the origin, so the ball `B(0, r0)` touches every facet.

use std::f64::consts::{PI, TAU};

use lch_core::arc_polygon::{build2, LambdaDisk2};
use lch_core::inradius::halfspace_condition;
use lch_core::model_space::{classify_umbilical, UmbilicalClass};
use lch_core::{ArcPolygon2, BallPolytope3, ModelSpace, Vec2, Vec3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub const REJECTION_BUDGET: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenSpec {
    pub seed: u64,
    /// Number of facets (arcs in 2-D).
    pub m: usize,
    pub inradius: f64,
    pub lambda: f64,
    pub dim: u32,
    /// Curvature of the model plane, 2-D only.
    pub curvature: i32,
}

#[derive(Debug, thiserror::Error)]
pub enum GenError {
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
    #[error("no admissible direction set after {0} tries")]
    BudgetExceeded(usize),
    #[error(transparent)]
    Geometry(#[from] lch_core::Error),
}

/// ChaCha8 seeded from `seed`, on stream `stream`.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn unit_vector3<R: Rng>(rng: &mut R) -> Vec3 {
    loop {
        let v = Vec3::new(
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
        );
        let n = v.norm();
        if n > 1e-12 {
            return v / n;
        }
    }
}

fn max_gap(angles: &mut [f64]) -> f64 {
    angles.sort_by(f64::total_cmp);
    let mut gap = angles[0] + TAU - angles[angles.len() - 1];
    for w in angles.windows(2) {
        gap = gap.max(w[1] - w[0]);
    }
    gap
}

/// `m` planar angles whose largest circular gap is below `limit`.
fn spread_angles<R: Rng>(rng: &mut R, m: usize, limit: f64) -> Result<Vec<f64>, GenError> {
    if m == 2 && limit >= PI {
        let a = TAU * rng.random::<f64>();
        return Ok(vec![a, a + PI]);
    }
    if m as f64 * limit <= TAU {
        return Err(GenError::InvalidSpec(format!("{m} directions cannot keep gaps below {limit}")));
    }
    for _ in 0..REJECTION_BUDGET {
        let mut a: Vec<f64> = (0..m).map(|_| TAU * rng.random::<f64>()).collect();
        let order = a.clone();
        if max_gap(&mut a) < limit {
            return Ok(order);
        }
    }
    Err(GenError::BudgetExceeded(REJECTION_BUDGET))
}

impl GenSpec {
    fn validate(&self) -> Result<(), GenError> {
        if self.m < 2 {
            return Err(GenError::InvalidSpec(format!("m = {} is below 2", self.m)));
        }
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(GenError::InvalidSpec(format!("λ = {} must be positive", self.lambda)));
        }
        if !(self.inradius > 0.0) {
            return Err(GenError::InvalidSpec(format!("inradius {} must be positive", self.inradius)));
        }
        Ok(())
    }
}

/// Touching polytope in R³ with inscribed ball `B(0, r0)`.
pub fn random_polytope(spec: &GenSpec) -> Result<BallPolytope3, GenError> {
    spec.validate()?;
    if spec.dim != 3 {
        return Err(GenError::InvalidSpec(format!("dim {} is not 3", spec.dim)));
    }
    let big_r = 1.0 / spec.lambda;
    if !(spec.inradius < big_r) {
        return Err(GenError::InvalidSpec(format!("inradius {} is not below 1/λ = {big_r}", spec.inradius)));
    }
    let mut rng = rng_for(spec.seed, 0);
    let dirs: Vec<Vec3> = match spec.m {
        2 => {
            let u = unit_vector3(&mut rng);
            vec![u, -u]
        }
        3 => {
            let (e1, e2) = unit_vector3(&mut rng).orthonormal_basis();
            spread_angles(&mut rng, 3, PI)?.into_iter().map(|a| e1 * a.cos() + e2 * a.sin()).collect()
        }
        m => {
            let mut found = None;
            for _ in 0..REJECTION_BUDGET {
                let d: Vec<Vec3> = (0..m).map(|_| unit_vector3(&mut rng)).collect();
                if halfspace_condition(&d, Vec3::ZERO) {
                    found = Some(d);
                    break;
                }
            }
            found.ok_or(GenError::BudgetExceeded(REJECTION_BUDGET))?
        }
    };
    let centers: Vec<Vec3> = dirs.iter().map(|&u| u * (spec.inradius - big_r)).collect();
    Ok(BallPolytope3::build(spec.lambda, &centers)?)
}

/// Largest admissible inradius of a touching polygon, `None` when unbounded.
pub fn max_inradius2(space: ModelSpace, lambda: f64) -> Result<Option<f64>, GenError> {
    Ok(match classify_umbilical(space, lambda)? {
        UmbilicalClass::Horosphere => None,
        UmbilicalClass::Equidistant { characteristic_distance } => Some(characteristic_distance),
        class => class.radius(),
    })
}

/// Touching polygon in the model plane with inscribed disk of radius `r0` about the chart origin.
pub fn random_polygon(spec: &GenSpec) -> Result<ArcPolygon2, GenError> {
    spec.validate()?;
    if spec.dim != 2 {
        return Err(GenError::InvalidSpec(format!("dim {} is not 2", spec.dim)));
    }
    let space = ModelSpace::plane(spec.curvature)?;
    let class = classify_umbilical(space, spec.lambda)?;
    if let Some(r_max) = max_inradius2(space, spec.lambda)? {
        if !(spec.inradius < r_max) {
            return Err(GenError::InvalidSpec(format!("inradius {} is not below {r_max}", spec.inradius)));
        }
    }
    // Ideal points outside every domain need angular gaps below 2θ with cos θ = tanh δ.
    let limit = match class {
        UmbilicalClass::Equidistant { characteristic_distance } => {
            (2.0 * (characteristic_distance - spec.inradius).tanh().acos()).min(PI)
        }
        _ => PI,
    };
    let mut rng = rng_for(spec.seed, 0);
    let angles = spread_angles(&mut rng, spec.m, limit)?;
    let disks = angles
        .iter()
        .map(|&a| LambdaDisk2::touching(space, spec.lambda, Vec2::from_angle(a), spec.inradius))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(build2(space, spec.lambda, &disks)?)
}
