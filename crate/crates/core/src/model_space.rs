//! Space forms M^n(c) and the conformal charts of their two-dimensional members.
//!
//! Charts: the identity for c = 0, stereographic projection from the south
//! pole for c = +1, and the Poincaré unit disk for c = −1. In every chart the
//! curves of constant geodesic curvature are Euclidean circles or lines.

use alloc::format;

use libm::{atan, atan2, log, sqrt};

use crate::arc_polygon::LambdaDisk2;
use crate::error::{invalid, Result};
use crate::vector::{Vec2, Vec3};

/// Slack allowed when clamping arguments of inverse trig and hyperbolic functions.
pub const CLAMP_TOL: f64 = 1e-12;

/// A simply connected space form of dimension `dim` and sectional curvature `curvature`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelSpace {
    pub dim: u32,
    pub curvature: f64,
}

impl ModelSpace {
    pub fn new(dim: u32, curvature: f64) -> Result<Self> {
        if dim < 2 {
            return Err(invalid(format!("dimension {dim} is below 2")));
        }
        if !curvature.is_finite() {
            return Err(invalid("curvature must be finite"));
        }
        Ok(Self { dim, curvature })
    }

    pub const fn euclidean(dim: u32) -> Self {
        Self { dim, curvature: 0.0 }
    }

    /// The plane, sphere or hyperbolic plane of curvature `c ∈ {−1, 0, 1}`.
    pub fn plane(c: i32) -> Result<Self> {
        if !(-1..=1).contains(&c) {
            return Err(invalid(format!("curvature {c} has no metric layer")));
        }
        Ok(Self { dim: 2, curvature: c as f64 })
    }

    /// Sign of the curvature for the implemented charts, or an error for other spaces.
    pub fn chart(&self) -> Result<Chart> {
        if self.dim != 2 {
            return Err(invalid(format!("metric layer needs dim 2, got {}", self.dim)));
        }
        match self.curvature {
            0.0 => Ok(Chart::Flat),
            1.0 => Ok(Chart::Stereographic),
            -1.0 => Ok(Chart::PoincareDisk),
            c => Err(invalid(format!("curvature {c} has no metric layer; rescale to |c| = 1"))),
        }
    }
}

/// Conformal chart of a two-dimensional model space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Chart {
    Flat,
    Stereographic,
    PoincareDisk,
}

impl Chart {
    pub fn curvature(self) -> f64 {
        match self {
            Chart::Flat => 0.0,
            Chart::Stereographic => 1.0,
            Chart::PoincareDisk => -1.0,
        }
    }

    /// Ratio of metric length to chart length at `p`.
    pub fn conformal_factor(self, p: Vec2) -> f64 {
        match self {
            Chart::Flat => 1.0,
            Chart::Stereographic => 2.0 / (1.0 + p.norm_sq()),
            Chart::PoincareDisk => 2.0 / (1.0 - p.norm_sq()),
        }
    }

    pub fn contains(self, p: Vec2) -> bool {
        p.is_finite() && (self != Chart::PoincareDisk || p.norm_sq() < 1.0)
    }

    pub fn check(self, p: Vec2) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(invalid(format!("point ({}, {}) lies outside the model domain", p.x, p.y)))
        }
    }

    /// Chart point at metric distance `d` from the origin in the unit direction `u`.
    pub fn point_at(self, u: Vec2, d: f64) -> Vec2 {
        let s = match self {
            Chart::Flat => d,
            Chart::Stereographic => libm::tan(0.5 * d),
            Chart::PoincareDisk => libm::tanh(0.5 * d),
        };
        u * s
    }

    /// Ambient coordinates: the unit sphere in R³ or the hyperboloid in R^{2,1}
    /// (time coordinate first). The flat chart embeds at height zero.
    pub fn lift(self, p: Vec2) -> Vec3 {
        let s = p.norm_sq();
        match self {
            Chart::Flat => p.extend(0.0),
            Chart::Stereographic => Vec3::new(2.0 * p.x, 2.0 * p.y, 1.0 - s) / (1.0 + s),
            Chart::PoincareDisk => Vec3::new(1.0 + s, 2.0 * p.x, 2.0 * p.y) / (1.0 - s),
        }
    }

    /// Inverse of [`Chart::lift`] for points of the model.
    pub fn project(self, q: Vec3) -> Vec2 {
        match self {
            Chart::Flat => Vec2::new(q.x, q.y),
            Chart::Stereographic => Vec2::new(q.x, q.y) / (1.0 + q.z),
            Chart::PoincareDisk => Vec2::new(q.y, q.z) / (1.0 + q.x),
        }
    }

    /// Geodesic distance between two chart points.
    pub fn distance(self, p: Vec2, q: Vec2) -> f64 {
        let diff = (p - q).norm();
        match self {
            Chart::Flat => diff,
            Chart::Stereographic => {
                // |1 + conj(p) q| with complex multiplication
                let re = 1.0 + p.x * q.x + p.y * q.y;
                let im = p.x * q.y - p.y * q.x;
                2.0 * atan2(diff, sqrt(re * re + im * im))
            }
            Chart::PoincareDisk => {
                let den = sqrt((1.0 - p.norm_sq()) * (1.0 - q.norm_sq()));
                2.0 * libm::asinh(diff / den)
            }
        }
    }
}

/// Minkowski product of R^{2,1} with signature (−, +, +).
pub fn minkowski(a: Vec3, b: Vec3) -> f64 {
    -a.x * b.x + a.y * b.y + a.z * b.z
}

/// Complete totally umbilical curves and surfaces of constant normal curvature λ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum UmbilicalClass {
    EuclideanSphere { radius: f64 },
    GeodesicSphereSpherical { radius: f64 },
    GeodesicSphereHyperbolic { radius: f64 },
    Horosphere,
    Equidistant { characteristic_distance: f64 },
}

impl UmbilicalClass {
    /// Radius of the bounded cases.
    pub fn radius(&self) -> Option<f64> {
        match *self {
            UmbilicalClass::EuclideanSphere { radius }
            | UmbilicalClass::GeodesicSphereSpherical { radius }
            | UmbilicalClass::GeodesicSphereHyperbolic { radius } => Some(radius),
            _ => None,
        }
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("lambda must be positive and finite, got {lambda}")))
    }
}

/// Which umbilical hypersurface has normal curvature `lambda` in `space`.
pub fn classify_umbilical(space: ModelSpace, lambda: f64) -> Result<UmbilicalClass> {
    check_lambda(lambda)?;
    let c = space.curvature;
    if c == 0.0 {
        return Ok(UmbilicalClass::EuclideanSphere { radius: 1.0 / lambda });
    }
    let k = sqrt(c.abs());
    if c > 0.0 {
        // arccot(λ/√c) for positive arguments
        return Ok(UmbilicalClass::GeodesicSphereSpherical { radius: atan(k / lambda) / k });
    }
    let ratio = lambda / k;
    if (ratio - 1.0).abs() <= CLAMP_TOL {
        Ok(UmbilicalClass::Horosphere)
    } else if ratio > 1.0 {
        let radius = 0.5 * log((ratio + 1.0) / (ratio - 1.0)) / k;
        Ok(UmbilicalClass::GeodesicSphereHyperbolic { radius })
    } else {
        Ok(UmbilicalClass::Equidistant { characteristic_distance: characteristic_distance(c, lambda)? })
    }
}

/// Distance between an equidistant hypersurface of curvature `lambda` and its base hyperplane.
pub fn characteristic_distance(c: f64, lambda: f64) -> Result<f64> {
    if !(c < 0.0) || !c.is_finite() {
        return Err(invalid(format!("characteristic distance needs c < 0, got {c}")));
    }
    let k = sqrt(-c);
    if !(lambda > 0.0 && lambda < k) {
        return Err(invalid(format!("lambda {lambda} outside (0, {k})")));
    }
    Ok(0.5 * log((k + lambda) / (k - lambda)) / k)
}

/// Factor converting lengths measured at curvature ±1 into lengths at curvature `c`.
pub fn length_scale(c: f64) -> f64 {
    if c == 0.0 {
        1.0
    } else {
        1.0 / sqrt(c.abs())
    }
}

/// Geodesic distance between two chart points of a two-dimensional model space.
pub fn metric_distance(space: ModelSpace, p: Vec2, q: Vec2) -> Result<f64> {
    let chart = space.chart()?;
    chart.check(p)?;
    chart.check(q)?;
    Ok(chart.distance(p, q))
}

/// Signed distance to the boundary of a λ-disk: positive inside, negative outside.
pub fn signed_distance_to_lambda_disk(space: ModelSpace, disk: &LambdaDisk2, p: Vec2) -> Result<f64> {
    if disk.space() != space {
        return Err(invalid("disk belongs to a different model space"));
    }
    space.chart()?.check(p)?;
    Ok(disk.signed_distance(p))
}

/// Clamp the argument of an inverse function to its closed domain.
pub fn clamp_domain(x: f64, lo: f64, hi: f64) -> f64 {
    x.clamp(lo, hi)
}
