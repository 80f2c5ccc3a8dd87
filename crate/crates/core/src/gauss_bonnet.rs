//! Spherical-image bookkeeping for ball polytopes.
//!
//! The outward normals of the boundary cover the unit sphere once: facets
//! contribute `λ²β_i`, each edge a zone of area `2λl tan(γ/2)`, and each
//! vertex the spherical polygon spanned by its facet normals.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use libm::{atan2, tan};

use crate::ball_polytope::{BallPolytope3, EdgeArc, Vertex};
use crate::error::{degenerate, invalid, Result};
use crate::vector::Vec3;

/// Facet, edge and vertex shares of the total curvature.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GbReport {
    pub facet_total: f64,
    pub edge_total: f64,
    pub vertex_total: f64,
    pub grand_total: f64,
}

impl GbReport {
    /// `grand_total − 4π`.
    pub fn defect(&self) -> f64 {
        self.grand_total - 4.0 * PI
    }
}

/// Area of the normal zone of one edge, `2λl tan(γ/2)`.
pub fn edge_spherical_image(edge: &EdgeArc, lambda: f64) -> Result<f64> {
    if !(edge.dihedral < PI) {
        return Err(invalid(format!("dihedral angle {} is not below π", edge.dihedral)));
    }
    Ok(2.0 * lambda * edge.length * tan(0.5 * edge.dihedral))
}

/// Signed area of the spherical triangle `abc` (Van Oosterom–Strackee).
pub fn spherical_triangle_area(a: Vec3, b: Vec3, c: Vec3) -> f64 {
    let num = a.dot(b.cross(c));
    let den = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
    2.0 * atan2(num, den)
}

/// Area of the spherical polygon spanned by unit vectors in convex position.
pub fn spherical_polygon_area(normals: &[Vec3]) -> Result<f64> {
    let k = normals.len();
    if k < 3 {
        return Ok(0.0);
    }
    let centroid = normals.iter().fold(Vec3::ZERO, |s, &n| s + n).normalized();
    let (e1, e2) = centroid.orthonormal_basis();
    let mut ordered: Vec<(f64, Vec3)> = normals.iter().map(|&n| (atan2(n.dot(e2), n.dot(e1)), n)).collect();
    ordered.sort_by(|p, q| p.0.total_cmp(&q.0));
    for i in 0..k {
        let (a, b, c) = (ordered[i].1, ordered[(i + 1) % k].1, ordered[(i + 2) % k].1);
        if a.dot(b.cross(c)) <= 0.0 {
            return Err(degenerate("vertex normals are not in convex position"));
        }
    }
    let apex = ordered[0].1;
    let mut area = 0.0;
    for i in 1..k - 1 {
        area += spherical_triangle_area(apex, ordered[i].1, ordered[i + 1].1);
    }
    Ok(area)
}

/// Area of the normal cone of a vertex on the unit sphere.
pub fn vertex_spherical_image(k: &BallPolytope3, vertex: &Vertex) -> Result<f64> {
    let normals: Vec<Vec3> = vertex
        .incident
        .iter()
        .map(|&i| (vertex.position - k.centers()[i]).normalized())
        .collect();
    spherical_polygon_area(&normals)
}

/// Facet, edge and vertex contributions; they sum to 4π.
pub fn gb_total(k: &BallPolytope3) -> Result<GbReport> {
    let l = k.lambda();
    let facet_total = l * l * k.surface_area();
    let mut edge_total = 0.0;
    for e in k.edges() {
        edge_total += edge_spherical_image(e, l)?;
    }
    let mut vertex_total = 0.0;
    for v in k.vertices() {
        vertex_total += vertex_spherical_image(k, v)?;
    }
    Ok(GbReport {
        facet_total,
        edge_total,
        vertex_total,
        grand_total: facet_total + edge_total + vertex_total,
    })
}

/// Excess of a spherical polygon from its interior angles, for cross-checks.
pub fn spherical_excess(interior_angles: &[f64]) -> f64 {
    interior_angles.iter().sum::<f64>() - (interior_angles.len() as f64 - 2.0) * PI
}
