//! Intersections of finitely many congruent balls in R³.
//!
//! The boundary of such a body is made of spherical facets, one per
//! non-redundant ball, joined along circular edge arcs that meet at vertices.
//! [`BallPolytope3::build`] derives that structure from the ball centers and
//! caches it; every measure after that is a closed-form sum over the pieces.
//!
//! Facet boundary loops are oriented with the facet on the left when seen
//! from outside. On facet `i` the arc of the circle shared with ball `j` runs
//! right-handed about the axis pointing from `o_i` to `o_j`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use libm::{acos, atan2, cos, sin, sqrt};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{degenerate, invalid, Error, Result};
use crate::inradius::minimal_enclosing_ball;
use crate::model_space::clamp_domain;
use crate::vector::Vec3;

/// Spatial tolerance, relative to the ball radius, for coincident vertices and tangencies.
pub const VERTEX_TOL: f64 = 1e-9;

/// Relative tolerance below which the body is considered to have empty interior.
pub const INTERIOR_TOL: f64 = 1e-9;

const DUPLICATE_TOL: f64 = 1e-12;

/// A point where three facets meet.
#[derive(Clone, Debug, PartialEq)]
pub struct Vertex {
    pub position: Vec3,
    /// Input indices of the three balls whose spheres pass through the vertex.
    pub incident: [usize; 3],
}

/// How an edge arc ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArcEnds {
    /// Indices into [`BallPolytope3::vertices`], in the order of increasing angle.
    Vertices { start: usize, end: usize },
    FullCircle,
}

/// An arc of the circle where the spheres of two balls meet.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeArc {
    /// Input indices of the two balls, smaller first.
    pub pair: (usize, usize),
    pub circle_center: Vec3,
    /// Unit vector from the first center toward the second.
    pub circle_axis: Vec3,
    pub circle_radius: f64,
    /// Right-handed frame `(e1, e2)` of the circle plane, `e1 × e2 = axis`.
    pub frame: (Vec3, Vec3),
    pub start_angle: f64,
    pub arc_angle: f64,
    pub ends: ArcEnds,
    pub length: f64,
    /// Angle between the two inward radius vectors at any point of the edge.
    pub dihedral: f64,
}

impl EdgeArc {
    pub fn point_at(&self, angle: f64) -> Vec3 {
        let (e1, e2) = self.frame;
        self.circle_center + (e1 * cos(angle) + e2 * sin(angle)) * self.circle_radius
    }

    pub fn midpoint(&self) -> Vec3 {
        self.point_at(self.start_angle + 0.5 * self.arc_angle)
    }

    /// `½∮ x × dx` along the arc in the direction of increasing angle.
    pub fn vector_area(&self) -> Vec3 {
        let (e1, e2) = self.frame;
        let (a0, a1) = (self.start_angle, self.start_angle + self.arc_angle);
        let rho = self.circle_radius;
        let chord = e1 * (cos(a1) - cos(a0)) + e2 * (sin(a1) - sin(a0));
        (self.circle_center.cross(chord) * rho + self.circle_axis * (rho * rho * self.arc_angle)) * 0.5
    }

    pub fn other(&self, ball: usize) -> usize {
        if self.pair.0 == ball {
            self.pair.1
        } else {
            self.pair.0
        }
    }
}

/// An edge traversed as part of a facet boundary.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ArcRef {
    pub edge: usize,
    /// True when the facet traverses the edge in its stored direction.
    pub forward: bool,
}

/// The part of one sphere that lies on the boundary of the body.
#[derive(Clone, Debug, PartialEq)]
pub struct Facet {
    pub ball_index: usize,
    pub boundary_loops: Vec<Vec<ArcRef>>,
    pub area: f64,
    /// `∫ n dA` over the facet.
    pub vector_area: Vec3,
}

/// What the build discarded.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BuildReport {
    /// Input indices of balls that contain the body without touching its boundary
    /// in a set of positive area, duplicates included.
    pub redundant: Vec<usize>,
}

/// Intersection of the balls `B(o_i, 1/λ)` with its boundary structure.
#[derive(Clone, Debug, PartialEq)]
pub struct BallPolytope3 {
    lambda: f64,
    centers: Vec<Vec3>,
    retained: Vec<usize>,
    report: BuildReport,
    vertices: Vec<Vertex>,
    edges: Vec<EdgeArc>,
    facets: Vec<Facet>,
}

impl BallPolytope3 {
    /// Intersect the balls of radius `1/lambda` around `centers`.
    pub fn build(lambda: f64, centers: &[Vec3]) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(invalid(format!("lambda must be positive and finite, got {lambda}")));
        }
        if centers.is_empty() {
            return Err(invalid("at least one center is required"));
        }
        if let Some(i) = centers.iter().position(|c| !c.is_finite()) {
            return Err(invalid(format!("center {i} is not finite")));
        }
        Builder::new(lambda, centers).run()
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Common ball radius `1/λ`.
    pub fn radius(&self) -> f64 {
        1.0 / self.lambda
    }

    /// All input centers, in input order.
    pub fn centers(&self) -> &[Vec3] {
        &self.centers
    }

    /// Input indices of the balls that carry a facet.
    pub fn retained(&self) -> &[usize] {
        &self.retained
    }

    pub fn retained_centers(&self) -> Vec<Vec3> {
        self.retained.iter().map(|&i| self.centers[i]).collect()
    }

    pub fn report(&self) -> &BuildReport {
        &self.report
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[EdgeArc] {
        &self.edges
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// Facet counts `(F, E, V)`.
    pub fn signature(&self) -> (usize, usize, usize) {
        (self.facets.len(), self.edges.len(), self.vertices.len())
    }

    pub fn facet_of_ball(&self, ball: usize) -> Option<&Facet> {
        self.facets.iter().find(|f| f.ball_index == ball)
    }

    /// Area of one facet.
    pub fn facet_area(&self, facet: &Facet) -> f64 {
        facet.area
    }

    pub fn surface_area(&self) -> f64 {
        self.facets.iter().map(|f| f.area).sum()
    }

    /// Volume by the divergence theorem over the facets.
    pub fn volume(&self) -> f64 {
        let r = self.radius();
        self.facets
            .iter()
            .map(|f| r * f.area + self.centers[f.ball_index].dot(f.vector_area))
            .sum::<f64>()
            / 3.0
    }

    /// Closed membership in every input ball.
    pub fn membership(&self, x: Vec3) -> bool {
        let r2 = self.radius() * self.radius() * (1.0 + 4.0 * f64::EPSILON);
        self.centers.iter().all(|&o| (x - o).norm_sq() <= r2)
    }

    /// Largest value of `|x − o_i| − 1/λ` over all input balls.
    pub fn max_violation(&self, x: Vec3) -> f64 {
        let r = self.radius();
        self.centers.iter().map(|&o| x.dist(o) - r).fold(f64::NEG_INFINITY, f64::max)
    }

    /// The same body scaled about the origin by `s > 0`.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        let centers: Vec<Vec3> = self.centers.iter().map(|&c| c * s).collect();
        Self::build(self.lambda / s, &centers)
    }

    /// Up to `samples` boundary points, uniform with respect to area, tagged with their facet's ball.
    pub fn sample_boundary(&self, samples: usize, seed: u64) -> Vec<(usize, Vec3)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let total: f64 = self.surface_area();
        let r = self.radius();
        let mut out = Vec::with_capacity(samples);
        let mut attempts = 0usize;
        while out.len() < samples && attempts < 200 * samples.max(1) {
            attempts += 1;
            let mut pick = rng.random::<f64>() * total;
            let mut facet = &self.facets[self.facets.len() - 1];
            for f in &self.facets {
                if pick < f.area {
                    facet = f;
                    break;
                }
                pick -= f.area;
            }
            let z = 2.0 * rng.random::<f64>() - 1.0;
            let phi = TAU * rng.random::<f64>();
            let s = sqrt((1.0 - z * z).max(0.0));
            let x = self.centers[facet.ball_index] + Vec3::new(s * cos(phi), s * sin(phi), z) * r;
            if self.max_violation(x) <= 1e-12 * r {
                out.push((facet.ball_index, x));
            }
        }
        out
    }

    /// Checks that the body lies in the supporting ball at every sampled boundary point.
    pub fn validate_lambda_convexity(&self, samples: usize, seed: u64) -> ConvexityReport {
        let points = self.sample_boundary(samples, seed);
        let r = self.radius();
        let mut max_violation = f64::NEG_INFINITY;
        let mut probes: Vec<Vec3> = self.vertices.iter().map(|v| v.position).collect();
        probes.extend(points.iter().map(|&(_, p)| p));
        let mut supports: Vec<usize> = points.iter().map(|&(i, _)| i).collect();
        for v in &self.vertices {
            supports.extend_from_slice(&v.incident);
        }
        supports.sort_unstable();
        supports.dedup();
        for &i in &supports {
            let o = self.centers[i];
            for &q in &probes {
                max_violation = max_violation.max(q.dist(o) - r);
            }
        }
        ConvexityReport {
            boundary_samples: points.len(),
            max_violation,
            passed: max_violation <= 1e-9,
        }
    }
}

/// Outcome of [`BallPolytope3::validate_lambda_convexity`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvexityReport {
    pub boundary_samples: usize,
    pub max_violation: f64,
    pub passed: bool,
}

struct Builder<'a> {
    lambda: f64,
    r: f64,
    centers: &'a [Vec3],
    active: Vec<bool>,
    report: BuildReport,
}

impl<'a> Builder<'a> {
    fn new(lambda: f64, centers: &'a [Vec3]) -> Self {
        Self {
            lambda,
            r: 1.0 / lambda,
            centers,
            active: vec![true; centers.len()],
            report: BuildReport::default(),
        }
    }

    fn run(mut self) -> Result<BallPolytope3> {
        let r = self.r;
        let meb = minimal_enclosing_ball(self.centers);
        if meb.radius > r * (1.0 + 1e-12) {
            return Err(Error::EmptyBody);
        }
        if meb.radius >= r * (1.0 - INTERIOR_TOL) {
            return Err(degenerate("the balls meet in a set with empty interior"));
        }
        for j in 0..self.centers.len() {
            if (0..j).any(|i| self.active[i] && self.centers[i].dist(self.centers[j]) <= DUPLICATE_TOL * r) {
                self.active[j] = false;
                self.report.redundant.push(j);
            }
        }
        let vertices = self.vertices()?;
        let edges = self.edges(&vertices)?;
        let facets = self.facets(&vertices, &edges)?;
        self.report.redundant.sort_unstable();
        let retained = facets.iter().map(|f| f.ball_index).collect();
        Ok(BallPolytope3 {
            lambda: self.lambda,
            centers: self.centers.to_vec(),
            retained,
            report: self.report,
            vertices,
            edges,
            facets,
        })
    }

    fn active_indices(&self) -> Vec<usize> {
        (0..self.centers.len()).filter(|&i| self.active[i]).collect()
    }

    /// Largest `|x − o_l| − R` over active balls other than `skip`.
    fn violation_excluding(&self, x: Vec3, skip: &[usize]) -> f64 {
        let mut worst = f64::NEG_INFINITY;
        for (l, &o) in self.centers.iter().enumerate() {
            if self.active[l] && !skip.contains(&l) {
                worst = worst.max(x.dist(o) - self.r);
            }
        }
        worst
    }

    fn vertices(&self) -> Result<Vec<Vertex>> {
        let idx = self.active_indices();
        let r = self.r;
        let tol = VERTEX_TOL * r;
        let mut out = Vec::new();
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate().skip(a + 1) {
                for &k in idx.iter().skip(b + 1) {
                    for x in triple_points(self.centers[i], self.centers[j], self.centers[k], r, tol)? {
                        let worst = self.violation_excluding(x, &[i, j, k]);
                        if worst.abs() <= tol {
                            return Err(degenerate(format!(
                                "four or more spheres pass near ({}, {}, {})",
                                x.x, x.y, x.z
                            )));
                        }
                        if worst < 0.0 {
                            out.push(Vertex { position: x, incident: [i, j, k] });
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    fn edges(&self, vertices: &[Vertex]) -> Result<Vec<EdgeArc>> {
        let idx = self.active_indices();
        let r = self.r;
        let tol = VERTEX_TOL * r;
        let mut out = Vec::new();
        for (a, &i) in idx.iter().enumerate() {
            for &j in idx.iter().skip(a + 1) {
                let (oi, oj) = (self.centers[i], self.centers[j]);
                let d = oi.dist(oj);
                if d >= 2.0 * r {
                    continue;
                }
                let axis = (oj - oi) / d;
                let center = (oi + oj) * 0.5;
                let rho = sqrt(r * r - 0.25 * d * d);
                let frame = axis.orthonormal_basis();
                let dihedral = acos(clamp_domain(1.0 - 0.5 * d * d / (r * r), -1.0, 1.0));
                let mut on_circle: Vec<(f64, usize)> = vertices
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| v.incident.contains(&i) && v.incident.contains(&j))
                    .map(|(vi, v)| {
                        let w = v.position - center;
                        (atan2(w.dot(frame.1), w.dot(frame.0)), vi)
                    })
                    .collect();
                let make = |start_angle: f64, arc_angle: f64, ends: ArcEnds| EdgeArc {
                    pair: (i, j),
                    circle_center: center,
                    circle_axis: axis,
                    circle_radius: rho,
                    frame,
                    start_angle,
                    arc_angle,
                    ends,
                    length: rho * arc_angle,
                    dihedral,
                };
                if on_circle.is_empty() {
                    let mut verdict = None;
                    for step in 0..3 {
                        let probe = make(0.0, TAU, ArcEnds::FullCircle).point_at(step as f64 * TAU / 3.0);
                        let worst = self.violation_excluding(probe, &[i, j]);
                        if worst < -tol {
                            verdict = Some(true);
                            break;
                        }
                        if worst > tol {
                            verdict = Some(false);
                            break;
                        }
                    }
                    match verdict {
                        Some(true) => out.push(make(0.0, TAU, ArcEnds::FullCircle)),
                        Some(false) => {}
                        None => return Err(degenerate(format!("circle of balls {i}, {j} is tangent to another sphere"))),
                    }
                    continue;
                }
                if on_circle.len() == 1 {
                    return Err(degenerate(format!("circle of balls {i}, {j} touches the body at one point")));
                }
                on_circle.sort_by(|p, q| p.0.total_cmp(&q.0));
                let n = on_circle.len();
                for s in 0..n {
                    let (a0, v0) = on_circle[s];
                    let (mut a1, v1) = on_circle[(s + 1) % n];
                    if s + 1 == n {
                        a1 += TAU;
                    }
                    let arc = make(a0, a1 - a0, ArcEnds::Vertices { start: v0, end: v1 });
                    if self.violation_excluding(arc.midpoint(), &[i, j]) < 0.0 {
                        out.push(arc);
                    }
                }
            }
        }
        Ok(out)
    }

    fn facets(&mut self, vertices: &[Vertex], edges: &[EdgeArc]) -> Result<Vec<Facet>> {
        let r = self.r;
        let idx = self.active_indices();
        let mut out = Vec::new();
        for &i in &idx {
            let mine: Vec<usize> = (0..edges.len())
                .filter(|&e| edges[e].pair.0 == i || edges[e].pair.1 == i)
                .collect();
            if mine.is_empty() {
                if idx.len() == 1 {
                    out.push(Facet {
                        ball_index: i,
                        boundary_loops: Vec::new(),
                        area: 4.0 * PI * r * r,
                        vector_area: Vec3::ZERO,
                    });
                } else {
                    self.active[i] = false;
                    self.report.redundant.push(i);
                }
                continue;
            }
            let loops = chain_loops(i, &mine, edges)?;
            let (area, vector_area) = facet_measures(i, self.centers[i], r, &loops, vertices, edges);
            if !(area > 0.0) {
                return Err(Error::Topology(format!("facet {i} has non-positive area {area}")));
            }
            out.push(Facet { ball_index: i, boundary_loops: loops, area, vector_area });
        }
        Ok(out)
    }
}

/// Points on all three spheres of radius `r` around `a`, `b`, `c`.
fn triple_points(a: Vec3, b: Vec3, c: Vec3, r: f64, tol: f64) -> Result<Vec<Vec3>> {
    let ab = b - a;
    let ac = c - a;
    let n = ab.cross(ac);
    let n2 = n.norm_sq();
    if n2 <= 1e-24 * ab.norm_sq() * ac.norm_sq() {
        return Ok(Vec::new());
    }
    // circumcenter of the triangle
    let w = (n.cross(ab) * ac.norm_sq() + ac.cross(n) * ab.norm_sq()) / (2.0 * n2);
    let cc = a + w;
    let h2 = r * r - w.norm_sq();
    if h2 < -tol * r {
        return Ok(Vec::new());
    }
    if h2 <= tol * r {
        return Err(degenerate("three spheres meet tangentially"));
    }
    let h = sqrt(h2);
    let nn = n / sqrt(n2);
    Ok(vec![cc + nn * h, cc - nn * h])
}

fn chain_loops(ball: usize, mine: &[usize], edges: &[EdgeArc]) -> Result<Vec<Vec<ArcRef>>> {
    let directed: Vec<(ArcRef, Option<(usize, usize)>)> = mine
        .iter()
        .map(|&e| {
            let forward = edges[e].pair.0 == ball;
            let ends = match edges[e].ends {
                ArcEnds::Vertices { start, end } if forward => Some((start, end)),
                ArcEnds::Vertices { start, end } => Some((end, start)),
                ArcEnds::FullCircle => None,
            };
            (ArcRef { edge: e, forward }, ends)
        })
        .collect();
    let mut used = vec![false; directed.len()];
    let mut loops = Vec::new();
    for s in 0..directed.len() {
        if used[s] {
            continue;
        }
        used[s] = true;
        let (first, ends) = directed[s];
        let mut lp = vec![first];
        if let Some((origin, mut at)) = ends {
            while at != origin {
                let next = (0..directed.len())
                    .find(|&k| !used[k] && matches!(directed[k].1, Some((from, _)) if from == at))
                    .ok_or_else(|| Error::Topology(format!("facet {ball} has an open boundary at vertex {at}")))?;
                used[next] = true;
                lp.push(directed[next].0);
                at = directed[next].1.expect("vertex arc").1;
            }
        }
        loops.push(lp);
    }
    Ok(loops)
}

fn tangent(edge: &EdgeArc, ball: usize, x: Vec3) -> Vec3 {
    let axis = if edge.pair.0 == ball { edge.circle_axis } else { -edge.circle_axis };
    axis.cross(x - edge.circle_center).normalized()
}

/// Area and vector area of a facet from its boundary loops.
fn facet_measures(
    ball: usize,
    center: Vec3,
    r: f64,
    loops: &[Vec<ArcRef>],
    vertices: &[Vertex],
    edges: &[EdgeArc],
) -> (f64, Vec3) {
    let mut curvature = 0.0;
    let mut turning = 0.0;
    let mut vector_area = Vec3::ZERO;
    for lp in loops {
        for (k, arc) in lp.iter().enumerate() {
            let e = &edges[arc.edge];
            let d = center.dist(edges[arc.edge].circle_center) * 2.0;
            curvature += 0.5 * d / r * e.arc_angle;
            let va = e.vector_area();
            vector_area += if arc.forward { va } else { -va };
            if let ArcEnds::Vertices { start, end } = e.ends {
                let at = if arc.forward { end } else { start };
                let next = &edges[lp[(k + 1) % lp.len()].edge];
                let x = vertices[at].position;
                let t_in = tangent(e, ball, x);
                let t_out = tangent(next, ball, x);
                let normal = (x - center) / r;
                turning += atan2(normal.dot(t_in.cross(t_out)), t_in.dot(t_out));
            }
        }
    }
    let euler = 2.0 - loops.len() as f64;
    (r * r * (TAU * euler - curvature - turning), vector_area)
}
