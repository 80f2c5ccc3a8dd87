//! λ-convex polygons in the plane, the round sphere and the hyperbolic plane.
//!
//! Every λ-disk is a Euclidean disk (or disk complement) in the conformal
//! chart, so the boundary is assembled from chart circles and the metric
//! enters only through the conformal factor.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use libm::{asinh, atan2, cos, cosh, exp, expm1, log, sin, sinh, sqrt, tan};

use crate::error::{degenerate, invalid, Error, Result};
use crate::inradius::minimal_enclosing_disk;
use crate::model_space::{classify_umbilical, minkowski, Chart, ModelSpace, UmbilicalClass};
use crate::quadrature::{bisect, gauss_kronrod};
use crate::reference_bodies::Lens2;
use crate::vector::{Vec2, Vec3};

const FEASIBLE_TOL: f64 = 1e-10;
const MERGE_TOL: f64 = 1e-10;
const ANGLE_TOL: f64 = 1e-9;

/// Shape of a λ-disk, in chart coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DiskKind {
    Euclidean { center: Vec2, radius: f64 },
    Geodesic { center: Vec2, radius: f64 },
    /// `{B_ξ ≤ level}` with the Busemann function normalized to vanish at the chart origin.
    Horodisk { ideal: Vec2, level: f64 },
    /// `{asinh⟨X, N⟩ ≤ offset}` for a unit spacelike normal `N` of R^{2,1}.
    Equidistant { normal: Vec3, offset: f64 },
}

/// A closed region bounded by a complete curve of geodesic curvature λ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LambdaDisk2 {
    space: ModelSpace,
    lambda: f64,
    kind: DiskKind,
}

/// `{x : A|x|² − 2b·x + C ≤ 0}` in the chart.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Quadric {
    a: f64,
    b: Vec2,
    c: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct Circle {
    center: Vec2,
    radius: f64,
    inside: bool,
    owner: Option<usize>,
}

enum Region {
    Empty,
    Everything,
    Circle(Circle),
}

impl Quadric {
    fn region(self, owner: Option<usize>) -> Result<Region> {
        let scale = self.a.abs() + self.b.norm() + self.c.abs();
        if self.a.abs() <= 1e-14 * scale {
            return Err(degenerate("disk boundary passes through the antipode of the chart origin"));
        }
        let center = self.b / self.a;
        let r2 = center.norm_sq() - self.c / self.a;
        let inside = self.a > 0.0;
        if r2 <= 0.0 {
            return Ok(if inside { Region::Empty } else { Region::Everything });
        }
        Ok(Region::Circle(Circle { center, radius: sqrt(r2), inside, owner }))
    }
}

impl Circle {
    fn violation(&self, p: Vec2) -> f64 {
        let d = p.dist(self.center) - self.radius;
        if self.inside {
            d
        } else {
            -d
        }
    }

    fn point(&self, angle: f64) -> Vec2 {
        self.center + Vec2::from_angle(angle) * self.radius
    }

    fn intersect(&self, o: &Circle) -> Vec<Vec2> {
        let delta = o.center - self.center;
        let d = delta.norm();
        if d == 0.0 || d > self.radius + o.radius || d < (self.radius - o.radius).abs() {
            return Vec::new();
        }
        let e = delta / d;
        let a = (d * d + self.radius * self.radius - o.radius * o.radius) / (2.0 * d);
        let h = sqrt((self.radius * self.radius - a * a).max(0.0));
        let base = self.center + e * a;
        vec![base + e.perp() * h, base - e.perp() * h]
    }

    fn same_as(&self, o: &Circle) -> bool {
        self.inside == o.inside && self.center.dist(o.center) <= MERGE_TOL && (self.radius - o.radius).abs() <= MERGE_TOL
    }
}

fn check_plane(space: ModelSpace) -> Result<Chart> {
    space.chart()
}

impl LambdaDisk2 {
    /// Round λ-disk about `center`: Euclidean for c = 0, geodesic otherwise (λ > 1 when c = −1).
    pub fn ball(space: ModelSpace, lambda: f64, center: Vec2) -> Result<Self> {
        let chart = check_plane(space)?;
        chart.check(center)?;
        let kind = match classify_umbilical(space, lambda)? {
            UmbilicalClass::EuclideanSphere { radius } => DiskKind::Euclidean { center, radius },
            UmbilicalClass::GeodesicSphereSpherical { radius } | UmbilicalClass::GeodesicSphereHyperbolic { radius } => {
                DiskKind::Geodesic { center, radius }
            }
            _ => return Err(invalid(format!("λ = {lambda} gives no geodesic disks in curvature {}", space.curvature))),
        };
        Ok(Self { space, lambda, kind })
    }

    /// Horodisk at the ideal point `ideal` of the hyperbolic plane, λ = 1.
    pub fn horodisk(space: ModelSpace, lambda: f64, ideal: Vec2, level: f64) -> Result<Self> {
        check_plane(space)?;
        if classify_umbilical(space, lambda)? != UmbilicalClass::Horosphere {
            return Err(invalid(format!("horodisks need c = −1 and λ = 1, got c = {}, λ = {lambda}", space.curvature)));
        }
        if !((ideal.norm() - 1.0).abs() <= 1e-9) || !level.is_finite() {
            return Err(invalid("ideal point must lie on the unit circle"));
        }
        Ok(Self { space, lambda, kind: DiskKind::Horodisk { ideal: ideal.normalized(), level } })
    }

    /// Equidistant domain from its unit spacelike normal.
    pub fn equidistant_from_normal(space: ModelSpace, lambda: f64, normal: Vec3) -> Result<Self> {
        check_plane(space)?;
        let offset = match classify_umbilical(space, lambda)? {
            UmbilicalClass::Equidistant { characteristic_distance } => characteristic_distance,
            _ => return Err(invalid(format!("equidistant domains need c = −1 and λ < 1, got λ = {lambda}"))),
        };
        let n2 = minkowski(normal, normal);
        if !(n2 > 0.0) || !normal.is_finite() {
            return Err(invalid("equidistant normal must be spacelike"));
        }
        Ok(Self { space, lambda, kind: DiskKind::Equidistant { normal: normal / sqrt(n2), offset } })
    }

    /// Equidistant domain of the geodesic through `p1` and `p2`.
    ///
    /// The domain holds the whole half-plane left of `p1 → p2` and a band of
    /// the characteristic width on its right.
    pub fn equidistant(space: ModelSpace, lambda: f64, p1: Vec2, p2: Vec2) -> Result<Self> {
        let chart = check_plane(space)?;
        chart.check(p1)?;
        chart.check(p2)?;
        if p1.dist(p2) <= 1e-12 {
            return Err(invalid("geodesic needs two distinct points"));
        }
        let (x1, x2) = (chart.lift(p1), chart.lift(p2));
        let cr = x1.cross(x2);
        let mut normal = Vec3::new(-cr.x, cr.y, cr.z);
        let d = p2 - p1;
        let probe = p1 + Vec2::new(d.y, -d.x).normalized() * (1e-6 * (1.0 - p1.norm_sq()));
        if minkowski(chart.lift(probe), normal) < 0.0 {
            normal = -normal;
        }
        Self::equidistant_from_normal(space, lambda, normal)
    }

    /// λ-disk whose boundary passes at distance `depth` from the chart origin
    /// in direction `u`, the origin inside.
    pub fn touching(space: ModelSpace, lambda: f64, u: Vec2, depth: f64) -> Result<Self> {
        let chart = check_plane(space)?;
        let u = u.normalized();
        if !(depth > 0.0) {
            return Err(invalid(format!("depth {depth} must be positive")));
        }
        match classify_umbilical(space, lambda)? {
            UmbilicalClass::Horosphere => Self::horodisk(space, lambda, -u, depth),
            UmbilicalClass::Equidistant { characteristic_distance } => {
                if depth >= characteristic_distance {
                    return Err(invalid(format!("depth {depth} reaches the characteristic distance")));
                }
                let delta = characteristic_distance - depth;
                Self::equidistant_from_normal(space, lambda, Vec3::new(-sinh(delta), cosh(delta) * u.x, cosh(delta) * u.y))
            }
            class => {
                let radius = class.radius().unwrap_or(0.0);
                if depth > radius {
                    return Err(invalid(format!("depth {depth} exceeds the disk radius {radius}")));
                }
                Self::ball(space, lambda, chart.point_at(-u, radius - depth))
            }
        }
    }

    /// Two chart points on the base geodesic of an equidistant domain, ordered
    /// so that [`LambdaDisk2::equidistant`] rebuilds the same domain.
    pub fn geodesic_points(&self) -> Option<(Vec2, Vec2)> {
        let DiskKind::Equidistant { normal, .. } = self.kind else { return None };
        let chart = self.chart();
        let tilde = Vec2::new(normal.y, normal.z);
        let v = tilde.normalized() * if normal.x < 0.0 { -1.0 } else { 1.0 };
        let d = libm::atanh(normal.x.abs() / tilde.norm());
        let foot = Vec3::new(cosh(d), sinh(d) * v.x, sinh(d) * v.y);
        let w = v.perp();
        let at = |s: f64| chart.project(foot * cosh(s) + Vec3::new(0.0, w.x, w.y) * sinh(s));
        let (p1, p2) = (at(-1.0), at(1.0));
        let d12 = p2 - p1;
        let probe = p1 + Vec2::new(d12.y, -d12.x).normalized() * (1e-6 * (1.0 - p1.norm_sq()));
        if minkowski(chart.lift(probe), normal) < 0.0 {
            Some((p2, p1))
        } else {
            Some((p1, p2))
        }
    }

    pub fn space(&self) -> ModelSpace {
        self.space
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn kind(&self) -> DiskKind {
        self.kind
    }

    fn chart(&self) -> Chart {
        self.space.chart().expect("disks are built in charted planes")
    }

    /// Distance from `p` to the boundary, positive inside.
    pub fn signed_distance(&self, p: Vec2) -> f64 {
        let chart = self.chart();
        match self.kind {
            DiskKind::Euclidean { center, radius } => radius - p.dist(center),
            DiskKind::Geodesic { center, radius } => radius - chart.distance(p, center),
            DiskKind::Horodisk { ideal, level } => level - log((ideal - p).norm_sq() / (1.0 - p.norm_sq())),
            DiskKind::Equidistant { normal, offset } => offset - asinh(minkowski(chart.lift(p), normal)),
        }
    }

    pub fn contains(&self, p: Vec2) -> bool {
        self.chart().contains(p) && self.signed_distance(p) >= 0.0
    }

    /// Chart quadric of the points at depth at least `t`, or `None` when empty.
    fn quadric(&self, t: f64) -> Option<Quadric> {
        let chart = self.chart();
        match self.kind {
            DiskKind::Euclidean { center, radius } => {
                let r = radius - t;
                (r > 0.0).then(|| Quadric { a: 1.0, b: center, c: center.norm_sq() - r * r })
            }
            DiskKind::Geodesic { center, radius } => {
                let r = radius - t;
                if !(r > 0.0) {
                    return None;
                }
                let z = chart.lift(center);
                let s = center.norm_sq();
                let h = sin(0.5 * r);
                let hh = sinh(0.5 * r);
                Some(match chart {
                    Chart::Stereographic => Quadric {
                        a: cos(r) + z.z,
                        b: Vec2::new(z.x, z.y),
                        c: 2.0 * s / (1.0 + s) - 2.0 * h * h,
                    },
                    _ => Quadric { a: z.x + cosh(r), b: Vec2::new(z.y, z.z), c: 2.0 * s / (1.0 - s) - 2.0 * hh * hh },
                })
            }
            DiskKind::Horodisk { ideal, level } => {
                let e = level - t;
                Some(Quadric { a: 1.0 + exp(e), b: ideal, c: -expm1(e) })
            }
            DiskKind::Equidistant { normal, offset } => {
                let s = sinh(offset - t);
                Some(Quadric { a: s - normal.x, b: Vec2::new(-normal.y, -normal.z), c: -(normal.x + s) })
            }
        }
    }

    fn chart_circle(&self) -> Result<Circle> {
        match self.quadric(0.0).map(|q| q.region(None)).transpose()? {
            Some(Region::Circle(c)) => Ok(c),
            _ => Err(degenerate("λ-disk has no boundary circle in the chart")),
        }
    }

    /// Geodesic curvature of the boundary at chart angle `angle` about the
    /// boundary circle's chart center, from three nearby boundary points.
    pub fn boundary_curvature(&self, angle: f64) -> Result<f64> {
        let circle = self.chart_circle()?;
        let h = 1e-3;
        let (a, b, c) = (circle.point(angle - h), circle.point(angle), circle.point(angle + h));
        let k0 = 2.0 * (b - a).cross(c - a) / ((b - a).norm() * (c - b).norm() * (a - c).norm());
        let k0 = if circle.inside { k0 } else { -k0 };
        let radial = (b - circle.center).normalized();
        let outward = if circle.inside { radial } else { -radial };
        let s = b.norm_sq();
        let grad = match self.chart() {
            Chart::Flat => Vec2::ZERO,
            Chart::Stereographic => b * (-2.0 / (1.0 + s)),
            Chart::PoincareDisk => b * (2.0 / (1.0 - s)),
        };
        Ok((k0 + grad.dot(outward)) / self.chart().conformal_factor(b))
    }

    /// Largest deviation of the sampled boundary curvature from λ.
    pub fn curvature_deviation(&self, samples: usize) -> Result<f64> {
        let chart = self.chart();
        let circle = self.chart_circle()?;
        let mut worst: f64 = 0.0;
        for k in 0..samples.max(1) {
            let angle = TAU * (k as f64 + 0.5) / samples.max(1) as f64;
            let p = circle.point(angle);
            let near_ideal = chart == Chart::PoincareDisk && p.norm_sq() > 1.0 - 1e-6;
            if !chart.contains(p) || near_ideal {
                continue;
            }
            worst = worst.max((self.boundary_curvature(angle)? - self.lambda).abs());
        }
        Ok(worst)
    }
}

/// One boundary arc, stored on its chart circle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Arc2 {
    /// Index of the disk carrying the arc.
    pub disk: usize,
    pub center: Vec2,
    pub radius: f64,
    pub start: f64,
    /// Signed chart angle; negative when the region lies outside the chart circle.
    pub sweep: f64,
    /// Metric length.
    pub length: f64,
}

impl Arc2 {
    pub fn point_at(&self, fraction: f64) -> Vec2 {
        self.center + Vec2::from_angle(self.start + fraction * self.sweep) * self.radius
    }

    fn tangent(&self, angle: f64) -> Vec2 {
        let t = Vec2::from_angle(angle).perp();
        if self.sweep >= 0.0 {
            t
        } else {
            -t
        }
    }

    fn interval(&self) -> (f64, f64, f64) {
        if self.sweep >= 0.0 {
            (self.start, self.start + self.sweep, 1.0)
        } else {
            (self.start + self.sweep, self.start, -1.0)
        }
    }
}

/// Intersection of finitely many λ-disks with its boundary decomposed into arcs.
#[derive(Clone, Debug, PartialEq)]
pub struct ArcPolygon2 {
    space: ModelSpace,
    lambda: f64,
    disks: Vec<LambdaDisk2>,
    arcs: Vec<Arc2>,
    vertices: Vec<Vec2>,
    turning: Vec<f64>,
    perimeter: f64,
    area: f64,
}

struct RawArc {
    circle: usize,
    start_vertex: Option<usize>,
    end_vertex: Option<usize>,
    start: f64,
    sweep: f64,
}

fn region_circles(disks: &[LambdaDisk2], chart: Chart, t: f64) -> Result<Option<Vec<Circle>>> {
    let mut circles: Vec<Circle> = Vec::new();
    let push = |c: Circle, circles: &mut Vec<Circle>| {
        if !circles.iter().any(|o| o.same_as(&c)) {
            circles.push(c);
        }
    };
    for (i, d) in disks.iter().enumerate() {
        let Some(q) = d.quadric(t) else { return Ok(None) };
        match q.region(Some(i))? {
            Region::Empty => return Ok(None),
            Region::Everything => {}
            Region::Circle(c) => push(c, &mut circles),
        }
    }
    if chart == Chart::PoincareDisk {
        push(Circle { center: Vec2::ZERO, radius: 1.0, inside: true, owner: None }, &mut circles);
    }
    Ok(Some(circles))
}

fn feasible(circles: &[Circle], p: Vec2, skip: &[usize]) -> bool {
    circles
        .iter()
        .enumerate()
        .all(|(k, c)| skip.contains(&k) || c.violation(p) <= FEASIBLE_TOL * (1.0 + c.radius))
}

fn boundary_arcs(circles: &[Circle]) -> Result<(Vec<Vec2>, Vec<RawArc>)> {
    let mut vertices: Vec<Vec2> = Vec::new();
    let mut on_circle: Vec<Vec<usize>> = vec![Vec::new(); circles.len()];
    for i in 0..circles.len() {
        for j in i + 1..circles.len() {
            for p in circles[i].intersect(&circles[j]) {
                if !feasible(circles, p, &[i, j]) {
                    continue;
                }
                let id = match vertices.iter().position(|v| v.dist(p) <= MERGE_TOL) {
                    Some(id) => id,
                    None => {
                        vertices.push(p);
                        vertices.len() - 1
                    }
                };
                for k in [i, j] {
                    if !on_circle[k].contains(&id) {
                        on_circle[k].push(id);
                    }
                }
            }
        }
    }
    let mut arcs = Vec::new();
    for (k, circle) in circles.iter().enumerate() {
        let mut marks: Vec<(f64, usize)> =
            on_circle[k].iter().map(|&v| ((vertices[v] - circle.center).angle(), v)).collect();
        marks.sort_by(|a, b| a.0.total_cmp(&b.0));
        if marks.is_empty() {
            if feasible(circles, circle.point(0.0), &[k]) {
                let sweep = if circle.inside { TAU } else { -TAU };
                arcs.push(RawArc { circle: k, start_vertex: None, end_vertex: None, start: 0.0, sweep });
            }
            continue;
        }
        let n = marks.len();
        for j in 0..n {
            let (a, va) = marks[j];
            let (mut b, vb) = marks[(j + 1) % n];
            if j + 1 == n {
                b += TAU;
            }
            if b - a <= ANGLE_TOL {
                continue;
            }
            if !feasible(circles, circle.point(0.5 * (a + b)), &[k]) {
                continue;
            }
            arcs.push(if circle.inside {
                RawArc { circle: k, start_vertex: Some(va), end_vertex: Some(vb), start: a, sweep: b - a }
            } else {
                RawArc { circle: k, start_vertex: Some(vb), end_vertex: Some(va), start: b, sweep: a - b }
            });
        }
    }
    Ok((vertices, arcs))
}

fn chain(arcs: Vec<RawArc>) -> Result<Vec<RawArc>> {
    if arcs.is_empty() {
        return Err(Error::EmptyBody);
    }
    if arcs.iter().any(|a| a.start_vertex.is_none()) {
        if arcs.len() != 1 {
            return Err(Error::Topology("a full boundary circle coexists with other arcs".into()));
        }
        return Ok(arcs);
    }
    let n = arcs.len();
    let mut slots: Vec<Option<RawArc>> = arcs.into_iter().map(Some).collect();
    let mut out = Vec::with_capacity(n);
    let mut current = slots[0].take().expect("first arc present");
    loop {
        let next = current.end_vertex;
        out.push(current);
        let found = slots.iter().position(|s| s.as_ref().is_some_and(|a| a.start_vertex == next));
        match found {
            Some(i) => current = slots[i].take().expect("slot checked"),
            None => break,
        }
    }
    if out.len() != n || out[0].start_vertex != out[n - 1].end_vertex {
        return Err(Error::Topology(format!("boundary arcs do not form one closed loop ({} of {n} chained)", out.len())));
    }
    Ok(out)
}

fn angle_in_arc(angle: f64, arc: &RawArc) -> bool {
    let (lo, len) = if arc.sweep >= 0.0 { (arc.start, arc.sweep) } else { (arc.start + arc.sweep, -arc.sweep) };
    let rel = angle - lo - TAU * libm::floor((angle - lo) / TAU);
    rel <= len + ANGLE_TOL
}

fn metric_length(chart: Chart, arc: &Arc2) -> Result<f64> {
    if chart == Chart::Flat {
        return Ok(arc.radius * arc.sweep.abs());
    }
    let (lo, hi, _) = arc.interval();
    let f = |phi: f64| chart.conformal_factor(arc.center + Vec2::from_angle(phi) * arc.radius) * arc.radius;
    let floor = 1e-15 * f(0.5 * (lo + hi)) * (hi - lo);
    let res = gauss_kronrod(f, lo, hi, floor, 1e-13)?;
    Ok(res.value)
}

/// `∮ w(|x|²)(x dy − y dx)` along one arc, the area 1-form of the conformal metric.
fn area_form(chart: Chart, arc: &Arc2) -> Result<f64> {
    let (lo, hi, sign) = arc.interval();
    let weight = |x: Vec2| match chart {
        Chart::Flat => 0.5,
        Chart::Stereographic => 2.0 / (1.0 + x.norm_sq()),
        Chart::PoincareDisk => 2.0 / (1.0 - x.norm_sq()),
    };
    let mid = arc.center + Vec2::from_angle(0.5 * (lo + hi)) * arc.radius;
    let floor = 1e-15 * weight(mid) * arc.radius * (arc.center.norm() + arc.radius) * (hi - lo);
    let res = gauss_kronrod(
        |phi| {
            let e = Vec2::from_angle(phi);
            weight(arc.center + e * arc.radius) * arc.radius * (arc.center.dot(e) + arc.radius)
        },
        lo,
        hi,
        floor,
        1e-13,
    )?;
    Ok(sign * res.value)
}

/// Intersection of `disks`, all of geodesic curvature `lambda`.
pub fn build2(space: ModelSpace, lambda: f64, disks: &[LambdaDisk2]) -> Result<ArcPolygon2> {
    let chart = check_plane(space)?;
    if disks.is_empty() {
        return Err(invalid("at least one disk is required"));
    }
    for d in disks {
        if d.space != space || (d.lambda - lambda).abs() > 1e-12 * lambda {
            return Err(invalid("every disk must share the polygon's space and λ"));
        }
    }
    let circles = region_circles(disks, chart, 0.0)?.ok_or(Error::EmptyBody)?;
    if chart == Chart::Stereographic && circles.iter().all(|c| !c.inside) {
        return Err(invalid("body contains the antipode of the chart origin; recenter it"));
    }
    let (vertex_pool, raw) = boundary_arcs(&circles)?;
    let raw = chain(raw)?;
    if chart == Chart::PoincareDisk {
        for a in &raw {
            let circle = &circles[a.circle];
            let Some(owner) = circle.owner else { return Err(Error::NonCompact) };
            if let Some(v) = a.start_vertex {
                if vertex_pool[v].norm_sq() >= 1.0 - 1e-9 {
                    return Err(Error::NonCompact);
                }
            }
            if let DiskKind::Horodisk { ideal, .. } = disks[owner].kind {
                if angle_in_arc((ideal - circle.center).angle(), a) {
                    return Err(Error::NonCompact);
                }
            }
        }
    }
    let mut arcs = Vec::with_capacity(raw.len());
    for a in &raw {
        let c = &circles[a.circle];
        let mut arc = Arc2 {
            disk: c.owner.expect("non-compact loops rejected above"),
            center: c.center,
            radius: c.radius,
            start: a.start,
            sweep: a.sweep,
            length: 0.0,
        };
        arc.length = metric_length(chart, &arc)?;
        arcs.push(arc);
    }
    let vertices: Vec<Vec2> = raw.iter().filter_map(|a| a.start_vertex.map(|v| vertex_pool[v])).collect();
    let n = arcs.len();
    let mut turning = Vec::with_capacity(vertices.len());
    if !vertices.is_empty() {
        for i in 0..n {
            let prev = &arcs[(i + n - 1) % n];
            let t_in = prev.tangent(prev.start + prev.sweep);
            let t_out = arcs[i].tangent(arcs[i].start);
            turning.push(atan2(t_in.cross(t_out), t_in.dot(t_out)));
        }
    }
    let perimeter = arcs.iter().map(|a| a.length).sum();
    let area = if chart == Chart::Flat {
        euclidean_area(&arcs, &vertices)
    } else {
        let mut total = 0.0;
        for a in &arcs {
            total += area_form(chart, a)?;
        }
        total
    };
    Ok(ArcPolygon2 { space, lambda, disks: disks.to_vec(), arcs, vertices, turning, perimeter, area })
}

/// Shoelace over the vertices plus one circular segment per arc.
fn euclidean_area(arcs: &[Arc2], vertices: &[Vec2]) -> f64 {
    if vertices.is_empty() {
        return PI * arcs[0].radius * arcs[0].radius;
    }
    let n = vertices.len();
    let shoelace: f64 = (0..n).map(|i| vertices[i].cross(vertices[(i + 1) % n])).sum::<f64>() * 0.5;
    let segments: f64 = arcs
        .iter()
        .map(|a| {
            let th = a.sweep.abs();
            0.5 * a.radius * a.radius * (th - sin(th))
        })
        .sum();
    shoelace + segments
}

/// Euclidean polygon from disk centers.
pub fn build2_euclidean(lambda: f64, centers: &[Vec2]) -> Result<ArcPolygon2> {
    let space = ModelSpace::euclidean(2);
    let disks = centers.iter().map(|&c| LambdaDisk2::ball(space, lambda, c)).collect::<Result<Vec<_>>>()?;
    build2(space, lambda, &disks)
}

impl ArcPolygon2 {
    pub fn space(&self) -> ModelSpace {
        self.space
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn disks(&self) -> &[LambdaDisk2] {
        &self.disks
    }

    /// Boundary arcs in counterclockwise order; arc `i` starts at vertex `i`.
    pub fn arcs(&self) -> &[Arc2] {
        &self.arcs
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    /// Turning angle at each vertex.
    pub fn turning_angles(&self) -> &[f64] {
        &self.turning
    }

    /// Number of arcs.
    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn perimeter(&self) -> f64 {
        self.perimeter
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    /// `λP + Σγ + c·area`, equal to 2π.
    pub fn total_turning(&self) -> f64 {
        self.lambda * self.perimeter + self.turning.iter().sum::<f64>() + self.space.curvature * self.area
    }

    /// Depth of `p`: the least signed distance to the disks.
    pub fn depth(&self, p: Vec2) -> f64 {
        self.disks.iter().map(|d| d.signed_distance(p)).fold(f64::INFINITY, f64::min)
    }

    pub fn contains(&self, p: Vec2) -> bool {
        self.space.chart().map(|c| c.contains(p)).unwrap_or(false) && self.depth(p) >= 0.0
    }

    /// Two arcs with equal turning angles, or a single circle.
    pub fn is_lens(&self) -> bool {
        match self.turning.as_slice() {
            [] => true,
            [a, b] => (a - b).abs() <= 1e-9,
            _ => false,
        }
    }

    fn require_flat(&self) -> Result<()> {
        if self.space.curvature != 0.0 {
            return Err(Error::Precondition("operation needs a Euclidean polygon".into()));
        }
        Ok(())
    }
}

pub fn perimeter2(poly: &ArcPolygon2) -> f64 {
    poly.perimeter()
}

pub fn area2(poly: &ArcPolygon2) -> f64 {
    poly.area()
}

/// Same disk centers with radius shrunk by `t`.
pub fn inner_parallel2(poly: &ArcPolygon2, t: f64) -> Result<ArcPolygon2> {
    poly.require_flat()?;
    let r = 1.0 / poly.lambda;
    if !(t >= 0.0 && t < r) {
        return Err(invalid(format!("erosion depth {t} outside [0, 1/λ)")));
    }
    let centers: Vec<Vec2> = poly
        .disks
        .iter()
        .map(|d| match d.kind {
            DiskKind::Euclidean { center, .. } => center,
            _ => unreachable!("flat polygons hold Euclidean disks"),
        })
        .collect();
    build2_euclidean(1.0 / (r - t), &centers)
}

/// Angle constraints against the lens of equal perimeter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConstraintsReport {
    pub gamma_star: f64,
    pub max_gamma: f64,
    pub sum_gamma: f64,
    pub passed: bool,
}

/// `max γ_i ≤ γ*` and `Σγ_i = 2γ*` with `γ* = π − Pλ/2`.
pub fn constraints_check(poly: &ArcPolygon2) -> Result<ConstraintsReport> {
    poly.require_flat()?;
    let gamma_star = PI - poly.perimeter * poly.lambda / 2.0;
    let max_gamma = poly.turning.iter().copied().fold(0.0, f64::max);
    let sum_gamma: f64 = poly.turning.iter().sum();
    let passed = max_gamma <= gamma_star + 1e-9 && (sum_gamma - 2.0 * gamma_star).abs() <= 1e-9;
    Ok(ConstraintsReport { gamma_star, max_gamma, sum_gamma, passed })
}

/// Derivative of the eroded perimeter at `t = 0`: `−λP − 2Σ tan(γ_i/2)`.
pub fn initial_derivative_2d(poly: &ArcPolygon2) -> Result<f64> {
    poly.require_flat()?;
    Ok(-poly.lambda * poly.perimeter - 2.0 * poly.turning.iter().map(|g| tan(0.5 * g)).sum::<f64>())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GoalReport {
    pub lhs: f64,
    pub rhs: f64,
    pub equality: bool,
    pub passed: bool,
}

/// `Σ tan(γ_i/2) ≤ 2 tan(γ*/2)` for a set of turning angles.
pub fn goal_inequality(angles: &[f64], gamma_star: f64) -> GoalReport {
    let lhs: f64 = angles.iter().map(|g| tan(0.5 * g)).sum();
    let rhs = 2.0 * tan(0.5 * gamma_star);
    let equality = angles.len() == 2 && angles.iter().all(|g| (g - gamma_star).abs() <= 1e-9);
    GoalReport { lhs, rhs, equality, passed: lhs <= rhs + 1e-12 }
}

pub fn goal_inequality_check(poly: &ArcPolygon2) -> Result<GoalReport> {
    let c = constraints_check(poly)?;
    Ok(goal_inequality(&poly.turning, c.gamma_star))
}

/// Area against the lens of equal perimeter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rip2dReport {
    pub perimeter: f64,
    pub area: f64,
    pub lens_area: f64,
    pub margin: f64,
    pub is_lens: bool,
    pub passed: bool,
}

pub fn rip2d_check(poly: &ArcPolygon2) -> Result<Rip2dReport> {
    poly.require_flat()?;
    let lens = Lens2::from_perimeter(poly.lambda, poly.perimeter)?;
    let lens_area = lens.area();
    let margin = poly.area - lens_area;
    Ok(Rip2dReport {
        perimeter: poly.perimeter,
        area: poly.area,
        lens_area,
        margin,
        is_lens: poly.is_lens(),
        passed: margin >= -1e-9,
    })
}

/// Largest disk inside a polygon, center in chart coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct InscribedDisk {
    pub center: Vec2,
    pub radius: f64,
    /// Disks whose boundary the inscribed disk touches.
    pub touching: Vec<usize>,
}

fn touching_disks(poly: &ArcPolygon2, center: Vec2, radius: f64) -> Vec<usize> {
    let tol = 1e-7 * (1.0 + radius);
    (0..poly.disks.len()).filter(|&i| (poly.disks[i].signed_distance(center) - radius).abs() <= tol).collect()
}

fn feasible_point(circles: &[Circle]) -> Option<Vec2> {
    for i in 0..circles.len() {
        if circles[i].inside && feasible(circles, circles[i].center, &[]) {
            return Some(circles[i].center);
        }
        for j in i + 1..circles.len() {
            for p in circles[i].intersect(&circles[j]) {
                if feasible(circles, p, &[]) {
                    return Some(p);
                }
            }
        }
    }
    None
}

/// Inradius: MEB duality in the plane, level-set bisection in the model spaces.
pub fn inradius2(poly: &ArcPolygon2) -> Result<InscribedDisk> {
    let chart = poly.space.chart()?;
    if chart == Chart::Flat {
        let centers: Vec<Vec2> = poly
            .disks
            .iter()
            .map(|d| match d.kind {
                DiskKind::Euclidean { center, .. } => center,
                _ => unreachable!("flat polygons hold Euclidean disks"),
            })
            .collect();
        let meb = minimal_enclosing_disk(&centers);
        let center = Vec2::new(meb.center.x, meb.center.y);
        let radius = 1.0 / poly.lambda - meb.radius;
        return Ok(InscribedDisk { center, radius, touching: touching_disks(poly, center, radius) });
    }
    let probe = |t: f64| -> Result<Option<Vec2>> {
        Ok(match region_circles(&poly.disks, chart, t)? {
            Some(circles) => feasible_point(&circles),
            None => None,
        })
    };
    let mut best = probe(0.0)?.ok_or(Error::EmptyBody)?;
    let mut lo = 0.0;
    let mut hi = 1.0;
    let mut doublings = 0;
    while let Some(p) = probe(hi)? {
        best = p;
        lo = hi;
        hi *= 2.0;
        doublings += 1;
        if doublings > 60 {
            return Err(Error::Numeric("inradius search did not bracket".into()));
        }
    }
    while hi - lo > 1e-13 * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        match probe(mid)? {
            Some(p) => {
                best = p;
                lo = mid;
            }
            None => hi = mid,
        }
    }
    if !(hi - lo <= 1e-10) {
        return Err(Error::Numeric("inradius bisection did not converge".into()));
    }
    Ok(InscribedDisk { center: best, radius: lo, touching: touching_disks(poly, best, lo) })
}

/// Symmetric lens of inradius `r` about the chart origin, arcs centered on the x-axis.
pub fn lens_in_space(space: ModelSpace, lambda: f64, r: f64) -> Result<ArcPolygon2> {
    let u = Vec2::new(1.0, 0.0);
    let a = LambdaDisk2::touching(space, lambda, u, r)?;
    let b = LambdaDisk2::touching(space, lambda, -u, r)?;
    build2(space, lambda, &[a, b])
}

/// Inradius of the lens with the given perimeter.
pub fn lens_inradius_for_perimeter(space: ModelSpace, lambda: f64, perimeter: f64) -> Result<f64> {
    if space.chart()? == Chart::Flat {
        return Ok(Lens2::from_perimeter(lambda, perimeter)?.inradius());
    }
    if !(perimeter > 0.0 && perimeter.is_finite()) {
        return Err(invalid(format!("perimeter {perimeter} must be positive")));
    }
    let gap = |r: f64| lens_in_space(space, lambda, r).map(|p| p.perimeter - perimeter);
    let hi = match classify_umbilical(space, lambda)? {
        UmbilicalClass::Horosphere => {
            let mut hi = 1.0;
            while gap(hi)? < 0.0 {
                hi *= 2.0;
                if hi > 1e6 {
                    return Err(Error::Numeric("lens perimeter search did not bracket".into()));
                }
            }
            hi
        }
        UmbilicalClass::Equidistant { characteristic_distance } => {
            let mut k = 1;
            loop {
                let hi = characteristic_distance * (1.0 - libm::exp2(-(k as f64)));
                if gap(hi)? >= 0.0 {
                    break hi;
                }
                k += 1;
                if k > 50 {
                    return Err(Error::Numeric("lens perimeter search did not bracket".into()));
                }
            }
        }
        class => {
            let rho = class.radius().unwrap_or(0.0);
            if gap(rho)? < -1e-9 * perimeter {
                return Err(Error::Precondition(format!("perimeter {perimeter} exceeds that of a λ-disk")));
            }
            rho
        }
    };
    let lo = 1e-12 * hi;
    let mut err = None;
    let r = bisect(
        |r| match gap(r) {
            Ok(v) => v,
            Err(e) => {
                err = Some(e);
                0.0
            }
        },
        lo,
        hi,
        1e-14 * hi,
    );
    if let Some(e) = err {
        return Err(e);
    }
    match r {
        Ok(r) => Ok(r),
        Err(_) if gap(hi)?.abs() <= 1e-9 * perimeter => Ok(hi),
        Err(e) => Err(e),
    }
}

/// Inradius against the lens of equal perimeter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TheoremB2Report {
    pub inradius: f64,
    pub lens_inradius: f64,
    pub margin: f64,
    pub passed: bool,
}

pub fn theorem_b_2d_check(poly: &ArcPolygon2) -> Result<TheoremB2Report> {
    let inradius = inradius2(poly)?.radius;
    let lens_inradius = lens_inradius_for_perimeter(poly.space, poly.lambda, poly.perimeter)?;
    let margin = inradius - lens_inradius;
    Ok(TheoremB2Report { inradius, lens_inradius, margin, passed: margin >= -1e-9 })
}
