//! Inscribed balls of ball polytopes.
//!
//! For `K = ∩ B(o_i, R)` the largest inscribed ball is `B(c, R − ρ)` where
//! `B(c, ρ)` is the minimal enclosing ball of the centers, and the facets it
//! touches are exactly those whose centers lie on that enclosing sphere.

use alloc::format;
use alloc::vec::Vec;

use crate::ball_polytope::BallPolytope3;
use crate::error::{invalid, Error, Result};
use crate::reference_bodies::lens3_from_surface_area;
use crate::vector::{Vec2, Vec3};

/// Relative tolerance, in units of `1/λ`, for a facet to count as touching the inscribed ball.
pub const TOUCH_TOL: f64 = 1e-9;

/// Slack under which a point of the half-space test counts as the origin of the hull.
const HULL_TOL: f64 = 1e-12;

/// Smallest ball containing a point set.
#[derive(Clone, Debug, PartialEq)]
pub struct MebResult {
    pub center: Vec3,
    pub radius: f64,
    /// Indices of the points that determine the ball, at most `dim + 1`.
    pub support: Vec<usize>,
}

impl MebResult {
    /// Indices of all points within `tol` of the bounding sphere.
    pub fn boundary(&self, points: &[Vec3], tol: f64) -> Vec<usize> {
        (0..points.len())
            .filter(|&i| (points[i].dist(self.center) - self.radius).abs() <= tol)
            .collect()
    }
}

#[derive(Clone, Copy)]
struct Ball {
    center: Vec3,
    r2: f64,
    basis: [usize; 4],
    len: usize,
}

impl Ball {
    fn contains(&self, p: Vec3) -> bool {
        self.len > 0 && (p - self.center).norm_sq() <= self.r2 * (1.0 + 1e-12) + 1e-300
    }
}

fn circumball(pts: &[Vec3], idx: &[usize]) -> Ball {
    let mut basis = [0; 4];
    basis[..idx.len()].copy_from_slice(idx);
    let make = |center: Vec3, r2: f64| Ball { center, r2, basis, len: idx.len() };
    match idx.len() {
        0 => make(Vec3::ZERO, -1.0),
        1 => make(pts[idx[0]], 0.0),
        2 => {
            let c = (pts[idx[0]] + pts[idx[1]]) * 0.5;
            make(c, (pts[idx[0]] - c).norm_sq())
        }
        3 => {
            let a = pts[idx[0]];
            let (ab, ac) = (pts[idx[1]] - a, pts[idx[2]] - a);
            let n = ab.cross(ac);
            let n2 = n.norm_sq();
            if n2 <= 1e-28 * ab.norm_sq() * ac.norm_sq() {
                // collinear: the farthest pair spans the ball
                let pairs = [(idx[0], idx[1]), (idx[0], idx[2]), (idx[1], idx[2])];
                let &(i, j) = pairs
                    .iter()
                    .max_by(|p, q| pts[p.0].dist(pts[p.1]).total_cmp(&pts[q.0].dist(pts[q.1])))
                    .expect("three pairs");
                let mut b = circumball(pts, &[i, j]);
                b.basis = basis;
                b.len = 3;
                return b;
            }
            let w = (n.cross(ab) * ac.norm_sq() + ac.cross(n) * ab.norm_sq()) / (2.0 * n2);
            make(a + w, w.norm_sq())
        }
        _ => {
            let a = pts[idx[0]];
            let (u, v, w) = (pts[idx[1]] - a, pts[idx[2]] - a, pts[idx[3]] - a);
            let det = u.dot(v.cross(w));
            let scale = u.norm() * v.norm() * w.norm();
            if det.abs() <= 1e-12 * scale {
                // coplanar: the smallest circumball of three that covers the fourth
                let triples = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]];
                let mut best: Option<Ball> = None;
                for t in triples {
                    let b = circumball(pts, &[idx[t[0]], idx[t[1]], idx[t[2]]]);
                    if idx.iter().all(|&p| b.contains(pts[p])) && best.map_or(true, |x| b.r2 < x.r2) {
                        best = Some(b);
                    }
                }
                let mut b = best.unwrap_or_else(|| circumball(pts, &idx[..3]));
                b.basis = basis;
                b.len = 4;
                return b;
            }
            let x = (v.cross(w) * u.norm_sq() + w.cross(u) * v.norm_sq() + u.cross(v) * w.norm_sq()) / (2.0 * det);
            make(a + x, x.norm_sq())
        }
    }
}

fn move_to_front(pts: &[Vec3], order: &mut Vec<usize>, end: usize, boundary: &mut Vec<usize>, limit: usize) -> Ball {
    let mut ball = circumball(pts, boundary);
    if boundary.len() == limit {
        return ball;
    }
    for i in 0..end {
        let p = order[i];
        if !ball.contains(pts[p]) {
            boundary.push(p);
            ball = move_to_front(pts, order, i, boundary, limit);
            boundary.pop();
            order.remove(i);
            order.insert(0, p);
        }
    }
    ball
}

fn welzl(points: &[Vec3], limit: usize) -> MebResult {
    if points.is_empty() {
        return MebResult { center: Vec3::ZERO, radius: 0.0, support: Vec::new() };
    }
    let mut order: Vec<usize> = (0..points.len()).collect();
    let mut boundary = Vec::with_capacity(limit);
    let ball = move_to_front(points, &mut order, points.len(), &mut boundary, limit);
    let mut support = ball.basis[..ball.len].to_vec();
    support.sort_unstable();
    support.dedup();
    // the exact radius is the largest distance, which also absorbs roundoff in the solve
    let radius = points.iter().map(|p| p.dist(ball.center)).fold(0.0, f64::max);
    MebResult { center: ball.center, radius, support }
}

/// Minimal enclosing ball of points in R³ (move-to-front Welzl recursion).
pub fn minimal_enclosing_ball(points: &[Vec3]) -> MebResult {
    welzl(points, 4)
}

/// Minimal enclosing disk of points in R²; the center is returned with zero height.
pub fn minimal_enclosing_disk(points: &[Vec2]) -> MebResult {
    let lifted: Vec<Vec3> = points.iter().map(|p| p.extend(0.0)).collect();
    welzl(&lifted, 3)
}

/// The largest ball inside a body and the facets it touches.
#[derive(Clone, Debug, PartialEq)]
pub struct InscribedBall {
    pub center: Vec3,
    pub radius: f64,
    /// Input indices of the touching facets' balls.
    pub touching: Vec<usize>,
    /// Tangency point on each touching facet, parallel to `touching`. A single ball
    /// touches everywhere; its reported point is the top of the inscribed sphere.
    pub touch_points: Vec<Vec3>,
    /// Whether the touch points surround the center (no open half-space holds them all).
    pub halfspace_condition: bool,
}

/// Inscribed ball of the intersection of balls of radius `1/lambda` around `centers`.
pub fn inscribed_ball_of_centers(lambda: f64, centers: &[Vec3], dim: usize) -> Result<InscribedBall> {
    let r_ball = 1.0 / lambda;
    let meb = if dim == 2 {
        let flat: Vec<Vec2> = centers.iter().map(|c| Vec2::new(c.x, c.y)).collect();
        minimal_enclosing_disk(&flat)
    } else {
        minimal_enclosing_ball(centers)
    };
    if meb.radius >= r_ball {
        return Err(Error::EmptyBody);
    }
    let radius = r_ball - meb.radius;
    let o = meb.center;
    let mut touching = Vec::new();
    let mut touch_points = Vec::new();
    for (i, &c) in centers.iter().enumerate() {
        let d = c.dist(o);
        if (r_ball - d - radius).abs() < TOUCH_TOL * r_ball {
            let dir = if d > 0.0 { (o - c) / d } else if dim == 2 { Vec3::Y } else { Vec3::Z };
            touching.push(i);
            touch_points.push(o + dir * radius);
        }
    }
    let halfspace = touch_points.len() == 1 && centers.iter().all(|c| c.dist(o) == 0.0) || halfspace_condition(&touch_points, o);
    Ok(InscribedBall { center: o, radius, touching, touch_points, halfspace_condition: halfspace })
}

/// Inscribed ball of a ball polytope by the enclosing-ball duality.
pub fn inscribed_ball(k: &BallPolytope3) -> Result<InscribedBall> {
    let mut ball = inscribed_ball_of_centers(k.lambda(), k.centers(), 3)?;
    let retained = k.retained();
    let keep: Vec<bool> = ball.touching.iter().map(|i| retained.contains(i)).collect();
    let mut it = keep.iter();
    ball.touching.retain(|_| *it.next().expect("parallel"));
    let mut it = keep.iter();
    ball.touch_points.retain(|_| *it.next().expect("parallel"));
    Ok(ball)
}

/// Closest point to the origin on the segment `[a, b]`.
fn closest_on_segment(a: Vec3, b: Vec3) -> Vec3 {
    let ab = b - a;
    let den = ab.norm_sq();
    if den == 0.0 {
        return a;
    }
    a + ab * (-a.dot(ab) / den).clamp(0.0, 1.0)
}

/// Closest point to the origin on the triangle `abc`.
fn closest_on_triangle(a: Vec3, b: Vec3, c: Vec3) -> Vec3 {
    let n = (b - a).cross(c - a);
    let n2 = n.norm_sq();
    if n2 > 0.0 {
        let p = n * (a.dot(n) / n2);
        let inside = (b - a).cross(p - a).dot(n) >= 0.0
            && (c - b).cross(p - b).dot(n) >= 0.0
            && (a - c).cross(p - c).dot(n) >= 0.0;
        if inside {
            return p;
        }
    }
    [closest_on_segment(a, b), closest_on_segment(b, c), closest_on_segment(c, a)]
        .into_iter()
        .min_by(|p, q| p.norm_sq().total_cmp(&q.norm_sq()))
        .expect("three sides")
}

fn tetra_contains_origin(a: Vec3, b: Vec3, c: Vec3, d: Vec3) -> bool {
    let vol = (b - a).dot((c - a).cross(d - a));
    if vol.abs() < 1e-300 {
        return false;
    }
    let signs = [
        b.dot(c.cross(d)),
        -a.dot(c.cross(d)),
        a.dot(b.cross(d)),
        -a.dot(b.cross(c)),
    ];
    signs.iter().all(|&s| s * vol.signum() >= -HULL_TOL * vol.abs())
}

/// Point of the convex hull of `dirs` nearest the origin, by enumeration of simplices.
fn hull_min_norm_point(dirs: &[Vec3]) -> Vec3 {
    let n = dirs.len();
    let mut best = dirs[0];
    let mut consider = |p: Vec3| {
        if p.norm_sq() < best.norm_sq() {
            best = p;
        }
    };
    for i in 0..n {
        consider(dirs[i]);
        for j in i + 1..n {
            consider(closest_on_segment(dirs[i], dirs[j]));
            for k in j + 1..n {
                consider(closest_on_triangle(dirs[i], dirs[j], dirs[k]));
                for l in k + 1..n {
                    if tetra_contains_origin(dirs[i], dirs[j], dirs[k], dirs[l]) {
                        consider(Vec3::ZERO);
                    }
                }
            }
        }
    }
    best
}

/// A unit `u` with `u · (p_i − o) > 0` for all points, if one exists.
pub fn separating_direction(points: &[Vec3], o: Vec3) -> Option<Vec3> {
    if points.is_empty() {
        return Some(Vec3::Z);
    }
    let dirs: Vec<Vec3> = points.iter().map(|&p| (p - o).normalized()).collect();
    let m = hull_min_norm_point(&dirs);
    if m.norm() <= HULL_TOL {
        None
    } else {
        Some(m.normalized())
    }
}

/// Whether `o` lies in the convex hull of the points, i.e. no open half-space
/// bounded by a plane through `o` contains them all.
pub fn halfspace_condition(points: &[Vec3], o: Vec3) -> bool {
    separating_direction(points, o).is_none()
}

/// Drops the balls whose facets do not touch the inscribed ball.
pub fn reduce_to_touching(k: &BallPolytope3) -> Result<BallPolytope3> {
    let ball = inscribed_ball(k)?;
    let centers: Vec<Vec3> = ball.touching.iter().map(|&i| k.centers()[i]).collect();
    BallPolytope3::build(k.lambda(), &centers)
}

/// Moves every center along its ray from the inscribed center so that the
/// inscribed radius becomes `s`.
pub fn shrink_touching(k: &BallPolytope3, s: f64) -> Result<BallPolytope3> {
    let ball = inscribed_ball(k)?;
    if ball.touching.len() != k.retained().len() {
        return Err(Error::Precondition("polytope has facets that miss the inscribed ball".into()));
    }
    if !(s > 0.0 && s <= ball.radius) {
        return Err(invalid(format!("shrink radius {s} outside (0, {}]", ball.radius)));
    }
    if s == ball.radius {
        return BallPolytope3::build(k.lambda(), &k.retained_centers());
    }
    let keep = k.radius() - s;
    let centers: Vec<Vec3> = k
        .retained_centers()
        .iter()
        .map(|&c| {
            let d = c - ball.center;
            let dir = if d.norm() > 0.0 { d.normalized() } else { Vec3::Z };
            ball.center + dir * keep
        })
        .collect();
    BallPolytope3::build(k.lambda(), &centers)
}

/// Outcome of the inradius comparison with the lens of equal surface area.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InradiusReport {
    pub inradius: f64,
    pub lens_inradius: f64,
    /// `r(K) − r(L)`.
    pub margin: f64,
    /// The body has no vertices, so it is a ball or a lens.
    pub is_lens: bool,
    pub violation: bool,
}

/// Compares `r(K)` with the inradius of the lens whose surface area equals `|∂K|`.
pub fn verify_reverse_inradius(k: &BallPolytope3) -> Result<InradiusReport> {
    let r = inscribed_ball(k)?.radius;
    let lens = lens3_from_surface_area(k.lambda(), k.surface_area().min(4.0 * core::f64::consts::PI / (k.lambda() * k.lambda())))?;
    let margin = r - lens.inradius();
    Ok(InradiusReport {
        inradius: r,
        lens_inradius: lens.inradius(),
        margin,
        is_lens: k.vertices().is_empty(),
        violation: margin < -1e-9,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn meb_small_cases() {
        let m = minimal_enclosing_ball(&[Vec3::new(-0.5, 0.0, 0.0), Vec3::new(0.5, 0.0, 0.0)]);
        assert!(m.center.norm() < 1e-16);
        assert_eq!(m.radius, 0.5);
        let m = minimal_enclosing_ball(&[Vec3::new(1.0, 2.0, 3.0)]);
        assert_eq!(m.radius, 0.0);
        assert_eq!(m.support, [0]);
    }

    #[test]
    fn meb_certified_by_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let pts: Vec<Vec3> = (0..1000).map(|_| Vec3::new(rng.random(), rng.random(), rng.random())).collect();
        let m = minimal_enclosing_ball(&pts);
        assert!(pts.iter().all(|p| p.dist(m.center) <= m.radius + 1e-10));
        assert!(m.support.len() >= 2 && m.support.len() <= 4);
        for &s in &m.support {
            assert!((pts[s].dist(m.center) - m.radius).abs() < 1e-10);
        }
        let support: Vec<Vec3> = m.support.iter().map(|&i| pts[i]).collect();
        assert!(halfspace_condition(&support, m.center));
    }

    #[test]
    fn meb_of_cocircular_points() {
        let pts: Vec<Vec3> = (0..12)
            .map(|k| {
                let a = core::f64::consts::TAU * k as f64 / 12.0;
                Vec3::new(libm::cos(a), libm::sin(a), 0.0)
            })
            .collect();
        let m = minimal_enclosing_ball(&pts);
        assert!(m.center.norm() < 1e-14);
        assert!((m.radius - 1.0).abs() < 1e-14);
        assert_eq!(m.boundary(&pts, 1e-12).len(), 12);
    }

    #[test]
    fn halfspace_examples() {
        let o = Vec3::ZERO;
        assert!(halfspace_condition(&[Vec3::X, -Vec3::X], o));
        let hemi = [Vec3::new(1.0, 0.1, 0.0), Vec3::new(0.2, 1.0, 0.1), Vec3::new(0.3, 0.2, 1.0)];
        let u = separating_direction(&hemi, o).unwrap();
        assert!(hemi.iter().all(|p| u.dot(*p) > 0.0));
        let tet = [
            Vec3::new(1.0, 1.0, 1.0),
            Vec3::new(1.0, -1.0, -1.0),
            Vec3::new(-1.0, 1.0, -1.0),
            Vec3::new(-1.0, -1.0, 1.0),
        ];
        assert!(halfspace_condition(&tet, o));
        // three coplanar directions at 120 degrees surround the center within their plane
        let tri: Vec<Vec3> = (0..3)
            .map(|k| {
                let a = core::f64::consts::TAU * k as f64 / 3.0;
                Vec3::new(libm::cos(a), libm::sin(a), 0.0)
            })
            .collect();
        assert!(halfspace_condition(&tri, o));
    }

    #[test]
    fn lens_inradius() {
        let k = BallPolytope3::build(1.0, &[Vec3::new(0.0, 0.0, -0.5), Vec3::new(0.0, 0.0, 0.5)]).unwrap();
        let b = inscribed_ball(&k).unwrap();
        assert!(b.center.norm() < 1e-16);
        assert!((b.radius - 0.5).abs() < 1e-15);
        assert_eq!(b.touching, [0, 1]);
        assert!(b.halfspace_condition);
        let rep = verify_reverse_inradius(&k).unwrap();
        assert!(rep.margin.abs() < 1e-10 && rep.is_lens && !rep.violation);
    }

    #[test]
    fn ball_inradius() {
        let k = BallPolytope3::build(1.0, &[Vec3::ZERO]).unwrap();
        let b = inscribed_ball(&k).unwrap();
        assert_eq!(b.radius, 1.0);
        assert_eq!(b.touching, [0]);
        let rep = verify_reverse_inradius(&k).unwrap();
        assert!(rep.margin.abs() < 1e-10);
    }

    #[test]
    fn shrink_lens() {
        let k = BallPolytope3::build(1.0, &[Vec3::new(0.0, 0.0, -0.5), Vec3::new(0.0, 0.0, 0.5)]).unwrap();
        assert_eq!(shrink_touching(&k, 0.5).unwrap().centers(), k.centers());
        let s = shrink_touching(&k, 0.25).unwrap();
        assert!((inscribed_ball(&s).unwrap().radius - 0.25).abs() < 1e-15);
        assert!((s.surface_area() - 4.0 * core::f64::consts::PI * 0.25).abs() < 1e-12);
        assert!(shrink_touching(&k, 0.6).is_err());
    }

    #[test]
    fn reduce_drops_far_ball() {
        let c = [Vec3::new(0.0, 0.0, -0.5), Vec3::new(0.0, 0.0, 0.5), Vec3::new(0.45, 0.0, 0.0)];
        let k = BallPolytope3::build(1.0, &c).unwrap();
        assert_eq!(k.retained().len(), 3);
        let reduced = reduce_to_touching(&k).unwrap();
        assert_eq!(reduced.retained().len(), 2);
        assert!(reduced.surface_area() > k.surface_area());
        assert!((inscribed_ball(&reduced).unwrap().radius - 0.5).abs() < 1e-15);
        assert_eq!(reduce_to_touching(&reduced).unwrap(), reduced);
    }
}
