//! Radial projection of facets onto the inscribed sphere.
//!
//! For a polytope whose facets all touch the inscribed ball `B(o, r)`, the
//! central projection from `o` carries the facets onto a partition of `∂B`.
//! Each facet covers at most `𝓕 = 1/(λr)` times the area of its shadow, with
//! equality exactly for the cap `F` cut from the facet's sphere by the plane
//! through `o` orthogonal to the touch direction.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI, TAU};

use libm::{atan2, cos, sin, sqrt};

use crate::ball_polytope::{ArcEnds, BallPolytope3};
use crate::error::{invalid, Error, Result};
use crate::inradius::{inscribed_ball, InscribedBall};
use crate::quadrature::{bisect, gauss_kronrod, gauss_kronrod_pieces};
use crate::vector::Vec3;

const AREA_TOL: f64 = 1e-11;

/// Polar coordinates about the touch direction of one facet.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadialChart {
    pub center: Vec3,
    pub inradius: f64,
    /// Input index of the facet's ball.
    pub facet: usize,
    pub touch_point: Vec3,
    pub ball_center: Vec3,
    pub ball_radius: f64,
    axis: Vec3,
    frame: (Vec3, Vec3),
}

impl RadialChart {
    /// Chart of the facet of ball `facet`, which must touch the inscribed ball.
    pub fn new(k: &BallPolytope3, ball: &InscribedBall, facet: usize) -> Result<Self> {
        let slot = ball
            .touching
            .iter()
            .position(|&i| i == facet)
            .ok_or_else(|| Error::Precondition(format!("facet {facet} does not touch the inscribed ball")))?;
        let touch_point = ball.touch_points[slot];
        let axis = (touch_point - ball.center).normalized();
        Ok(Self {
            center: ball.center,
            inradius: ball.radius,
            facet,
            touch_point,
            ball_center: k.centers()[facet],
            ball_radius: k.radius(),
            axis,
            frame: axis.orthonormal_basis(),
        })
    }

    /// Unit direction at polar angle `polar` from the touch direction and azimuth `azimuth`.
    pub fn direction(&self, polar: f64, azimuth: f64) -> Vec3 {
        let (e1, e2) = self.frame;
        self.axis * cos(polar) + (e1 * cos(azimuth) + e2 * sin(azimuth)) * sin(polar)
    }

    /// Polar angle and azimuth of a point other than the center.
    pub fn coordinates(&self, q: Vec3) -> (f64, f64) {
        let w = q - self.center;
        let (e1, e2) = self.frame;
        let (x, y) = (w.dot(e1), w.dot(e2));
        (atan2(sqrt(x * x + y * y), w.dot(self.axis)), atan2(y, x))
    }

    /// Central projection from the center onto the inscribed sphere.
    pub fn project(&self, q: Vec3) -> Result<Vec3> {
        let w = q - self.center;
        let n = w.norm();
        if n == 0.0 {
            return Err(invalid("the center has no radial projection"));
        }
        Ok(self.center + w * (self.inradius / n))
    }

    fn offset(&self) -> f64 {
        self.ball_radius - self.inradius
    }

    /// Distance from the center to the facet's sphere at polar angle `polar`.
    pub fn ray_length(&self, polar: f64) -> f64 {
        let a = self.offset();
        let s = sin(polar);
        -a * cos(polar) + sqrt(self.ball_radius * self.ball_radius - a * a * s * s)
    }

    /// Cosine of the angle between the ray and the sphere normal at the hit point.
    pub fn cos_incidence(&self, polar: f64) -> f64 {
        let a = self.offset();
        let s = sin(polar);
        sqrt(self.ball_radius * self.ball_radius - a * a * s * s) / self.ball_radius
    }

    /// Area density of the facet's sphere per unit area of the inscribed sphere,
    /// `ρ²/(r² cos β)`. It depends on the polar angle only.
    pub fn density(&self, polar: f64) -> f64 {
        let rho = self.ray_length(polar);
        rho * rho / (self.inradius * self.inradius * self.cos_incidence(polar))
    }
}

/// Charts for every facet that touches the inscribed ball.
pub fn charts(k: &BallPolytope3) -> Result<Vec<RadialChart>> {
    let ball = inscribed_ball(k)?;
    ball.touching.iter().map(|&i| RadialChart::new(k, &ball, i)).collect()
}

/// Exit distance of the ray `o + sω` from the ball `B(c, R)`, `o` inside.
fn exit_distance(o: Vec3, w: Vec3, c: Vec3, r: f64) -> f64 {
    let d = o - c;
    let b = d.dot(w);
    -b + sqrt((b * b - d.norm_sq() + r * r).max(0.0))
}

/// Margin by which the ray in direction `w` leaves the body through the chart's facet.
fn facet_margin(k: &BallPolytope3, chart: &RadialChart, w: Vec3) -> f64 {
    let r = k.radius();
    let own = exit_distance(chart.center, w, chart.ball_center, r);
    let mut other = f64::INFINITY;
    for &j in k.retained() {
        if j != chart.facet {
            other = other.min(exit_distance(chart.center, w, k.centers()[j], r));
        }
    }
    other - own
}

/// Polar angle where the meridian at `azimuth` leaves the projected facet.
pub fn boundary_polar_angle(k: &BallPolytope3, chart: &RadialChart, azimuth: f64) -> f64 {
    let g = |polar: f64| facet_margin(k, chart, chart.direction(polar, azimuth));
    if g(PI) >= 0.0 {
        return PI;
    }
    bisect(g, 0.0, PI, 1e-15).unwrap_or(PI)
}

/// Area of the radial projection of a touching facet onto the inscribed sphere.
pub fn projected_facet_area(k: &BallPolytope3, chart: &RadialChart) -> Result<f64> {
    let mut cuts: Vec<f64> = k
        .vertices()
        .iter()
        .filter(|v| v.incident.contains(&chart.facet))
        .map(|v| chart.coordinates(v.position).1)
        .collect();
    cuts.push(-PI);
    cuts.push(PI);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
    let r = chart.inradius;
    let res = gauss_kronrod_pieces(
        |phi| 1.0 - cos(boundary_polar_angle(k, chart, phi)),
        &cuts,
        0.0,
        AREA_TOL,
    )?;
    Ok(r * r * res.value)
}

/// Partition of the inscribed sphere by projected facets.
#[derive(Clone, Debug, PartialEq)]
pub struct Claim3Report {
    pub projected: Vec<f64>,
    pub sum: f64,
    pub sphere_area: f64,
    pub relative_deviation: f64,
    pub passed: bool,
}

fn require_touching(k: &BallPolytope3, ball: &InscribedBall) -> Result<()> {
    if ball.touching.len() != k.retained().len() {
        return Err(Error::Precondition("some facets miss the inscribed ball; reduce first".into()));
    }
    Ok(())
}

/// Checks that the projected facets tile the inscribed sphere.
pub fn claim3_check(k: &BallPolytope3) -> Result<Claim3Report> {
    let ball = inscribed_ball(k)?;
    require_touching(k, &ball)?;
    let mut projected = Vec::with_capacity(ball.touching.len());
    for &i in &ball.touching {
        let chart = RadialChart::new(k, &ball, i)?;
        projected.push(projected_facet_area(k, &chart)?);
    }
    let sum: f64 = projected.iter().sum();
    let sphere_area = 4.0 * PI * ball.radius * ball.radius;
    let relative_deviation = (sum - sphere_area).abs() / sphere_area;
    Ok(Claim3Report { projected, sum, sphere_area, relative_deviation, passed: relative_deviation < 1e-5 })
}

/// `𝓕 = (|∂L(r)|/2)/(2πr²) = 1/(λr)`.
pub fn ratio_f(lambda: f64, r: f64) -> Result<f64> {
    if !(lambda > 0.0 && r > 0.0 && r * lambda <= 1.0 + 1e-12) {
        return Err(invalid(format!("need 0 < rλ ≤ 1, got r = {r}, λ = {lambda}")));
    }
    let lens_area = 4.0 * PI * r / lambda;
    Ok(0.5 * lens_area / (TAU * r * r))
}

/// One facet in the ratio bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FacetRatio {
    pub ball: usize,
    pub area: f64,
    pub projected: f64,
    pub ratio: f64,
    /// The facet is the full cap cut off by the plane through the center.
    pub is_extension: bool,
}

/// Per-facet ratios against `𝓕` and the resulting surface-area bound.
#[derive(Clone, Debug, PartialEq)]
pub struct KeyClaimReport {
    pub big_f: f64,
    pub facets: Vec<FacetRatio>,
    /// `Σ|F_i|`.
    pub surface_area: f64,
    /// `𝓕·Σ|F̃_i|`.
    pub bound: f64,
    /// `|∂L(r)|`, the lens of equal inradius.
    pub lens_area: f64,
    pub passed: bool,
}

fn is_natural_extension(k: &BallPolytope3, chart: &RadialChart) -> bool {
    let tol = 1e-8 * k.radius();
    let in_plane = |x: Vec3| (x - chart.center).dot(chart.axis).abs() <= tol;
    let mut saw_edge = false;
    for e in k.edges() {
        if e.pair.0 != chart.facet && e.pair.1 != chart.facet {
            continue;
        }
        saw_edge = true;
        let probes = match e.ends {
            ArcEnds::FullCircle => [0.0, TAU / 3.0, 2.0 * TAU / 3.0],
            ArcEnds::Vertices { .. } => [0.0, 0.5 * e.arc_angle, e.arc_angle],
        };
        if !probes.iter().all(|&a| in_plane(e.point_at(e.start_angle + a))) {
            return false;
        }
    }
    saw_edge
}

/// Checks `|F_i|/|F̃_i| ≤ 𝓕` for every facet and the chain `Σ|F_i| ≤ 𝓕Σ|F̃_i| = |∂L(r)|`.
pub fn key_claim_check(k: &BallPolytope3) -> Result<KeyClaimReport> {
    let ball = inscribed_ball(k)?;
    require_touching(k, &ball)?;
    let big_f = ratio_f(k.lambda(), ball.radius)?;
    let mut facets = Vec::with_capacity(ball.touching.len());
    for &i in &ball.touching {
        let chart = RadialChart::new(k, &ball, i)?;
        let projected = projected_facet_area(k, &chart)?;
        let area = k.facet_of_ball(i).map(|f| f.area).unwrap_or(0.0);
        facets.push(FacetRatio {
            ball: i,
            area,
            projected,
            ratio: area / projected,
            is_extension: is_natural_extension(k, &chart),
        });
    }
    let surface_area: f64 = facets.iter().map(|f| f.area).sum();
    let bound = big_f * facets.iter().map(|f| f.projected).sum::<f64>();
    let lens_area = 4.0 * PI * ball.radius / k.lambda();
    let ratios_ok = facets.iter().all(|f| f.ratio <= big_f + 1e-5);
    let chain_ok = surface_area <= bound * (1.0 + 1e-9) && (bound - lens_area).abs() <= 1e-5 * lens_area;
    Ok(KeyClaimReport { big_f, facets, surface_area, bound, lens_area, passed: ratios_ok && chain_ok })
}

/// Azimuthal wedge `[from, to]` about the touch axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Wedge {
    pub from: f64,
    pub to: f64,
}

impl Wedge {
    pub fn new(from: f64, to: f64) -> Result<Self> {
        let w = Self { from, to };
        let d = w.dihedral();
        if !(d > 0.0 && d <= TAU) {
            return Err(invalid(format!("wedge dihedral {d} outside (0, 2π]")));
        }
        Ok(w)
    }

    pub fn dihedral(&self) -> f64 {
        self.to - self.from
    }
}

/// Area of the conical sector of the facet's sphere over polar angles `[0, xπ/2]`.
pub fn sector_area(chart: &RadialChart, x: f64, wedge: Wedge) -> Result<f64> {
    let top = x * FRAC_PI_2;
    let res = gauss_kronrod(
        |t| {
            let rho = chart.ray_length(t);
            rho * rho * sin(t) / chart.cos_incidence(t)
        },
        0.0,
        top,
        0.0,
        1e-13,
    )?;
    Ok(wedge.dihedral() * res.value)
}

/// Area of the matching sector of the inscribed sphere.
pub fn projected_sector_area(chart: &RadialChart, x: f64, wedge: Wedge) -> f64 {
    let r = chart.inradius;
    wedge.dihedral() * r * r * (1.0 - cos(x * FRAC_PI_2))
}

/// `|C_x|/|C̃_x|`, nondecreasing in `x` and equal to `𝓕` at `x = 1`.
pub fn sector_ratio(chart: &RadialChart, x: f64, wedge: Wedge) -> Result<f64> {
    if !(x > 0.0 && x <= 1.0) {
        return Err(invalid(format!("sector fraction {x} outside (0, 1]")));
    }
    Ok(sector_area(chart, x, wedge)? / projected_sector_area(chart, x, wedge))
}

/// `∫_0^{xπ/2} (g(θ) − 𝓕) r² sin θ dθ`, per unit azimuth.
pub fn sector_excess(chart: &RadialChart, x: f64, lambda: f64) -> Result<f64> {
    let big_f = ratio_f(lambda, chart.inradius)?;
    let r2 = chart.inradius * chart.inradius;
    let res = gauss_kronrod(
        |t| (chart.density(t) - big_f) * r2 * sin(t),
        0.0,
        x * FRAC_PI_2,
        1e-16,
        1e-13,
    )?;
    Ok(res.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lens() -> BallPolytope3 {
        BallPolytope3::build(1.0, &[Vec3::new(0.0, 0.0, -0.5), Vec3::new(0.0, 0.0, 0.5)]).unwrap()
    }

    #[test]
    fn projection_fixes_the_sphere() {
        let k = lens();
        let c = charts(&k).unwrap();
        let ch = c[0];
        assert!((ch.project(ch.touch_point).unwrap() - ch.touch_point).norm() < 1e-16);
        let far = ch.center + (ch.touch_point - ch.center) * 2.0;
        assert!((ch.project(far).unwrap() - ch.touch_point).norm() < 1e-16);
        assert!(ch.project(ch.center).is_err());
        assert!((ch.density(0.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn lens_facets_project_to_hemispheres() {
        let k = lens();
        let rep = claim3_check(&k).unwrap();
        for p in &rep.projected {
            assert!((p - PI / 2.0).abs() < 1e-10);
        }
        assert!(rep.passed);
        let kc = key_claim_check(&k).unwrap();
        assert!((kc.big_f - 2.0).abs() < 1e-15);
        for f in &kc.facets {
            assert!(f.is_extension);
            assert!((f.ratio - 2.0).abs() < 1e-9);
        }
        assert!(kc.passed);
    }

    #[test]
    fn ball_projects_to_whole_sphere() {
        let k = BallPolytope3::build(1.0, &[Vec3::ZERO]).unwrap();
        let rep = claim3_check(&k).unwrap();
        assert!((rep.sum - 4.0 * PI).abs() < 1e-10);
    }

    #[test]
    fn ratio_f_values() {
        assert_eq!(ratio_f(1.0, 0.5).unwrap(), 2.0);
        assert!((ratio_f(1.0, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((ratio_f(2.0, 0.25).unwrap() - 2.0).abs() < 1e-15);
        assert!(ratio_f(1.0, 1.5).is_err());
    }

    #[test]
    fn sectors() {
        let k = lens();
        let ch = charts(&k).unwrap()[0];
        let full = Wedge::new(0.0, TAU).unwrap();
        assert!((sector_ratio(&ch, 1.0, full).unwrap() - 2.0).abs() < 1e-10);
        assert!(sector_ratio(&ch, 0.5, full).unwrap() < 2.0);
        assert!(sector_ratio(&ch, 0.0, full).is_err());
        assert!(sector_excess(&ch, 1.0, 1.0).unwrap().abs() < 1e-12);
        assert!(sector_excess(&ch, 0.5, 1.0).unwrap() < 0.0);
    }
}
