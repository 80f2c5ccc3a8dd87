//! Inner parallel bodies and the erosion profile `f(t) = |∂K_t|`.
//!
//! Erosion by a ball of radius `t` commutes with intersection of balls, so
//! `K_t` is the intersection of the same balls with radius `1/λ − t`.

use alloc::format;
use alloc::vec::Vec;

use libm::tan;

use crate::ball_polytope::BallPolytope3;
use crate::error::{invalid, Error, Result};
use crate::inradius::inscribed_ball;
use crate::quadrature::{adaptive_simpson, bisect_predicate};
use crate::reference_bodies::{lens3_from_surface_area, Lens3};

/// Sampled erosion profile.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ErosionProfile {
    /// Increasing sample depths in `[0, r(K))`.
    pub ts: Vec<f64>,
    /// `f(t)` at each depth.
    pub areas: Vec<f64>,
    /// Depths where the facet, edge or vertex counts change.
    pub events: Vec<f64>,
    pub inradius: f64,
}

/// The body eroded by depth `t ∈ [0, r(K))`.
pub fn inner_parallel(k: &BallPolytope3, t: f64) -> Result<BallPolytope3> {
    if !(t >= 0.0) {
        return Err(invalid(format!("erosion depth {t} is negative")));
    }
    let r = k.radius() - t;
    if !(r > 0.0) {
        return Err(Error::EmptyBody);
    }
    BallPolytope3::build(1.0 / r, k.centers())
}

/// `f(t)`, zero from the inradius on.
///
/// Depths where the rebuilt body is degenerate (an event hits the sample, or
/// the body has nearly collapsed) are evaluated as the mean of the nearest
/// buildable depths on either side, searched outward from `10⁻⁷·r`.
pub fn eroded_area(k: &BallPolytope3, t: f64, inradius: f64) -> Result<f64> {
    if t >= inradius {
        return Ok(0.0);
    }
    let area_at = |s: f64| -> Result<Option<f64>> {
        if s >= inradius {
            return Ok(Some(0.0));
        }
        match inner_parallel(k, s.max(0.0)) {
            Ok(body) => Ok(Some(body.surface_area())),
            Err(Error::DegenerateBody(_)) | Err(Error::EmptyBody) => Ok(None),
            Err(e) => Err(e),
        }
    };
    if let Some(a) = area_at(t)? {
        return Ok(a);
    }
    let mut d = 1e-7 * inradius;
    let (mut lo, mut hi) = (None, None);
    for _ in 0..40 {
        lo = lo.or(area_at(t - d)?);
        hi = hi.or(area_at(t + d)?);
        if let (Some(a), Some(b)) = (lo, hi) {
            return Ok(0.5 * (a + b));
        }
        d *= 2.0;
    }
    Err(Error::DegenerateBody(format!("no buildable depth near t = {t}")))
}

fn signature_at(k: &BallPolytope3, t: f64) -> Option<(usize, usize, usize)> {
    inner_parallel(k, t).ok().map(|b| b.signature())
}

/// Depths in `(0, r(K))` where the combinatorial type of `K_t` changes.
pub fn find_events(k: &BallPolytope3, inradius: f64) -> Vec<f64> {
    const GRID: usize = 48;
    let tol = 1e-12 * k.radius();
    let mut events = Vec::new();
    let mut prev_t = 0.0;
    let mut prev = signature_at(k, 0.0);
    for i in 1..=GRID {
        let t = if i == GRID { inradius * (1.0 - 1e-6) } else { inradius * i as f64 / GRID as f64 };
        let sig = signature_at(k, t);
        if sig != prev {
            let at = bisect_predicate(|s| signature_at(k, s) == prev, prev_t, t, tol);
            events.push(at);
        }
        prev = sig;
        prev_t = t;
    }
    events
}

/// Erosion profile on `n_samples` equally spaced depths, refined near events
/// until adjacent samples differ by less than 1% of `f(0)`.
pub fn profile(k: &BallPolytope3, n_samples: usize) -> Result<ErosionProfile> {
    if n_samples < 2 {
        return Err(invalid("a profile needs at least two samples"));
    }
    let r = inscribed_ball(k)?.radius;
    let events = find_events(k, r);
    let mut ts: Vec<f64> = (0..n_samples).map(|i| r * i as f64 / n_samples as f64).collect();
    ts.extend(events.iter().copied());
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    let mut areas = ts.iter().map(|&t| eroded_area(k, t, r)).collect::<Result<Vec<_>>>()?;
    let scale = areas[0];
    let min_gap = 1e-9 * r;
    let mut i = 0;
    while i + 1 < ts.len() {
        let near_event = events.iter().any(|&e| e >= ts[i] && e <= ts[i + 1]);
        if near_event && (areas[i] - areas[i + 1]).abs() > 0.01 * scale && ts[i + 1] - ts[i] > min_gap {
            let mid = 0.5 * (ts[i] + ts[i + 1]);
            ts.insert(i + 1, mid);
            areas.insert(i + 1, eroded_area(k, mid, r)?);
        } else {
            i += 1;
        }
    }
    Ok(ErosionProfile { ts, areas, events, inradius: r })
}

/// `∫₀^{r(K)} f(t) dt` by adaptive Simpson with the events as breakpoints.
pub fn volume_via_profile(k: &BallPolytope3) -> Result<f64> {
    let r = inscribed_ball(k)?.radius;
    let mut cuts = Vec::with_capacity(4);
    cuts.push(0.0);
    cuts.extend(find_events(k, r));
    cuts.push(r);
    let tol = 1e-12 * k.surface_area() * r;
    let mut total = 0.0;
    let mut failure = None;
    for w in cuts.windows(2) {
        total += adaptive_simpson(
            |t| match eroded_area(k, t, r) {
                Ok(a) => a,
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            },
            w[0],
            w[1],
            tol,
        )?;
    }
    match failure {
        Some(e) => Err(e),
        None => Ok(total),
    }
}

/// `Σ l_ij tan(γ_ij/2)` over edges, each edge once.
pub fn edge_term(k: &BallPolytope3) -> f64 {
    k.edges().iter().map(|e| e.length * tan(0.5 * e.dihedral)).sum()
}

/// `f′(0) = −2λ|∂K| − 2Σ l_ij tan(γ_ij/2)`.
pub fn initial_derivative(k: &BallPolytope3) -> f64 {
    let l = k.lambda();
    let area = l * l * k.surface_area();
    let edges = l * edge_term(k);
    (-2.0 * area - 2.0 * edges) / l
}

/// Pointwise comparison of the erosion profiles of a body and a lens.
#[derive(Clone, Debug, PartialEq)]
pub struct ProfileComparison {
    pub samples: usize,
    /// Smallest `f_K(t) − f_L(t)` over the samples and where it occurs.
    pub min_gap: f64,
    pub min_gap_at: f64,
    /// Depths with `f_K(t) < f_L(t) − 10⁻⁹`.
    pub violations: Vec<f64>,
    pub inradius: f64,
    pub lens_inradius: f64,
}

impl ProfileComparison {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.inradius >= self.lens_inradius - 1e-9
    }
}

/// Samples `f_K − f_L` for the lens `lens` of equal surface area.
pub fn compare_profiles(k: &BallPolytope3, lens: &Lens3, n_samples: usize) -> Result<ProfileComparison> {
    let area = k.surface_area();
    if (area - lens.surface_area()).abs() > 1e-9 * area {
        return Err(Error::Precondition(format!(
            "surface areas differ: body {area}, lens {}",
            lens.surface_area()
        )));
    }
    let prof = profile(k, n_samples)?;
    let mut min_gap = f64::INFINITY;
    let mut min_gap_at = 0.0;
    let mut violations = Vec::new();
    for (&t, &f) in prof.ts.iter().zip(&prof.areas) {
        let gap = f - lens.eroded_area(t);
        if gap < min_gap {
            min_gap = gap;
            min_gap_at = t;
        }
        if gap < -1e-9 {
            violations.push(t);
        }
    }
    Ok(ProfileComparison {
        samples: prof.ts.len(),
        min_gap,
        min_gap_at,
        violations,
        inradius: prof.inradius,
        lens_inradius: lens.inradius(),
    })
}

/// Remainders of the second-order expansion of `f` at three halving depths.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpansionReport {
    /// Depths `t, t/2, t/4` at `λ = 1`.
    pub ts: [f64; 3],
    /// `f(t) − [(1−t)²Σβ_i − 2tΣ l_ij tan(γ_ij/2)]`.
    pub remainders: [f64; 3],
    /// `f(t) − f(0) − f′(0)t`.
    pub taylor_remainders: [f64; 3],
    /// Consecutive remainder ratios; 4 for a quadratic remainder, `NaN` when it vanishes.
    pub ratios: [f64; 2],
    pub taylor_ratios: [f64; 2],
    pub order_two: bool,
}

fn halving_ratios(r: [f64; 3]) -> [f64; 2] {
    let ratio = |a: f64, b: f64| if b.abs() < 1e-14 { f64::NAN } else { a / b };
    [ratio(r[0], r[1]), ratio(r[1], r[2])]
}

fn quadratic(ratios: [f64; 2], rem: [f64; 3]) -> bool {
    rem.iter().all(|x| x.abs() < 1e-13) || ratios.iter().all(|q| (q - 4.0).abs() <= 0.8)
}

/// Checks the expansion `f(t) = (1−t)²Σβ_i − 2tΣ l_ij tan(γ_ij/2) + O(t²)` at `λ = 1`.
///
/// `t` is measured at `λ = 1`; the body is rescaled internally.
pub fn expansion_check(k: &BallPolytope3, t: f64) -> Result<ExpansionReport> {
    let unit = k.scaled(k.lambda())?;
    let r = inscribed_ball(&unit)?.radius;
    if !(t > 0.0 && t < r) {
        return Err(invalid(format!("depth {t} outside (0, {r})")));
    }
    let sig = unit.signature();
    for probe in [t, 0.5 * t] {
        if signature_at(&unit, probe) != Some(sig) {
            return Err(Error::Precondition(format!("combinatorial event inside [0, {t}]")));
        }
    }
    let area = unit.surface_area();
    let edges = edge_term(&unit);
    let slope = initial_derivative(&unit);
    let ts = [t, 0.5 * t, 0.25 * t];
    let mut remainders = [0.0; 3];
    let mut taylor_remainders = [0.0; 3];
    for (i, &s) in ts.iter().enumerate() {
        let f = inner_parallel(&unit, s)?.surface_area();
        remainders[i] = f - ((1.0 - s) * (1.0 - s) * area - 2.0 * s * edges);
        taylor_remainders[i] = f - (area + slope * s);
    }
    let ratios = halving_ratios(remainders);
    let taylor_ratios = halving_ratios(taylor_remainders);
    Ok(ExpansionReport {
        ts,
        remainders,
        taylor_remainders,
        ratios,
        taylor_ratios,
        order_two: quadratic(ratios, remainders) && quadratic(taylor_ratios, taylor_remainders),
    })
}

/// Volume against the lens of equal surface area.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RipReport {
    pub surface_area: f64,
    pub volume: f64,
    pub lens_volume: f64,
    /// `|K| − |L|`.
    pub margin: f64,
    pub has_vertices: bool,
    pub passed: bool,
}

pub fn rip_check(k: &BallPolytope3) -> Result<RipReport> {
    let area = k.surface_area();
    let cap = 4.0 * core::f64::consts::PI / (k.lambda() * k.lambda());
    let lens = lens3_from_surface_area(k.lambda(), area.min(cap))?;
    let volume = k.volume();
    let margin = volume - lens.volume();
    Ok(RipReport {
        surface_area: area,
        volume,
        lens_volume: lens.volume(),
        margin,
        has_vertices: !k.vertices().is_empty(),
        passed: margin >= -1e-9 * volume.max(1.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vector::Vec3;
    use core::f64::consts::PI;

    fn lens() -> BallPolytope3 {
        BallPolytope3::build(1.0, &[Vec3::new(0.0, 0.0, -0.5), Vec3::new(0.0, 0.0, 0.5)]).unwrap()
    }

    #[test]
    fn ball_erodes_concentrically() {
        let b = BallPolytope3::build(1.0, &[Vec3::ZERO]).unwrap();
        let e = inner_parallel(&b, 0.3).unwrap();
        assert!((e.radius() - 0.7).abs() < 1e-15);
        assert!((initial_derivative(&b) + 8.0 * PI).abs() < 1e-13);
        assert!((volume_via_profile(&b).unwrap() - 4.0 * PI / 3.0).abs() < 1e-11);
        assert_eq!(inner_parallel(&b, 1.0), Err(Error::EmptyBody));
    }

    #[test]
    fn lens_profile_matches_closed_form() {
        let k = lens();
        let closed = Lens3::new(1.0, PI / 3.0).unwrap();
        let p = profile(&k, 20).unwrap();
        assert!(p.events.is_empty());
        for (&t, &f) in p.ts.iter().zip(&p.areas) {
            assert!((f - closed.eroded_area(t)).abs() < 1e-10);
        }
        let e = inner_parallel(&k, 0.25).unwrap();
        let half = e.edges()[0].circle_radius;
        assert!((half - libm::sqrt(0.75 * 0.75 - 0.25)).abs() < 1e-15);
        assert!((initial_derivative(&k) + 6.0 * PI).abs() < 1e-12);
        assert!((volume_via_profile(&k).unwrap() - 5.0 * PI / 12.0).abs() < 1e-10);
    }

    #[test]
    fn lens_expansion_remainder() {
        let rep = expansion_check(&lens(), 1e-2).unwrap();
        for (i, &t) in rep.ts.iter().enumerate() {
            assert!((rep.remainders[i] - 2.0 * PI * t * t).abs() < 1e-10);
        }
        assert!(rep.order_two);
        let ball = BallPolytope3::build(1.0, &[Vec3::ZERO]).unwrap();
        let rep = expansion_check(&ball, 1e-2).unwrap();
        assert!(rep.remainders.iter().all(|r| r.abs() < 1e-13));
        for (i, &t) in rep.ts.iter().enumerate() {
            assert!((rep.taylor_remainders[i] - 4.0 * PI * t * t).abs() < 1e-12);
        }
        assert!(rep.order_two);
    }

    #[test]
    fn lens_against_itself() {
        let k = lens();
        let l = Lens3::new(1.0, PI / 3.0).unwrap();
        let c = compare_profiles(&k, &l, 16).unwrap();
        assert!(c.passed());
        assert!(c.min_gap.abs() < 1e-10);
        let wrong = Lens3::new(1.0, PI / 4.0).unwrap();
        assert!(matches!(compare_profiles(&k, &wrong, 16), Err(Error::Precondition(_))));
    }

    #[test]
    fn events_of_a_lens_with_a_far_ball() {
        let c = [Vec3::new(0.0, 0.0, -0.5), Vec3::new(0.0, 0.0, 0.5), Vec3::new(0.45, 0.0, 0.0)];
        let k = BallPolytope3::build(1.0, &c).unwrap();
        let ev = find_events(&k, 0.5);
        assert_eq!(ev.len(), 1);
        let t = ev[0];
        let e = inner_parallel(&k, t + 1e-9).unwrap();
        assert_eq!(e.signature(), (2, 1, 0));
        let v = volume_via_profile(&k).unwrap();
        assert!((v - k.volume()).abs() < 1e-9 * k.volume());
    }
}
