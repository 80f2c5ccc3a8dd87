//! Monte Carlo and finite-difference oracles for volumes and areas.

use lch_core::erosion::inner_parallel;
use lch_core::inscribed_ball;
use lch_core::{ArcPolygon2, BallPolytope3, Error, Result, Vec2, Vec3};
use rand::Rng;
use rayon::prelude::*;

use crate::gen::rng_for;

const BLOCK: u64 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub samples: u64,
}

impl McEstimate {
    /// Distance from `exact` in standard errors.
    pub fn sigmas_from(&self, exact: f64) -> f64 {
        (self.estimate - exact).abs() / self.std_error
    }
}

/// Sums `f` over fixed blocks of `n` samples, block `b` drawn from stream `b`.
fn blocked<F>(n: u64, seed: u64, f: F) -> (f64, f64)
where
    F: Fn(&mut rand_chacha::ChaCha8Rng, u64) -> (f64, f64) + Sync,
{
    let blocks = n.div_ceil(BLOCK);
    let parts: Vec<(f64, f64)> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let len = BLOCK.min(n - b * BLOCK);
            f(&mut rng_for(seed, b), len)
        })
        .collect();
    parts.iter().fold((0.0, 0.0), |acc, p| (acc.0 + p.0, acc.1 + p.1))
}

/// Rejection sampling in the box around the centers inflated by `1/λ`.
pub fn mc_volume(k: &BallPolytope3, n_samples: u64, seed: u64) -> Result<McEstimate> {
    if n_samples < 1000 {
        return Err(Error::InvalidParameter(format!("{n_samples} samples is below 1000")));
    }
    let r = k.radius();
    let centers = k.retained_centers();
    let mut lo = Vec3::new(f64::INFINITY, f64::INFINITY, f64::INFINITY);
    let mut hi = -lo;
    for c in &centers {
        lo = Vec3::new(lo.x.min(c.x), lo.y.min(c.y), lo.z.min(c.z));
        hi = Vec3::new(hi.x.max(c.x), hi.y.max(c.y), hi.z.max(c.z));
    }
    let lo = lo - Vec3::new(r, r, r);
    let span = hi + Vec3::new(r, r, r) - lo;
    let box_volume = span.x * span.y * span.z;
    let r2 = r * r;
    let (hits, _) = blocked(n_samples, seed, |rng, len| {
        let mut count = 0u64;
        for _ in 0..len {
            let x = lo + Vec3::new(span.x * rng.random::<f64>(), span.y * rng.random::<f64>(), span.z * rng.random::<f64>());
            if centers.iter().all(|c| (x - *c).norm_sq() <= r2) {
                count += 1;
            }
        }
        (count as f64, 0.0)
    });
    let p = hits / n_samples as f64;
    Ok(McEstimate {
        estimate: p * box_volume,
        std_error: box_volume * (p * (1.0 - p) / n_samples as f64).sqrt(),
        samples: n_samples,
    })
}

fn chart_box(poly: &ArcPolygon2) -> (Vec2, Vec2) {
    let mut lo = Vec2::new(f64::INFINITY, f64::INFINITY);
    let mut hi = -lo;
    let mut take = |p: Vec2| {
        lo = Vec2::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Vec2::new(hi.x.max(p.x), hi.y.max(p.y));
    };
    for a in poly.arcs() {
        take(a.point_at(0.0));
        take(a.point_at(1.0));
        let (from, to) = if a.sweep >= 0.0 { (a.start, a.start + a.sweep) } else { (a.start + a.sweep, a.start) };
        let mut q = (from / std::f64::consts::FRAC_PI_2).ceil();
        while q * std::f64::consts::FRAC_PI_2 <= to {
            take(a.center + Vec2::from_angle(q * std::f64::consts::FRAC_PI_2) * a.radius);
            q += 1.0;
        }
    }
    (lo, hi)
}

/// Area in the model metric by uniform chart samples weighted with the squared conformal factor.
pub fn mc_area2(poly: &ArcPolygon2, n_samples: u64, seed: u64) -> Result<McEstimate> {
    if n_samples < 1000 {
        return Err(Error::InvalidParameter(format!("{n_samples} samples is below 1000")));
    }
    let chart = poly.space().chart()?;
    let (lo, hi) = chart_box(poly);
    let span = hi - lo;
    let box_area = span.x * span.y;
    let (sum, sum_sq) = blocked(n_samples, seed, |rng, len| {
        let (mut s, mut s2) = (0.0, 0.0);
        for _ in 0..len {
            let x = lo + Vec2::new(span.x * rng.random::<f64>(), span.y * rng.random::<f64>());
            if chart.contains(x) && poly.contains(x) {
                let w = chart.conformal_factor(x).powi(2);
                s += w;
                s2 += w * w;
            }
        }
        (s, s2)
    });
    let n = n_samples as f64;
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0);
    Ok(McEstimate { estimate: box_area * mean, std_error: box_area * (var / n).sqrt(), samples: n_samples })
}

/// Surface area from volume differences of inner parallel bodies.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SurfaceOracle {
    pub t: f64,
    /// `(|K| − |K_t|)/t`.
    pub plain: f64,
    /// The same at `t/2`.
    pub half: f64,
    /// `2·half − plain`, first-order error removed.
    pub richardson: f64,
}

pub fn surface_oracle(k: &BallPolytope3, t: f64) -> Result<SurfaceOracle> {
    let r = inscribed_ball(k)?.radius;
    if !(t > 0.0 && t < r / 10.0) {
        return Err(Error::Precondition(format!("t = {t} must lie in (0, r/10) with r = {r}")));
    }
    let v = k.volume();
    let slope = |s: f64| -> Result<f64> { Ok((v - inner_parallel(k, s)?.volume()) / s) };
    let plain = slope(t)?;
    let half = slope(0.5 * t)?;
    Ok(SurfaceOracle { t, plain, half, richardson: 2.0 * half - plain })
}
