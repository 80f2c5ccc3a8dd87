//! Lenses and spindles.
//!
//! The lens is the intersection of two balls of radius `1/λ`; the spindle is
//! the intersection of all such balls containing two given points. Both are
//! solids of revolution, so their measures in R^n reduce to one-dimensional
//! integrals. With unit radius:
//!
//! * spindle, `cos θ₀ = h1`: `A/σ = ∫_{−θ₀}^{θ₀} (cos θ − h1)^{n−2} dθ`,
//!   `(n−1)V/σ = ∫_{−θ₀}^{θ₀} (cos θ − h1)^{n−1} cos θ dθ`;
//! * lens, `sin φ₀ = h2`: `A/σ = 2∫_0^{φ₀} sin^{n−2} φ dφ`,
//!   `(n−1)V/σ = 2∫_0^{φ₀} sin^n φ dφ`;
//!
//! where `σ = σ_{n−2}` is the area of the unit (n−2)-sphere. The integrals
//! are evaluated with the peak value factored out and kept as logarithms, so
//! dimensions in the hundreds neither underflow nor overflow.

use alloc::format;
use core::f64::consts::{PI, TAU};

use libm::{acos, asin, cos, exp, lgamma, log, sin, sqrt};

use crate::error::{invalid, Error, Result};
use crate::model_space::clamp_domain;
use crate::quadrature::{bisect, gauss_kronrod_pieces};

const REL_TOL: f64 = 1e-12;

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("lambda must be positive and finite, got {lambda}")))
    }
}

/// Three-dimensional lens with half-angle `alpha ∈ (0, π/2]`.
///
/// `alpha` is the angle at a ball center between the symmetry axis and the rim
/// circle; `alpha = π/2` is the ball itself.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Lens3 {
    pub lambda: f64,
    pub alpha: f64,
}

impl Lens3 {
    pub fn new(lambda: f64, alpha: f64) -> Result<Self> {
        check_lambda(lambda)?;
        if !(alpha > 0.0 && alpha <= PI / 2.0) {
            return Err(invalid(format!("lens half-angle {alpha} outside (0, π/2]")));
        }
        Ok(Self { lambda, alpha })
    }

    /// Cap height of each facet, which is also the inradius.
    pub fn inradius(&self) -> f64 {
        (1.0 - cos(self.alpha)) / self.lambda
    }

    pub fn surface_area(&self) -> f64 {
        4.0 * PI * (1.0 - cos(self.alpha)) / (self.lambda * self.lambda)
    }

    /// Volume from the surface area, `A²λ(12π − Aλ²)/(96π²)`.
    pub fn volume(&self) -> f64 {
        let a = self.surface_area();
        let l = self.lambda;
        a * a * l * (12.0 * PI - a * l * l) / (96.0 * PI * PI)
    }

    /// Volume as two spherical caps of height `h`.
    pub fn volume_from_caps(&self) -> f64 {
        let h = 1.0 - cos(self.alpha);
        2.0 * PI / 3.0 * h * h * (3.0 - h) / (self.lambda * self.lambda * self.lambda)
    }

    /// Distance of each ball center from the lens center.
    pub fn center_offset(&self) -> f64 {
        cos(self.alpha) / self.lambda
    }

    /// Surface area of the inner parallel body at depth `t ∈ [0, inradius]`.
    pub fn eroded_area(&self, t: f64) -> f64 {
        let r = 1.0 / self.lambda;
        let s = (r - t).max(0.0);
        (4.0 * PI * s * s - 4.0 * PI * s * r * cos(self.alpha)).max(0.0)
    }

    /// `f′(0)` of the erosion profile, `−8π/λ + 4π cos α/λ`.
    pub fn eroded_area_slope(&self) -> f64 {
        (-8.0 * PI + 4.0 * PI * cos(self.alpha)) / self.lambda
    }
}

/// Surface area, volume and inradius of the lens with half-angle `alpha`.
pub fn lens3_measures(lambda: f64, alpha: f64) -> Result<(f64, f64, f64)> {
    let l = Lens3::new(lambda, alpha)?;
    Ok((l.surface_area(), l.volume(), l.inradius()))
}

/// Lens with surface area `area`, `0 < area·λ² ≤ 4π`.
pub fn lens3_from_surface_area(lambda: f64, area: f64) -> Result<Lens3> {
    check_lambda(lambda)?;
    let x = area * lambda * lambda / (4.0 * PI);
    if !(x > 0.0 && x <= 1.0 + 1e-12) {
        return Err(invalid(format!("surface area {area} outside (0, 4π/λ²]")));
    }
    Lens3::new(lambda, acos(clamp_domain(1.0 - x, 0.0, 1.0)))
}

/// Lens with inradius `r`, `0 < rλ ≤ 1`.
pub fn lens3_from_inradius(lambda: f64, r: f64) -> Result<Lens3> {
    check_lambda(lambda)?;
    let x = r * lambda;
    if !(x > 0.0 && x <= 1.0 + 1e-12) {
        return Err(invalid(format!("inradius {r} outside (0, 1/λ]")));
    }
    Lens3::new(lambda, acos(clamp_domain(1.0 - x, 0.0, 1.0)))
}

/// Planar lens with arcs of central angle `theta ∈ (0, π]` each.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Lens2 {
    pub lambda: f64,
    pub theta: f64,
}

impl Lens2 {
    pub fn new(lambda: f64, theta: f64) -> Result<Self> {
        check_lambda(lambda)?;
        if !(theta > 0.0 && theta <= PI) {
            return Err(invalid(format!("lens arc angle {theta} outside (0, π]")));
        }
        Ok(Self { lambda, theta })
    }

    pub fn from_perimeter(lambda: f64, perimeter: f64) -> Result<Self> {
        check_lambda(lambda)?;
        let theta = perimeter * lambda / 2.0;
        if !(theta > 0.0 && theta <= PI * (1.0 + 1e-12)) {
            return Err(invalid(format!("perimeter {perimeter} outside (0, 2π/λ]")));
        }
        Self::new(lambda, theta.min(PI))
    }

    pub fn from_inradius(lambda: f64, r: f64) -> Result<Self> {
        check_lambda(lambda)?;
        let x = r * lambda;
        if !(x > 0.0 && x <= 1.0 + 1e-12) {
            return Err(invalid(format!("inradius {r} outside (0, 1/λ]")));
        }
        Self::new(lambda, 2.0 * acos(clamp_domain(1.0 - x, 0.0, 1.0)))
    }

    pub fn perimeter(&self) -> f64 {
        2.0 * self.theta / self.lambda
    }

    pub fn area(&self) -> f64 {
        (self.theta - sin(self.theta)) / (self.lambda * self.lambda)
    }

    pub fn inradius(&self) -> f64 {
        (1.0 - cos(0.5 * self.theta)) / self.lambda
    }

    /// Turning angle at each of the two vertices, `π − θ`.
    pub fn vertex_angle(&self) -> f64 {
        PI - self.theta
    }
}

/// Area of the planar lens of perimeter `perimeter`: `P/(2λ) − sin(Pλ/2)/λ²`.
pub fn lens2_measures(lambda: f64, perimeter: f64) -> Result<f64> {
    check_lambda(lambda)?;
    if !(perimeter > 0.0 && perimeter * lambda <= TAU * (1.0 + 1e-12)) {
        return Err(invalid(format!("perimeter {perimeter} outside (0, 2π/λ]")));
    }
    Ok(perimeter / (2.0 * lambda) - sin(perimeter * lambda / 2.0) / (lambda * lambda))
}

/// Natural logarithm of the area of the unit k-sphere in R^{k+1}.
pub fn ln_sphere_area(k: u32) -> f64 {
    let a = 0.5 * (k as f64 + 1.0);
    log(2.0) + a * log(PI) - lgamma(a)
}

/// Measures of an n-dimensional body of revolution, stored as logarithms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NdMeasures {
    pub n: u32,
    pub lambda: f64,
    /// `ln(A/σ_{n−2})` at `λ = 1`.
    pub ln_area_normalized: f64,
    /// `ln((n−1)V/σ_{n−2})` at `λ = 1`.
    pub ln_volume_normalized: f64,
}

impl NdMeasures {
    pub fn ln_surface_area(&self) -> f64 {
        self.ln_area_normalized + ln_sphere_area(self.n - 2) - (self.n as f64 - 1.0) * log(self.lambda)
    }

    pub fn ln_volume(&self) -> f64 {
        self.ln_volume_normalized + ln_sphere_area(self.n - 2)
            - log(self.n as f64 - 1.0)
            - self.n as f64 * log(self.lambda)
    }

    pub fn surface_area(&self) -> f64 {
        exp(self.ln_surface_area())
    }

    pub fn volume(&self) -> f64 {
        exp(self.ln_volume())
    }

    /// Surface area without the `σ_{n−2}` factor, at `λ = 1`.
    pub fn normalized_area(&self) -> f64 {
        exp(self.ln_area_normalized)
    }

    /// `(n−1)·volume/σ_{n−2}` at `λ = 1`.
    pub fn normalized_volume(&self) -> f64 {
        exp(self.ln_volume_normalized)
    }
}

fn check_dimension(n: u32) -> Result<()> {
    if n >= 2 {
        Ok(())
    } else {
        Err(invalid(format!("dimension {n} is below 2")))
    }
}

/// `ln ∫_a^b exp(k·ln g(x) − k·ln g_max)·w(x) dx + k·ln g_max` for a positive peaked `g`.
fn ln_peaked_integral<G, W>(g: G, w: W, g_max: f64, k: f64, a: f64, b: f64, peak: f64) -> Result<f64>
where
    G: Fn(f64) -> f64,
    W: Fn(f64) -> f64,
{
    let ln_max = log(g_max);
    let width = (b - a) / sqrt(k.max(1.0));
    let mut points = [a, b, b, b];
    let mut count = 2;
    // breakpoints around the peak let the adaptive rule find it at large k
    for p in [peak - width, peak + width] {
        if p > a && p < b {
            points[count] = p;
            count += 1;
        }
    }
    let pts = &mut points[..count];
    pts.sort_by(f64::total_cmp);
    let integrand = |x: f64| {
        let v = g(x);
        if v <= 0.0 {
            return 0.0;
        }
        exp(k * (log(v) - ln_max)) * w(x)
    };
    let res = gauss_kronrod_pieces(integrand, pts, 0.0, REL_TOL)?;
    if !(res.value > 0.0) {
        return Err(Error::Numeric(format!("revolution integral vanished on [{a}, {b}]")));
    }
    Ok(log(res.value) + k * ln_max)
}

/// Spindle in R^n with chord parameter `h1 ∈ [0, 1)`; `h1 = 0` is the ball.
pub fn spindle_measures(n: u32, lambda: f64, h1: f64) -> Result<NdMeasures> {
    check_dimension(n)?;
    check_lambda(lambda)?;
    if !(0.0..1.0).contains(&h1) {
        return Err(invalid(format!("spindle parameter h1 = {h1} outside [0, 1)")));
    }
    let theta0 = acos(h1);
    let g = |t: f64| cos(t) - h1;
    let nf = n as f64;
    let ln_half_area = ln_peaked_integral(g, |_| 1.0, 1.0 - h1, nf - 2.0, 0.0, theta0, 0.0)?;
    let ln_half_volume = ln_peaked_integral(g, cos, 1.0 - h1, nf - 1.0, 0.0, theta0, 0.0)?;
    Ok(NdMeasures {
        n,
        lambda,
        ln_area_normalized: log(2.0) + ln_half_area,
        ln_volume_normalized: log(2.0) + ln_half_volume,
    })
}

/// Lens in R^n whose rim has radius `h2 ∈ (0, 1)` on the unit spheres.
pub fn lens_nd_measures(n: u32, lambda: f64, h2: f64) -> Result<NdMeasures> {
    check_dimension(n)?;
    check_lambda(lambda)?;
    if !(h2 > 0.0 && h2 < 1.0) {
        return Err(invalid(format!("lens parameter h2 = {h2} outside (0, 1)")));
    }
    let phi0 = asin(h2);
    let nf = n as f64;
    let ln_area = ln_peaked_integral(sin, |_| 1.0, h2, nf - 2.0, 0.0, phi0, phi0)?;
    let ln_volume = ln_peaked_integral(sin, |_| 1.0, h2, nf, 0.0, phi0, phi0)?;
    Ok(NdMeasures {
        n,
        lambda,
        ln_area_normalized: log(2.0) + ln_area,
        ln_volume_normalized: log(2.0) + ln_volume,
    })
}

/// Leading Laplace terms `(A, (n−1)V)` divided by `σ_{n−2}`, at `λ = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LaplaceEstimate {
    pub area: f64,
    pub volume: f64,
}

/// Large-n asymptotics of the normalized spindle measures:
/// `A ≈ √(2π)(1−h1)^{n−3/2}/√n`, `V ≈ √(2π)(1−h1)^{n−1/2}/√n`.
pub fn laplace_spindle(n: u32, h1: f64) -> LaplaceEstimate {
    let nf = n as f64;
    let c = sqrt(TAU / nf);
    LaplaceEstimate {
        area: c * exp((nf - 1.5) * log(1.0 - h1)),
        volume: c * exp((nf - 0.5) * log(1.0 - h1)),
    }
}

/// Large-n asymptotics of the normalized lens measures:
/// `A ≈ 2h2^{n−1}/(√(1−h2²)·n)`, `V ≈ 2h2^{n+1}/(√(1−h2²)·n)`.
pub fn laplace_lens(n: u32, h2: f64) -> LaplaceEstimate {
    let nf = n as f64;
    let c = 2.0 / (sqrt(1.0 - h2 * h2) * nf);
    LaplaceEstimate {
        area: c * exp((nf - 1.0) * log(h2)),
        volume: c * exp((nf + 1.0) * log(h2)),
    }
}

/// Spindle and lens of equal surface area in R^n.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Comparison {
    pub n: u32,
    pub h1: f64,
    pub h2: f64,
    pub spindle: NdMeasures,
    pub lens: NdMeasures,
    /// `V_lens < V_spindle`.
    pub lens_smaller: bool,
    /// `(1 − h1) − h2`.
    pub gap: f64,
}

/// Finds the lens with the spindle's surface area and compares volumes.
pub fn match_and_compare(n: u32, lambda: f64, h1: f64) -> Result<Comparison> {
    if n < 3 {
        return Err(invalid(format!("comparison needs n ≥ 3, got {n}")));
    }
    let spindle = spindle_measures(n, lambda, h1)?;
    let target = spindle.ln_area_normalized;
    let mut failure = None;
    let h2 = bisect(
        |h2| match lens_nd_measures(n, lambda, h2) {
            Ok(m) => m.ln_area_normalized - target,
            Err(e) => {
                failure = Some(e);
                0.0
            }
        },
        1e-12,
        1.0 - 1e-15,
        1e-16,
    )
    .map_err(|e| Error::Numeric(format!("no lens matches the spindle area: {e}")))?;
    if let Some(e) = failure {
        return Err(e);
    }
    let lens = lens_nd_measures(n, lambda, h2)?;
    if (lens.ln_area_normalized - target).abs() > 1e-10 {
        return Err(Error::Numeric(format!("lens area mismatch at n = {n}, h1 = {h1}")));
    }
    Ok(Comparison {
        n,
        h1,
        h2,
        spindle,
        lens,
        lens_smaller: lens.ln_volume_normalized < spindle.ln_volume_normalized,
        gap: (1.0 - h1) - h2,
    })
}
