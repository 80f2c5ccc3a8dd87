//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::io::Write;
use std::panic::{self, AssertUnwindSafe};
use std::time::Instant;

use lch::gen::{random_polytope, rng_for, GenSpec};
use lch::mc::{mc_volume, surface_oracle};
use lch::sweep::{run_sweep, trial_spec, SweepConfig};
use lch_core::arc_polygon::{build2_euclidean, goal_inequality};
use lch_core::erosion::{compare_profiles, inner_parallel, initial_derivative, rip_check, volume_via_profile};
use lch_core::gauss_bonnet::gb_total;
use lch_core::inradius::verify_reverse_inradius;
use lch_core::projection::{charts, claim3_check, key_claim_check, sector_ratio, Wedge};
use lch_core::reference_bodies::{
    laplace_lens, laplace_spindle, lens3_from_surface_area, lens_nd_measures, match_and_compare, spindle_measures,
    Lens2, Lens3,
};
use lch_core::{inscribed_ball, BallPolytope3, Vec2, Vec3};
use rand::Rng;
use rayon::prelude::*;

type Criterion = (&'static str, fn() -> Verdict);

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: String) -> Verdict {
    Verdict { passed, detail }
}

/// Random touching polytopes at `λ = 1`, drawn like sweep trials.
fn polytope_specs(seed: u64, count: usize) -> Vec<GenSpec> {
    let config = SweepConfig { trials: count, m_max: 12, seed, dim: 3, curvature: 0 };
    (0..count).map(|i| trial_spec(&config, i, 0)).collect()
}

fn polytopes(seed: u64, count: usize) -> Vec<(GenSpec, BallPolytope3)> {
    polytope_specs(seed, count)
        .into_par_iter()
        .map(|s| {
            let k = random_polytope(&s).unwrap_or_else(|e| panic!("generator failed on {s:?}: {e}"));
            (s, k)
        })
        .collect()
}

fn lens(alpha: f64) -> BallPolytope3 {
    let c = alpha.cos();
    BallPolytope3::build(1.0, &[Vec3::new(0.0, 0.0, c), Vec3::new(0.0, 0.0, -c)]).expect("lens builds")
}

fn random_alphas(seed: u64, count: usize) -> Vec<f64> {
    let mut rng = rng_for(seed, 0);
    (0..count).map(|_| 0.05 + (FRAC_PI_2 - 0.1) * rng.random::<f64>()).collect()
}

fn gauss_bonnet_totality() -> Verdict {
    let bodies = polytopes(101, 200);
    let worst = bodies
        .par_iter()
        .map(|(_, k)| gb_total(k).map(|g| g.defect().abs()).unwrap_or(f64::INFINITY))
        .reduce(|| 0.0, f64::max);
    let mut lens_err: f64 = 0.0;
    for i in 0..20 {
        let alpha = 0.05 + (FRAC_PI_2 - 0.1) * i as f64 / 19.0;
        let g = gb_total(&lens(alpha)).expect("lens decomposes");
        let c = alpha.cos();
        lens_err = lens_err
            .max((g.facet_total - 4.0 * PI * (1.0 - c)).abs())
            .max((g.edge_total - 4.0 * PI * c).abs())
            .max(g.vertex_total.abs());
    }
    verdict(
        worst < 1e-9 && lens_err < 1e-10,
        format!("max |total − 4π| = {worst:.2e} over 200 bodies; lens split error {lens_err:.2e}"),
    )
}

fn lens_anchors() -> Verdict {
    let mut err: f64 = 0.0;
    for alpha in random_alphas(102, 50) {
        let k = lens(alpha);
        let h = 1.0 - alpha.cos();
        let r = inscribed_ball(&k).expect("lens has an inscribed ball").radius;
        err = err
            .max((k.surface_area() - 4.0 * PI * h).abs())
            .max((k.volume() - TAU / 3.0 * h * h * (3.0 - h)).abs())
            .max((r - h).abs());
    }
    let planar = Lens2::from_perimeter(1.0, PI).expect("planar lens").area();
    let d = (PI / 4.0).cos();
    let built = build2_euclidean(1.0, &[Vec2::new(d, 0.0), Vec2::new(-d, 0.0)]).expect("planar lens builds");
    let spatial = lens3_from_surface_area(1.0, TAU).expect("spatial lens").volume();
    let anchor_err = (planar - (FRAC_PI_2 - 1.0))
        .abs()
        .max((built.area() - (FRAC_PI_2 - 1.0)).abs())
        .max((built.perimeter() - PI).abs())
        .max((spatial - 5.0 * PI / 12.0).abs());
    verdict(
        err < 1e-10 && anchor_err < 1e-12,
        format!("lens measures error {err:.2e} over 50 angles; closed-form anchors error {anchor_err:.2e}"),
    )
}

fn reverse_isoperimetric() -> Verdict {
    let bodies = polytopes(103, 1000);
    let reports: Vec<_> = bodies.par_iter().map(|(s, k)| (s, rip_check(k))).collect();
    let mut violations = 0;
    let mut thin = 0;
    let mut min_vertex_margin = f64::INFINITY;
    for (s, r) in &reports {
        match r {
            Ok(r) => {
                if !r.passed {
                    violations += 1;
                    eprintln!("  volume below lens: {s:?} margin {:e}", r.margin);
                }
                if r.has_vertices {
                    min_vertex_margin = min_vertex_margin.min(r.margin);
                    if r.margin <= 1e-8 {
                        thin += 1;
                        eprintln!("  margin not strictly positive with vertices: {s:?} margin {:e}", r.margin);
                    }
                }
            }
            Err(e) => {
                violations += 1;
                eprintln!("  {s:?}: {e}");
            }
        }
    }
    verdict(
        violations == 0 && thin == 0,
        format!("{violations} violations, {thin} vertex bodies with margin ≤ 1e-8, min vertex margin {min_vertex_margin:.3e}"),
    )
}

fn reverse_inradius() -> Verdict {
    let bodies = polytopes(104, 1000);
    let bad3 = bodies
        .par_iter()
        .filter(|(s, k)| match verify_reverse_inradius(k) {
            Ok(r) if !r.violation => false,
            Ok(r) => {
                eprintln!("  inradius below lens: {s:?} margin {:e}", r.margin);
                true
            }
            Err(e) => {
                eprintln!("  {s:?}: {e}");
                true
            }
        })
        .count();
    let mut parts = vec![format!("3-D {bad3}/1000")];
    let mut bad = bad3;
    for c in [-1, 0, 1] {
        let config = SweepConfig { trials: 1000, m_max: 12, seed: 105, dim: 2, curvature: c };
        let rep = run_sweep(&config).expect("planar sweep runs");
        let n = rep
            .violations
            .iter()
            .filter(|v| v.check == "inradius" || v.check.starts_with("error"))
            .inspect(|v| eprintln!("  c={c}: {} {:?} margin {:e}", v.check, v.spec, v.margin))
            .count();
        bad += n;
        parts.push(format!("c={c} {n}/{}", rep.records.len()));
    }
    verdict(bad == 0, format!("violations: {}", parts.join(", ")))
}

fn initial_slope() -> Verdict {
    let bodies = polytopes(106, 100);
    let ts = [1e-2, 1e-3, 1e-4];
    let results: Vec<_> = bodies
        .par_iter()
        .map(|(s, k)| -> Result<[f64; 2], String> {
            let f0 = k.surface_area();
            let d = initial_derivative(k);
            let mut errs = [0.0; 3];
            for (e, &t) in errs.iter_mut().zip(&ts) {
                let ft = inner_parallel(k, t).map_err(|e| format!("{s:?}: {e}"))?.surface_area();
                *e = ((ft - f0) / t - d).abs();
            }
            Ok([errs[0] / errs[1], errs[1] / errs[2]])
        })
        .collect();
    let mut off = 0;
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for (r, (s, _)) in results.iter().zip(&bodies) {
        match r {
            Ok(q) => {
                lo = lo.min(q[0]).min(q[1]);
                hi = hi.max(q[0]).max(q[1]);
                if !q.iter().all(|x| (5.0..=20.0).contains(x)) {
                    off += 1;
                    eprintln!("  error ratios {q:?} on {s:?}");
                }
            }
            Err(e) => {
                off += 1;
                eprintln!("  {e}");
            }
        }
    }
    let closed = Lens3::new(1.0, PI / 3.0).expect("lens");
    let built = initial_derivative(&lens(PI / 3.0));
    let anchor = (closed.eroded_area_slope() + 6.0 * PI).abs().max((built + 6.0 * PI).abs());
    verdict(
        off == 0 && anchor < 1e-10,
        format!("{off}/100 bodies outside [5, 20] (observed {lo:.2}..{hi:.2}); lens slope error {anchor:.2e}"),
    )
}

fn profile_dominance() -> Verdict {
    let bodies = polytopes(107, 500);
    let bad = bodies
        .par_iter()
        .filter(|(s, k)| {
            let lens = match lens3_from_surface_area(1.0, k.surface_area()) {
                Ok(l) => l,
                Err(e) => {
                    eprintln!("  {s:?}: {e}");
                    return true;
                }
            };
            match compare_profiles(k, &lens, 64) {
                Ok(c) if c.violations.is_empty() => false,
                Ok(c) => {
                    eprintln!("  profile below lens on {s:?}: min gap {:e} at t = {}", c.min_gap, c.min_gap_at);
                    true
                }
                Err(e) => {
                    eprintln!("  {s:?}: {e}");
                    true
                }
            }
        })
        .count();
    verdict(bad == 0, format!("{bad}/500 pairs with f_K < f_L − 1e-9"))
}

fn projection_ratio() -> Verdict {
    let bodies = polytopes(108, 200);
    let worst: Vec<(f64, f64, bool)> = bodies
        .par_iter()
        .map(|(s, k)| match (key_claim_check(k), claim3_check(k)) {
            (Ok(kc), Ok(c3)) => {
                let excess = kc.facets.iter().map(|f| f.ratio - kc.big_f).fold(f64::NEG_INFINITY, f64::max);
                if !(kc.passed && c3.passed) {
                    eprintln!("  {s:?}: ratio excess {excess:e}, tiling deviation {:e}", c3.relative_deviation);
                }
                (excess, c3.relative_deviation, kc.passed && c3.passed)
            }
            (a, b) => {
                eprintln!("  {s:?}: {:?} {:?}", a.err(), b.err());
                (f64::INFINITY, f64::INFINITY, false)
            }
        })
        .collect();
    let failures = worst.iter().filter(|w| !w.2).count();
    let max_excess = worst.iter().map(|w| w.0).fold(f64::NEG_INFINITY, f64::max);
    let max_dev = worst.iter().map(|w| w.1).fold(0.0, f64::max);

    let (_, k) = &bodies[0];
    let mut spread: f64 = 0.0;
    for chart in charts(k).expect("charts") {
        let base = sector_ratio(&chart, 1.0, Wedge::new(0.0, TAU).unwrap()).unwrap();
        for (a, b) in [(0.0, 0.3), (1.0, 2.5), (2.0, 6.0), (-1.0, 0.1)] {
            let q = sector_ratio(&chart, 1.0, Wedge::new(a, b).unwrap()).unwrap();
            spread = spread.max((q - base).abs());
        }
    }
    verdict(
        failures == 0 && max_excess <= 1e-5 && max_dev <= 1e-5 && spread <= 1e-8,
        format!(
            "{failures}/200 failures; max ratio − 𝓕 = {max_excess:.2e}; max tiling deviation {max_dev:.2e}; wedge spread {spread:.2e}"
        ),
    )
}

fn oracle_agreement() -> Verdict {
    let bodies = polytopes(109, 50);
    let rows: Vec<_> = bodies
        .iter()
        .enumerate()
        .map(|(i, (s, k))| {
            let v = k.volume();
            let mc = mc_volume(k, 1_000_000, 9000 + i as u64).expect("mc runs");
            let coarea = volume_via_profile(k).map(|x| (x - v).abs() / v).unwrap_or(f64::INFINITY);
            let surf = surface_oracle(k, 1e-4)
                .map(|o| (o.richardson - k.surface_area()).abs() / k.surface_area())
                .unwrap_or(f64::INFINITY);
            let sig = mc.sigmas_from(v);
            if sig > 3.0 || coarea > 1e-6 || surf > 1e-5 {
                eprintln!("  {s:?}: mc {sig:.2}σ, coarea {coarea:.2e}, surface {surf:.2e}");
            }
            (sig, coarea, surf)
        })
        .collect();
    let max_sig = rows.iter().map(|r| r.0).fold(0.0, f64::max);
    let max_co = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    let max_sf = rows.iter().map(|r| r.2).fold(0.0, f64::max);
    verdict(
        max_sig <= 3.0 && max_co <= 1e-6 && max_sf <= 1e-5,
        format!("max MC deviation {max_sig:.2}σ; coarea rel {max_co:.2e}; surface rel {max_sf:.2e}"),
    )
}

fn high_dimensional() -> Verdict {
    let mut notes = Vec::new();
    let mut ok = true;
    let mut laplace_worst: f64 = 0.0;
    for h1 in [0.2, 0.3, 0.5] {
        let mut prev = f64::INFINITY;
        let mut monotone = true;
        let mut all_smaller = true;
        let mut gap60 = f64::NAN;
        for n in (4..=60).step_by(2) {
            let c = match_and_compare(n, 1.0, h1).expect("comparison runs");
            all_smaller &= c.lens_smaller;
            monotone &= c.gap.abs() < prev;
            prev = c.gap.abs();
            if n == 60 {
                gap60 = c.gap.abs();
            }
            if n >= 30 {
                let s = spindle_measures(n, 1.0, h1).unwrap();
                let l = lens_nd_measures(n, 1.0, c.h2).unwrap();
                let (ls, ll) = (laplace_spindle(n, h1), laplace_lens(n, c.h2));
                let rel = |a: f64, b: f64| (a - b).abs() / b;
                let worst = rel(ls.area, s.normalized_area())
                    .max(rel(ls.volume, s.normalized_volume()))
                    .max(rel(ll.area, l.normalized_area()))
                    .max(rel(ll.volume, l.normalized_volume()));
                laplace_worst = laplace_worst.max(worst * n as f64);
                if worst > 5.0 / n as f64 {
                    ok = false;
                    eprintln!("  Laplace off by {worst:.3e} > 5/n at n={n}, h1={h1}");
                }
            }
        }
        ok &= all_smaller && monotone && gap60 < 0.02;
        notes.push(format!(
            "h1={h1}: lens smaller {all_smaller}, gap decreasing {monotone}, gap(60) = {gap60:.4}"
        ));
    }
    notes.push(format!("max n·Laplace error {laplace_worst:.3}"));
    verdict(ok, notes.join("; "))
}

fn planar_angles() -> Verdict {
    let mut rng = rng_for(110, 0);
    let mut bad = 0;
    let mut wrong_equality = 0;
    let mut sets = 0;
    while sets < 10_000 {
        let m = rng.random_range(2..=12usize);
        let gamma_star = PI * (0.01 + 0.98 * rng.random::<f64>());
        let angles: Vec<f64> = if m == 2 {
            vec![gamma_star; 2]
        } else {
            let w: Vec<f64> = (0..m).map(|_| -rng.random::<f64>().ln()).collect();
            let total: f64 = w.iter().sum();
            let a: Vec<f64> = w.iter().map(|x| 2.0 * gamma_star * x / total).collect();
            if a.iter().any(|&g| g > gamma_star) {
                continue;
            }
            a
        };
        sets += 1;
        let g = goal_inequality(&angles, gamma_star);
        if !g.passed {
            bad += 1;
            eprintln!("  m={m} γ*={gamma_star}: {} > {}", g.lhs, g.rhs);
        }
        let strict = g.lhs < g.rhs;
        if g.equality != (m == 2) || (m > 2 && !strict) {
            wrong_equality += 1;
        }
    }
    let config = SweepConfig { trials: 1000, m_max: 12, seed: 111, dim: 2, curvature: 0 };
    let rep = run_sweep(&config).expect("planar sweep runs");
    let rip_bad = rep
        .violations
        .iter()
        .filter(|v| v.check == "rip2d" || v.check.starts_with("error"))
        .inspect(|v| eprintln!("  {} {:?} margin {:e}", v.check, v.spec, v.margin))
        .count();
    verdict(
        bad == 0 && wrong_equality == 0 && rip_bad == 0,
        format!(
            "{bad}/10000 angle sets violate, {wrong_equality} with equality off m=2; planar area {rip_bad}/1000 violations (min margin {:.3e})",
            rep.min_rip_margin
        ),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("gauss-bonnet totality", gauss_bonnet_totality),
        ("closed-form lens anchors", lens_anchors),
        ("reverse isoperimetric sweep", reverse_isoperimetric),
        ("reverse inradius sweep", reverse_inradius),
        ("initial erosion slope", initial_slope),
        ("erosion profile dominance", profile_dominance),
        ("projection ratio and tiling", projection_ratio),
        ("volume and surface oracles", oracle_agreement),
        ("lens against spindle in high dimension", high_dimensional),
        ("planar angle inequality and area sweep", planar_angles),
    ];
    let start = Instant::now();
    let mut failed = 0;
    let mut out = std::io::stdout().lock();
    for (name, run) in criteria {
        let t0 = Instant::now();
        let v = panic::catch_unwind(AssertUnwindSafe(run))
            .unwrap_or_else(|_| verdict(false, "panicked".into()));
        if !v.passed {
            failed += 1;
        }
        let tag = if v.passed { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "{tag} {name} ({:.1}s): {}", t0.elapsed().as_secs_f64(), v.detail);
        let _ = out.flush();
    }
    let _ = writeln!(out, "acceptance: {} of 10 passed in {:.1}s", 10 - failed, start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
