//! Randomized verification sweeps.
//!
//! Trial `i` of a sweep with seed `s` draws its spec from ChaCha8 stream `i`
//! of seed `s`; trials run in parallel and are reported in trial order.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use lch_core::arc_polygon::{rip2d_check, theorem_b_2d_check};
use lch_core::erosion::rip_check;
use lch_core::gauss_bonnet::gb_total;
use lch_core::inradius::verify_reverse_inradius;
use lch_core::inscribed_ball;
use lch_core::model_space::ModelSpace;
use rand::Rng;
use rayon::prelude::*;

use crate::fmt::{g17, row};
use crate::gen::{max_inradius2, random_polygon, random_polytope, rng_for, GenError, GenSpec};

/// Worker pool capped by `LCH_THREADS` when set.
pub fn thread_pool() -> rayon::ThreadPool {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = std::env::var("LCH_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        if n > 0 {
            b = b.num_threads(n);
        }
    }
    b.build().expect("thread pool builds")
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepConfig {
    pub trials: usize,
    pub m_max: usize,
    pub seed: u64,
    pub dim: u32,
    pub curvature: i32,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self { trials: 100, m_max: 12, seed: 0, dim: 3, curvature: 0 }
    }
}

/// Measurements of one trial.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialRecord {
    pub trial: usize,
    pub spec: GenSpec,
    /// Facets, edges, vertices in 3-D; arcs, arcs, vertices in 2-D.
    pub signature: (usize, usize, usize),
    /// Surface area in 3-D, perimeter in 2-D.
    pub boundary: f64,
    /// Volume in 3-D, area in 2-D.
    pub content: f64,
    /// Content of the lens of equal boundary measure, NaN where not compared.
    pub lens_content: f64,
    pub rip_margin: f64,
    pub inradius: f64,
    pub lens_inradius: f64,
    pub inradius_margin: f64,
    /// `|gb_total − 4π|` in 3-D, `|λP + Σγ + c·area − 2π|` in 2-D.
    pub turning_defect: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub trial: usize,
    pub spec: GenSpec,
    pub check: String,
    pub margin: f64,
}

#[derive(Clone, Debug)]
pub struct SweepReport {
    pub config: SweepConfig,
    pub records: Vec<TrialRecord>,
    pub violations: Vec<Violation>,
    pub min_rip_margin: f64,
    pub min_inradius_margin: f64,
    pub max_turning_defect: f64,
    pub elapsed: Duration,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// One row per trial; byte-identical for a fixed config.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "trial,seed,dim,curvature,m,inradius0,lambda,facets,edges,vertices,boundary,content,lens_content,\
             rip_margin,inradius,lens_inradius,inradius_margin,turning_defect\n",
        );
        for r in &self.records {
            let s = &r.spec;
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{}",
                r.trial,
                s.seed,
                s.dim,
                s.curvature,
                s.m,
                g17(s.inradius),
                g17(s.lambda),
                r.signature.0,
                r.signature.1,
                r.signature.2,
                row(&[
                    r.boundary,
                    r.content,
                    r.lens_content,
                    r.rip_margin,
                    r.inradius,
                    r.lens_inradius,
                    r.inradius_margin,
                    r.turning_defect
                ]),
            );
        }
        out
    }
}

/// The spec of trial `trial`.
pub fn trial_spec(config: &SweepConfig, trial: usize, attempt: u64) -> GenSpec {
    let mut rng = rng_for(config.seed, ((trial as u64) << 8) | attempt);
    let m = rng.random_range(2..=config.m_max.max(2));
    let seed = rng.random::<u64>();
    if config.dim == 3 {
        let inradius = 0.05 + 0.9 * rng.random::<f64>();
        return GenSpec { seed, m, inradius, lambda: 1.0, dim: 3, curvature: 0 };
    }
    let lambda = match config.curvature {
        0 => 1.0,
        1 => 0.5 + 1.5 * rng.random::<f64>(),
        _ => match rng.random_range(0..3) {
            0 => 0.3 + 0.6 * rng.random::<f64>(),
            1 => 1.0,
            _ => 1.2 + 1.8 * rng.random::<f64>(),
        },
    };
    let space = ModelSpace::plane(config.curvature).expect("sweep curvature is validated");
    let r_max = max_inradius2(space, lambda).ok().flatten().unwrap_or(2.0);
    let inradius = r_max * (0.05 + 0.9 * rng.random::<f64>());
    GenSpec { seed, m, inradius, lambda, dim: 2, curvature: config.curvature }
}

enum Outcome {
    Record(TrialRecord, Vec<Violation>),
    Failed(Violation),
}

fn violation(trial: usize, spec: GenSpec, check: &str, margin: f64) -> Violation {
    Violation { trial, spec, check: check.into(), margin }
}

fn run_trial3(trial: usize, spec: GenSpec) -> Outcome {
    let run = || -> Result<(TrialRecord, Vec<Violation>), String> {
        let k = random_polytope(&spec).map_err(|e| e.to_string())?;
        let rip = rip_check(&k).map_err(|e| e.to_string())?;
        let rb = verify_reverse_inradius(&k).map_err(|e| e.to_string())?;
        let gb = gb_total(&k).map_err(|e| e.to_string())?;
        let r = inscribed_ball(&k).map_err(|e| e.to_string())?.radius;
        let mut v = Vec::new();
        if !rip.passed {
            v.push(violation(trial, spec, "rip", rip.margin));
        }
        if rb.violation {
            v.push(violation(trial, spec, "inradius", rb.margin));
        }
        if gb.defect().abs() >= 1e-9 {
            v.push(violation(trial, spec, "gb", -gb.defect().abs()));
        }
        if (r - spec.inradius).abs() > 1e-10 {
            v.push(violation(trial, spec, "generator-inradius", -(r - spec.inradius).abs()));
        }
        Ok((
            TrialRecord {
                trial,
                spec,
                signature: k.signature(),
                boundary: rip.surface_area,
                content: rip.volume,
                lens_content: rip.lens_volume,
                rip_margin: rip.margin,
                inradius: rb.inradius,
                lens_inradius: rb.lens_inradius,
                inradius_margin: rb.margin,
                turning_defect: gb.defect().abs(),
            },
            v,
        ))
    };
    match run() {
        Ok((rec, v)) => Outcome::Record(rec, v),
        Err(msg) => Outcome::Failed(violation(trial, spec, &format!("error: {msg}"), f64::NAN)),
    }
}

fn run_trial2(config: &SweepConfig, trial: usize) -> Outcome {
    let mut spec = trial_spec(config, trial, 0);
    let mut poly = None;
    for attempt in 0..64 {
        spec = trial_spec(config, trial, attempt);
        match random_polygon(&spec) {
            Ok(p) => {
                poly = Some(p);
                break;
            }
            Err(GenError::InvalidSpec(_) | GenError::BudgetExceeded(_)) => continue,
            Err(e) => return Outcome::Failed(violation(trial, spec, &format!("error: {e}"), f64::NAN)),
        }
    }
    let Some(p) = poly else {
        return Outcome::Failed(violation(trial, spec, "error: no admissible spec", f64::NAN));
    };
    let run = || -> Result<(TrialRecord, Vec<Violation>), String> {
        let tb = theorem_b_2d_check(&p).map_err(|e| e.to_string())?;
        let (lens_content, rip_margin) = if spec.curvature == 0 {
            let rip = rip2d_check(&p).map_err(|e| e.to_string())?;
            (rip.lens_area, rip.margin)
        } else {
            (f64::NAN, f64::NAN)
        };
        let defect = (p.total_turning() - std::f64::consts::TAU).abs();
        let mut v = Vec::new();
        if !tb.passed {
            v.push(violation(trial, spec, "inradius", tb.margin));
        }
        if rip_margin < -1e-9 {
            v.push(violation(trial, spec, "rip2d", rip_margin));
        }
        if defect >= 1e-8 {
            v.push(violation(trial, spec, "turning", -defect));
        }
        let n = p.arc_count();
        Ok((
            TrialRecord {
                trial,
                spec,
                signature: (n, n, p.vertices().len()),
                boundary: p.perimeter(),
                content: p.area(),
                lens_content,
                rip_margin,
                inradius: tb.inradius,
                lens_inradius: tb.lens_inradius,
                inradius_margin: tb.margin,
                turning_defect: defect,
            },
            v,
        ))
    };
    match run() {
        Ok((rec, v)) => Outcome::Record(rec, v),
        Err(msg) => Outcome::Failed(violation(trial, spec, &format!("error: {msg}"), f64::NAN)),
    }
}

pub fn run_sweep(config: &SweepConfig) -> Result<SweepReport, GenError> {
    if config.dim != 2 && config.dim != 3 {
        return Err(GenError::InvalidSpec(format!("dim {} is not 2 or 3", config.dim)));
    }
    ModelSpace::plane(config.curvature)?;
    let start = Instant::now();
    let outcomes: Vec<Outcome> = thread_pool().install(|| {
        (0..config.trials)
            .into_par_iter()
            .map(|i| if config.dim == 3 { run_trial3(i, trial_spec(config, i, 0)) } else { run_trial2(config, i) })
            .collect()
    });
    let mut records = Vec::with_capacity(outcomes.len());
    let mut violations = Vec::new();
    for o in outcomes {
        match o {
            Outcome::Record(r, v) => {
                records.push(r);
                violations.extend(v);
            }
            Outcome::Failed(v) => violations.push(v),
        }
    }
    let min_of = |f: fn(&TrialRecord) -> f64| records.iter().map(f).filter(|x| !x.is_nan()).fold(f64::INFINITY, f64::min);
    Ok(SweepReport {
        config: *config,
        min_rip_margin: min_of(|r| r.rip_margin),
        min_inradius_margin: min_of(|r| r.inradius_margin),
        max_turning_defect: records.iter().map(|r| r.turning_defect).fold(0.0, f64::max),
        records,
        violations,
        elapsed: start.elapsed(),
    })
}
