//! The `lch` command line.
//!
//! Exit codes: 0 when every check passes, 1 when an inequality is violated,
//! 2 for invalid input or IO failures.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use lch_core::arc_polygon::{constraints_check, goal_inequality_check, inradius2, rip2d_check, theorem_b_2d_check};
use lch_core::erosion::{profile, rip_check};
use lch_core::gauss_bonnet::gb_total;
use lch_core::inradius::{reduce_to_touching, verify_reverse_inradius};
use lch_core::projection::{claim3_check, key_claim_check};
use lch_core::reference_bodies::{
    laplace_spindle, lens3_from_inradius, lens3_from_surface_area, match_and_compare, spindle_measures, Lens2,
};
use lch_core::{inscribed_ball, ArcPolygon2, BallPolytope3};
use serde_json::{json, Value};

use crate::fmt::{g17, row};
use crate::gen::{random_polygon, random_polytope, GenSpec};
use crate::io::{Body, IoError};
use crate::sweep::{run_sweep, SweepConfig};

#[derive(Parser, Debug)]
#[command(name = "lch", version, about = "Measures and inequality checks for intersections of congruent balls")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a random body whose inscribed ball touches every facet.
    Gen {
        #[arg(long, default_value_t = 4)]
        m: usize,
        #[arg(long, default_value_t = 0.5)]
        inradius: f64,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[arg(long, default_value_t = 3)]
        dim: u32,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        curvature: i32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Print the measures of a body.
    Measure {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Sample the erosion profile t ↦ |∂K_t|.
    Erode {
        file: PathBuf,
        #[arg(long, default_value_t = 64)]
        steps: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Check one inequality or identity on a body.
    Verify {
        #[arg(value_enum)]
        check: Check,
        file: PathBuf,
    },
    /// Check the inequalities on random bodies.
    Sweep {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 12)]
        m_max: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        dim: u32,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        curvature: i32,
    },
    /// Measures of the lens with a given surface area (perimeter in 2-D) or inradius.
    Lens {
        #[arg(long, default_value_t = 3)]
        dim: u32,
        #[arg(long, conflicts_with = "inradius", required_unless_present = "inradius")]
        surface_area: Option<f64>,
        #[arg(long)]
        inradius: Option<f64>,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
    },
    /// Measures of the n-dimensional spindle with chord half-height h1.
    Spindle {
        #[arg(long)]
        dim: u32,
        #[arg(long)]
        h1: f64,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
    },
    /// Lens against spindle of equal surface area over a range of dimensions.
    CompareAsymptotic {
        #[arg(long, default_value_t = 4)]
        n_min: u32,
        #[arg(long, default_value_t = 60)]
        n_max: u32,
        #[arg(long, default_value_t = 2)]
        step: u32,
        #[arg(long)]
        h1: f64,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Check {
    Rip,
    Inradius,
    Gb,
    Keyclaim,
    Rip2d,
    Goal2d,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Io(#[from] IoError),
    #[error(transparent)]
    Geometry(#[from] lch_core::Error),
    #[error(transparent)]
    Gen(#[from] crate::gen::GenError),
    #[error("{0}")]
    Usage(String),
}

fn file_error(path: &Path, source: std::io::Error) -> CliError {
    CliError::Io(IoError::File { path: path.display().to_string(), source })
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let mut out = std::io::stdout().lock();
    match execute(cli.command, &mut out) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes()).map_err(|e| file_error(Path::new("<stdout>"), e))
}

fn write_or_print(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| file_error(p, e)),
        None => emit(out, text),
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn execute(cmd: Command, out: &mut dyn Write) -> Result<bool, CliError> {
    match cmd {
        Command::Gen { m, inradius, lambda, dim, curvature, seed, output } => {
            let spec = GenSpec { seed, m, inradius, lambda, dim, curvature };
            let body = match dim {
                3 => Body::from_polytope(&random_polytope(&spec)?),
                2 => Body::from_polygon(&random_polygon(&spec)?),
                d => return Err(CliError::Usage(format!("--dim {d}: expected 2 or 3"))),
            };
            write_or_print(output.as_deref(), &body.to_json_string(), out)?;
            Ok(true)
        }
        Command::Measure { file, json } => {
            let body = Body::read(&file)?;
            let v = match body.dim() {
                3 => measure3(&body.polytope()?)?,
                _ => measure2(&body.polygon()?)?,
            };
            emit(out, &if json { pretty(&v) } else { flat_text(&v) })?;
            Ok(true)
        }
        Command::Erode { file, steps, csv } => {
            let k = Body::read(&file)?.polytope()?;
            let p = profile(&k, steps.max(2))?;
            let mut text = String::from("t,area\n");
            for (t, a) in p.ts.iter().zip(&p.areas) {
                text.push_str(&row(&[*t, *a]));
                text.push('\n');
            }
            write_or_print(csv.as_deref(), &text, out)?;
            Ok(true)
        }
        Command::Verify { check, file } => verify(check, &Body::read(&file)?, out),
        Command::Sweep { trials, m_max, seed, report, dim, curvature } => {
            let config = SweepConfig { trials, m_max, seed, dim, curvature };
            let rep = run_sweep(&config)?;
            if let Some(p) = &report {
                fs::write(p, rep.to_csv()).map_err(|e| file_error(p, e))?;
            }
            let mut text = format!(
                "trials {}\nviolations {}\nmin_rip_margin {}\nmin_inradius_margin {}\nmax_turning_defect {}\nelapsed_s {:.3}\n",
                rep.records.len(),
                rep.violations.len(),
                g17(rep.min_rip_margin),
                g17(rep.min_inradius_margin),
                g17(rep.max_turning_defect),
                rep.elapsed.as_secs_f64()
            );
            for v in &rep.violations {
                let s = &v.spec;
                text.push_str(&format!(
                    "violation trial={} check={} margin={} seed={} m={} inradius={} lambda={} dim={} curvature={}\n",
                    v.trial,
                    v.check,
                    g17(v.margin),
                    s.seed,
                    s.m,
                    g17(s.inradius),
                    g17(s.lambda),
                    s.dim,
                    s.curvature
                ));
            }
            emit(out, &text)?;
            Ok(rep.passed())
        }
        Command::Lens { dim, surface_area, inradius, lambda } => {
            let text = match dim {
                3 => {
                    let lens = match (surface_area, inradius) {
                        (Some(a), _) => lens3_from_surface_area(lambda, a)?,
                        (None, Some(r)) => lens3_from_inradius(lambda, r)?,
                        _ => unreachable!("clap requires one of the two"),
                    };
                    format!(
                        "dim 3\nlambda {}\nalpha {}\nsurface_area {}\nvolume {}\ninradius {}\n",
                        g17(lambda),
                        g17(lens.alpha),
                        g17(lens.surface_area()),
                        g17(lens.volume()),
                        g17(lens.inradius())
                    )
                }
                2 => {
                    let lens = match (surface_area, inradius) {
                        (Some(p), _) => Lens2::from_perimeter(lambda, p)?,
                        (None, Some(r)) => Lens2::from_inradius(lambda, r)?,
                        _ => unreachable!("clap requires one of the two"),
                    };
                    format!(
                        "dim 2\nlambda {}\ntheta {}\nperimeter {}\narea {}\ninradius {}\nvertex_angle {}\n",
                        g17(lambda),
                        g17(lens.theta),
                        g17(lens.perimeter()),
                        g17(lens.area()),
                        g17(lens.inradius()),
                        g17(lens.vertex_angle())
                    )
                }
                d => return Err(CliError::Usage(format!("--dim {d}: expected 2 or 3"))),
            };
            emit(out, &text)?;
            Ok(true)
        }
        Command::Spindle { dim, h1, lambda } => {
            let s = spindle_measures(dim, lambda, h1)?;
            let lap = laplace_spindle(dim, h1);
            emit(
                out,
                &format!(
                    "dim {dim}\nh1 {}\nlambda {}\nsurface_area {}\nvolume {}\nln_surface_area {}\nln_volume {}\n\
                     normalized_area {}\nnormalized_volume {}\nlaplace_area {}\nlaplace_volume {}\n",
                    g17(h1),
                    g17(lambda),
                    g17(s.surface_area()),
                    g17(s.volume()),
                    g17(s.ln_surface_area()),
                    g17(s.ln_volume()),
                    g17(s.normalized_area()),
                    g17(s.normalized_volume()),
                    g17(lap.area),
                    g17(lap.volume)
                ),
            )?;
            Ok(true)
        }
        Command::CompareAsymptotic { n_min, n_max, step, h1, lambda, csv } => {
            if step == 0 || n_min < 2 || n_max < n_min {
                return Err(CliError::Usage("need 2 ≤ n-min ≤ n-max and step ≥ 1".into()));
            }
            let mut text = String::from("n,h1,h2,area,V_lens,V_spindle,gap\n");
            let mut all = true;
            let mut n = n_min;
            while n <= n_max {
                let c = match_and_compare(n, lambda, h1)?;
                all &= c.lens_smaller;
                text.push_str(&format!(
                    "{n},{}\n",
                    row(&[c.h1, c.h2, c.spindle.surface_area(), c.lens.volume(), c.spindle.volume(), c.gap])
                ));
                n += step;
            }
            write_or_print(csv.as_deref(), &text, out)?;
            Ok(all)
        }
    }
}

fn measure3(k: &BallPolytope3) -> Result<Value, CliError> {
    let ball = inscribed_ball(k)?;
    let gb = gb_total(k)?;
    let (f, e, v) = k.signature();
    Ok(json!({
        "dim": 3,
        "lambda": k.lambda(),
        "facets": f,
        "edges": e,
        "vertices": v,
        "redundant": k.report().redundant.len(),
        "surface_area": k.surface_area(),
        "volume": k.volume(),
        "inradius": ball.radius,
        "inscribed_center": ball.center.to_array(),
        "gauss_bonnet": {
            "facet_total": gb.facet_total,
            "edge_total": gb.edge_total,
            "vertex_total": gb.vertex_total,
            "grand_total": gb.grand_total,
        },
    }))
}

fn measure2(p: &ArcPolygon2) -> Result<Value, CliError> {
    let disk = inradius2(p)?;
    Ok(json!({
        "dim": 2,
        "curvature": p.space().curvature,
        "lambda": p.lambda(),
        "arcs": p.arc_count(),
        "perimeter": p.perimeter(),
        "area": p.area(),
        "turning_angles": p.turning_angles(),
        "total_turning": p.total_turning(),
        "inradius": disk.radius,
        "inscribed_center": disk.center.to_array(),
    }))
}

/// `key value` lines, nested objects flattened with dots.
fn flat_text(v: &Value) -> String {
    fn walk(prefix: &str, v: &Value, out: &mut String) {
        match v {
            Value::Object(map) => {
                for (k, x) in map {
                    let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    walk(&key, x, out);
                }
            }
            Value::Array(items) => {
                let parts: Vec<String> = items.iter().map(scalar).collect();
                out.push_str(&format!("{prefix} {}\n", parts.join(" ")));
            }
            _ => out.push_str(&format!("{prefix} {}\n", scalar(v))),
        }
    }
    fn scalar(v: &Value) -> String {
        match v {
            Value::Number(n) if n.is_f64() => g17(n.as_f64().unwrap_or(f64::NAN)),
            other => other.to_string(),
        }
    }
    let mut out = String::new();
    walk("", v, &mut out);
    out
}

fn verify(check: Check, body: &Body, out: &mut dyn Write) -> Result<bool, CliError> {
    let (passed, report) = match check {
        Check::Rip => {
            let r = rip_check(&body.polytope()?)?;
            (r.passed, json!({
                "check": "rip",
                "surface_area": r.surface_area,
                "volume": r.volume,
                "lens_volume": r.lens_volume,
                "margin": r.margin,
                "passed": r.passed,
            }))
        }
        Check::Inradius => match body.dim() {
            3 => {
                let r = verify_reverse_inradius(&body.polytope()?)?;
                (!r.violation, json!({
                    "check": "inradius",
                    "inradius": r.inradius,
                    "lens_inradius": r.lens_inradius,
                    "margin": r.margin,
                    "passed": !r.violation,
                }))
            }
            _ => {
                let r = theorem_b_2d_check(&body.polygon()?)?;
                (r.passed, json!({
                    "check": "inradius",
                    "inradius": r.inradius,
                    "lens_inradius": r.lens_inradius,
                    "margin": r.margin,
                    "passed": r.passed,
                }))
            }
        },
        Check::Gb => {
            let g = gb_total(&body.polytope()?)?;
            let ok = g.defect().abs() < 1e-9;
            (ok, json!({
                "check": "gb",
                "facet_total": g.facet_total,
                "edge_total": g.edge_total,
                "vertex_total": g.vertex_total,
                "grand_total": g.grand_total,
                "defect": g.defect(),
                "passed": ok,
            }))
        }
        Check::Keyclaim => {
            let k = reduce_to_touching(&body.polytope()?)?;
            let kc = key_claim_check(&k)?;
            let c3 = claim3_check(&k)?;
            let ok = kc.passed && c3.passed;
            let facets: Vec<Value> = kc
                .facets
                .iter()
                .map(|f| {
                    json!({
                        "ball": f.ball,
                        "area": f.area,
                        "projected": f.projected,
                        "ratio": f.ratio,
                        "natural_extension": f.is_extension,
                    })
                })
                .collect();
            (ok, json!({
                "check": "keyclaim",
                "F": kc.big_f,
                "facets": facets,
                "surface_area": kc.surface_area,
                "bound": kc.bound,
                "lens_area": kc.lens_area,
                "projected_sum": c3.sum,
                "sphere_area": c3.sphere_area,
                "passed": ok,
            }))
        }
        Check::Rip2d => {
            let r = rip2d_check(&body.polygon()?)?;
            (r.passed, json!({
                "check": "rip2d",
                "perimeter": r.perimeter,
                "area": r.area,
                "lens_area": r.lens_area,
                "margin": r.margin,
                "is_lens": r.is_lens,
                "passed": r.passed,
            }))
        }
        Check::Goal2d => {
            let p = body.polygon()?;
            let c = constraints_check(&p)?;
            let g = goal_inequality_check(&p)?;
            let ok = c.passed && g.passed;
            (ok, json!({
                "check": "goal2d",
                "gamma_star": c.gamma_star,
                "max_gamma": c.max_gamma,
                "sum_gamma": c.sum_gamma,
                "constraints_passed": c.passed,
                "lhs": g.lhs,
                "rhs": g.rhs,
                "equality": g.equality,
                "passed": ok,
            }))
        }
    };
    emit(out, &pretty(&report))?;
    Ok(passed)
}
