//! JSON body files, format `lch-1`.
//!
//! ```text
//! {"version":"lch-1","lambda":1,"dim":3,"centers":[[x,y,z],...]}
//! {"version":"lch-1","lambda":1,"dim":2,"centers":[[x,y],...]}
//! {"version":"lch-1","lambda":0.5,"dim":2,"curvature":-1,"disks":[
//!     {"kind":"geodesic","center":[u,v]},
//!     {"kind":"horo","ideal":[u,v],"level":0},
//!     {"kind":"equidistant","geodesic":[[u1,v1],[u2,v2]]}]}
//! ```
//!
//! A missing `version` is read as `lch-1`. Horodisk `level` defaults to 0.

use std::fs;
use std::path::Path;

use lch_core::arc_polygon::{build2, DiskKind};
use lch_core::{ArcPolygon2, BallPolytope3, LambdaDisk2, ModelSpace, Vec2, Vec3};
use serde_json::{json, Map, Value};

pub const FORMAT_VERSION: &str = "lch-1";

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("field `{field}`: {message}")]
    Field { field: String, message: String },
    #[error("{path}: {source}")]
    File { path: String, source: std::io::Error },
    #[error("invalid body: {0}")]
    Geometry(#[from] lch_core::Error),
}

fn field_err(field: impl Into<String>, message: impl Into<String>) -> IoError {
    IoError::Field { field: field.into(), message: message.into() }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DiskSpec {
    Geodesic { center: Vec2 },
    Horo { ideal: Vec2, level: f64 },
    Equidistant { p1: Vec2, p2: Vec2 },
}

/// Contents of a body file.
#[derive(Clone, Debug, PartialEq)]
pub enum Body {
    Polytope { lambda: f64, centers: Vec<Vec3> },
    Polygon { lambda: f64, curvature: i32, disks: Vec<DiskSpec> },
}

fn get<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value, IoError> {
    obj.get(key).ok_or_else(|| field_err(key, "missing"))
}

fn number(v: &Value, name: &str) -> Result<f64, IoError> {
    let x = v.as_f64().ok_or_else(|| field_err(name, format!("expected a number, found {v}")))?;
    if !x.is_finite() {
        return Err(field_err(name, "not finite"));
    }
    Ok(x)
}

fn point<const N: usize>(v: &Value, name: &str) -> Result<[f64; N], IoError> {
    let arr = v.as_array().ok_or_else(|| field_err(name, format!("expected an array of {N} numbers")))?;
    if arr.len() != N {
        return Err(field_err(name, format!("expected {N} coordinates, found {}", arr.len())));
    }
    let mut out = [0.0; N];
    for (i, x) in arr.iter().enumerate() {
        out[i] = number(x, &format!("{name}[{i}]"))?;
    }
    Ok(out)
}

fn list<'a>(v: &'a Value, name: &str) -> Result<&'a Vec<Value>, IoError> {
    v.as_array().ok_or_else(|| field_err(name, "expected an array"))
}

fn parse_disk(v: &Value, name: &str) -> Result<DiskSpec, IoError> {
    let obj = v.as_object().ok_or_else(|| field_err(name, "expected an object"))?;
    let kind = get(obj, "kind")
        .map_err(|_| field_err(format!("{name}.kind"), "missing"))?
        .as_str()
        .ok_or_else(|| field_err(format!("{name}.kind"), "expected a string"))?;
    let sub = |key: &str| {
        obj.get(key).ok_or_else(|| field_err(format!("{name}.{key}"), "missing"))
    };
    match kind {
        "geodesic" => Ok(DiskSpec::Geodesic { center: Vec2::from_array(point(sub("center")?, &format!("{name}.center"))?) }),
        "horo" => {
            let level = match obj.get("level") {
                Some(l) => number(l, &format!("{name}.level"))?,
                None => 0.0,
            };
            Ok(DiskSpec::Horo { ideal: Vec2::from_array(point(sub("ideal")?, &format!("{name}.ideal"))?), level })
        }
        "equidistant" => {
            let g = list(sub("geodesic")?, &format!("{name}.geodesic"))?;
            if g.len() != 2 {
                return Err(field_err(format!("{name}.geodesic"), "expected two points"));
            }
            Ok(DiskSpec::Equidistant {
                p1: Vec2::from_array(point(&g[0], &format!("{name}.geodesic[0]"))?),
                p2: Vec2::from_array(point(&g[1], &format!("{name}.geodesic[1]"))?),
            })
        }
        other => Err(field_err(format!("{name}.kind"), format!("unknown disk kind `{other}`"))),
    }
}

impl Body {
    pub fn parse(text: &str) -> Result<Self, IoError> {
        let v: Value = serde_json::from_str(text)?;
        Self::from_value(&v)
    }

    pub fn from_value(v: &Value) -> Result<Self, IoError> {
        let obj = v.as_object().ok_or_else(|| field_err("<root>", "expected an object"))?;
        if let Some(ver) = obj.get("version") {
            if ver.as_str() != Some(FORMAT_VERSION) {
                return Err(field_err("version", format!("expected \"{FORMAT_VERSION}\", found {ver}")));
            }
        }
        let lambda = number(get(obj, "lambda")?, "lambda")?;
        if !(lambda > 0.0) {
            return Err(field_err("lambda", "must be positive"));
        }
        let dim = get(obj, "dim")?.as_u64().ok_or_else(|| field_err("dim", "expected 2 or 3"))?;
        match dim {
            3 => {
                let raw = list(get(obj, "centers")?, "centers")?;
                let centers = raw
                    .iter()
                    .enumerate()
                    .map(|(i, c)| point::<3>(c, &format!("centers[{i}]")).map(Vec3::from_array))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Body::Polytope { lambda, centers })
            }
            2 => {
                let curvature = match obj.get("curvature") {
                    None => 0,
                    Some(c) => match c.as_f64() {
                        Some(x) if x == -1.0 || x == 0.0 || x == 1.0 => x as i32,
                        _ => return Err(field_err("curvature", format!("expected -1, 0 or 1, found {c}"))),
                    },
                };
                let disks = match (obj.get("disks"), obj.get("centers")) {
                    (Some(d), _) => list(d, "disks")?
                        .iter()
                        .enumerate()
                        .map(|(i, d)| parse_disk(d, &format!("disks[{i}]")))
                        .collect::<Result<Vec<_>, _>>()?,
                    (None, Some(c)) => list(c, "centers")?
                        .iter()
                        .enumerate()
                        .map(|(i, c)| {
                            point::<2>(c, &format!("centers[{i}]")).map(|p| DiskSpec::Geodesic { center: Vec2::from_array(p) })
                        })
                        .collect::<Result<Vec<_>, _>>()?,
                    (None, None) => return Err(field_err("disks", "missing (or give `centers`)")),
                };
                Ok(Body::Polygon { lambda, curvature, disks })
            }
            d => Err(field_err("dim", format!("expected 2 or 3, found {d}"))),
        }
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self, IoError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| IoError::File { path: path.display().to_string(), source })?;
        Self::parse(&text)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<(), IoError> {
        let path = path.as_ref();
        fs::write(path, self.to_json_string()).map_err(|source| IoError::File { path: path.display().to_string(), source })
    }

    pub fn to_json(&self) -> Value {
        match self {
            Body::Polytope { lambda, centers } => json!({
                "version": FORMAT_VERSION,
                "lambda": lambda,
                "dim": 3,
                "centers": centers.iter().map(|c| c.to_array().to_vec()).collect::<Vec<_>>(),
            }),
            Body::Polygon { lambda, curvature, disks } => {
                if *curvature == 0 && disks.iter().all(|d| matches!(d, DiskSpec::Geodesic { .. })) {
                    let centers: Vec<Vec<f64>> = disks
                        .iter()
                        .map(|d| match d {
                            DiskSpec::Geodesic { center } => center.to_array().to_vec(),
                            _ => unreachable!(),
                        })
                        .collect();
                    return json!({ "version": FORMAT_VERSION, "lambda": lambda, "dim": 2, "centers": centers });
                }
                let disks: Vec<Value> = disks
                    .iter()
                    .map(|d| match d {
                        DiskSpec::Geodesic { center } => json!({ "kind": "geodesic", "center": center.to_array() }),
                        DiskSpec::Horo { ideal, level } => json!({ "kind": "horo", "ideal": ideal.to_array(), "level": level }),
                        DiskSpec::Equidistant { p1, p2 } => {
                            json!({ "kind": "equidistant", "geodesic": [p1.to_array(), p2.to_array()] })
                        }
                    })
                    .collect();
                json!({ "version": FORMAT_VERSION, "lambda": lambda, "dim": 2, "curvature": curvature, "disks": disks })
            }
        }
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("values serialize");
        s.push('\n');
        s
    }

    pub fn dim(&self) -> u32 {
        match self {
            Body::Polytope { .. } => 3,
            Body::Polygon { .. } => 2,
        }
    }

    pub fn from_polytope(k: &BallPolytope3) -> Self {
        Body::Polytope { lambda: k.lambda(), centers: k.centers().to_vec() }
    }

    pub fn from_polygon(p: &ArcPolygon2) -> Self {
        let disks = p
            .disks()
            .iter()
            .map(|d| match d.kind() {
                DiskKind::Euclidean { center, .. } | DiskKind::Geodesic { center, .. } => DiskSpec::Geodesic { center },
                DiskKind::Horodisk { ideal, level } => DiskSpec::Horo { ideal, level },
                DiskKind::Equidistant { .. } => {
                    let (p1, p2) = d.geodesic_points().expect("equidistant disks have a base geodesic");
                    DiskSpec::Equidistant { p1, p2 }
                }
            })
            .collect();
        Body::Polygon { lambda: p.lambda(), curvature: p.space().curvature as i32, disks }
    }

    pub fn polytope(&self) -> Result<BallPolytope3, IoError> {
        match self {
            Body::Polytope { lambda, centers } => Ok(BallPolytope3::build(*lambda, centers)?),
            Body::Polygon { .. } => Err(field_err("dim", "expected a 3-D body")),
        }
    }

    pub fn polygon(&self) -> Result<ArcPolygon2, IoError> {
        let Body::Polygon { lambda, curvature, disks } = self else {
            return Err(field_err("dim", "expected a 2-D body"));
        };
        let space = ModelSpace::plane(*curvature)?;
        let built = disks
            .iter()
            .enumerate()
            .map(|(i, d)| {
                match *d {
                    DiskSpec::Geodesic { center } => LambdaDisk2::ball(space, *lambda, center),
                    DiskSpec::Horo { ideal, level } => LambdaDisk2::horodisk(space, *lambda, ideal, level),
                    DiskSpec::Equidistant { p1, p2 } => LambdaDisk2::equidistant(space, *lambda, p1, p2),
                }
                .map_err(|e| field_err(format!("disks[{i}]"), e.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(build2(space, *lambda, &built)?)
    }
}
