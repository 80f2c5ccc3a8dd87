use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn lch(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lch")).args(args).output().expect("binary runs")
}

fn lch_env(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lch")).args(args).env("LCH_THREADS", threads).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn value_of(text: &str, key: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix(' ')))
        .unwrap_or_else(|| panic!("no `{key}` in\n{text}"))
        .parse()
        .unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn lens_volume_from_surface_area() {
    let o = lch(&["lens", "--dim", "3", "--surface-area", "6.283185307", "--lambda", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v = value_of(&stdout(&o), "volume");
    assert!((v - 1.308997).abs() < 5e-7, "{v}");
    assert!((v - 5.0 * PI / 12.0).abs() < 1e-9);
}

#[test]
fn planar_lens_from_perimeter() {
    let o = lch(&["lens", "--dim", "2", "--surface-area", &PI.to_string()]);
    assert_eq!(o.status.code(), Some(0));
    assert!((value_of(&stdout(&o), "area") - (PI / 2.0 - 1.0)).abs() < 1e-15);
}

#[test]
fn lens_needs_exactly_one_size() {
    assert_eq!(lch(&["lens", "--dim", "3"]).status.code(), Some(2));
    assert_eq!(lch(&["lens", "--surface-area", "1", "--inradius", "0.1"]).status.code(), Some(2));
    assert_eq!(lch(&["lens", "--dim", "4", "--inradius", "0.1"]).status.code(), Some(2));
}

#[test]
fn verify_gb_on_a_lens() {
    let dir = tempfile::tempdir().unwrap();
    let c = (PI / 3.0).cos();
    let f = write(dir.path(), "lens.json", &format!(r#"{{"version":"lch-1","lambda":1,"dim":3,"centers":[[0,0,{c}],[0,0,{}]]}}"#, -c));
    let o = lch(&["verify", "gb", &f]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["grand_total"].as_f64().unwrap() - 4.0 * PI).abs() < 1e-12);
    assert!(v["vertex_total"].as_f64().unwrap().abs() < 1e-15);

    let o = lch(&["measure", &f, "--json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["volume"].as_f64().unwrap() - 5.0 * PI / 12.0).abs() < 1e-12);
    assert!((v["gauss_bonnet"]["facet_total"].as_f64().unwrap() - 2.0 * PI).abs() < 1e-12);
}

#[test]
fn generated_bodies_pass_every_check() {
    let dir = tempfile::tempdir().unwrap();
    let k = dir.path().join("k.json");
    let k = k.to_str().unwrap();
    let o = lch(&["gen", "--m", "7", "--inradius", "0.35", "--seed", "11", "-o", k]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    for check in ["rip", "inradius", "gb", "keyclaim"] {
        let o = lch(&["verify", check, k]);
        assert_eq!(o.status.code(), Some(0), "{check}: {}", stdout(&o));
        let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(v["passed"], Value::Bool(true));
    }
    let m: Value = serde_json::from_str(&stdout(&lch(&["measure", k, "--json"]))).unwrap();
    assert!((m["inradius"].as_f64().unwrap() - 0.35).abs() < 1e-10);

    let p = dir.path().join("p.json");
    let p = p.to_str().unwrap();
    let o = lch(&["gen", "--dim", "2", "--curvature", "-1", "--lambda", "0.5", "--m", "6", "--inradius", "0.3", "-o", p]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = lch(&["verify", "inradius", p]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let m: Value = serde_json::from_str(&stdout(&lch(&["measure", p, "--json"]))).unwrap();
    assert!((m["total_turning"].as_f64().unwrap() - 2.0 * PI).abs() < 1e-9);
}

#[test]
fn planar_checks() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "tri.json", r#"{"lambda":1,"dim":2,"centers":[[0.3,0],[-0.15,0.26],[-0.15,-0.26]]}"#);
    for check in ["rip2d", "goal2d", "inradius"] {
        let o = lch(&["verify", check, &f]);
        assert_eq!(o.status.code(), Some(0), "{check}: {}{}", stdout(&o), stderr(&o));
    }
    let o = lch(&["verify", "rip", &f]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn erosion_csv() {
    let dir = tempfile::tempdir().unwrap();
    let k = dir.path().join("k.json");
    let csv = dir.path().join("e.csv");
    lch(&["gen", "--m", "5", "--inradius", "0.3", "-o", k.to_str().unwrap()]);
    let o = lch(&["erode", k.to_str().unwrap(), "--steps", "10", "--csv", csv.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = fs::read_to_string(csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,area"));
    let rows: Vec<(f64, f64)> = lines
        .map(|l| {
            let (t, a) = l.split_once(',').unwrap();
            (t.parse().unwrap(), a.parse().unwrap())
        })
        .collect();
    assert!(rows.len() >= 10);
    assert_eq!(rows[0].0, 0.0);
    assert!(rows.windows(2).all(|w| w[1].0 > w[0].0 && w[1].1 <= w[0].1 + 1e-12));
}

#[test]
fn sweep_reports_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let c = dir.path().join("c.csv");
    let oa = lch(&["sweep", "--trials", "5", "--seed", "1", "--report", a.to_str().unwrap()]);
    let ob = lch(&["sweep", "--trials", "5", "--seed", "1", "--report", b.to_str().unwrap()]);
    let oc = lch_env(&["sweep", "--trials", "5", "--seed", "1", "--report", c.to_str().unwrap()], "3");
    assert_eq!(oa.status.code(), Some(0));
    assert_eq!(ob.status.code(), Some(0));
    assert_eq!(oc.status.code(), Some(0));
    let bytes = fs::read(&a).unwrap();
    assert_eq!(bytes, fs::read(&b).unwrap());
    assert_eq!(bytes, fs::read(&c).unwrap());
    assert_eq!(String::from_utf8(bytes).unwrap().lines().count(), 6);
}

#[test]
fn planar_sweep_on_the_sphere() {
    let o = lch(&["sweep", "--trials", "40", "--dim", "2", "--curvature", "1", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(value_of(&stdout(&o), "violations"), 0.0);
}

#[test]
fn malformed_input_exits_2_naming_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("syntax.json", "{\"lambda\": 1,", "malformed JSON"),
        ("lambda.json", r#"{"lambda":"one","dim":3,"centers":[]}"#, "lambda"),
        ("coord.json", r#"{"lambda":1,"dim":3,"centers":[[0,0,0],[1,0]]}"#, "centers[1]"),
        ("num.json", r#"{"lambda":1,"dim":3,"centers":[[0,0,"x"]]}"#, "centers[0][2]"),
        ("kind.json", r#"{"lambda":1,"dim":2,"curvature":-1,"disks":[{"kind":"blob"}]}"#, "disks[0].kind"),
        ("ideal.json", r#"{"lambda":1,"dim":2,"curvature":-1,"disks":[{"kind":"horo"}]}"#, "disks[0].ideal"),
        ("version.json", r#"{"version":"lch-9","lambda":1,"dim":3,"centers":[[0,0,0]]}"#, "version"),
    ];
    for (name, text, needle) in cases {
        let f = write(dir.path(), name, text);
        let o = lch(&["measure", &f]);
        assert_eq!(o.status.code(), Some(2), "{name}");
        assert!(stderr(&o).contains(needle), "{name}: {}", stderr(&o));
    }
    let o = lch(&["measure", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unknown_arguments_exit_2_and_help_exits_0() {
    assert_eq!(lch(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(lch(&["verify", "nothing", "x.json"]).status.code(), Some(2));
    assert_eq!(lch(&["--help"]).status.code(), Some(0));
}

#[test]
fn spindle_and_asymptotic_comparison() {
    let o = lch(&["spindle", "--dim", "3", "--h1", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!((value_of(&stdout(&o), "volume") - 4.0 * PI / 3.0).abs() < 1e-12);

    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("cmp.csv");
    let o = lch(&["compare-asymptotic", "--n-min", "4", "--n-max", "20", "--h1", "0.3", "--csv", csv.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(csv).unwrap();
    assert_eq!(text.lines().next(), Some("n,h1,h2,area,V_lens,V_spindle,gap"));
    assert_eq!(text.lines().count(), 1 + 9);
    for line in text.lines().skip(1) {
        let f: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        assert!(f[4] < f[5], "{line}");
    }
}
