use std::path::Path;
use std::process::{Command, Output};

use chgeom::isometry::reflection;
use chgeom::pentagons::PentagonModuli;
use chgeom::sample::random_scoords;
use chgeom::triples::{triple_from_coords, Sheet};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

fn chg(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chg"))
        .args(args)
        .current_dir(dir)
        .env_remove("CHG_TOL")
        .output()
        .expect("binary runs")
}

fn ok_json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn f(v: &Value) -> f64 {
    v.as_f64().expect("number")
}

#[test]
fn fixture_values_and_number_format() {
    let dir = tempfile::tempdir().unwrap();
    let out = chg(&["fixture", "spherical-bend"], dir.path());
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    assert!(text.contains(r#""z":[1.2500000000000000e-1,0.0000000000000000e0]"#), "{text}");
    let v = ok_json(&out);
    assert!((f(&v["ta_p2_p3"]) - 81.0 / 64.0).abs() < 1e-12);
    assert!((f(&v["ta_p2_prime_p3"]) - 9.0 / 16.0).abs() < 1e-12);
    assert!((f(&v["ta_p1_p2"]) + 9.0 / 16.0).abs() < 1e-12);
    assert_eq!(v["line_p2_p3"], "Hyperbolic");
    assert_eq!(v["line_p2_prime_p3"], "Spherical");
    // byte-stable
    assert_eq!(chg(&["fixture", "spherical-bend"], dir.path()).stdout, out.stdout);
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(chg(&["bogus"], dir.path()).status.code(), Some(2));
    assert_eq!(chg(&["invariants", "--points", "missing.json"], dir.path()).status.code(), Some(2));
    std::fs::write(dir.path().join("bad.json"), "{not json").unwrap();
    assert_eq!(chg(&["pentagon", "verify", "bad.json"], dir.path()).status.code(), Some(2));
}

#[test]
fn domain_errors_exit_with_one_and_name_the_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = chg(&["pentagon", "new", "--delta", "0", "--moduli", "-1.5,2.5,1.8,1.2,0.3"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("InadmissibleModuli"));
    let mut r = ChaCha8Rng::seed_from_u64(1);
    let p = chgeom::sample::random_point(&mut r);
    std::fs::write(dir.path().join("r.json"), serde_json::to_string(&reflection(&p)).unwrap()).unwrap();
    let out = chg(&["decompose", "--isometry", "r.json"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("TraceMinusOne"));
}

#[test]
fn pentagon_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    for (seed, name) in [("3", "a.json"), ("4", "b.json")] {
        let out = chg(&["--seed", seed, "pentagon", "new", "--delta", "2", "--out", name], d);
        assert!(out.status.success());
    }
    let again = chg(&["--seed", "3", "pentagon", "new", "--delta", "2"], d);
    assert_eq!(again.stdout, std::fs::read(d.join("a.json")).unwrap());
    let v = ok_json(&chg(&["pentagon", "verify", "a.json"], d));
    assert_eq!(v["delta"]["k"], 2);
    assert_eq!(v["sign_law"], true);
    assert_eq!(v["real"], false);
    assert!(f(&v["relation_residual"]) < 1e-9);
    let v = ok_json(&chg(&["pentagon", "connect", "a.json", "b.json"], d));
    assert!(v["moves"].as_u64().unwrap() <= 6);
    assert!(f(&v["mismatch"]) < 1e-7);
    let m = PentagonModuli::with_t(-1.5, 2.5, 1.8, Sheet::Above).unwrap();
    let arg = format!("{:e},{:e},{:e},{:e},0.3", m.t1, m.t2, m.t4, m.t);
    let m = ok_json(&chg(&["pentagon", "new", "--delta", "1", "--moduli", &arg], d));
    assert_eq!(m["points"][0]["sign"], 1);
}

#[test]
fn tolerance_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert!(chg(&["--seed", "5", "pentagon", "new", "--delta", "0", "--out", "p.json"], d).status.success());
    let strict = Command::new(env!("CARGO_BIN_EXE_chg"))
        .args(["pentagon", "verify", "p.json"])
        .current_dir(d)
        .env("CHG_TOL", "1e-300")
        .output()
        .unwrap();
    assert_eq!(strict.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&strict.stderr).contains("NotAPentagon"));
}

#[test]
fn triple_verbs() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let mut r = ChaCha8Rng::seed_from_u64(9);
    let c = random_scoords(&mut r, [1, -1, -1], false);
    let t = triple_from_coords(&c).unwrap();
    std::fs::write(d.join("t.json"), serde_json::to_string(&t).unwrap()).unwrap();
    std::fs::write(d.join("f.json"), serde_json::to_string(&t.product()).unwrap()).unwrap();
    std::fs::write(d.join("pair.json"), serde_json::to_string(&[t.p2, t.p3]).unwrap()).unwrap();

    let v = ok_json(&chg(&["invariants", "--points", "t.json"], d));
    assert!((f(&v["t"]) - c.t).abs() < 1e-9);
    assert!((f(&v["alpha"]) - c.alpha).abs() < 1e-9);
    assert_eq!(v["sigma"], serde_json::json!([1, -1, -1]));

    let v = ok_json(&chg(&["decompose", "--isometry", "f.json"], d));
    assert!(f(&v["residual"]) < 1e-9);
    assert_eq!(v["triple"].as_array().unwrap().len(), 3);

    let v = ok_json(&chg(&["--steps", "2000", "bend", "--pair", "pair.json", "--s", "-0.7", "--follow"], d));
    assert!(f(&v["product_residual"]) < 1e-9);
    assert!(f(&v["follow_residual"]) < 1e-6);

    let v = ok_json(&chg(&["holonomy", "probe", "--triple", "t.json", "--samples", "8", "--csv", "h.csv"], d));
    assert_eq!(v["dimension"], 2);
    let csv = std::fs::read_to_string(d.join("h.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("index,c1,c2,off"));
    assert_eq!(lines.count() as u64, v["samples"].as_u64().unwrap());
}
