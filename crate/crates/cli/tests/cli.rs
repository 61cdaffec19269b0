use std::path::Path;
use std::process::{Command, Output};

use povm_quant::finite::{gram_probabilities, random_resolving_family};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

fn povmq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_povmq"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn check<'a>(report: &'a Value, id: &str) -> &'a Value {
    report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["id"] == id)
        .unwrap_or_else(|| panic!("missing check {id}"))
}

fn write_table(dir: &Path, name: &str, points: usize, seed: u64) -> std::path::PathBuf {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (family, measure) = random_resolving_family(2, points, false, &mut rng).unwrap();
    let table = gram_probabilities(&family, &measure).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string(&table).unwrap()).unwrap();
    path
}

#[test]
fn circle_eigenvalues() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("circle.json");
    let o = povmq(&["verify", "circle", "--r", "0.8", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let report = read_json(&out);
    assert_eq!(report["suite"], "circle");
    let c = check(&report, "circle.angle.eigenvalues.r=0.8");
    let v: Vec<f64> = c["computed"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert!((v[0] - 2.7416).abs() < 1e-4 && (v[1] - 3.5416).abs() < 1e-4);
    for key in ["id", "paper_anchor", "computed", "expected", "tol", "pass"] {
        assert!(c.get(key).is_some(), "{key}");
    }
}

#[test]
fn sphere_uniform_at_zero_radius() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sphere.json");
    let o = povmq(&["verify", "sphere", "--r", "0", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let report = read_json(&out);
    for p in check(&report, "sphere.prob.kernel")["computed"].as_array().unwrap() {
        assert_eq!(p.as_f64().unwrap(), 0.5);
    }
    assert_eq!(check(&report, "sphere.prob.uniform")["pass"], true);
}

#[test]
fn plane_purity() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("plane.json");
    let o = povmq(&["verify", "plane", "--t", "0.3", "--dim", "48", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let c = check(&read_json(&out), "plane.purity.t=0.3.dim=48").clone();
    assert!((c["computed"].as_f64().unwrap() - 0.538_461_538).abs() < 1e-9);
}

#[test]
fn reports_are_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let o = povmq(&["verify", "finite", "--seed", "3", "--format", "csv", "--out", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    let (a, b) = (std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
    assert_eq!(a, b);
    assert!(String::from_utf8(a).unwrap().starts_with("suite,id,paper_anchor,computed,expected,tol,pass"));
}

#[test]
fn exit_codes_for_verify() {
    assert_eq!(povmq(&["verify", "torus"]).status.code(), Some(2));
    assert_eq!(povmq(&["verify", "circle", "--r", "1.5"]).status.code(), Some(2));
    assert_eq!(povmq(&["verify", "halfplane", "--t", "0"]).status.code(), Some(2));
    assert_eq!(povmq(&["verify", "circle", "--tol", "1e-300"]).status.code(), Some(1));

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"r": 0.5, "radius": 2}"#).unwrap();
    assert_eq!(povmq(&["verify", "circle", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
    std::fs::write(&cfg, r#"{"r": 0.5}"#).unwrap();
    let out = dir.path().join("c.json");
    let o = povmq(&["verify", "circle", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(read_json(&out)["params"]["r"], 0.5);
}

#[test]
fn reconstruct_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let table = write_table(dir.path(), "t4.json", 4, 11);
    let out = dir.path().join("sol.json");
    let o = povmq(&["reconstruct", table.to_str().unwrap(), "--seed", "1", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let sol = read_json(&out);
    assert_eq!(sol["status"], "solved");
    assert!(sol["solution"]["residual"].as_f64().unwrap() < 1e-8);
    assert_eq!(sol["solution"]["family"].as_array().unwrap().len(), 4);
}

#[test]
fn reconstruct_rejects_bad_tables() {
    let dir = tempfile::tempdir().unwrap();
    let table = write_table(dir.path(), "t3.json", 3, 5);
    let mut v = read_json(&table);
    v["p"][0] = Value::from(v["p"][0].as_f64().unwrap() + 0.1);
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, v.to_string()).unwrap();
    assert_eq!(povmq(&["reconstruct", bad.to_str().unwrap()]).status.code(), Some(2));

    let seven = write_table(dir.path(), "t7.json", 7, 9);
    let o = povmq(&["reconstruct", seven.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("allowed"));

    let missing = dir.path().join("missing.json");
    assert_eq!(povmq(&["reconstruct", missing.to_str().unwrap()]).status.code(), Some(2));
}
