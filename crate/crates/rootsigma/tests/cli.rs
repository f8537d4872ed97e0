use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rootsigma::datum_file;
use rootsigma_core::root_datum::fixtures;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_rootsigma"));
    c.env_remove(datum_file::FIXTURE_DIR_VAR);
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

#[test]
fn bundled_files_match_builtin_fixtures() {
    for (name, d) in fixtures::all() {
        let (raw, n) = datum_file::read_file(&fixture_dir().join(format!("{name}.toml"))).unwrap();
        assert_eq!(raw, d.to_raw(), "{name}");
        assert_eq!(n, name);
    }
}

#[test]
fn order_dot_has_36_nodes() {
    let o = run(&["order", "doubled_a2", "--dot"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.starts_with("digraph"));
    assert_eq!(s.lines().filter(|l| l.contains("[label=")).count(), 36);
}

#[test]
fn basepoint_is_member() {
    // Ω_{P,P} for the q-extreme P1 of doubled A1 is the ray (1/2, -1/2) + t(1, -1).
    let o = run(&["domains", "doubled_a1", "1", "--lambda", "1/2,-1/2"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("member: true"));
    let o = run(&["domains", "doubled_a1", "1", "--lambda", "-1/2,1/2"]);
    assert!(stdout(&o).contains("member: false"));
}

#[test]
fn check_doubled_a1_emits_certificates() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("certs.json");
    let o = run(&["check", "doubled_a1", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["schema"], "rootsigma.certificates");
    assert_eq!(v["version"], 1);
    let certs = v["certificates"].as_array().unwrap();
    assert!(certs.len() >= 15);
    assert!(certs.iter().all(|c| c["status"] == "pass" && c.get("counterexample").is_none()));
}

#[test]
fn check_output_is_deterministic() {
    let a = stdout(&run(&["check", "split_a2", "--format", "json"]));
    let b = stdout(&run(&["check", "split_a2", "--format", "json"]));
    assert_eq!(a, b);
}

#[test]
fn corrupted_datum_fails_with_status_one() {
    let dir = tempfile::tempdir().unwrap();
    let mut raw = fixtures::doubled_a1().to_raw();
    raw.mult[0] = 3;
    let path = dir.path().join("bad.toml");
    std::fs::write(&path, datum_file::to_toml(&raw, None)).unwrap();
    let p = path.to_str().unwrap();
    let o = run(&["check", p]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL  validate"));
    assert_eq!(run(&["validate", p]).status.code(), Some(1));
    assert_eq!(run(&["parabolics", p]).status.code(), Some(1));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["parabolics", "no_such_datum"]).status.code(), Some(2));
    assert_eq!(run(&["cones", "doubled_a1", "99"]).status.code(), Some(2));
    assert_eq!(run(&["order", "doubled_a1", "--format", "csv"]).status.code(), Some(2));
    assert_eq!(run(&["domains", "doubled_a1", "1", "--lambda", "0.5,1"]).status.code(), Some(2));
    assert_eq!(run(&["rankone", "cfun"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn fixture_dir_override() {
    let dir = tempfile::tempdir().unwrap();
    let raw = fixtures::split_a1().to_raw();
    std::fs::write(dir.path().join("custom.toml"), datum_file::to_toml(&raw, Some("custom"))).unwrap();
    let o = bin().env(datum_file::FIXTURE_DIR_VAR, dir.path()).args(["parabolics", "custom"]).output().unwrap();
    assert!(o.status.success());
    assert!(stdout(&o).contains("datum: custom"));
    let o = bin().env(datum_file::FIXTURE_DIR_VAR, dir.path()).args(["fixtures"]).output().unwrap();
    assert!(stdout(&o).lines().any(|l| l == "custom"));
}

#[test]
fn fixtures_emit_round_trips() {
    let o = run(&["fixtures", "--emit", "split_bc1"]);
    let (raw, name) = datum_file::from_toml(&stdout(&o)).unwrap();
    assert_eq!(raw, fixtures::split_bc1().to_raw());
    assert_eq!(name.as_deref(), Some("split_bc1"));
}

#[test]
fn parabolic_by_vector() {
    let by_index = stdout(&run(&["cones", "doubled_a1", "2"]));
    let by_vector = stdout(&run(&["cones", "doubled_a1", "3,-1"]));
    assert_eq!(by_index, by_vector);
    assert_eq!(run(&["cones", "doubled_a1", "1,0"]).status.code(), Some(2));
}

#[test]
fn json_outputs_are_versioned() {
    for args in [
        &["parabolics", "doubled_a1"][..],
        &["order", "doubled_a1"],
        &["chambers", "split_a2"],
        &["cones", "doubled_a2", "0"],
        &["domains", "doubled_a2", "0"],
        &["hull", "doubled_a2", "0"],
        &["validate", "split_bc1"],
        &["rankone", "hcheck"],
    ] {
        let mut a = args.to_vec();
        a.extend(["--format", "json"]);
        let o = run(&a);
        assert!(o.status.success(), "{args:?}");
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(v["version"], 1, "{args:?}");
        assert!(v["schema"].as_str().unwrap().starts_with("rootsigma."));
    }
}

#[test]
fn chambers_report_bijection() {
    let v: serde_json::Value =
        serde_json::from_str(&stdout(&run(&["chambers", "doubled_a2", "--format", "json"]))).unwrap();
    assert_eq!(v["chambers"].as_array().unwrap().len(), 6);
    assert_eq!(v["script_w"].as_array().unwrap().len(), 1);
    for q in v["bijection"].as_array().unwrap() {
        let mut img: Vec<u64> = q["images"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
        let cone: Vec<u64> = q["chambers"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
        img.sort();
        assert_eq!(img, cone);
    }
}

#[test]
fn csv_exports() {
    let s = stdout(&run(&["cones", "doubled_a2", "0", "--format", "csv"]));
    assert!(s.starts_with("cone,representation"));
    let s = stdout(&run(&["hull", "doubled_a2", "0", "--format", "csv"]));
    assert!(s.starts_with("bound,normal"));
    let o = run(&["rankone", "asymptotic", "--block", "1,0:0.5:2", "--t-max", "1e4", "--format", "csv"]);
    let s = stdout(&o);
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(lines[0], "t,value,scaled,drift");
    assert_eq!(lines.len(), 4);
}

#[test]
fn rankone_cfun_from_datum() {
    let o = run(&["rankone", "cfun", "doubled_a1", "1", "0", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let c = v["value"].as_f64().unwrap();
    assert!((c - std::f64::consts::PI).abs() < 1e-8);
    // λ outside the convergence region.
    let o = run(&["rankone", "cfun", "doubled_a1", "1", "0", "--lambda", "-1/2,1/2"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("λ in convergence region: false"));
    assert!(stdout(&o).contains("c: divergent"));
}
