mod common;

use std::path::{Path, PathBuf};

use common::{EXAMPLE_TEN, FIG1_MIDDLE, FIG1_RIGHT};
use roommates::cli::format::parse_instance;
use roommates::cli::run_with;
use serde_json::Value;
use tempfile::TempDir;

struct Run {
    code: i32,
    out: String,
    err: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.out).unwrap_or_else(|e| panic!("not JSON ({e}): {}", self.out))
    }
}

fn run(args: &[&str]) -> Run {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_with(std::iter::once("roommates").chain(args.iter().copied()), &mut out, &mut err);
    Run { code, out: String::from_utf8(out).unwrap(), err: String::from_utf8(err).unwrap() }
}

fn file(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn solve_egal_found_and_not_found() {
    let dir = TempDir::new().unwrap();
    let input = file(&dir, "middle.sr", FIG1_MIDDLE);
    let r = run(&["solve", "egal", s(&input), "--gamma", "2"]);
    assert_eq!(r.code, 0, "{}", r.err);
    let v = r.json();
    assert_eq!(v["status"], "found");
    assert_eq!(v["cost"], 2);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["matching"], serde_json::json!([["1", "2"], ["3", "4"]]));

    let r = run(&["solve", "egal", s(&input), "--gamma", "1"]);
    assert_eq!(r.code, 1);
    assert_eq!(r.json()["status"], "not_found");
}

#[test]
fn solve_egal_with_constant_cost_and_random_family() {
    let dir = TempDir::new().unwrap();
    let input = file(&dir, "middle.sr", FIG1_MIDDLE);
    let r = run(&["solve", "egal", s(&input), "--gamma", "2", "--cost-model", "const:1", "--optimal"]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert_eq!(r.json()["cost"], 2);
    let r = run(&["solve", "egal", s(&input), "--gamma", "2", "--family", "random:300", "--seed", "5"]);
    assert_eq!(r.code, 0, "{}", r.err);
}

#[test]
fn zero_cost_model_has_no_solver() {
    let dir = TempDir::new().unwrap();
    let input = file(&dir, "middle.sr", FIG1_MIDDLE);
    let r = run(&["solve", "egal", s(&input), "--gamma", "2", "--cost-model", "zero"]);
    assert_eq!(r.code, 2);
    assert!(r.err.contains("zero"));
    let r = run(&["oracle", "egal", s(&input), "--cost-model", "zero"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json()["cost"], 0);
}

#[test]
fn oracle_finds_no_stable_matching_on_the_right_profile() {
    let dir = TempDir::new().unwrap();
    let input = file(&dir, "right.sr", FIG1_RIGHT);
    let r = run(&["oracle", "stable-all", s(&input)]);
    assert_eq!(r.code, 0);
    let v = r.json();
    assert_eq!(v["count"], 0);
    assert_eq!(v["matchings"], serde_json::json!([]));
    assert_eq!(run(&["oracle", "mbp", s(&input)]).json()["value"], 1);
    assert_eq!(run(&["oracle", "mba", s(&input)]).json()["value"], 2);
}

#[test]
fn blocking_solvers_report_certificates() {
    let dir = TempDir::new().unwrap();
    let input = file(&dir, "right.sr", FIG1_RIGHT);
    let r = run(&["solve", "mbp", s(&input), "--max-bp", "1"]);
    assert_eq!(r.code, 0, "{}", r.err);
    let v = r.json();
    assert_eq!(v["value"], 1);
    assert_eq!(v["blocking_pairs"].as_array().unwrap().len(), 1);
    assert_eq!(run(&["solve", "mbp", s(&input), "--max-bp", "0"]).code, 1);
    let r = run(&["solve", "mba", s(&input), "--max-ba", "2"]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert_eq!(r.json()["value"], 2);
}

#[test]
fn generated_mcis_instance_records_its_budget() {
    let dir = TempDir::new().unwrap();
    let graph = file(&dir, "g.col", "classes 2\nclass 1 p q r\nclass 2 s t u\nedge p s\n");
    let out = dir.path().join("out.sr");
    let r = run(&["gen", "mcis-mbp", s(&graph), "-o", s(&out)]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert_eq!(r.json()["output"], s(&out));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.lines().any(|l| l.trim() == "# beta = 4"), "{text}");
    let p = parse_instance(&text).unwrap();
    assert!(p.is_tie_free());
    assert!(p.lists().iter().all(|l| l.len() <= 5));
}

#[test]
fn other_generators_write_instances() {
    let dir = TempDir::new().unwrap();
    let cnf = file(&dir, "f.cnf", "p cnf 3 4\n1 2 3 0\n1 -2 -3 0\n-1 2 -3 0\n-1 -2 3 0\n");
    let r = run(&["gen", "sat3-egal", s(&cnf)]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert_eq!(parse_instance(&r.out).unwrap().n(), 65);
    assert!(r.out.contains("# gamma = 0"));

    let graph = file(&dir, "g.col", "vertices a b c\nedge a b\n");
    let r = run(&["gen", "is-const", s(&graph), "--k", "2", "--c", "1"]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert_eq!(parse_instance(&r.out).unwrap().n(), 3 + 1 + 2 * 3);
}

#[test]
fn reports_are_reproducible() {
    let dir = TempDir::new().unwrap();
    let input = file(&dir, "ten.sr", EXAMPLE_TEN);
    let strip = |r: Run| {
        let mut v = r.json();
        v.as_object_mut().unwrap().remove("elapsed_ms");
        serde_json::to_string(&v).unwrap()
    };
    let args = ["solve", "egal", s(&input), "--gamma", "9", "--seed", "4"];
    assert_eq!(strip(run(&args)), strip(run(&args)));
}

#[test]
fn usage_and_input_errors_exit_with_two() {
    assert_eq!(run(&["solve"]).code, 2);
    assert_eq!(run(&["frobnicate"]).code, 2);
    let dir = TempDir::new().unwrap();
    let bad = file(&dir, "bad.sr", "agents 1 2\nprefs 1: 3\nprefs 2: 1\n");
    let r = run(&["phase1", s(&bad)]);
    assert_eq!(r.code, 2);
    assert!(r.err.contains('3'), "{}", r.err);
    let missing = dir.path().join("missing.sr");
    assert_eq!(run(&["phase1", s(&missing)]).code, 2);
}

#[test]
fn kernelize_and_phase1_reports() {
    let dir = TempDir::new().unwrap();
    let input = file(&dir, "ten.sr", EXAMPLE_TEN);
    let out = dir.path().join("kernel.sr");
    let r = run(&["kernelize", s(&input), "--gamma", "8", "-o", s(&out)]);
    assert_eq!(r.code, 0, "{}", r.err);
    let v = r.json();
    assert_eq!(v["status"], "kernel");
    assert_eq!(v["gamma_hat"], 6);
    assert_eq!(v["over_budget"], serde_json::json!([["1", "8"], ["1", "9"]]));
    assert_eq!(parse_instance(&std::fs::read_to_string(&out).unwrap()).unwrap().n(), v["agents"].as_u64().unwrap() as usize);

    let r = run(&["kernelize", s(&input), "--gamma", "1"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json()["status"], "trivial_no");

    let v = run(&["phase1", s(&input)]).json();
    assert_eq!(v["marked_agents"], serde_json::json!(["4", "9"]));
    assert_eq!(v["fixed_pairs"], serde_json::json!([["5", "10"]]));
}
