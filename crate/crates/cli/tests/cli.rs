use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};
use std::io::Write;

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_circcodes"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn schema_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas").join(name)
}

fn assert_valid(schema: &str, doc: &Value) {
    let schema_doc: Value = serde_json::from_str(&fs::read_to_string(schema_path(schema)).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema_doc).expect("schema compiles");
    let errors: Vec<String> = validator.iter_errors(doc).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{schema}: {errors:?}\n{doc:#}");
}

/// Runs with `--out` into a temp file and returns the exit code and JSON.
fn run_out(args: &[&str]) -> (i32, Value) {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let mut full: Vec<&str> = args.to_vec();
    full.extend(["--out", out.to_str().unwrap()]);
    let o = run(&full);
    let text = fs::read_to_string(&out).unwrap_or_else(|_| panic!("no report for {args:?}: {o:?}"));
    (o.status.code().unwrap(), serde_json::from_str(&text).unwrap())
}

const B1: &str = "0,1,2,8,10,12,16,18,22,24,26,32,33,34";

#[test]
fn verify_known_identifying_code() {
    let o = run(&["verify", "--n", "40", "--gens", "1,4", "--kind", "id", "--inline", B1]);
    assert_eq!(o.status.code(), Some(0), "{o:?}");
}

#[test]
fn exact_prints_value() {
    let o = run(&["exact", "--n", "17", "--gens", "1,3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "11");
}

#[test]
fn verify_failure_reports_uncovered_vertex() {
    let (code, report) = run_out(&["verify", "--n", "40", "--gens", "1,4", "--kind", "sid", "--inline", "0"]);
    assert_eq!(code, 1);
    assert_eq!(report["witness"]["type"], "uncovered");
    assert_valid("verification-report.schema.json", &report);
}

#[test]
fn pair_and_twin_witnesses_match_schema() {
    let (code, report) = run_out(&["verify", "--n", "12", "--gens", "1,3", "--kind", "sid", "--inline", "0,1,2,3,7,8,9,10"]);
    assert_eq!(code, 1);
    assert_eq!(report["witness"]["type"], "pair");
    assert_valid("verification-report.schema.json", &report);
    let (code, report) = run_out(&["verify", "--n", "4", "--gens", "1,2", "--kind", "id", "--inline", "0,1"]);
    assert_eq!(code, 1);
    assert_eq!(report["witness"]["type"], "twins");
    assert_valid("verification-report.schema.json", &report);
    let (_, report) = run_out(&["verify", "--n", "40", "--gens", "1,4", "--kind", "id", "--inline", B1]);
    assert_valid("verification-report.schema.json", &report);
}

/// `construct` piped into `verify --code -`.
fn round_trip(family: &str, params: &[&str], kind: &str) {
    let mut args = vec!["construct", "--family", family];
    args.extend(params);
    let built = run(&args);
    assert_eq!(built.status.code(), Some(0), "{args:?}: {built:?}");
    let doc: Value = serde_json::from_slice(&built.stdout).unwrap();
    assert_valid("code-document.schema.json", &doc);
    let mut child = bin()
        .args(["verify", "--kind", kind, "--code", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(&built.stdout).unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stdout(&o));
}

#[test]
fn construct_then_verify_round_trips() {
    round_trip("id_square_mod40", &["--n", "80", "--d", "44"], "id");
    round_trip("id_square_mod20", &["--n", "40", "--d", "26"], "id");
    round_trip("ld_square_mod20", &["--n", "60", "--d", "45"], "ld");
    round_trip("ld_tri_mod57", &["--n", "114", "--d", "8"], "ld");
    round_trip("id_tri_6d", &["--d", "8"], "id");
    round_trip("ld_king_mod10", &["--n", "50", "--d", "8"], "ld");
    round_trip("id_king_appendix", &["--d", "21"], "id");
    round_trip("sid_square_even", &["--n", "26", "--d", "6"], "sid");
    round_trip("sid_tri_even", &["--n", "22", "--d", "5"], "sid");
    round_trip("sid_king_mod3", &["--n", "24", "--d", "4"], "sid");
    for n in 12..=20 {
        round_trip("sid_c13_optimal", &["--n", &n.to_string()], "sid");
    }
    round_trip("sid_c14_odd", &["--n", "17"], "sid");
    round_trip("sid_antipodal", &["--k", "16"], "sid");
}

#[test]
fn construction_report_matches_schema() {
    let (code, report) = run_out(&["construct", "--family", "sid_antipodal", "--k", "15"]);
    assert_eq!(code, 0);
    assert_eq!(report["claimed_size"], 20);
    assert_valid("construction.schema.json", &report);
}

#[test]
fn inapplicable_family_is_usage_error() {
    let o = run(&["construct", "--family", "ld_tri_mod57", "--n", "57", "--d", "9"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("d ≡ 8 (mod 57)"));
    let o = run(&["construct", "--family", "no_such_family"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["verify", "--n", "40", "--gens", "1,44", "--kind", "id", "--inline", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bound_report_matches_schema() {
    let (code, report) = run_out(&["bound", "--n", "40", "--gens", "1,4", "--kind", "id"]);
    assert_eq!(code, 0);
    assert_eq!(report["value"], 14);
    assert_eq!(report["provenance"], "grid-square");
    assert_valid("bound-report.schema.json", &report);
    let (_, report) = run_out(&["bound", "--n", "17", "--gens", "1,4", "--kind", "sid"]);
    assert_eq!(report["value"], 9);
    assert_eq!(report["exact"], false);
    assert_eq!(report["exact_value"]["value"], 10);
    assert_valid("bound-report.schema.json", &report);
}

#[test]
fn shape_shorthand_expands_generators() {
    let (_, a) = run_out(&["bound", "--n", "57", "--shape", "tri", "--d", "8", "--kind", "ld"]);
    let (_, b) = run_out(&["bound", "--n", "57", "--gens", "1,7,8", "--kind", "ld"]);
    assert_eq!(a, b);
    assert_eq!(a["value"], 13);
}

#[test]
fn solve_reports_optimum_and_budget() {
    let (code, report) = run_out(&["solve", "--n", "14", "--gens", "1,3", "--kind", "sid", "--deterministic"]);
    assert_eq!(code, 0);
    assert_eq!(report["size"], 8);
    assert_valid("solve-result.schema.json", &report);
    let (code, report) = run_out(&["solve", "--n", "14", "--gens", "1,3", "--kind", "sid", "--max-size", "7"]);
    assert_eq!(code, 3);
    assert_eq!(report["status"], "BUDGET_EXCEEDED");
    assert_valid("solve-result.schema.json", &report);
    let (code, report) = run_out(&["solve", "--n", "6", "--gens", "1,2,3", "--kind", "id"]);
    assert_eq!(code, 0);
    assert_eq!(report["status"], "INFEASIBLE");
    assert_valid("solve-result.schema.json", &report);
}

#[test]
fn solve_progress_lines_are_json() {
    let o = run(&["solve", "--n", "17", "--gens", "1,4", "--kind", "sid", "--progress", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let err = String::from_utf8_lossy(&o.stderr);
    let lines: Vec<&str> = err.lines().collect();
    assert!(!lines.is_empty());
    for line in lines {
        let v: Value = serde_json::from_str(line).unwrap();
        assert!(v["nodes"].is_u64() && v["bound"].is_u64());
    }
}

#[test]
fn lift_verifies_and_dumps_domain() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("domain.csv");
    let (code, report) = run_out(&[
        "lift", "--n", "40", "--d", "4", "--grid", "square", "--inline", B1, "--verify", "id",
        "--dump-domain", csv.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(report["density"], "7/20");
    assert_eq!(report["report"]["pass"], true);
    assert_valid("lift-report.schema.json", &report);
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,y,codeword"));
    let ones = lines.filter(|l| l.ends_with(",1")).count();
    assert!(ones > 0);
    let (code, report) = run_out(&["lift", "--n", "40", "--d", "4", "--grid", "square", "--inline", "0", "--verify", "ld"]);
    assert_eq!(code, 1);
    assert_valid("lift-report.schema.json", &report);
}

#[test]
fn residue_form_documents_are_expanded() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d1.json");
    let doc = format!(r#"{{"n":80,"gens":[1,44],"period":40,"residues":[{B1}]}}"#);
    assert_valid("code-document.schema.json", &serde_json::from_str(&doc).unwrap());
    fs::write(&path, doc).unwrap();
    let o = run(&["verify", "--kind", "id", "--code", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("28 codewords"));
}

#[test]
fn exact_report_and_inapplicable_graph() {
    let (code, report) = run_out(&["exact", "--n", "34", "--gens", "1,17"]);
    assert_eq!(code, 0);
    assert_eq!(report["value"], 24);
    assert_valid("exact-report.schema.json", &report);
    let o = run(&["exact", "--n", "11", "--gens", "1,3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn missing_flags_are_usage_errors() {
    assert_eq!(run(&["verify", "--n", "10", "--kind", "id", "--inline", "0"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--n", "10", "--gens", "1", "--kind", "xx", "--inline", "0"]).status.code(), Some(2));
    assert_eq!(run(&["solve", "--n", "10", "--gens", "1,2", "--kind", "id", "--time-limit", "-1"]).status.code(), Some(2));
    assert_eq!(run(&["sweep", "--suite", "nope"]).status.code(), Some(2));
}

#[test]
fn sweep_report_matches_schema() {
    let (code, report) = run_out(&["sweep", "--suite", "paper-acceptance", "--jobs", "2"]);
    assert_valid("sweep-report.schema.json", &report);
    let pass = report["pass"].as_bool().unwrap();
    assert_eq!(code, if pass { 0 } else { 1 });
    assert_eq!(report["criteria"].as_array().unwrap().len(), 8);
}
