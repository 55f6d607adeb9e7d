use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_simplexlab")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn apex_file(dir: &tempfile::TempDir, last: &str) -> String {
    let p = dir.path().join(format!("apex{}.txt", last.replace(' ', "_")));
    fs::write(&p, format!("# apex simplex\n0 0 0 0\n1 0 0 0\n0 1 0 0\n0 0 1 0\n{last}\n")).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn empty_exit_codes() {
    let o = run(&["empty", "--det", "5", "--gen", "1,2,3,4"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "empty");

    let o = run(&["empty", "--det", "5", "--gen", "1,1,1,1"]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout(&o).trim(), "not empty; witness k=1 point (1/5,1/5,1/5,1/5)");

    assert_eq!(code(&run(&["empty", "--det", "5", "--gen", "5,10,0,0"])), 2);
    assert_eq!(code(&run(&["empty", "--det", "5", "--gen", "1,2,x,4"])), 2);
    assert_eq!(code(&run(&["empty"])), 2);
    assert_eq!(code(&run(&["empty", "--det", "5", "--gen", "-1,-2,-3,-4"])), 0);
}

#[test]
fn width_reports() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["width", "--vertices", &apex_file(&dir, "6 14 17 101")]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("width 4\n"), "{}", stdout(&o));

    let o = run(&["width", "--vertices", &apex_file(&dir, "6 14 17 65")]);
    assert!(stdout(&o).starts_with("width 3\n"));

    let o = run(&["width", "--det", "1", "--gen", "0,0,0,0"]);
    assert!(stdout(&o).starts_with("width 1\n"));

    let o = run(&["width", "--det", "5", "--gen", "1,2,3,4"]);
    assert!(stdout(&o).starts_with("width 1\nfunctional (0,1,1,0)\n"));

    assert_eq!(code(&run(&["width", "--vertices", &apex_file(&dir, "1 1 1 0")])), 2);
    assert_eq!(code(&run(&["width", "--vertices", "/nonexistent/file"])), 2);
}

#[test]
fn canon_and_group() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["canon", "--vertices", &apex_file(&dir, "6 14 17 101")]);
    assert!(stdout(&o).contains("canonical N=101 (1,36,84,87,95)"));
    let o = run(&["canon", "--det", "101", "--gen", "1,36,84,87"]);
    assert!(stdout(&o).contains("canonical N=101 (1,36,84,87,95)"));

    let o = run(&["group", "--det", "5", "--gen", "1,2,3,4"]);
    assert_eq!(stdout(&o).trim(), "group (5) order 5 cyclic");
    let o = run(&["group", "--denom", "3", "--lattice-gen", "1,-1,0,0,1", "--lattice-gen", "0,0,1,-1,1"]);
    assert_eq!(stdout(&o).trim(), "group (3,3) order 9 non-cyclic");
}

#[test]
fn scans() {
    let o = run(&["fp-scan", "--lemma", "3", "--pmax", "7"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("planes checked: 35+130+806+2850, failures: 0"));
    assert_eq!(code(&run(&["fp-scan", "--lemma", "4", "--pmax", "7"])), 2);
    assert_eq!(code(&run(&["fp-scan", "--lemma", "2", "--pmax", "2"])), 2);

    let o = run(&["mmm", "verify"]);
    assert_eq!(stdout(&o).trim(), "29 quintuples, all relations orthogonal");

    let o = run(&["mmm", "noncyclic", "--p", "3"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("130 planes"));

    let o = run(&["counterexample5", "--p", "3", "--a", "1", "--b", "1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "group (3,3) non-cyclic; simplex empty");
    assert_eq!(code(&run(&["counterexample5", "--p", "3", "--a", "3", "--b", "1"])), 2);
    assert_eq!(code(&run(&["counterexample5", "--p", "4", "--a", "1", "--b", "1"])), 2);
}

#[test]
fn mmm_instances() {
    let o = run(&["mmm", "gen", "--row", "1", "--n", "7"]);
    assert!(stdout(&o).starts_with("spec N=7 a=(2,1,5,4)\n"));
    let o = run(&["mmm", "gen", "--row", "1", "--n", "7", "--j", "1"]);
    assert!(stdout(&o).starts_with("spec N=7 a=(1,5,4,2)\n"));
    let o = run(&["mmm", "certify", "--row", "1", "--n", "7"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("functional (0,2,1,0)"));
    let o = run(&["mmm", "certify", "--family", "i", "--x", "1", "--y", "2", "--z", "3", "--n", "5"]);
    assert!(stdout(&o).contains("width 1\nfunctional (1,1,0,0)"));
    let o = run(&["mmm", "gen", "--family", "ii", "--x", "1", "--y", "3", "--n", "7"]);
    assert!(stdout(&o).starts_with("spec N=7 a=(1,5,3,1)\n"));
    assert_eq!(code(&run(&["mmm", "gen", "--row", "1", "--n", "4", "--k", "2"])), 2);
    assert_eq!(code(&run(&["mmm", "gen", "--row", "30", "--n", "7"])), 2);
    assert_eq!(code(&run(&["mmm", "gen", "--family", "i", "--x", "1", "--n", "7"])), 2);
    let o = run(&["mmm", "sweep", "--nmax", "15"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn json_envelope_round_trips() {
    let o = run(&["--json", "width", "--det", "65", "--gen", "59,51,48,1"]);
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["command"], "width");
    assert_eq!(doc["inputs"]["det"], 65);
    assert!(doc["timing_ms"].is_number());
    let det = doc["inputs"]["det"].as_i64().unwrap();
    let gen: Vec<i64> = serde_json::from_value(doc["inputs"]["gen"].clone()).unwrap();
    let spec = simplexlab::CyclicSimplexSpec::new(det, gen.try_into().unwrap()).unwrap();
    let cert: simplexlab::WidthCertificate = serde_json::from_value(doc["result"].clone()).unwrap();
    assert_eq!(cert, simplexlab::width(&spec));

    let o = run(&["--json", "empty", "--det", "5", "--gen", "1,1,1,1"]);
    assert_eq!(code(&o), 1);
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["result"]["status"], "not_empty");

    let o = run(&["--json", "empty", "--det", "5", "--gen", "5,10,0,0"]);
    assert_eq!(code(&o), 2);
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(doc["error"].as_str().unwrap().contains("gcd"));
}

#[test]
fn survey_budget_and_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    let out_s = out.to_string_lossy().into_owned();
    let o = Command::new(env!("CARGO_BIN_EXE_simplexlab"))
        .args(["survey", "--max-det", "12", "--out", &out_s, "--jobs", "2"])
        .env("SIMPLEXLAB_MAX_DET", "8")
        .output()
        .unwrap();
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("partial: stopped at N=8"));

    let o = Command::new(env!("CARGO_BIN_EXE_simplexlab"))
        .args(["survey", "--max-det", "12", "--out", &out_s, "--resume"])
        .env("SIMPLEXLAB_MAX_DET", "50")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("N,a1,a2,a3,a4,a5,width,y1,y2,y3,y4,family\n1,0,0,0,0,0,1,"));
    let summary: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("s.summary.json")).unwrap()).unwrap();
    assert_eq!(summary["completed_through"], 12);
    assert_eq!(summary["partial"], false);

    let o = run(&["survey", "--max-det", "3", "--out", "/nonexistent/dir/s.csv"]);
    assert_eq!(code(&o), 2);
}
