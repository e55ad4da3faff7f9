use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_beilinson"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

const NON_MEMBER: &str = r#"{"p":5,"c":[[1,0,0,0,0,0,0,0,0,0],[0,1,0,0,0,0,0,0,0,0],[0,0,1,0,0,0,0,0,0,0],[0,0,0,1,0,0,0,0,0,0]]}"#;

#[test]
fn exit_code_zero() {
    assert_eq!(code(&run(&["adjunction"])), 0);
    assert_eq!(code(&run(&["phi"])), 0);
    assert_eq!(code(&run(&["search", "--trials", "0"])), 0);
}

#[test]
fn exit_code_one_on_failed_checks() {
    let dir = tempfile::tempdir().unwrap();
    let cand = dir.path().join("c.json");
    std::fs::write(&cand, NON_MEMBER).unwrap();
    let report = dir.path().join("v.json");
    let out = run(&["verify", cand.to_str().unwrap(), "--out", report.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let v = json(&report);
    assert_eq!(v["result"]["outcome"], "failed");
    assert_eq!(v["result"]["membership"]["member"], false);
    assert_eq!(v["result"]["stages"].as_array().unwrap().len(), 1);
    assert_eq!(code(&run(&["ideal", cand.to_str().unwrap()])), 1);
    // H + K meets E1 negatively.
    assert_eq!(code(&run(&["adjunction", "5L +E1"])), 1);
}

#[test]
fn exit_code_two_on_invalid_input() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{not json").unwrap();
    assert_eq!(code(&run(&["verify", bad.to_str().unwrap()])), 2);
    assert_eq!(code(&run(&["verify", "/nonexistent/candidate.json"])), 2);
    assert_eq!(code(&run(&["--prime", "4", "search"])), 2);
    assert_eq!(code(&run(&["--workers", "0", "search", "--trials", "1"])), 2);
    assert_eq!(code(&run(&["--budget-secs", "-1", "search"])), 2);
    assert_eq!(code(&run(&["adjunction", "3Q"])), 2);
    // The bundled candidate lives over F_5.
    assert_eq!(code(&run(&["--prime", "7", "verify"])), 2);
    assert_eq!(code(&run(&["report", bad.to_str().unwrap()])), 2);
    assert_eq!(code(&run(&["no-such-command"])), 2);
}

#[test]
fn exit_code_three_on_budget() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("v.json");
    let out = run(&["verify", "--full", "--budget-secs", "0", "--out", report.to_str().unwrap()]);
    assert_eq!(code(&out), 3);
    let v = json(&report);
    assert_eq!(v["result"]["outcome"], "inconclusive");
    assert_eq!(v["result"]["smoothness"]["verdict"], "inconclusive");
    // The scans still ran and are reported.
    assert_eq!(v["result"]["pointScans"][1]["points"], 751);
    assert!(String::from_utf8_lossy(&out.stdout).contains("INCONCLUSIVE"));

    let s = dir.path().join("s.json");
    let out = run(&["search", "--trials", "1000000000", "--budget-secs", "0.2", "--out", s.to_str().unwrap()]);
    assert_eq!(code(&out), 3);
    assert_eq!(json(&s)["result"]["truncated"], true);
}

#[test]
fn search_reports_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for (path, workers) in [(&a, "1"), (&b, "4")] {
        let out = run(&["search", "--trials", "2000", "--seed", "9", "--workers", workers, "--out", path.to_str().unwrap()]);
        assert_eq!(code(&out), 0);
    }
    let (ja, jb) = (json(&a), json(&b));
    assert_eq!(ja["result"], jb["result"]);
    assert_eq!(ja["schemaVersion"], 1);
    assert_eq!(ja["field"]["quadraticExtension"], "F_5[t]/(t^2-2)");
    assert_eq!(ja["config"]["seed"], 9);
    assert_eq!(ja["result"]["trialsCompleted"], 2000);
    let again = dir.path().join("c.json");
    run(&["search", "--trials", "2000", "--seed", "9", "--out", again.to_str().unwrap()]);
    let strip = |p: &Path| std::fs::read_to_string(p).unwrap().replace(p.to_str().unwrap(), "");
    assert_eq!(strip(&a), strip(&again));
}

#[test]
fn empty_search() {
    let out = run(&["search", "--trials", "0"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["trialsCompleted"], 0);
    assert_eq!(v["result"]["candidates"].as_array().unwrap().len(), 0);
}

#[test]
fn ideal_export_is_stable_and_parses() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.ideal");
    let b = dir.path().join("b.ideal");
    assert_eq!(code(&run(&["ideal", "--out", a.to_str().unwrap()])), 0);
    assert_eq!(code(&run(&["ideal", "--seed", "77", "--out", b.to_str().unwrap()])), 0);
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    let ideal = beilinson::poly::io::Ideal::parse(&text).unwrap();
    let degrees: Vec<u32> = ideal.generators.iter().map(|g| g.degree().unwrap()).collect();
    assert_eq!(degrees, vec![5, 5, 5, 5, 5, 6, 6, 6, 6]);
    assert_eq!(ideal.to_text(), text);
}

#[test]
fn adjunction_examples() {
    let out = run(&["adjunction", "3L -1E1 -1E2"]);
    let s = String::from_utf8_lossy(&out.stdout);
    assert!(s.contains("Del Pezzo surface of degree 7"));
    assert_eq!(s.lines().filter(|l| l.trim_start().starts_with(char::is_numeric)).count(), 1);
    let out = run(&["adjunction", "1L"]);
    let s = String::from_utf8_lossy(&out.stdout);
    assert_eq!(s.lines().filter(|l| l.trim_start().starts_with(char::is_numeric)).count(), 1);

    let dir = tempfile::tempdir().unwrap();
    let r = dir.path().join("adj.json");
    assert_eq!(code(&run(&["adjunction", "--out", r.to_str().unwrap()])), 0);
    let v = json(&r);
    assert_eq!(v["result"]["ledger"]["terminal"]["kind"], "delPezzo");
    assert_eq!(v["result"]["ledger"]["rows"].as_array().unwrap().len(), 4);
    let rendered = run(&["report", r.to_str().unwrap()]);
    assert!(String::from_utf8_lossy(&rendered.stdout).contains("degree 7"));
}

#[test]
fn phi_report() {
    let dir = tempfile::tempdir().unwrap();
    let r = dir.path().join("phi.json");
    assert_eq!(code(&run(&["phi", "--out", r.to_str().unwrap()])), 0);
    let v = json(&r);
    assert_eq!(v["result"]["dimT"], 10);
    assert_eq!(v["result"]["equivalent"], true);
    assert_eq!(v["result"]["changeOfBasis"].as_array().unwrap().len(), 10);
}

#[test]
fn interrupt_flushes_truncated_report() {
    let dir = tempfile::tempdir().unwrap();
    let r = dir.path().join("s.json");
    let mut child = bin()
        .args(["search", "--trials", "1000000000", "--out", r.to_str().unwrap()])
        .stdout(std::process::Stdio::null())
        .stderr(std::process::Stdio::null())
        .spawn()
        .unwrap();
    std::thread::sleep(std::time::Duration::from_millis(700));
    let killed = Command::new("kill").args(["-INT", &child.id().to_string()]).status().unwrap();
    assert!(killed.success());
    let status = child.wait().unwrap();
    assert_eq!(status.code(), Some(3));
    let v = json(&r);
    assert_eq!(v["result"]["truncated"], true);
    let done = v["result"]["trialsCompleted"].as_u64().unwrap();
    let hist: u64 = v["result"]["corankHistogram"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p[1].as_u64().unwrap())
        .sum();
    assert_eq!(done, hist);
}
