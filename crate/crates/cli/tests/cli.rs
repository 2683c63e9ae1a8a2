use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn forge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_forge"))
        .args(args)
        .env_remove("FORGE_CACHE_DIR")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn factor_q3_d2() {
    let o = forge(&["factor", "--p", "3", "--e", "1", "--d", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "x = [1, 3]\n1 - T^2 = (1 - T)(1 + T)\n");
    let o = forge(&["factor", "--p", "3", "--d", "2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["xs"], serde_json::json!([1, 3]));
    assert_eq!(v["product"], "(1 - T)(1 + T)");
}

#[test]
fn invalid_inputs_exit_3() {
    assert_eq!(
        forge(&["factor", "--p", "3", "--d", "1"]).status.code(),
        Some(3)
    );
    assert_eq!(
        forge(&["factor", "--p", "4", "--d", "2"]).status.code(),
        Some(3)
    );
    assert_eq!(
        forge(&["verify", "--p", "3", "--d", "2"]).status.code(),
        Some(3)
    );
    let o = forge(&["verify", "--p", "3", "--d", "2", "--f", "1*t^2+2"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("reducible"));
    assert_eq!(
        forge(&["verify", "--p", "3", "--d", "2", "--f", "1*t^3+2*t^1+1"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        forge(&["build", "--p", "3", "--d", "2", "--f", "auto:x"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn gens_counts() {
    let o = forge(&["gens", "--p", "3", "--d", "3", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Vec<serde_json::Value> = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.len(), 26);
    assert_eq!(v.iter().filter(|g| g["type"] == 1).count(), 13);
    let o = forge(&["gens", "--p", "3", "--d", "2"]);
    assert_eq!(stdout(&o).lines().count(), 4);
}

#[test]
fn verify_d2_graphs() {
    let o = forge(&[
        "verify", "--p", "3", "--e", "1", "--d", "2", "--f", "1*t^2+1",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.ends_with("PASS: PGL 720 vertices\n"), "{out}");
    assert!(out.contains("PASS ramanujan"));
    let o = forge(&[
        "verify",
        "--p",
        "3",
        "--e",
        "1",
        "--d",
        "2",
        "--f",
        "1*t^2+1*t^1+2",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("PASS: PSL 360 vertices\n"));
}

#[test]
fn ball_for_d3() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ball.json");
    let o = forge(&[
        "build",
        "--p",
        "3",
        "--e",
        "1",
        "--d",
        "3",
        "--f",
        "auto:1",
        "--ball",
        "2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let err = stderr(&o);
    assert!(err.contains("interior vertices (ok)"), "{err}");
    assert!(err.contains("spectra skipped"));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["params"]["radius"], 2);
    assert_eq!(v["params"]["f"], "1*t^3+2*t^1+1");
    let spectra = forge(&["spectra", path.to_str().unwrap()]);
    assert_eq!(spectra.status.code(), Some(3));

    let o = forge(&["build", "--p", "3", "--d", "3", "--f", "auto:1"]);
    assert_eq!(o.status.code(), Some(4));
    let o = forge(&[
        "build", "--p", "3", "--d", "2", "--f", "1*t^2+1", "--cap", "100",
    ]);
    assert_eq!(o.status.code(), Some(4));

    let o = forge(&[
        "verify",
        "--p",
        "3",
        "--d",
        "3",
        "--f",
        "auto:1",
        "--samples",
        "50",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("SKIP ramanujan"));
    assert!(stdout(&o).contains("PASS link"));
}

fn build_and_check(dir: &Path, threads: &str) -> (Vec<u8>, Vec<u8>) {
    let graph = dir.join(format!("g{threads}.json"));
    let report = dir.join(format!("r{threads}.json"));
    let csv = dir.join(format!("e{threads}.csv"));
    let o = forge(&[
        "--threads",
        threads,
        "build",
        "--p",
        "3",
        "--d",
        "2",
        "--f",
        "1*t^2+1*t^1+2",
        "--out",
        graph.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let o = forge(&[
        "--threads",
        threads,
        "spectra",
        graph.to_str().unwrap(),
        "--out",
        report.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = fs::read_to_string(csv).unwrap();
    assert!(csv.starts_with("color,index,re,im,modulus,class\n"));
    assert_eq!(csv.lines().filter(|l| l.ends_with(",trivial")).count(), 1);
    (fs::read(graph).unwrap(), fs::read(report).unwrap())
}

#[test]
fn outputs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (g1, r1) = build_and_check(dir.path(), "1");
    let (g4, r4) = build_and_check(dir.path(), "4");
    assert_eq!(g1, g4);
    assert_eq!(r1, r4);
    let report: serde_json::Value = serde_json::from_slice(&r1).unwrap();
    assert_eq!(report["pass"], true);
    assert_eq!(report["vertices"], 360);
}

#[test]
fn other_formats() {
    let o = forge(&[
        "build", "--p", "3", "--d", "2", "--f", "1*t^2+1", "--format", "edges",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 2880);
    assert!(text
        .lines()
        .all(|l| l.split(' ').count() == 3 && l.ends_with(" 1")));
    let o = forge(&[
        "build", "--p", "3", "--d", "2", "--f", "1*t^2+1", "--format", "dot", "--ball", "1",
    ]);
    let text = stdout(&o);
    assert!(text.starts_with("digraph"));
    assert_eq!(text.matches("->").count(), 4);
}

#[test]
fn tower_cache() {
    let dir = tempfile::tempdir().unwrap();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_forge"))
            .args(["factor", "--p", "5", "--d", "3"])
            .env("FORGE_CACHE_DIR", dir.path())
            .output()
            .unwrap()
    };
    let first = run();
    assert_eq!(first.status.code(), Some(0));
    let cached = dir.path().join("tower-p5-e1-d3-n1.json");
    assert!(cached.exists());
    let second = run();
    assert_eq!(first.stdout, second.stdout);
    // a corrupt cache entry is ignored
    fs::write(&cached, "not json").unwrap();
    assert_eq!(run().stdout, first.stdout);
}

#[test]
fn verify_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("verify.json");
    let o = forge(&[
        "verify",
        "--p",
        "5",
        "--d",
        "2",
        "--f",
        "auto:1",
        "--samples",
        "100",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["pass"], true);
    assert!(v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .any(|c| c["name"] == "ramanujan" && c["status"] == "PASS"));
}
