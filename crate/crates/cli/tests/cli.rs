use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use sha2::{Digest, Sha256};

fn hperc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hperc")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn json(bytes: &[u8]) -> serde_json::Value {
    serde_json::from_slice(bytes).expect("valid JSON")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn analyze_clique() {
    let out = hperc(&["analyze", "--clique", "5"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&out.stdout);
    assert_eq!(r["lambda"], serde_json::json!({"num": 8, "den": 3}));
    assert_eq!(r["strictly_balanced"], true);
    assert_eq!(r["ell_exact"], serde_json::json!({"num": 3, "den": 8}));
    assert_eq!(r["schema_version"], 1);
}

#[test]
fn analyze_sources_agree() {
    let a = hperc(&["analyze", "--cycle", "5"]);
    let b = hperc(&["analyze", "--template", "cycle5"]);
    assert_eq!(code(&a), 0);
    let (mut a, mut b) = (json(&a.stdout), json(&b.stdout));
    assert_eq!(a["balanced"], true);
    assert_eq!(a["strictly_balanced"], false);
    a["template"] = serde_json::Value::Null;
    b["template"] = serde_json::Value::Null;
    assert_eq!(a, b);
}

#[test]
fn analyze_gnp_is_deterministic() {
    let a = hperc(&["analyze", "--gnp", "10,0.5,seed=7"]);
    let b = hperc(&["analyze", "--gnp", "10,0.5,seed=7"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a.stdout)["v"], 10);
}

#[test]
fn analyze_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let two = write(dir.path(), "edge.el", "p 2 1\n0 1\n");
    assert_eq!(code(&hperc(&["analyze", "--file", s(&two)])), 4);
    let bad = write(dir.path(), "bad.el", "p 3 2\n0 1\n1 1\n");
    let out = hperc(&["analyze", "--file", s(&bad)]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
    assert_eq!(code(&hperc(&["analyze"])), 2);
    assert_eq!(code(&hperc(&["analyze", "--clique", "4", "--cycle", "4"])), 2);
    assert_eq!(code(&hperc(&["analyze", "--clique", "30"])), 5);
    assert_eq!(code(&hperc(&["analyze", "--clique", "30", "--force"])), 0);
    assert_eq!(code(&hperc(&["analyze", "--clique", "70", "--force"])), 4);
}

#[test]
fn analyze_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    assert_eq!(code(&hperc(&["analyze", "--clique", "4", "--out", s(&out)])), 0);
    let r = json(&std::fs::read(&out).unwrap());
    assert_eq!(r["lambda"], serde_json::json!({"num": 2, "den": 1}));
}

#[test]
fn close_examples() {
    let dir = tempfile::tempdir().unwrap();
    let star = write(dir.path(), "star4.el", "p 4 3\n0 1\n0 2\n0 3\n");
    let triangle = write(dir.path(), "triangle.el", "p 3 3\n0 1\n0 2\n1 2\n");
    let empty = write(dir.path(), "empty.el", "p 5 0\n");
    let out = hperc(&["close", "--init", s(&star), "--template", s(&triangle)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&out.stdout);
    assert_eq!(r["percolated"], true);
    assert_eq!(r["round_count"], 1);
    assert_eq!(r["final_edges"], 6);
    let r = json(&hperc(&["close", "--init", s(&empty), "--template", "clique3"]).stdout);
    assert_eq!(r["round_count"], 0);
    assert_eq!(r["percolated"], false);
}

#[test]
fn close_strategies_agree() {
    let dir = tempfile::tempdir().unwrap();
    let g = hperc::Graph::sample_gnp(40, 0.12, hperc::Seed::new(3)).unwrap();
    let init = write(dir.path(), "g.el", &hperc::serialize_edge_list(&g));
    let rounds = dir.path().join("rounds");
    let a = hperc(&["close", "--init", s(&init), "--template", "clique4", "--strategy", "baseline"]);
    let b = hperc(&["close", "--init", s(&init), "--template", "clique4", "--strategy", "worklist", "--rounds-dir", s(&rounds)]);
    let c = hperc(&["--threads", "1", "close", "--init", s(&init), "--template", "clique4"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    let r = json(&a.stdout);
    let count = r["round_count"].as_u64().unwrap() as usize;
    for t in 1..=count {
        let text = std::fs::read_to_string(rounds.join(format!("round-{t:04}.el"))).unwrap();
        let added = hperc::parse_edge_list(&text).unwrap();
        assert_eq!(added.m(), r["rounds"][t - 1].as_array().unwrap().len());
    }
    assert_eq!(code(&hperc(&["close", "--init", s(&init), "--template", "clique4", "--strategy", "greedy"])), 2);
}

#[test]
fn close_guard() {
    let dir = tempfile::tempdir().unwrap();
    let big = write(dir.path(), "big.el", "p 5001 0\n");
    assert_eq!(code(&hperc(&["close", "--init", s(&big), "--template", "clique3"])), 5);
    let out = hperc(&["close", "--init", s(&big), "--template", "clique3", "--force"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out.stdout)["round_count"], 0);
}

fn check_manifest(dir: &Path, command: &str) {
    let m = json(&std::fs::read(dir.join("manifest.json")).unwrap());
    assert_eq!(m["command"], command);
    assert_eq!(m["rng_name"], hperc::RNG_NAME);
    assert!(m["started_at"].is_string() && m["finished_at"].is_string());
    for o in m["outputs"].as_array().unwrap() {
        let bytes = std::fs::read(dir.join(o["file"].as_str().unwrap())).unwrap();
        assert_eq!(o["sha256"].as_str().unwrap(), hex::encode(Sha256::digest(&bytes)));
    }
}

#[test]
fn pc_writes_one_row_reproducibly() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let args = ["pc", "--n", "100", "--template", "clique3", "--seed", "1", "--trials", "40", "--levels", "8"];
    let run = |out: &Path, threads: &str| {
        let mut v = vec!["--threads", threads];
        v.extend_from_slice(&args);
        v.extend_from_slice(&["--out-dir", s(out)]);
        let o = hperc(&v);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    };
    run(&a, "1");
    run(&b, "3");
    let csv_a = std::fs::read_to_string(a.join("pc.csv")).unwrap();
    assert_eq!(csv_a, std::fs::read_to_string(b.join("pc.csv")).unwrap());
    let lines: Vec<&str> = csv_a.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], "n,p_hat,ci_lo,ci_hi,trials,levels,mode,template,seed,rng_name");
    assert!(lines[1].starts_with("100,"));
    check_manifest(&a, "pc");
}

#[test]
fn ell_reports_slope() {
    let dir = tempfile::tempdir().unwrap();
    let out = hperc(&["ell", "--template", "clique4", "--n", "16,24,32", "--seed", "2", "--trials", "30", "--levels", "8", "--out-dir", s(dir.path())]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&std::fs::read(dir.path().join("ell.json")).unwrap());
    assert!(r["slope"].is_f64());
    assert_eq!(r["points"].as_array().unwrap().len(), 3);
    check_manifest(dir.path(), "ell");
    let out = hperc(&["ell", "--template", "clique4", "--n", "16,24", "--seed", "2", "--out-dir", s(dir.path())]);
    assert_eq!(code(&out), 4);
}

#[test]
fn sweep_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = hperc(&["sweep", "--k", "12", "--alphas", "0.5,1.0", "--samples", "100", "--seed", "4", "--out-dir", s(dir.path())]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[2].starts_with("12,1.0,") || lines[2].starts_with("12,1,"), "{}", lines[2]);
    check_manifest(dir.path(), "sweep");
    assert_eq!(code(&hperc(&["sweep", "--k", "12", "--alphas", "0.0", "--seed", "1", "--out-dir", s(dir.path())])), 4);
}

#[test]
fn stats_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = hperc(&["stats", "--k", "8", "--alpha", "0.5", "--samples", "200", "--seed", "5", "--out-dir", s(dir.path())]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&std::fs::read(dir.path().join("stats.json")).unwrap());
    let total = ["frac_strictly_balanced", "frac_balanced_not_strict", "frac_unbalanced"]
        .iter()
        .map(|f| r[f].as_f64().unwrap())
        .sum::<f64>();
    assert!((total - 1.0).abs() < 1e-12);
    let hist = std::fs::read_to_string(dir.path().join("witness_sizes.csv")).unwrap();
    assert!(hist.starts_with("v_f,count\n"));
    check_manifest(dir.path(), "stats");
}

#[test]
fn config_files() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(
        dir.path(),
        "good.json",
        &format!(r#"{{"schema_version": 1, "template": "clique3", "n_list": [30], "trials": 20, "levels": 6, "seed": 9, "output_dir": "{}"}}"#, s(&dir.path().join("out"))),
    );
    let out = hperc(&["pc", "--config", s(&good)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("out/pc.csv").exists());
    let bad = write(dir.path(), "bad.json", r#"{"template": "clique3", "n_list": [30, "x"], "seed": 1}"#);
    let out = hperc(&["pc", "--config", s(&bad)]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("n_list[1]"));
}

#[test]
fn seed_is_required() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&hperc(&["pc", "--n", "20", "--template", "clique3", "--out-dir", s(dir.path())])), 2);
    assert_eq!(code(&hperc(&["stats", "--k", "8", "--alpha", "0.5", "--out-dir", s(dir.path())])), 2);
    assert_eq!(code(&hperc(&["pc", "--n", "6000", "--template", "clique3", "--seed", "1", "--out-dir", s(dir.path())])), 5);
}
