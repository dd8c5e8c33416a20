use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn czlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_czlab"))
        .args(args)
        .env_remove("CZLAB_SEED")
        .output()
        .expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

const PAIR: &str = r#"{"loop": 0, "mult_minus_one": 0, "hyperbolic_pairs": 0,
    "elliptic": [{"theta_num": 3, "theta_den": 10, "multiplicity": 1, "signature": 1}],
    "horizon": 0, "right_limit": true}"#;

#[test]
fn index_seq_csv() {
    let dir = TempDir::new().unwrap();
    let d = write(&dir, "d.json", PAIR);
    let out = czlab(&["index-seq", "--descriptor", arg(&d), "--kmax", "100", "--out", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(!text.contains('\r'));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "k,mu,jump");
    assert_eq!(lines.len(), 101);
    // mu_k = 2 floor(3k/20) + 1
    assert_eq!(lines[1], "1,1,0");
    assert_eq!(lines[7], "7,3,0");
    assert_eq!(lines[100], "100,31,0");
    for (k, line) in lines[1..].iter().enumerate() {
        let fields: Vec<i64> = line.split(',').map(|f| f.parse().unwrap()).collect();
        assert_eq!(fields[0], k as i64 + 1);
        assert_eq!(fields[1], 2 * ((3 * fields[0]) / 20) + 1);
    }
}

#[test]
fn theorem_suite_example() {
    let out = czlab(&["verify-suite", "--suite", "theorem", "--seed", "7", "--trials", "500"]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["passed"], 500);
    assert_eq!(report["failed"], 0);
}

#[test]
fn match_scales_deltas() {
    let dir = TempDir::new().unwrap();
    let t = write(&dir, "t.json", r#"{"n": 2, "delta": ["-6/5", "0", "6/5"]}"#);
    let out = czlab(&["match", "--table", arg(&t)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = stdout_json(&out);
    assert_eq!(report["balanced"], true);
    // a_i = delta_i / 6
    assert_eq!(report["rotation"]["angles"], serde_json::json!(["-1/5", "0", "1/5"]));
}

#[test]
fn env_seed_overrides_flag_and_output_repeats() {
    let run = |env: Option<&str>, seed: &str| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_czlab"));
        cmd.args(["verify-suite", "--suite", "rotation", "--trials", "20", "--seed", seed]);
        match env {
            Some(v) => cmd.env("CZLAB_SEED", v),
            None => cmd.env_remove("CZLAB_SEED"),
        };
        cmd.output().unwrap()
    };
    let a = run(Some("41"), "1");
    let b = run(None, "41");
    let c = run(None, "1");
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    assert_eq!(run(None, "41").stdout, b.stdout);
    assert_eq!(stdout_json(&a)["seed"], 41);

    let bad = run(Some("minus one"), "1");
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn input_errors_exit_2_with_code() {
    let dir = TempDir::new().unwrap();
    let odd = write(
        &dir,
        "odd.json",
        r#"{"loop": 1, "mult_minus_one": 0, "hyperbolic_pairs": 0, "elliptic": [], "horizon": 5}"#,
    );
    let out = czlab(&["index-seq", "--descriptor", arg(&odd), "--kmax", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "odd_loop");

    let garbage = write(&dir, "g.json", "{ not json");
    let out = czlab(&["index-seq", "--descriptor", arg(&garbage), "--kmax", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "parse_error");

    let missing = dir.path().join("missing.json");
    let out = czlab(&["index-seq", "--descriptor", arg(&missing), "--kmax", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn horizon_is_enforced() {
    let dir = TempDir::new().unwrap();
    let d = write(
        &dir,
        "d.json",
        r#"{"loop": 0, "mult_minus_one": 0, "hyperbolic_pairs": 0,
            "elliptic": [{"theta_num": 1, "theta_den": 5, "multiplicity": 1, "signature": 1}],
            "horizon": 9}"#,
    );
    // the last jump needs iterate kmax + 1
    assert_eq!(czlab(&["index-seq", "--descriptor", arg(&d), "--kmax", "8"]).status.code(), Some(0));
    let out = czlab(&["index-seq", "--descriptor", arg(&d), "--kmax", "9"]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "horizon_exceeded");
}

#[test]
fn unmatched_jumps_are_a_violation() {
    let dir = TempDir::new().unwrap();
    let pool = write(&dir, "pool.json", &format!("[{PAIR}]"));
    let jumps = write(&dir, "jumps.csv", "k,jump\n1,2\n2,2\n3,2\n");
    let out = czlab(&["reconstruct", "--jumps", arg(&jumps), "--pool", arg(&pool)]);
    assert_eq!(out.status.code(), Some(1));
    let report = stdout_json(&out);
    assert_eq!(report["status"], "no_match");
    assert_eq!(report["jumps"], serde_json::json!([2, 2, 2]));
}

#[test]
fn reconstruct_round_trip_through_csv() {
    let dir = TempDir::new().unwrap();
    let d = write(&dir, "d.json", PAIR);
    let out = czlab(&["index-seq", "--descriptor", arg(&d), "--kmax", "40", "--out", "csv"]);
    let jumps = write(&dir, "jumps.csv", &String::from_utf8(out.stdout).unwrap());
    let other = PAIR.replace("\"theta_num\": 3", "\"theta_num\": 7");
    let pool = write(&dir, "pool.json", &format!("[{other}, {PAIR}]"));
    let out = czlab(&["reconstruct", "--jumps", arg(&jumps), "--pool", arg(&pool)]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["status"], "unique");
    assert_eq!(report["indices"], serde_json::json!([1]));
}

#[test]
fn divisibility_and_torus_reports() {
    let dir = TempDir::new().unwrap();
    // signature 2 with multiplicity 2: condition (b) holds for l = 2
    let d = write(
        &dir,
        "d.json",
        r#"{"loop": 0, "mult_minus_one": 0, "hyperbolic_pairs": 0,
            "elliptic": [{"theta_num": 2, "theta_den": 7, "multiplicity": 2, "signature": 2}],
            "horizon": 0, "right_limit": true}"#,
    );
    let out = czlab(&["divisibility", "--descriptor", arg(&d), "--l", "2,3", "--out", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "l,condition_b,condition_a,witness_k,searched_to,consistent");
    assert!(lines[1].starts_with("2,true,true,,"));
    assert!(lines[2].starts_with("3,false,false,"));
    assert!(lines.iter().skip(1).all(|l| l.ends_with(",true")));

    // arcs need endpoints off the walls, so certify up to the first degenerate iterate
    let certified = write(
        &dir,
        "c.json",
        r#"{"loop": 0, "mult_minus_one": 0, "hyperbolic_pairs": 0,
            "elliptic": [{"theta_num": 2, "theta_den": 7, "multiplicity": 2, "signature": 2}],
            "horizon": 6}"#,
    );
    let out = czlab(&["torus-verify", "--descriptor", arg(&certified), "--l", "2", "--kmax", "5", "--out", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for line in text.lines().skip(1) {
        let f: Vec<i64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        assert_eq!(f[1], 2 * f[2]);
    }
}

#[test]
fn rotation_spectrum_csv_requires_window() {
    let dir = TempDir::new().unwrap();
    let r = write(&dir, "r.json", r#"{"n": 1, "angles": ["-1/5", "1/5"], "horizon": 1}"#);
    let out = czlab(&["rotation", "--rotation", arg(&r), "--out", "csv"]);
    assert_eq!(out.status.code(), Some(2));
    let out = czlab(&["rotation", "--rotation", arg(&r), "--lo", "-1", "--hi", "1", "--out", "csv"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("label,index,value"));
    let values: Vec<&str> = text.lines().skip(1).map(|l| l.rsplit(',').next().unwrap()).collect();
    assert_eq!(values, ["-4/5", "-1/5", "1/5", "4/5"]);
}

#[test]
fn output_flag_writes_file() {
    let dir = TempDir::new().unwrap();
    let d = write(&dir, "d.json", PAIR);
    let target = dir.path().join("out.json");
    let out = czlab(&["index-seq", "--descriptor", arg(&d), "--kmax", "5", "-o", arg(&target)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(report["mu"], serde_json::json!([1, 1, 1, 1, 1]));
}
