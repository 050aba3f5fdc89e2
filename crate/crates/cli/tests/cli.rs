use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn qugame(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qugame"))
        .args(args)
        .env_remove("QUGAME_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    let o = qugame(&a);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(name)
}

#[test]
fn grover_example() {
    let o = qugame(&["grover", "--n", "3", "--target", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("k = 2\n"), "{s}");
    assert!(s.contains("success_probability = 0.9453\n"), "{s}");
}

#[test]
fn rsa_example() {
    let s = stdout(&qugame(&["rsa", "--N", "77", "--e", "11", "--cipher", "67", "--seed", "1"]));
    assert!(s.contains("plaintext = 23\n"), "{s}");
    assert!(s.contains("phi = 60\n") && s.contains("d = 11\n"), "{s}");
}

#[test]
fn quantum_pd_table() {
    let s = stdout(&qugame(&["tables", "--game", "pd", "--moves", "I,X,H,Z"]));
    assert!(s.contains("H  (3.0000, 0.5000)  (3.0000, 0.5000)  (2.2500, 2.2500)  (1.5000, 4.0000)"), "{s}");
    assert!(s.contains("Z  (1.0000, 1.0000)  (5.0000, 0.0000)  (4.0000, 1.5000)  (3.0000, 3.0000)"), "{s}");
    assert!(s.contains("nash = [(Z, Z)]\n"), "{s}");
}

#[test]
fn exit_codes() {
    assert_eq!(qugame(&["grover", "--n", "3", "--target", "8"]).status.code(), Some(2));
    assert_eq!(qugame(&["shor", "--N", "13"]).status.code(), Some(2));
    assert_eq!(qugame(&["grover", "--n", "40", "--target", "1"]).status.code(), Some(3));
    assert_eq!(qugame(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(qugame(&["grover", "--n", "x"]).status.code(), Some(64));
    assert_eq!(qugame(&[]).status.code(), Some(64));
    assert_eq!(qugame(&["--help"]).status.code(), Some(0));
}

#[test]
fn domain_errors_go_to_stderr() {
    let o = qugame(&["telepathy", "--inputs", "1,0,0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("even-sum"));
}

#[test]
fn json_and_table_agree() {
    let v = json(&["estimate", "--copies", "500", "--seed", "4"]);
    let t = stdout(&qugame(&["estimate", "--copies", "500", "--seed", "4"]));
    let f = v["probabilities"]["fidelity"].as_f64().unwrap();
    assert!(t.contains(&format!("probabilities.fidelity = {f:.4}\n")), "{t}");
    assert!(t.contains(&format!("params.n_b = {}\n", v["params"]["n_b"])), "{t}");
}

#[test]
fn seed_determines_output() {
    let a = qugame(&["card", "--seed", "9", "--format", "json"]);
    let b = qugame(&["card", "--seed", "9", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
    let env = Command::new(env!("CARGO_BIN_EXE_qugame"))
        .args(["card", "--format", "json"])
        .env("QUGAME_SEED", "9")
        .output()
        .unwrap();
    assert_eq!(env.stdout, a.stdout);
    let bad = Command::new(env!("CARGO_BIN_EXE_qugame")).args(["card"]).env("QUGAME_SEED", "nine").output().unwrap();
    assert_eq!(bad.status.code(), Some(64));
}

#[test]
fn manifests_reproduce_byte_for_byte() {
    let manifest = scratch("estimate.json");
    std::fs::write(
        &manifest,
        r#"{"subcommand": "estimate", "parameters": {"copies": 2000, "theta": 0.7, "threshold": 0.99}, "seed": 12, "format": "json"}"#,
    )
    .unwrap();
    let m = manifest.to_str().unwrap();
    let (a, b) = (qugame(&["--manifest", m]), qugame(&["--manifest", m]));
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let direct = json(&["estimate", "--copies", "2000", "--theta", "0.7", "--threshold", "0.99", "--seed", "12"]);
    assert_eq!(serde_json::from_slice::<Value>(&a.stdout).unwrap(), direct);

    let out = scratch("estimate.out");
    assert!(qugame(&["--manifest", m, "--output", out.to_str().unwrap()]).status.success());
    assert_eq!(std::fs::read(&out).unwrap(), a.stdout);
}

#[test]
fn bad_manifests_are_usage_errors() {
    let path = scratch("bad.json");
    std::fs::write(&path, r#"{"subcommand": "grover", "parameters": {"n": [[1]]}}"#).unwrap();
    assert_eq!(qugame(&["--manifest", path.to_str().unwrap()]).status.code(), Some(64));
    std::fs::write(&path, r#"{"subcommand": "nope"}"#).unwrap();
    assert_eq!(qugame(&["--manifest", path.to_str().unwrap()]).status.code(), Some(64));
    assert_eq!(qugame(&["--manifest", "/nonexistent/m.json"]).status.code(), Some(64));
    assert_eq!(qugame(&["bv", "--n", "2", "--secret", "1", "--manifest", path.to_str().unwrap()]).status.code(), Some(64));
}

#[test]
fn json_keys_are_sorted() {
    let o = qugame(&["teleport", "--branch", "1", "--format", "json"]);
    let s = stdout(&o);
    let pos = |k: &str| s.find(&format!("\"{k}\"")).unwrap();
    assert!(pos("game") < pos("outcome") && pos("outcome") < pos("params") && pos("payoffs") < pos("probabilities"));
}

#[test]
fn every_subcommand_runs() {
    let runs: &[&[&str]] = &[
        &["bv", "--n", "4", "--secret", "11"],
        &["shor", "--N", "21"],
        &["spinflip", "--alice", "I"],
        &["guess", "--variant", "II", "--n", "4", "--secret", "9"],
        &["pd", "--alice", "H", "--bob", "Z"],
        &["bos", "--alice", "X", "--bob", "X"],
        &["newcomb", "--sb", "1", "--w", "0.25"],
        &["ess", "--incumbent", "Z", "--mutant", "H"],
        &["card", "--expected"],
        &["telepathy", "--players", "4"],
        &["secret-qubit"],
        &["secret-qutrit", "--pair", "bg"],
        &["discriminate", "--priors", "0.3,0.7"],
        &["clone", "--theta", "2"],
    ];
    for args in runs {
        let v = json(args);
        assert!(v.is_object(), "{args:?}");
    }
}

#[test]
fn verify_passes() {
    let o = qugame(&["verify"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("PASS  pd-classical\n") && s.contains(" 0 failed\n"), "{s}");
    assert!(!s.contains("FAIL"));
}
