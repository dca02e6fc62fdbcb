use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name]
        .iter()
        .collect();
    path.display().to_string()
}

fn afmerge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_afmerge")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn solve_single_argument() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("one.apx");
    std::fs::write(&path, "arg(a).\n").unwrap();
    assert_eq!(stdout(&afmerge(&["solve", path.to_str().unwrap()])), "{\"a\":\"in\"}\n");
}

#[test]
fn solve_self_attack() {
    let apx = fixture("self_attack.apx");
    let grounded: Value = serde_json::from_str(&stdout(&afmerge(&["solve", &apx]))).unwrap();
    assert!(grounded.as_object().unwrap().values().all(|v| v == "undec"));
    assert_eq!(stdout(&afmerge(&["solve", &apx, "--semantics", "stable"])), "[]\n");
}

#[test]
fn count_is_sixteen() {
    let out = afmerge(&["extensions", &fixture("alice.json"), &fixture("bob.json"), "--count"]);
    assert_eq!(stdout(&out), "stable: 16\n");
}

#[test]
fn capped_count_is_a_lower_bound() {
    let out = afmerge(&[
        "extensions",
        &fixture("alice.json"),
        &fixture("bob.json"),
        "--count",
        "--cap",
        "5",
    ]);
    assert_eq!(stdout(&out), "stable: >=5\n");
}

#[test]
fn list_uses_zero_based_indices() {
    let out = stdout(&afmerge(&[
        "extensions",
        &fixture("alice.json"),
        &fixture("bob.json"),
        "--list",
    ]));
    let indices: Vec<u64> = out
        .lines()
        .map(|l| serde_json::from_str::<Value>(l).unwrap()["index"].as_u64().unwrap())
        .collect();
    assert_eq!(indices, (0..16).collect::<Vec<_>>());
}

#[test]
fn conflicts_writes_apx_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let apx = dir.path().join("g.apx");
    stdout(&afmerge(&[
        "conflicts",
        &fixture("alice.json"),
        &fixture("bob.json"),
        "--apx",
        apx.to_str().unwrap(),
    ]));
    let solved: Value = serde_json::from_str(&stdout(&afmerge(&["solve", apx.to_str().unwrap()]))).unwrap();
    assert_eq!(solved["H"], "in");
    assert_eq!(solved["N"], "out");
}

#[test]
fn apply_single_recipe() {
    let out = stdout(&afmerge(&["apply", &fixture("alice.json"), &fixture("books.csv")]));
    assert_eq!(out, std::fs::read_to_string(fixture("alice_result.csv")).unwrap());
}

#[test]
fn errors_are_json_on_stderr() {
    let out = afmerge(&["merge", &fixture("alice.json"), &fixture("bob.json")]);
    assert_eq!(out.status.code(), Some(3));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "conflict");

    let out = afmerge(&["merge", &fixture("alice.json"), &fixture("bob.json"), "--stable", "99"]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "invalid_input");

    let out = afmerge(&["solve", "/definitely/not/here.apx"]);
    assert!(!out.status.success());
    assert_eq!(
        serde_json::from_slice::<Value>(&out.stderr).unwrap()["error"]["kind"],
        "io"
    );
}

#[test]
fn config_file_sets_cap() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("afmerge.toml");
    std::fs::write(&cfg, "stable_cap = 3\n").unwrap();
    let out = afmerge(&[
        "--config",
        cfg.to_str().unwrap(),
        "extensions",
        &fixture("alice.json"),
        &fixture("bob.json"),
        "--count",
    ]);
    assert_eq!(stdout(&out), "stable: >=3\n");

    std::fs::write(&cfg, "no_such_key = 1\n").unwrap();
    let out = afmerge(&[
        "--config",
        cfg.to_str().unwrap(),
        "extensions",
        &fixture("alice.json"),
        &fixture("bob.json"),
    ]);
    assert_eq!(out.status.code(), Some(2));
}
