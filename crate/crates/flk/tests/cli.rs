//! Binary-level tests: exit codes, JSON output and byte-identical reruns.

use std::process::{Command, Output};

fn flk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flk"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn datum_command_prints_marks_and_duality() {
    let out = flk(&["datum", "A2~2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("marks: 2 1"), "{text}");
    assert!(text.contains("a0k: 4"), "{text}");
    let out = flk(&["datum", "D4~3"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("dual: G2~1"), "{text}");
}

#[test]
fn usage_errors_exit_2() {
    let out = flk(&["datum", "Z9~1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = flk(&["datum", "G2~2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = flk(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn subsystem_command_b3_affine() {
    let out = flk(&["subsystem", "B3~1", "--t", "4", "--level", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("identified: A3~1"), "{text}");
    assert!(text.contains("verdict: pass"), "{text}");
}

#[test]
fn classify_command_json_is_deterministic() {
    let run = || flk(&["classify", "G2~1", "--ell", "4", "--json"]);
    let a = run();
    let b = run();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["results"]["kind"], "exotic");
    assert_eq!(v["results"]["m_type"], "A3~1");
    assert_eq!(v["verdict"], "pass");
    for key in ["version", "command", "inputs", "results", "diagnostics", "verdict"] {
        assert!(v.get(key).is_some(), "missing top-level key {key}");
    }
}

#[test]
fn braiding_command_a1_affine() {
    let out = flk(&[
        "braiding", "A1~1", "--ell", "4", "--degrees", "1,0", "0,1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("identified: A1 A1"), "{text}");
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join("flk-out-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let out = flk(&[
        "datum",
        "F4~1",
        "--json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let contents = std::fs::read_to_string(&path).unwrap();
    let v: serde_json::Value = serde_json::from_str(&contents).unwrap();
    assert_eq!(v["results"]["marks"], serde_json::json!([1, 2, 3, 4, 2]));
}
