//! End-to-end runs of the `zpartial` binary.

use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::{json, Value};

fn ws(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("../../workspaces");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn zpartial(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zpartial"))
        .args(args)
        .env_remove("ZPARTIAL_CAPS")
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn verified(out: &Output) -> bool {
    let mut child = Command::new(env!("CARGO_BIN_EXE_zpartial"))
        .args(["verify", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    use std::io::Write;
    child.stdin.take().unwrap().write_all(&out.stdout).unwrap();
    let res = child.wait_with_output().unwrap();
    res.status.code() == Some(0) && json_of(&res)["verified"] == json!(true)
}

#[test]
fn running_example_is_not_pure_partial() {
    let w = ws("running_z4.json");
    let out = zpartial(&[
        "partial",
        "check",
        "-w",
        &w,
        "-u",
        "u",
        "-f",
        "f",
        "--structure",
        "pure",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["is_partial"], json!(false));
    assert_eq!(v["witness"], json!({"d": 2, "k": [1]}));
    assert!(verified(&out));
    let out = zpartial(&["partial", "check", "-w", &w, "-u", "u", "-f", "f"]);
    assert_eq!(json_of(&out)["is_partial"], json!(true));
}

#[test]
fn hull_of_z2_over_z4() {
    let out = zpartial(&["hull", "-w", &ws("running_z4.json"), "-m", "M"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["hull"], json!([4]));
    assert_eq!(v["embedding"]["matrix"], json!([["2"]]));
    for c in [
        "essential_injective",
        "small_injective",
        "split_condition",
        "envelope",
        "weakly_essential_injective",
    ] {
        assert_eq!(v["conditions"][c], json!(true), "{c}");
    }
    assert_eq!(v["battery"]["max_order"], json!(16));
    assert!(v["caps"].is_object());
    assert!(verified(&out));
}

#[test]
fn hull_over_z12() {
    let out = zpartial(&["hull", "-w", &ws("hull_z12.json"), "-m", "M"]);
    assert_eq!(json_of(&out)["hull"], json!([12]));
    let out = zpartial(&["minimize", "-w", &ws("hull_z12.json"), "-u", "wasteful"]);
    assert_eq!(json_of(&out)["module"], json!([12]));
    assert!(verified(&out));
}

#[test]
fn snf_example() {
    let out = zpartial(&["snf", "--matrix", "[[2,4],[6,8]]"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["diagonal"], json!(["2", "4"]));
}

#[test]
fn false_verdicts_exit_zero() {
    let w = ws("running_z4.json");
    let out = zpartial(&["essential", "-w", &w, "-u", "one_factor"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["essential"], json!(false));
    assert!(v["missed_element"].is_array());
    assert!(verified(&out));
    let out = zpartial(&["injective", "-w", &ws("baer_battery.json"), "-m", "M"]);
    assert_eq!(json_of(&out)["injective"], json!(false));
    assert!(verified(&out));
}

#[test]
fn baer_sum_of_nonsplit_splits() {
    let out = zpartial(&[
        "baer-sum",
        "-w",
        &ws("running_z4.json"),
        "-a",
        "nonsplit",
        "-b",
        "nonsplit",
    ]);
    assert_eq!(json_of(&out)["splits"], json!(true));
    assert!(verified(&out));
}

#[test]
fn preenvelope_over_baer_set() {
    let b = ws("baer_battery.json");
    let out = zpartial(&["preenvelope", "-w", &b, "-m", "M"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert!(v["trace"]["steps_used"].as_u64().unwrap() >= 1);
    assert!(verified(&out));
    let out = zpartial(&["preenvelope", "-w", &b, "-m", "M", "--max-steps", "0"]);
    assert_eq!(out.status.code(), Some(3));
    let v = json_of(&out);
    assert_eq!(v["error"]["kind"], json!("resource"));
    assert!(v["partial_trace"].is_object());
}

#[test]
fn exit_codes() {
    let w = ws("running_z4.json");
    assert_eq!(zpartial(&["hull", "-w", &w, "-m", "nope"]).status.code(), Some(2));
    assert_eq!(
        zpartial(&["hull", "-w", &w, "-m", "M", "--ring", "8"]).status.code(),
        Some(2)
    );
    assert_eq!(
        zpartial(&["hull", "-w", "/nonexistent.json", "-m", "M"]).status.code(),
        Some(2)
    );
    assert_eq!(zpartial(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        zpartial(&[
            "hom",
            "-w",
            &w,
            "--source",
            "W",
            "--target",
            "W",
            "--list",
            "--cap-hom",
            "10"
        ])
        .status
        .code(),
        Some(3)
    );
    let out = Command::new(env!("CARGO_BIN_EXE_zpartial"))
        .args(["hom", "-w", &w, "--source", "W", "--target", "W", "--list"])
        .env("ZPARTIAL_CAPS", "hom=10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn corpus_and_suite_are_deterministic() {
    let a = zpartial(&["corpus", "gen", "--ring", "12", "--max-order", "64", "--seed", "5"]);
    let b = zpartial(&["corpus", "gen", "--ring", "12", "--max-order", "64", "--seed", "5"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = zpartial(&["corpus", "gen", "--ring", "12", "--max-order", "64", "--seed", "6"]);
    assert_ne!(a.stdout, c.stdout);
    assert_eq!(
        zpartial(&["corpus", "gen", "--ring", "4", "--max-order", "1"])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        zpartial(&["corpus", "gen", "--ring", "4", "--max-order", "5000"])
            .status
            .code(),
        Some(3)
    );

    let s1 = zpartial(&["suite", "run", "ext", "--ring", "4", "--seed", "1"]);
    let s2 = zpartial(&["suite", "run", "ext", "--ring", "4", "--seed", "1"]);
    assert_eq!(s1.status.code(), Some(0));
    assert_eq!(s1.stdout, s2.stdout);
    assert_eq!(json_of(&s1)["passed"], json!(true));
}

#[test]
fn tampered_verdict_fails_verification() {
    let out = zpartial(&[
        "partial",
        "check",
        "-w",
        &ws("running_z4.json"),
        "-u",
        "u",
        "-f",
        "f",
        "--structure",
        "pure",
    ]);
    let mut v = json_of(&out);
    v["witness"]["d"] = json!(4);
    let tampered = Output {
        status: out.status,
        stdout: serde_json::to_vec(&v).unwrap(),
        stderr: vec![],
    };
    assert!(!verified(&tampered));
}

#[test]
fn closure_suite_passes_under_its_alias() {
    let out = zpartial(&["suite", "run", "prop-2-5", "--ring", "4", "--seed", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["suite"], json!("closure"));
    assert_eq!(v["passed"], json!(true));
    for p in v["properties"].as_array().unwrap() {
        assert_eq!(p["failures"], json!(0), "{p}");
    }
    assert_eq!(
        zpartial(&["suite", "run", "nope", "--ring", "4"]).status.code(),
        Some(2)
    );
}
