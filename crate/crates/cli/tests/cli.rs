use std::process::{Command, Output};

use serde_json::Value;

fn k3div(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_k3div"))
        .args(args)
        .env_remove("K3DIV_FIELD")
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn lattice_info_sigma_ten() {
    let out = k3div(&["lattice", "info", "--spec", "U(2)+~A1^20"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["rank"], 22);
    assert_eq!(v["signature"], serde_json::json!([1, 21]));
    assert_eq!(v["discriminant"]["length"], 20);
    assert_eq!(v["discriminant"]["type_I"], true);
    let summary = String::from_utf8_lossy(&out.stderr);
    assert!(summary.contains("type I"));
}

#[test]
fn qe_analyze_twenty_iii() {
    let out = k3div(&[
        "qe",
        "analyze",
        "--field",
        "gf2",
        "--phi",
        "1",
        "--a",
        "0",
        "--psi",
        "t^5+t^2+1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["n_III"], 20);
    assert_eq!(v["sigma"], 9);
    assert_eq!(v["r"], 1);
    assert_eq!(v["certificates"][0]["n"], 20);
    assert_eq!(v["certificates"][0]["verified"], true);
}

#[test]
fn field_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_k3div"))
        .args([
            "qe",
            "analyze",
            "--phi",
            "1",
            "--a",
            "0",
            "--psi",
            "t^5+t^2+1",
        ])
        .env("K3DIV_FIELD", "gf4")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(json_of(&out)["field"]
        .as_str()
        .unwrap()
        .starts_with("gf(2^2"));
}

#[test]
fn divisible_check_exit_codes() {
    let yes = k3div(&["divisible", "check", "--spec", "A1^2", "--class", "2,-4"]);
    assert_eq!(yes.status.code(), Some(0));
    let v = json_of(&yes);
    assert_eq!(v["divisible"], true);
    assert_eq!(v["witness"]["half"], serde_json::json!(["1", "-2"]));

    let no = k3div(&["divisible", "check", "--spec", "A1^2", "--class", "1 0"]);
    assert_eq!(no.status.code(), Some(1));
    assert_eq!(json_of(&no)["divisible"], false);
}

#[test]
fn sing_classify_e8() {
    let out = k3div(&["sing", "classify", "--f", "t^3 + s^5", "--quiet"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stderr.is_empty());
    let v = json_of(&out);
    assert_eq!(v["type"], "E8^0");
    assert_eq!(v["colength"], 8);
}

#[test]
fn catalog_cells() {
    let out = k3div(&["catalog", "verify", "--cell", "20,1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["status"], "impossible (external)");
    assert_eq!(v["evidence"]["kind"], "external");

    let out = k3div(&["catalog", "verify", "--cell", "16,6"]);
    let v = json_of(&out);
    assert_eq!(v["status"], "realizable");
    assert_eq!(v["evidence"]["verified"], true);
}

#[test]
fn catalog_verify_all() {
    let out = k3div(&["catalog", "verify", "--quiet"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["matrix"]["cells"].as_array().unwrap().len(), 40);
}

#[test]
fn parse_errors_exit_two() {
    for args in [
        &["lattice", "info", "--spec", "U+X"][..],
        &["divisible", "check", "--spec", "A1", "--class", "x"],
        &[
            "qe", "analyze", "--field", "gf3", "--phi", "1", "--a", "0", "--psi", "1",
        ],
        &["catalog", "verify", "--cell", "9,1"],
        &["lattice", "info", "--bogus", "1"],
        &["lattice"],
    ] {
        let out = k3div(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn output_file_and_determinism() {
    let dir = std::env::temp_dir().join(format!("k3div-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let p = path.to_str().unwrap();
    let args = ["lattice", "info", "--spec", "U+D4+E8^2", "--output", p];
    assert_eq!(k3div(&args).status.code(), Some(0));
    let first = std::fs::read(&path).unwrap();
    assert_eq!(k3div(&args).status.code(), Some(0));
    assert_eq!(first, std::fs::read(&path).unwrap());
    let stdout = k3div(&["lattice", "info", "--spec", "U+D4+E8^2"]).stdout;
    assert_eq!(first, stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn keys_are_sorted() {
    let out = k3div(&["catalog", "verify", "--cell", "12,3"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let top: Vec<&str> = text
        .lines()
        .filter(|l| l.starts_with("  \"") && !l.starts_with("   "))
        .map(|l| l.trim().split('"').nth(1).unwrap())
        .collect();
    let mut sorted = top.clone();
    sorted.sort();
    assert_eq!(top, sorted);
}
