use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn cbhom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cbhom")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path.display().to_string()
}

#[test]
fn idempotents_of_z4() {
    let out = cbhom(&["idempotent-scan", "Z4"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let g = &r["result"]["groups"][0];
    assert_eq!(g["subsets"], 15);
    assert_eq!(g["norm_one"], 7);
    assert_eq!(g["cosets"], 7);
}

#[test]
fn scan_of_z2_into_z2() {
    let out = cbhom(&["theorem-scan", "Z2", "Z2"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["result"]["total"], 9);
    assert_eq!(r["result"]["affine"], 8);
    assert_eq!(r["result"]["inconsistent"], 0);
}

#[test]
fn scan_over_budget_is_an_input_error() {
    let out = cbhom(&["theorem-scan", "Z12", "Z12"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(json(&out)["error"].as_str().unwrap().contains("budget"));
}

#[test]
fn non_homomorphism_is_rejected() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "sum.map", "map Z2 -> Z2\nmatrix\n1 1\n0 0\n");
    let out = cbhom(&["classify", &f]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["status"], "input-error");
}

#[test]
fn saeki_restriction() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "sa.map", "map Z4 -> Z4\ndomain 0 1\n0 -> 0\n1 -> 1\n");
    let r = json(&cbhom(&["classify", &f]));
    assert_eq!(r["result"]["is_affine"], false);
    assert_eq!(r["result"]["completely_contractive"], "NotContractive");
    let lower = r["result"]["cb"]["lower"].as_f64().unwrap();
    assert!((lower - (1.0 + 2f64.sqrt()) / 2.0).abs() < 1e-6);

    let r = json(&cbhom(&["cbnorm", &f]));
    assert_eq!(r["exit_code"], 0);
}

#[test]
fn norm_accepts_sets_and_complex_values() {
    let r = json(&cbhom(&["norm", "Z4", "{0,2}"]));
    assert!((r["result"]["a_norm"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert_eq!(r["result"]["positive_definite"], true);
    let out = cbhom(&["norm", "S3", "1,0.5+0.5i,-2i,0,0,1e-1"]);
    assert_eq!(out.status.code(), Some(0));
    let out = cbhom(&["norm", "Z4", "1,2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn lattice_commands() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "eo.lat", "dim 2\nsplit 1\neven := (0,0) + span{(2,2)}\nodd := (1,2) + span{(2,2)}\n");
    let r = json(&cbhom(&["lattice", "decompose", &f]));
    assert_eq!(r["exit_code"], 0);
    assert_eq!(r["result"]["pieces"].as_array().unwrap().len(), 2);

    let f = write(&dir, "gap.lat", "dim 1\n0 + span{2}\n1 + span{4}\n");
    let r = json(&cbhom(&["lattice", "cover", &f]));
    assert_eq!(r["result"]["covered"], false);
    let x = r["result"]["witness"][0].as_i64().unwrap();
    assert!(x.rem_euclid(4) == 3);

    let f = write(&dir, "full.lat", "dim 1\n0 + span{2}\n1 + span{4}\n3 + span{4}\n");
    assert_eq!(json(&cbhom(&["lattice", "cover", &f]))["result"]["covered"], true);
}

#[test]
fn out_file_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("report.json");
    let run = || {
        let o = cbhom(&["--seed", "7", "--out", out.to_str().unwrap(), "theorem-scan", "S3", "Z2"]);
        assert_eq!(o.status.code(), Some(0));
        std::fs::read(&out).unwrap()
    };
    let (x, y) = (run(), run());
    assert_eq!(x, y);
    let r: Value = serde_json::from_slice(&x).unwrap();
    assert_eq!(r["config"]["seed"], 7);
}

#[test]
fn unknown_group_is_an_input_error() {
    assert_eq!(cbhom(&["diagonal", "Z7"]).status.code(), Some(2));
}

#[test]
fn extra_catalog_entries_are_usable() {
    let dir = TempDir::new().unwrap();
    let c = write(&dir, "extra.cat", "[Z7]\n0 1 2 3 4 5 6\n1 2 3 4 5 6 0\n2 3 4 5 6 0 1\n3 4 5 6 0 1 2\n4 5 6 0 1 2 3\n5 6 0 1 2 3 4\n6 0 1 2 3 4 5\n");
    let out = cbhom(&["--catalog", &c, "idempotent-scan", "Z7"]);
    assert_eq!(out.status.code(), Some(0));
    // subgroups of a prime-order group are trivial or everything, so cosets are points or the whole group
    assert_eq!(json(&out)["result"]["groups"][0]["cosets"], 8);
}
