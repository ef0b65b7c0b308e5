use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use mwtree_core::closed_forms::distance_inverse;
use mwtree_core::linalg::numerical_rank;
use mwtree_core::operators::distance_matrix;
use mwtree_core::{fixtures, DenseMatrix};
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn mwtree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mwtree")).args(args).output().unwrap()
}

fn mwtree_stdin(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_mwtree"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout));
    })
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn matrix(v: &Value) -> DenseMatrix {
    let rows: Vec<Vec<f64>> = serde_json::from_value(v.clone()).unwrap();
    DenseMatrix::from_rows(&rows).unwrap()
}

fn check<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == name)
        .unwrap_or_else(|| panic!("no check named {name}"))
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn build_distance_round_trips_bit_exact() {
    let f = fixture("asymmetric_path4.json");
    let out = mwtree(&["build", path_str(&f), "--which", "d"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let r = json(&out);
    assert_eq!(r["schema"], "mwtree.report/v1");
    assert_eq!(r["command"], "build");
    assert_eq!(r["input"]["sha256"].as_str().unwrap().len(), 64);
    let d = matrix(&r["matrices"]["D"]);
    assert_eq!(d, fixtures::asymmetric_path4_distance());
    assert_eq!(&d, distance_matrix(&fixtures::asymmetric_path4()).unwrap().as_dense());
}

#[test]
fn build_laplacian_matches_hand_assembly() {
    let f = fixture("asymmetric_path4.json");
    let out = mwtree(&["build", path_str(&f), "--which", "L", "--mode", "inverted"]);
    assert!(out.status.success());
    assert_eq!(matrix(&json(&out)["matrices"]["L"]), fixtures::asymmetric_path4_laplacian());

    let out = mwtree(&["build", path_str(&f), "--which", "l", "--mode", "raw"]);
    assert!(out.status.success());
    let l = matrix(&json(&out)["matrices"]["L"]);
    // Raw weights: diagonal block of vertex 2 is W₁ + W₂, off-diagonal is -W₂.
    assert_eq!(l.submatrix(2, 2, 2, 2), DenseMatrix::from_rows(&[[2.0, 2.0], [1.0, 1.0]]).unwrap());
    assert_eq!(l.submatrix(2, 4, 2, 2), DenseMatrix::from_rows(&[[0.0, -2.0], [-1.0, 0.0]]).unwrap());
}

#[test]
fn build_preconditions_exit_3() {
    let out = mwtree(&["build", path_str(&fixture("diamond.json")), "--which", "d"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("not a tree"));

    let out = mwtree(&["build", path_str(&fixture("asymmetric_path4.json")), "--which", "q"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("not symmetric positive definite"));
}

#[test]
fn invert_passes_and_emits_closed_form() {
    let f = fixture("asymmetric_path4.json");
    let out = mwtree(&["invert", path_str(&f)]);
    assert!(out.status.success());
    let r = json(&out);
    assert!(r.get("matrices").is_none());
    assert!(check(&r, "D·D⁻¹ = I")["residual"].as_f64().unwrap() < 1e-10);
    assert_eq!(r["data"]["delta"], serde_json::json!([1, 0, 0, 1]));

    let out = mwtree(&["invert", path_str(&f), "--emit-matrices"]);
    let inv = matrix(&json(&out)["matrices"]["D_inv"]);
    assert_eq!(&inv, distance_inverse(&fixtures::asymmetric_path4()).unwrap().as_dense());
}

#[test]
fn invert_single_edge() {
    let out = mwtree(&["invert", path_str(&fixture("single_edge.json")), "--emit-matrices"]);
    assert!(out.status.success());
    let inv = matrix(&json(&out)["matrices"]["D_inv"]);
    // W = [[2,1],[1,3]], W⁻¹ = [[3,-1],[-1,2]] / 5
    let w_inv = DenseMatrix::from_rows(&[[0.6, -0.2], [-0.2, 0.4]]).unwrap();
    assert!((&inv.submatrix(0, 2, 2, 2) - &w_inv).max_abs() < 1e-15);
    assert!((&inv.submatrix(2, 0, 2, 2) - &w_inv).max_abs() < 1e-15);
    assert!(inv.submatrix(0, 0, 2, 2).max_abs() < 1e-15);
    assert!(inv.submatrix(2, 2, 2, 2).max_abs() < 1e-15);
}

#[test]
fn invert_singular_sum_exits_4() {
    let out = mwtree(&["invert", path_str(&fixture("singular_sum.json"))]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stderr(&out).contains("sum of edge weights is singular"));
}

#[test]
fn det_from_stdin() {
    let path = r#"{"n":4,"s":1,"edges":[
        {"u":1,"v":2,"weight":[[1]]},{"u":2,"v":3,"weight":[[1]]},{"u":3,"v":4,"weight":[[1]]}]}"#;
    let out = mwtree_stdin(&["det", "-"], path);
    assert!(out.status.success(), "{}", stderr(&out));
    let r = json(&out);
    assert_eq!(r["input"]["path"], "-");
    assert!((r["data"]["value"].as_f64().unwrap() + 12.0).abs() < 1e-12);
    assert_eq!(check(&r, "closed-form det D vs LU")["pass"], true);
}

#[test]
fn verify_identities_skip_incidence_on_asymmetric_weights() {
    let out = mwtree(&["verify", path_str(&fixture("asymmetric_path4.json")), "--suite", "identities"]);
    assert!(out.status.success());
    let r = json(&out);
    let checks = r["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 5);
    for c in &checks[..4] {
        assert_eq!(c["status"], "PASS", "{c}");
        assert!(c["residual"].as_f64().unwrap() <= c["tolerance"].as_f64().unwrap());
    }
    assert_eq!(checks[4]["status"], "SKIPPED");
    assert_eq!(checks[4]["pass"], Value::Null);
    assert!(checks[4]["reason"].as_str().unwrap().contains("positive definite"));
}

#[test]
fn verify_rank_on_swapped_cycle() {
    let out = mwtree(&["verify", path_str(&fixture("swapped_cycle4.json")), "--suite", "rank"]);
    assert!(out.status.success());
    let r = json(&out);
    assert_eq!(r["data"]["rank"]["given_rank"], 5);
    assert_eq!(r["data"]["rank"]["full_rank"], 6);
    assert_eq!(r["data"]["rank"]["branch"], "non_tree");
}

#[test]
fn tight_tolerance_fails_with_exit_1() {
    let f = fixture("asymmetric_path4.json");
    let out = mwtree(&["verify", path_str(&f), "--suite", "identities", "--tolerance", "1e-300"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["passed"], false);
}

#[test]
fn random_then_verify_all() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("graphs");
    let args = [
        "random", "--n", "2..7", "--s", "1..3", "--kind", "spd", "--seed", "11", "--count", "4", "--out",
        path_str(&out_dir),
    ];
    let out = mwtree(&args);
    assert!(out.status.success(), "{}", stderr(&out));
    let manifest = json(&out);
    let files = manifest["files"].as_array().unwrap();
    assert_eq!(files.len(), 4);
    for (i, f) in files.iter().enumerate() {
        assert_eq!(f["seed"], 11 + i as u64);
        let path = f["path"].as_str().unwrap();
        let out = mwtree(&["verify", path, "--suite", "all"]);
        assert!(out.status.success(), "{path}: {}", String::from_utf8_lossy(&out.stdout));
        let r = json(&out);
        for c in r["checks"].as_array().unwrap() {
            assert_eq!(c["status"], "PASS", "{path}: {c}");
        }
    }
}

#[test]
fn random_is_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let out = mwtree(&[
            "random", "--n", "4", "--s", "2", "--kind", "spd", "--seed", "7", "--count", "1", "--out",
            path_str(d.path()),
        ]);
        assert!(out.status.success());
    }
    let fa = std::fs::read(a.path().join("tree-7.json")).unwrap();
    let fb = std::fs::read(b.path().join("tree-7.json")).unwrap();
    assert_eq!(fa, fb);
    let g: Value = serde_json::from_slice(&fa).unwrap();
    assert_eq!(g["n"], 4);
    assert_eq!(g["edges"].as_array().unwrap().len(), 3);
}

#[test]
fn random_nonsingular_weights_are_full_rank() {
    let d = tempfile::tempdir().unwrap();
    let out = mwtree(&[
        "random", "--n", "3..6", "--s", "3", "--kind", "nonsingular", "--count", "5", "--nontree", "--out",
        path_str(d.path()),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    for f in json(&out)["files"].as_array().unwrap() {
        let g: Value = serde_json::from_str(&std::fs::read_to_string(f["path"].as_str().unwrap()).unwrap()).unwrap();
        assert!(g["edges"].as_array().unwrap().len() >= g["n"].as_u64().unwrap() as usize);
        for e in g["edges"].as_array().unwrap() {
            assert_eq!(numerical_rank(&matrix(&e["weight"]), 1e-9), 3);
        }
    }
}

#[test]
fn random_rejects_bad_flags() {
    let d = tempfile::tempdir().unwrap();
    let out = mwtree(&["random", "--n", "1..2", "--s", "1", "--nontree", "--out", path_str(d.path())]);
    assert_eq!(out.status.code(), Some(2));
    let out = mwtree(&["random", "--n", "9..3", "--s", "1", "--out", path_str(d.path())]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn deficient_examples() {
    let out = mwtree(&["deficient", path_str(&fixture("diamond.json"))]);
    assert!(out.status.success());
    let r = json(&out);
    assert_eq!((r["data"]["u"].as_u64(), r["data"]["v"].as_u64()), (Some(1), Some(3)));
    assert_eq!(r["data"]["w"], -1.0);
    assert_eq!(r["data"]["rank"], 2);

    let out = mwtree(&["deficient", path_str(&fixture("unit_cycle4.json")), "--edge", "3-4"]);
    let r = json(&out);
    assert!((r["data"]["w"].as_f64().unwrap() + 1.0 / 3.0).abs() < 1e-15);

    let out = mwtree(&["deficient", path_str(&fixture("asymmetric_path4.json"))]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("is a tree"));

    let out = mwtree(&["deficient", path_str(&fixture("diamond.json")), "--edge", "2-4"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn parse_errors_exit_2_with_location() {
    let out = mwtree_stdin(&["verify", "-"], "{\"n\": 2, \"s\": 1,\n \"edges\": [ {\"u\": 1, \"v\": 2, \"weight\": 5} ]}");
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("edges[0].weight"), "{err}");
    assert!(err.contains("line 2"), "{err}");

    let out = mwtree_stdin(&["verify", "-"], r#"{"n":2,"s":1,"edges":[],"extra":true}"#);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("extra"));

    let out = mwtree_stdin(&["verify", "-"], r#"{"n":3,"s":1,"edges":[{"u":1,"v":2,"weight":[[1]]}]}"#);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("not connected"));

    let out = mwtree(&["verify", "/nonexistent/graph.json"]);
    assert_eq!(out.status.code(), Some(2));

    let out = mwtree(&["verify", path_str(&fixture("diamond.json")), "--suite", "everything"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn text_format_and_matrix_flag() {
    let f = fixture("diamond.json");
    let out = mwtree(&["verify", path_str(&f), "--format", "text"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("overall PASS"));
    assert!(text.contains("SKIP"));

    let out = mwtree(&["verify", path_str(&f), "--emit-matrices"]);
    let r = json(&out);
    assert!(r["matrices"].get("L").is_some());
    assert!(r["matrices"].get("D").is_none());
}
