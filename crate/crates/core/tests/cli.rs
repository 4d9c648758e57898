use std::ffi::OsString;
use std::path::PathBuf;

use abcong::cli::main_with_args;

fn run(args: &[&str]) -> i32 {
    main_with_args(std::iter::once("abcong").chain(args.iter().copied()).map(OsString::from))
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("abcong-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn run_to_string(args: &[&str], name: &str) -> (i32, String) {
    let out = tmp(name);
    let mut a = args.to_vec();
    let s = out.to_str().unwrap().to_string();
    a.extend(["--out", &s]);
    let code = run(&a);
    (code, std::fs::read_to_string(&out).unwrap_or_default())
}

#[test]
fn classify_group_file() {
    let g = tmp("gl2f3.json");
    std::fs::write(
        &g,
        r#"{"field": {"p": 3}, "generators": [[[1,1],[0,1]], [[0,1],[1,0]], [[2,0],[0,1]]]}"#,
    )
    .unwrap();
    let (code, out) = run_to_string(&["classify", "--group", g.to_str().unwrap(), "--format", "json"], "c.json");
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["dickson"]["label"], "S4");
    assert_eq!(v["c"], "3/8");
    assert_eq!(v["order"], 48);
}

#[test]
fn analyze_reports_consistency() {
    let (code, out) = run_to_string(
        &["analyze", "--field", "5", "--gen", "1,1,0,1", "--gen", "2,0,0,1", "--format", "json"],
        "a.json",
    );
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["totally"], true);
    assert_eq!(v["consistent"], true);
    // The coset with diagonal entry -1 has constant trace 0.
    assert_eq!(v["per_class"]["0"]["weak"], true);
}

#[test]
fn verify_delta() {
    let (code, out) = run_to_string(&["verify", "--delta", "--ell", "23", "--pmax", "10000"], "v.txt");
    assert_eq!(code, 0);
    assert!(out.contains("1228 primes"));
    assert!(out.contains("0 exceptions"));
}

#[test]
fn verify_rows_fails_with_exit_two() {
    let rows = tmp("rows.json");
    std::fs::write(&rows, r#"[{"traces": [0], "residues": [3], "kind": "iff"}]"#).unwrap();
    let r = rows.to_str().unwrap();
    let args = ["verify", "--curve", "608e", "--ell", "5", "--pmax", "2000", "--rows", r, "--modulus", "4"];
    assert_eq!(run_to_string(&args, "r.txt").0, 2);
    std::fs::write(&rows, r#"[{"traces": [0], "residues": [3], "kind": "residue_implies_trace"}]"#).unwrap();
    assert_eq!(run_to_string(&args, "r.txt").0, 0);
}

#[test]
fn oracle_is_consistent() {
    let (code, out) = run_to_string(&["oracle", "--field", "3"], "o.txt");
    assert_eq!(code, 0);
    assert!(out.contains("55 subgroups"));
    assert!(out.trim_end().ends_with("consistent"));
}

#[test]
fn dataset_roundtrip_through_discover() {
    let (code, csv) = run_to_string(&["dataset", "--curve", "338d", "--ell", "3", "--pmax", "5000"], "d.csv");
    assert_eq!(code, 0);
    assert!(csv.starts_with("p,ap_mod\n"));
    let path = tmp("d.csv");
    let (code, out) = run_to_string(
        &["discover", "--input", path.to_str().unwrap(), "--level", "338", "--ell", "3", "--case", "dihedral-weak", "--x", "0", "--format", "json"],
        "s.json",
    );
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["bound"]["bound"], 312);
    assert_eq!(v["per_class"]["0"]["iff"]["modulus"], 39);
}

#[test]
fn output_is_deterministic() {
    let args = ["discover", "--curve", "338d", "--ell", "5", "--pmax", "3000", "--modulus", "65", "--format", "json"];
    let a = run_to_string(&args, "det1.json");
    let b = run_to_string(&args, "det2.json");
    assert_eq!(a.0, 0);
    assert_eq!(a.1, b.1);
    let o1 = run_to_string(&["oracle", "--field", "4", "--format", "json"], "o1.json");
    let o2 = run_to_string(&["oracle", "--field", "4", "--format", "json"], "o2.json");
    assert_eq!(o1.1, o2.1);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&["classify"]), 1);
    assert_eq!(run(&["classify", "--group", "/nonexistent/g.json"]), 1);
    assert_eq!(run(&["dataset", "--curve", "nope", "--ell", "3"]), 1);
    assert_eq!(run(&["dataset", "--delta", "--curve", "11a", "--ell", "3"]), 1);
    assert_eq!(run(&["discover", "--delta", "--ell", "23", "--pmax", "100"]), 1);
    assert_eq!(run(&["oracle", "--field", "6"]), 1);
}
