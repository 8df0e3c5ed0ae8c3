mod common;

use std::path::Path;
use std::process::{Command, Output};

use common::{CsvFile, TABLE_1};
use serde_json::Value;

fn sqrtwell(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sqrtwell"))
        .args(args)
        .env_remove("SQRTWELL_THREADS")
        .output()
        .unwrap()
}

fn code(args: &[&str]) -> i32 {
    sqrtwell(args).status.code().unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json_file(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["--version"]), 0);
    assert_eq!(code(&["bogus"]), 1);
    assert_eq!(code(&["spectrum", "--v0", "0"]), 1);
    assert_eq!(code(&["spectrum", "--v0", "4", "--sigma", "-1"]), 1);
    assert_eq!(code(&["spectrum", "--v0", "nan-ish"]), 1);
    assert_eq!(code(&["spectrum", "--v0", "4", "--config", "/nonexistent/x.toml"]), 1);
}

#[test]
fn thread_cap_is_validated() {
    let out = Command::new(env!("CARGO_BIN_EXE_sqrtwell"))
        .args(["potential", "--v0", "4", "--sigma", "2", "--points", "5"])
        .env("SQRTWELL_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = Command::new(env!("CARGO_BIN_EXE_sqrtwell"))
        .args(["potential", "--v0", "4", "--sigma", "2", "--points", "5"])
        .env("SQRTWELL_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn spectrum_prints_table_digits() {
    for (v0, table) in TABLE_1 {
        let v0s = v0.to_string();
        let out = sqrtwell(&["spectrum", "--m", "1", "--hbar", "1", "--v0", &v0s, "--sigma", "2"]);
        assert!(out.status.success());
        let text = String::from_utf8(out.stderr).unwrap();
        let printed: Vec<f64> = text
            .lines()
            .filter_map(|l| l.trim().strip_prefix("E_"))
            .map(|l| l.split(" = ").nth(1).unwrap().parse().unwrap())
            .collect();
        assert_eq!(printed.len(), table.len(), "V0 = {v0}");
        for (got, want) in printed.iter().zip(table.iter()) {
            let unit = 10f64.powi(want.abs().log10().floor() as i32 - 9);
            assert!(
                (got - want).abs() <= 1.01 * unit,
                "V0 = {v0}: printed {got}, table {want}"
            );
        }
    }
}

#[test]
fn spectrum_csv_layout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    let out = sqrtwell(&["spectrum", "--v0", "6", "--sigma", "2", "--out", path_str(&path)]);
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().contains("4 bound states"));
    let csv = CsvFile::read(&path).unwrap();
    assert_eq!(csv.header, ["index", "E", "residual", "nodes"]);
    assert_eq!(csv.rows.len(), 4);
    let energies = csv.values("E").unwrap();
    for (e, t) in energies.iter().zip(TABLE_1[1].1) {
        assert!((e - t).abs() < 1e-7, "{e} vs {t}");
    }
    let nodes = csv.values("nodes").unwrap();
    assert_eq!(nodes, [0.0, 1.0, 2.0, 3.0]);
    assert!(csv.extras.contains_key("chadan_bound"));
}

#[test]
fn validate_passes_for_table_well() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("v.json");
    let out = sqrtwell(&[
        "validate", "--v0", "6", "--sigma", "2", "--format", "json", "--out", path_str(&path),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json_file(&path);
    let dev = v["results"]["max_eigen_rel_dev"].as_f64().unwrap();
    assert!(dev < 1e-5, "{dev:e}");
    assert_eq!(v["results"]["passed"], Value::Bool(true));
    assert_eq!(v["results"]["oracle_count"].as_u64(), Some(4));
}

#[test]
fn validation_failure_exit_code() {
    let out = sqrtwell(&["validate", "--v0", "4", "--sigma", "2", "--eigen-tol", "1e-30"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 4] = [
        &["potential", "--v0", "4", "--sigma", "2"],
        &["spectrum", "--v0", "4", "--sigma", "2"],
        &["zero-energy", "--v0", "4", "--sigma", "2", "--points", "200"],
        &["phase-shift", "--v0", "4", "--sigma", "2", "--points", "100", "--format", "json"],
    ];
    for (i, args) in cases.iter().enumerate() {
        let mut bytes = Vec::new();
        for run in 0..2 {
            let path = dir.path().join(format!("{i}-{run}"));
            let mut full = args.to_vec();
            full.extend(["--out", path_str(&path)]);
            assert!(sqrtwell(&full).status.success(), "{args:?}");
            bytes.push(std::fs::read(&path).unwrap());
        }
        assert_eq!(bytes[0], bytes[1], "{args:?}");
    }
}

#[test]
fn config_file_with_flags_winning() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("well.toml");
    std::fs::write(&cfg, "m = 1.0\nhbar = 1.0\nv0 = 6.0\nsigma = 2.0\n").unwrap();
    let count = |extra: &[&str]| {
        let path = dir.path().join("out.json");
        let mut args = vec!["spectrum", "--config", path_str(&cfg), "--format", "json"];
        args.extend(extra);
        args.extend(["--out", path_str(&path)]);
        assert!(sqrtwell(&args).status.success());
        let v = json_file(&path);
        (v["rows"].as_array().unwrap().len(), v["params"]["v0"].as_f64().unwrap())
    };
    assert_eq!(count(&[]), (4, 6.0));
    assert_eq!(count(&["--v0", "4"]), (3, 4.0));

    std::fs::write(&cfg, "v0 = 6.0\nunknown = 1\n").unwrap();
    assert_eq!(code(&["spectrum", "--config", path_str(&cfg)]), 1);
}

#[test]
fn json_layout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.json");
    let out = sqrtwell(&[
        "wavefunctions", "--v0", "4", "--sigma", "2", "--points", "50", "--format", "json", "--out",
        path_str(&path),
    ]);
    assert!(out.status.success());
    let v = json_file(&path);
    assert_eq!(v["command"], "wavefunctions");
    let columns = v["columns"].as_array().unwrap();
    assert_eq!(columns[0], "x");
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 50);
    assert!(rows.iter().all(|r| r.as_array().unwrap().len() == columns.len()));
    for key in ["m", "hbar", "v0", "sigma", "v1"] {
        assert!(v["params"][key].is_number(), "{key}");
    }
    assert_eq!(v["params"]["v1"].as_f64(), Some(-4.0));
}

#[test]
fn every_csv_carries_provenance_and_header() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 5] = [
        &["potential", "--points", "20"],
        &["spectrum"],
        &["wavefunctions", "--points", "20"],
        &["zero-energy", "--points", "20"],
        &["phase-shift", "--points", "20"],
    ];
    for (i, args) in cases.iter().enumerate() {
        let path = dir.path().join(format!("{i}.csv"));
        let mut full = args.to_vec();
        full.extend(["--v0", "4", "--sigma", "2", "--out", path_str(&path)]);
        assert!(sqrtwell(&full).status.success(), "{args:?}");
        let text = std::fs::read_to_string(&path).unwrap();
        let first = text.lines().next().unwrap();
        assert!(first.starts_with(&format!("# sqrtwell {} {}", env!("CARGO_PKG_VERSION"), args[0])), "{first}");
        assert!(first.contains("v0=") && first.contains("sigma="));
        let csv = CsvFile::read(&path).unwrap();
        assert!(!csv.header.is_empty());
        assert!(csv.rows.iter().all(|r| r.len() == csv.header.len()));
    }
}
