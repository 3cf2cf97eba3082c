//! End-to-end tests of the binary: output formats, determinism, guard
//! behavior, and exit codes.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn hochster(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hochster"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}, stderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn write_complex(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn four_cycle_file(dir: &Path) -> String {
    write_complex(
        dir,
        "four_cycle.json",
        r#"{"n": 4, "facets": [[1,2],[2,3],[3,4],[1,4]]}"#,
    )
}

#[test]
fn betti_table_of_the_four_cycle() {
    let dir = tempfile::tempdir().unwrap();
    let file = four_cycle_file(dir.path());

    let out = hochster(&["betti", &file]);
    let value: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    let entries = value["entries"].as_array().unwrap();
    let triples: Vec<(u64, u64, u64)> = entries
        .iter()
        .map(|e| {
            (
                e["i"].as_u64().unwrap(),
                e["j"].as_u64().unwrap(),
                e["beta"].as_u64().unwrap(),
            )
        })
        .collect();
    assert_eq!(triples, vec![(0, 0, 1), (1, 2, 2), (2, 4, 1)]);

    let csv = stdout_of(&hochster(&["betti", &file, "--format", "csv"]));
    assert_eq!(csv, "i,j,beta\n0,0,1\n1,2,2\n2,4,1\n");

    let filtered = stdout_of(&hochster(&["betti", &file, "--entry", "1,2"]));
    let value: serde_json::Value = serde_json::from_str(&filtered).unwrap();
    assert_eq!(value["entries"].as_array().unwrap().len(), 1);
    assert_eq!(value["entries"][0]["beta"], 2);
}

#[test]
fn zk_vectors() {
    let dir = tempfile::tempdir().unwrap();
    let cyc = four_cycle_file(dir.path());
    assert_eq!(
        stdout_of(&hochster(&["zk", &cyc])).trim(),
        "[1,0,0,2,0,0,1]"
    );

    let two = write_complex(dir.path(), "two.json", r#"{"n": 2, "facets": [[1],[2]]}"#);
    assert_eq!(stdout_of(&hochster(&["zk", &two])).trim(), "[1,0,0,1]");

    let edge = write_complex(dir.path(), "edge.json", r#"{"n": 2, "facets": [[1,2]]}"#);
    assert_eq!(stdout_of(&hochster(&["zk", &edge])).trim(), "[1]");
}

#[test]
fn sample_extremes_and_determinism() {
    let full = stdout_of(&hochster(&[
        "sample", "--n", "5", "--d", "2", "--p", "1", "--seed", "9",
    ]));
    let value: serde_json::Value = serde_json::from_str(&full).unwrap();
    // p = 1: every 2-simplex present, C(5,3) = 10 facets of size 3.
    let facets = value["facets"].as_array().unwrap();
    assert_eq!(facets.len(), 10);
    assert!(facets.iter().all(|f| f.as_array().unwrap().len() == 3));

    let empty = stdout_of(&hochster(&[
        "sample", "--n", "5", "--d", "2", "--p", "0", "--seed", "9",
    ]));
    let value: serde_json::Value = serde_json::from_str(&empty).unwrap();
    let facets = value["facets"].as_array().unwrap();
    assert_eq!(facets.len(), 10); // the full 1-skeleton: C(5,2) edges
    assert!(facets.iter().all(|f| f.as_array().unwrap().len() == 2));

    let a = hochster(&[
        "sample", "--n", "6", "--d", "1", "--p", "0.5", "--seed", "42",
    ]);
    let b = hochster(&[
        "sample", "--n", "6", "--d", "1", "--p", "0.5", "--seed", "42",
    ]);
    assert_eq!(a.stdout, b.stdout);
    let c = hochster(&[
        "sample", "--n", "6", "--d", "1", "--p", "0.5", "--seed", "42", "--trial", "1",
    ]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn dump_reload_recompute_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("sample.json");
    let out = hochster(&[
        "sample",
        "--n",
        "6",
        "--d",
        "2",
        "--p",
        "0.6",
        "--seed",
        "11",
        "--out",
        dump.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let t1 = hochster(&["betti", dump.to_str().unwrap()]);
    let t2 = hochster(&["betti", dump.to_str().unwrap()]);
    assert_eq!(t1.stdout, t2.stdout);
    // Re-dump the loaded complex: loading its own dump is the identity.
    let text = fs::read_to_string(&dump).unwrap();
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(value["n"], 6);
}

#[test]
fn limit_poly_outputs() {
    let f3 = stdout_of(&hochster(&[
        "limit-poly",
        "--d",
        "1",
        "--j",
        "3",
        "--kind",
        "f",
    ]));
    let value: serde_json::Value = serde_json::from_str(&f3).unwrap();
    assert_eq!(value["coeffs"], serde_json::json!([2, -3, 0, 1]));

    let g3 = stdout_of(&hochster(&[
        "limit-poly",
        "--d",
        "1",
        "--j",
        "3",
        "--kind",
        "g",
    ]));
    let value: serde_json::Value = serde_json::from_str(&g3).unwrap();
    assert_eq!(value["coeffs"], serde_json::json!([0, 0, 0, 1]));

    let g4 = stdout_of(&hochster(&[
        "limit-poly",
        "--d",
        "1",
        "--j",
        "4",
        "--kind",
        "g",
    ]));
    let value: serde_json::Value = serde_json::from_str(&g4).unwrap();
    assert_eq!(value["coeffs"], serde_json::json!([0, 0, 0, 4, 3, -6, 2]));

    let var = stdout_of(&hochster(&[
        "limit-poly",
        "--d",
        "1",
        "--j",
        "2",
        "--kind",
        "var",
    ]));
    let value: serde_json::Value = serde_json::from_str(&var).unwrap();
    assert_eq!(value["coeffs"], serde_json::json!([0, 1, -1]));

    let cov = stdout_of(&hochster(&[
        "limit-poly",
        "--d",
        "1",
        "--j",
        "3",
        "--kind",
        "cov",
        "--m",
        "2",
    ]));
    let value: serde_json::Value = serde_json::from_str(&cov).unwrap();
    assert_eq!(value["coeffs"], serde_json::json!([0, 1, -1, -2, 2, 1, -1]));
    assert_eq!(value["m"], 2);

    let missing_m = hochster(&["limit-poly", "--d", "1", "--j", "3", "--kind", "cov"]);
    assert_eq!(missing_m.status.code(), Some(2));
    let stray_i = hochster(&[
        "limit-poly",
        "--d",
        "1",
        "--j",
        "3",
        "--kind",
        "f",
        "--i",
        "2",
    ]);
    assert_eq!(stray_i.status.code(), Some(2));
}

#[test]
fn guard_and_parse_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    // 25 labels force a 2^25-subset full-table sweep, over the guard.
    let big = write_complex(
        dir.path(),
        "big.json",
        r#"{"n": 25, "facets": [[1,2],[3,4,5]]}"#,
    );
    let out = hochster(&["betti", &big]);
    assert_eq!(out.status.code(), Some(3), "guard refusal is exit 3");
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(
        msg.contains("guard"),
        "diagnostic mentions the guard: {msg}"
    );

    let bad = write_complex(dir.path(), "bad.json", r#"{"n": 2, "facets": [[5]]}"#);
    assert_eq!(hochster(&["betti", &bad]).status.code(), Some(2));
    let garbled = write_complex(dir.path(), "garbled.json", "{not json");
    assert_eq!(hochster(&["betti", &garbled]).status.code(), Some(2));
    assert_eq!(
        hochster(&["betti", "/nonexistent.json"]).status.code(),
        Some(2)
    );

    // Unknown flags are clap's usage error, also exit 2.
    assert_eq!(hochster(&["betti", "--frobnicate"]).status.code(), Some(2));
}

#[test]
fn converge_single_deterministic_cell() {
    let dir = tempfile::tempdir().unwrap();
    let out_base = dir.path().join("cells");
    let csv = stdout_of(&hochster(&[
        "converge",
        "--p-grid",
        "1.0",
        "--n-grid",
        "8",
        "--trials",
        "3",
        "--format",
        "csv",
        "--out",
        out_base.to_str().unwrap(),
    ]));
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "d,j,i,p,n,trials,mean,std_err,limit,abs_dev"
    );
    let row = lines.next().unwrap();
    let fields: Vec<&str> = row.split(',').collect();
    assert_eq!(fields[0..3], ["1", "3", "2"]);
    assert_eq!(fields[6], "0.0000000000000000e0"); // mean
    assert_eq!(fields[9], "0.0000000000000000e0"); // abs_dev

    // --out writes the CSV and the JSON mirror.
    let csv_file = fs::read_to_string(dir.path().join("cells.csv")).unwrap();
    assert_eq!(csv_file.trim_end(), csv.trim_end());
    let json_file = fs::read_to_string(dir.path().join("cells.json")).unwrap();
    let rows: serde_json::Value = serde_json::from_str(&json_file).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 1);
    assert_eq!(rows[0]["n"], 8);
}

#[test]
fn converge_config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("config.json");
    fs::write(
        &config,
        r#"{"d": 1, "j": 2, "i": 1, "p_grid": [0.5], "n_grid": [5, 6], "trials": 4, "seed": 3, "field": "f2"}"#,
    )
    .unwrap();
    // Flag overrides the config's n_grid; everything else comes from it.
    let csv = stdout_of(&hochster(&[
        "converge",
        "--config",
        config.to_str().unwrap(),
        "--n-grid",
        "7",
        "--format",
        "csv",
    ]));
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 2, "one header and one row: {csv}");
    let fields: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(fields[0..3], ["1", "2", "1"]);
    assert_eq!(fields[4], "7");
    assert_eq!(fields[5], "4"); // trials from the config file

    let broken = dir.path().join("broken.json");
    fs::write(&broken, r#"{"d": 1, "tirals": 4}"#).unwrap();
    let out = hochster(&["converge", "--config", broken.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("tirals"), "field-level diagnostic: {msg}");
}

#[test]
fn worker_count_does_not_change_output() {
    let args = [
        "converge", "--p-grid", "0.4", "--n-grid", "6,7", "--trials", "30", "--format", "csv",
    ];
    let mut one = vec!["--workers", "1"];
    one.extend_from_slice(&args);
    let mut four = vec!["--workers", "4"];
    four.extend_from_slice(&args);
    let a = hochster(&one);
    let b = hochster(&four);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(
        hochster(&["--workers", "0", "betti", "x"]).status.code(),
        Some(2)
    );
}

#[test]
fn var_scale_refuses_deterministic_grid() {
    let out = hochster(&[
        "var-scale",
        "--p",
        "1.0",
        "--n-grid",
        "6,8,10",
        "--trials",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("zero-variance"), "{msg}");
}

#[test]
fn var_scale_reports_slope() {
    let csv = stdout_of(&hochster(&[
        "var-scale",
        "--n-grid",
        "6,8,10",
        "--trials",
        "40",
        "--format",
        "csv",
    ]));
    assert!(csv.starts_with("d,j,i,p,n,trials,mean,variance,excluded\n"));
    assert!(csv.contains("# fitted_slope="), "{csv}");
}

#[test]
fn cov_check_reports_exact_value() {
    let json = stdout_of(&hochster(&["cov-check", "--m", "2", "--trials", "200"]));
    let value: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(value["n"], 4);
    assert_eq!(value["i"], 2);
    let exact = value["exact"].as_f64().unwrap();
    assert!((exact - 0.140625).abs() < 1e-12);
}

#[test]
fn taylor_check_agrees_on_the_four_cycle() {
    let dir = tempfile::tempdir().unwrap();
    let file = four_cycle_file(dir.path());
    let json = stdout_of(&hochster(&["taylor-check", &file]));
    let value: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(value["equal"], true);
    assert_eq!(value["table"]["entries"].as_array().unwrap().len(), 3);
    // Same check over the rationals.
    let json = stdout_of(&hochster(&["taylor-check", &file, "--field", "q"]));
    let value: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(value["equal"], true);
}

#[test]
fn field_flag_switches_the_coefficients() {
    let dir = tempfile::tempdir().unwrap();
    // Projective plane: torsion makes f2 and q tables differ.
    let rp2 = write_complex(
        dir.path(),
        "rp2.json",
        r#"{"n": 6, "facets": [[1,2,3],[1,3,4],[1,4,5],[1,5,6],[1,2,6],[2,3,5],[3,4,6],[2,4,5],[3,5,6],[2,4,6]]}"#,
    );
    let over_f2 = stdout_of(&hochster(&["betti", &rp2, "--field", "f2"]));
    let over_q = stdout_of(&hochster(&["betti", &rp2, "--field", "q"]));
    assert_ne!(over_f2, over_q);
    assert_eq!(
        hochster(&["betti", &rp2, "--field", "f9"]).status.code(),
        Some(2)
    );
}
