//! End-to-end tests of the `jspec` binary: exit-code contract, JSON output
//! stability, and the documented behaviour of each subcommand.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn jspec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jspec"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path_str(p: &Path) -> String {
    p.display().to_string()
}

struct Workspace {
    _dir: tempfile::TempDir,
    extremal_a: PathBuf,
    extremal_b: PathBuf,
    normal_a: PathBuf,
    normal_b: PathBuf,
    root: PathBuf,
}

fn workspace() -> Workspace {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path().to_path_buf();
    let extremal_a = root.join("extremal_a.json");
    let extremal_b = root.join("extremal_b.json");
    let normal_a = root.join("normal_a.json");
    let normal_b = root.join("normal_b.json");

    let out = jspec(&[
        "gen",
        "--n",
        "3",
        "--m",
        "2",
        "--kind",
        "extremal",
        "--out",
        &path_str(&extremal_a),
        "--out-b",
        &path_str(&extremal_b),
    ]);
    assert!(out.status.success());

    let out = jspec(&[
        "gen",
        "--n",
        "4",
        "--m",
        "2",
        "--seed",
        "9",
        "--kind",
        "normal",
        "--perturb",
        "0.02",
        "--out",
        &path_str(&normal_a),
        "--out-b",
        &path_str(&normal_b),
    ]);
    assert!(out.status.success());

    Workspace {
        _dir: dir,
        extremal_a,
        extremal_b,
        normal_a,
        normal_b,
        root,
    }
}

#[test]
fn exit_codes_contract() {
    let ws = workspace();

    // 0: bound holds
    let out = jspec(&[
        "verify",
        "--input",
        &path_str(&ws.extremal_a),
        "--perturbed",
        &path_str(&ws.extremal_b),
        "--bound",
        "remark",
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");

    // 1: bound violated (forced by a negative verification tolerance), with
    // the report still written
    let report_path = ws.root.join("violated.json");
    let out = jspec(&[
        "verify",
        "--input",
        &path_str(&ws.normal_a),
        "--perturbed",
        &path_str(&ws.normal_b),
        "--bound",
        "normal",
        "--tol=-1",
        "--out",
        &path_str(&report_path),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let report: Value =
        serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    assert_eq!(report["holds"], Value::Bool(false));

    // 2: usage error
    let out = jspec(&[
        "gen", "--n", "0", "--m", "1", "--kind", "normal", "--out", "x.json",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = jspec(&["verify", "--unknown-flag"]);
    assert_eq!(out.status.code(), Some(2));

    // 3: I/O failure
    let out = jspec(&[
        "spectrum",
        "--input",
        &path_str(&ws.root.join("missing.json")),
    ]);
    assert_eq!(out.status.code(), Some(3));

    // 4: hypothesis failure (nilpotent tuple is not normal)
    let out = jspec(&[
        "verify",
        "--input",
        &path_str(&ws.extremal_a),
        "--perturbed",
        &path_str(&ws.extremal_b),
        "--bound",
        "normal",
    ]);
    assert_eq!(out.status.code(), Some(4));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("not normal"), "stderr: {stderr}");

    // 5: capacity exceeded with --require-oracle
    let out = jspec(&[
        "clifford",
        "--input",
        &path_str(&ws.extremal_a),
        "--materialize-limit",
        "2",
        "--require-oracle",
    ]);
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn spectrum_outputs() {
    let ws = workspace();

    // extremal A has circulant members: eigenvalues k * roots of unity
    let out = jspec(&[
        "spectrum",
        "--input",
        &path_str(&ws.extremal_a),
        "--method",
        "normal",
        "--json",
    ]);
    assert!(out.status.success());
    let parsed: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(parsed["n"], 3);
    assert_eq!(parsed["m"], 2);
    assert_eq!(parsed["transform_kind"], "unitary");
    let rows = parsed["eigenvalues"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    let mut found_unit = false;
    for row in rows {
        let coords = row.as_array().unwrap();
        let re0 = coords[0][0].as_f64().unwrap();
        let im0 = coords[0][1].as_f64().unwrap();
        let re1 = coords[1][0].as_f64().unwrap();
        let im1 = coords[1][1].as_f64().unwrap();
        // second coordinate is twice the first
        assert!((re1 - 2.0 * re0).abs() < 1e-9);
        assert!((im1 - 2.0 * im0).abs() < 1e-9);
        if (re0 - 1.0).abs() < 1e-9 && im0.abs() < 1e-9 {
            found_unit = true;
        }
    }
    assert!(found_unit, "expected the unit root eigenvalue");
    assert!(parsed["residual"].as_f64().unwrap() < 1e-10);

    // non-commuting input fails the hypothesis check with exit 4
    let bad_path = ws.root.join("noncommuting.json");
    let bad = serde_json::json!({
        "schema_version": "jspec-1",
        "n": 2,
        "m": 2,
        "matrices": [
            [[[0.0, 0.0], [1.0, 0.0]], [[1.0, 0.0], [0.0, 0.0]]],
            [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [-1.0, 0.0]]]
        ]
    });
    std::fs::write(&bad_path, serde_json::to_string(&bad).unwrap()).unwrap();
    let out = jspec(&["spectrum", "--input", &path_str(&bad_path)]);
    assert_eq!(out.status.code(), Some(4));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("not commuting"), "stderr: {stderr}");

    // general method on a diagonal tuple agrees with the normal method
    let out = jspec(&[
        "spectrum",
        "--input",
        &path_str(&ws.normal_a),
        "--method",
        "general",
        "--json",
    ]);
    assert!(out.status.success());
    let parsed: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(parsed["transform_kind"], "general");
}

#[test]
fn verify_json_is_schema_stable() {
    let ws = workspace();
    let run = || {
        let out = jspec(&[
            "verify",
            "--input",
            &path_str(&ws.normal_a),
            "--perturbed",
            &path_str(&ws.normal_b),
            "--bound",
            "normal",
            "--seed",
            "5",
            "--json",
        ]);
        assert_eq!(out.status.code(), Some(0));
        out.stdout
    };
    let first = run();
    let second = run();
    assert_eq!(first, second, "verify --json must be run-to-run stable");
    let parsed: Value = serde_json::from_slice(&first).unwrap();
    for key in [
        "bound_kind",
        "permutation",
        "lhs",
        "lhs_sqrt",
        "rhs",
        "slack",
        "holds",
        "hypothesis_a",
        "hypothesis_b",
        "tolerances",
        "seed",
    ] {
        assert!(parsed.get(key).is_some(), "missing key {key}");
    }
    assert_eq!(parsed["holds"], Value::Bool(true));
}

#[test]
fn clifford_outputs() {
    let ws = workspace();
    let out = jspec(&["clifford", "--input", &path_str(&ws.extremal_a), "--json"]);
    assert!(out.status.success());
    let parsed: Value = serde_json::from_slice(&out.stdout).unwrap();
    let structured = parsed["structured_frobenius"].as_f64().unwrap();
    let oracle = parsed["oracle_frobenius"].as_f64().unwrap();
    // 2^m sum_k ||k C_3||_F^2 = 4 * (3 + 12) = 60
    assert!((structured - 60f64.sqrt()).abs() < 1e-10);
    assert!(parsed["difference"].as_f64().unwrap() <= 1e-10 * structured.max(1.0));
    assert!((structured - oracle).abs() <= 1e-10 * structured);
    assert_eq!(parsed["trace"][0].as_f64().unwrap(), 0.0);
    assert_eq!(parsed["trace"][1].as_f64().unwrap(), 0.0);

    // over capacity without --require-oracle: exit 0, oracle omitted
    let out = jspec(&[
        "clifford",
        "--input",
        &path_str(&ws.extremal_a),
        "--materialize-limit",
        "2",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let parsed: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(parsed["oracle_frobenius"].is_null());
}

#[test]
fn experiment_csv_contract() {
    let ws = workspace();
    let csv_path = ws.root.join("trials.csv");
    let out = jspec(&[
        "experiment",
        "--trials",
        "6",
        "--n",
        "3",
        "--m",
        "2",
        "--bound",
        "remark",
        "--seed",
        "21",
        "--perturb-scale",
        "0.05",
        "--csv",
        &path_str(&csv_path),
        "--json",
    ]);
    assert!(out.status.success());
    let summary: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(summary["trials"], 6);
    assert_eq!(summary["all_hold"], Value::Bool(true));

    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "trial,seed,lhs,rhs,slack,ratio,holds");
    assert_eq!(lines.len(), 8, "6 trials + header + summary");
    for (i, line) in lines.iter().enumerate().skip(1).take(6) {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 7);
        assert_eq!(fields[0], (i - 1).to_string());
        assert_eq!(fields[6], "true");
    }
    assert!(lines[7].starts_with("summary,21,"));

    // header-only CSV for zero trials
    let empty_path = ws.root.join("empty.csv");
    let out = jspec(&[
        "experiment",
        "--trials",
        "0",
        "--n",
        "3",
        "--m",
        "1",
        "--bound",
        "normal",
        "--csv",
        &path_str(&empty_path),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        std::fs::read_to_string(&empty_path).unwrap(),
        "trial,seed,lhs,rhs,slack,ratio,holds\n"
    );
}

#[test]
fn birkhoff_outputs() {
    let ws = workspace();

    // identical tuples: W = I, single identity term
    let out = jspec(&[
        "birkhoff",
        "--input",
        &path_str(&ws.normal_a),
        "--perturbed",
        &path_str(&ws.normal_a),
        "--json",
    ]);
    assert!(out.status.success());
    let parsed: Value = serde_json::from_slice(&out.stdout).unwrap();
    let terms = parsed["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 1);
    assert!((terms[0]["weight"].as_f64().unwrap() - 1.0).abs() < 1e-10);
    assert_eq!(terms[0]["permutation"], serde_json::json!([1, 2, 3, 4]));
    assert!(parsed["reconstruction_error"].as_f64().unwrap() <= 1e-8);

    // perturbed pair: reconstruction stays within the module invariant
    let out = jspec(&[
        "birkhoff",
        "--input",
        &path_str(&ws.normal_a),
        "--perturbed",
        &path_str(&ws.normal_b),
        "--json",
    ]);
    assert!(out.status.success());
    let parsed: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(parsed["reconstruction_error"].as_f64().unwrap() <= 1e-8);

    // non-normal tuple fails the hypothesis with exit 4
    let out = jspec(&[
        "birkhoff",
        "--input",
        &path_str(&ws.extremal_a),
        "--perturbed",
        &path_str(&ws.extremal_b),
    ]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn gen_json_manifest_and_round_trip() {
    let ws = workspace();
    let out_a = ws.root.join("manifest_a.json");
    let out = jspec(&[
        "gen",
        "--n",
        "2",
        "--m",
        "1",
        "--seed",
        "3",
        "--kind",
        "normal",
        "--out",
        &path_str(&out_a),
        "--json",
    ]);
    assert!(out.status.success());
    let manifest: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(manifest["command"], "gen");
    assert_eq!(manifest["written"].as_array().unwrap().len(), 1);

    let tuple_file: Value =
        serde_json::from_str(&std::fs::read_to_string(&out_a).unwrap()).unwrap();
    assert_eq!(tuple_file["schema_version"], "jspec-1");
    assert_eq!(tuple_file["n"], 2);
    assert_eq!(tuple_file["m"], 1);
    assert_eq!(tuple_file["metadata"]["seed"], 3);

    // extremal requires --out-b
    let out = jspec(&[
        "gen",
        "--n",
        "3",
        "--m",
        "1",
        "--kind",
        "extremal",
        "--out",
        &path_str(&ws.root.join("lone.json")),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_tuple_file_is_an_io_failure() {
    let ws = workspace();
    let bad_path = ws.root.join("nan.json");
    let bad = r#"{"schema_version":"jspec-1","n":1,"m":1,"matrices":[[[[null,0.0]]]]}"#;
    std::fs::write(&bad_path, bad).unwrap();
    let out = jspec(&["spectrum", "--input", &path_str(&bad_path)]);
    assert_eq!(out.status.code(), Some(3));

    // scale-zero experiment: rhs is zero, ratios are NaN, but the run
    // completes and stays deterministic
    let csv = ws.root.join("zero_scale.csv");
    let out = jspec(&[
        "experiment",
        "--trials",
        "3",
        "--n",
        "3",
        "--m",
        "1",
        "--bound",
        "normal",
        "--seed",
        "2",
        "--perturb-scale",
        "0",
        "--csv",
        &path_str(&csv),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 5, "3 trials + header + summary");
}
