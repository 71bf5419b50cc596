use std::path::Path;
use std::process::Command;

use kuratowski::cli::{run, EXIT_CONFIG, EXIT_FAIL, EXIT_IO, EXIT_OK};
use serde_json::Value;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("kuratowski").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).unwrap()
}

fn close(v: &Value, expected: f64) -> bool {
    (v.as_f64().unwrap() - expected).abs() <= 1e-12 * expected.abs()
}

#[test]
fn bound_reports_every_quantity() {
    let (code, out, _) = call(&["bound", "--n", "2", "--vol", "1600pi", "--sec", "0.01", "--eps", "0.2"]);
    assert_eq!(code, EXIT_OK);
    let v = json(&out);
    let pi = std::f64::consts::PI;
    assert_eq!(v["schema_version"], 1);
    assert!(close(&v["c_n"], 800.0 * pi));
    assert!(close(&v["scale"]["t"], 1.0));
    assert!(close(&v["required_delta"], 0.1));
    assert!(close(&v["theorem_bound"]["bound"], 320_000.0 * pi * pi));
    assert!(close(&v["lemma32_bound"]["bound"], 320_000.0 * pi * pi));
    assert_eq!(v["theorem_bound"]["formula_tag"], "curvature_scaled");
    assert!(close(&v["sphere_volume_paper"], 2.0));
    assert!(close(&v["sphere_volume_standard"], 2.0 * pi));
}

#[test]
fn bound_rescales_the_packing_volume() {
    // unit 2-sphere: K = 1, t = 10; the packing bound is taken in the rescaled metric
    let (code, out, _) = call(&["bound", "--n", "2", "--vol", "4pi", "--sec", "1", "--eps", "0.2"]);
    assert_eq!(code, EXIT_OK);
    let v = json(&out);
    assert!(close(&v["required_delta"], 0.01));
    let t = v["theorem_bound"]["bound"].as_f64().unwrap();
    assert!(close(&v["lemma32_bound"]["bound"], t));
}

#[test]
fn configuration_errors_exit_two() {
    let cases: &[&[&str]] = &[
        &["bound", "--n", "2", "--vol", "1", "--sec", "0", "--eps", "0.3"],
        &["bound", "--n", "1", "--vol", "1", "--sec", "0", "--eps", "0.2"],
        &["bound", "--n", "2", "--vol", "1", "--sec", "0"],
        &["net", "--torus", "1,1", "--grid", "10"],
        &["net", "--torus", "1,1", "--grid", "10", "--eps", "0.5"],
        &[
            "verify",
            "--torus",
            "1,1",
            "--grid",
            "10",
            "--eps",
            "1.5",
            "--empirical",
        ],
        &["model-check", "--eps", "0.3"],
        &["frobnicate"],
    ];
    for args in cases {
        let (code, _, err) = call(args);
        assert_eq!(code, EXIT_CONFIG, "{args:?}: {err}");
        assert!(!err.is_empty());
    }
}

#[test]
fn missing_files_exit_three() {
    let (code, _, err) = call(&[
        "verify",
        "--points",
        "/nonexistent/points.csv",
        "--eps",
        "0.2",
        "--delta",
        "0.1",
    ]);
    assert_eq!(code, EXIT_IO, "{err}");
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("m.csv");
    std::fs::write(&bad, "0,1\n1,zero\n").unwrap();
    let (code, _, err) = call(&["net", "--matrix", bad.to_str().unwrap(), "--delta", "0.5"]);
    assert_eq!(code, EXIT_IO, "{err}");
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn empirical_eps_warns() {
    let (code, out, err) = call(&["net", "--torus", "1,1", "--grid", "10", "--eps", "0.5", "--empirical"]);
    assert_eq!(code, EXIT_OK);
    assert!(err.contains("warning"));
    assert!(close(&json(&out)["delta"], 0.25));
}

#[test]
fn full_landmark_set_is_isometric() {
    let (code, out, _) = call(&["verify", "--sphere", "2,1", "--count", "100", "--full", "--eps", "0.2"]);
    assert_eq!(code, EXIT_OK);
    let v = json(&out);
    assert!(close(&v["lower_const"], 1.0));
    assert_eq!(v["verdict"], "pass");
}

#[test]
fn verify_fails_with_one_landmark() {
    let (code, out, _) = call(&[
        "verify", "--torus", "1,1", "--grid", "8", "--delta", "10", "--eps", "0.2",
    ]);
    assert_eq!(code, EXIT_FAIL);
    let v = json(&out);
    assert_eq!(v["verdict"], "fail");
    assert_eq!(v["landmark_count"], 1);
    assert!(v["worst_pair"].is_object());
}

#[test]
fn net_file_feeds_verify() {
    let dir = tempfile::tempdir().unwrap();
    let net = dir.path().join("net.json");
    let pairs = dir.path().join("pairs.csv");
    let net_s = net.to_str().unwrap();
    let (code, _, _) = call(&[
        "net", "--torus", "1,1", "--grid", "20", "--delta", "0.125", "--out", net_s,
    ]);
    assert_eq!(code, EXIT_OK);
    let (code, out, _) = call(&[
        "verify",
        "--torus",
        "1,1",
        "--grid",
        "20",
        "--net",
        net_s,
        "--eps",
        "0.25",
        "--pairs",
        "500",
        "--seed",
        "4",
        "--pairs-csv",
        pairs.to_str().unwrap(),
    ]);
    assert!(code == EXIT_OK || code == EXIT_FAIL);
    let v = json(&out);
    assert_eq!(v["pairs_tested"], 500);
    assert_eq!(v["exhaustive"], false);
    let rows = std::fs::read_to_string(&pairs).unwrap();
    assert_eq!(rows.lines().count(), 501);

    // a net for a different sample is refused
    let (code, _, err) = call(&[
        "verify", "--torus", "1,1", "--grid", "21", "--net", net_s, "--eps", "0.25",
    ]);
    assert_eq!(code, EXIT_CONFIG, "{err}");
}

#[test]
fn sweep_writes_the_documented_columns() {
    let (code, out, _) = call(&[
        "sweep",
        "--torus",
        "1,1",
        "--grid",
        "12",
        "--eps-list",
        "0.1,0.2,0.4",
        "--empirical",
    ]);
    assert_eq!(code, EXIT_OK);
    let mut lines = out.lines();
    assert_eq!(
        lines.next().unwrap(),
        "eps,delta,|S|,lower_const,theorem_bound,lemma32_bound"
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 3);
    assert!(!rows[0][4].is_empty() && !rows[0][5].is_empty());
    // outside the theory range the bound columns stay empty
    assert!(rows[2][4].is_empty() && rows[2][5].is_empty());
    let sizes: Vec<usize> = rows.iter().map(|r| r[2].parse().unwrap()).collect();
    assert!(sizes[0] >= sizes[1] && sizes[1] >= sizes[2]);
}

#[test]
fn model_check_passes_on_defaults() {
    let (code, out, _) = call(&["model-check", "--trials", "10000", "--eps", "0.2", "--seed", "7"]);
    assert_eq!(code, EXIT_OK);
    let v = json(&out);
    assert_eq!(v["passed"], true);
    let witness = v["suites"]
        .as_array()
        .unwrap()
        .iter()
        .find(|s| s["name"] == "witness_margin")
        .unwrap();
    assert!(witness["min_margin"].as_f64().unwrap() >= -1e-9);
}

#[test]
fn identical_runs_are_byte_identical() {
    let runs: &[&[&str]] = &[
        &[
            "net", "--sphere", "2,10", "--count", "300", "--seed", "5", "--eps", "0.2",
        ],
        &[
            "verify", "--torus", "1,1", "--count", "400", "--seed", "5", "--eps", "0.2", "--pairs", "3000",
        ],
        &["model-check", "--trials", "2000", "--seed", "5"],
        &[
            "sweep", "--sphere", "2,1", "--count", "200", "--seed", "5", "--pairs", "2000",
        ],
    ];
    for args in runs {
        let first = call(args);
        let second = call(args);
        assert_eq!(first, second, "{args:?}");
    }
}

#[test]
fn binary_writes_to_out_and_sets_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_kuratowski");
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bound.json");
    let status = Command::new(bin)
        .args([
            "bound", "--n", "3", "--vol", "2pi", "--sec", "0", "--eps", "0.1", "--out",
        ])
        .arg(&path)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(EXIT_OK));
    assert!(Path::new(&path).exists());
    assert_eq!(json(&std::fs::read_to_string(&path).unwrap())["n"], 3);

    let status = Command::new(bin)
        .args(["bound", "--n", "1", "--vol", "1", "--sec", "0", "--eps", "0.2"])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(EXIT_CONFIG));
    let status = Command::new(bin).arg("--help").output().unwrap();
    assert_eq!(status.status.code(), Some(EXIT_OK));
}
