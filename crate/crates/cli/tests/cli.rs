//! End-to-end checks of the binary: exit codes, report shape, determinism,
//! and the golden SVG.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_distmorse"))
}

fn write_fixture(dir: &Path, name: &str, content: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    binary().args(args).output().expect("binary runs")
}

#[test]
fn analyze_square_reports_nine_records() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(dir.path(), "square.csv", "1,1\n1,-1\n-1,1\n-1,-1\n");
    let out = run(&["analyze", "--input", input.to_str().unwrap()]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let records = report["records"].as_array().unwrap();
    assert_eq!(records.len(), 9);
    let index_counts = |kind: &str| {
        records
            .iter()
            .filter(|r| r["kind"].as_str() == Some(kind))
            .count()
    };
    assert_eq!(index_counts("min"), 4);
    assert_eq!(index_counts("critical"), 5);
}

#[test]
fn analyze_single_point_reports_one_min() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(dir.path(), "one.csv", "4,7\n");
    let out = run(&["analyze", "--input", input.to_str().unwrap()]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let records = report["records"].as_array().unwrap();
    assert_eq!(records.len(), 1);
    assert_eq!(records[0]["kind"], "min");
}

#[test]
fn oversized_cloud_without_override_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let rows: String = (0..26).map(|i| format!("{i},0\n")).collect();
    let input = write_fixture(dir.path(), "big.csv", &rows);
    let out = run(&["analyze", "--input", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&[
        "analyze",
        "--input",
        input.to_str().unwrap(),
        "--max-subset",
        "26",
    ]);
    assert!(out.status.success());
}

#[test]
fn malformed_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(dir.path(), "dup.csv", "0,0\n0,0\n");
    let out = run(&["analyze", "--input", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("lines 1 and 2"), "stderr: {stderr}");
}

#[test]
fn verify_passes_on_fixtures() {
    let dir = tempfile::tempdir().unwrap();
    for (name, content) in [
        ("square.csv", "1,1\n1,-1\n-1,1\n-1,-1\n"),
        ("collinear.csv", "0,0\n1,0\n2,0\n3,0\n"),
        ("triangle.csv", "-1,0\n1,0\n0,1\n"),
    ] {
        let input = write_fixture(dir.path(), name, content);
        let out = run(&["verify", "--input", input.to_str().unwrap()]);
        assert!(out.status.success(), "verify failed on {name}");
        let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(report["verification"]["all_passed"], true);
    }
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(dir.path(), "triangle.csv", "-1,0\n1,0\n0,1\n");
    let path = input.to_str().unwrap();
    for command in [
        &["analyze", "--input", path][..],
        &["verify", "--input", path][..],
    ] {
        let first = run(command);
        let second = run(command);
        assert!(first.status.success());
        assert_eq!(first.stdout, second.stdout);
    }
}

#[test]
fn gradient_matches_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(dir.path(), "one.csv", "0,0\n");
    let out = run(&[
        "gradient",
        "--input",
        input.to_str().unwrap(),
        "--at",
        "3,4",
    ]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["gradient_normalized_float"][0], 0.6);
    assert_eq!(report["gradient_normalized_float"][1], 0.8);
    assert_eq!(report["squared_value"], "25");
}

#[test]
fn gradient_on_square_cloud() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(dir.path(), "square.csv", "1,1\n1,-1\n-1,1\n-1,-1\n");
    let path = input.to_str().unwrap();

    // center: all four projections, vanishing gradient
    let out = run(&["gradient", "--input", path, "--at", "0,0"]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["pi_indices"], serde_json::json!([0, 1, 2, 3]));
    assert_eq!(
        report["gradient_normalized_float"],
        serde_json::json!([0.0, 0.0])
    );
    assert_eq!(
        report["gradient_unnormalized_exact"],
        serde_json::json!(["0", "0"])
    );

    // outside the right edge: sigma is the edge midpoint
    let out = run(&["gradient", "--input", path, "--at", "3,0"]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["pi_indices"], serde_json::json!([0, 1]));
    assert_eq!(report["sigma"], serde_json::json!(["1", "0"]));
    assert_eq!(report["squared_value"], "5");
    assert_eq!(
        report["gradient_unnormalized_exact"],
        serde_json::json!(["2", "0"])
    );
    let normalized = report["gradient_normalized_float"].as_array().unwrap();
    assert!((normalized[0].as_f64().unwrap() - 2.0 / 5f64.sqrt()).abs() < 1e-15);
    assert_eq!(normalized[1], 0.0);
}

#[test]
fn gradient_rejects_dimension_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(dir.path(), "one.csv", "0,0\n");
    let out = run(&[
        "gradient",
        "--input",
        input.to_str().unwrap(),
        "--at",
        "1,2,3",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn plot_rejects_non_planar_clouds() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(dir.path(), "cube.csv", "0,0,0\n1,1,1\n");
    let out_path = dir.path().join("plot.svg");
    let out = run(&[
        "plot",
        "--input",
        input.to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

fn strip_generator(svg: &str) -> String {
    svg.lines()
        .filter(|l| !l.contains("generator:"))
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn plot_two_point_cloud_matches_golden_structure() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(dir.path(), "pair.csv", "-1,0\n1,0\n");
    let out_path = dir.path().join("pair.svg");
    let out = run(&[
        "plot",
        "--input",
        input.to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
        "--grid",
        "80",
        "--levels",
        "6",
    ]);
    assert!(out.status.success());
    let svg = std::fs::read_to_string(&out_path).unwrap();
    let golden = include_str!("golden/two_point.svg");
    assert_eq!(strip_generator(&svg), strip_generator(golden));
}

#[test]
fn plot_triangle_has_hollow_regular_marker() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(dir.path(), "triangle.csv", "-1,0\n1,0\n0,1\n");
    let out_path = dir.path().join("t.svg");
    let out = run(&[
        "plot",
        "--input",
        input.to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
        "--grid",
        "60",
    ]);
    assert!(out.status.success());
    let svg = std::fs::read_to_string(&out_path).unwrap();
    assert!(svg.contains("class=\"regular\""));
    // equilateral-style index-2 marker appears for the cocircular triangle
    let input2 = write_fixture(dir.path(), "cocircular.csv", "1,0\n-3/5,4/5\n-3/5,-4/5\n");
    let out_path2 = dir.path().join("c.svg");
    let out = run(&[
        "plot",
        "--input",
        input2.to_str().unwrap(),
        "--out",
        out_path2.to_str().unwrap(),
        "--grid",
        "60",
    ]);
    assert!(out.status.success());
    let svg = std::fs::read_to_string(&out_path2).unwrap();
    assert!(svg.contains(">2</text>"));
}
