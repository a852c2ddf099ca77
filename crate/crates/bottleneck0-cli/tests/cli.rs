//! End-to-end tests of the command-line surface: subcommand behavior, exit
//! codes, and file outputs.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bottleneck0"))
}

fn run(args: &[&str], dir: &Path) -> Output {
    bin()
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn dist_prints_value_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("a.csv"), "10\n2\n").unwrap();
    fs::write(dir.path().join("b.csv"), "4\n1\n").unwrap();
    let out = run(&["dist", "a.csv", "b.csv"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "5\n");

    let out = run(&["dist", "a.csv", "a.csv"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "0\n");
}

#[test]
fn dist_verbose_reports_case_on_stderr() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("a.csv"), "10\n2\n").unwrap();
    fs::write(dir.path().join("b.csv"), "4\n1\n").unwrap();
    let out = run(&["dist", "a.csv", "b.csv", "--verbose"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "5\n");
    assert!(stderr(&out).contains("case2-half-max"));
}

#[test]
fn missing_file_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("b.csv"), "1\n").unwrap();
    let out = run(&["dist", "missing.csv", "b.csv"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("missing.csv"));
}

#[test]
fn validation_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.csv"), "1,5\n").unwrap();
    fs::write(dir.path().join("b.csv"), "0,1\n").unwrap();
    let out = run(
        &["dist", "bad.csv", "b.csv", "--format", "pairs"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("row 1"));

    // Same file passes under the coercion policy.
    let out = run(
        &[
            "dist",
            "bad.csv",
            "b.csv",
            "--format",
            "pairs",
            "--on-nonzero-birth",
            "coerce",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    // [5] vs [1]: retiring both to the diagonal (cost 2.5) beats pairing (4).
    assert_eq!(stdout(&out), "2.5\n");
}

#[test]
fn malformed_input_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("a.csv"), "3\nxyz\n").unwrap();
    fs::write(dir.path().join("b.csv"), "1\n").unwrap();
    let out = run(&["dist", "a.csv", "b.csv"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("row 2"));
}

#[test]
fn matrix_writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("a.csv"), "6\n").unwrap();
    fs::write(dir.path().join("b.csv"), "6\n2\n").unwrap();
    fs::write(dir.path().join("c.csv"), "10\n2\n").unwrap();
    let out = run(
        &[
            "matrix",
            "a.csv",
            "b.csv",
            "c.csv",
            "--out-matrix",
            "m.csv",
            "--out-summary",
            "s.json",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));

    let matrix = fs::read_to_string(dir.path().join("m.csv")).unwrap();
    let lines: Vec<&str> = matrix.lines().collect();
    assert_eq!(lines[0], "label,a,b,c");
    assert_eq!(lines[1], "a,0,1,4");
    assert_eq!(lines[2], "b,1,0,4");
    assert_eq!(lines[3], "c,4,4,0");

    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("s.json")).unwrap()).unwrap();
    assert_eq!(summary["min"], 1.0);
    assert_eq!(summary["max"], 4.0);
    assert_eq!(summary["mean"], 3.0);
}

#[test]
fn matrix_scans_directories() {
    let dir = tempfile::tempdir().unwrap();
    let sub = dir.path().join("diagrams");
    fs::create_dir(&sub).unwrap();
    fs::write(sub.join("x.csv"), "3\n").unwrap();
    fs::write(sub.join("y.csv"), "3\n").unwrap();
    fs::write(sub.join("notes.txt"), "ignored").unwrap();
    let out = run(
        &["matrix", "diagrams", "--out-matrix", "m.csv"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let matrix = fs::read_to_string(dir.path().join("m.csv")).unwrap();
    assert_eq!(matrix.lines().next().unwrap(), "label,x,y");
}

#[test]
fn matrix_summary_needs_two_diagrams() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("a.csv"), "6\n").unwrap();
    let out = run(
        &[
            "matrix",
            "a.csv",
            "--out-matrix",
            "m.csv",
            "--out-summary",
            "s.json",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));

    // Without a summary request a single diagram is fine.
    let out = run(&["matrix", "a.csv", "--out-matrix", "m.csv"], dir.path());
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn simulate_output_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &["simulate", "--n", "100", "--seed", "9", "--out", "d.csv"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(dir.path().join("d.csv")).unwrap();
    assert_eq!(text.lines().count(), 100);

    // The written file parses back to the identical diagram.
    let out = run(&["dist", "d.csv", "d.csv"], dir.path());
    assert_eq!(stdout(&out), "0\n");

    // Pair mode with both range rules.
    let out = run(
        &[
            "simulate", "--n", "50", "--seed", "9", "--pair", "--jitter", "0.5",
            "--partner-range", "same-as-base", "--out-a", "a.csv", "--out-b", "b.csv",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let b = fs::read_to_string(dir.path().join("b.csv")).unwrap();
    let nb = b.lines().count();
    assert!((25..=75).contains(&nb), "partner size {nb}");
}

#[test]
fn verify_reports_and_exits_clean() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &["verify", "--count", "400", "--max-size", "8", "--seed", "7"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("status: OK"));
    assert!(text.contains("case hits:"));

    let out = run(&["verify", "--count", "0", "--seed", "7"], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bench_writes_records_and_fits() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &[
            "bench", "--sweep", "equal-size", "--sizes", "200,400,800",
            "--reps", "3", "--seed", "5",
            "--out-records", "r.csv", "--out-report", "rep.json",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));

    let records = fs::read_to_string(dir.path().join("r.csv")).unwrap();
    let lines: Vec<&str> = records.lines().collect();
    assert_eq!(
        lines[0],
        "size_a,size_b,range_a,range_b,seed,rep,wall_seconds"
    );
    assert_eq!(lines.len(), 1 + 3 * 3);

    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("rep.json")).unwrap()).unwrap();
    assert_eq!(report["setting"], "equal-size");
    assert_eq!(report["include_sort_time"], false);
    assert!(report["fits"]["linear"]["r_squared"].is_number());
    assert!(report["fits"]["power"]["coefficients"].is_array());
}

#[test]
fn bench_heatmap_reports_grid_medians() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &[
            "bench", "--sweep", "heatmap", "--sizes", "100,200", "--reps", "2",
            "--seed", "5", "--out-records", "r.csv", "--out-report", "rep.json",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("rep.json")).unwrap()).unwrap();
    let grid = report["grid"].as_array().unwrap();
    assert_eq!(grid.len(), 3); // (100,100), (100,200), (200,200)
}

#[test]
fn bench_include_sort_time_is_recorded() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &[
            "bench", "--sweep", "half-size", "--sizes", "100,200,300", "--reps", "2",
            "--seed", "5", "--include-sort-time",
            "--out-records", "r.csv", "--out-report", "rep.json",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("rep.json")).unwrap()).unwrap();
    assert_eq!(report["include_sort_time"], true);
    assert_eq!(report["setting"], "half-size");
}
