//! End-to-end tests of the command-line interface, driving the real binary.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_rieszkit")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("spawn rieszkit")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn report_constants_prints_reference_values() {
    let out = run(&["report-constants", "--n", "2", "--alpha", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("spec (n=2, alpha=1, m=1)"));
    // c = d = 2 pi, a = 1, lambda_1 = 4 pi
    assert!(text.contains("6.2831853071795862e0"), "{text}");
    assert!(text.contains("1.0000000000000000e0"));
    assert!(text.contains("1.2566370614359172e1"));
}

#[test]
fn report_constants_rejects_degenerate_spec() {
    let out = run(&["report-constants", "--n", "3", "--alpha", "1", "--m", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("degenerate"));
}

#[test]
fn kernel_dump_carries_exact_coefficients() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.csv");
    let out = run(&[
        "kernel",
        "--n",
        "2",
        "--alpha",
        "1",
        "--which",
        "w",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("# coefficient r^0: 2\n# coefficient r^1: -1\n"));
    assert!(text.contains("# exponent gamma: -5/2"));
    assert!(text.contains("r,value"));
    // w(0) = 2 in the first data row
    let first_row = text.lines().nth(4).unwrap();
    assert!(first_row.starts_with("0.0000000000000000e0,2.0000000000000000e0"));
}

#[test]
fn missing_input_file_names_path_and_exits_2() {
    let out = run(&[
        "riesz",
        "--alpha",
        "1",
        "--in",
        "/nonexistent/f.rgf",
        "--out",
        "/tmp/out.rgf",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("/nonexistent/f.rgf"));
}

#[test]
fn usage_error_exits_2() {
    let out = run(&["riesz", "--alpha"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_subcommand_exits_2() {
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn riesz_phantom_pipeline_writes_readable_field() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.rgf");
    let out = run(&[
        "riesz",
        "--alpha",
        "1",
        "--phantom",
        "gaussian:1",
        "--grid-points",
        "48",
        "--grid-extent",
        "6",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let field = rieszkit::io::read_rgf(&path).unwrap();
    assert_eq!(field.geometry().shape(), &[48, 48]);
    // I^1 of a positive phantom is positive
    assert!(field.data().iter().all(|&v| v > 0.0));
}

#[test]
fn radon_backproject_reconstruct_file_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let sino_path = dir.path().join("phi.rsg");
    let out = run(&[
        "radon",
        "--phantom",
        "disk:2",
        "--grid-points",
        "64",
        "--grid-extent",
        "6",
        "--out",
        sino_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));

    let back_path = dir.path().join("b.rgf");
    let out = run(&[
        "backproject",
        "--in",
        sino_path.to_str().unwrap(),
        "--grid-points",
        "64",
        "--grid-extent",
        "6",
        "--out",
        back_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));

    let rec_path = dir.path().join("f_hat.rgf");
    let report_path = dir.path().join("report.csv");
    let out = run(&[
        "reconstruct",
        "--in",
        sino_path.to_str().unwrap(),
        "--formula",
        "approx",
        "--t-list",
        "1,0.5",
        "--grid-points",
        "64",
        "--grid-extent",
        "6",
        "--out",
        rec_path.to_str().unwrap(),
        "--report",
        report_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("constant=1.2566370614359172e1"));

    let rec = rieszkit::io::read_rgf(&rec_path).unwrap();
    // the disk has value ~1 inside; a 2-scale reconstruction is heavily
    // smoothed but clearly nonzero at the center
    let z = rec.geometry().zero_node_index().unwrap();
    assert!(rec.value(&z) > 0.4, "center {}", rec.value(&z));
    let report = std::fs::read_to_string(&report_path).unwrap();
    assert!(report.starts_with("scale,sup_err,l2_rel,l1_rel"));
    assert!(report.contains("# method,approx"));
}

#[test]
fn fuglede_subcommand_reports_discrepancy() {
    let out = run(&[
        "fuglede",
        "--phantom",
        "gaussian:1",
        "--grid-points",
        "64",
        "--grid-extent",
        "6",
        "--angles",
        "90",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("median pointwise ratio"));
    // pull the ratio out of the summary line and sanity-check it
    let ratio: f64 = text
        .split("median pointwise ratio")
        .nth(1)
        .unwrap()
        .trim()
        .parse()
        .unwrap();
    assert!((ratio - 2.0).abs() < 0.2, "ratio {ratio}");
}

#[test]
fn strict_escalates_boundary_warnings() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.rgf");
    // kernel-h decays like |x|^{-3}: far above 1e-6 of its peak at +-8
    let args = [
        "riesz",
        "--alpha",
        "1",
        "--phantom",
        "kernel-h:2,1,1",
        "--grid-points",
        "48",
        "--out",
        path.to_str().unwrap(),
    ];
    let relaxed = run(&args);
    assert_eq!(relaxed.status.code(), Some(0));
    assert!(stderr(&relaxed).contains("warning"));

    let strict = run(&[&args[..], &["--strict"]].concat());
    assert_eq!(strict.status.code(), Some(3));
}

#[test]
fn thread_cap_env_is_validated() {
    let out = Command::new(bin())
        .args(["report-constants", "--n", "2", "--alpha", "1"])
        .env("RIESZKIT_THREADS", "not-a-number")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("RIESZKIT_THREADS"));

    let out = Command::new(bin())
        .args(["report-constants", "--n", "2", "--alpha", "1"])
        .env("RIESZKIT_THREADS", "4")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn invert_with_reference_reports_errors() {
    let dir = tempfile::tempdir().unwrap();
    // g = analytic h, reference = w, small grid
    let geom = rieszkit::GridGeometry::symmetric(2, 64, 8.0).unwrap();
    let spec = rieszkit::KernelSpec::new(2, 1.0, 1).unwrap();
    let g = rieszkit::fields::phantom(&rieszkit::Phantom::KernelH(spec), &geom);
    let w = rieszkit::fields::phantom(&rieszkit::Phantom::KernelW(spec), &geom);
    let g_path = dir.path().join("g.rgf");
    let w_path = dir.path().join("w.rgf");
    rieszkit::io::write_rgf(&g_path, &g).unwrap();
    rieszkit::io::write_rgf(&w_path, &w).unwrap();

    let out_path = dir.path().join("f_hat.rgf");
    let report_path = dir.path().join("report.csv");
    let out = run(&[
        "invert",
        "--alpha",
        "1",
        "--formula",
        "approx",
        "--t-list",
        "1,0.5",
        "--in",
        g_path.to_str().unwrap(),
        "--ref",
        w_path.to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
        "--report",
        report_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("errors vs ref"));
    let report = std::fs::read_to_string(&report_path).unwrap();
    // one row per scale plus header and trailing metadata
    assert_eq!(report.lines().filter(|l| !l.starts_with('#')).count(), 3);
    assert!(Path::new(&out_path).exists());
}

#[test]
fn selftest_passes_and_prints_table() {
    let out = run(&["selftest"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("PASS"));
    assert!(!text.contains("FAIL"));
    assert!(text.contains("checks passed"));
}
