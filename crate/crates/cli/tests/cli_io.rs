//! Binary-level behavior: exit codes, output shapes, determinism and the
//! config-file override order.

use std::path::Path;
use std::process::Command;

fn triwalk() -> Command {
    Command::new(env!("CARGO_BIN_EXE_triwalk"))
}

fn read(path: &Path) -> Vec<u8> {
    std::fs::read(path).unwrap_or_else(|e| panic!("read {}: {e}", path.display()))
}

#[test]
fn phase_diagram_row_count_and_rerun_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let out_a = dir.path().join("a.csv");
    let out_b = dir.path().join("b.csv");
    for out in [&out_a, &out_b] {
        let status = triwalk()
            .args([
                "phase-diagram",
                "--resolution",
                "64",
                "--k-grid",
                "512",
                "--output",
            ])
            .arg(out)
            .status()
            .unwrap();
        assert!(status.success());
    }
    let a = read(&out_a);
    assert_eq!(a, read(&out_b), "rerun with identical config differs");
    let text = String::from_utf8(a).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "theta1,theta2,w,min_gap,line_id",
        "header row"
    );
    assert_eq!(text.lines().count(), 64 * 64 + 1);
    // w column only carries the gapped values or NA
    for line in text.lines().skip(1) {
        let w = line.split(',').nth(2).unwrap();
        assert!(
            ["-3", "-1", "1", "3", "NA"].contains(&w),
            "unexpected w entry {w:?}"
        );
    }
    assert!(out_a.with_extension("csv.manifest.json").exists());
}

#[test]
fn parallel_and_serial_runs_agree() {
    let dir = tempfile::tempdir().unwrap();
    let serial = dir.path().join("serial.csv");
    let parallel = dir.path().join("parallel.csv");
    for (out, jobs) in [(&serial, "1"), (&parallel, "4")] {
        let status = triwalk()
            .args([
                "phase-diagram",
                "--resolution",
                "64",
                "--k-grid",
                "512",
                "--jobs",
                jobs,
                "--output",
            ])
            .arg(out)
            .status()
            .unwrap();
        assert!(status.success());
    }
    assert_eq!(read(&serial), read(&parallel), "outputs depend on worker count");
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("scan.cfg");
    let out = dir.path().join("trace.csv");
    std::fs::write(
        &cfg,
        "# winding trace settings\nk-grid = 2048\ntheta1 = 0.4\ntheta2 = 0.1\n",
    )
    .unwrap();
    let status = triwalk()
        .args(["winding-trace", "--config"])
        .arg(&cfg)
        .args(["--k-grid", "1024", "--output"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let text = String::from_utf8(read(&out)).unwrap();
    // flag k-grid=1024 wins over the file's 2048: 1025 samples + header
    assert_eq!(text.lines().count(), 1024 + 2);
    let manifest = String::from_utf8(read(&out.with_extension("csv.manifest.json"))).unwrap();
    let v: serde_json::Value = serde_json::from_str(&manifest).unwrap();
    assert_eq!(v["config"]["k-grid"], "1024");
    assert_eq!(v["config"]["theta1"], "0.4");
    // w = 3 phase at (0.4, 0.1): three loops in the trace
    let loops = v["summary"]["loop_count"].as_f64().unwrap();
    assert!((loops.abs() - 3.0).abs() < 1e-2, "loops = {loops}");
}

#[test]
fn json_format_produces_parsable_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("v.json");
    let status = triwalk()
        .args([
            "velocity",
            "--theta1",
            "0",
            "--theta2",
            "0",
            "--k-grid",
            "1024",
            "--format",
            "json",
            "--output",
        ])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let rows: serde_json::Value = serde_json::from_slice(&read(&out)).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 1024);
    assert!(rows[0]["v_plus"].is_f64());
}

#[test]
fn exit_code_config_error() {
    let status = triwalk()
        .args(["critical-scan", "--line", "chartreuse9", "--output", "/tmp/x.csv"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
    // malformed range
    let status = triwalk()
        .args([
            "critical-scan",
            "--line",
            "red2",
            "--theta1-range",
            "1.0",
            "--output",
            "/tmp/x.csv",
        ])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn exit_code_io_error() {
    let status = triwalk()
        .args([
            "velocity",
            "--theta1",
            "0",
            "--theta2",
            "0",
            "--output",
            "/dev/null/nope/x.csv",
        ])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(3));
}

#[test]
fn exit_code_fit_failure() {
    // a non-high-symmetry peak momentum leaves the correlation with no
    // usable Ornstein-Zernike parameters
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("w.csv");
    let status = triwalk()
        .args(["wannier", "--line", "red2", "--k0", "0.7", "--output"])
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(4));
}

#[test]
fn acceptance_list_and_filter() {
    let output = triwalk().args(["acceptance", "--list"]).output().unwrap();
    assert!(output.status.success());
    let text = String::from_utf8(output.stdout).unwrap();
    assert_eq!(text.lines().count(), 11);
    assert!(text.contains("C1 "));
    assert!(text.contains("C11"));
    // a fast subset runs end to end
    let output = triwalk()
        .args(["acceptance", "--only", "C10"])
        .output()
        .unwrap();
    assert!(output.status.success());
    let text = String::from_utf8(output.stdout).unwrap();
    assert!(text.starts_with("[PASS] C10"), "{text}");
}
