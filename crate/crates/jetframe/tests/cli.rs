//! End-to-end checks of the command line: exit-status contract,
//! deterministic artifacts, and the file formats.

use std::fs;
use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_jetframe"))
}

fn tmp(name: &str) -> PathBuf {
    let mut dir = std::env::temp_dir();
    dir.push(format!("jetframe-test-{}-{name}", std::process::id()));
    dir
}

#[test]
fn gen_is_deterministic_and_verifies() {
    let out1 = tmp("frame1.json");
    let out2 = tmp("frame2.json");
    for out in [&out1, &out2] {
        let status = bin()
            .args(["gen", "--preset", "small", "--out"])
            .arg(out)
            .status()
            .unwrap();
        assert!(status.success());
    }
    let (a, b) = (fs::read(&out1).unwrap(), fs::read(&out2).unwrap());
    assert_eq!(a, b, "identical args must give byte-identical output");

    let frame: jetframe::forge::FrameSpec =
        serde_json::from_str(&fs::read_to_string(&out1).unwrap()).unwrap();
    assert_eq!(frame.fields.len(), 7);

    let report_path = tmp("report.json");
    let status = bin()
        .arg("verify")
        .arg(&out1)
        .args(["--all", "--points", "2", "--seed", "7", "--out"])
        .arg(&report_path)
        .status()
        .unwrap();
    assert!(status.success(), "verification must exit 0 on a good frame");
    let report: jetframe::verify::Report =
        serde_json::from_str(&fs::read_to_string(&report_path).unwrap()).unwrap();
    assert!(report.pass);

    for p in [out1, out2, report_path] {
        let _ = fs::remove_file(p);
    }
}

#[test]
fn verify_fails_on_broken_frame() {
    let out = tmp("frame-broken.json");
    let status = bin()
        .args(["gen", "--preset", "small", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    // drop the base direction: the rank suite must fail with exit 1
    let mut frame: jetframe::forge::FrameSpec =
        serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    frame
        .fields
        .retain(|f| !(f.tag == "T_jq" && f.params["j"] == 1));
    fs::write(&out, serde_json::to_string_pretty(&frame).unwrap()).unwrap();
    let status = bin()
        .arg("verify")
        .arg(&out)
        .args(["--suite", "rank", "--points", "1"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1));
    let _ = fs::remove_file(out);
}

#[test]
fn identities_suite_needs_no_frame() {
    let output = bin()
        .args(["verify", "--suite", "identities", "--k", "4"])
        .output()
        .unwrap();
    assert!(output.status.success());
    let text = String::from_utf8_lossy(&output.stdout);
    assert!(text.contains("identity bell_inverse: pass"), "{text}");
}

#[test]
fn pole_table_and_export() {
    let output = bin()
        .args(["pole", "--n", "2", "--k", "2", "--d", "3", "--json"])
        .output()
        .unwrap();
    assert!(output.status.success());
    let table: jetframe::verify::PoleTable =
        serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(table.max_pole_order, 8);
    assert_eq!(table.headline, 8);

    // the medium preset is the same instance
    let preset = bin()
        .args(["pole", "--preset", "medium", "--json"])
        .output()
        .unwrap();
    assert!(preset.status.success());
    assert_eq!(preset.stdout, output.stdout);

    let out = tmp("bell.json");
    let status = bin()
        .args(["export", "--n", "2", "--k", "3", "--d", "4", "--what", "bell", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let value: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert!(value["bell_z1"].is_object() || value["bell_z1"].is_array() || value["bell_z1"].is_object());
    let _ = fs::remove_file(out);

    let log_frame = tmp("log-frame.json");
    let status = bin()
        .args(["gen", "--n", "1", "--k", "1", "--d", "2", "--case", "log", "--out"])
        .arg(&log_frame)
        .status()
        .unwrap();
    assert!(status.success());
    let frame: jetframe::forge::FrameSpec =
        serde_json::from_str(&fs::read_to_string(&log_frame).unwrap()).unwrap();
    assert!(frame
        .fields
        .iter()
        .any(|f| f.tag == "T_w" && f.params["basis"] == "log_w"));
    let _ = fs::remove_file(log_frame);
}

#[test]
fn usage_errors_exit_nonzero() {
    let status = bin().args(["gen", "--n", "2"]).status().unwrap();
    assert!(!status.success());
    let status = bin()
        .args(["gen", "--n", "0", "--k", "1", "--d", "2"])
        .status()
        .unwrap();
    assert!(!status.success());
}
