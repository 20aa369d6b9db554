mod common;

use std::fs;

use common::{golden_dir, golden_output, run_cli, scratch_dir, GOLDEN_CASES};

#[test]
fn golden_outputs_are_byte_identical() {
    // SCHERK_BLESS=1 rewrites the golden files
    let bless = std::env::var_os("SCHERK_BLESS").is_some();
    for (name, args) in GOLDEN_CASES {
        let bytes = golden_output(name, args);
        let path = golden_dir().join(name);
        if bless {
            fs::write(&path, &bytes).unwrap();
        }
        let golden = fs::read(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert!(bytes == golden, "{name} differs from {}", path.display());
    }
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = run_cli(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("compare-paper"));
}

#[test]
fn bad_arguments_are_usage_errors() {
    for args in [
        &["quad", "--H", "0.6"][..],
        &["quad", "--H", "-0.1"],
        &["quad", "--mu", "0"],
        &["quad", "--H", "x"],
        &["exhaust", "--N", "0"],
        &["exhaust", "--phi-ratio", "1.5"],
        &["compare-paper", "--r", "0.7"],
        &["check", "--in", "/nonexistent/domain.json"],
        &["frobnicate"],
    ] {
        let (code, _, err) = run_cli(args);
        assert_eq!(code, 2, "{args:?}: {err}");
        assert!(!err.is_empty());
    }
}

#[test]
fn failing_verification_exits_one() {
    let (code, out, _) = run_cli(&["quad", "--H", "0.25", "--mode", "paper"]);
    assert_eq!(code, 1);
    assert!(out.contains("\"pass\": false"));
    let (code, out, _) = run_cli(&["extend", "--standard", "--phi-ratio", "0"]);
    assert_eq!(code, 1);
    assert!(out.contains("∂(E)"));
}

#[test]
fn passing_commands_exit_zero() {
    let (code, out, _) = run_cli(&["quad", "--H", "0", "--mode", "paper"]);
    assert_eq!(code, 0);
    assert!(out.contains("\"schema_version\": \"1\""));
    let (code, out, _) = run_cli(&["compare-paper", "--H", "0"]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn snapshot_feeds_check_extend_and_render() {
    let tmp = scratch_dir();
    let dir = tmp.path();
    let snap = dir.join("seed.json");
    let report = dir.join("report.json");
    let snap_s = snap.to_str().unwrap();
    let (code, _, err) = run_cli(&["quad", "--H", "0.3", "--snapshot", snap_s, "--json", report.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");

    let (code, out, err) = run_cli(&["check", "--in", snap_s]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("\"command\": \"check\""));

    let next = dir.join("next.json");
    let (code, _, err) = run_cli(&[
        "extend",
        "--in",
        snap_s,
        "--snapshot",
        next.to_str().unwrap(),
        "--json",
        report.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");

    let svg = dir.join("next.svg");
    let (code, _, err) = run_cli(&["render", "--in", next.to_str().unwrap(), "--svg", svg.to_str().unwrap(), "--chart", "disk"]);
    assert_eq!(code, 0, "{err}");
    let text = fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<?xml") && text.trim_end().ends_with("</svg>"));
    assert_eq!(text.matches("class=\"side-a\"").count(), 6);
    assert_eq!(text.matches("class=\"side-b\"").count(), 6);
}

#[test]
fn exhaust_writes_one_svg_per_step() {
    let tmp = scratch_dir();
    let dir = tmp.path();
    let json = dir.join("trace.json");
    let (code, _, err) = run_cli(&[
        "exhaust",
        "--N",
        "2",
        "--json",
        json.to_str().unwrap(),
        "--svg-dir",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    for i in 0..=2 {
        assert!(dir.join(format!("step_{i}.svg")).exists());
    }
    let trace: serde_json::Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(trace["result"]["steps"].as_array().unwrap().len(), 3);
}

#[test]
fn svg_is_well_formed_xml() {
    let has_python = std::process::Command::new("python3").arg("--version").output().is_ok();
    if !has_python {
        return;
    }
    for (name, args) in GOLDEN_CASES.iter().filter(|(n, _)| n.ends_with(".svg")) {
        let dir = scratch_dir();
        let path = dir.path().join(name);
        fs::write(&path, golden_output(name, args)).unwrap();
        let status = std::process::Command::new("python3")
            .args(["-c", "import sys, xml.etree.ElementTree as E; E.parse(sys.argv[1])"])
            .arg(&path)
            .status()
            .unwrap();
        assert!(status.success(), "{name} is not well-formed");
    }
}
