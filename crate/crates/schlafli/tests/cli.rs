//! End-to-end checks on the command-line interface: exit codes, JSON shapes,
//! error wording, and byte-level determinism of the verify report.

use std::f64::consts::{FRAC_PI_2, PI};
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_schlafli"))
}

fn write_input(dir: &TempDir, name: &str, contents: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn regular_flat(dir: &TempDir) -> PathBuf {
    write_input(
        dir,
        "flat.json",
        r#"{"geometry":"euclidean","lengths":{"12":1.0,"13":1.0,"14":1.0,"23":1.0,"24":1.0,"34":1.0}}"#,
    )
}

fn orthant(dir: &TempDir) -> PathBuf {
    let l = FRAC_PI_2;
    write_input(
        dir,
        "orthant.json",
        &format!(
            r#"{{"geometry":"spherical","lengths":{{"12":{l},"13":{l},"14":{l},"23":{l},"24":{l},"34":{l}}}}}"#
        ),
    )
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr_text(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn solve_reports_angles_for_valid_input() {
    let dir = TempDir::new().unwrap();
    let out = bin().args(["solve"]).arg(regular_flat(&dir)).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr_text(&out));
    let v = stdout_json(&out);
    assert_eq!(v["geometry"], "euclidean");
    assert_eq!(v["valid"], true);
    let want = (1.0f64 / 3.0).acos();
    for edge in ["12", "13", "14", "23", "24", "34"] {
        let got = v["angles"][edge].as_f64().unwrap();
        assert!((got - want).abs() < 1e-15, "{edge}: {got}");
    }
}

#[test]
fn solve_orthant_gives_right_dihedrals() {
    let dir = TempDir::new().unwrap();
    let out = bin().args(["solve"]).arg(orthant(&dir)).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    for edge in ["12", "13", "14", "23", "24", "34"] {
        assert!((v["angles"][edge].as_f64().unwrap() - FRAC_PI_2).abs() < 1e-15);
    }
}

#[test]
fn malformed_json_is_a_usage_error_naming_the_problem() {
    let dir = TempDir::new().unwrap();
    let path = write_input(&dir, "bad.json", r#"{"geometry":"euclidean"}"#);
    let out = bin().args(["solve"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_text(&out).contains("lengths"), "{}", stderr_text(&out));
}

#[test]
fn missing_edge_is_named() {
    let dir = TempDir::new().unwrap();
    let path = write_input(
        &dir,
        "missing.json",
        r#"{"geometry":"euclidean","lengths":{"12":1.0,"13":1.0,"14":1.0,"23":1.0,"24":1.0}}"#,
    );
    let out = bin().args(["solve"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_text(&out).contains("34"), "{}", stderr_text(&out));
}

#[test]
fn unknown_edge_key_is_named() {
    let dir = TempDir::new().unwrap();
    let path = write_input(
        &dir,
        "unknown.json",
        r#"{"geometry":"euclidean","lengths":{"21":1.0,"13":1.0,"14":1.0,"23":1.0,"24":1.0,"34":1.0}}"#,
    );
    let out = bin().args(["solve"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_text(&out).contains("21"), "{}", stderr_text(&out));
}

#[test]
fn domain_failures_exit_two() {
    let dir = TempDir::new().unwrap();
    let path = write_input(
        &dir,
        "thin.json",
        r#"{"geometry":"euclidean","lengths":{"12":3.0,"13":1.0,"14":1.0,"23":1.0,"24":1.0,"34":1.0}}"#,
    );
    let out = bin().args(["solve"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_text(&out).contains("triangle"), "{}", stderr_text(&out));
}

#[test]
fn r_matrix_on_flat_input_is_a_domain_error() {
    let dir = TempDir::new().unwrap();
    let out = bin()
        .args(["jacobian", "--r-matrix"])
        .arg(regular_flat(&dir))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_text(&out).contains("curved geometry"), "{}", stderr_text(&out));
}

#[test]
fn jacobian_fd_check_is_small() {
    let dir = TempDir::new().unwrap();
    let path = write_input(
        &dir,
        "hyp.json",
        r#"{"geometry":"hyperbolic","lengths":{"12":0.9,"13":0.8,"14":1.1,"23":0.7,"24":1.0,"34":0.6}}"#,
    );
    let out = bin()
        .args(["jacobian", "--fd-check", "--p-matrix"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr_text(&out));
    let v = stdout_json(&out);
    assert_eq!(v["mode"], "direct");
    assert_eq!(v["edge_order"], serde_json::json!(["12", "13", "14", "23", "24", "34"]));
    assert!(v["fd_check"]["max_relative_error"].as_f64().unwrap() < 1e-6);
    assert!(v["p_matrix"].is_array());
    assert!(v.get("r_matrix").is_none() || v["r_matrix"].is_null());
}

#[test]
fn jacobian_csv_has_labeled_rows() {
    let dir = TempDir::new().unwrap();
    let out = bin()
        .args(["jacobian", "--format", "csv"])
        .arg(regular_flat(&dir))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l == "jacobian,12,13,14,23,24,34"), "{text}");
    assert!(text.lines().any(|l| l.starts_with("12,")), "{text}");
}

#[test]
fn minimal_mode_matches_direct_mode() {
    let dir = TempDir::new().unwrap();
    let path = orthant(&dir);
    let direct = bin().args(["jacobian"]).arg(&path).output().unwrap();
    let minimal = bin().args(["jacobian", "--mode", "minimal"]).arg(&path).output().unwrap();
    assert_eq!(direct.status.code(), Some(0));
    assert_eq!(minimal.status.code(), Some(0));
    let dj = stdout_json(&direct);
    let mj = stdout_json(&minimal);
    assert_eq!(mj["mode"], "minimal");
    for r in 0..6 {
        for c in 0..6 {
            let d = dj["jacobian"][r][c].as_f64().unwrap();
            let m = mj["jacobian"][r][c].as_f64().unwrap();
            assert!((d - m).abs() < 1e-12, "entry ({r},{c}): {d} vs {m}");
        }
    }
}

#[test]
fn dual_output_round_trips_as_input() {
    let dir = TempDir::new().unwrap();
    let path = write_input(
        &dir,
        "sph.json",
        r#"{"geometry":"spherical","lengths":{"12":0.9,"13":0.8,"14":1.1,"23":0.7,"24":1.0,"34":0.6}}"#,
    );
    let once = bin().args(["dual"]).arg(&path).output().unwrap();
    assert_eq!(once.status.code(), Some(0), "{}", stderr_text(&once));

    let dual_path = dir.path().join("dual.json");
    std::fs::write(&dual_path, &once.stdout).unwrap();
    let twice = bin().args(["dual"]).arg(&dual_path).output().unwrap();
    assert_eq!(twice.status.code(), Some(0), "{}", stderr_text(&twice));

    let original: Value = serde_json::from_str(
        r#"{"12":0.9,"13":0.8,"14":1.1,"23":0.7,"24":1.0,"34":0.6}"#,
    )
    .unwrap();
    let recovered = stdout_json(&twice);
    for edge in ["12", "13", "14", "23", "24", "34"] {
        let got = recovered["lengths"][edge].as_f64().unwrap();
        let want = original[edge].as_f64().unwrap();
        assert!((got - want).abs() < 1e-10, "{edge}: {got} vs {want}");
    }
}

#[test]
fn dual_rejects_noncompact_input() {
    let dir = TempDir::new().unwrap();
    for path in [regular_flat(&dir), write_input(
        &dir,
        "hyp_dual.json",
        r#"{"geometry":"hyperbolic","lengths":{"12":1.0,"13":1.0,"14":1.0,"23":1.0,"24":1.0,"34":1.0}}"#,
    )] {
        let out = bin().args(["dual"]).arg(&path).output().unwrap();
        assert_eq!(out.status.code(), Some(2));
        assert!(stderr_text(&out).contains("spherical geometry"), "{}", stderr_text(&out));
    }
}

#[test]
fn volume_quadrature_hits_orthant_closed_form() {
    let dir = TempDir::new().unwrap();
    let out = bin().args(["volume", "--steps", "4096"]).arg(orthant(&dir)).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr_text(&out));
    let v = stdout_json(&out);
    assert_eq!(v["method"], "schlaefli_integral");
    assert!((v["value"].as_f64().unwrap() - PI * PI / 8.0).abs() < 1e-6);
    assert!(v["error_estimate"].as_f64().unwrap() < 1e-6);
}

#[test]
fn volume_on_flat_input_uses_closed_form() {
    let dir = TempDir::new().unwrap();
    let out = bin().args(["volume"]).arg(regular_flat(&dir)).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["method"], "cayley_menger");
    assert!((v["value"].as_f64().unwrap() - 1.0 / 72.0f64.sqrt()).abs() < 1e-15);
    assert!(v.get("n_steps").is_none() || v["n_steps"].is_null());
}

#[test]
fn gradient_check_on_flat_input_is_a_domain_error() {
    let dir = TempDir::new().unwrap();
    let out = bin()
        .args(["volume", "--check-gradient"])
        .arg(regular_flat(&dir))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn odd_step_count_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let out = bin().args(["volume", "--steps", "7"]).arg(orthant(&dir)).output().unwrap();
    assert_eq!(out.status.code(), Some(1), "{}", stderr_text(&out));
}

#[test]
fn verify_is_byte_identical_across_runs_and_workers() {
    let run = |workers: &str, seed: &str| {
        bin()
            .args(["verify", "--samples", "60", "--workers", workers, "--seed", seed])
            .output()
            .unwrap()
    };
    let a = run("1", "42");
    let b = run("1", "42");
    let c = run("3", "42");
    let d = run("1", "43");
    assert_eq!(a.status.code(), Some(0), "{}", stderr_text(&a));
    assert_eq!(a.stdout, b.stdout, "repeated runs must match byte for byte");
    assert_eq!(a.stdout, c.stdout, "worker count must not leak into the report");
    assert_ne!(a.stdout, d.stdout, "seed must matter");
    assert!(!String::from_utf8_lossy(&a.stdout).contains("workers"));
    assert!(stderr_text(&a).contains("PASS"));
}

#[test]
fn verify_honors_seed_env_var() {
    let out = bin()
        .args(["verify", "--samples", "20", "--geometry", "euclidean"])
        .env("SCHLAFLI_SEED", "7")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr_text(&out));
    let v = stdout_json(&out);
    assert_eq!(v["config"]["seed"], 7);
}

#[test]
fn unreachable_tolerance_fails_with_domain_exit() {
    let out = bin()
        .args(["verify", "--samples", "20", "--geometry", "euclidean", "--tol-p", "1e-15"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_text(&out).contains("FAIL"), "{}", stderr_text(&out));
}

#[test]
fn invalid_range_is_a_usage_error() {
    let out = bin()
        .args(["verify", "--samples", "20", "--range", "1.2:0.3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn help_exits_zero_and_bad_flags_exit_one() {
    let help = bin().arg("--help").output().unwrap();
    assert_eq!(help.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&help.stdout).contains("solve"));

    let bad = bin().args(["jacobian", "--mode", "sideways"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));

    let missing = bin().args(["solve", "/nonexistent/tetra.json"]).output().unwrap();
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn output_flag_writes_the_same_json_to_a_file() {
    let dir = TempDir::new().unwrap();
    let out_path = dir.path().join("angles.json");
    let out = bin()
        .args(["solve", "--output"])
        .arg(&out_path)
        .arg(regular_flat(&dir))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&out_path).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["valid"], true);
}
