use std::path::PathBuf;
use std::process::{Command, Output};

use momenta::config::parse_config;
use momenta::report::{affine_rank, analyze, AnalysisReport};

fn config(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(format!("{name}.json"))
}

fn momenta(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_momenta")).args(args).output().unwrap()
}

fn with_config(sub: &str, name: &str, extra: &[&str]) -> Output {
    let path = config(name);
    let mut args = vec![sub, "--config", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    momenta(&args)
}

/// Parsed CSV rows, skipping the `# orbit:` line and the header.
fn csv_rows(out: &Output) -> Vec<Vec<f64>> {
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# orbit: "));
    lines
        .skip(1)
        .map(|l| l.split(',').skip(1).filter(|c| !c.is_empty()).map(|c| c.parse().unwrap()).collect())
        .collect()
}

#[test]
fn verify_exit_codes() {
    let ok = with_config("verify", "heisenberg", &[]);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stdout));
    let table = String::from_utf8(ok.stdout).unwrap();
    assert!(table.lines().any(|l| l.starts_with("PASS momentum.condition")));
    assert!(!table.contains("FAIL"));

    let flipped = with_config("verify", "heisenberg", &["--inject-sign-flip"]);
    assert_eq!(flipped.status.code(), Some(1));
    assert!(String::from_utf8(flipped.stdout).unwrap().contains("FAIL momentum.condition"));
}

#[test]
fn usage_and_config_errors_exit_2() {
    assert_eq!(momenta(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(momenta(&["verify", "--config", "/nonexistent.json"]).status.code(), Some(2));
    assert_eq!(with_config("orbit", "torus_zero", &["--mu", "7"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{ "group": { "kind": "torus", "dim": 2 }, "theta": [["0", "1"], ["1", "0"]] }"#).unwrap();
    let out = momenta(&["analyze", "--config", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("theta"));
}

#[test]
fn non_hamiltonian_gamma_n_is_rejected() {
    let text = r#"{ "group": { "kind": "torus", "dim": 2 }, "theta": [["0", "1"], ["-1", "0"]], "gammaN": [[1, 0]] }"#;
    let err = parse_config(text).unwrap_err().to_string();
    assert!(err.contains("gammaN"), "{err}");
}

#[test]
fn verify_json_is_deterministic() {
    let a = with_config("verify", "torus_partial_kernel", &["--json", "--seed", "7"]);
    let b = with_config("verify", "torus_partial_kernel", &["--json", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn analyze_report_round_trips_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let status = with_config("analyze", "heisenberg", &["--out", out.to_str().unwrap()]).status;
    assert_eq!(status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    let report = AnalysisReport::from_json(&text).unwrap();
    assert_eq!(AnalysisReport::from_json(&report.to_json()).unwrap(), report);
    assert_eq!(AnalysisReport::from_json(&report.to_json()).unwrap().to_json(), report.to_json());

    let again = analyze(&parse_config(&std::fs::read_to_string(config("heisenberg")).unwrap()).unwrap());
    assert_eq!(again.scenario, report.scenario);
    assert_eq!(again.exact, report.exact);
    assert_eq!(again.numeric, report.numeric);

    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["exact"]["holonomyGenerators"], serde_json::json!([["0", "-1", "0"]]));
    assert_eq!(v["exact"]["cover"]["name"], "H");
    assert_eq!(v["numeric"]["allPassed"], true);
}

#[test]
fn analyze_output_differs_only_in_the_header() {
    let body = |o: Output| {
        let text = String::from_utf8(o.stdout).unwrap();
        text[text.find("\"scenario\"").unwrap()..].to_string()
    };
    let a = body(with_config("analyze", "torus_partial_kernel", &[]));
    let b = body(with_config("analyze", "torus_partial_kernel", &[]));
    assert_eq!(a, b);
}

#[test]
fn dense_report_explains_missing_reduction() {
    let out = with_config("analyze", "torus_dense", &[]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["exact"]["holonomyClosed"], false);
    assert_eq!(v["exact"]["nonClosedHolonomy"], true);
    assert_eq!((v["exact"]["rationalRank"].as_u64(), v["exact"]["realRank"].as_u64()), (Some(3), Some(2)));
    let entry = &v["exact"]["momenta"][0];
    assert!(entry["reduction"].is_null());
    assert!(!entry["notes"].as_array().unwrap().is_empty());
}

#[test]
fn heisenberg_zero_orbit_has_zero_casimir() {
    let out = with_config("orbit", "heisenberg", &["--mu", "0", "--samples", "50"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 50);
    for r in rows {
        let (psi, nu2) = (r[3], r[5]);
        assert!((0.5 * psi * psi + nu2).abs() <= 1e-8);
        assert!((r[6] - (0.5 * psi * psi + nu2)).abs() <= 1e-12);
    }
}

#[test]
fn zero_theta_orbit_is_a_point() {
    let rows = csv_rows(&with_config("orbit", "torus_zero", &["--mu", "0", "--samples", "20"]));
    for r in rows {
        assert_eq!(&r[2..4], &[1.0, -0.5]);
    }
}

#[test]
fn invertible_torus_orbit_fills_the_dual() {
    let rows = csv_rows(&with_config("orbit", "torus_invertible", &["--mu", "1", "--samples", "30"]));
    let points: Vec<Vec<f64>> = rows.iter().map(|r| r[2..4].to_vec()).collect();
    assert_eq!(affine_rank(&points), 2);
}

#[test]
fn orbit_output_is_deterministic() {
    let a = with_config("orbit", "heisenberg", &["--mu", "1", "--samples", "10"]);
    let b = with_config("orbit", "heisenberg", &["--mu", "1", "--samples", "10"]);
    assert_eq!(a.stdout, b.stdout);
}
