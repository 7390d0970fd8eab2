use std::path::PathBuf;
use std::process::{Command, Output};

use courant_core::cli::{emit_report, run_suite, Format, Suite, SuiteConfig, VerificationReport};

fn corpus(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name).display().to_string()
}

fn verify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_courant-verify")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> VerificationReport {
    serde_json::from_slice(&out.stdout).expect("json report")
}

#[test]
fn all_suites_pass_on_volume_form() {
    let out = verify(&["--kappa", &corpus("kappa_volume_d3.json"), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let report = json(&out);
    assert!(report.checks.len() >= 40);
    assert!(report.passed());
    assert_eq!(report.elapsed_ms, None);
    let ids: Vec<&str> = report.checks.iter().map(|c| c.id.as_str()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
}

#[test]
fn json_report_is_byte_stable() {
    let args = ["--kappa", &corpus("kappa_poly_d3.json"), "--beta", &corpus("beta_b_d3.json"), "--format", "json", "--seed", "11"];
    let (a, b) = (verify(&args), verify(&args));
    assert_eq!(a.stdout, b.stdout);
    let report = json(&a);
    assert_eq!(emit_report(&report, Format::Json), a.stdout);
}

#[test]
fn seed_changes_random_cases_only() {
    let a = json(&verify(&["--suite", "algebra", "--format", "json", "--seed", "1"]));
    let b = json(&verify(&["--suite", "algebra", "--format", "json", "--seed", "2"]));
    assert_eq!(a.checks, b.checks);
    assert_ne!(a.config, b.config);
}

#[test]
fn jet_suite_with_zero_kappa_includes_integration_theorem() {
    let out = verify(&["--suite", "jet", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert!(report.check("jet.integration_theorem").unwrap().passed());
    assert_eq!(report.suite, "jet");
}

#[test]
fn non_closed_form_fails_maurer_cartan() {
    let out = verify(&["--kappa", &corpus("negative/tau_nonclosed_d4.json"), "--suite", "phase", "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let report = json(&out);
    let mc = report.check("phase.maurer_cartan").unwrap();
    assert!(!mc.passed());
    let residual = mc.residual.as_deref().unwrap();
    assert!(residual.starts_with("Q(q*kappa) = "), "{residual}");
}

#[test]
fn usage_and_parse_errors_exit_2() {
    assert_eq!(verify(&["--suite", "nonsense"]).status.code(), Some(2));
    assert_eq!(verify(&["--kappa", &corpus("negative/arity_d3.json")]).status.code(), Some(2));
    assert_eq!(verify(&["--kappa", "/nonexistent/kappa.json"]).status.code(), Some(2));
    assert_eq!(verify(&["--level-cap", "5"]).status.code(), Some(2));
    assert_eq!(verify(&["--dim", "7"]).status.code(), Some(2));
    assert_eq!(verify(&["--dim", "4", "--kappa", &corpus("kappa_volume_d3.json")]).status.code(), Some(2));
    let stderr = String::from_utf8(verify(&["--kappa", &corpus("negative/arity_d3.json")]).stderr).unwrap();
    assert!(stderr.contains("3-form term needs 3 indices"), "{stderr}");
}

#[test]
fn malformed_json_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\"d\": 3,\n  \"terms\": [ {\"indices\": [1, 2, 3] \"coeff\": \"1\"} ]}").unwrap();
    let out = verify(&["--kappa", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("line 2"), "{stderr}");
}

#[test]
fn unsafe_caps_lift_the_degree_cap() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("big.json");
    std::fs::write(&path, r#"{"d": 3, "terms": [{"indices": [1, 2, 3], "coeff": "x1^5"}]}"#).unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(verify(&["--kappa", p, "--suite", "phase"]).status.code(), Some(2));
    assert_eq!(verify(&["--kappa", p, "--suite", "phase", "--unsafe-caps"]).status.code(), Some(0));
}

#[test]
fn timing_fills_elapsed() {
    let report = json(&verify(&["--suite", "simplicial", "--format", "json", "--timing"]));
    assert!(report.elapsed_ms.is_some());
}

#[test]
fn text_format_lists_checks() {
    let out = verify(&["--suite", "groupoid", "--suite", "simplicial"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("PASS  groupoid.mu_stokes")));
    assert!(text.contains("suite simplicial+groupoid:"));
}

#[test]
fn library_entry_point_matches_binary() {
    let config = SuiteConfig::new(3).with_suites(vec![Suite::Simplicial]);
    let report = run_suite(&config).unwrap();
    let out = verify(&["--suite", "simplicial", "--format", "json"]);
    assert_eq!(emit_report(&report, Format::Json), out.stdout);
}

#[test]
fn help_exits_0() {
    let out = verify(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains("--kappa"));
}
