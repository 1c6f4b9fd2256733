use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn hcalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hcalc"))
        .args(args)
        .output()
        .unwrap()
}

#[test]
fn residue_with_numeric_rendering() {
    let out = hcalc(&[
        "residue",
        &data("rho_minus_quarter.json"),
        "--numeric",
        "--digits",
        "12",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        String::from_utf8_lossy(&out.stdout),
        "(1/1)·pi^(-2/2)\n≈ 0.318309886184\n"
    );
}

#[test]
fn graded_trace_of_top_form_is_the_residue() {
    let out = hcalc(&["trs", &data("rho_minus_quarter.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "(1/1)·pi^(-2/2)\n");
}

#[test]
fn log_residue_is_a_domain_error() {
    let out = hcalc(&["residue", &data("log_term.json")]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("log"));
}

#[test]
fn malformed_json_reports_position() {
    let dir = std::env::temp_dir().join(format!("hcalc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("broken.json");
    std::fs::write(&path, "{\n  \"formatVersion\": 1,\n  \"shape\": [1, 0\n}").unwrap();
    let out = hcalc(&["residue", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 4"), "{}", err);
}

#[test]
fn unknown_flag_is_a_parse_error() {
    assert_eq!(hcalc(&["residue", "--bogus"]).status.code(), Some(2));
}

#[test]
fn injected_fault_fails_verification() {
    let out = hcalc(&[
        "verify",
        "--suite",
        "crossed",
        "--seed",
        "3",
        "--inject-fault",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report["failure_count"].as_u64().unwrap() > 0);
    let failing: Vec<&str> = report["properties"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|p| !p["failures"].as_array().unwrap().is_empty())
        .map(|p| p["property"].as_str().unwrap())
        .collect();
    assert_eq!(failing, ["localized_trace_property"]);
}

#[test]
fn oracle_agrees_with_cubature() {
    let out = hcalc(&[
        "oracle", "--shape", "1,1", "--gamma", "2,0", "--tol", "1e-10",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(doc["absDiff"].as_f64().unwrap() < 1e-6);
}

#[test]
fn dirac_of_constant_connection() {
    let dir = std::env::temp_dir().join(format!("hcalc-dirac-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("gamma.json");
    std::fs::write(&path, "[[[0, \"1/2\"], [\"1/2\", 0]], [[1, 0], [0, -1]]]").unwrap();
    let out = hcalc(&[
        "dirac",
        "--shape",
        "2,0",
        "--christoffel",
        path.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["generalizedLaplacian"], true);
    assert_eq!(doc["curvatureMatchesConnection"], true);
    assert!(!doc["curvature"].as_array().unwrap().is_empty());
}
