use std::process::{Command, Output};

use serde_json::Value;

fn jtheta(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jtheta"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (Value, String) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let out = jtheta(&full);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    (serde_json::from_str(&text).unwrap(), text)
}

fn terms(v: &Value) -> Vec<&str> {
    v["terms"].as_array().unwrap().iter().map(|t| t.as_str().unwrap()).collect()
}

#[test]
fn d_sequence() {
    let (v, _) = json(&["sequences", "d", "--count", "7"]);
    assert_eq!(v["name"], "d");
    assert_eq!(terms(&v), ["1", "-1", "51", "849", "-26199", "1341999", "82018251"]);
}

#[test]
fn q_sequence() {
    let (v, _) = json(&["sequences", "q", "--count", "3"]);
    assert_eq!(terms(&v), ["2", "-144", "96768"]);
}

#[test]
fn scaled_dk_sequence() {
    let (v, _) = json(&["sequences", "dk", "--p", "3", "--count", "5", "--scaled"]);
    assert_eq!(terms(&v), ["1", "3", "7", "2953", "291969"]);
    assert_eq!(v["params"]["p"], "3");
}

#[test]
fn unscaled_dk_is_rational() {
    let (v, _) = json(&["sequences", "dk", "--p", "2", "--count", "2"]);
    assert_eq!(terms(&v), ["1/2", "-1/4"]);
}

#[test]
fn json_round_trips_byte_for_byte() {
    for args in [
        &["sequences", "d", "--count", "5"][..],
        &["conjecture", "--p", "5", "--count", "4"][..],
        &["verify", "symmetry", "--nmax", "3", "--digits", "30"][..],
        &["reconcile", "--nmax", "2"][..],
    ] {
        let (v, text) = json(args);
        let again = serde_json::to_string_pretty(&v).unwrap() + "\n";
        assert_eq!(again, text, "{args:?}");
    }
}

#[test]
fn verify_all_passes() {
    let out = jtheta(&["verify", "all", "--digits", "50"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(!text.contains("FAIL"));
}

#[test]
fn verify_theorem3_residuals_at_30_digits() {
    let (v, _) = json(&["verify", "theorem3", "--k", "0.3", "--nmax", "6", "--digits", "30"]);
    let cells = v.as_array().unwrap();
    assert_eq!(cells.len(), 7);
    for cell in cells {
        assert_eq!(cell["k"], "0.3");
        assert_eq!(cell["digits"], 30);
        let residual: f64 = cell["residual"].as_str().unwrap().parse().unwrap();
        assert!(residual < 1e-22, "{cell}");
        assert_eq!(cell["passed"], true);
    }
}

#[test]
fn report_keys_follow_the_schema() {
    let (v, _) = json(&["verify", "romik", "--nmax", "1"]);
    let keys: Vec<&str> = v[0].as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["identity", "n", "k", "digits", "lhs", "rhs", "residual", "tolerance", "passed"]);
}

#[test]
fn out_of_domain_modulus_exits_2() {
    let out = jtheta(&["verify", "all", "--k", "1.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("domain"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(jtheta(&["sequences", "d", "--bogus"]).status.code(), Some(2));
    assert_eq!(jtheta(&["verify", "all", "--digits", "10"]).status.code(), Some(2));
    assert_eq!(jtheta(&["sequences", "dk", "--count", "3"]).status.code(), Some(2));
    assert_eq!(jtheta(&["conjecture", "--p", "1"]).status.code(), Some(2));
    assert_eq!(jtheta(&["reconcile", "--nmax", "6"]).status.code(), Some(2));
}

#[test]
fn failing_verification_exits_1() {
    let out = jtheta(&["verify", "printed", "--nmax", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}

#[test]
fn conjecture_row_for_p6() {
    let (v, _) = json(&["conjecture", "--p", "6", "--count", "6"]);
    let scaled: Vec<&str> = v["rows"].as_array().unwrap().iter().map(|r| r["scaled"].as_str().unwrap()).collect();
    assert_eq!(scaled, ["1", "123", "8059", "724877", "1686624921", "3594330803003"]);
    assert_eq!(v["all_integral"], true);
    assert_eq!(v["m0"]["scaled"], "1/5");
}

#[test]
fn conjecture_for_p2_is_d() {
    let (v, _) = json(&["conjecture", "--p", "2", "--count", "4"]);
    let scaled: Vec<&str> = v["rows"].as_array().unwrap().iter().map(|r| r["scaled"].as_str().unwrap()).collect();
    assert_eq!(scaled, ["1", "-1", "51", "849"]);
}

#[test]
fn conjecture_for_p11_reports_denominators() {
    let (v, _) = json(&["conjecture", "--p", "11", "--count", "4"]);
    assert!(v["all_integral"].is_null());
    for row in v["rows"].as_array().unwrap() {
        assert!(row["alpha"].is_null());
        assert_eq!(row["denominator_factors"][0][0], "11");
    }
    let text = String::from_utf8(jtheta(&["conjecture", "--p", "11", "--count", "4"]).stdout).unwrap();
    assert!(text.contains("denominator 11^2"));
}

#[test]
fn reconcile_names_one_convention() {
    let out = jtheta(&["reconcile"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("unique match for n = 1..3: one even peak, j odd peaks; even cycles only"));
    assert!(text.contains("printed convention at n = 1: mismatch"));
}

#[test]
fn csv_and_out_file() {
    let path = std::env::temp_dir().join(format!("jtheta-cli-test-{}.csv", std::process::id()));
    let out = jtheta(&["--format", "csv", "--out", path.to_str().unwrap(), "sequences", "q", "--count", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(text, "index,value\n4,2\n8,-144\n");
}

#[test]
fn polys_r() {
    let (v, _) = json(&["polys", "--kind", "r", "--count", "3"]);
    assert_eq!(terms(&v), ["1", "0", "-2m^2 + 2m", "16m^3 - 24m^2 + 8m"]);
}
