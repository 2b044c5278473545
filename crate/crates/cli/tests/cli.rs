use std::process::{Command, Output};

use serde_json::Value;

fn ffperm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ffperm"))
        .args(args)
        .env_remove("FFPERM_MAX_Q")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn verify_frobenius() {
    let out = ffperm(&["pp", "verify", "--field", "2,2", "--poly", "0,0,1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["pp"], true);
    assert_eq!(v["schema"], 1);
}

#[test]
fn non_permutation_exits_one_with_witness() {
    let out = ffperm(&["pp", "verify", "--field", "2,2", "--poly", "0,0,0,1"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["pp"], false);
    assert_eq!(v["witness"]["value"], 1);

    let out = ffperm(&["pp", "invert", "--field", "2,2", "--poly", "0,0,0,1"]);
    assert_eq!(out.status.code(), Some(1));
    let out = ffperm(&["pp", "invert", "--field", "2,2", "--poly", "0,2"]);
    assert_eq!(json(&out)["inverse"], serde_json::json!([0, 3]));
}

#[test]
fn family_enumeration_reports_prediction() {
    let out = ffperm(&["family", "enumerate", "--q", "2", "--variant", "II"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["predicted"], 16);
    assert_eq!(v["tuples"], 24);
    assert_eq!(v["predicted_matches_total"], false);
    assert_eq!(v["all_pp"], true);
    assert_eq!(v["all_inv_ok"], true);
    assert_eq!(v["per_a"]["1"], 8);
}

#[test]
fn family_single_tuple() {
    let base = ["--q", "2", "--variant", "II", "--a", "1", "--u", "1", "--v", "0", "--c", "1"];
    let with = |cmd: &str, b: &str| {
        let mut args = vec!["family", cmd];
        args.extend(base);
        args.extend(["--b", b]);
        ffperm(&args)
    };
    assert_eq!(json(&with("build", "1"))["f"], serde_json::json!([0, 1]));
    assert_eq!(json(&with("invert", "0"))["inverse"], serde_json::json!([0, 0, 1]));
    assert_eq!(with("validate", "0").status.code(), Some(0));

    let bad = ffperm(&[
        "family", "validate", "--q", "2", "--a", "1", "--u", "1", "--v", "2", "--c", "1", "--b", "0",
    ]);
    assert_eq!(bad.status.code(), Some(1));
    assert_eq!(json(&bad)["failures"][0]["condition"], "first_equation");
}

#[test]
fn linearized_criteria_agree() {
    let out = ffperm(&["lin", "criteria", "--q", "2", "--n", "2", "--coeffs", "0,1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    for key in ["bijective", "dickson", "omega_basis", "d1", "trace", "agree"] {
        assert_eq!(v[key], true, "{key}");
    }
    let out = ffperm(&["lin", "criteria", "--q", "2", "--n", "2", "--coeffs", "2,1"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["trace_witness"], 2);
}

#[test]
fn linearized_inverse_and_search() {
    let out = ffperm(&["lin", "invert", "--q", "2", "--n", "2", "--coeffs", "2,0"]);
    assert_eq!(json(&out)["inverse"], serde_json::json!([3, 0]));
    let out = ffperm(&["lin", "invert", "--q", "2", "--n", "2", "--coeffs", "1,1"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["kernel_element"], 1);

    let out = ffperm(&["lin", "min-witness", "--q", "2", "--n", "2"]);
    assert_eq!(json(&out)["witness"], serde_json::json!([1, 2, 3]));

    let out = ffperm(&["lin", "degenerate", "--q", "2", "--n", "3"]);
    let v = json(&out);
    assert_eq!(v["image"].as_array().unwrap().len(), 2);
    assert_eq!(v["audit_counterexamples"], 1);
}

#[test]
fn local_certification() {
    let out = ffperm(&["pp", "local", "--field", "2,2", "--poly", "0,0,1", "--phi", "0,1,1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["verdict"], "bijective");
    assert_eq!(v["psi"], serde_json::json!([0, 0, 1, 1]));
    assert_eq!(v["compatible_bijections"], "4");

    let out = ffperm(&["pp", "local", "--field", "2,2", "--poly", "0,0,0,1", "--phi", "0,1,1"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["reason"], "not_injective_on_fiber");

    let out = ffperm(&[
        "pp", "local-inverse", "--field", "2,2", "--poly", "0,0,1", "--psi", "0,1,3,2", "--combiner", r#"["var",0]"#,
    ]);
    assert_eq!(json(&out)["inverse"], serde_json::json!([0, 0, 1]));
}

#[test]
fn multiplicative_check() {
    let out = ffperm(&["mult", "check", "--q", "7", "--r", "5", "--s", "3", "--h", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let out = ffperm(&["mult", "check", "--q", "7", "--r", "2", "--s", "3", "--h", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let out = ffperm(&["mult", "check", "--q", "7", "--r", "2", "--s", "4", "--h", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sbox_export() {
    let out = ffperm(&["export", "sbox", "--field", "2,2", "--poly", "0,2", "--format", "csv"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "x,f(x)\n0,0\n1,2\n2,3\n3,1\n");
    let out = ffperm(&["export", "sbox", "--field", "2,2", "--poly", "0,2"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "const unsigned sbox[4] = {0, 2, 3, 1};\n");
}

#[test]
fn input_errors_exit_two() {
    let out = ffperm(&["pp", "verify", "--field", "2,2", "--poly", "0,9"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("out of range"));
    assert_eq!(ffperm(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(ffperm(&["pp", "verify", "--field", "4,1", "--poly", "1"]).status.code(), Some(2));
    assert_eq!(ffperm(&["pp", "verify", "--field", "2,2", "--poly", "x"]).status.code(), Some(2));
}

#[test]
fn bound_from_environment_and_config() {
    let out = Command::new(env!("CARGO_BIN_EXE_ffperm"))
        .args(["pp", "verify", "--field", "2,4", "--poly", "0,1"])
        .env("FFPERM_MAX_Q", "8")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    let path = std::env::temp_dir().join(format!("ffperm-cfg-{}.json", std::process::id()));
    std::fs::write(&path, r#"{"max_q": 8, "format": "plain"}"#).unwrap();
    let cfg = path.to_str().unwrap();
    let out = ffperm(&["--config", cfg, "pp", "verify", "--field", "2,3", "--poly", "0,1"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "poly: [0,1]\npp: true\nschema: 1\n");
    let out = ffperm(&["--config", cfg, "pp", "verify", "--field", "2,4", "--poly", "0,1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = ffperm(&["--config", cfg, "--max-q", "16", "pp", "verify", "--field", "2,4", "--poly", "0,1"]);
    assert_eq!(out.status.code(), Some(0));
    std::fs::remove_file(path).ok();
}

#[test]
fn output_is_deterministic() {
    let args = ["--seed", "3", "family", "enumerate", "--q", "3", "--variant", "I", "--dedupe"];
    let a = ffperm(&args);
    let b = ffperm(&args);
    assert_eq!(a.stdout, b.stdout);
    let mut seq = vec!["--jobs", "1"];
    seq.extend(args);
    assert_eq!(ffperm(&seq).stdout, a.stdout);
}

#[test]
fn field_show() {
    let v = json(&ffperm(&["field", "show", "--p", "3", "--m", "2"]));
    assert_eq!(v["field"]["modulus"], serde_json::json!([1, 0, 1]));
    assert_eq!(v["primitive_element"], 4);
    assert_eq!(v["order"], 9);
}
