use std::process::Command;

use serde_json::Value;

struct Run {
    code: i32,
    json: Value,
    stdout: String,
    stderr: String,
}

fn run_env(args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_cuemoments"));
    cmd.args(args).env_remove("CUEMOMENTS_SEED");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    let stdout = String::from_utf8(out.stdout).unwrap();
    let json = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    Run { code: out.status.code().unwrap(), json, stdout, stderr: String::from_utf8(out.stderr).unwrap() }
}

fn run(args: &[&str]) -> Run {
    run_env(args, &[])
}

fn schema() -> jsonschema::Validator {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/schema/output.schema.json")).unwrap();
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).unwrap()
}

fn assert_valid(v: &Value) {
    let schema = schema();
    let errors: Vec<String> = schema.iter_errors(v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "schema violations {errors:?} in {v}");
}

const MC_SMALL: [&str; 6] = ["--samples", "4000", "--burn-in", "500", "--chains", "2"];

#[test]
fn leading_coeff_first_derivative() {
    let r = run(&["leading-coeff", "--orders", "1", "--exponents", "2", "--variant", "Z"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let f = &r.json["result"]["limit"]["function"];
    assert_eq!(f["num"], serde_json::json!(["1"]));
    assert_eq!(f["den"], serde_json::json!(["-1", "0", "4"]));
    assert_valid(&r.json);
}

#[test]
fn leading_coeff_evaluations() {
    let r = run(&["leading_coeff", "--orders", "1", "--exponents", "2", "--variant", "Z", "--eval-s", "1"]);
    assert_eq!(r.json["result"]["evaluation"]["value"], "1/3");
    let v = run(&[
        "leading-coeff",
        "--orders",
        "1",
        "--exponents",
        "2",
        "--variant",
        "V",
        "--eval-s",
        "2",
        "--with-constant",
    ]);
    let ev = &v.json["result"]["evaluation"];
    assert_eq!(ev["value"], "16/15");
    // G(3)²/G(5) = 1/12, times 2^{-2}
    assert_eq!(ev["constant"], "1/48");
    assert_eq!(ev["with_constant"], "1/45");
    assert_valid(&v.json);
}

#[test]
fn with_constant_needs_evaluation_point() {
    let r = run(&["leading-coeff", "--orders", "1", "--exponents", "2", "--with-constant"]);
    assert_eq!(r.code, 2);
    assert_eq!(r.json["exit_code"], 2);
    assert_valid(&r.json);
}

#[test]
fn finite_moment_second_derivative() {
    let r = run(&["finite_moment", "--N", "1", "--orders", "2,0", "--exponents", "2,_", "--variant", "Z"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.json["result"]["moment"]["display"], "1/16");
    assert_valid(&r.json);
}

#[test]
fn mc_estimate_matches_exact_value() {
    let exact = run(&["finite-moment", "--N", "2", "--orders", "2,0", "--exponents", "2,_", "--eval-s", "2"]);
    let want = exact.json["result"]["evaluation"]["value_f64"].as_f64().unwrap();
    let mut args = vec!["mc-estimate", "--N", "2", "--s", "2", "--orders", "2,0", "--exponents", "2,_", "--seed", "3"];
    args.extend(["--samples", "20000", "--chains", "2"]);
    let r = run(&args);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let res = &r.json["result"];
    let (est, se) = (res["estimate"].as_f64().unwrap(), res["stderr"].as_f64().unwrap());
    assert!((est - want).abs() <= 4.0 * se, "{est} ± {se} vs {want}");
    assert_eq!(r.json["manifest"]["seeds"], serde_json::json!([3]));
    assert_valid(&r.json);
}

#[test]
fn seed_comes_from_environment() {
    let mut args = vec!["mc-estimate", "--N", "1", "--s", "2", "--orders", "1", "--exponents", "1"];
    args.extend(MC_SMALL);
    let a = run_env(&args, &[("CUEMOMENTS_SEED", "11")]);
    assert_eq!(a.json["manifest"]["seeds"], serde_json::json!([11]));
    let mut explicit = args.clone();
    explicit.extend(["--seed", "11"]);
    let b = run(&explicit);
    assert_eq!(a.json["result"], b.json["result"]);
}

#[test]
fn mc_is_deterministic_and_digest_is_stable() {
    let mut args = vec!["mc_estimate", "--N", "2", "--s", "1.5", "--orders", "1", "--exponents", "3", "--seed", "9"];
    args.extend(MC_SMALL);
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.json["result"], b.json["result"]);
    assert_eq!(a.json["manifest"]["output_digest"], b.json["manifest"]["output_digest"]);
    let mut other = args.clone();
    other[11] = "10";
    let c = run(&other);
    assert_ne!(a.json["manifest"]["output_digest"], c.json["manifest"]["output_digest"]);
}

#[test]
fn quadrature_polynomial() {
    let r = run(&["quadrature", "--N", "1", "--s", "2", "--poly", "x1^2"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = r.json["result"]["value"].as_f64().unwrap();
    assert!((v - 1.0 / 3.0).abs() < 1e-12);
    assert_valid(&r.json);
}

#[test]
fn quadrature_spec_integrand_and_rejections() {
    let r = run(&["quadrature", "--N", "2", "--s", "2", "--orders", "2,0", "--exponents", "2,_"]);
    let exact = run(&["finite-moment", "--N", "2", "--orders", "2,0", "--exponents", "2,_", "--eval-s", "2"]);
    let want = exact.json["result"]["evaluation"]["value_f64"].as_f64().unwrap();
    assert!((r.json["result"]["value"].as_f64().unwrap() - want).abs() < 1e-9 * want);
    // x^4 is not integrable against the s = 1 weight at N = 1
    let bad = run(&["quadrature", "--N", "1", "--s", "1", "--poly", "x1^4"]);
    assert_eq!(bad.code, 2);
    assert_eq!(bad.json["error"]["kind"], "non_integrable");
}

#[test]
fn painleve_finite_closed_form() {
    let r = run(&["painleve", "--mode", "p5-finite", "--N", "1", "--s", "1"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.json["result"]["residual_zero"], true);
    assert_eq!(r.json["result"]["tau"], "-t^2/(2*t + 4)");
    assert_valid(&r.json);
}

#[test]
fn painleve_limit_series() {
    let r = run(&["painleve", "--mode", "p3-limit", "--s", "1", "--series-order", "12"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let res = &r.json["result"];
    let coeffs = res["residual"].as_array().unwrap();
    assert_eq!(coeffs.len(), 11);
    assert!(coeffs.iter().all(|c| c == "0/1"));
    assert_eq!(res["c2"], "-1/12");
    assert_valid(&r.json);
}

#[test]
fn painleve_rejects_non_integer_s() {
    let r = run(&["painleve", "--mode", "p3-limit", "--s", "3/2"]);
    assert_eq!(r.code, 2);
    assert_eq!(r.json["error"]["kind"], "unsupported_parameter");
}

#[test]
fn hankel_verify_at_one_passes() {
    let r = run(&["hankel-verify", "--N", "1", "--s", "1"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert_eq!(r.json["result"]["all_pass"], true);
    assert_valid(&r.json);
}

#[test]
fn hankel_verify_defaults_report_second_relation() {
    let r = run(&["hankel_verify"]);
    assert_eq!(r.code, 4);
    assert_eq!(r.json["result"]["failed"], serde_json::json!(["relation_2"]));
    assert!(r.stderr.contains("relation_2"));
    let passing: Vec<&str> = r.json["result"]["identities"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["pass"] == true)
        .map(|c| c["identity"].as_str().unwrap())
        .collect();
    for name in ["theta_three_term", "initial_conditions", "vector_recursion", "relation_1"] {
        assert!(passing.contains(&name), "{name}");
    }
}

#[test]
fn hankel_verify_perturbation_is_caught() {
    let r = run(&["hankel-verify", "--N", "1", "--s", "1", "--perturb"]);
    assert_eq!(r.code, 4);
    assert_eq!(r.json["result"]["failed"], serde_json::json!(["vector_recursion"]));
    let rec = r.json["result"]["identities"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["identity"] == "vector_recursion")
        .unwrap();
    assert!(rec["nonzero_terms"].as_u64().unwrap() > 0);
}

#[test]
fn asymptotics_csv_and_json() {
    let csv =
        run(&["--format", "csv", "asymptotics", "--orders", "2,0", "--exponents", "2,_", "--s", "2", "--sizes", "1,2"]);
    assert_eq!(csv.code, 0, "{}", csv.stderr);
    let lines: Vec<&str> = csv.stdout.lines().collect();
    assert_eq!(lines[0], "N,value,stderr,exact");
    assert_eq!(lines.len(), 4);
    assert!(lines[3].starts_with("inf,"));
    let json = run(&["asymptotics", "--orders", "2,0", "--exponents", "2,_", "--s", "2", "--sizes", "1,2"]);
    assert_valid(&json.json);
    assert_eq!(json.json["result"]["rows"][0]["exact"]["num"], serde_json::json!(["1"]));
}

#[test]
fn replay_reproduces_exact_and_mc_runs() {
    let dir = std::env::temp_dir().join(format!("cuemoments-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let m = dir.join("m.json");
    let ms = m.to_str().unwrap();
    let mut mc = vec!["--manifest-out", ms, "mc-estimate", "--N", "1", "--s", "2", "--orders", "1", "--exponents", "2"];
    mc.extend(MC_SMALL);
    for args in [vec!["--manifest-out", ms, "finite-moment", "--N", "2", "--orders", "1", "--exponents", "2"], mc] {
        let first = run(&args);
        assert_eq!(first.code, 0, "{}", first.stderr);
        let r = run(&["replay", ms]);
        assert_eq!(r.code, 0, "{}", r.stdout);
        assert_eq!(r.json["result"]["reproduced"], true);
        assert_eq!(r.json["result"]["expected_digest"], first.json["manifest"]["output_digest"]);
        assert_valid(&r.json);
    }
    let text = std::fs::read_to_string(&m).unwrap();
    let mut v: Value = serde_json::from_str(&text).unwrap();
    v["output_digest"] = Value::String("0".repeat(64));
    std::fs::write(&m, v.to_string()).unwrap();
    assert_eq!(run(&["replay", ms]).code, 4);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn invalid_input_gives_error_json() {
    for args in [
        vec!["leading-coeff", "--orders", "1,2", "--exponents", "2,2"],
        vec!["finite-moment", "--N", "8", "--orders", "1", "--exponents", "2"],
        vec!["finite-moment", "--N", "1", "--orders", "1", "--exponents", "_"],
        vec!["leading-coeff", "--orders", "1", "--exponents", "3"],
        vec!["no-such-command"],
    ] {
        let r = run(&args);
        assert_eq!(r.code, 2, "{args:?}");
        assert_valid(&r.json);
        assert!(r.stderr.starts_with("error:"));
    }
}
