use std::process::Command;

use serde_json::Value;

fn hypolab(args: &[&str]) -> (i32, Value, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_hypolab")).args(args).output().expect("binary runs");
    let code = out.status.code().expect("exit code");
    let stdout = String::from_utf8(out.stdout).unwrap();
    let report = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    (code, report, String::from_utf8(out.stderr).unwrap())
}

fn summary(r: &Value) -> String {
    r["summary"].as_array().unwrap().iter().map(|s| s.as_str().unwrap()).collect::<Vec<_>>().join("\n")
}

#[test]
fn algebra_info_series() {
    let (code, r, _) = hypolab(&["algebra", "info", "builtin:heisenberg:2"]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["lower_central_dims"], serde_json::json!([5, 1, 0]));
    let (_, r, _) = hypolab(&["algebra", "info", "builtin:g23"]);
    assert_eq!(r["results"]["lower_central_dims"], serde_json::json!([5, 3, 2, 0]));
    assert_eq!(r["results"]["center"]["basis"], serde_json::json!(["Y1", "Y2"]));
}

#[test]
fn malformed_inputs_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ \"dim\": 2, ").unwrap();
    let (code, r, err) = hypolab(&["algebra", "info", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(r.is_null());
    assert!(err.contains("parse error"), "{err}");

    let (code, _, err) = hypolab(&["algebra", "info", "builtin:nonsense"]);
    assert_eq!(code, 2);
    assert!(err.contains("unknown builtin"));
    let (code, _, _) = hypolab(&["torus", "frobnicate", "builtin:golden"]);
    assert_eq!(code, 2);
    let (code, _, err) = hypolab(&["cohomology", "trivial", "builtin:abelian:3", "--degree", "7"]);
    assert_eq!(code, 2);
    assert!(err.contains("degree"), "{err}");
}

#[test]
fn jacobi_failure_names_the_triple() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    // [a,b] = c, [b,c] = a, [c,a] = a breaks Jacobi
    let text = r#"{"dim": 3, "basis": ["a", "b", "c"], "brackets": [
        {"i": 0, "j": 1, "coeffs": {"2": "1"}},
        {"i": 1, "j": 2, "coeffs": {"0": "1"}},
        {"i": 2, "j": 0, "coeffs": {"0": "1"}}]}"#;
    std::fs::write(&path, text).unwrap();
    let (code, _, err) = hypolab(&["algebra", "info", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("Jacobi") && err.contains("(a, b, c)"), "{err}");
}

#[test]
fn cohomology_examples() {
    let cases = [
        (["cohomology", "trivial", "builtin:heisenberg:1", "--degree", "1"], 2),
        (["cohomology", "trivial", "builtin:abelian:3", "--degree", "2"], 3),
        (["cohomology", "adjoint", "builtin:heisenberg:1", "--degree", "0"], 1),
    ];
    for (args, dim) in cases {
        let (code, r, _) = hypolab(&args);
        assert_eq!(code, 0);
        assert_eq!(r["results"]["degrees"][0]["cohomology"], dim, "{args:?}");
    }
    let (_, r, _) = hypolab(&["cohomology", "trivial", "builtin:abelian:3"]);
    let dims: Vec<u64> =
        r["results"]["degrees"].as_array().unwrap().iter().map(|d| d["cohomology"].as_u64().unwrap()).collect();
    assert_eq!(dims, vec![1, 3, 3, 1]);
}

#[test]
fn torus_commands() {
    let (code, r, _) = hypolab(&["torus", "scan", "builtin:golden", "--tau", "1", "--radius", "1000"]);
    assert_eq!(code, 0);
    assert!(r["results"]["k_hat"].as_f64().unwrap() >= 0.8);
    assert_eq!(r["verdict"], "diophantine-consistent");

    let (code, r, _) = hypolab(&["torus", "scan", "builtin:rational-half", "--radius", "10"]);
    assert_eq!(code, 3);
    assert_eq!(r["results"]["resonance"], serde_json::json!([-1, 2]));

    let (code, r, _) = hypolab(&["torus", "solve", "builtin:rational-half", "builtin:mode:1,-2"]);
    assert_eq!(code, 3);
    assert_eq!(r["results"]["resonance"], serde_json::json!([1, -2]));

    let (code, r, _) = hypolab(&["torus", "solve", "builtin:golden", "builtin:mode:3,-5"]);
    assert_eq!(code, 0);
    assert!(r["results"]["residual"].as_f64().unwrap() <= 1e-12);

    let (code, r, _) = hypolab(&["torus", "tame", "builtin:golden", "--radius", "50"]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["table"].as_array().unwrap().len(), 4);
    assert_eq!(r["results"]["bounded"], true);
}

#[test]
fn series_file_solve() {
    let dir = tempfile::tempdir().unwrap();
    let v = dir.path().join("v.json");
    std::fs::write(&v, r#"[{"n": [0, 0], "re": 2.0}, {"n": [1, 1], "re": 1.0}, {"n": [-1, -1], "re": 1.0}]"#).unwrap();
    let (code, r, _) = hypolab(&["torus", "solve", "builtin:golden", v.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["obstruction"]["re"], 2.0);
    assert_eq!(r["results"]["solution"].as_array().unwrap().len(), 2);
    assert_eq!(r["inputs"].as_array().unwrap().len(), 2);
}

#[test]
fn cochain_commands() {
    let (code, r, _) = hypolab(&["cochain", "hodge", "builtin:golden-2d"]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["harmonic_dims"], serde_json::json!([1, 2, 1]));
    assert!(r["results"]["reconstruction_error"].as_f64().unwrap() <= 1e-11);

    let (code, r, _) = hypolab(&["cochain", "roundtrip", "builtin:golden-2d", "--seed", "7"]);
    assert_eq!(code, 0);
    assert!(r["results"]["roundtrip_error"].as_f64().unwrap() <= 1e-8);

    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("w.json");
    std::fs::write(&w, r#"{"k": 2, "degree": 1, "components": [{"index": [0], "series": [{"n": [0, 1], "re": 1.0}]}]}"#)
        .unwrap();
    let (code, _, err) = hypolab(&["cochain", "roundtrip", "builtin:golden-2d", w.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("not closed"), "{err}");
}

#[test]
fn heisenberg_commands() {
    let (code, r, _) = hypolab(&["heisenberg", "check", "builtin:no-center"]);
    assert_eq!(code, 3);
    assert!(summary(&r).contains("center test: FAIL"));

    let (code, r, _) = hypolab(&["heisenberg", "check", "builtin:x-flow"]);
    assert_eq!(code, 3);
    assert!(summary(&r).contains("center test: FAIL"));

    let (code, r, _) = hypolab(&["heisenberg", "check", "builtin:center-golden", "--tau", "1", "--radius", "1000"]);
    assert_eq!(code, 0);
    assert!(r["verdict"].as_str().unwrap().starts_with("passes necessary conditions"));

    let (code, r, _) = hypolab(&["heisenberg", "witness"]);
    assert_eq!(code, 3);
    assert!(summary(&r).contains("obstruction: v(0)=1"));

    let (code, r, _) = hypolab(&["heisenberg", "witness", "--g", "2", "--k", "2", "--profile", "cancellation"]);
    assert_eq!(code, 0);
    assert!(r["results"]["residual"].as_f64().unwrap() <= 1e-8);

    let (code, _, _) = hypolab(&["heisenberg", "witness", "--step", "0.07"]);
    assert_eq!(code, 2);
}

#[test]
fn counterexample_brackets() {
    for (beta, expect) in [("1", "Y1 + Y2"), ("0", "Y1"), ("-2/3", "Y1 - (2/3)Y2")] {
        let (code, r, _) = hypolab(&["counterexample", "--beta", beta]);
        assert_eq!(code, 0);
        assert_eq!(r["results"]["bracket"], expect);
        assert_eq!(r["verdict"], "abelian lift impossible");
    }
}

#[test]
fn reports_are_byte_stable_and_out_works() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let args = ["cochain", "hodge", "builtin:golden-2d", "--seed", "3", "--out", out.to_str().unwrap()];
    let (code, _, _) = hypolab(&args);
    assert_eq!(code, 0);
    let first = std::fs::read(&out).unwrap();
    hypolab(&args);
    assert_eq!(first, std::fs::read(&out).unwrap());
    let report: Value = serde_json::from_slice(&first).unwrap();
    assert!(report.get("wall_clock_seconds").is_none());
    assert_eq!(report["inputs"][0]["sha256"].as_str().unwrap().len(), 64);

    let (_, timed, _) = hypolab(&["counterexample", "--timing"]);
    assert!(timed["wall_clock_seconds"].as_f64().is_some());
}
