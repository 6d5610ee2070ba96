use std::process::{Command, Output};

use oscint::classify::{build_trace, GridKind};
use oscint::trace_csv::read_trace_file;
use oscint::{IntegrandSpec, QuadratureConfig, Trig, Weight};

fn oscint(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oscint")).args(args).env_remove("OSCINT_THREADS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn eval_prints_closed_form() {
    let o = oscint(&["eval", "--family", "E5", "--quad", "sin", "--a", "3.1", "--b", "2.2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("status=valid"));
    assert!(text.contains("1.937256"), "{text}");
}

#[test]
fn purported_values_carry_banner_and_verdict() {
    let o = oscint(&["eval", "--family", "E1", "--quad", "sin", "--lin", "sin", "--a", "1", "--b", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("status=purported_erroneous"), "{text}");
    assert!(text.contains("verdict=DivergentBounded"));
}

#[test]
fn classify_e1_is_divergent_bounded() {
    let o = oscint(&["classify", "--family", "E1", "--quad", "cos", "--a", "1", "--b", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["kind"], "DivergentBounded");
}

#[test]
fn trace_csv_matches_library_trace() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    let o = oscint(&[
        "trace", "--family", "E2", "--quad", "sin", "--a", "1", "--b", "2", "--tmax", "20", "--samples", "64", "--grid", "uniform",
        "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let back = read_trace_file(&path).unwrap();
    let spec = IntegrandSpec::new(Weight::X, Trig::Sin, Trig::Cos, 1.0, 2.0).unwrap();
    let lib = build_trace(&spec, 20.0, 64, GridKind::UniformT, &QuadratureConfig::default()).unwrap();
    assert_eq!(back.samples, lib.samples);
    assert!(std::fs::read_to_string(&path).unwrap().starts_with("T,p_re\n"));
}

#[test]
fn ibp_check_and_pv_probe() {
    let o = oscint(&["ibp-check", "--t1", "2", "--t2", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let diff: f64 = stdout(&o).lines().find_map(|l| l.strip_prefix("difference=")).unwrap().parse().unwrap();
    assert!(diff <= 1e-8);

    let o = oscint(&["pv-probe", "--tmax", "40"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verdict=DivergentBounded"));
}

#[test]
fn dui_control_is_valid() {
    let o = oscint(&["dui", "--family", "control", "--b", "1.5"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["decision"], "valid");
    let o = oscint(&["dui", "--family", "E6", "--quad", "cos", "--a", "1", "--b", "1"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["decision"], "invalid");
}

#[test]
fn report_writes_traces() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let traces = dir.path().join("traces");
    let o = oscint(&["report", "--out", out.to_str().unwrap(), "--trace-dir", traces.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    for e in v["entries"].as_array().unwrap() {
        let p = e["trace_file"].as_str().unwrap();
        assert!(read_trace_file(p.as_ref()).unwrap().len() >= 512);
    }
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(oscint(&["fresnel", "--x", "1", "--nope"]).status.code(), Some(1));
    assert_eq!(oscint(&["eval", "--family", "E9", "--quad", "sin", "--a", "1", "--b", "1"]).status.code(), Some(1));
    assert_eq!(oscint(&["fresnel", "--x=-2"]).status.code(), Some(1));
    assert_eq!(oscint(&["trace", "--family", "E5", "--quad", "sin", "--a", "1", "--b", "1", "--samples", "8", "--out", "/tmp/x.csv"]).status.code(), Some(1));
    let o = Command::new(env!("CARGO_BIN_EXE_oscint")).args(["fresnel", "--x", "1"]).env("OSCINT_THREADS", "0").output().unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(oscint(&["--help"]).status.code(), Some(0));
}

#[test]
fn unwritable_report_path_fails() {
    let o = oscint(&["report", "--out", "/nonexistent-dir/r.json"]);
    assert_eq!(o.status.code(), Some(1));
}
