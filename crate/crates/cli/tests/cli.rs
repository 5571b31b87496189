use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_affinewalk"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[derive(Debug, serde::Deserialize)]
struct BoundRow {
    n: u64,
    ub: f64,
    lb: f64,
    tv_exact: Option<f64>,
}

fn bound_rows(text: &str) -> Vec<BoundRow> {
    csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes())
        .deserialize()
        .collect::<Result<_, _>>()
        .unwrap()
}

#[test]
fn classify_reference_matrices() {
    let v = json(&run(&["classify", "--matrix", "2,1;1,1", "--ps", "5,9"]));
    assert_eq!(v["result"]["spectrum"]["classification"], "AllOffUnitCircle");
    assert_eq!(v["result"]["admissibility"][1]["admissible"], true);

    let v = json(&run(&["classify", "--matrix", "[[0,-1],[1,0]]"]));
    assert_eq!(v["result"]["spectrum"]["classification"], "RootOfUnity");
    assert_eq!(v["result"]["spectrum"]["m"], 4);
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| run(args).status.code().unwrap();
    // singular matrix
    assert_eq!(code(&["classify", "--matrix", "1,1;1,1"]), 3);
    // malformed matrix, missing settings, unknown method, bad flags
    assert_eq!(code(&["classify", "--matrix", "1,1;1"]), 2);
    assert_eq!(code(&["bounds", "--matrix", "2,1;1,1", "--p", "5"]), 2);
    assert_eq!(code(&["mixtime", "--matrix", "2,1;1,1", "--p", "5", "--epsilon", "0.1", "--method", "fast"]), 2);
    assert_eq!(code(&["bounds", "--bogus"]), 2);
    assert_eq!(code(&["bounds", "--matrix", "2,1;1,1", "--p", "1", "--n", "3"]), 2);
    // inadmissible pair, composite modulus for a projection, no unit eigenvalue
    assert_eq!(code(&["bounds", "--matrix", "2,0;0,1", "--p", "4", "--n", "3"]), 3);
    assert_eq!(code(&["orbit", "--matrix", "2,0;0,1", "--p", "4", "--c", "1,0"]), 3);
    assert_eq!(code(&["project", "--matrix", "1,1;0,2", "--p", "9"]), 3);
    assert_eq!(code(&["project", "--matrix", "2,1;1,1", "--p", "101"]), 3);
    // budgets
    assert_eq!(code(&["bounds", "--matrix", "2,1;1,1", "--p", "101", "--n", "3", "--character-cap", "100"]), 4);
    assert_eq!(code(&["mixtime", "--matrix", "2,1;1,1", "--p", "101", "--epsilon", "0.1", "--method", "exact", "--state-cap", "100"]), 4);
}

#[test]
fn budget_failure_leaves_header() {
    let out = run(&["bounds", "--matrix", "2,1;1,1", "--p", "101", "--n", "0..3", "--character-cap", "100"]);
    assert_eq!(out.status.code(), Some(4));
    let text = stdout(&out);
    assert!(text.starts_with("# affinewalk "));
    assert!(text.ends_with("n,ub,lb,tv_exact\n"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("character budget"));
}

#[test]
fn bounds_golden_file() {
    let out = run(&["bounds", "--matrix", "2,1;1,1", "--p", "5", "--n", "0..=15"]);
    assert!(out.status.success());
    let expected = std::fs::read_to_string(golden("bounds_p5.csv")).unwrap();
    assert_eq!(stdout(&out), expected);
    let rows = bound_rows(&expected);
    assert_eq!(rows.len(), 16);
    for (i, r) in rows.iter().enumerate() {
        assert_eq!(r.n, i as u64);
        let tv = r.tv_exact.unwrap();
        assert!(r.lb - 1e-12 <= tv && tv <= r.ub + 1e-12, "row {i}");
    }
    assert!((rows[2].tv_exact.unwrap() - 0.68).abs() < 1e-12);
}

#[test]
fn bounds_edge_cases() {
    let out = run(&["bounds", "--matrix", "2,1;1,1", "--p", "5", "--n", "4..4"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 2);
    assert!(text.ends_with("n,ub,lb,tv_exact\n"));

    // composite modulus with det 1
    let out = run(&["bounds", "--matrix", "2,1;1,1", "--p", "9", "--n", "0..=5"]);
    assert!(out.status.success());
    let rows = bound_rows(&stdout(&out));
    assert_eq!(rows.len(), 6);
    assert!((rows[0].tv_exact.unwrap() - 80.0 / 81.0).abs() < 1e-15);
}

#[test]
fn mixtime_outcomes() {
    let v = json(&run(&["mixtime", "--matrix", "2,1;1,1", "--p", "5", "--epsilon", "1"]));
    assert_eq!(v["result"]["outcome"]["n"], 0);
    let v = json(&run(&["mixtime", "--matrix", "2,1;1,1", "--p", "5", "--epsilon", "0.25", "--method", "exact"]));
    assert_eq!(v["result"]["outcome"], serde_json::json!({"status": "mixed", "n": 3}));
    let v = json(&run(&["mixtime", "--matrix", "1,1;0,2", "--p", "101", "--epsilon", "0.01", "--n-cap", "50"]));
    assert_eq!(v["result"]["outcome"], serde_json::json!({"status": "not_mixed", "n_max": 50}));
}

#[test]
fn orbit_and_projection() {
    let v = json(&run(&["orbit", "--matrix", "2,1;1,1", "--p", "101", "--c", "1,0", "--c1", "0.125"]));
    assert_eq!(v["result"]["first_large_ell"], 3);
    assert_eq!(v["result"]["orbit"][3]["entries"], serde_json::json!([13, 8]));

    let v = json(&run(&["project", "--matrix", "1,1;0,2", "--p", "101"]));
    assert_eq!(v["result"]["v"]["entries"], serde_json::json!([1, 100]));
    assert_eq!(v["result"]["v_centered"], serde_json::json!([1, -1]));
    assert_eq!(v["result"]["u"], 3);
}

#[test]
fn config_file_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"matrix": "2,1;1,1", "p": 7, "n": "0..=3"}"#).unwrap();
    let cfg = cfg.to_str().unwrap();
    let from_file = stdout(&run(&["bounds", "--config", cfg]));
    let direct = stdout(&run(&["bounds", "--matrix", "2,1;1,1", "--p", "7", "--n", "0..4"]));
    assert_eq!(from_file, direct);
    let overridden = stdout(&run(&["bounds", "--config", cfg, "--p", "5"]));
    assert_eq!(bound_rows(&overridden)[1].tv_exact, bound_rows(&stdout(&run(&["bounds", "--matrix", "2,1;1,1", "--p", "5", "--n", "1"])))[0].tv_exact);

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"prime": 7}"#).unwrap();
    assert_eq!(run(&["bounds", "--config", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn json_outputs_reparse_as_config() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("orbit.json");
    let out = run(&["orbit", "--matrix", "2,1;1,1", "--p", "31", "--c", "3,-2", "-o", path.to_str().unwrap()]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    // the recorded config reproduces the run
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, v["config"].to_string()).unwrap();
    let again = run(&["orbit", "--config", cfg.to_str().unwrap()]);
    assert_eq!(json(&again), v);
}

#[test]
fn simulate_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let dump = |name: &str, threads: &str| {
        let path = dir.path().join(name);
        let out = bin()
            .env("AFFINEWALK_THREADS", threads)
            .args(["simulate", "--matrix", "2,1;1,1", "--p", "11", "--n", "12", "--samples", "2000"])
            .args(["--seed", "9", "--dump-states", path.to_str().unwrap()])
            .output()
            .unwrap();
        assert!(out.status.success());
        (out.stdout, std::fs::read(path).unwrap())
    };
    let a = dump("a.csv", "1");
    let b = dump("b.csv", "4");
    assert_eq!(a, b);
    let text = String::from_utf8(a.1).unwrap();
    assert!(text.starts_with("# affinewalk "));
    assert_eq!(text.lines().count(), 2002);

    let v: Value = serde_json::from_slice(&a.0).unwrap();
    assert_eq!(v["result"]["samples"], 2000);
    let default_seed = json(&run(&["simulate", "--matrix", "2,1;1,1", "--p", "5", "--n", "3", "--samples", "10"]));
    assert!(default_seed["config"]["seed"].is_u64());

    assert_eq!(run(&["simulate", "--matrix", "2,1;1,1", "--p", "5", "--n", "0..3"]).status.code(), Some(2));
    let bad_threads = bin().env("AFFINEWALK_THREADS", "zero").args(["classify", "--matrix", "2,1;1,1"]).output().unwrap();
    assert_eq!(bad_threads.status.code(), Some(2));
}

#[test]
fn sweep_golden_file() {
    let args = ["sweep", "--matrix", "2,1;1,1", "--tag", "golden", "--ps", "11,31,101,211", "--epsilon", "0.25", "--method", "ub"];
    let out = run(&args);
    assert!(out.status.success());
    let expected = std::fs::read_to_string(golden("sweep_golden_ub.csv")).unwrap();
    assert_eq!(stdout(&out), expected);
    assert_eq!(stdout(&run(&args)), expected);

    let dir = tempfile::tempdir().unwrap();
    let summary = dir.path().join("s.json");
    let mut with_summary = args.to_vec();
    with_summary.extend(["--summary", summary.to_str().unwrap()]);
    assert!(run(&with_summary).status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&summary).unwrap()).unwrap();
    let fit = &v["result"]["fits"][0];
    assert_eq!(fit["kind"], "log_squared_constant");
    assert_eq!(fit["residuals"].as_array().unwrap().len(), 4);
}

#[test]
fn sweep_records_failed_cells() {
    let out = run(&["sweep", "--matrix", "2,1;1,1", "--matrix", "1,1;0,2", "--ps", "11,31", "--method", "projected"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().skip(2).collect();
    assert_eq!(lines, ["2 1;1 1,11,,projected", "2 1;1 1,31,,projected", "1 1;0 2,11,9,projected", "1 1;0 2,31,69,projected"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("empty.json");
    std::fs::write(&cfg, r#"{"matrices": ["2,1;1,1"], "ps": []}"#).unwrap();
    let empty = run(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert!(empty.status.success());
    assert!(stdout(&empty).ends_with("\nmatrix_tag,p,n_mix,method\n"));
}

#[test]
fn outputs_parse_into_library_types() {
    use affinewalk::exactdist::WalkConfig;
    use affinewalk::fourier::{bound_series, BoundSeries, Budgets, MixingTime, OrbitRecord};
    use affinewalk::montecarlo::{projection_functional, ProjectionReport, ScalingReport};
    use affinewalk::spectral::SpectrumReport;
    use affinewalk::IntMatrix;

    fn lossless<T: serde::de::DeserializeOwned + serde::Serialize>(v: &Value) -> T {
        let parsed: T = serde_json::from_value(v.clone()).unwrap();
        assert_eq!(&serde_json::to_value(&parsed).unwrap(), v);
        parsed
    }

    let v = json(&run(&["classify", "--matrix", "2,1;1,1"]));
    lossless::<SpectrumReport>(&v["result"]["spectrum"]);
    let v = json(&run(&["orbit", "--matrix", "2,1;1,1", "--p", "101", "--c", "1,0"]));
    lossless::<OrbitRecord>(&v["result"]);
    let v = json(&run(&["mixtime", "--matrix", "2,1;1,1", "--p", "31", "--epsilon", "0.1"]));
    lossless::<MixingTime>(&v["result"]["outcome"]);

    let v = json(&run(&["project", "--matrix", "1,1;0,2", "--p", "31"]));
    let report: ProjectionReport = lossless(&v["result"]);
    let t = IntMatrix::from_rows(&[[1, 1], [0, 2]]).unwrap();
    assert_eq!(report, projection_functional(&t, 31, 1).unwrap());

    let dir = tempfile::tempdir().unwrap();
    let summary = dir.path().join("s.json");
    let out = run(&["sweep", "--matrix", "2,1;1,1", "--ps", "11,31", "--summary", summary.to_str().unwrap()]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&summary).unwrap()).unwrap();
    lossless::<ScalingReport>(&v["result"]);

    let out = run(&["bounds", "--matrix", "2,1;1,1", "--p", "7", "--n", "0..=9"]);
    let parsed = BoundSeries::read_csv(&out.stdout[..]).unwrap();
    let cfg = WalkConfig::from_rows(&[[2, 1], [1, 1]], 7).unwrap();
    assert_eq!(parsed, bound_series(&cfg, &(0..10).collect::<Vec<_>>(), &Budgets::default()).unwrap());
}
