use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    root.join(name).to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_k3syz")).args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn error_kind(out: &Output) -> String {
    let v: Value = serde_json::from_slice(&out.stderr).expect("stderr is JSON");
    v["error"]["kind"].as_str().unwrap().to_string()
}

fn stability(forms: &str) -> Output {
    run(&["stability", "--surface", &fixture("fermat.json"), "--forms", &fixture(forms)])
}

#[test]
fn stability_exit_codes() {
    let out = stability("w2.json");
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["verdict"], "CohomologicallyStable");
    assert_eq!(v["kernel_dims"], serde_json::json!([0, 0, 0]));

    let out = stability("w1.json");
    assert_eq!(out.status.code(), Some(10));
    let v = stdout_json(&out);
    assert_eq!(v["destabilizer"]["sub_slope"], serde_json::json!({"num": -4, "den": 1}));

    assert_eq!(stability("deg2.json").status.code(), Some(0));
}

#[test]
fn withheld_verdict_is_not_stable() {
    let dir = tempfile::tempdir().unwrap();
    let forms = dir.path().join("forms.json");
    std::fs::write(&forms, r#"{"degree": 2, "forms": ["x^2", "x*y", "x*z"]}"#).unwrap();
    let out = run(&["stability", "--surface", &fixture("fermat.json"), "--forms", forms.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(11));
    let v = stdout_json(&out);
    assert!(v["verdict"].is_null());
    assert!(!v["warnings"].as_array().unwrap().is_empty());
}

#[test]
fn invariants_reports() {
    let out = run(&["invariants", &fixture("toy.json"), "--syzygy", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["syzygy"]["doubling"], serde_json::json!({"base_dim": 0, "fiber_dim": 3, "target_dim": 6, "holds": true}));
    assert_eq!(v["syzygy"]["invariants"], serde_json::json!({"rank": 2, "c1": [-1], "c2": 4}));

    let v = stdout_json(&run(&["invariants", &fixture("skew_l2.json"), "--extension", "1"]));
    assert_eq!(v["extension"]["u"], 6);
    assert_eq!(v["extension"]["doubling"], serde_json::json!({"base_dim": 0, "fiber_dim": 5, "target_dim": 10, "holds": true}));

    let v = stdout_json(&run(&["invariants", &fixture("toy_rank2.json")]));
    assert_eq!(v["spl_dim"], 6);
    assert_eq!(v["slope"], serde_json::json!({"num": 2, "den": 1}));

    let v = stdout_json(&run(&["invariants", &fixture("o7.json"), "--syzygy", "5"]));
    assert_eq!(v["syzygy"]["slope"], serde_json::json!({"num": -7, "den": 1}));
}

#[test]
fn precondition_failures_exit_three() {
    let out = run(&["invariants", &fixture("toy.json"), "--syzygy", "9"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(error_kind(&out), "WNotInRange");

    let out = run(&["--formal", "invariants", &fixture("toy_rank2.json"), "--syzygy", "3"]);
    assert_eq!(out.status.code(), Some(0));

    let out = run(&["h0", "--surface", &fixture("fermat.json"), "--forms", &fixture("w2.json"), "--q", "6", "--t", "0"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(error_kind(&out), "QNotInRange");

    let dir = tempfile::tempdir().unwrap();
    let forms = dir.path().join("forms.json");
    std::fs::write(&forms, r#"{"degree": 2, "forms": ["x^2", "y^2", "z^2"], "target_rank": 2}"#).unwrap();
    let out = run(&["stability", "--surface", &fixture("fermat.json"), "--forms", forms.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(error_kind(&out), "UnsupportedRank");

    let out = run(&["--prime", "15", "ring-dim", "--surface", &fixture("fermat.json"), "--t", "2"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(error_kind(&out), "BadPrime");
}

#[test]
fn malformed_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        (r#"{"hypersurface": "x^4 + y^"}"#, "SyntaxError"),
        (r#"{"hypersurface": "x^4 + w^4"}"#, "UnknownVariable"),
        (r#"{"hypersurface": "x^4 + y^3"}"#, "InhomogeneousError"),
        (r#"{"hypersurface": "x^4 - x^4"}"#, "ZeroFormError"),
        (r#"{"hypersurface": "#, "InvalidInput"),
    ];
    for (i, (text, kind)) in cases.iter().enumerate() {
        let path = dir.path().join(format!("s{i}.json"));
        std::fs::write(&path, text).unwrap();
        let out = run(&["ring-dim", "--surface", path.to_str().unwrap(), "--t", "1"]);
        assert_eq!(out.status.code(), Some(2), "{text}");
        assert_eq!(&error_kind(&out), kind, "{text}");
    }
    let out = run(&["ring-dim", "--surface", "/nonexistent/surface.json", "--t", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn h0_and_export() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k.json");
    let out = run(&[
        "h0", "--surface", &fixture("fermat.json"), "--forms", &fixture("w2.json"),
        "--q", "2", "--t", "3", "--export", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!((v["kernel_dim"].as_u64(), v["rows"].as_u64(), v["cols"].as_u64()), (Some(0), Some(1010), Some(200)));
    assert_eq!(v["h0"], 0);
    let m: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(m["rows"], 1010);
    assert_eq!(m["entries"].as_array().unwrap().len(), 1010);

    let v = stdout_json(&run(&["h0", "--surface", &fixture("fermat.json"), "--forms", &fixture("w1.json"), "--q", "1", "--t", "1"]));
    assert!(v["kernel_dim"].as_u64().unwrap() >= 1);
    assert_eq!(v["provenance"], "rational-certified");
}

#[test]
fn ring_dims_and_basepoints() {
    let v = stdout_json(&run(&["ring-dim", "--surface", &fixture("fermat.json"), "--t", "0", "--to", "6"]));
    let dims: Vec<u64> = v["dims"].as_array().unwrap().iter().map(|d| d["explicit"].as_u64().unwrap()).collect();
    assert_eq!(dims, vec![1, 4, 10, 20, 34, 52, 74]);

    let v = stdout_json(&run(&["basepoints", "--surface", &fixture("fermat.json"), "--forms", &fixture("w2.json")]));
    assert_eq!(v["basepoints"]["status"], "certified");
}

#[test]
fn output_is_deterministic() {
    let a = stability("w1.json");
    let b = stability("w1.json");
    assert_eq!(a.stdout, b.stdout);
    let args = ["--seed", "5", "sample", "--surface", &fixture("fermat.json"), "--degree", "2", "--dim", "3", "--trials", "3"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = stdout_json(&a);
    assert_eq!(v["runs"].as_array().unwrap().len(), 3);
}
