use std::process::{Command, Output};

fn qmink(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmink")).args(args).output().expect("runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn schema() -> jsonschema::JSONSchema {
    let text = include_str!("../schema/report.schema.json");
    let value: serde_json::Value = serde_json::from_str(text).unwrap();
    jsonschema::JSONSchema::compile(&value).expect("schema compiles")
}

fn assert_valid(json: &str) -> serde_json::Value {
    let value: serde_json::Value = serde_json::from_str(json).expect("valid JSON");
    let schema = schema();
    if let Err(errors) = schema.validate(&value) {
        let msgs: Vec<String> = errors.map(|e| format!("{e} at {}", e.instance_path)).collect();
        panic!("schema violations: {msgs:?}");
    }
    value
}

#[test]
fn normalize_builtin_files() {
    let o = qmink(&["normalize", "lorentz.qalg", "d a"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "1 + b c");
    let o = qmink(&["normalize", "minkowski.qalg", "w x"]);
    assert_eq!(stdout(&o).trim(), "q^-4 x w");
    let o = qmink(&["normalize", "coaction", "b' a", "--algebra", "lorentz"]);
    assert_eq!(stdout(&o).trim(), "q^4 a b'");
}

#[test]
fn normalize_errors_exit_two() {
    let o = qmink(&["normalize", "minkowski", "w x +"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("1:6"));
    assert_eq!(qmink(&["normalize", "nowhere.qalg", "x"]).status.code(), Some(2));
    assert_eq!(qmink(&["normalize", "minkowski", "a"]).status.code(), Some(2));
}

#[test]
fn normalize_a_user_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("plane.qalg");
    std::fs::write(&path, "algebra plane {\n  selfadjoint u v;\n  rel v u = u v;\n}\n").unwrap();
    let o = qmink(&["normalize", path.to_str().unwrap(), "v v u + v u"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).trim(), "u v + u v v");
    std::fs::write(&path, "algebra plane {\n  selfadjoint u v;\n  rel v u = q^2 u v;\n}\n").unwrap();
    let o = qmink(&["normalize", path.to_str().unwrap(), "v u"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("leading coefficient is not a unit"));
    std::fs::write(&path, "algebra plane {\n  gen u\n}\n").unwrap();
    let o = qmink(&["normalize", path.to_str().unwrap(), "u"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("3:1"));
}

#[test]
fn symbolic_suites_pass() {
    for which in ["presentation", "hopf", "coaction"] {
        let o = qmink(&["check", which, "--format", "json"]);
        assert_eq!(o.status.code(), Some(0), "{which}: {}", stdout(&o));
        let v = assert_valid(&stdout(&o));
        assert_eq!(v["status"], "pass");
        assert_eq!(v["suite"], which);
    }
    let o = qmink(&["check", "hopf", "--algebra", "lorentz"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("PASS delta preserves: a d -> 1 + b c  residual=0"));
}

#[test]
fn presentation_suite_reports_unresolved_pairs() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("chain.qalg");
    std::fs::write(&path, "algebra chain {\n  selfadjoint a b c;\n  rel b a = a b;\n  rel c b = b c;\n}\n").unwrap();
    let o = qmink(&["check", "presentation", "--file", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let v = assert_valid(&stdout(&o));
    let failing: Vec<_> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["status"] == "fail")
        .map(|c| c["name"].as_str().unwrap().to_string())
        .collect();
    // A non-confluent system also lets the two reduction orders disagree.
    assert_eq!(
        failing,
        ["chain: critical pair at c b a", "chain: leftmost and random reduction agree on 1000 words"]
    );
}

#[test]
fn missing_parameters_are_usage_errors() {
    assert_eq!(qmink(&["check", "pq", "--seed", "1"]).status.code(), Some(2));
    assert_eq!(qmink(&["check", "pq", "--p", "2", "--q", "3"]).status.code(), Some(2));
    assert_eq!(qmink(&["check", "cocycle", "--seed", "1"]).status.code(), Some(2));
    assert_eq!(qmink(&["check", "bogus"]).status.code(), Some(2));
}

#[test]
fn pq_suite_reports_every_identity() {
    let o = qmink(&["check", "pq", "--p", "2", "--q", "3", "--seed", "7", "--format", "json"]);
    let v = assert_valid(&stdout(&o));
    assert_eq!(v["inputs"]["seed"], 7);
    assert_eq!(v["inputs"]["pq_convention"], "plain");
    let checks = v["checks"].as_array().unwrap();
    let residual = |needle: &str| {
        checks
            .iter()
            .find(|c| c["name"].as_str().unwrap().contains(needle))
            .unwrap_or_else(|| panic!("{needle}"))["residual"]
            .as_f64()
            .unwrap()
    };
    assert!(residual("z(R) z(S*) = z_pq(S*) z_q/p(R)") < 1e-12);
    assert!(residual("RS = p^2 SR") < 1e-12);
    assert!(residual("(QQ*)_12 = 0") < 1e-12);
    assert!(residual("cross_layer") < 1e-12);
    // The unscaled diagonal closed form does not hold for p != q.
    assert!(residual("(QQ*)_11 = (1+|R|^2|S|^2)") > 0.1);
    assert_eq!(o.status.code(), Some(1));
    let unit = qmink(&["check", "pq", "--p", "1", "--q", "1", "--seed", "7"]);
    assert_eq!(unit.status.code(), Some(0), "{}", stdout(&unit));
}

#[test]
fn squared_convention_breaks_cross_layer_agreement() {
    let o = qmink(&["check", "pq", "--p", "1", "--q", "1", "--seed", "7", "--pq-convention", "squared"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL cross_layer[s=0.7, squared]"));
}

#[test]
fn cocycle_suite() {
    let o = qmink(&["check", "cocycle", "--s", "0.7", "--samples", "10000", "--seed", "1", "--format", "json"]);
    let v = assert_valid(&stdout(&o));
    for c in v["checks"].as_array().unwrap() {
        let name = c["name"].as_str().unwrap();
        let r = c["residual"].as_f64().unwrap();
        if name.contains("(as stated)") {
            assert!(r > 0.1, "{name}");
        } else {
            assert!(r < 1e-12, "{name}: {r}");
        }
    }
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn report_all_is_deterministic_and_schema_valid() {
    let a = qmink(&["report-all", "--format", "json", "--seed", "5"]);
    let b = qmink(&["report-all", "--format", "json", "--seed", "5"]);
    assert_eq!(a.stdout, b.stdout);
    let v = assert_valid(&stdout(&a));
    let suites: Vec<_> = v["reports"].as_array().unwrap().iter().map(|r| r["suite"].as_str().unwrap()).collect();
    assert_eq!(suites, ["presentation", "hopf", "coaction", "cocycle", "pq"]);
    assert_eq!(a.status.code(), Some(1));
    assert_eq!(v["status"], "fail");
    let timed = qmink(&["report-all", "--format", "json", "--timings"]);
    let v = assert_valid(&stdout(&timed));
    assert!(v["reports"][0]["wall_time_ms"].is_number());
}
