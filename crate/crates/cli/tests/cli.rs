use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn multres(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_multres")).args(args).env_remove("MULTRES_SEED").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let o = multres(&all);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

fn temp_file(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

#[test]
fn order_example() {
    let o = multres(&["order", "--ring", "Q[x,y,z]", "--poly", "z^2 - x^2*y", "--at", "0,0,0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "2");
    assert_eq!(json(&["order", "--ring", "Q[x,y]", "--poly", "0", "--at", "1,-1"])["order"], "inf");
}

#[test]
fn resolve_curve_example() {
    let v = json(&["resolve-curve", "--poly", "y^2 - x^3"]);
    assert_eq!(v["summary"]["sequences"][0]["sequence"], serde_json::json!([2, 1]));
    assert_eq!(v["summary"]["blowups"], 1);
    let text = stdout(&multres(&["resolve-curve", "--poly", "y - x^2"]));
    assert!(text.contains("already smooth"));
}

#[test]
fn elim_example() {
    let v = json(&["elim", "--ring", "Q[x,y]", "--monic", "Z^2 - x^2*y", "--var", "Z"]);
    assert_eq!(v["generators"], serde_json::json!([{"poly": "-x^2*y", "weight": 2}]));
    let text = stdout(&multres(&["elim", "--ring", "Q[x,y]", "--monic", "Z^2 - x^2*y", "--var", "Z"]));
    assert!(text.contains("-x^2*y  weight 2"));
}

#[test]
fn exit_codes() {
    // Contract errors exit with 2.
    assert_eq!(multres(&["order", "--ring", "Q[x]", "--poly", "x^", "--at", "0"]).status.code(), Some(2));
    assert_eq!(multres(&["ord", "--ring", "Q[x]", "--gen", "x:2", "--at", "1"]).status.code(), Some(2));
    assert_eq!(multres(&["resolve-curve", "--poly", "(y - x)^2"]).status.code(), Some(2));
    assert_eq!(multres(&["resolve-curve", "--poly", "y^2 - x^9", "--budget", "1"]).status.code(), Some(2));
    assert_eq!(multres(&["frobnicate"]).status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_multres")).args(["selftest", "--criterion", "3"]).env("MULTRES_SEED", "x").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn permissible_reports_the_failing_generator() {
    let v = json(&["permissible", "--ring", "Q[x,y]", "--gen", "x^2 + y:2", "--center", "x,y"]);
    assert_eq!(v["permissible"], false);
    assert!(v["reason"].as_str().unwrap().contains("x^2 + y"));
    let v = json(&["permissible", "--ring", "Q[x,y]", "--gen", "(x-1)^2:2", "--center", "x", "--shift", "1"]);
    assert_eq!(v["permissible"], true);
}

#[test]
fn presentation_commands() {
    let base = ["--base", "Q[x,y]", "--entry", "X1:X1^2 - x^2*y"];
    let mut test = vec!["presentation", "test"];
    test.extend_from_slice(&base);
    test.extend_from_slice(&["--at", "0,-2"]);
    assert_eq!(json(&test)["holds"], true);
    let mut tr = vec!["presentation", "transform"];
    tr.extend_from_slice(&base);
    tr.extend_from_slice(&["--center", "x"]);
    let v = json(&tr);
    assert_eq!(v["charts"][0]["presentation"]["entries"][0]["poly"], "X1'^2 - y");
}

#[test]
fn script_and_session() {
    let script = temp_file(
        r#"{"object": {"base": "Q[x,y]", "entries": [{"var": "X1", "poly": "X1^2 - x^2*y"}]},
            "steps": [{"chart": [], "center": {"vars": ["x"]}}]}"#,
    );
    let path = script.path().to_str().unwrap();
    let a = stdout(&multres(&["--json", "run", "--script", path]));
    let b = stdout(&multres(&["--json", "run", "--script", path]));
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["indicators"], serde_json::json!([2, 1]));

    let session = temp_file(
        r#"{"format": 1, "seed": 9,
            "rings": {"S": "Q[x,y]"},
            "polynomials": {"tac": {"ring": "S", "poly": "y^2 - x^4"}},
            "presentations": {"whitney": {"ring": "S", "entries": [{"var": "X1", "poly": "X1^2 - x^2*y"}]}},
            "scripts": {"line": {"object": {"presentation": "whitney"}, "steps": [{"center": {"vars": ["x"]}}]}}}"#,
    );
    let s = session.path().to_str().unwrap();
    let v = json(&["--session", s, "run", "--script", "line"]);
    assert_eq!(v["indicators"], serde_json::json!([2, 1]));
    let v = json(&["--session", s, "resolve-curve", "--poly", "@tac"]);
    assert_eq!(v["summary"]["sequences"][0]["sequence"], serde_json::json!([2, 2, 1]));
    let v = json(&["--session", s, "selftest", "--criterion", "3"]);
    assert_eq!(v["seed"], 9);
    assert_eq!(json(&["session-check", s])["scripts"], serde_json::json!(["line"]));
    let bad = temp_file(r#"{"format": 2}"#);
    assert_eq!(multres(&["session-check", bad.path().to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn selftest_determinism_and_negative_control() {
    let a = stdout(&multres(&["--json", "--seed", "42", "selftest"]));
    let b = stdout(&multres(&["--json", "--seed", "42", "selftest"]));
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["passed"], true);
    let env = Command::new(env!("CARGO_BIN_EXE_multres"))
        .args(["--json", "--seed", "3", "selftest", "--criterion", "2"])
        .env("MULTRES_SEED", "42")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&env.stdout).unwrap();
    assert_eq!(v["seed"], 42);

    let corrupted = temp_file("{\"format\": 1, \"curves\": [");
    let o = multres(&["selftest", "--catalog", corrupted.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("[FAIL] 10 curve resolver"));
    assert!(text.contains("[PASS]  1 transform law"));
}
