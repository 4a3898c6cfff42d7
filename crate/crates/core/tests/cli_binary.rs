use serde_json::Value;
use std::process::{Command, Output};

fn veltman(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_veltman"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn decide_exit_codes() {
    let yes = veltman(&["decide", "<>p |> p", "--class", "il", "--max-worlds", "3"]);
    assert_eq!(yes.status.code(), Some(0));
    assert!(json(&yes)["message"].as_str().unwrap().contains("no counterexample up to 3 worlds"));
    let no = veltman(&["decide", "p |> q -> <>p /\\ []r |> q /\\ []r", "--class", "il", "--max-worlds", "4"]);
    assert_eq!(no.status.code(), Some(1));
    let v = json(&no);
    assert!(v["dot"].as_str().unwrap().starts_with("digraph"));
    assert!(no.stderr.is_empty());
}

#[test]
fn input_errors_go_to_stderr() {
    for args in [
        &["parse", "p |> "][..],
        &["decide", "p", "--class", "gl", "--max-worlds", "3"],
        &["check-model", "/nonexistent.json", "w", "p"],
        &["construct", "p", "--logic", "ilw"],
        &["nonsense"],
    ] {
        let out = veltman(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn check_model_and_classify_fixture() {
    let file = fixture("m0_countermodel_il.json");
    let out = veltman(&["check-model", &file, "0", "p |> q -> <>p /\\ []r |> q /\\ []r"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["forced"], Value::Bool(false));
    assert_eq!(veltman(&["check-model", &file, "nowhere", "p"]).status.code(), Some(2));

    let out = veltman(&["classify", &file]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["IL"]["holds"], Value::Bool(true));
    assert_eq!(v["ILM0"]["holds"], Value::Bool(false));
}

#[test]
fn close_adds_the_transitive_edge() {
    let out = veltman(&["close", &fixture("quasi_chain.json"), "--logic", "il"]);
    assert_eq!(out.status.code(), Some(0));
    let lf = veltman::LabeledFrame::from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    let (a, c) = (lf.frame().index_of("a").unwrap(), lf.frame().index_of("c").unwrap());
    assert!(lf.frame().r.contains(a, c));
    assert!(veltman::conditions::check_adequate(&lf).is_ok());
}

#[test]
fn soundness_and_sat() {
    let out = veltman(&["soundness", "--class", "il", "--max-worlds", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["entries"].as_array().unwrap().len() >= 40);
    assert_eq!(veltman(&["sat", "p", "~p", "--class", "il", "--max-worlds", "2"]).status.code(), Some(1));
    assert_eq!(veltman(&["sat", "~(p |> q)", "--class", "il", "--max-worlds", "2"]).status.code(), Some(0));
}

#[test]
fn construct_writes_log_file() {
    let dir = std::env::temp_dir().join(format!("veltman-log-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let log = dir.join("steps.log");
    let out = veltman(&["construct", "~(p |> q)", "--logic", "ilm0", "--debug", "--log", log.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&log).unwrap();
    assert_eq!(text.trim(), "STEP 1 PROBLEM w0 ~(p |> q) -> +w1");
    std::fs::remove_dir_all(dir).unwrap();

    let out = veltman(&["construct", "p /\\ ~p", "--logic", "il"]);
    assert_eq!(out.status.code(), Some(1));
}
