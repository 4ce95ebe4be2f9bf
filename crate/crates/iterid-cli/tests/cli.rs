use std::process::{Command, Output};

fn iterid(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_iterid"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("utf-8 stderr")
}

#[test]
fn engel_prints_order() {
    let out = iterid(&["engel", "--p", "2", "--i", "3", "--j", "1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("order: 8"), "unexpected output: {text}");
    assert!(text.contains("trivial: false"));
}

#[test]
fn engel_collapsed_bracket_is_trivial() {
    let out = iterid(&["engel", "--p", "2", "--i", "1", "--j", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(
        text.contains("element: (0; u^{0})"),
        "unexpected output: {text}"
    );
    assert!(text.contains("order: 1"));
    assert!(text.contains("trivial: true"));
}

#[test]
fn composite_p_is_rejected() {
    let out = iterid(&["engel", "--p", "4", "--i", "1", "--j", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("4 is not prime"));
}

#[test]
fn iterate_quasi_cyclic_example() {
    let out = iterid(&["iterate", "--p", "2", "--word", "x1^2", "--assign", "1/8"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(
        text.contains("minimal index: 2"),
        "unexpected output: {text}"
    );
    assert!(text.contains("iterate j=0: 1/4"));
    assert!(text.contains("iterate j=2: 0"));
}

#[test]
fn iterate_theorem_shorthand() {
    let out = iterid(&["iterate", "--p", "2", "--assign", "theorem:i=4"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(
        text.contains("minimal index: 4"),
        "unexpected output: {text}"
    );
}

#[test]
fn iterate_gamma_elements() {
    let out = iterid(&[
        "iterate",
        "--p",
        "2",
        "--word",
        "x1^2",
        "--assign",
        "((1/4)·u^{0}; u^{0})",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("minimal index: 1"));
}

#[test]
fn malformed_word_reports_caret() {
    let out = iterid(&[
        "iterate", "--p", "2", "--word", "[x1,)x2]", "--assign", "1/8",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("position 4"), "unexpected stderr: {err}");
    assert!(err.contains('^'));
}

#[test]
fn exhaustion_is_reported_with_success_status() {
    let out = iterid(&[
        "iterate", "--p", "2", "--word", "x1", "--assign", "1/2", "--bound", "3",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("exhausted at bound 3"));
}

#[test]
fn verify_passes_on_reduced_grid() {
    let out = iterid(&["verify", "--p", "2", "--i-max", "1", "--seed", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("0 failed"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn verify_json_lines_is_stable_across_runs() {
    let args = [
        "verify",
        "--p",
        "2,3",
        "--i-max",
        "2",
        "--seed",
        "11",
        "--format",
        "json-lines",
    ];
    let first = iterid(&args);
    let second = iterid(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);

    let text = stdout(&first);
    let mut lines = 0;
    for line in text.lines() {
        let record: serde_json::Value = serde_json::from_str(line).expect("valid json");
        for field in ["check", "params", "result", "value"] {
            assert!(record.get(field).is_some(), "missing {field} in {line}");
        }
        assert_ne!(record["result"], "fail", "unexpected failure: {line}");
        lines += 1;
    }
    assert!(lines > 50, "expected a full record stream, got {lines}");
}

#[test]
fn oracle_reports_transport_checks() {
    let out = iterid(&["oracle", "--p", "2", "--seed", "1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("oracle_exhaustive"));
    assert!(text.contains("0 failed"));
}
