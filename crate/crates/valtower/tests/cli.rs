use std::process::Command;

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_valtower")).args(args).env_remove("VALTOWER_JOBS").output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn value_cell(stdout: &str) -> String {
    let line = stdout.lines().last().unwrap();
    line.split('\t').nth(2).unwrap().to_string()
}

#[test]
fn value_command() {
    let (code, out, _) = run(&["value", "--family", "U", "--p", "2", "--c", "1", "v"]);
    assert_eq!(code, 0);
    assert_eq!(value_cell(&out), "1/2");
    assert_eq!(value_cell(&run(&["value", "--family", "Q", "--p", "2", "x"]).1), "1");
    assert_eq!(value_cell(&run(&["value", "--family", "Q", "--p", "2", "y^4"]).1), "1");
}

#[test]
fn parse_errors_exit_2() {
    let (code, _, err) = run(&["value", "y^^2"]);
    assert_eq!(code, 2);
    assert!(err.contains("parse error at"));
}

#[test]
fn tower_command() {
    let (code, out, _) = run(&["tower", "--p", "2", "--c", "1", "--levels", "3", "--format", "md"]);
    assert_eq!(code, 0);
    assert_eq!(out.matches("| pass |").count(), 9);
    let (code, _, err) = run(&["tower", "--p", "3", "--c", "1"]);
    assert_eq!(code, 2);
    assert!(err.contains("must divide"));
    let (code, out, _) = run(&["tower", "--p", "2", "--c", "2", "--levels", "2", "--format", "json"]);
    assert_eq!(code, 0);
    let j: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(j["schema"], 1);
    assert_eq!(j["ok"], true);
    assert_eq!(j["tables"][0]["rows"].as_array().unwrap().len(), 6);
}

#[test]
fn monomialize_command() {
    let (code, out, _) = run(&["monomialize", "--matrix", "1,0,0,1"]);
    assert_eq!(code, 0);
    assert!(out.contains("(1 0; 0 1)\t1\t(1, 1)"));
    let (_, out, _) = run(&["monomialize", "--matrix", "2,1,1,3"]);
    assert!(out.contains("\t5\t(1, 5)\t"));
    let (code, _, err) = run(&["monomialize", "--matrix", "2,0,0,0"]);
    assert_eq!(code, 2);
    assert!(err.contains("singular"));
}

#[test]
fn other_commands() {
    for args in [
        vec!["semigroup", "--family", "U", "--bound", "3/2"],
        vec!["validate", "--family", "P", "--p", "3", "--c", "2"],
        vec!["transform", "--family", "U", "--levels", "3"],
    ] {
        let (code, out, err) = run(&args);
        assert_eq!(code, 0, "{args:?}: {err}");
        assert!(out.starts_with("# schema\t1"));
    }
}

#[test]
fn report_is_deterministic_across_jobs() {
    let a = run(&["report", "--levels", "3", "--seed", "5", "--jobs", "1", "--samples", "50"]);
    let b = run(&["report", "--levels", "3", "--seed", "5", "--jobs", "4", "--samples", "50"]);
    assert_eq!(a.0, 0);
    assert_eq!(a.1, b.1);
    assert!(a.1.contains("# seed\t5"));
}
