use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_homoglab"))
        .args(args)
        .output()
        .unwrap()
}

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name]
        .iter()
        .collect();
    p.to_str().unwrap().to_owned()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn analyze_reports_idempotents() {
    let out = run(&["--json", "monoid", "analyze", &fixture("R0134.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["idempotents"], serde_json::json!([0, 1, 4]));
    assert_eq!(v["suRank"], 2);
}

#[test]
fn invalid_monoid_exits_one() {
    let dir = std::env::temp_dir().join("homoglab-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("not-monotone.json");
    std::fs::write(&path, r#"{"elements":["0","1"],"plus":[[0,1],[1,0]]}"#).unwrap();
    let out = run(&["--json", "monoid", "check", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["valid"], false);
}

#[test]
fn missing_file_exits_two() {
    assert_eq!(
        run(&["monoid", "check", "no-such-file.json"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["homog", "check"]).status.code(), Some(2));
}

#[test]
fn counterexamples_reproduce() {
    for which in ["crosscut", "bipede", "omegapede"] {
        let out = run(&["--json", "example", "verify", which]);
        assert_eq!(out.status.code(), Some(0), "{which}");
        let v = json(&out);
        assert_eq!(v["verdict"], "UNSAT", "{which}");
        assert_eq!(v["reproduced"], true, "{which}");
    }
}

#[test]
fn remark_fixture_matches_and_is_not_homogeneous() {
    let out = run(&[
        "--json",
        "example",
        "verify",
        "remark41",
        "--fixture",
        &fixture("remark41.json"),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["fixtureMatches"], true);
    assert_eq!(v["homogeneous"], false);
}

#[test]
fn expect_flag_sets_exit_status() {
    let s = fixture("remark46.json");
    assert_eq!(
        run(&["homog", "check", "--structure", &s, "-k", "4"])
            .status
            .code(),
        Some(0)
    );
    let wrong = run(&[
        "homog",
        "check",
        "--structure",
        &s,
        "-k",
        "4",
        "--expect",
        "homogeneous",
    ]);
    assert_eq!(wrong.status.code(), Some(1));
    let right = run(&[
        "homog",
        "check",
        "--structure",
        &s,
        "-k",
        "4",
        "--expect",
        "non-homogeneous",
    ]);
    assert_eq!(right.status.code(), Some(0));
}
