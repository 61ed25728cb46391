//! End-to-end checks of the installed binary: exit codes, deterministic
//! JSON output, and agreement with the checked-in golden reports.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use periodic_strategies::periodicity::TiePolicy;
use periodic_strategies_cli::format::{parse_game_file, GameFile};
use periodic_strategies_cli::selftest;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join("golden")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pstrat"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is utf-8")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is utf-8")
}

fn policy_flag(policy: TiePolicy) -> &'static str {
    match policy {
        TiePolicy::Strict => "strict",
        TiePolicy::FirstIndex => "first-index",
    }
}

#[test]
fn analyze_succeeds_on_a_clean_game() {
    let path = fixture("testgame.json");
    let out = run(&["analyze", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.starts_with("# "), "report starts with a title: {text}");
    assert!(text.contains("== periodicity =="));
    assert!(text.contains("== coco =="));
}

#[test]
fn strict_policy_rejects_ties_with_exit_2() {
    let path = fixture("game1a.json");
    let out = run(&["analyze", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "stdout: {}", stdout(&out));
    let err = stderr(&out);
    assert!(err.contains("degenerate"), "names the failure: {err}");
    assert!(err.contains("a2"), "lists a witness: {err}");
    let ok = run(&[
        "--tie-policy",
        "first-index",
        "analyze",
        path.to_str().unwrap(),
    ]);
    assert_eq!(ok.status.code(), Some(0), "stderr: {}", stderr(&ok));
}

#[test]
fn degenerate_transform_under_strict_exits_2() {
    let path = fixture("bayes_three_by_three.json");
    let out = run(&["analyze", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "stdout: {}", stdout(&out));
    assert!(stderr(&out).contains("degenerate"));
}

#[test]
fn io_and_parse_failures_exit_1() {
    let out = run(&["analyze", "/nonexistent/game.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("error:"));

    let bad = std::env::temp_dir().join("pstrat-bad-fixture.json");
    fs::write(&bad, "{\"format_version\": \"1\", \"kind\": ").unwrap();
    let out = run(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let _ = fs::remove_file(&bad);
}

#[test]
fn json_reports_are_deterministic() {
    let path = fixture("game1a.json");
    let args = [
        "--tie-policy",
        "first-index",
        "--format",
        "json",
        "analyze",
        path.to_str().unwrap(),
    ];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout, "same bytes on every run");
    assert!(!first.stdout.is_empty());
}

#[test]
fn reports_match_the_golden_snapshots() {
    for name in selftest::fixture_names() {
        let (_, policy) = selftest::fixture_source(name).expect("known fixture");
        let path = fixture(&format!("{name}.json"));
        let out = run(&[
            "--tie-policy",
            policy_flag(policy),
            "--format",
            "json",
            "analyze",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0), "{name}: {}", stderr(&out));
        let want = fs::read(golden(&format!("{name}.json")))
            .unwrap_or_else(|e| panic!("golden for {name}: {e}"));
        assert_eq!(
            out.stdout, want,
            "{name}: binary output differs from the golden snapshot"
        );
    }
}

#[test]
fn transform_emits_a_valid_game_file() {
    let path = fixture("bayes_two_state.json");
    for kind in ["ex-ante", "interim-independent", "interim-correlated"] {
        let out = run(&[
            "transform",
            path.to_str().unwrap(),
            "--transform",
            kind,
        ]);
        assert_eq!(out.status.code(), Some(0), "{kind}: {}", stderr(&out));
        let parsed = parse_game_file(&stdout(&out))
            .unwrap_or_else(|e| panic!("{kind} output parses back: {e}"));
        assert!(matches!(parsed, GameFile::Strategic { .. }));
    }
}

#[test]
fn quad_preset_reports_the_closed_form() {
    let out = run(&[
        "quad",
        "--preset",
        "cournot",
        "--params",
        "P=10,A=1,B=1,M=0",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("point (3, 3)"), "equilibrium at 3: {text}");
    assert!(text.contains("point (0, 0)"), "periodic point at the origin: {text}");

    let bad = run(&["quad", "--preset", "cournot", "--params", "P=10"]);
    assert_eq!(bad.status.code(), Some(1), "missing parameters are usage errors");
}

#[test]
fn selftest_passes() {
    let out = run(&["selftest"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.lines().filter(|l| l.starts_with("PASS")).count() >= 14);
    assert!(!text.contains("FAIL"), "no failing lines: {text}");
}
