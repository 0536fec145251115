mod common;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use common::fixture;
use tempfile::TempDir;

const REPORTS: [&str; 5] = [
    "coverage.json",
    "coverage.txt",
    "coverage.dot",
    "coverage.html",
    "match_audit.jsonl",
];

fn e2ecov(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_e2ecov")).args(args).output().unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn example_args(out: &Path) -> Vec<String> {
    let f = |n: &str| fixture(&format!("worked_example/{n}")).display().to_string();
    vec![
        "--inventory".into(),
        f("inventory.json"),
        "--traces".into(),
        f("calls.jsonl"),
        "--format".into(),
        "jsonl".into(),
        "--tests".into(),
        f("tests.json"),
        "--out".into(),
        p(out).into(),
    ]
}

fn case_args(out: &Path) -> Vec<String> {
    let f = |n: &str| fixture(&format!("case_study/{n}")).display().to_string();
    vec![
        "--inventory".into(),
        f("inventory.json"),
        "--traces".into(),
        f("traces.es.jsonl"),
        "--format".into(),
        "skywalking-es".into(),
        "--tests".into(),
        f("tests.json"),
        "--out".into(),
        p(out).into(),
    ]
}

fn run(cmd: &str, extra: &[&str], common: &[String]) -> Output {
    let mut args: Vec<&str> = vec![cmd];
    args.extend(extra);
    args.extend(common.iter().map(String::as_str));
    e2ecov(&args)
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn check_passes_at_threshold() {
    let dir = TempDir::new().unwrap();
    let o = run("check", &["--min-suite-coverage", "50"], &example_args(dir.path()));
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = run("check", &["--min-suite-coverage", "66.67"], &example_args(dir.path()));
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn check_fails_below_threshold() {
    let dir = TempDir::new().unwrap();
    let o = run("check", &["--min-suite-coverage", "50"], &case_args(dir.path()));
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    assert!(stdout(&o).contains("45.42"), "{}", stdout(&o));
}

#[test]
fn check_reads_an_existing_report() {
    let dir = TempDir::new().unwrap();
    assert_eq!(run("analyze", &[], &example_args(dir.path())).status.code(), Some(0));
    let report = dir.path().join("coverage.json");
    let o = e2ecov(&["check", "--min-suite-coverage", "70", "--report", p(&report)]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    let o = e2ecov(&["check", "--min-suite-coverage", "60", "--report", p(&report)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn bad_input_exits_2() {
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("nope.json");
    let o = e2ecov(&["extract", "--inventory", p(&missing), "--out", p(dir.path())]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error:"), "{}", stderr(&o));
    assert!(stdout(&o).is_empty());

    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"services\": [").unwrap();
    let o = e2ecov(&["extract", "--inventory", p(&bad), "--out", p(dir.path())]);
    assert_eq!(o.status.code(), Some(2));

    assert_eq!(e2ecov(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(e2ecov(&["--version"]).status.code(), Some(0));

    let mut args = example_args(dir.path());
    args.extend(["--clock-skew".into(), "soon".into()]);
    assert_eq!(run("analyze", &[], &args).status.code(), Some(2));
}

#[test]
fn existing_lock_blocks_a_run() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join(".e2ecov.lock"), "1\n").unwrap();
    let o = run("analyze", &[], &example_args(dir.path()));
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains(".e2ecov.lock"), "{}", stderr(&o));
    assert!(dir.path().join(".e2ecov.lock").exists(), "someone else's lock was removed");
    assert!(!dir.path().join("coverage.json").exists());
}

#[test]
fn lock_is_released_after_a_run() {
    let dir = TempDir::new().unwrap();
    assert_eq!(run("analyze", &[], &example_args(dir.path())).status.code(), Some(0));
    assert!(!dir.path().join(".e2ecov.lock").exists());
    assert_eq!(run("analyze", &[], &example_args(dir.path())).status.code(), Some(0));
}

fn read_all(dir: &Path, names: &[&str]) -> Vec<(String, Vec<u8>)> {
    names
        .iter()
        .map(|n| (n.to_string(), fs::read(dir.join(n)).unwrap_or_else(|e| panic!("{n}: {e}"))))
        .collect()
}

#[test]
fn staged_run_matches_one_shot() {
    let one = TempDir::new().unwrap();
    let staged = TempDir::new().unwrap();
    assert_eq!(run("analyze", &[], &case_args(one.path())).status.code(), Some(0));

    let args = case_args(staged.path());
    assert_eq!(run("extract", &[], &args).status.code(), Some(0));
    assert!(staged.path().join("inventory.json").is_file());
    assert_eq!(run("ingest", &[], &args).status.code(), Some(0));
    assert!(staged.path().join("ingest/index.json").is_file());
    let o = e2ecov(&["analyze", "--from-cache", "--out", p(staged.path())]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));

    let mut names = REPORTS.to_vec();
    names.extend(["inventory.json", "ingest/index.json", "ingest/orphans.jsonl", "ingest/tests/Login.jsonl"]);
    assert_eq!(read_all(one.path(), &names), read_all(staged.path(), &names));
}

#[test]
fn from_cache_without_artifacts_fails() {
    let dir = TempDir::new().unwrap();
    let o = e2ecov(&["analyze", "--from-cache", "--out", p(dir.path())]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn rerun_reuses_and_refreshes_stages() {
    let dir = TempDir::new().unwrap();
    let work = TempDir::new().unwrap();
    let inv = work.path().join("inventory.json");
    fs::copy(fixture("worked_example/inventory.json"), &inv).unwrap();
    let mut args = example_args(dir.path());
    args[1] = p(&inv).into();
    assert_eq!(run("analyze", &[], &args).status.code(), Some(0));
    let stamp = fs::read_to_string(dir.path().join(".e2ecov-cache/extract.sha256")).unwrap();

    // an edited input must invalidate the stage
    let text = fs::read_to_string(&inv).unwrap().replace("\"POST\"", "\"PUT\"");
    fs::write(&inv, text).unwrap();
    assert_eq!(run("analyze", &[], &args).status.code(), Some(0));
    let again = fs::read_to_string(dir.path().join(".e2ecov-cache/extract.sha256")).unwrap();
    assert_ne!(stamp, again);
    let written = fs::read_to_string(dir.path().join("inventory.json")).unwrap();
    assert!(written.contains("\"PUT\""));
}

#[test]
fn config_file_drives_a_run() {
    let dir = TempDir::new().unwrap();
    let fig = fixture("worked_example");
    let config = dir.path().join("e2ecov.toml");
    fs::write(
        &config,
        format!(
            r#"out = "report"
tests = "{tests}"

[inventory]
files = ["{inv}"]

[traces]
format = "jsonl"
files = ["{calls}"]

[report]
color_scale = [{{ upper = 60, color = "red" }}, {{ upper = 100, color = "blue" }}]
"#,
            tests = fig.join("tests.json").display(),
            inv = fig.join("inventory.json").display(),
            calls = fig.join("calls.jsonl").display(),
        ),
    )
    .unwrap();
    let o = e2ecov(&["analyze", "--config", p(&config)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = dir.path().join("report");
    let dot = fs::read_to_string(out.join("coverage.dot")).unwrap();
    assert!(dot.contains(r#""MS-1" [label="MS-1\n1/2 (50.00%)", fillcolor="red"]"#), "{dot}");
    assert!(dot.contains(r#"fillcolor="blue""#));

    // flags win over the file
    let elsewhere = dir.path().join("elsewhere");
    let o = e2ecov(&["analyze", "--config", p(&config), "--out", p(&elsewhere)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(elsewhere.join("coverage.json").is_file());

    fs::write(&config, "colour = 1\n").unwrap();
    assert_eq!(e2ecov(&["analyze", "--config", p(&config)]).status.code(), Some(2));
}

#[test]
fn warnings_go_to_stderr_only() {
    let dir = TempDir::new().unwrap();
    let o = run("analyze", &[], &case_args(dir.path()));
    assert_eq!(o.status.code(), Some(0));
    let err = stderr(&o);
    let out = stdout(&o);
    assert!(err.contains("warning:"), "{err}");
    assert!(err.contains("dropped"), "{err}");
    assert!(!out.contains("warning"), "{out}");
    assert!(out.contains("45.42"), "{out}");
}

#[test]
fn ingest_writes_per_test_files() {
    let dir = TempDir::new().unwrap();
    assert_eq!(run("ingest", &[], &case_args(dir.path())).status.code(), Some(0));
    let index: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("ingest/index.json")).unwrap()).unwrap();
    let tests = index["tests"].as_array().unwrap();
    assert_eq!(tests.len(), 11);
    let total: u64 = tests.iter().map(|t| t["calls"].as_u64().unwrap()).sum();
    assert_eq!(total, 321);
    for t in tests {
        let file: PathBuf = dir.path().join("ingest").join(t["file"].as_str().unwrap());
        let lines = fs::read_to_string(&file).unwrap().lines().count() as u64;
        assert_eq!(lines, t["calls"].as_u64().unwrap(), "{}", file.display());
    }
    assert_eq!(index["stats"]["records"], 953);
    assert_eq!(index["stats"]["dropped"], 632);
}
