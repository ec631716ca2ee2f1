//! End-to-end runs of the binary: exit codes, report integrity, and
//! reproducibility under fixed seeds.

use realbez_cli::report::RunReport;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_realbez"))
}

fn tmp(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("realbez-test-{}-{name}", std::process::id()));
    p
}

fn write_tmp(name: &str, contents: &str) -> PathBuf {
    let p = tmp(name);
    std::fs::write(&p, contents).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn bound_reports_structural_sum_and_flags() {
    let profile = write_tmp("p11.json", r#"{"k":3,"degs":[1,1,6],"dims":[3,2,2,0]}"#);
    let out = run(&["bound", "--profile", profile.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("structural_sum = 250"), "{text}");
    assert!(text.contains("witness_term = 36"));
    assert!(text.contains("hypothesis_violated = true"));
}

#[test]
fn bound_census_mode_needs_family_parameters() {
    let profile = write_tmp("p15.json", r#"{"k":2,"degs":[2,4],"dims":[2,1,0]}"#);
    let out = run(&["bound", "--profile", profile.to_str().unwrap(), "--formula", "census"]);
    assert_eq!(out.status.code(), Some(64));
    let out = run(&[
        "bound",
        "--profile",
        profile.to_str().unwrap(),
        "--formula",
        "census",
        "--s",
        "1",
        "--d",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("structural_total = 108"), "{text}");
    assert!(text.contains("degree_gap_violated = true"));
}

#[test]
fn malformed_profile_is_a_usage_error_with_position() {
    let profile = write_tmp("bad.json", "{\n  \"k\": 3,\n");
    let out = run(&["bound", "--profile", profile.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(64));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("profile json"), "{err}");
    // serde reports line:column for the failure
    assert!(err.contains(':'), "{err}");
}

#[test]
fn empty_profile_argument_is_usage() {
    let out = run(&["bound"]);
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn verify_block_grid_passes_and_round_trips_json() {
    let json_path = tmp("v15.json");
    let out = run(&[
        "verify",
        "--example",
        "15",
        "--k",
        "2",
        "--dims",
        "2,1,0",
        "--degs",
        "2,4",
        "--json",
        json_path.to_str().unwrap(),
        "--seed",
        "99",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("actual 2"), "{text}");
    assert!(text.contains("seed: 99"));

    let emitted = std::fs::read_to_string(&json_path).unwrap();
    let parsed: RunReport = serde_json::from_str(&emitted).unwrap();
    assert_eq!(parsed.seed, 99);
    assert!(parsed.all_pass());
    // byte-identical re-serialization
    assert_eq!(parsed.to_json(), emitted);
}

#[test]
fn verify_family_alias_and_grid_counts() {
    let out = run(&["verify-family", "--example", "11", "--d", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("bound 9 vs actual 9") || text.contains("actual 9"), "{text}");
}

#[test]
fn verify_rejects_unknown_family() {
    let out = run(&["verify", "--example", "7", "--d", "1"]);
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn census_counts_circle_line_intersections() {
    let system = write_tmp("sys.txt", "1 2 0\n1 0 2\n-1 0 0\n\n1 1 0\n-1 0 1\n");
    let out = run(&[
        "census",
        "--system",
        system.to_str().unwrap(),
        "--box",
        "-2:2,-2:2",
        "--depth",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("exact 2"), "{text}");
}

#[test]
fn census_box_arity_mismatch_is_usage() {
    let system = write_tmp("sys1.txt", "1 2 0\n1 0 2\n-1 0 0\n");
    let out = run(&[
        "census",
        "--system",
        system.to_str().unwrap(),
        "--box",
        "-2:2",
    ]);
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn deform_audit_runs_and_is_seed_stable() {
    let profile = write_tmp("p22.json", r#"{"k":2,"degs":[2,2],"dims":[2,1,0]}"#);
    let j1 = tmp("audit1.json");
    let j2 = tmp("audit2.json");
    for j in [&j1, &j2] {
        let out = run(&[
            "deform-audit",
            "--profile",
            profile.to_str().unwrap(),
            "--tau",
            "2,1,0",
            "--seed",
            "7",
            "--json",
            j.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    }
    let r1: RunReport = serde_json::from_str(&std::fs::read_to_string(&j1).unwrap()).unwrap();
    let r2: RunReport = serde_json::from_str(&std::fs::read_to_string(&j2).unwrap()).unwrap();
    assert_eq!(r1.details, r2.details, "same seed gives identical tuples");
    assert_eq!(r1.verdicts, r2.verdicts);
}

#[test]
fn deform_audit_rejects_bad_schedules_and_tuples() {
    let profile = write_tmp("p22b.json", r#"{"k":2,"degs":[2,2],"dims":[2,1,0]}"#);
    let out = run(&[
        "deform-audit",
        "--profile",
        profile.to_str().unwrap(),
        "--schedule-base",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(64));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("schedule ordering"), "{err}");

    let out = run(&[
        "deform-audit",
        "--profile",
        profile.to_str().unwrap(),
        "--tau",
        "1,1",
    ]);
    assert_eq!(out.status.code(), Some(64), "tuple must start at k");
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(64));
}
