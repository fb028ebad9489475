//! End-to-end tests driving the compiled binary.

use std::path::Path;
use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    run_in(args, None)
}

fn run_in(args: &[&str], dir: Option<&Path>) -> (i32, String, String) {
    let mut command = Command::new(env!("CARGO_BIN_EXE_weyl-symbols"));
    command.args(args);
    if let Some(dir) = dir {
        command.current_dir(dir);
    }
    let output = command.output().expect("binary runs");
    (
        output.status.code().expect("exit code"),
        String::from_utf8(output.stdout).expect("utf-8 stdout"),
        String::from_utf8(output.stderr).expect("utf-8 stderr"),
    )
}

#[test]
fn enumerate_lists_the_five_symbols_of_c_rank_two() {
    let (code, stdout, _) = run(&["enumerate", "--series", "C", "--rank", "2"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines.len(), 5);
    assert!(lines.contains(&"(0,0,1,2,3)"));
    assert!(lines.contains(&"(0,0,2,1,3)"));
}

#[test]
fn enumerate_json_carries_series_kind_and_entries() {
    let (code, stdout, _) = run(&[
        "enumerate", "--series", "C", "--rank", "2", "--kind", "usymbols", "--format", "json",
    ]);
    assert_eq!(code, 0);
    let value: Value = serde_json::from_str(&stdout).expect("valid JSON");
    let items = value.as_array().expect("array");
    assert_eq!(items.len(), 5);
    for item in items {
        assert_eq!(item["series"], "C");
        assert_eq!(item["kind"], "usymbol");
        assert_eq!(item["n"], 2);
        assert!(item["entries"].is_array());
    }
}

#[test]
fn enumerate_csv_has_a_header_and_one_row_per_sequence() {
    let (code, stdout, _) = run(&[
        "enumerate", "--series", "B", "--rank", "1", "--format", "csv",
    ]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines[0], "series,kind,n,m,entries");
    assert_eq!(lines.len(), 3);
}

#[test]
fn class_reports_the_invariant_and_transversal_of_a_u_symbol() {
    let (code, stdout, _) = run(&["class", "--series", "C", "--usymbol", "1,1,3"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("symbol image: (1,0,2)"));
    assert!(stdout.contains("special symbol: (0,1,2)"));
    assert!(stdout.contains("t = e1"));
    assert!(stdout.contains("transversal block sets: {}"));
}

#[test]
fn class_notes_the_distinguished_member_for_unsorted_input() {
    let (code, stdout, _) = run(&["class", "--series", "C", "--usymbol", "0,3,2"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("u-symbol (0,3,2)"));
    assert!(stdout.contains("distinguished class member: (0,2,3)"));
}

#[test]
fn class_rejects_entries_that_violate_the_gap_rule() {
    let (code, _, stderr) = run(&["class", "--series", "C", "--usymbol", "1,2,2"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("differ by at least"));
}

#[test]
fn class_rejects_entries_whose_sum_is_too_small() {
    let (code, _, stderr) = run(&["class", "--series", "C", "--usymbol", "0,0,1"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("below the level minimum"));
}

#[test]
fn families_text_lists_three_families_at_c_rank_two() {
    let (code, stdout, _) = run(&["families", "--series", "C", "--rank", "2"]);
    assert_eq!(code, 0);
    assert_eq!(stdout.matches("family (").count(), 3);
    assert!(stdout.contains("family (0,0,1,2,3): 3 members, f = 1"));
}

#[test]
fn families_json_lists_members_with_invariants_and_classes_with_transversals() {
    let (code, stdout, _) = run(&[
        "families", "--series", "C", "--rank", "2", "--format", "json",
    ]);
    assert_eq!(code, 0);
    let value: Value = serde_json::from_str(&stdout).expect("valid JSON");
    let families = value.as_array().expect("array");
    assert_eq!(families.len(), 3);
    let big = families
        .iter()
        .find(|f| f["members"].as_array().expect("members").len() == 3)
        .expect("the three-member family");
    assert_eq!(big["f"], 1);
    for member in big["members"].as_array().expect("members") {
        assert!(member["symbol"]["entries"].is_array());
        assert!(member["kappa"]["x"].is_array());
        assert!(member["kappa"]["chi"].is_array());
    }
    let classes = big["classes"].as_array().expect("classes");
    assert_eq!(classes.len(), 2);
    let distinct_t: std::collections::BTreeSet<String> =
        classes.iter().map(|c| c["t"].to_string()).collect();
    assert_eq!(distinct_t.len(), 2);
    let transversals: Vec<usize> = classes
        .iter()
        .map(|c| c["transversal"].as_array().expect("transversal").len())
        .collect();
    assert_eq!(transversals.iter().sum::<usize>(), 3);
}

#[test]
fn verify_passes_and_prints_one_line_per_scope() {
    let (code, stdout, stderr) = run(&["verify", "--series", "C", "--rank", "2"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("series C, n = 2 (m* = 2, 3 families): PASS"));
    assert!(stdout.contains("family (0,0,1,2,3): pass"));
    assert!(stderr.contains("verified 1 rank(s)"));
}

#[test]
fn verify_covers_a_rank_range_for_every_series_by_default() {
    let (code, stdout, _) = run(&["verify", "--max-rank", "2", "--format", "json"]);
    assert_eq!(code, 0);
    let value: Value = serde_json::from_str(&stdout).expect("valid JSON");
    let reports = value.as_array().expect("array");
    assert_eq!(reports.len(), 9);
    for report in reports {
        assert_eq!(report["passed"], true);
    }
}

#[test]
fn verify_restricted_to_named_checks_reports_only_those() {
    let (code, stdout, _) = run(&[
        "verify", "--series", "B", "--rank", "2", "--checks", "T-diagram,T-subgroup",
        "--format", "csv",
    ]);
    assert_eq!(code, 0);
    let mut lines = stdout.lines();
    assert_eq!(lines.next(), Some("series,n,scope,check,status,witness"));
    for line in lines {
        assert!(
            line.contains(",T-diagram,") || line.contains(",T-subgroup,"),
            "unexpected row {line}"
        );
    }
}

#[test]
fn verify_requires_a_rank_bound() {
    let (code, _, stderr) = run(&["verify", "--series", "C"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("--max-rank"));
}

#[test]
fn verify_rejects_an_inverted_rank_range() {
    let (code, _, stderr) = run(&["verify", "--rank", "5", "--max-rank", "2"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("exceeds"));
}

#[test]
fn verify_accepts_a_worker_thread_count() {
    let (code, stdout, _) = run(&["verify", "--series", "D", "--rank", "2", "--jobs", "2"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("PASS"));
}

#[test]
fn unknown_check_names_are_rejected_at_parse_time() {
    let (code, _, stderr) = run(&["verify", "--rank", "1", "--checks", "nonsense"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("nonsense"));
}

#[test]
fn export_json_counts_match_c_rank_two() {
    let (code, stdout, _) = run(&["export", "--series", "C", "--rank", "2"]);
    assert_eq!(code, 0);
    let value: Value = serde_json::from_str(&stdout).expect("valid JSON");
    assert_eq!(value["series"], "C");
    assert_eq!(value["m_star"], 2);
    assert_eq!(value["symbols"].as_array().expect("symbols").len(), 5);
    assert_eq!(value["usymbols"].as_array().expect("usymbols").len(), 5);
    assert_eq!(
        value["usymbol_classes"].as_array().expect("classes").len(),
        4
    );
    assert_eq!(value["families"].as_array().expect("families").len(), 3);
}

#[test]
fn export_csv_has_one_row_per_transversal_member() {
    let (code, stdout, _) = run(&[
        "export", "--series", "C", "--rank", "2", "--format", "csv",
    ]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(
        lines[0],
        "series,n,family,class,t,block_set,twisted,member,kappa"
    );
    assert_eq!(lines.len(), 6);
}

#[test]
fn export_round_trips_through_its_own_json() {
    let (code, _, stderr) = run(&[
        "export", "--series", "B", "--rank", "3", "--check-import",
    ]);
    assert_eq!(code, 0);
    assert!(stderr.contains("import round-trip ok"));
}

#[test]
fn output_file_receives_exactly_the_stdout_rendering() {
    let dir = tempfile::tempdir().expect("temp dir");
    let path = dir.path().join("symbols.csv");
    let (code, stdout, _) = run_in(
        &[
            "enumerate", "--series", "D", "--rank", "2", "--format", "csv",
            "--out", "symbols.csv",
        ],
        Some(dir.path()),
    );
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let written = std::fs::read_to_string(&path).expect("file written");
    let (_, direct, _) = run(&["enumerate", "--series", "D", "--rank", "2", "--format", "csv"]);
    assert_eq!(written, direct);
}
