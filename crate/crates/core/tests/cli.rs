//! Command-line behavior: exit codes, flag precedence, config files,
//! and output plumbing, driven through the compiled binary.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use cryptovet::corpus::generate_corpus;
use cryptovet::findings::Finding;

const BIN: &str = env!("CARGO_BIN_EXE_cryptovet");

fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(BIN)
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn run(args: &[&str]) -> Output {
    run_in(Path::new("."), args)
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).unwrap()
}

/// Corpus cases for one rule, generated into a fresh directory.
fn corpus_for(rule: &str) -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    let rules: BTreeSet<String> = [rule.to_string()].into();
    generate_corpus(&rules, dir.path()).unwrap();
    dir
}

#[test]
fn clean_tree_scans_quietly_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("main.go"),
        "package main\n\nfunc main() {}\n",
    )
    .unwrap();
    let output = run(&["scan", dir.path().to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0));
    assert!(stdout(&output).is_empty(), "no findings, no report lines");
    assert!(stderr(&output).contains("0 findings"));
}

#[test]
fn fail_on_gates_the_exit_code_by_severity() {
    // Rule 03 findings are Low severity.
    let dir = corpus_for("03");
    let root = dir.path().to_str().unwrap();

    let low = run(&["scan", root]);
    assert_eq!(low.status.code(), Some(1), "default threshold is low");

    let medium = run(&["scan", root, "--fail-on", "medium"]);
    assert_eq!(medium.status.code(), Some(0));

    let high = run(&["scan", root, "--fail-on", "high"]);
    assert_eq!(high.status.code(), Some(0));

    // Rule 01 findings are High severity and trip every threshold.
    let dir = corpus_for("01");
    let high = run(&["scan", dir.path().to_str().unwrap(), "--fail-on", "high"]);
    assert_eq!(high.status.code(), Some(1));
}

#[test]
fn overlapping_rule_filters_are_rejected() {
    let output = run(&["scan", ".", "--rules", "11", "--exclude-rules", "11"]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr(&output).contains("overlap"));
}

#[test]
fn missing_scan_root_is_a_config_error() {
    let output = run(&["scan", "/no/such/tree"]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr(&output).starts_with("error:"));
}

#[test]
fn unknown_format_and_rule_ids_are_rejected() {
    let output = run(&["scan", ".", "--format", "yaml"]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr(&output).contains("format"));

    let output = run(&["scan", ".", "--rules", "99"]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr(&output).contains("99"));
}

#[test]
fn usage_errors_exit_two() {
    let output = run(&["scan", "--fail-on"]);
    assert_eq!(output.status.code(), Some(2), "missing flag value");
    let output = run(&["frobnicate"]);
    assert_eq!(output.status.code(), Some(2), "unknown subcommand");
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = corpus_for("03");
    let root = dir.path().to_str().unwrap();
    let cfg = dir.path().join("scan.toml");
    fs::write(&cfg, "fail_on = \"high\"\n").unwrap();
    let cfg = cfg.to_str().unwrap();

    let from_file = run(&["scan", root, "--config", cfg]);
    assert_eq!(from_file.status.code(), Some(0), "file sets the threshold");

    let flag_wins = run(&["scan", root, "--config", cfg, "--fail-on", "low"]);
    assert_eq!(flag_wins.status.code(), Some(1), "flag overrides the file");

    let rules_cfg = dir.path().join("rules.toml");
    fs::write(&rules_cfg, "rules = [\"01\"]\n").unwrap();
    let narrowed = run(&["scan", root, "--config", rules_cfg.to_str().unwrap()]);
    assert_eq!(
        narrowed.status.code(),
        Some(0),
        "rule 01 never fires on the rule 03 corpus"
    );
}

#[test]
fn unknown_config_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("scan.toml");
    fs::write(&cfg, "failon = \"high\"\n").unwrap();
    let output = run(&["scan", ".", "--config", cfg.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr(&output).contains("scan.toml"));
}

#[test]
fn output_flag_writes_the_report_to_a_file() {
    let dir = corpus_for("01");
    let out = dir.path().join("report.json");
    let output = run(&[
        "scan",
        dir.path().to_str().unwrap(),
        "--format",
        "json",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(1), "findings still gate the exit");
    assert!(stdout(&output).is_empty(), "report goes to the file");
    let findings: Vec<Finding> =
        serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert!(!findings.is_empty());
    assert!(findings.iter().all(|f| f.rule_id == "01"));
}

#[test]
fn test_files_are_skipped_by_default_and_kept_on_request() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("hash_test.go"),
        "package p\n\nimport \"crypto/md5\"\n\nfunc helper() {\n\t_ = md5.New()\n}\n",
    )
    .unwrap();
    let root = dir.path().to_str().unwrap();

    let skipped = run(&["scan", root]);
    assert_eq!(skipped.status.code(), Some(0));
    assert!(stderr(&skipped).contains("(1 skipped)"));

    let included = run(&["scan", root, "--exclude-tests", "false"]);
    assert_eq!(included.status.code(), Some(1));
    assert!(stdout(&included).contains("rule-01"));
}

#[test]
fn jobs_flag_caps_workers_and_rejects_zero() {
    let dir = corpus_for("01");
    let root = dir.path().to_str().unwrap();
    let serial = run(&["scan", root, "--jobs", "1", "--format", "json"]);
    let parallel = run(&["scan", root, "--jobs", "2", "--format", "json"]);
    assert_eq!(serial.status.code(), Some(1));
    assert_eq!(
        stdout(&serial),
        stdout(&parallel),
        "worker count cannot change the findings"
    );

    let zero = run(&["scan", root, "--jobs", "0"]);
    assert_eq!(zero.status.code(), Some(2));
}

#[test]
fn bench_scores_a_single_rule() {
    let output = run(&["bench", "--rules", "5"]);
    assert_eq!(output.status.code(), Some(0), "single-digit ids normalize");
    let text = stdout(&output);
    assert!(text.lines().any(|l| l.starts_with("05")), "rule row present");
    assert!(
        !text.lines().any(|l| l.starts_with("01")),
        "other rules stay out of a narrowed bench"
    );
    assert!(text.contains("3 cases"));
}

#[test]
fn bench_shows_the_cost_of_excluding_a_rule() {
    let output = run(&["bench", "--exclude-rules", "13"]);
    assert_eq!(
        output.status.code(),
        Some(1),
        "held-out rule turns its positives into misses"
    );
    let text = stdout(&output);
    let row13 = text
        .lines()
        .find(|l| l.starts_with("13"))
        .expect("excluded rule still scored");
    let columns: Vec<&str> = row13.split_whitespace().collect();
    assert_eq!(&columns[1..4], &["0", "2", "0"], "two misses, nothing else");
    let all = text.lines().find(|l| l.starts_with("all")).unwrap();
    assert!(all.contains("0.931"), "27 of 29 positives remain: {all}");
}

#[test]
fn aggregate_counts_unmapped_findings_and_stays_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("gosec.csv");
    fs::write(&csv, "file,line,rule\nf.go,10,G401\nf.go,20,G999\n").unwrap();
    let descriptor = format!(
        "tool=gosec;project=p;format=tabular;path={}",
        csv.display()
    );

    let first = run(&["aggregate", &descriptor]);
    assert_eq!(first.status.code(), Some(0));
    let text = stdout(&first);
    assert!(text.contains("Unmapped findings: 1"), "{text}");
    assert!(text.contains("Dropped results: 0"), "{text}");

    let second = run(&["aggregate", &descriptor]);
    assert_eq!(first.stdout, second.stdout, "aggregate output is stable");
}

#[test]
fn aggregate_timing_prints_per_tool_medians() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("gosec.csv");
    fs::write(&csv, "file,line,rule\nf.go,10,G401\n").unwrap();
    let timing = dir.path().join("times.csv");
    fs::write(
        &timing,
        "tool,project,phase,seconds\nmytool,p1,setup,4\nmytool,p1,analysis,6\nmytool,p2,analysis,30\n",
    )
    .unwrap();
    let descriptor = format!(
        "tool=gosec;project=p;format=tabular;path={}",
        csv.display()
    );

    let output = run(&[
        "aggregate",
        &descriptor,
        "--timing",
        timing.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0));
    let text = stdout(&output);
    assert!(text.contains("Median execution time (s)"), "{text}");
    assert!(
        text.contains("mytool 20.000"),
        "runs of 10s and 30s have a 20s midpoint: {text}"
    );
}

#[test]
fn aggregate_rejects_bad_descriptors_and_missing_files() {
    let no_path = run(&["aggregate", "tool=gosec;project=p;format=tabular"]);
    assert_eq!(no_path.status.code(), Some(2));
    assert!(stderr(&no_path).starts_with("error:"));

    let missing = run(&[
        "aggregate",
        "tool=gosec;project=p;format=tabular;path=/no/such.csv",
    ]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn rules_lists_the_whole_catalog() {
    let output = run(&["rules"]);
    assert_eq!(output.status.code(), Some(0));
    let text = stdout(&output);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 14);
    for (i, line) in lines.iter().enumerate() {
        assert!(
            line.starts_with(&format!("{:02}", i + 1)),
            "catalog is ordered: {line}"
        );
    }
}
