//! Command-line interface: scan, aggregate, bench, and rules.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use cryptovet::consensus::{
    agreement_partition, apply_mapping, detection_matrix, ingest, match_findings,
    median_execution_time, parse_descriptor, read_timing_file, render_agreement_text,
    render_matrix_text, MatchKind, NormalizedFinding, RuleMapping,
};
use cryptovet::corpus::{evaluate, generate_corpus, render_score_text};
use cryptovet::findings::Severity;
use cryptovet::report::{render, ReportFormat};
use cryptovet::rules::{rule_by_id, rule_catalog, RuleConfig};
use cryptovet::scan::scan_path;
use cryptovet::{Error, Result};

#[derive(Parser)]
#[command(
    name = "cryptovet",
    version,
    about = "Detects cryptographic API misuse in Go source"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Scan a Go source tree and report findings.
    Scan(ScanArgs),
    /// Merge findings from several tools into agreement statistics.
    Aggregate(AggregateArgs),
    /// Generate the seeded benchmark corpus and score this scanner on it.
    Bench(BenchArgs),
    /// List the rule catalog.
    Rules,
}

#[derive(Args)]
struct ScanArgs {
    /// Root of the Go project to scan.
    #[arg(default_value = ".")]
    path: PathBuf,
    /// Comma-separated rule ids to run (default: all).
    #[arg(long, value_delimiter = ',', value_name = "IDS")]
    rules: Option<Vec<String>>,
    /// Comma-separated rule ids to skip.
    #[arg(long, value_delimiter = ',', value_name = "IDS")]
    exclude_rules: Option<Vec<String>>,
    /// Skip _test.go files and testdata trees.
    #[arg(long, value_name = "BOOL")]
    exclude_tests: Option<bool>,
    /// Report format: text, json, or sarif.
    #[arg(long, value_name = "FORMAT")]
    format: Option<String>,
    /// Write the report here instead of stdout.
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
    /// Lowest severity that makes the exit code 1.
    #[arg(long, value_name = "SEVERITY")]
    fail_on: Option<String>,
    /// Cap on analysis worker threads.
    #[arg(long, value_name = "N")]
    jobs: Option<usize>,
    /// RSA moduli below this many bits are short.
    #[arg(long, value_name = "N")]
    min_rsa_bits: Option<i64>,
    /// HMAC keys below this many bytes are short.
    #[arg(long, value_name = "N")]
    min_hmac_key_bytes: Option<i64>,
    /// KDF salts below this many bytes are short.
    #[arg(long, value_name = "N")]
    min_salt_bytes: Option<i64>,
    /// PBKDF2 iteration counts below this are low.
    #[arg(long, value_name = "N")]
    min_pbkdf2_iters: Option<i64>,
    /// bcrypt costs below this are low.
    #[arg(long, value_name = "N")]
    min_bcrypt_cost: Option<i64>,
    /// TLS versions below this wire value are outdated.
    #[arg(long, value_name = "N")]
    min_tls_version: Option<i64>,
    /// TOML file holding any of the scan options; flags win.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
}

/// The scan options as they appear in a `--config` TOML file. Every field
/// is optional; command-line flags override whatever the file sets.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    rules: Option<Vec<String>>,
    exclude_rules: Option<Vec<String>>,
    exclude_tests: Option<bool>,
    format: Option<String>,
    output: Option<PathBuf>,
    fail_on: Option<String>,
    jobs: Option<usize>,
    min_rsa_bits: Option<i64>,
    min_hmac_key_bytes: Option<i64>,
    min_salt_bytes: Option<i64>,
    min_pbkdf2_iters: Option<i64>,
    min_bcrypt_cost: Option<i64>,
    min_tls_version: Option<i64>,
}

#[derive(Args)]
struct AggregateArgs {
    /// Findings files, one descriptor per input, e.g.
    /// "tool=gosec;project=p1;format=sarif;path=out.sarif".
    #[arg(required = true, value_name = "DESCRIPTOR")]
    inputs: Vec<String>,
    /// CSV mapping of tool rules to catalog rules (tool,tool_rule,rule);
    /// extends the built-in mapping.
    #[arg(long, value_name = "PATH")]
    mapping: Option<PathBuf>,
    /// CSV of execution times (tool,project,phase,seconds).
    #[arg(long, value_name = "PATH")]
    timing: Option<PathBuf>,
    /// Match key: with-rule or location.
    #[arg(long, default_value = "with-rule", value_name = "KEY")]
    key: String,
    /// Report format: text or json.
    #[arg(long, default_value = "text", value_name = "FORMAT")]
    format: String,
    /// Write the report here instead of stdout.
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated rule ids to generate and score (default: all).
    #[arg(long, value_delimiter = ',', value_name = "IDS")]
    rules: Option<Vec<String>>,
    /// Rule ids to hold out of the scan; their cases still count,
    /// so misses show up as false negatives.
    #[arg(long, value_delimiter = ',', value_name = "IDS")]
    exclude_rules: Option<Vec<String>>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Scan(args) => cmd_scan(args),
        Command::Aggregate(args) => cmd_aggregate(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Rules => cmd_rules(),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

/// Zero-pad bare single-digit ids so "5" selects rule "05".
fn normalize_rule_id(raw: &str) -> String {
    let id = raw.trim();
    if id.len() == 1 && id.chars().all(|c| c.is_ascii_digit()) {
        format!("0{id}")
    } else {
        id.to_string()
    }
}

/// Resolve include/exclude lists into the final enabled-rule set,
/// rejecting unknown ids and overlapping lists.
fn resolve_rules(
    include: Option<&[String]>,
    exclude: Option<&[String]>,
) -> Result<BTreeSet<String>> {
    let normalize = |ids: &[String]| -> Result<BTreeSet<String>> {
        let mut set = BTreeSet::new();
        for raw in ids {
            let id = normalize_rule_id(raw);
            if rule_by_id(&id).is_none() {
                return Err(Error::Config(format!("unknown rule id {id:?}")));
            }
            set.insert(id);
        }
        Ok(set)
    };

    let included = match include {
        Some(ids) => normalize(ids)?,
        None => rule_catalog().iter().map(|d| d.id.to_string()).collect(),
    };
    let excluded = match exclude {
        Some(ids) => normalize(ids)?,
        None => BTreeSet::new(),
    };

    if include.is_some() {
        let overlap: Vec<&String> = included.intersection(&excluded).collect();
        if !overlap.is_empty() {
            let ids: Vec<&str> = overlap.iter().map(|s| s.as_str()).collect();
            return Err(Error::Config(format!(
                "--rules and --exclude-rules overlap on {}",
                ids.join(", ")
            )));
        }
    }
    Ok(included.difference(&excluded).cloned().collect())
}

fn parse_severity(s: &str) -> Result<Severity> {
    s.parse::<Severity>().map_err(Error::Config)
}

fn load_file_config(path: Option<&Path>) -> Result<FileConfig> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    let body = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    toml::from_str(&body)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

/// Send a finished report to `--output` or stdout.
fn emit(report: &str, output: Option<&Path>) -> Result<()> {
    match output {
        Some(path) => fs::write(path, report).map_err(|e| Error::io(path, e)),
        None => {
            print!("{report}");
            Ok(())
        }
    }
}

fn cmd_scan(args: ScanArgs) -> Result<ExitCode> {
    let file = load_file_config(args.config.as_deref())?;

    let include = args.rules.as_deref().or(file.rules.as_deref());
    let exclude = args
        .exclude_rules
        .as_deref()
        .or(file.exclude_rules.as_deref());
    let defaults = RuleConfig::default();
    let config = RuleConfig {
        enabled_rules: resolve_rules(include, exclude)?,
        min_rsa_bits: args
            .min_rsa_bits
            .or(file.min_rsa_bits)
            .unwrap_or(defaults.min_rsa_bits),
        min_hmac_key_bytes: args
            .min_hmac_key_bytes
            .or(file.min_hmac_key_bytes)
            .unwrap_or(defaults.min_hmac_key_bytes),
        min_salt_bytes: args
            .min_salt_bytes
            .or(file.min_salt_bytes)
            .unwrap_or(defaults.min_salt_bytes),
        min_pbkdf2_iters: args
            .min_pbkdf2_iters
            .or(file.min_pbkdf2_iters)
            .unwrap_or(defaults.min_pbkdf2_iters),
        min_bcrypt_cost: args
            .min_bcrypt_cost
            .or(file.min_bcrypt_cost)
            .unwrap_or(defaults.min_bcrypt_cost),
        min_tls_version: args
            .min_tls_version
            .or(file.min_tls_version)
            .unwrap_or(defaults.min_tls_version),
        exclude_tests: args
            .exclude_tests
            .or(file.exclude_tests)
            .unwrap_or(defaults.exclude_tests),
    };

    let format: ReportFormat = match args.format.as_deref().or(file.format.as_deref()) {
        Some(s) => s.parse()?,
        None => ReportFormat::Text,
    };
    let fail_on = match args.fail_on.as_deref().or(file.fail_on.as_deref()) {
        Some(s) => parse_severity(s)?,
        None => Severity::Low,
    };
    let output = args.output.or(file.output);
    let jobs = args.jobs.or(file.jobs);

    let outcome = match jobs {
        Some(0) => return Err(Error::Config("--jobs must be positive".to_string())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Internal(format!("worker pool setup failed: {e}")))?;
            pool.install(|| scan_path(&args.path, &config))?
        }
        None => scan_path(&args.path, &config)?,
    };

    let report = render(&outcome.findings, format)?;
    emit(&report, output.as_deref())?;

    for note in &outcome.diagnostics {
        eprintln!("note: {note}");
    }
    eprintln!(
        "scanned {} files ({} skipped), {} findings",
        outcome.files_scanned,
        outcome.files_skipped,
        outcome.findings.len()
    );

    let failing = outcome.findings.iter().any(|f| f.severity >= fail_on);
    Ok(ExitCode::from(u8::from(failing)))
}

fn parse_match_kind(s: &str) -> Result<MatchKind> {
    match s {
        "with-rule" => Ok(MatchKind::WithRule),
        "location" => Ok(MatchKind::LocationOnly),
        other => Err(Error::Config(format!(
            "unknown match key {other:?} (expected with-rule or location)"
        ))),
    }
}

fn cmd_aggregate(args: AggregateArgs) -> Result<ExitCode> {
    let kind = parse_match_kind(&args.key)?;

    let mut mapping = RuleMapping::builtin();
    if let Some(path) = &args.mapping {
        mapping.merge_from(RuleMapping::from_csv_path(path)?);
    }

    let mut findings: Vec<NormalizedFinding> = Vec::new();
    let mut tools: BTreeSet<String> = BTreeSet::new();
    let mut dropped = 0;
    for raw in &args.inputs {
        let descriptor = parse_descriptor(raw)?;
        tools.insert(descriptor.tool.clone());
        let outcome = ingest(&descriptor)?;
        for note in &outcome.notes {
            eprintln!("note: {}: {note}", descriptor.path.display());
        }
        dropped += outcome.dropped;
        findings.extend(outcome.findings);
    }

    let (findings, unmapped) = apply_mapping(findings, &mapping);
    let matches = match_findings(&findings, kind);
    let agreement = agreement_partition(&matches, kind);
    let tools: Vec<String> = tools.into_iter().collect();
    let matrix = detection_matrix(&findings, &tools, &mapping.support_by_tool());
    let medians = match &args.timing {
        Some(path) => Some(median_execution_time(&read_timing_file(path)?)?),
        None => None,
    };

    let report = match args.format.as_str() {
        "text" => {
            let mut out = render_agreement_text(&agreement);
            out.push('\n');
            out.push_str(&render_matrix_text(&matrix));
            if let Some(medians) = &medians {
                out.push('\n');
                out.push_str("Median execution time (s)\n");
                for (tool, seconds) in medians {
                    out.push_str(&format!("{tool} {seconds:.3}\n"));
                }
            }
            out.push('\n');
            out.push_str(&format!("Unmapped findings: {unmapped}\n"));
            out.push_str(&format!("Dropped results: {dropped}\n"));
            out
        }
        "json" => {
            let mut doc = serde_json::json!({
                "agreement": agreement,
                "matrix": matrix,
                "unmapped": unmapped,
                "dropped": dropped,
            });
            if let Some(medians) = &medians {
                doc["median_seconds"] = serde_json::to_value(medians)
                    .map_err(|e| Error::Internal(format!("median serialization failed: {e}")))?;
            }
            let mut body = serde_json::to_string_pretty(&doc)
                .map_err(|e| Error::Internal(format!("JSON serialization failed: {e}")))?;
            body.push('\n');
            body
        }
        other => {
            return Err(Error::Config(format!(
                "unknown aggregate format {other:?} (expected text or json)"
            )))
        }
    };

    emit(&report, args.output.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_bench(args: BenchArgs) -> Result<ExitCode> {
    let generate_set = match args.rules.as_deref() {
        Some(ids) => resolve_rules(Some(ids), None)?,
        None => resolve_rules(None, None)?,
    };
    // Excluded rules stay in the corpus but are held out of the scan, so
    // the score shows exactly what disabling them costs.
    let scan_set = resolve_rules(args.rules.as_deref(), args.exclude_rules.as_deref())?;

    let dir = tempfile::tempdir()
        .map_err(|e| Error::Internal(format!("corpus generation failed: {e}")))?;
    let cases = generate_corpus(&generate_set, dir.path())
        .map_err(|e| Error::Internal(format!("corpus generation failed: {e}")))?;

    let config = RuleConfig {
        enabled_rules: scan_set,
        ..RuleConfig::default()
    };
    let outcome = scan_path(dir.path(), &config)?;
    let score = evaluate(&outcome.findings, &cases);

    print!("{}", render_score_text(&score));
    println!(
        "\n{} cases, {} findings, recall {:.3}, precision {:.3}",
        cases.len(),
        outcome.findings.len(),
        score.recall(),
        score.precision()
    );
    Ok(ExitCode::from(u8::from(!score.perfect())))
}

fn cmd_rules() -> Result<ExitCode> {
    for desc in rule_catalog() {
        let advisory = desc.advisory.unwrap_or("-");
        println!(
            "{}  {:<6}  {:<24}  {:<32}  {}",
            desc.id,
            desc.severity.to_string(),
            desc.category,
            desc.title,
            advisory
        );
    }
    Ok(ExitCode::SUCCESS)
}
