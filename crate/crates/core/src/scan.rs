//! The one-call scan entry point shared by the CLI and the C ABI.

use std::path::Path;

use crate::findings::{filter_findings, Finding};
use crate::frontend::discover_project;
use crate::rules::{run_all, AnalysisContext, RuleConfig};
use crate::Result;

/// What a scan produced, with enough context for a summary line.
#[derive(Debug)]
pub struct ScanOutcome {
    pub findings: Vec<Finding>,
    /// Files that were parsed and analyzed.
    pub files_scanned: usize,
    /// Files in the tree that analysis skipped (syntax errors, cgo,
    /// excluded tests).
    pub files_skipped: usize,
    /// Human-readable notes about skipped files.
    pub diagnostics: Vec<String>,
}

/// Discover a Go project under `root`, run the enabled rules, and filter
/// the findings per the configuration.
pub fn scan_path(root: &Path, config: &RuleConfig) -> Result<ScanOutcome> {
    config.validate()?;
    let project = discover_project(root, config.exclude_tests)?;

    let diagnostics: Vec<String> = project
        .diagnostics
        .iter()
        .map(|d| match &d.path {
            Some(path) => format!("{path}: {}", d.message),
            None => d.message.clone(),
        })
        .collect();

    let ctx = AnalysisContext::build(&project, config.clone());
    let files_scanned = ctx.files.len();
    let files_skipped = project.files.len() - files_scanned;

    let findings = filter_findings(run_all(&ctx), config);
    Ok(ScanOutcome {
        findings,
        files_scanned,
        files_skipped,
        diagnostics,
    })
}
