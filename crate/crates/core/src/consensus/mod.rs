//! Cross-tool consensus: normalize findings from several scanners, map
//! their rule ids onto the shared taxonomy, match detections by location,
//! and compute agreement partitions, detection matrices, and median
//! execution times.

pub mod ingest;
pub mod mapping;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::rules::rule_catalog;
use crate::Result;

pub use ingest::{
    ingest, parse_descriptor, read_timing_file, IngestOutcome, InputDescriptor, InputFormat,
    TableSpec,
};
pub use mapping::{apply_mapping, RuleMapping};

/// One detection from any tool, normalized for matching.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizedFinding {
    pub tool: String,
    /// Project label supplied at ingestion.
    pub project: String,
    /// Root-relative path with forward-slash separators.
    pub file: String,
    /// 1-based line.
    pub line: u32,
    /// The tool's own rule identifier, verbatim.
    pub tool_rule: String,
    /// Shared-taxonomy id ("01".."14") once mapped; `None` when the tool
    /// rule has no mapping.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub taxonomy_rule: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub severity: Option<String>,
}

/// How detections are considered "the same" across tools.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatchKind {
    /// Same project, file, line, and taxonomy rule.
    WithRule,
    /// Same project, file, and line; any rule.
    LocationOnly,
}

impl MatchKind {
    pub fn label(self) -> &'static str {
        match self {
            MatchKind::WithRule => "with_rule",
            MatchKind::LocationOnly => "location_only",
        }
    }
}

/// The identity of one matched detection site.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MatchKey {
    pub project: String,
    pub file: String,
    pub line: u32,
    /// Present iff the key kind is [`MatchKind::WithRule`].
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rule: Option<String>,
}

/// Group findings into match keys, each carrying the set of tools that
/// reported it. Only findings with a taxonomy rule participate — under
/// either kind — so the two kinds partition the same detection population
/// and `with_rule` refines `location_only`.
pub fn match_findings(
    findings: &[NormalizedFinding],
    kind: MatchKind,
) -> BTreeMap<MatchKey, BTreeSet<String>> {
    let mut matches: BTreeMap<MatchKey, BTreeSet<String>> = BTreeMap::new();
    for f in findings {
        let Some(rule) = &f.taxonomy_rule else {
            continue;
        };
        let key = MatchKey {
            project: f.project.clone(),
            file: f.file.clone(),
            line: f.line,
            rule: match kind {
                MatchKind::WithRule => Some(rule.clone()),
                MatchKind::LocationOnly => None,
            },
        };
        matches.entry(key).or_default().insert(f.tool.clone());
    }
    matches
}

/// The partition of matched detections across tool subsets (the cells of a
/// Venn diagram over tools).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgreementReport {
    pub key_kind: String,
    pub total_unique_keys: u64,
    /// Count of keys detected by exactly this subset of tools. Every
    /// non-empty subset of the participating tools appears, zeros
    /// included; the label is the sorted tool names joined with `+`.
    pub cells: BTreeMap<String, u64>,
    /// Keys each tool reported, regardless of who else did.
    pub per_tool_totals: BTreeMap<String, u64>,
    /// Keys only this tool reported.
    pub per_tool_unique: BTreeMap<String, u64>,
}

/// Partition match keys by the exact tool subset that reported them.
pub fn agreement_partition(
    matches: &BTreeMap<MatchKey, BTreeSet<String>>,
    kind: MatchKind,
) -> AgreementReport {
    let tools: Vec<String> = matches
        .values()
        .flat_map(|set| set.iter().cloned())
        .collect::<BTreeSet<String>>()
        .into_iter()
        .collect();

    // Every non-empty subset of the participating tools gets a cell, so
    // zero cells are visible. Comparisons involve a handful of scanners;
    // past 16 tools the 2^n zero-fill is dropped and only populated cells
    // appear.
    let mut cells: BTreeMap<String, u64> = BTreeMap::new();
    if tools.len() <= 16 {
        for mask in 1u32..(1u32 << tools.len()) {
            let label = subset_label(&tools, mask);
            cells.insert(label, 0);
        }
    }

    let mut per_tool_totals: BTreeMap<String, u64> =
        tools.iter().map(|t| (t.clone(), 0)).collect();
    let mut per_tool_unique: BTreeMap<String, u64> =
        tools.iter().map(|t| (t.clone(), 0)).collect();

    for set in matches.values() {
        let label = set.iter().cloned().collect::<Vec<_>>().join("+");
        *cells.entry(label).or_insert(0) += 1;
        for tool in set {
            *per_tool_totals.get_mut(tool).expect("tool enumerated") += 1;
        }
        if set.len() == 1 {
            let only = set.iter().next().expect("non-empty set");
            *per_tool_unique.get_mut(only).expect("tool enumerated") += 1;
        }
    }

    AgreementReport {
        key_kind: kind.label().to_string(),
        total_unique_keys: matches.len() as u64,
        cells,
        per_tool_totals,
        per_tool_unique,
    }
}

fn subset_label(tools: &[String], mask: u32) -> String {
    let mut members = Vec::new();
    for (i, tool) in tools.iter().enumerate() {
        if mask & (1 << i) != 0 {
            members.push(tool.as_str());
        }
    }
    members.join("+")
}

/// Raw detection counts per (tool, taxonomy rule), with unsupported rules
/// kept distinct from supported-but-empty ones.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionMatrix {
    /// Row order.
    pub tools: Vec<String>,
    /// Column order: the full catalog.
    pub rules: Vec<String>,
    /// `counts[tool][rule]` is `None` when the tool does not support the
    /// rule (rendered `--`), `Some(0)` when it supports it but found
    /// nothing.
    pub counts: BTreeMap<String, BTreeMap<String, Option<u64>>>,
    pub row_totals: BTreeMap<String, u64>,
    pub column_totals: BTreeMap<String, u64>,
}

/// Count mapped findings per (tool, rule). `support` declares which rules
/// each tool can detect at all (derived from the rule mapping); a cell
/// outside the support set stays absent unless findings contradict it.
pub fn detection_matrix(
    findings: &[NormalizedFinding],
    tools: &[String],
    support: &BTreeMap<String, BTreeSet<String>>,
) -> DetectionMatrix {
    let rules: Vec<String> = rule_catalog().iter().map(|d| d.id.to_string()).collect();

    let mut raw: BTreeMap<(String, String), u64> = BTreeMap::new();
    for f in findings {
        if let Some(rule) = &f.taxonomy_rule {
            *raw.entry((f.tool.clone(), rule.clone())).or_insert(0) += 1;
        }
    }

    let empty = BTreeSet::new();
    let mut counts: BTreeMap<String, BTreeMap<String, Option<u64>>> = BTreeMap::new();
    let mut row_totals: BTreeMap<String, u64> = BTreeMap::new();
    let mut column_totals: BTreeMap<String, u64> =
        rules.iter().map(|r| (r.clone(), 0)).collect();

    for tool in tools {
        let supported = support.get(tool).unwrap_or(&empty);
        let mut row = BTreeMap::new();
        let mut row_total = 0;
        for rule in &rules {
            let found = raw.get(&(tool.clone(), rule.clone())).copied();
            let cell = match found {
                Some(n) => Some(n),
                None if supported.contains(rule) => Some(0),
                None => None,
            };
            if let Some(n) = cell {
                row_total += n;
                *column_totals.get_mut(rule).expect("rule enumerated") += n;
            }
            row.insert(rule.clone(), cell);
        }
        counts.insert(tool.clone(), row);
        row_totals.insert(tool.clone(), row_total);
    }

    DetectionMatrix {
        tools: tools.to_vec(),
        rules,
        counts,
        row_totals,
        column_totals,
    }
}

/// Timed phase of one tool run on one project.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Setup,
    Analysis,
}

impl std::str::FromStr for Phase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Phase> {
        match s {
            "setup" => Ok(Phase::Setup),
            "analysis" => Ok(Phase::Analysis),
            other => Err(Error::Config(format!(
                "unknown phase {other:?} (expected setup or analysis)"
            ))),
        }
    }
}

/// One wall-clock measurement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExecutionRecord {
    pub tool: String,
    pub project: String,
    pub phase: Phase,
    pub seconds: f64,
}

/// Median per-tool wall-clock time over projects. Phases of one (tool,
/// project) run sum into a single time; even-cardinality project sets use
/// the midpoint of the two central values.
pub fn median_execution_time(records: &[ExecutionRecord]) -> Result<BTreeMap<String, f64>> {
    let mut seen: BTreeSet<(String, String, String)> = BTreeSet::new();
    let mut per_run: BTreeMap<(String, String), f64> = BTreeMap::new();
    for r in records {
        if !r.seconds.is_finite() || r.seconds < 0.0 {
            return Err(Error::Config(format!(
                "timing for {}/{} must be a non-negative number (got {})",
                r.tool, r.project, r.seconds
            )));
        }
        let phase = format!("{:?}", r.phase);
        if !seen.insert((r.tool.clone(), r.project.clone(), phase)) {
            return Err(Error::Config(format!(
                "duplicate {:?} timing for tool {} on project {}",
                r.phase, r.tool, r.project
            )));
        }
        *per_run.entry((r.tool.clone(), r.project.clone())).or_insert(0.0) += r.seconds;
    }

    let mut per_tool: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for ((tool, _), time) in per_run {
        per_tool.entry(tool).or_default().push(time);
    }

    let mut medians = BTreeMap::new();
    for (tool, mut times) in per_tool {
        times.sort_by(|a, b| a.partial_cmp(b).expect("validated finite"));
        let n = times.len();
        let median = if n % 2 == 1 {
            times[n / 2]
        } else {
            (times[n / 2 - 1] + times[n / 2]) / 2.0
        };
        medians.insert(tool, median);
    }
    Ok(medians)
}

/// Aligned plain-text table of an agreement partition, subsets ordered by
/// size then name.
pub fn render_agreement_text(report: &AgreementReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("Agreement partition ({})\n", report.key_kind));
    out.push_str(&format!(
        "Total unique keys: {}\n\n",
        report.total_unique_keys
    ));

    let mut rows: Vec<(&String, &u64)> = report.cells.iter().collect();
    rows.sort_by_key(|(label, _)| (label.matches('+').count(), (*label).clone()));

    let label_width = rows
        .iter()
        .map(|(label, _)| label.len())
        .chain(["Tools".len()])
        .max()
        .unwrap_or(5);
    out.push_str(&format!("{:<label_width$}  {:>8}\n", "Tools", "Keys"));
    for (label, count) in rows {
        out.push_str(&format!("{label:<label_width$}  {count:>8}\n"));
    }

    out.push('\n');
    for (title, map) in [
        ("Per-tool totals", &report.per_tool_totals),
        ("Per-tool unique", &report.per_tool_unique),
    ] {
        let cells: Vec<String> = map.iter().map(|(t, n)| format!("{t}={n}")).collect();
        out.push_str(&format!("{title}: {}\n", cells.join("  ")));
    }
    out
}

/// Aligned plain-text detection matrix: rules as rows, tools as columns,
/// `--` for unsupported cells.
pub fn render_matrix_text(matrix: &DetectionMatrix) -> String {
    let mut out = String::new();
    let col_width = matrix
        .tools
        .iter()
        .map(|t| t.len())
        .chain([7])
        .max()
        .unwrap_or(7);

    out.push_str(&format!("{:<4}", "ID"));
    for tool in &matrix.tools {
        out.push_str(&format!("  {tool:>col_width$}"));
    }
    out.push_str(&format!("  {:>col_width$}\n", "Total"));

    for rule in &matrix.rules {
        out.push_str(&format!("{rule:<4}"));
        for tool in &matrix.tools {
            let cell = matrix
                .counts
                .get(tool)
                .and_then(|row| row.get(rule))
                .copied()
                .flatten();
            match cell {
                Some(n) => out.push_str(&format!("  {n:>col_width$}")),
                None => out.push_str(&format!("  {:>col_width$}", "--")),
            }
        }
        let total = matrix.column_totals.get(rule).copied().unwrap_or(0);
        out.push_str(&format!("  {total:>col_width$}\n"));
    }

    out.push_str(&format!("{:<4}", "All"));
    let mut grand = 0;
    for tool in &matrix.tools {
        let total = matrix.row_totals.get(tool).copied().unwrap_or(0);
        grand += total;
        out.push_str(&format!("  {total:>col_width$}"));
    }
    out.push_str(&format!("  {grand:>col_width$}\n"));
    out
}
