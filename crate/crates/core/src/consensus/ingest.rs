//! Finding intake: SARIF and delimiter-separated tables, described by a
//! compact adapter descriptor so any tool's output can be pulled in.

use std::path::{Path, PathBuf};

use serde_json::Value;

use crate::error::Error;
use crate::Result;

use super::{ExecutionRecord, NormalizedFinding};

/// Column layout of a tabular findings file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableSpec {
    pub delimiter: u8,
    pub file_col: usize,
    pub line_col: usize,
    pub rule_col: usize,
    pub severity_col: Option<usize>,
    /// First row is a header and is skipped.
    pub header: bool,
}

impl Default for TableSpec {
    fn default() -> Self {
        TableSpec {
            delimiter: b',',
            file_col: 0,
            line_col: 1,
            rule_col: 2,
            severity_col: None,
            header: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InputFormat {
    Sarif,
    Tabular(TableSpec),
}

/// One findings file to ingest: whose it is, which project it covers, and
/// how to read it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputDescriptor {
    pub tool: String,
    pub project: String,
    pub format: InputFormat,
    pub path: PathBuf,
    /// When set, this prefix is stripped from absolute result paths.
    pub root: Option<String>,
}

/// Parse a `key=value;key=value` adapter descriptor, e.g.
/// `tool=gosec;project=alpha;format=sarif;path=out.sarif` or
/// `tool=x;project=y;format=tabular;path=f.tsv;delim=tab;file_col=0;line_col=1;rule_col=2;header=false`.
pub fn parse_descriptor(s: &str) -> Result<InputDescriptor> {
    let mut tool = None;
    let mut project = None;
    let mut format = None;
    let mut path = None;
    let mut root = None;
    let mut table = TableSpec::default();
    let mut table_keys_seen = false;
    let mut seen: Vec<String> = Vec::new();

    for part in s.split(';') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let Some((key, value)) = part.split_once('=') else {
            return Err(Error::Config(format!(
                "descriptor part {part:?} is not key=value"
            )));
        };
        if seen.iter().any(|k| k == key) {
            return Err(Error::Config(format!("duplicate descriptor key {key:?}")));
        }
        seen.push(key.to_string());

        match key {
            "tool" => tool = Some(value.to_string()),
            "project" => project = Some(value.to_string()),
            "format" => format = Some(value.to_string()),
            "path" => path = Some(PathBuf::from(value)),
            "root" => root = Some(value.to_string()),
            "delim" => {
                table.delimiter = match value {
                    "tab" => b'\t',
                    v if v.len() == 1 && v.is_ascii() => v.as_bytes()[0],
                    other => {
                        return Err(Error::Config(format!(
                            "delim must be one ASCII character or \"tab\" (got {other:?})"
                        )))
                    }
                };
                table_keys_seen = true;
            }
            "file_col" | "line_col" | "rule_col" | "severity_col" => {
                let index: usize = value.parse().map_err(|_| {
                    Error::Config(format!("{key} must be a column index (got {value:?})"))
                })?;
                match key {
                    "file_col" => table.file_col = index,
                    "line_col" => table.line_col = index,
                    "rule_col" => table.rule_col = index,
                    _ => table.severity_col = Some(index),
                }
                table_keys_seen = true;
            }
            "header" => {
                table.header = match value {
                    "true" => true,
                    "false" => false,
                    other => {
                        return Err(Error::Config(format!(
                            "header must be true or false (got {other:?})"
                        )))
                    }
                };
                table_keys_seen = true;
            }
            other => {
                return Err(Error::Config(format!("unknown descriptor key {other:?}")));
            }
        }
    }

    let tool = tool.ok_or_else(|| Error::Config("descriptor is missing tool=".to_string()))?;
    let project =
        project.ok_or_else(|| Error::Config("descriptor is missing project=".to_string()))?;
    let path = path.ok_or_else(|| Error::Config("descriptor is missing path=".to_string()))?;
    let format = match format.as_deref() {
        Some("sarif") => {
            if table_keys_seen {
                return Err(Error::Config(
                    "table options (delim/columns/header) require format=tabular".to_string(),
                ));
            }
            InputFormat::Sarif
        }
        Some("tabular") | Some("table") => InputFormat::Tabular(table),
        Some(other) => {
            return Err(Error::Config(format!(
                "unknown input format {other:?} (expected sarif or tabular)"
            )))
        }
        None => return Err(Error::Config("descriptor is missing format=".to_string())),
    };

    Ok(InputDescriptor {
        tool,
        project,
        format,
        path,
        root,
    })
}

/// What one file yielded: findings, plus how many records were dropped and
/// why.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IngestOutcome {
    pub findings: Vec<NormalizedFinding>,
    pub dropped: usize,
    pub notes: Vec<String>,
}

/// Read and normalize one findings file.
pub fn ingest(descriptor: &InputDescriptor) -> Result<IngestOutcome> {
    let raw = std::fs::read_to_string(&descriptor.path)
        .map_err(|source| Error::io(&descriptor.path, source))?;
    match &descriptor.format {
        InputFormat::Sarif => ingest_sarif(&raw, descriptor),
        InputFormat::Tabular(spec) => ingest_tabular(&raw, descriptor, spec),
    }
}

fn normalize_result_path(raw: &str, root: Option<&str>) -> String {
    let mut path = raw.replace('\\', "/");
    for scheme in ["file://", "file:"] {
        if let Some(rest) = path.strip_prefix(scheme) {
            path = rest.to_string();
            break;
        }
    }
    if let Some(root) = root {
        let root = root.replace('\\', "/");
        let root = root.trim_end_matches('/');
        if let Some(rest) = path.strip_prefix(root) {
            path = rest.to_string();
        }
    }
    while let Some(rest) = path.strip_prefix("./") {
        path = rest.to_string();
    }
    path.trim_start_matches('/').to_string()
}

fn ingest_sarif(raw: &str, descriptor: &InputDescriptor) -> Result<IngestOutcome> {
    let doc: Value = serde_json::from_str(raw).map_err(|e| Error::Ingest {
        path: descriptor.path.display().to_string(),
        message: format!("invalid JSON: {e}"),
    })?;
    let runs = doc
        .get("runs")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Ingest {
            path: descriptor.path.display().to_string(),
            message: "not a SARIF log: no runs array".to_string(),
        })?;

    let mut outcome = IngestOutcome {
        findings: Vec::new(),
        dropped: 0,
        notes: Vec::new(),
    };
    let mut result_index = 0usize;
    for run in runs {
        let results = run.get("results").and_then(Value::as_array);
        for result in results.into_iter().flatten() {
            result_index += 1;
            let rule_id = result
                .get("ruleId")
                .and_then(Value::as_str)
                .or_else(|| {
                    result
                        .get("rule")
                        .and_then(|r| r.get("id"))
                        .and_then(Value::as_str)
                });
            let location = result
                .get("locations")
                .and_then(Value::as_array)
                .and_then(|l| l.first())
                .and_then(|l| l.get("physicalLocation"));
            let uri = location
                .and_then(|l| l.get("artifactLocation"))
                .and_then(|a| a.get("uri"))
                .and_then(Value::as_str);
            let line = location
                .and_then(|l| l.get("region"))
                .and_then(|r| r.get("startLine"))
                .and_then(Value::as_u64);

            let (Some(rule_id), Some(uri), Some(line)) = (rule_id, uri, line) else {
                outcome.dropped += 1;
                outcome.notes.push(format!(
                    "result {result_index}: missing ruleId, location uri, or startLine; dropped"
                ));
                continue;
            };
            if line == 0 || line > u64::from(u32::MAX) {
                outcome.dropped += 1;
                outcome
                    .notes
                    .push(format!("result {result_index}: line {line} out of range; dropped"));
                continue;
            }
            outcome.findings.push(NormalizedFinding {
                tool: descriptor.tool.clone(),
                project: descriptor.project.clone(),
                file: normalize_result_path(uri, descriptor.root.as_deref()),
                line: line as u32,
                tool_rule: rule_id.to_string(),
                taxonomy_rule: None,
                severity: result
                    .get("level")
                    .and_then(Value::as_str)
                    .map(str::to_string),
            });
        }
    }
    Ok(outcome)
}

fn ingest_tabular(
    raw: &str,
    descriptor: &InputDescriptor,
    spec: &TableSpec,
) -> Result<IngestOutcome> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(spec.delimiter)
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(raw.as_bytes());

    let mut outcome = IngestOutcome {
        findings: Vec::new(),
        dropped: 0,
        notes: Vec::new(),
    };

    for (index, record) in reader.records().enumerate() {
        let row = index + 1;
        let record = record.map_err(|e| {
            let position = e
                .position()
                .map(|p| format!("row {} (byte {})", p.line(), p.byte()))
                .unwrap_or_else(|| format!("row {row}"));
            Error::Ingest {
                path: descriptor.path.display().to_string(),
                message: format!("{position}: {e}"),
            }
        })?;
        if spec.header && index == 0 {
            continue;
        }
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }

        let file = record.get(spec.file_col).filter(|v| !v.is_empty());
        let line_text = record.get(spec.line_col).filter(|v| !v.is_empty());
        let rule = record.get(spec.rule_col).filter(|v| !v.is_empty());

        let (Some(file), Some(line_text), Some(rule)) = (file, line_text, rule) else {
            outcome.dropped += 1;
            outcome
                .notes
                .push(format!("row {row}: missing file, line, or rule column; dropped"));
            continue;
        };
        let Ok(line) = line_text.parse::<u32>() else {
            outcome.dropped += 1;
            outcome.notes.push(format!(
                "row {row}: line {line_text:?} is not a positive integer; dropped"
            ));
            continue;
        };
        if line == 0 {
            outcome.dropped += 1;
            outcome
                .notes
                .push(format!("row {row}: line numbers are 1-based; dropped"));
            continue;
        }

        let severity = spec
            .severity_col
            .and_then(|col| record.get(col))
            .filter(|v| !v.is_empty())
            .map(str::to_string);

        outcome.findings.push(NormalizedFinding {
            tool: descriptor.tool.clone(),
            project: descriptor.project.clone(),
            file: normalize_result_path(file, descriptor.root.as_deref()),
            line,
            tool_rule: rule.to_string(),
            taxonomy_rule: None,
            severity,
        });
    }
    Ok(outcome)
}

/// Read a `tool, project, phase, seconds` timing file. A leading header
/// row is skipped when its seconds column is not numeric.
pub fn read_timing_file(path: &Path) -> Result<Vec<ExecutionRecord>> {
    let raw = std::fs::read_to_string(path).map_err(|source| Error::io(path, source))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(raw.as_bytes());

    let mut records = Vec::new();
    for (index, record) in reader.records().enumerate() {
        let row = index + 1;
        let record = record.map_err(|e| Error::Ingest {
            path: path.display().to_string(),
            message: format!("row {row}: {e}"),
        })?;
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        let (Some(tool), Some(project), Some(phase), Some(seconds)) = (
            record.get(0),
            record.get(1),
            record.get(2),
            record.get(3),
        ) else {
            return Err(Error::Ingest {
                path: path.display().to_string(),
                message: format!("row {row}: expected 4 columns (tool, project, phase, seconds)"),
            });
        };
        let parsed_seconds = seconds.parse::<f64>();
        if row == 1 && parsed_seconds.is_err() {
            continue; // header row
        }
        let seconds = parsed_seconds.map_err(|_| Error::Ingest {
            path: path.display().to_string(),
            message: format!("row {row}: seconds {seconds:?} is not a number"),
        })?;
        if !seconds.is_finite() || seconds < 0.0 {
            return Err(Error::Ingest {
                path: path.display().to_string(),
                message: format!("row {row}: seconds must be non-negative (got {seconds})"),
            });
        }
        let phase = phase.parse().map_err(|e: Error| Error::Ingest {
            path: path.display().to_string(),
            message: format!("row {row}: {e}"),
        })?;
        records.push(ExecutionRecord {
            tool: tool.to_string(),
            project: project.to_string(),
            phase,
            seconds,
        });
    }
    Ok(records)
}
