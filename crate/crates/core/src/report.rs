//! Finding serialization: plain text, JSON, and SARIF 2.1.0.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::findings::{Finding, Severity};
use crate::rules::{rule_catalog, RuleDescriptor};

/// Output format of the `scan` command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    Json,
    Sarif,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "text" => Ok(ReportFormat::Text),
            "json" => Ok(ReportFormat::Json),
            "sarif" => Ok(ReportFormat::Sarif),
            other => Err(Error::Config(format!(
                "unknown output format {other:?} (expected text, json, or sarif)"
            ))),
        }
    }
}

impl fmt::Display for ReportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReportFormat::Text => "text",
            ReportFormat::Json => "json",
            ReportFormat::Sarif => "sarif",
        })
    }
}

/// Render findings in the chosen format. The result always ends with a
/// newline unless it is empty.
pub fn render(findings: &[Finding], format: ReportFormat) -> crate::Result<String> {
    match format {
        ReportFormat::Text => Ok(render_text(findings)),
        ReportFormat::Json => {
            let mut body = serde_json::to_string_pretty(findings)
                .map_err(|e| Error::Internal(format!("JSON serialization failed: {e}")))?;
            body.push('\n');
            Ok(body)
        }
        ReportFormat::Sarif => {
            let mut body = serde_json::to_string_pretty(&sarif_document(findings))
                .map_err(|e| Error::Internal(format!("SARIF serialization failed: {e}")))?;
            body.push('\n');
            Ok(body)
        }
    }
}

fn render_text(findings: &[Finding]) -> String {
    let mut out = String::new();
    for f in findings {
        let column = f.column.unwrap_or(0);
        out.push_str(&format!(
            "{}:{}:{} rule-{} {} {}\n",
            f.file, f.line, column, f.rule_id, f.severity, f.message
        ));
    }
    out
}

// --- SARIF 2.1.0 ---

pub const SARIF_VERSION: &str = "2.1.0";
const SARIF_SCHEMA: &str = "https://json.schemastore.org/sarif-2.1.0.json";

#[derive(Debug, Serialize, Deserialize)]
pub struct SarifLog {
    #[serde(rename = "$schema")]
    pub schema: String,
    pub version: String,
    pub runs: Vec<SarifRun>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SarifRun {
    pub tool: SarifTool,
    pub results: Vec<SarifResult>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SarifTool {
    pub driver: SarifDriver,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SarifDriver {
    pub name: String,
    pub version: String,
    pub information_uri: String,
    pub rules: Vec<SarifRule>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SarifRule {
    pub id: String,
    pub name: String,
    pub short_description: SarifText,
    pub default_configuration: SarifConfiguration,
    pub properties: SarifRuleProperties,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SarifText {
    pub text: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SarifConfiguration {
    pub level: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SarifRuleProperties {
    pub category: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub advisory: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SarifResult {
    pub rule_id: String,
    pub rule_index: usize,
    pub level: String,
    pub message: SarifText,
    pub locations: Vec<SarifLocation>,
    pub partial_fingerprints: SarifFingerprints,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SarifLocation {
    pub physical_location: SarifPhysicalLocation,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SarifPhysicalLocation {
    pub artifact_location: SarifArtifactLocation,
    pub region: SarifRegion,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SarifArtifactLocation {
    pub uri: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SarifRegion {
    pub start_line: u32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub start_column: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub snippet: Option<SarifText>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SarifFingerprints {
    pub primary: String,
}

fn sarif_level(severity: Severity) -> &'static str {
    match severity {
        Severity::High => "error",
        Severity::Medium => "warning",
        Severity::Low => "note",
    }
}

/// SARIF rule names are PascalCase identifiers derived from the title.
fn sarif_rule_name(desc: &RuleDescriptor) -> String {
    desc.title
        .split(|c: char| !c.is_ascii_alphanumeric())
        .filter(|w| !w.is_empty())
        .map(|w| {
            let mut chars = w.chars();
            match chars.next() {
                Some(first) => first.to_ascii_uppercase().to_string() + chars.as_str(),
                None => String::new(),
            }
        })
        .collect()
}

/// Build the complete SARIF log: one run, the full rule catalog on the
/// driver, one result per finding.
pub fn sarif_document(findings: &[Finding]) -> SarifLog {
    let catalog = rule_catalog();
    let rules: Vec<SarifRule> = catalog
        .iter()
        .map(|desc| SarifRule {
            id: desc.id.to_string(),
            name: sarif_rule_name(desc),
            short_description: SarifText {
                text: desc.title.to_string(),
            },
            default_configuration: SarifConfiguration {
                level: sarif_level(desc.severity).to_string(),
            },
            properties: SarifRuleProperties {
                category: desc.category.to_string(),
                advisory: desc.advisory.map(str::to_string),
            },
        })
        .collect();

    let results: Vec<SarifResult> = findings
        .iter()
        .map(|f| SarifResult {
            rule_id: f.rule_id.clone(),
            rule_index: catalog
                .iter()
                .position(|d| d.id == f.rule_id)
                .unwrap_or(usize::MAX),
            level: sarif_level(f.severity).to_string(),
            message: SarifText {
                text: f.message.clone(),
            },
            locations: vec![SarifLocation {
                physical_location: SarifPhysicalLocation {
                    artifact_location: SarifArtifactLocation {
                        uri: f.file.clone(),
                    },
                    region: SarifRegion {
                        start_line: f.line,
                        start_column: f.column,
                        snippet: f.snippet.clone().map(|text| SarifText { text }),
                    },
                },
            }],
            partial_fingerprints: SarifFingerprints {
                primary: f.fingerprint.clone(),
            },
        })
        .collect();

    SarifLog {
        schema: SARIF_SCHEMA.to_string(),
        version: SARIF_VERSION.to_string(),
        runs: vec![SarifRun {
            tool: SarifTool {
                driver: SarifDriver {
                    name: env!("CARGO_PKG_NAME").to_string(),
                    version: env!("CARGO_PKG_VERSION").to_string(),
                    information_uri: env!("CARGO_PKG_REPOSITORY").to_string(),
                    rules,
                },
            },
            results,
        }],
    }
}

#[cfg(test)]
mod tests {
    use crate::findings::Confidence;

    use super::*;

    fn sample() -> Vec<Finding> {
        vec![
            Finding::new(
                "01",
                "a.go",
                3,
                Some(9),
                Severity::High,
                Confidence::High,
                "call to crypto/md5.New: MD5 is a broken hash algorithm".to_string(),
                Some("md5.New()".to_string()),
            ),
            Finding::new(
                "07",
                "b.go",
                12,
                Some(20),
                Severity::Low,
                Confidence::Medium,
                "salt is 8 bytes".to_string(),
                None,
            ),
        ]
    }

    #[test]
    fn text_line_shape() {
        let out = render(&sample(), ReportFormat::Text).unwrap();
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(
            lines[0],
            "a.go:3:9 rule-01 High call to crypto/md5.New: MD5 is a broken hash algorithm"
        );
        assert_eq!(lines[1], "b.go:12:20 rule-07 Low salt is 8 bytes");
    }

    #[test]
    fn empty_json_is_empty_array() {
        let out = render(&[], ReportFormat::Json).unwrap();
        assert_eq!(out.trim(), "[]");
    }

    #[test]
    fn json_round_trips() {
        let out = render(&sample(), ReportFormat::Json).unwrap();
        let back: Vec<Finding> = serde_json::from_str(&out).unwrap();
        assert_eq!(back, sample());
    }

    #[test]
    fn sarif_structure() {
        let findings = sample();
        let log = sarif_document(&findings);
        assert_eq!(log.version, "2.1.0");
        assert_eq!(log.runs.len(), 1);
        let run = &log.runs[0];
        assert_eq!(run.tool.driver.rules.len(), 14);
        assert_eq!(run.results.len(), findings.len());
        assert_eq!(run.results[0].level, "error");
        assert_eq!(run.results[1].level, "note");
        // ruleIndex points into the embedded catalog.
        for result in &run.results {
            assert_eq!(
                run.tool.driver.rules[result.rule_index].id,
                result.rule_id
            );
        }
    }

    #[test]
    fn sarif_levels_cover_all_severities() {
        assert_eq!(sarif_level(Severity::High), "error");
        assert_eq!(sarif_level(Severity::Medium), "warning");
        assert_eq!(sarif_level(Severity::Low), "note");
    }

    #[test]
    fn sarif_serializes_with_camel_case_keys() {
        let out = render(&sample(), ReportFormat::Sarif).unwrap();
        let value: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(value["version"], "2.1.0");
        let result = &value["runs"][0]["results"][0];
        assert!(result["ruleId"].is_string());
        assert!(result["ruleIndex"].is_number());
        let region = &result["locations"][0]["physicalLocation"]["region"];
        assert_eq!(region["startLine"], 3);
        assert_eq!(region["startColumn"], 9);
    }

    #[test]
    fn unknown_format_is_a_config_error() {
        let err = "yaml".parse::<ReportFormat>().unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }
}
