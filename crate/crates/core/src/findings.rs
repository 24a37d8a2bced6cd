//! The finding record, stable fingerprints, and config-driven filtering.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::frontend::is_test_path;
use crate::rules::RuleConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Severity {
    Low,
    Medium,
    High,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Confidence {
    Low,
    Medium,
    High,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Low => "Low",
            Severity::Medium => "Medium",
            Severity::High => "High",
        })
    }
}

impl FromStr for Severity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "low" => Ok(Severity::Low),
            "medium" | "med" => Ok(Severity::Medium),
            "high" => Ok(Severity::High),
            other => Err(format!("unknown severity {other:?}")),
        }
    }
}

impl fmt::Display for Confidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Confidence::Low => "Low",
            Confidence::Medium => "Medium",
            Confidence::High => "High",
        })
    }
}

impl Confidence {
    /// One step down; used when a callee resolved only through a dot
    /// import, where the package of origin is a guess.
    pub fn lowered(self) -> Confidence {
        match self {
            Confidence::High => Confidence::Medium,
            _ => Confidence::Low,
        }
    }
}

/// One detected misuse at a source location.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub rule_id: String,
    /// Root-relative path, forward slashes.
    pub file: String,
    /// 1-based.
    pub line: u32,
    /// 1-based; column precision is emitted but never used for matching.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub column: Option<u32>,
    pub severity: Severity,
    pub confidence: Confidence,
    pub message: String,
    /// One-line excerpt of the flagged source line.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub snippet: Option<String>,
    pub fingerprint: String,
}

impl Finding {
    /// Build a finding, deriving its fingerprint from the identity fields.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        rule_id: &str,
        file: &str,
        line: u32,
        column: Option<u32>,
        severity: Severity,
        confidence: Confidence,
        message: String,
        snippet: Option<String>,
    ) -> Finding {
        let fingerprint = fingerprint(rule_id, file, line, snippet.as_deref());
        Finding {
            rule_id: rule_id.to_string(),
            file: file.to_string(),
            line,
            column,
            severity,
            confidence,
            message,
            snippet,
            fingerprint,
        }
    }
}

/// Stable digest of (rule, file, line, normalized snippet). Column and
/// message wording are deliberately excluded so cross-run and cross-tool
/// diffs survive cosmetic changes.
pub fn fingerprint(rule_id: &str, file: &str, line: u32, snippet: Option<&str>) -> String {
    let normalized = snippet
        .map(|s| s.split_whitespace().collect::<Vec<_>>().join(" "))
        .unwrap_or_default();
    let mut hasher = Sha256::new();
    hasher.update(rule_id.as_bytes());
    hasher.update([0]);
    hasher.update(file.as_bytes());
    hasher.update([0]);
    hasher.update(line.to_string().as_bytes());
    hasher.update([0]);
    hasher.update(normalized.as_bytes());
    hex::encode(hasher.finalize())
}

/// Drop findings from disabled rules and, when configured, from test
/// files. Order is preserved; applying twice changes nothing.
pub fn filter_findings(findings: Vec<Finding>, config: &RuleConfig) -> Vec<Finding> {
    findings
        .into_iter()
        .filter(|f| config.enabled_rules.contains(&f.rule_id))
        .filter(|f| !(config.exclude_tests && is_test_path(&f.file)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(rule: &str, file: &str, line: u32) -> Finding {
        Finding::new(
            rule,
            file,
            line,
            Some(3),
            Severity::High,
            Confidence::High,
            "message".into(),
            Some("h := md5.New()".into()),
        )
    }

    #[test]
    fn fingerprint_is_stable_and_keyed_on_rule() {
        let a = fingerprint("01", "a.go", 7, Some("h := md5.New()"));
        let b = fingerprint("01", "a.go", 7, Some("h := md5.New()"));
        assert_eq!(a, b);
        let other_rule = fingerprint("02", "a.go", 7, Some("h := md5.New()"));
        assert_ne!(a, other_rule);
    }

    #[test]
    fn fingerprint_ignores_column_and_message() {
        let base = sample("01", "a.go", 7);
        let mut moved = base.clone();
        moved.column = Some(40);
        moved.message = "different wording".into();
        assert_eq!(
            base.fingerprint,
            fingerprint(&moved.rule_id, &moved.file, moved.line, moved.snippet.as_deref())
        );
    }

    #[test]
    fn fingerprint_normalizes_snippet_whitespace() {
        let a = fingerprint("01", "a.go", 7, Some("h :=   md5.New()"));
        let b = fingerprint("01", "a.go", 7, Some("  h := md5.New()  "));
        assert_eq!(a, b);
    }

    #[test]
    fn filtering_respects_rules_tests_and_is_idempotent() {
        let mut config = RuleConfig::default();
        config.enabled_rules.remove("02");
        let input = vec![
            sample("01", "a.go", 1),
            sample("02", "a.go", 2),
            sample("01", "a_test.go", 3),
            sample("01", "pkg/testdata/x.go", 4),
        ];
        let once = filter_findings(input.clone(), &config);
        assert_eq!(once.len(), 1);
        assert_eq!(once[0].line, 1);
        let twice = filter_findings(once.clone(), &config);
        assert_eq!(once, twice);

        let keep_tests = RuleConfig {
            exclude_tests: false,
            ..RuleConfig::default()
        };
        let kept = filter_findings(input, &keep_tests);
        assert_eq!(kept.len(), 4);
    }

    #[test]
    fn json_round_trip_preserves_fields() {
        let f = sample("11", "x/y.go", 42);
        let json = serde_json::to_string(&f).unwrap();
        let back: Finding = serde_json::from_str(&json).unwrap();
        assert_eq!(f, back);
        assert!(json.contains("\"rule_id\":\"11\""));
        assert!(json.contains("\"severity\":\"High\""));
    }

    #[test]
    fn optional_fields_are_omitted_when_absent() {
        let mut f = sample("01", "a.go", 1);
        f.column = None;
        f.snippet = None;
        let json = serde_json::to_string(&f).unwrap();
        assert!(!json.contains("column"));
        assert!(!json.contains("snippet"));
    }
}
