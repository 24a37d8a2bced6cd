//! Rule mappings: from each tool's own rule identifiers onto the shared
//! fourteen-rule taxonomy.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use crate::error::Error;
use crate::rules::rule_by_id;
use crate::Result;

use super::NormalizedFinding;

/// Many-to-one map from `(tool, tool rule)` to a taxonomy id.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RuleMapping {
    entries: BTreeMap<(String, String), String>,
}

/// Built-in rows: `(tool, tool rule, taxonomy id)`. The four surveyed
/// scanners' public identifiers, plus this tool's own ids mapped onto
/// themselves.
const BUILTIN: &[(&str, &str, &str)] = &[
    ("codeql", "go/insecure-randomness", "02"),
    ("codeql", "go/insufficient-key-size", "05"),
    ("codeql", "go/insecure-tls", "11"),
    ("codeql", "go/disabled-certificate-check", "11"),
    ("codeql", "go/insecure-hostkeycallback", "13"),
    ("codeql", "go/missing-jwt-signature-check", "14"),
    ("gopher", "insecure-algorithm", "01"),
    ("gopher", "insecure-prng", "02"),
    ("gopher", "deprecated-function", "03"),
    ("gopher", "constant-key", "04"),
    ("gopher", "short-key", "05"),
    ("gopher", "static-iv", "06"),
    ("gopher", "short-salt", "07"),
    ("gopher", "predictable-salt", "08"),
    ("gopher", "low-iterations", "09"),
    ("gopher", "http-protocol", "10"),
    ("gopher", "tls-version", "11"),
    ("gopher", "cert-validation", "11"),
    ("gopher", "insecure-ssh-suite", "12"),
    ("gopher", "host-key-validation", "13"),
    ("gosec", "G401", "01"),
    ("gosec", "G501", "01"),
    ("gosec", "G502", "01"),
    ("gosec", "G503", "01"),
    ("gosec", "G505", "01"),
    ("gosec", "G404", "02"),
    ("gosec", "G403", "05"),
    ("gosec", "G407", "06"),
    ("gosec", "G402", "11"),
    ("gosec", "G106", "13"),
    ("snyk", "InsecureHash", "01"),
    ("snyk", "InsecureCipher", "01"),
    ("snyk", "InsecureRandomness", "02"),
    ("snyk", "InsufficientRsaKeySize", "05"),
    ("snyk", "InsecureTLSConfig", "11"),
];

impl RuleMapping {
    pub fn empty() -> RuleMapping {
        RuleMapping::default()
    }

    /// The shipped defaults for the known tools.
    pub fn builtin() -> RuleMapping {
        let mut mapping = RuleMapping::default();
        for (tool, tool_rule, rule) in BUILTIN {
            mapping
                .insert(tool, tool_rule, rule)
                .expect("builtin rows target catalog ids");
        }
        for desc in crate::rules::rule_catalog() {
            mapping
                .insert("cryptovet", desc.id, desc.id)
                .expect("catalog ids map to themselves");
        }
        mapping
    }

    /// Add one row; the taxonomy id must exist in the catalog.
    pub fn insert(&mut self, tool: &str, tool_rule: &str, rule: &str) -> Result<()> {
        if rule_by_id(rule).is_none() {
            return Err(Error::Config(format!(
                "mapping targets unknown taxonomy rule {rule:?}"
            )));
        }
        self.entries
            .insert((tool.to_string(), tool_rule.to_string()), rule.to_string());
        Ok(())
    }

    /// Load `tool, tool_rule, taxonomy_rule` rows from a CSV file. A
    /// leading header row is skipped when its last column is not a rule id.
    pub fn from_csv_path(path: &Path) -> Result<RuleMapping> {
        let raw = std::fs::read_to_string(path).map_err(|source| Error::io(path, source))?;
        let mut mapping = RuleMapping::default();
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(raw.as_bytes());
        for (index, record) in reader.records().enumerate() {
            let row = index + 1;
            let record = record.map_err(|e| Error::Ingest {
                path: path.display().to_string(),
                message: format!("row {row}: {e}"),
            })?;
            if record.iter().all(|f| f.is_empty()) {
                continue;
            }
            let (Some(tool), Some(tool_rule), Some(rule)) =
                (record.get(0), record.get(1), record.get(2))
            else {
                return Err(Error::Ingest {
                    path: path.display().to_string(),
                    message: format!("row {row}: expected 3 columns (tool, tool_rule, taxonomy_rule)"),
                });
            };
            if row == 1 && rule_by_id(rule).is_none() {
                continue; // header row
            }
            mapping.insert(tool, tool_rule, rule).map_err(|_| Error::Ingest {
                path: path.display().to_string(),
                message: format!("row {row}: unknown taxonomy rule {rule:?}"),
            })?;
        }
        Ok(mapping)
    }

    /// Overlay `other`; its rows win on conflicts.
    pub fn merge_from(&mut self, other: RuleMapping) {
        self.entries.extend(other.entries);
    }

    pub fn lookup(&self, tool: &str, tool_rule: &str) -> Option<&str> {
        self.entries
            .get(&(tool.to_string(), tool_rule.to_string()))
            .map(String::as_str)
    }

    /// The taxonomy rules a tool has any mapping for — its support set.
    pub fn supported_rules(&self, tool: &str) -> BTreeSet<String> {
        self.entries
            .iter()
            .filter(|((t, _), _)| t == tool)
            .map(|(_, rule)| rule.clone())
            .collect()
    }

    /// Support sets for every tool in the mapping.
    pub fn support_by_tool(&self) -> BTreeMap<String, BTreeSet<String>> {
        let mut out: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        for ((tool, _), rule) in &self.entries {
            out.entry(tool.clone()).or_default().insert(rule.clone());
        }
        out
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Fill `taxonomy_rule` wherever the mapping knows the tool rule. Unmapped
/// findings are kept; the second value counts them.
pub fn apply_mapping(
    mut findings: Vec<NormalizedFinding>,
    mapping: &RuleMapping,
) -> (Vec<NormalizedFinding>, usize) {
    let mut unmapped = 0;
    for f in &mut findings {
        if f.taxonomy_rule.is_none() {
            f.taxonomy_rule = mapping.lookup(&f.tool, &f.tool_rule).map(str::to_string);
        }
        if f.taxonomy_rule.is_none() {
            unmapped += 1;
        }
    }
    (findings, unmapped)
}
