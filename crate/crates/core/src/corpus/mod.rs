//! Seeded benchmark corpus: a minimal Go program per misuse variant, each
//! with a ground-truth manifest, plus scoring of scanner output against
//! that ground truth.

mod cases;

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::Serialize;

use crate::error::Error;
use crate::findings::Finding;
use crate::Result;

/// Whether a case seeds a misuse or demonstrates the corrected usage of
/// the same APIs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseVariant {
    Positive,
    CleanTwin,
}

/// One finding a correct scanner must produce for a case.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExpectedFinding {
    /// Corpus-root-relative path, forward slashes.
    pub file: String,
    /// 1-based.
    pub line: u32,
    #[serde(skip)]
    pub rule_id: String,
}

/// One generated benchmark program and its ground truth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusCase {
    /// Directory name under the corpus root.
    pub name: String,
    pub rule_id: String,
    pub variant: CaseVariant,
    /// (corpus-root-relative path, contents).
    pub files: Vec<(String, String)>,
    /// Empty for clean twins.
    pub expected: Vec<ExpectedFinding>,
}

#[derive(Serialize)]
struct Manifest<'a> {
    rule_id: &'a str,
    variant: CaseVariant,
    expected: &'a [ExpectedFinding],
}

/// Build every case in memory. Expected lines are located by searching the
/// source for a per-expectation marker substring, so they cannot drift
/// from the emitted text.
pub fn all_cases() -> Result<Vec<CorpusCase>> {
    cases::templates()
        .into_iter()
        .map(|t| {
            let path = format!("{}/main.go", t.name);
            let mut expected = Vec::new();
            for needle in t.needles {
                let line = t
                    .source
                    .lines()
                    .position(|l| l.contains(needle))
                    .ok_or_else(|| {
                        Error::Internal(format!(
                            "corpus case {}: marker {needle:?} not present in source",
                            t.name
                        ))
                    })?;
                expected.push(ExpectedFinding {
                    file: path.clone(),
                    line: line as u32 + 1,
                    rule_id: t.rule_id.to_string(),
                });
            }
            let broken = match t.variant {
                CaseVariant::Positive => expected.is_empty(),
                CaseVariant::CleanTwin => !expected.is_empty(),
            };
            if broken {
                return Err(Error::Internal(format!(
                    "corpus case {}: expectation count contradicts its variant",
                    t.name
                )));
            }
            Ok(CorpusCase {
                name: t.name.to_string(),
                rule_id: t.rule_id.to_string(),
                variant: t.variant,
                files: vec![(path, t.source.to_string())],
                expected,
            })
        })
        .collect()
}

/// Write the cases for `rules` under `out_dir`: each case gets its own
/// directory holding its Go files and a `manifest.json` with the ground
/// truth. Returns the cases written.
pub fn generate_corpus(rules: &BTreeSet<String>, out_dir: &Path) -> Result<Vec<CorpusCase>> {
    let cases: Vec<CorpusCase> = all_cases()?
        .into_iter()
        .filter(|c| rules.contains(&c.rule_id))
        .collect();
    for case in &cases {
        let case_dir = out_dir.join(&case.name);
        std::fs::create_dir_all(&case_dir).map_err(|e| Error::io(&case_dir, e))?;
        for (rel, contents) in &case.files {
            let path = out_dir.join(rel);
            std::fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
        }
        let manifest = Manifest {
            rule_id: &case.rule_id,
            variant: case.variant,
            expected: &case.expected,
        };
        let path = case_dir.join("manifest.json");
        let mut body = serde_json::to_string_pretty(&manifest)
            .map_err(|e| Error::Internal(format!("manifest serialization: {e}")))?;
        body.push('\n');
        std::fs::write(&path, body).map_err(|e| Error::io(&path, e))?;
    }
    Ok(cases)
}

/// Detection tallies for one rule.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct RuleScore {
    pub true_positives: u64,
    pub false_negatives: u64,
    pub false_positives: u64,
}

impl RuleScore {
    fn ratio(hit: u64, total: u64) -> f64 {
        if total == 0 {
            1.0 // nothing to find and nothing found: vacuously perfect
        } else {
            hit as f64 / total as f64
        }
    }

    pub fn recall(&self) -> f64 {
        Self::ratio(self.true_positives, self.true_positives + self.false_negatives)
    }

    pub fn precision(&self) -> f64 {
        Self::ratio(self.true_positives, self.true_positives + self.false_positives)
    }
}

/// Scanner output scored against corpus ground truth.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoreReport {
    pub per_rule: BTreeMap<String, RuleScore>,
    pub overall: RuleScore,
}

impl ScoreReport {
    pub fn recall(&self) -> f64 {
        self.overall.recall()
    }

    pub fn precision(&self) -> f64 {
        self.overall.precision()
    }

    /// Every seeded misuse found and nothing else flagged.
    pub fn perfect(&self) -> bool {
        self.overall.false_negatives == 0 && self.overall.false_positives == 0
    }
}

/// Score findings against the cases' ground truth. A finding matches an
/// expectation iff (file, line, rule) are equal; unmatched findings are
/// false positives, unmatched expectations false negatives.
pub fn evaluate(findings: &[Finding], cases: &[CorpusCase]) -> ScoreReport {
    let mut remaining: BTreeSet<(&str, u32, &str)> = BTreeSet::new();
    let mut per_rule: BTreeMap<String, RuleScore> = BTreeMap::new();
    for case in cases {
        per_rule.entry(case.rule_id.clone()).or_default();
        for exp in &case.expected {
            remaining.insert((exp.file.as_str(), exp.line, exp.rule_id.as_str()));
        }
    }

    for f in findings {
        let key = (f.file.as_str(), f.line, f.rule_id.as_str());
        if remaining.remove(&key) {
            per_rule.entry(f.rule_id.clone()).or_default().true_positives += 1;
        } else {
            per_rule.entry(f.rule_id.clone()).or_default().false_positives += 1;
        }
    }
    for (_, _, rule) in remaining {
        per_rule.entry(rule.to_string()).or_default().false_negatives += 1;
    }

    let mut overall = RuleScore::default();
    for score in per_rule.values() {
        overall.true_positives += score.true_positives;
        overall.false_negatives += score.false_negatives;
        overall.false_positives += score.false_positives;
    }
    ScoreReport { per_rule, overall }
}

/// Aligned plain-text score table, one row per rule plus an overall row.
pub fn render_score_text(report: &ScoreReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<4}  {:>4} {:>4} {:>4}  {:>7} {:>9}\n",
        "ID", "TP", "FN", "FP", "Recall", "Precision"
    ));
    let mut rows: Vec<(&str, &RuleScore)> = report
        .per_rule
        .iter()
        .map(|(id, s)| (id.as_str(), s))
        .collect();
    rows.push(("all", &report.overall));
    for (id, s) in rows {
        out.push_str(&format!(
            "{id:<4}  {:>4} {:>4} {:>4}  {:>7.3} {:>9.3}\n",
            s.true_positives,
            s.false_negatives,
            s.false_positives,
            s.recall(),
            s.precision()
        ));
    }
    out
}
