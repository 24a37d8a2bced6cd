//! The rule catalog and the detectors behind it.
//!
//! A rule is identified by a zero-padded two-digit id ("01".."14"). The
//! catalog carries the stable metadata (category, title, severity, example
//! advisory); each detector inspects one misuse class over a prepared
//! [`AnalysisContext`] — per-file CFGs, constant facts, and constant-return
//! summaries — and emits [`Finding`]s. `run_all` applies rule selection,
//! sorts, and deduplicates.

mod apis;
mod kdf;
mod keys;
mod primitives;
mod ssh;
mod token;
mod transport;

use std::collections::BTreeSet;

use tree_sitter::Node;

use crate::dataflow::{
    build_cfg, eval_constants, eval_package_level, linear_cfg, CfgFunction, ConstMap,
    FnConstReturns, Slot,
};
use crate::error::{Error, Result};
use crate::findings::{Confidence, Finding, Severity};
use crate::frontend::parse::{named_children, pos, preorder, text};
use crate::frontend::{
    resolve_qualified_call, CalleeResolution, ProjectModel, QualifiedCallee, SourceFile,
};

/// Stable metadata for one misuse class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RuleDescriptor {
    /// Zero-padded two-digit id, "01".."14".
    pub id: &'static str,
    pub category: &'static str,
    pub title: &'static str,
    pub severity: Severity,
    /// A published advisory illustrating the class, where one exists.
    pub advisory: Option<&'static str>,
}

/// The fourteen misuse classes, in id order.
pub fn rule_catalog() -> &'static [RuleDescriptor] {
    use Severity::{High, Low, Medium};
    const CATALOG: &[RuleDescriptor] = &[
        RuleDescriptor {
            id: "01",
            category: "Cryptographic Primitives",
            title: "Insecure algorithms",
            severity: High,
            advisory: Some("CVE-2024-55885"),
        },
        RuleDescriptor {
            id: "02",
            category: "Cryptographic Primitives",
            title: "Crypto insecure PRNG",
            severity: Medium,
            advisory: Some("CVE-2024-21495"),
        },
        RuleDescriptor {
            id: "03",
            category: "Cryptographic Primitives",
            title: "Deprecated Go function",
            severity: Low,
            advisory: None,
        },
        RuleDescriptor {
            id: "04",
            category: "Key Management",
            title: "Constant/predictable key",
            severity: High,
            advisory: Some("CVE-2020-1764"),
        },
        RuleDescriptor {
            id: "05",
            category: "Key Management",
            title: "Short key length",
            severity: Low,
            advisory: Some("CVE-2023-47640"),
        },
        RuleDescriptor {
            id: "06",
            category: "Key Management",
            title: "Static or predictable IV",
            severity: Medium,
            advisory: Some("CVE-2024-41260"),
        },
        RuleDescriptor {
            id: "07",
            category: "Password-based KDF",
            title: "Short salt length",
            severity: Low,
            advisory: None,
        },
        RuleDescriptor {
            id: "08",
            category: "Password-based KDF",
            title: "Predictable salt",
            severity: Low,
            advisory: None,
        },
        RuleDescriptor {
            id: "09",
            category: "Password-based KDF",
            title: "Low hash iterations",
            severity: Low,
            advisory: Some("CVE-2023-46233"),
        },
        RuleDescriptor {
            id: "10",
            category: "Transport Security",
            title: "HTTP protocol",
            severity: High,
            advisory: Some("CVE-2024-1968"),
        },
        RuleDescriptor {
            id: "11",
            category: "Transport Security",
            title: "TLS/SSL Issues",
            severity: High,
            advisory: Some("CVE-2024-23656"),
        },
        RuleDescriptor {
            id: "12",
            category: "Secure Shell",
            title: "Insecure SSH suite",
            severity: High,
            advisory: Some("CVE-2021-32026"),
        },
        RuleDescriptor {
            id: "13",
            category: "Secure Shell",
            title: "No host key validation",
            severity: High,
            advisory: Some("CVE-2024-41264"),
        },
        RuleDescriptor {
            id: "14",
            category: "Token Auth",
            title: "No JWT verification",
            severity: High,
            advisory: Some("CVE-2024-51744"),
        },
    ];
    CATALOG
}

/// Look up one catalog entry.
pub fn rule_by_id(id: &str) -> Option<&'static RuleDescriptor> {
    rule_catalog().iter().find(|d| d.id == id)
}

/// Which rules run and with what thresholds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleConfig {
    /// Ids of the rules to run. Defaults to the whole catalog.
    pub enabled_rules: BTreeSet<String>,
    /// RSA moduli below this many bits are short (rule 05).
    pub min_rsa_bits: i64,
    /// HMAC keys below this many bytes are short (rule 05).
    pub min_hmac_key_bytes: i64,
    /// KDF salts below this many bytes are short (rule 07).
    pub min_salt_bytes: i64,
    /// PBKDF2 iteration counts below this are low (rule 09).
    pub min_pbkdf2_iters: i64,
    /// bcrypt costs below this are low (rule 09).
    pub min_bcrypt_cost: i64,
    /// TLS protocol versions below this constant are outdated (rule 11).
    /// The default 771 is the wire value of TLS 1.2.
    pub min_tls_version: i64,
    /// Skip `_test.go` files and `testdata/` trees.
    pub exclude_tests: bool,
}

impl Default for RuleConfig {
    fn default() -> Self {
        RuleConfig {
            enabled_rules: rule_catalog().iter().map(|d| d.id.to_string()).collect(),
            min_rsa_bits: 2048,
            min_hmac_key_bytes: 16,
            min_salt_bytes: 16,
            min_pbkdf2_iters: 10_000,
            min_bcrypt_cost: 10,
            min_tls_version: 771,
            exclude_tests: true,
        }
    }
}

impl RuleConfig {
    /// Reject unknown rule ids and non-positive thresholds.
    pub fn validate(&self) -> Result<()> {
        let thresholds = [
            ("min_rsa_bits", self.min_rsa_bits),
            ("min_hmac_key_bytes", self.min_hmac_key_bytes),
            ("min_salt_bytes", self.min_salt_bytes),
            ("min_pbkdf2_iters", self.min_pbkdf2_iters),
            ("min_bcrypt_cost", self.min_bcrypt_cost),
            ("min_tls_version", self.min_tls_version),
        ];
        for (name, value) in thresholds {
            if value <= 0 {
                return Err(Error::Config(format!(
                    "{name} must be positive (got {value})"
                )));
            }
        }
        for id in &self.enabled_rules {
            if rule_by_id(id).is_none() {
                return Err(Error::Config(format!("unknown rule id {id:?}")));
            }
        }
        Ok(())
    }
}

/// One function (or the package-level initializer pseudo-function) with its
/// CFG and constant facts.
pub struct FunctionAnalysis<'p> {
    /// The declaration node; `None` for the package-level initializer.
    pub decl: Option<Node<'p>>,
    pub cfg: CfgFunction<'p>,
    pub consts: ConstMap,
}

/// Everything the detectors need about one source file.
pub struct FileAnalysis<'p> {
    pub file: &'p SourceFile,
    pub functions: Vec<FunctionAnalysis<'p>>,
    /// Package-level constant facts, by variable name.
    pub globals: std::collections::BTreeMap<String, Slot>,
    /// Same-file functions proven to return one constant value.
    pub fn_returns: FnConstReturns,
}

/// A prepared project: one [`FileAnalysis`] per analyzable file.
pub struct AnalysisContext<'p> {
    pub project: &'p ProjectModel,
    pub config: RuleConfig,
    pub files: Vec<FileAnalysis<'p>>,
}

impl<'p> AnalysisContext<'p> {
    /// Build CFGs, constant facts, and return summaries for every
    /// analyzable file in the project.
    pub fn build(project: &'p ProjectModel, config: RuleConfig) -> AnalysisContext<'p> {
        let files = project
            .files
            .iter()
            .filter(|f| f.analyzable() && !(config.exclude_tests && f.is_test))
            .map(analyze_file)
            .collect();
        AnalysisContext {
            project,
            config,
            files,
        }
    }
}

fn analyze_file(file: &SourceFile) -> FileAnalysis<'_> {
    let src = &file.source;
    let root = file.root_node();

    // Package-level var/const specs, in source order.
    let mut specs = Vec::new();
    for decl in named_children(root) {
        if matches!(decl.kind(), "var_declaration" | "const_declaration") {
            collect_specs(decl, &mut specs);
        }
    }

    // Every function-shaped declaration, in source order. Literals get
    // their own entries; their owning CFGs do not descend into them.
    let mut decls = Vec::new();
    preorder(root, &|_| true, &mut |n| {
        if matches!(
            n.kind(),
            "function_declaration" | "method_declaration" | "func_literal"
        ) {
            decls.push(n);
        }
    });

    let no_returns = FnConstReturns::new();
    let globals = eval_package_level(&specs, src, &file.imports, &no_returns);

    // First pass: which named functions provably return one constant?
    let mut fn_returns = FnConstReturns::new();
    for &decl in &decls {
        if decl.kind() != "function_declaration" {
            continue;
        }
        let cfg = build_cfg(decl, src, &file.path);
        let consts = eval_constants(&cfg, src, &file.imports, &globals, &no_returns);
        if let Some(slot) = crate::dataflow::constant_return(&cfg, &consts) {
            fn_returns.insert(cfg.name.clone(), slot);
        }
    }

    // Second pass: final constant facts for every function, with the
    // return summaries available to callers.
    let mut functions = Vec::new();
    if !specs.is_empty() {
        let cfg = linear_cfg(&file.path, "<package scope>", &specs, src);
        let empty = std::collections::BTreeMap::new();
        let consts = eval_constants(&cfg, src, &file.imports, &empty, &fn_returns);
        functions.push(FunctionAnalysis {
            decl: None,
            cfg,
            consts,
        });
    }
    for decl in decls {
        let cfg = build_cfg(decl, src, &file.path);
        let consts = eval_constants(&cfg, src, &file.imports, &globals, &fn_returns);
        functions.push(FunctionAnalysis {
            decl: Some(decl),
            cfg,
            consts,
        });
    }

    FileAnalysis {
        file,
        functions,
        globals,
        fn_returns,
    }
}

fn collect_specs<'t>(decl: Node<'t>, out: &mut Vec<Node<'t>>) {
    for child in named_children(decl) {
        match child.kind() {
            "var_spec" | "const_spec" => out.push(child),
            "var_spec_list" | "const_spec_list" => collect_specs(child, out),
            _ => {}
        }
    }
}

impl<'p> FileAnalysis<'p> {
    /// Visit every call expression in every function, with its resolution.
    pub fn each_call(
        &self,
        mut visit: impl FnMut(&FunctionAnalysis<'p>, usize, Node<'p>, &CalleeResolution),
    ) {
        let src = &self.file.source;
        for fun in &self.functions {
            for idx in 0..fun.cfg.nodes.len() {
                fun.cfg.owned_walk(idx, &mut |n| {
                    if n.kind() == "call_expression" {
                        let res = resolve_qualified_call(n, src, &self.file.imports);
                        visit(fun, idx, n, &res);
                    }
                });
            }
        }
    }

    /// The analysis of a same-file named function, by name.
    pub fn named_function(&self, name: &str) -> Option<&FunctionAnalysis<'p>> {
        self.functions.iter().find(|f| {
            f.decl.is_some_and(|d| d.kind() == "function_declaration") && f.cfg.name == name
        })
    }
}

/// The qualified resolution matching `package`.`member`, if any. `member`
/// matches either the full chain or its leaf.
pub(crate) fn qualified_match<'r>(
    res: &'r CalleeResolution,
    package: &str,
    member: &str,
) -> Option<&'r QualifiedCallee> {
    res.qualified
        .iter()
        .find(|q| q.package == package && (q.member == member || q.leaf() == member))
}

/// Positional arguments of a call expression.
pub(crate) fn call_args<'t>(call: Node<'t>) -> Vec<Node<'t>> {
    call.child_by_field_name("arguments")
        .map(named_children)
        .unwrap_or_default()
}

/// `(key, value)` pairs of a composite literal's keyed elements, unwrapped
/// to the underlying expressions.
pub(crate) fn keyed_elements<'t>(composite: Node<'t>) -> Vec<(Node<'t>, Node<'t>)> {
    let Some(body) = composite.child_by_field_name("body") else {
        return Vec::new();
    };
    named_children(body)
        .into_iter()
        .filter(|el| el.kind() == "keyed_element")
        .filter_map(|el| {
            let key = el.child_by_field_name("key")?;
            let value = el.child_by_field_name("value")?;
            Some((unwrap_literal_element(key), unwrap_literal_element(value)))
        })
        .collect()
}

/// Unkeyed element expressions of a composite literal.
pub(crate) fn plain_elements<'t>(composite: Node<'t>) -> Vec<Node<'t>> {
    let Some(body) = composite.child_by_field_name("body") else {
        return Vec::new();
    };
    named_children(body)
        .into_iter()
        .filter(|el| el.kind() == "literal_element")
        .map(unwrap_literal_element)
        .collect()
}

fn unwrap_literal_element(node: Node<'_>) -> Node<'_> {
    if node.kind() == "literal_element" {
        node.named_child(0).unwrap_or(node)
    } else {
        node
    }
}

/// Does this composite literal name the type `package`.`name`?
pub(crate) fn composite_type_is(
    composite: Node<'_>,
    src: &str,
    imports: &crate::frontend::ImportTable,
    package: &str,
    name: &str,
) -> bool {
    let Some(ty) = composite.child_by_field_name("type") else {
        return false;
    };
    let ty = if ty.kind() == "pointer_type" {
        match named_children(ty).into_iter().next() {
            Some(inner) => inner,
            None => return false,
        }
    } else {
        ty
    };
    if ty.kind() != "qualified_type" {
        return false;
    }
    let (Some(pkg), Some(ty_name)) = (
        ty.child_by_field_name("package"),
        ty.child_by_field_name("name"),
    ) else {
        return false;
    };
    text(ty_name, src) == name && imports.resolve(text(pkg, src)) == Some(package)
}

/// `lhs = rhs` pairs of an assignment statement, index-aligned.
pub(crate) fn assignment_pairs<'t>(stmt: Node<'t>) -> Vec<(Node<'t>, Node<'t>)> {
    if stmt.kind() != "assignment_statement" {
        return Vec::new();
    }
    let (Some(left), Some(right)) = (
        stmt.child_by_field_name("left"),
        stmt.child_by_field_name("right"),
    ) else {
        return Vec::new();
    };
    named_children(left)
        .into_iter()
        .zip(named_children(right))
        .collect()
}

/// Append a finding anchored at `node`, with the trimmed source line as the
/// snippet.
pub(crate) fn push_finding(
    out: &mut Vec<Finding>,
    desc: &RuleDescriptor,
    file: &SourceFile,
    node: Node<'_>,
    confidence: Confidence,
    message: String,
) {
    let (line, column) = pos(node);
    let snippet = file
        .source
        .lines()
        .nth(line as usize - 1)
        .map(|l| l.trim().to_string())
        .filter(|l| !l.is_empty());
    out.push(Finding::new(
        desc.id,
        &file.path,
        line,
        Some(column),
        desc.severity,
        confidence,
        message,
        snippet,
    ));
}

/// Lower `base` one step when the only route to the API was a dot import.
pub(crate) fn adjust_for_dot(base: Confidence, callee: &QualifiedCallee) -> Confidence {
    if callee.via_dot {
        base.lowered()
    } else {
        base
    }
}

/// Run one rule over the prepared context.
pub fn detect(rule_id: &str, ctx: &AnalysisContext<'_>) -> Vec<Finding> {
    let Some(desc) = rule_by_id(rule_id) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for fa in &ctx.files {
        match rule_id {
            "01" => primitives::insecure_algorithms(fa, desc, &mut out),
            "02" => primitives::insecure_prng(fa, desc, &mut out),
            "03" => primitives::deprecated_functions(fa, desc, &mut out),
            "04" => keys::predictable_keys(fa, desc, &mut out),
            "05" => keys::short_keys(fa, desc, &ctx.config, &mut out),
            "06" => keys::static_ivs(fa, desc, &mut out),
            "07" => kdf::short_salts(fa, desc, &ctx.config, &mut out),
            "08" => kdf::predictable_salts(fa, desc, &mut out),
            "09" => kdf::low_iterations(fa, desc, &ctx.config, &mut out),
            "10" => transport::plain_http(fa, desc, &mut out),
            "11" => transport::tls_issues(fa, desc, &ctx.config, &mut out),
            "12" => ssh::insecure_ssh_ciphers(fa, desc, &mut out),
            "13" => ssh::host_key_validation(fa, desc, &mut out),
            "14" => token::jwt_verification(fa, desc, &mut out),
            _ => unreachable!("catalog ids are exhaustive"),
        }
    }
    out
}

/// Run every enabled rule, sort by `(file, line, rule id)`, and collapse
/// duplicates at one location to the highest-confidence finding.
pub fn run_all(ctx: &AnalysisContext<'_>) -> Vec<Finding> {
    let mut findings = Vec::new();
    for desc in rule_catalog() {
        if ctx.config.enabled_rules.contains(desc.id) {
            findings.extend(detect(desc.id, ctx));
        }
    }
    findings.sort_by(|a, b| {
        (&a.file, a.line, &a.rule_id, std::cmp::Reverse(a.confidence))
            .cmp(&(&b.file, b.line, &b.rule_id, std::cmp::Reverse(b.confidence)))
            .then_with(|| a.column.cmp(&b.column))
            .then_with(|| a.message.cmp(&b.message))
    });
    findings.dedup_by(|next, kept| {
        next.file == kept.file && next.line == kept.line && next.rule_id == kept.rule_id
    });
    findings
}

#[cfg(test)]
mod tests;
