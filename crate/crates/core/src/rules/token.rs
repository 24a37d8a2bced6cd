//! Token Auth rule: JWTs accepted without signature verification (14).

use std::collections::BTreeSet;

use tree_sitter::Node;

use crate::findings::{Confidence, Finding};
use crate::frontend::parse::text;
use crate::frontend::resolve_qualified_call;

use super::{apis, push_finding, FileAnalysis, RuleDescriptor};

/// Rule 14: (a) explicit `ParseUnverified` calls; (b) claims of a parsed
/// token consumed while its `Valid` flag is never checked.
pub(super) fn jwt_verification(fa: &FileAnalysis<'_>, desc: &RuleDescriptor, out: &mut Vec<Finding>) {
    let jwt_imported = apis::JWT_PACKAGES
        .iter()
        .any(|p| fa.file.imports.has_path(p));
    if !jwt_imported {
        return;
    }
    let src = &fa.file.source;

    // (a) ParseUnverified is legitimate in tests that build fixtures, so
    // test files stay quiet even when they are scanned.
    if !fa.file.is_test {
        fa.each_call(|_, _, call, res| {
            let named_parse_unverified = res.method.as_deref() == Some("ParseUnverified")
                || apis::JWT_PACKAGES
                    .iter()
                    .any(|p| super::qualified_match(res, p, "ParseUnverified").is_some());
            if named_parse_unverified {
                let message =
                    String::from("JWT parsed without signature verification (ParseUnverified)");
                push_finding(out, desc, fa.file, call, Confidence::High, message);
            }
        });
    }

    // (b) per function: a token defined by Parse/ParseWithClaims whose
    // Claims are read while Valid is never consulted for that variable.
    for fun in &fa.functions {
        let mut parse_defs: Vec<(usize, String)> = Vec::new();
        let mut claims_reads: Vec<(usize, Node<'_>, String)> = Vec::new();
        let mut valid_read: BTreeSet<String> = BTreeSet::new();

        for idx in 0..fun.cfg.nodes.len() {
            fun.cfg.owned_walk(idx, &mut |n| match n.kind() {
                "call_expression" => {
                    let res = resolve_qualified_call(n, src, &fa.file.imports);
                    let is_parse = apis::JWT_PACKAGES.iter().any(|p| {
                        super::qualified_match(&res, p, "Parse").is_some()
                            || super::qualified_match(&res, p, "ParseWithClaims").is_some()
                    });
                    if is_parse {
                        // `token, err := jwt.Parse(...)` defines both names;
                        // keep every candidate and let the Claims read pick
                        // the one that is actually a token.
                        for var in fun.cfg.nodes[idx].defs.iter().filter(|v| *v != "_") {
                            parse_defs.push((idx, var.clone()));
                        }
                    }
                }
                "selector_expression" => {
                    let (Some(operand), Some(field)) = (
                        n.child_by_field_name("operand"),
                        n.child_by_field_name("field"),
                    ) else {
                        return;
                    };
                    if operand.kind() != "identifier" {
                        return;
                    }
                    let var = text(operand, src).to_string();
                    match text(field, src) {
                        "Claims" => claims_reads.push((idx, n, var)),
                        "Valid" => {
                            valid_read.insert(var);
                        }
                        _ => {}
                    }
                }
                _ => {}
            });
        }

        for (parse_idx, token_var) in &parse_defs {
            if valid_read.contains(token_var) {
                continue;
            }
            let hit = claims_reads.iter().find(|(use_idx, _, var)| {
                var == token_var
                    && fun
                        .cfg
                        .defs_reaching(*use_idx, token_var)
                        .any(|link| link.def == *parse_idx)
            });
            if let Some((_, node, _)) = hit {
                let message = format!(
                    "claims of {token_var} are used but {token_var}.Valid is never checked"
                );
                push_finding(out, desc, fa.file, *node, Confidence::Low, message);
            }
        }
    }
}
