//! Secure Shell rules: insecure cipher suites (12) and missing host key
//! validation (13).

use tree_sitter::Node;

use crate::dataflow::{summarize_returns, AbstractValue};
use crate::findings::{Confidence, Finding};
use crate::frontend::parse::text;

use super::{
    adjust_for_dot, apis, assignment_pairs, keyed_elements, plain_elements, push_finding,
    qualified_match, FileAnalysis, FunctionAnalysis, RuleDescriptor,
};

const SSH_PACKAGE: &str = "golang.org/x/crypto/ssh";

/// Rule 12: CBC-mode or RC4 ciphers enabled in an SSH `Ciphers` list.
pub(super) fn insecure_ssh_ciphers(
    fa: &FileAnalysis<'_>,
    desc: &RuleDescriptor,
    out: &mut Vec<Finding>,
) {
    if !fa.file.imports.has_path(SSH_PACKAGE) {
        return;
    }
    for_each_field_binding(fa, "Ciphers", &mut |fun, _anchor, value| {
        if value.kind() != "composite_literal" {
            return;
        }
        for element in plain_elements(value) {
            if let AbstractValue::StringConst(name) = fun.consts.value_of(element) {
                if apis::is_insecure_ssh_cipher(&name) {
                    let message = format!("insecure SSH cipher {name} enabled");
                    push_finding(out, desc, fa.file, element, Confidence::High, message);
                }
            }
        }
    });
}

/// Rule 13: (a) `ssh.InsecureIgnoreHostKey`, (b) a `HostKeyCallback` that
/// always returns nil.
pub(super) fn host_key_validation(
    fa: &FileAnalysis<'_>,
    desc: &RuleDescriptor,
    out: &mut Vec<Finding>,
) {
    fa.each_call(|_, _, call, res| {
        if let Some(q) = qualified_match(res, SSH_PACKAGE, "InsecureIgnoreHostKey") {
            let confidence = adjust_for_dot(Confidence::High, q);
            let message =
                String::from("host key verification disabled (ssh.InsecureIgnoreHostKey)");
            push_finding(out, desc, fa.file, call, confidence, message);
        }
    });

    if !fa.file.imports.has_path(SSH_PACKAGE) {
        return;
    }
    let src = &fa.file.source;
    for_each_field_binding(fa, "HostKeyCallback", &mut |_fun, anchor, value| {
        let accepts_everything = match value.kind() {
            "func_literal" => {
                summarize_returns(value, src, &fa.file.imports).always_returns_nil_error
            }
            "identifier" => fa
                .named_function(text(value, src))
                .and_then(|f| f.decl)
                .map(|decl| summarize_returns(decl, src, &fa.file.imports).always_returns_nil_error)
                .unwrap_or(false),
            _ => false,
        };
        if accepts_everything {
            let message =
                String::from("host key callback always returns nil, accepting any server key");
            push_finding(out, desc, fa.file, anchor, Confidence::Medium, message);
        }
    });
}

/// Visit every binding of a struct field named `field`: keyed elements of
/// composite literals and assignments through a selector. The anchor node
/// is the key or left-hand side.
fn for_each_field_binding<'p>(
    fa: &FileAnalysis<'p>,
    field: &str,
    visit: &mut dyn FnMut(&FunctionAnalysis<'p>, Node<'p>, Node<'p>),
) {
    let src = &fa.file.source;
    for fun in &fa.functions {
        for idx in 0..fun.cfg.nodes.len() {
            fun.cfg.owned_walk(idx, &mut |n| match n.kind() {
                "composite_literal" => {
                    for (key, value) in keyed_elements(n) {
                        if matches!(key.kind(), "identifier" | "field_identifier")
                            && text(key, src) == field
                        {
                            visit(fun, key, value);
                        }
                    }
                }
                "assignment_statement" => {
                    for (lhs, rhs) in assignment_pairs(n) {
                        if lhs.kind() != "selector_expression" {
                            continue;
                        }
                        let named = lhs
                            .child_by_field_name("field")
                            .is_some_and(|f| text(f, src) == field);
                        if named {
                            visit(fun, lhs, rhs);
                        }
                    }
                }
                _ => {}
            });
        }
    }
}
