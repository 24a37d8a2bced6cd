//! Cryptographic Primitives rules: insecure algorithms (01), insecure PRNG
//! for crypto material (02), deprecated functions (03).

use std::collections::BTreeMap;

use tree_sitter::Node;

use crate::dataflow::taint_reach;
use crate::findings::{Confidence, Finding};
use crate::frontend::parse::text;
use crate::frontend::resolve_qualified_call;

use super::{
    adjust_for_dot, apis, call_args, push_finding, qualified_match, FileAnalysis,
    FunctionAnalysis, RuleDescriptor,
};

/// Rule 01: direct calls to broken primitives.
pub(super) fn insecure_algorithms(fa: &FileAnalysis<'_>, desc: &RuleDescriptor, out: &mut Vec<Finding>) {
    fa.each_call(|_, _, call, res| {
        for (package, member, why) in apis::INSECURE_PRIMITIVES {
            if let Some(q) = qualified_match(res, package, member) {
                let confidence = adjust_for_dot(Confidence::High, q);
                let message = format!("call to {package}.{member}: {why}");
                push_finding(out, desc, fa.file, call, confidence, message);
                return;
            }
        }
    });
}

/// Rule 03: deprecated packages and functions.
pub(super) fn deprecated_functions(
    fa: &FileAnalysis<'_>,
    desc: &RuleDescriptor,
    out: &mut Vec<Finding>,
) {
    fa.each_call(|_, _, call, res| {
        for package in apis::DEPRECATED_PACKAGES {
            let hit = res.qualified.iter().find(|q| {
                q.package == *package || q.package.starts_with(&format!("{package}/"))
            });
            if let Some(q) = hit {
                let confidence = adjust_for_dot(Confidence::Medium, q);
                let message = format!(
                    "call to {}.{}: package {package} is deprecated for cryptographic use",
                    q.package,
                    q.leaf()
                );
                push_finding(out, desc, fa.file, call, confidence, message);
                return;
            }
        }
        for (package, member) in apis::DEPRECATED_MEMBERS {
            if let Some(q) = qualified_match(res, package, member) {
                let confidence = adjust_for_dot(Confidence::Medium, q);
                let message = format!("call to deprecated function {package}.{member}");
                push_finding(out, desc, fa.file, call, confidence, message);
                return;
            }
        }
    });
}

/// A call site relevant to rule 02: where it is, what it is, and whether we
/// got there through a same-file wrapper.
struct PrngSite<'t> {
    node: Node<'t>,
    label: String,
    wrapped: bool,
}

/// Rule 02: math/rand output flowing into key, nonce, KDF, or token
/// material. Direct flows report High; flows through one level of same-file
/// wrapper functions report Medium.
pub(super) fn insecure_prng(fa: &FileAnalysis<'_>, desc: &RuleDescriptor, out: &mut Vec<Finding>) {
    let src = &fa.file.source;

    // Same-file wrappers, depth one. A wrapper source is a named function
    // with a def-use path from a math/rand call to a return; a wrapper sink
    // is a named function that forwards one of its parameters into a sink
    // argument.
    let mut wrapper_sources: BTreeMap<String, String> = BTreeMap::new();
    let mut wrapper_sinks: BTreeMap<String, String> = BTreeMap::new();
    for fun in &fa.functions {
        if !fun.decl.is_some_and(|d| d.kind() == "function_declaration") {
            continue;
        }
        if let Some(label) = returns_rand(fun, fa) {
            wrapper_sources.insert(fun.cfg.name.clone(), label);
        }
        if let Some(label) = forwards_param_to_sink(fun, fa) {
            wrapper_sinks.insert(fun.cfg.name.clone(), label);
        }
    }

    for fun in &fa.functions {
        let mut sources: BTreeMap<usize, PrngSite<'_>> = BTreeMap::new();
        let mut sinks: BTreeMap<usize, PrngSite<'_>> = BTreeMap::new();
        let mut sanitizers: std::collections::BTreeSet<usize> = Default::default();

        for idx in 0..fun.cfg.nodes.len() {
            fun.cfg.owned_walk(idx, &mut |n| {
                if n.kind() != "call_expression" {
                    return;
                }
                let res = resolve_qualified_call(n, src, &fa.file.imports);

                if let Some(q) = math_rand_callee(&res) {
                    sources.entry(idx).or_insert(PrngSite {
                        node: n,
                        label: format!("{}.{}", q.package, q.member),
                        wrapped: false,
                    });
                } else if let Some(name) = res.bare.as_deref() {
                    if let Some(inner) = wrapper_sources.get(name) {
                        sources.entry(idx).or_insert(PrngSite {
                            node: n,
                            label: format!("{name}() wrapping {inner}"),
                            wrapped: true,
                        });
                    }
                }

                if let Some((q, label)) = sink_callee(&res) {
                    sinks.entry(idx).or_insert(PrngSite {
                        node: n,
                        label: label.to_string(),
                        wrapped: q.is_some_and(|q| q.via_dot),
                    });
                } else if let Some(name) = res.bare.as_deref() {
                    if let Some(inner) = wrapper_sinks.get(name) {
                        sinks.entry(idx).or_insert(PrngSite {
                            node: n,
                            label: format!("{inner} via {name}()"),
                            wrapped: true,
                        });
                    }
                }

                if res.in_package("crypto/rand") {
                    sanitizers.insert(idx);
                }
            });
        }

        if sources.is_empty() || sinks.is_empty() {
            continue;
        }

        let paths = taint_reach(
            &fun.cfg,
            &|i| sources.get(&i).map(|s| s.label.clone()),
            &|i| sinks.get(&i).map(|s| s.label.clone()),
            &|i| sanitizers.contains(&i),
        );
        for path in paths {
            let source = &sources[&path.source];
            let sink = &sinks[&path.sink];
            let confidence = if source.wrapped || sink.wrapped {
                Confidence::Medium
            } else {
                Confidence::High
            };
            let message = format!(
                "value from {} used as {}; use crypto/rand instead",
                source.label, sink.label
            );
            push_finding(out, desc, fa.file, source.node, confidence, message);
        }
    }
}

fn math_rand_callee(
    res: &crate::frontend::CalleeResolution,
) -> Option<&crate::frontend::QualifiedCallee> {
    res.qualified
        .iter()
        .find(|q| apis::MATH_RAND_PACKAGES.contains(&q.package.as_str()))
}

/// Is this call a rule-02 sink? Returns the qualified callee (None for
/// method sinks) and the material label.
fn sink_callee(
    res: &crate::frontend::CalleeResolution,
) -> Option<(Option<&crate::frontend::QualifiedCallee>, &'static str)> {
    for (package, member, label) in apis::PRNG_SINKS {
        if let Some(q) = qualified_match(res, package, member) {
            return Some((Some(q), label));
        }
    }
    for (method, label) in apis::PRNG_METHOD_SINKS {
        if res.method.as_deref() == Some(*method) {
            return Some((None, label));
        }
    }
    None
}

/// Does this named function have a def-use path from a math/rand call to a
/// return statement? Returns a label describing the inner call.
fn returns_rand(fun: &FunctionAnalysis<'_>, fa: &FileAnalysis<'_>) -> Option<String> {
    if fun.cfg.returns.is_empty() {
        return None;
    }
    let src = &fa.file.source;
    let mut rand_nodes: BTreeMap<usize, String> = BTreeMap::new();
    for idx in 0..fun.cfg.nodes.len() {
        fun.cfg.owned_walk(idx, &mut |n| {
            if n.kind() != "call_expression" {
                return;
            }
            let res = resolve_qualified_call(n, src, &fa.file.imports);
            if let Some(q) = math_rand_callee(&res) {
                rand_nodes
                    .entry(idx)
                    .or_insert(format!("{}.{}", q.package, q.member));
            }
        });
    }
    if rand_nodes.is_empty() {
        return None;
    }
    let returns: std::collections::BTreeSet<usize> = fun.cfg.returns.iter().copied().collect();
    let paths = taint_reach(
        &fun.cfg,
        &|i| rand_nodes.get(&i).cloned(),
        &|i| returns.contains(&i).then(|| String::from("return")),
        &|_| false,
    );
    paths.first().map(|p| p.source_kind.clone())
}

/// Does this named function pass one of its own parameters straight into a
/// sink argument? Returns the sink label.
fn forwards_param_to_sink(fun: &FunctionAnalysis<'_>, fa: &FileAnalysis<'_>) -> Option<String> {
    let src = &fa.file.source;
    let mut found = None;
    for idx in 0..fun.cfg.nodes.len() {
        if found.is_some() {
            break;
        }
        fun.cfg.owned_walk(idx, &mut |n| {
            if found.is_some() || n.kind() != "call_expression" {
                return;
            }
            let res = resolve_qualified_call(n, src, &fa.file.imports);
            let Some((_, label)) = sink_callee(&res) else {
                return;
            };
            let forwards = call_args(n).iter().any(|arg| {
                arg.kind() == "identifier" && fun.cfg.params.iter().any(|p| p == text(*arg, src))
            });
            if forwards {
                found = Some(label.to_string());
            }
        });
    }
    found
}
