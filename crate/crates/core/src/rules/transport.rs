//! Transport Security rules: plaintext HTTP (10) and TLS configuration
//! issues (11).

use tree_sitter::Node;

use crate::dataflow::AbstractValue;
use crate::findings::{Confidence, Finding};
use crate::frontend::parse::text;

use super::{
    adjust_for_dot, apis, assignment_pairs, call_args, composite_type_is, keyed_elements,
    plain_elements, push_finding, qualified_match, FileAnalysis, FunctionAnalysis, RuleConfig,
    RuleDescriptor,
};

/// Rule 10: requests to hardcoded `http://` URLs (loopback excluded).
pub(super) fn plain_http(fa: &FileAnalysis<'_>, desc: &RuleDescriptor, out: &mut Vec<Finding>) {
    fa.each_call(|fun, _, call, res| {
        for (member, position) in apis::HTTP_URL_ARGS {
            let Some(q) = qualified_match(res, "net/http", member) else {
                continue;
            };
            let Some(&arg) = call_args(call).get(*position) else {
                continue;
            };
            if let AbstractValue::StringConst(url) = fun.consts.value_of(arg) {
                if url.starts_with("http://") && !loopback_url(&url) {
                    let confidence = adjust_for_dot(Confidence::Medium, q);
                    let message = format!("plaintext HTTP request to {url}");
                    push_finding(out, desc, fa.file, arg, confidence, message);
                }
            }
            return;
        }
    });
}

/// Loopback and unspecified hosts stay quiet: local development traffic
/// never leaves the machine.
fn loopback_url(url: &str) -> bool {
    let Some(rest) = url.strip_prefix("http://") else {
        return false;
    };
    let host = if let Some(bracketed) = rest.strip_prefix('[') {
        bracketed.split(']').next().unwrap_or("")
    } else {
        rest.split(['/', ':', '?', '#']).next().unwrap_or("")
    };
    host == "localhost" || host == "0.0.0.0" || host == "::1" || host.starts_with("127.")
}

/// Rule 11: `tls.Config` composites and field writes that disable
/// certificate verification (a), allow outdated protocol versions (b), or
/// enable insecure cipher suites (c).
pub(super) fn tls_issues(
    fa: &FileAnalysis<'_>,
    desc: &RuleDescriptor,
    config: &RuleConfig,
    out: &mut Vec<Finding>,
) {
    let src = &fa.file.source;
    for fun in &fa.functions {
        for idx in 0..fun.cfg.nodes.len() {
            fun.cfg.owned_walk(idx, &mut |n| match n.kind() {
                "composite_literal"
                    if composite_type_is(n, src, &fa.file.imports, "crypto/tls", "Config") =>
                {
                    for (key, value) in keyed_elements(n) {
                        if key.kind() == "identifier" || key.kind() == "field_identifier" {
                            tls_field(fa, fun, text(key, src), key, value, config, desc, out);
                        }
                    }
                }
                "assignment_statement" => {
                    for (lhs, rhs) in assignment_pairs(n) {
                        if lhs.kind() != "selector_expression" {
                            continue;
                        }
                        let Some(field) = lhs.child_by_field_name("field") else {
                            continue;
                        };
                        tls_field(fa, fun, text(field, src), lhs, rhs, config, desc, out);
                    }
                }
                _ => {}
            });
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn tls_field(
    fa: &FileAnalysis<'_>,
    fun: &FunctionAnalysis<'_>,
    field: &str,
    anchor: Node<'_>,
    value: Node<'_>,
    config: &RuleConfig,
    desc: &RuleDescriptor,
    out: &mut Vec<Finding>,
) {
    let src = &fa.file.source;
    match field {
        "InsecureSkipVerify" => {
            if fun.consts.value_of(value) == AbstractValue::BoolConst(true) {
                let message =
                    String::from("TLS certificate verification disabled (InsecureSkipVerify)");
                push_finding(out, desc, fa.file, anchor, Confidence::High, message);
            }
        }
        // An explicit zero means "use the library default", which is not a
        // version choice; only concrete outdated versions are findings.
        "MinVersion" | "MaxVersion" => {
            if let AbstractValue::IntConst(version) = fun.consts.value_of(value) {
                if version != 0 && version < config.min_tls_version {
                    let message = format!(
                        "TLS {field} allows {}; require at least {}",
                        tls_version_name(version),
                        tls_version_name(config.min_tls_version)
                    );
                    push_finding(out, desc, fa.file, anchor, Confidence::Medium, message);
                }
            }
        }
        "CipherSuites" => {
            if value.kind() != "composite_literal" {
                return;
            }
            for element in plain_elements(value) {
                let name = match element.kind() {
                    "selector_expression" => element
                        .child_by_field_name("field")
                        .map(|f| text(f, src))
                        .unwrap_or_default(),
                    "identifier" => text(element, src),
                    _ => continue,
                };
                if apis::is_insecure_tls_suite(name) {
                    let message = format!("insecure TLS cipher suite {name} enabled");
                    push_finding(out, desc, fa.file, element, Confidence::Medium, message);
                }
            }
        }
        _ => {}
    }
}

fn tls_version_name(version: i64) -> String {
    match version {
        768 => "SSL 3.0".to_string(),
        769 => "TLS 1.0".to_string(),
        770 => "TLS 1.1".to_string(),
        771 => "TLS 1.2".to_string(),
        772 => "TLS 1.3".to_string(),
        other => format!("0x{other:04x}"),
    }
}
