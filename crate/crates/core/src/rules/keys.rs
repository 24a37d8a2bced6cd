//! Key Management rules: constant/predictable keys (04), short keys (05),
//! static IVs and nonces (06).

use crate::dataflow::AbstractValue;
use crate::findings::{Confidence, Finding};

use super::{
    adjust_for_dot, apis, call_args, push_finding, qualified_match, FunctionAnalysis,
    FileAnalysis, RuleConfig, RuleDescriptor,
};

/// Is the argument's value fully determined by the source text, and shaped
/// like key/nonce material (bytes or a string)?
fn literal_material(fun: &FunctionAnalysis<'_>, arg: tree_sitter::Node<'_>) -> bool {
    let value = fun.consts.value_of(arg);
    matches!(
        value,
        AbstractValue::BytesLen(_) | AbstractValue::StringConst(_)
    ) && fun.consts.is_literal(arg)
}

/// Rule 04: key material that is a compile-time constant.
pub(super) fn predictable_keys(fa: &FileAnalysis<'_>, desc: &RuleDescriptor, out: &mut Vec<Finding>) {
    let jwt_imported = apis::JWT_PACKAGES
        .iter()
        .any(|p| fa.file.imports.has_path(p));

    fa.each_call(|fun, _, call, res| {
        for (package, member, position) in apis::KEY_PARAMS {
            let Some(q) = qualified_match(res, package, member) else {
                continue;
            };
            let Some(&arg) = call_args(call).get(*position) else {
                continue;
            };
            if literal_material(fun, arg) {
                let confidence = adjust_for_dot(Confidence::High, q);
                let message =
                    format!("hardcoded key material passed to {package}.{member}");
                push_finding(out, desc, fa.file, arg, confidence, message);
                return;
            }
        }
        // Signing a JWT with a literal key.
        if jwt_imported && res.method.as_deref() == Some("SignedString") {
            if let Some(&arg) = call_args(call).first() {
                if literal_material(fun, arg) {
                    let message = String::from("hardcoded key used to sign a JWT (SignedString)");
                    push_finding(out, desc, fa.file, arg, Confidence::High, message);
                }
            }
        }
    });
}

/// Rule 05: RSA moduli and HMAC keys below the configured minimums.
pub(super) fn short_keys(
    fa: &FileAnalysis<'_>,
    desc: &RuleDescriptor,
    config: &RuleConfig,
    out: &mut Vec<Finding>,
) {
    fa.each_call(|fun, _, call, res| {
        if let Some(q) = qualified_match(res, "crypto/rsa", "GenerateKey") {
            if let Some(&arg) = call_args(call).get(1) {
                if let AbstractValue::IntConst(bits) = fun.consts.value_of(arg) {
                    if bits < config.min_rsa_bits {
                        let confidence = adjust_for_dot(Confidence::High, q);
                        let message = format!(
                            "RSA key size {bits} is below the {}-bit minimum",
                            config.min_rsa_bits
                        );
                        push_finding(out, desc, fa.file, arg, confidence, message);
                    }
                }
            }
        }
        if let Some(q) = qualified_match(res, "crypto/hmac", "New") {
            if let Some(&arg) = call_args(call).get(1) {
                if let Some(len) = fun.consts.value_of(arg).byte_len() {
                    if (len as i64) < config.min_hmac_key_bytes {
                        let confidence = adjust_for_dot(Confidence::High, q);
                        let message = format!(
                            "HMAC key is {len} bytes, below the {}-byte minimum",
                            config.min_hmac_key_bytes
                        );
                        push_finding(out, desc, fa.file, arg, confidence, message);
                    }
                }
            }
        }
    });
}

/// Rule 06: IVs and AEAD nonces that are compile-time constants.
pub(super) fn static_ivs(fa: &FileAnalysis<'_>, desc: &RuleDescriptor, out: &mut Vec<Finding>) {
    let aead_in_scope = fa.file.imports.has_path("crypto/cipher")
        || fa.file.imports.has_path("golang.org/x/crypto/chacha20poly1305");

    fa.each_call(|fun, _, call, res| {
        for (package, member, position) in apis::IV_PARAMS {
            let Some(q) = qualified_match(res, package, member) else {
                continue;
            };
            let Some(&arg) = call_args(call).get(*position) else {
                continue;
            };
            if literal_material(fun, arg) {
                let confidence = adjust_for_dot(Confidence::High, q);
                let message = format!("static IV passed to {package}.{member}");
                push_finding(out, desc, fa.file, arg, confidence, message);
                return;
            }
        }
        // AEAD Seal(dst, nonce, plaintext, additionalData): a constant
        // nonce repeats across messages, which breaks GCM and ChaCha20.
        if aead_in_scope && res.method.as_deref() == Some("Seal") {
            if let Some(&arg) = call_args(call).get(1) {
                if literal_material(fun, arg) {
                    let message = String::from("static nonce passed to AEAD Seal");
                    push_finding(out, desc, fa.file, arg, Confidence::High, message);
                }
            }
        }
    });
}
