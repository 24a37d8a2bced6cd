//! Password-based KDF rules: short salts (07), predictable salts (08), low
//! iteration counts / work factors (09).

use crate::dataflow::AbstractValue;
use crate::findings::{Confidence, Finding};

use super::{
    adjust_for_dot, apis, call_args, push_finding, qualified_match, FileAnalysis, RuleConfig,
    RuleDescriptor,
};

/// Rule 07: salts shorter than the configured minimum.
pub(super) fn short_salts(
    fa: &FileAnalysis<'_>,
    desc: &RuleDescriptor,
    config: &RuleConfig,
    out: &mut Vec<Finding>,
) {
    fa.each_call(|fun, _, call, res| {
        for (package, member, position) in apis::SALT_PARAMS {
            let Some(q) = qualified_match(res, package, member) else {
                continue;
            };
            let Some(&arg) = call_args(call).get(*position) else {
                continue;
            };
            if let Some(len) = fun.consts.value_of(arg).byte_len() {
                if (len as i64) < config.min_salt_bytes {
                    let confidence = adjust_for_dot(Confidence::Medium, q);
                    let message = format!(
                        "salt passed to {package}.{member} is {len} bytes; use at least {}",
                        config.min_salt_bytes
                    );
                    push_finding(out, desc, fa.file, arg, confidence, message);
                }
            }
            return;
        }
    });
}

/// Rule 08: salts whose bytes are fixed in the source text.
pub(super) fn predictable_salts(
    fa: &FileAnalysis<'_>,
    desc: &RuleDescriptor,
    out: &mut Vec<Finding>,
) {
    fa.each_call(|fun, _, call, res| {
        for (package, member, position) in apis::SALT_PARAMS {
            let Some(q) = qualified_match(res, package, member) else {
                continue;
            };
            let Some(&arg) = call_args(call).get(*position) else {
                continue;
            };
            let value = fun.consts.value_of(arg);
            let byte_like = matches!(
                value,
                AbstractValue::BytesLen(_) | AbstractValue::StringConst(_)
            );
            if byte_like && fun.consts.is_literal(arg) {
                let confidence = adjust_for_dot(Confidence::High, q);
                let message = format!(
                    "salt passed to {package}.{member} is a constant; salts must be random per password"
                );
                push_finding(out, desc, fa.file, arg, confidence, message);
            }
            return;
        }
    });
}

/// Rule 09: PBKDF2 iteration counts and bcrypt costs below the minimums.
pub(super) fn low_iterations(
    fa: &FileAnalysis<'_>,
    desc: &RuleDescriptor,
    config: &RuleConfig,
    out: &mut Vec<Finding>,
) {
    fa.each_call(|fun, _, call, res| {
        if let Some(q) = qualified_match(res, "golang.org/x/crypto/pbkdf2", "Key") {
            if let Some(&arg) = call_args(call).get(2) {
                if let AbstractValue::IntConst(iters) = fun.consts.value_of(arg) {
                    if iters < config.min_pbkdf2_iters {
                        let confidence = adjust_for_dot(Confidence::High, q);
                        let message = format!(
                            "PBKDF2 iteration count {iters} is below the minimum of {}",
                            config.min_pbkdf2_iters
                        );
                        push_finding(out, desc, fa.file, arg, confidence, message);
                    }
                }
            }
        }
        if let Some(q) =
            qualified_match(res, "golang.org/x/crypto/bcrypt", "GenerateFromPassword")
        {
            if let Some(&arg) = call_args(call).get(1) {
                if let AbstractValue::IntConst(cost) = fun.consts.value_of(arg) {
                    if cost < config.min_bcrypt_cost {
                        let confidence = adjust_for_dot(Confidence::High, q);
                        let message = format!(
                            "bcrypt cost {cost} is below the minimum of {}",
                            config.min_bcrypt_cost
                        );
                        push_finding(out, desc, fa.file, arg, confidence, message);
                    }
                }
            }
        }
    });
}
