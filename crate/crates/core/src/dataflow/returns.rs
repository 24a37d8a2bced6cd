//! Return-value summaries for error-returning functions.
//!
//! The motivating shape is a host-key or certificate callback that always
//! returns nil: such a callback accepts anything, so wiring it into a
//! verification hook disables the check.

use tree_sitter::Node;

use crate::frontend::parse::named_children;
use crate::frontend::ImportTable;

use super::cfg::build_cfg;
use super::consts::{eval_constants, AbstractValue, FnConstReturns};

#[derive(Debug, Clone)]
pub struct ReturnSummary {
    /// Syntax-node id of the summarized function.
    pub function_literal: usize,
    /// True iff every return statement's error-position value is nil.
    pub always_returns_nil_error: bool,
    /// One entry per return statement: (node id, error-slot value).
    pub returns: Vec<(usize, AbstractValue)>,
}

/// Summarize the error result of a function literal or named function whose
/// final result position is `error`. Functions without that shape, and
/// functions with no return statements, summarize to `false`.
pub fn summarize_returns(decl: Node<'_>, src: &str, imports: &ImportTable) -> ReturnSummary {
    let cfg = build_cfg(decl, src, "");
    let consts = eval_constants(
        &cfg,
        src,
        imports,
        &Default::default(),
        &FnConstReturns::new(),
    );

    let error_slot = cfg
        .results
        .last()
        .filter(|(_, ty)| ty.trim() == "error")
        .cloned();

    let mut returns = Vec::new();
    for &ret_idx in &cfg.returns {
        let Some(stmt) = cfg.nodes[ret_idx]
            .owned
            .iter()
            .copied()
            .find(|n| n.kind() == "return_statement")
        else {
            continue;
        };
        let exprs: Vec<Node<'_>> = named_children(stmt)
            .into_iter()
            .find(|c| c.kind() == "expression_list")
            .map(named_children)
            .unwrap_or_default();
        let value = if error_slot.is_none() {
            AbstractValue::Unknown
        } else if exprs.is_empty() {
            // Naked return: the named error result's state at this point.
            match &error_slot {
                Some((Some(name), _)) => consts.var_at(ret_idx, name),
                _ => AbstractValue::Unknown,
            }
        } else if exprs.len() == cfg.results.len() {
            consts.value_of(*exprs.last().unwrap())
        } else {
            // `return f()` forwarding a multi-value call.
            AbstractValue::Unknown
        };
        returns.push((stmt.id(), value));
    }

    let always = error_slot.is_some()
        && !returns.is_empty()
        && returns.iter().all(|(_, v)| *v == AbstractValue::NilConst);

    ReturnSummary {
        function_literal: decl.id(),
        always_returns_nil_error: always,
        returns,
    }
}

/// The one constant every return statement of a single-result function
/// agrees on, if any. Feeds depth-1 constant propagation through calls.
pub fn constant_return(
    cfg: &super::cfg::CfgFunction<'_>,
    consts: &super::consts::ConstMap,
) -> Option<super::consts::Slot> {
    if cfg.results.len() != 1 || cfg.returns.is_empty() {
        return None;
    }
    let mut agreed: Option<super::consts::Slot> = None;
    for &ret_idx in &cfg.returns {
        let stmt = cfg.nodes[ret_idx]
            .owned
            .iter()
            .copied()
            .find(|n| n.kind() == "return_statement")?;
        let exprs: Vec<Node<'_>> = named_children(stmt)
            .into_iter()
            .find(|c| c.kind() == "expression_list")
            .map(named_children)
            .unwrap_or_default();
        if exprs.len() != 1 {
            return None;
        }
        let slot = (consts.value_of(exprs[0]), consts.is_literal(exprs[0]));
        if !slot.0.is_known() {
            return None;
        }
        match &agreed {
            None => agreed = Some(slot),
            Some(prev) if *prev == slot => {}
            _ => return None,
        }
    }
    agreed
}
