//! Flow-sensitive constant propagation over a flat lattice.
//!
//! Values: integers, strings, booleans, nil, and byte-buffer lengths. A
//! parallel "literal" bit records whether the *contents* of a value are
//! fully determined by the source text: `[]byte("ab")` is a literal 2-byte
//! buffer and `make([]byte, 2)` is a zero-filled (hence predictable) one,
//! while a buffer rewritten by `Read`-style calls keeps its length but
//! loses the bit. Detectors for predictable key material key off that bit;
//! length checks do not need it.

use std::collections::{BTreeMap, HashMap, HashSet};

use tree_sitter::Node;

use crate::frontend::parse::{named_children, string_literal_value, text};
use crate::frontend::ImportTable;

use super::cfg::CfgFunction;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AbstractValue {
    Unknown,
    IntConst(i64),
    StringConst(String),
    /// A byte buffer of known length and unknown contents.
    BytesLen(u64),
    NilConst,
    BoolConst(bool),
}

impl AbstractValue {
    /// Flat-lattice join: equal values survive, anything else is unknown.
    pub fn join(&self, other: &AbstractValue) -> AbstractValue {
        if self == other {
            self.clone()
        } else {
            AbstractValue::Unknown
        }
    }

    pub fn is_known(&self) -> bool {
        *self != AbstractValue::Unknown
    }

    /// Length in bytes when this is string- or buffer-like.
    pub fn byte_len(&self) -> Option<u64> {
        match self {
            AbstractValue::StringConst(s) => Some(s.len() as u64),
            AbstractValue::BytesLen(n) => Some(*n),
            _ => None,
        }
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            AbstractValue::IntConst(v) => Some(*v),
            _ => None,
        }
    }
}

/// A value plus the literal-contents bit.
pub type Slot = (AbstractValue, bool);

fn join_slot(a: &Slot, b: &Slot) -> Slot {
    (a.0.join(&b.0), a.1 && b.1)
}

/// Constant summaries of same-file functions: the value every return
/// statement agrees on (depth-1 interprocedural constant propagation).
pub type FnConstReturns = BTreeMap<String, Slot>;

/// Result of constant propagation: an abstract value per expression node,
/// plus the variable state observed on entry to each CFG node.
#[derive(Debug, Default)]
pub struct ConstMap {
    values: HashMap<usize, AbstractValue>,
    literal: HashSet<usize>,
    node_vars: Vec<Env>,
}

impl ConstMap {
    pub fn value_of(&self, node: Node<'_>) -> AbstractValue {
        self.values
            .get(&node.id())
            .cloned()
            .unwrap_or(AbstractValue::Unknown)
    }

    /// True when the node's value derives entirely from source literals.
    pub fn is_literal(&self, node: Node<'_>) -> bool {
        self.literal.contains(&node.id())
    }

    /// Value of `var` on entry to CFG node `node_idx` (naked returns read
    /// named results this way).
    pub fn var_at(&self, node_idx: usize, var: &str) -> AbstractValue {
        self.node_vars
            .get(node_idx)
            .and_then(|env| env.get(var))
            .map(|(v, _)| v.clone())
            .unwrap_or(AbstractValue::Unknown)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Named constants of well-known packages that detectors compare against.
fn selector_constant(package: &str, member: &str) -> Option<i64> {
    let v = match (package, member) {
        ("crypto/tls", "VersionSSL30") => 0x0300,
        ("crypto/tls", "VersionTLS10") => 0x0301,
        ("crypto/tls", "VersionTLS11") => 0x0302,
        ("crypto/tls", "VersionTLS12") => 0x0303,
        ("crypto/tls", "VersionTLS13") => 0x0304,
        ("golang.org/x/crypto/bcrypt", "MinCost") => 4,
        ("golang.org/x/crypto/bcrypt", "DefaultCost") => 10,
        ("golang.org/x/crypto/bcrypt", "MaxCost") => 31,
        ("crypto/aes", "BlockSize") => 16,
        ("crypto/des", "BlockSize") => 8,
        ("crypto/md5", "Size") => 16,
        ("crypto/md5", "BlockSize") => 64,
        ("crypto/sha1", "Size") => 20,
        ("crypto/sha1", "BlockSize") => 64,
        ("crypto/sha256", "Size") => 32,
        ("crypto/sha256", "BlockSize") => 64,
        ("crypto/sha512", "Size") => 64,
        ("crypto/sha512", "BlockSize") => 128,
        ("golang.org/x/crypto/chacha20poly1305", "KeySize") => 32,
        ("golang.org/x/crypto/chacha20poly1305", "NonceSize") => 12,
        ("golang.org/x/crypto/chacha20poly1305", "NonceSizeX") => 24,
        _ => return None,
    };
    Some(v)
}

/// Zero value of a declared-but-unassigned variable, from its type text.
fn zero_value(type_text: &str) -> Slot {
    let t = type_text.trim();
    if t == "error" || t == "any" || t.starts_with('*') || t.starts_with("[]")
        || t.starts_with("map[") || t.starts_with("chan") || t.starts_with("func")
        || t.starts_with("interface")
    {
        return (AbstractValue::NilConst, true);
    }
    match t {
        "int" | "int8" | "int16" | "int32" | "int64" | "uint" | "uint8" | "uint16"
        | "uint32" | "uint64" | "byte" | "rune" | "uintptr" => {
            (AbstractValue::IntConst(0), true)
        }
        "string" => (AbstractValue::StringConst(String::new()), true),
        "bool" => (AbstractValue::BoolConst(false), true),
        _ => (AbstractValue::Unknown, false),
    }
}

fn int_conversion_target(type_text: &str) -> bool {
    matches!(
        type_text,
        "int" | "int8" | "int16" | "int32" | "int64" | "uint" | "uint8" | "uint16" | "uint32"
            | "uint64" | "byte" | "rune" | "uintptr"
    )
}

struct Eval<'a> {
    src: &'a str,
    imports: &'a ImportTable,
    globals: &'a BTreeMap<String, Slot>,
    fn_returns: &'a FnConstReturns,
}

type Env = BTreeMap<String, Slot>;

impl<'a> Eval<'a> {
    fn eval<'t>(&self, node: Node<'t>, env: &Env) -> Slot {
        match node.kind() {
            "int_literal" => match parse_go_int(text(node, self.src)) {
                Some(v) => (AbstractValue::IntConst(v), true),
                None => (AbstractValue::Unknown, false),
            },
            "interpreted_string_literal" | "raw_string_literal" => {
                match string_literal_value(node, self.src) {
                    Some(s) => (AbstractValue::StringConst(s), true),
                    None => (AbstractValue::Unknown, false),
                }
            }
            "rune_literal" => (AbstractValue::Unknown, true),
            "true" => (AbstractValue::BoolConst(true), true),
            "false" => (AbstractValue::BoolConst(false), true),
            "nil" => (AbstractValue::NilConst, true),
            "identifier" => {
                let name = text(node, self.src);
                if let Some(slot) = env.get(name) {
                    slot.clone()
                } else if let Some(slot) = self.globals.get(name) {
                    slot.clone()
                } else {
                    (AbstractValue::Unknown, false)
                }
            }
            "parenthesized_expression" => match node.named_child(0) {
                Some(inner) => self.eval(inner, env),
                None => (AbstractValue::Unknown, false),
            },
            "unary_expression" => self.eval_unary(node, env),
            "binary_expression" => self.eval_binary(node, env),
            "selector_expression" => self.eval_selector(node, env),
            "call_expression" => self.eval_call(node, env),
            "type_conversion_expression" => self.eval_conversion(node, env),
            "composite_literal" => self.eval_composite(node, env),
            _ => (AbstractValue::Unknown, false),
        }
    }

    fn eval_unary<'t>(&self, node: Node<'t>, env: &Env) -> Slot {
        let Some(operand) = node.child_by_field_name("operand") else {
            return (AbstractValue::Unknown, false);
        };
        let op = node
            .child_by_field_name("operator")
            .map(|o| text(o, self.src))
            .unwrap_or("");
        let (value, lit) = self.eval(operand, env);
        let out = match (op, &value) {
            ("-", AbstractValue::IntConst(v)) => AbstractValue::IntConst(v.wrapping_neg()),
            ("^", AbstractValue::IntConst(v)) => AbstractValue::IntConst(!v),
            ("+", AbstractValue::IntConst(v)) => AbstractValue::IntConst(*v),
            ("!", AbstractValue::BoolConst(b)) => AbstractValue::BoolConst(!b),
            // Address-of and deref keep the pointee's abstract value; good
            // enough for `&[...]byte{...}` style arguments.
            ("&", v) | ("*", v) => v.clone(),
            _ => AbstractValue::Unknown,
        };
        let lit = lit && out.is_known();
        (out, lit)
    }

    fn eval_binary<'t>(&self, node: Node<'t>, env: &Env) -> Slot {
        let (Some(left), Some(right)) = (
            node.child_by_field_name("left"),
            node.child_by_field_name("right"),
        ) else {
            return (AbstractValue::Unknown, false);
        };
        let op = node
            .child_by_field_name("operator")
            .map(|o| text(o, self.src))
            .unwrap_or("");
        let (lv, ll) = self.eval(left, env);
        let (rv, rl) = self.eval(right, env);
        let lit = ll && rl;
        use AbstractValue::*;
        let out = match (&lv, &rv) {
            (IntConst(a), IntConst(b)) => match op {
                "+" => IntConst(a.wrapping_add(*b)),
                "-" => IntConst(a.wrapping_sub(*b)),
                "*" => IntConst(a.wrapping_mul(*b)),
                "/" if *b != 0 => IntConst(a.wrapping_div(*b)),
                "%" if *b != 0 => IntConst(a.wrapping_rem(*b)),
                "&" => IntConst(a & b),
                "|" => IntConst(a | b),
                "^" => IntConst(a ^ b),
                "<<" if (0..64).contains(b) => IntConst(a.wrapping_shl(*b as u32)),
                ">>" if (0..64).contains(b) => IntConst(a.wrapping_shr(*b as u32)),
                "==" => BoolConst(a == b),
                "!=" => BoolConst(a != b),
                "<" => BoolConst(a < b),
                "<=" => BoolConst(a <= b),
                ">" => BoolConst(a > b),
                ">=" => BoolConst(a >= b),
                _ => Unknown,
            },
            (StringConst(a), StringConst(b)) => match op {
                "+" => StringConst(format!("{a}{b}")),
                "==" => BoolConst(a == b),
                "!=" => BoolConst(a != b),
                _ => Unknown,
            },
            (BoolConst(a), BoolConst(b)) => match op {
                "&&" => BoolConst(*a && *b),
                "||" => BoolConst(*a || *b),
                "==" => BoolConst(a == b),
                "!=" => BoolConst(a != b),
                _ => Unknown,
            },
            _ => Unknown,
        };
        let lit = lit && out.is_known();
        (out, lit)
    }

    fn eval_selector<'t>(&self, node: Node<'t>, _env: &Env) -> Slot {
        // Only package-qualified named constants evaluate: tls.VersionTLS12,
        // bcrypt.DefaultCost, aes.BlockSize.
        let (Some(operand), Some(field)) = (
            node.child_by_field_name("operand"),
            node.child_by_field_name("field"),
        ) else {
            return (AbstractValue::Unknown, false);
        };
        if operand.kind() == "identifier" {
            let base = text(operand, self.src);
            if let Some(package) = self.imports.resolve(base) {
                if let Some(v) = selector_constant(package, text(field, self.src)) {
                    return (AbstractValue::IntConst(v), true);
                }
            }
        }
        (AbstractValue::Unknown, false)
    }

    fn eval_call<'t>(&self, node: Node<'t>, env: &Env) -> Slot {
        let Some(function) = node.child_by_field_name("function") else {
            return (AbstractValue::Unknown, false);
        };
        let args: Vec<Node<'t>> = node
            .child_by_field_name("arguments")
            .map(named_children)
            .unwrap_or_default();

        if function.kind() == "identifier" {
            let name = text(function, self.src);
            match name {
                "len" => {
                    if let Some(arg) = args.first() {
                        let (v, lit) = self.eval(*arg, env);
                        if let Some(n) = v.byte_len() {
                            return (AbstractValue::IntConst(n as i64), lit);
                        }
                    }
                    return (AbstractValue::Unknown, false);
                }
                "make" => {
                    // make([]byte, n): zero-filled, so the contents are
                    // predictable until something overwrites them.
                    if let (Some(ty), Some(size)) = (args.first(), args.get(1)) {
                        if is_byte_slice_type(*ty, self.src) {
                            if let (AbstractValue::IntConst(n), _) = self.eval(*size, env) {
                                if n >= 0 {
                                    return (AbstractValue::BytesLen(n as u64), true);
                                }
                            }
                        }
                    }
                    return (AbstractValue::Unknown, false);
                }
                _ => {
                    // Depth-1: a same-file function whose returns agree on
                    // one constant.
                    if !env.contains_key(name) {
                        if let Some(slot) = self.fn_returns.get(name) {
                            return slot.clone();
                        }
                    }
                    return (AbstractValue::Unknown, false);
                }
            }
        }
        (AbstractValue::Unknown, false)
    }

    fn eval_conversion<'t>(&self, node: Node<'t>, env: &Env) -> Slot {
        let (Some(ty), Some(operand)) = (
            node.child_by_field_name("type"),
            node.child_by_field_name("operand"),
        ) else {
            return (AbstractValue::Unknown, false);
        };
        let (value, lit) = self.eval(operand, env);
        let ty_text = text(ty, self.src);
        if is_byte_slice_type(ty, self.src) {
            // []byte("lit") keeps both the byte length and the literal bit.
            if let AbstractValue::StringConst(s) = &value {
                return (AbstractValue::BytesLen(s.len() as u64), lit);
            }
            if let AbstractValue::BytesLen(n) = value {
                return (AbstractValue::BytesLen(n), lit);
            }
            return (AbstractValue::Unknown, false);
        }
        if int_conversion_target(ty_text) {
            if let AbstractValue::IntConst(v) = value {
                return (AbstractValue::IntConst(v), lit);
            }
            return (AbstractValue::Unknown, false);
        }
        if ty_text == "string" {
            if let AbstractValue::StringConst(s) = value {
                return (AbstractValue::StringConst(s), lit);
            }
            return (AbstractValue::Unknown, false);
        }
        (AbstractValue::Unknown, false)
    }

    fn eval_composite<'t>(&self, node: Node<'t>, env: &Env) -> Slot {
        // []byte{...} and [N]byte{...} with plain elements: literal buffers.
        let Some(ty) = node.child_by_field_name("type") else {
            return (AbstractValue::Unknown, false);
        };
        if !is_byte_slice_type(ty, self.src) && !is_byte_array_type(ty, self.src) {
            return (AbstractValue::Unknown, false);
        }
        let mut count = 0u64;
        if let Some(body) = node.child_by_field_name("body") {
            for el in named_children(body) {
                match el.kind() {
                    "literal_element" => count += 1,
                    "keyed_element" => return (AbstractValue::Unknown, false),
                    _ => {}
                }
            }
        }
        // A sized array type fixes the length; missing elements are zeros.
        // (`[...]byte{..}` has no length expression and falls through.)
        if ty.kind() == "array_type" {
            if let Some(len_node) = ty.child_by_field_name("length") {
                return match self.eval(len_node, env) {
                    (AbstractValue::IntConst(n), _) if n >= 0 => {
                        (AbstractValue::BytesLen(n as u64), true)
                    }
                    _ => (AbstractValue::Unknown, false),
                };
            }
        }
        (AbstractValue::BytesLen(count), true)
    }
}

fn is_byte_slice_type(ty: Node<'_>, src: &str) -> bool {
    ty.kind() == "slice_type"
        && ty
            .child_by_field_name("element")
            .map(|e| matches!(text(e, src), "byte" | "uint8"))
            .unwrap_or(false)
}

fn is_byte_array_type(ty: Node<'_>, src: &str) -> bool {
    matches!(ty.kind(), "array_type" | "implicit_length_array_type")
        && ty
            .child_by_field_name("element")
            .map(|e| matches!(text(e, src), "byte" | "uint8"))
            .unwrap_or(false)
}

/// Go integer literals: decimal, hex, octal (0o and legacy 0), binary,
/// with optional underscores.
fn parse_go_int(raw: &str) -> Option<i64> {
    let cleaned: String = raw.chars().filter(|c| *c != '_').collect();
    let lower = cleaned.to_ascii_lowercase();
    let (digits, radix) = if let Some(rest) = lower.strip_prefix("0x") {
        (rest.to_string(), 16)
    } else if let Some(rest) = lower.strip_prefix("0b") {
        (rest.to_string(), 2)
    } else if let Some(rest) = lower.strip_prefix("0o") {
        (rest.to_string(), 8)
    } else if lower.len() > 1 && lower.starts_with('0') && lower.chars().all(|c| c.is_ascii_digit())
    {
        (lower[1..].to_string(), 8)
    } else {
        (lower, 10)
    };
    i64::from_str_radix(&digits, radix).ok()
}

/// Run constant propagation to a fixed point and report the abstract value
/// of every expression in the function.
///
/// `globals` are package-level constants/variables; `fn_returns` are
/// constant-return summaries of same-file functions (depth-1 calls).
pub fn eval_constants<'t>(
    cfg: &CfgFunction<'t>,
    src: &str,
    imports: &ImportTable,
    globals: &BTreeMap<String, Slot>,
    fn_returns: &FnConstReturns,
) -> ConstMap {
    let eval = Eval {
        src,
        imports,
        globals,
        fn_returns,
    };

    let n = cfg.nodes.len();
    if n == 0 {
        return ConstMap::default();
    }

    // Entry environment: parameters unknown (they shadow globals), named
    // results at their zero values.
    let mut entry_env: Env = Env::new();
    for p in &cfg.params {
        entry_env.insert(p.clone(), (AbstractValue::Unknown, false));
    }
    for (name, ty) in &cfg.results {
        if let Some(name) = name {
            entry_env.insert(name.clone(), zero_value(ty));
        }
    }

    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut succs: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(a, b) in &cfg.edges {
        preds[b].push(a);
        succs[a].push(b);
    }

    let mut in_env: Vec<Option<Env>> = vec![None; n];
    let mut out_env: Vec<Option<Env>> = vec![None; n];
    if let Some(entry) = cfg.entry {
        in_env[entry] = Some(entry_env);
    }

    let mut worklist: Vec<usize> = (0..n).collect();
    while let Some(node_idx) = worklist.pop() {
        let mut merged: Option<Env> = if node_idx == cfg.entry.unwrap_or(usize::MAX) {
            in_env[node_idx].clone()
        } else {
            None
        };
        for &p in &preds[node_idx] {
            if let Some(out) = &out_env[p] {
                merged = Some(match merged {
                    None => out.clone(),
                    Some(m) => join_env(&m, out),
                });
            }
        }
        let Some(env_in) = merged else { continue };
        let env_out = transfer(&eval, &cfg.nodes[node_idx], &env_in);
        in_env[node_idx] = Some(env_in);
        if out_env[node_idx].as_ref() != Some(&env_out) {
            out_env[node_idx] = Some(env_out);
            for &s in &succs[node_idx] {
                worklist.push(s);
            }
        }
    }

    // Decorate every expression with its value under the node's IN state.
    // Unreachable nodes get an empty state: literals still fold there.
    let empty = Env::new();
    let mut map = ConstMap::default();
    map.node_vars = in_env
        .iter()
        .map(|e| e.clone().unwrap_or_default())
        .collect();
    for (idx, entry) in in_env.iter().enumerate() {
        let env = entry.as_ref().unwrap_or(&empty);
        cfg.owned_walk(idx, &mut |expr| {
            if is_expression(expr.kind()) {
                let (value, lit) = eval.eval(expr, env);
                if value.is_known() {
                    map.values.insert(expr.id(), value);
                    if lit {
                        map.literal.insert(expr.id());
                    }
                }
            }
        });
    }
    map
}

/// Evaluate package-level `var`/`const` specs in source order, producing
/// the global environment functions fall back to.
pub fn eval_package_level<'t>(
    specs: &[Node<'t>],
    src: &str,
    imports: &ImportTable,
    fn_returns: &FnConstReturns,
) -> BTreeMap<String, Slot> {
    let no_globals = BTreeMap::new();
    let eval = Eval {
        src,
        imports,
        globals: &no_globals,
        fn_returns,
    };
    let mut env = Env::new();
    for spec in specs {
        transfer_stmt(&eval, *spec, &mut env);
    }
    env
}

fn is_expression(kind: &str) -> bool {
    matches!(
        kind,
        "int_literal"
            | "interpreted_string_literal"
            | "raw_string_literal"
            | "rune_literal"
            | "true"
            | "false"
            | "nil"
            | "identifier"
            | "parenthesized_expression"
            | "unary_expression"
            | "binary_expression"
            | "selector_expression"
            | "call_expression"
            | "type_conversion_expression"
            | "composite_literal"
    )
}

fn join_env(a: &Env, b: &Env) -> Env {
    // Variables missing on one side keep the other side's value: an unset
    // path cannot read the variable in well-formed Go, so the definition
    // seen on the defining path stands.
    let mut out = a.clone();
    for (k, v) in b {
        out.entry(k.clone())
            .and_modify(|existing| *existing = join_slot(existing, v))
            .or_insert_with(|| v.clone());
    }
    out
}

fn transfer<'t>(eval: &Eval<'_>, node: &super::cfg::CfgNode<'t>, env: &Env) -> Env {
    let mut env = env.clone();
    for &owned in &node.owned {
        transfer_stmt(eval, owned, &mut env);
    }
    // Buffer-writing calls redefine their argument: contents are no longer
    // literal, but the length is preserved.
    for var in &node.defs {
        if !assigns_var(node, var, eval.src) {
            let slot = env
                .get(var)
                .map(|(v, _)| (v.clone(), false))
                .unwrap_or((AbstractValue::Unknown, false));
            env.insert(var.clone(), slot);
        }
    }
    env
}

/// Does this node syntactically assign `var` (as opposed to defining it
/// through a buffer-writing call)?
fn assigns_var(node: &super::cfg::CfgNode<'_>, var: &str, src: &str) -> bool {
    for owned in &node.owned {
        if assigns_in(*owned, var, src) {
            return true;
        }
    }
    false
}

fn assigns_in(node: Node<'_>, var: &str, src: &str) -> bool {
    match node.kind() {
        "short_var_declaration" | "assignment_statement" => {
            if let Some(left) = node.child_by_field_name("left") {
                for item in named_children(left) {
                    if item.kind() == "identifier" && text(item, src) == var {
                        return true;
                    }
                }
            }
        }
        "var_spec" | "const_spec" => {
            for child in named_children(node) {
                if child.kind() == "identifier" && text(child, src) == var {
                    return true;
                }
            }
        }
        "inc_statement" | "dec_statement" => {
            if let Some(expr) = node.named_child(0) {
                if expr.kind() == "identifier" && text(expr, src) == var {
                    return true;
                }
            }
        }
        "range_clause" => {
            if let Some(left) = node.child_by_field_name("left") {
                for item in named_children(left) {
                    if item.kind() == "identifier" && text(item, src) == var {
                        return true;
                    }
                }
            }
        }
        _ => {}
    }
    for child in named_children(node) {
        if child.kind() == "func_literal" {
            continue;
        }
        if assigns_in(child, var, src) {
            return true;
        }
    }
    false
}

fn transfer_stmt<'t>(eval: &Eval<'_>, stmt: Node<'t>, env: &mut Env) {
    match stmt.kind() {
        "short_var_declaration" | "assignment_statement" => {
            let lhs: Vec<Node<'t>> = stmt
                .child_by_field_name("left")
                .map(named_children)
                .unwrap_or_default();
            let rhs: Vec<Node<'t>> = stmt
                .child_by_field_name("right")
                .map(named_children)
                .unwrap_or_default();
            let compound = stmt
                .child_by_field_name("operator")
                .map(|op| {
                    let t = text(op, eval.src);
                    t != "=" && t != ":="
                })
                .unwrap_or(false);

            if compound && lhs.len() == 1 && rhs.len() == 1 {
                if let Some(name) = plain_ident(lhs[0], eval.src) {
                    let op_full = stmt
                        .child_by_field_name("operator")
                        .map(|o| text(o, eval.src).to_string())
                        .unwrap_or_default();
                    let op = op_full.trim_end_matches('=');
                    let current = env
                        .get(&name)
                        .cloned()
                        .unwrap_or((AbstractValue::Unknown, false));
                    let (rv, rl) = eval.eval(rhs[0], env);
                    let folded = fold_binary(&current.0, op, &rv);
                    let lit = current.1 && rl && folded.is_known();
                    env.insert(name, (folded, lit));
                }
                return;
            }

            if lhs.len() == rhs.len() {
                // Evaluate right-hand sides against the pre-state, then bind.
                let values: Vec<Slot> = rhs.iter().map(|r| eval.eval(*r, env)).collect();
                for (l, v) in lhs.iter().zip(values) {
                    if let Some(name) = plain_ident(*l, eval.src) {
                        env.insert(name, v);
                    }
                }
            } else {
                // Multi-value call: nothing constant survives.
                for l in lhs {
                    if let Some(name) = plain_ident(l, eval.src) {
                        env.insert(name, (AbstractValue::Unknown, false));
                    }
                }
            }
        }
        "var_spec" | "const_spec" => {
            let names: Vec<String> = named_children(stmt)
                .into_iter()
                .filter(|c| c.kind() == "identifier")
                .map(|c| text(c, eval.src).to_string())
                .collect();
            let values: Vec<Node<'t>> = stmt
                .child_by_field_name("value")
                .map(named_children)
                .unwrap_or_default();
            if values.is_empty() {
                let ty = stmt
                    .child_by_field_name("type")
                    .map(|t| text(t, eval.src))
                    .unwrap_or("");
                for name in names {
                    env.insert(name, zero_value(ty));
                }
            } else if names.len() == values.len() {
                let slots: Vec<Slot> = values.iter().map(|v| eval.eval(*v, env)).collect();
                for (name, slot) in names.into_iter().zip(slots) {
                    env.insert(name, slot);
                }
            } else {
                for name in names {
                    env.insert(name, (AbstractValue::Unknown, false));
                }
            }
        }
        "inc_statement" | "dec_statement" => {
            if let Some(expr) = stmt.named_child(0) {
                if let Some(name) = plain_ident(expr, eval.src) {
                    let delta = if stmt.kind() == "inc_statement" { 1 } else { -1 };
                    let slot = match env.get(&name) {
                        Some((AbstractValue::IntConst(v), lit)) => {
                            (AbstractValue::IntConst(v.wrapping_add(delta)), *lit)
                        }
                        _ => (AbstractValue::Unknown, false),
                    };
                    env.insert(name, slot);
                }
            }
        }
        "range_clause" => {
            if let Some(left) = stmt.child_by_field_name("left") {
                for item in named_children(left) {
                    if let Some(name) = plain_ident(item, eval.src) {
                        env.insert(name, (AbstractValue::Unknown, false));
                    }
                }
            }
        }
        _ => {
            // Statements that wrap others (expression statements, defer/go,
            // send): no bindings, except nested declarations inside
            // declaration lists.
            for child in named_children(stmt) {
                if matches!(child.kind(), "var_spec" | "const_spec") {
                    transfer_stmt(eval, child, env);
                }
            }
        }
    }
}

fn fold_binary(a: &AbstractValue, op: &str, b: &AbstractValue) -> AbstractValue {
    use AbstractValue::*;
    match (a, b) {
        (IntConst(x), IntConst(y)) => match op {
            "+" => IntConst(x.wrapping_add(*y)),
            "-" => IntConst(x.wrapping_sub(*y)),
            "*" => IntConst(x.wrapping_mul(*y)),
            "/" if *y != 0 => IntConst(x.wrapping_div(*y)),
            "%" if *y != 0 => IntConst(x.wrapping_rem(*y)),
            "&" => IntConst(x & y),
            "|" => IntConst(x | y),
            "^" => IntConst(x ^ y),
            "<<" if (0..64).contains(y) => IntConst(x.wrapping_shl(*y as u32)),
            ">>" if (0..64).contains(y) => IntConst(x.wrapping_shr(*y as u32)),
            _ => Unknown,
        },
        (StringConst(x), StringConst(y)) if op == "+" => StringConst(format!("{x}{y}")),
        _ => Unknown,
    }
}

fn plain_ident(node: Node<'_>, src: &str) -> Option<String> {
    if node.kind() == "identifier" {
        Some(text(node, src).to_string())
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataflow::build_cfg;
    use crate::frontend::parse_source;

    /// Parse a function body, run constant propagation, and return the
    /// values of the arguments of the call named `probe`.
    fn probe_args(body: &str) -> Vec<(AbstractValue, bool)> {
        let src = format!("package p\nimport \"crypto/tls\"\nfunc f() {{\n{body}\n}}\n");
        let (file, diags) = parse_source("t.go", &src);
        assert!(diags.is_empty(), "{diags:?}");
        let decl = crate::frontend::parse::named_children(file.root_node())
            .into_iter()
            .find(|n| n.kind() == "function_declaration")
            .unwrap();
        let cfg = build_cfg(decl, &file.source, "t.go");
        let map = eval_constants(
            &cfg,
            &file.source,
            &file.imports,
            &BTreeMap::new(),
            &FnConstReturns::new(),
        );
        let mut out = Vec::new();
        for idx in 0..cfg.nodes.len() {
            cfg.owned_walk(idx, &mut |n| {
                if n.kind() == "call_expression" {
                    let is_probe = n
                        .child_by_field_name("function")
                        .map(|f| text(f, &file.source) == "probe")
                        .unwrap_or(false);
                    if is_probe {
                        if let Some(args) = n.child_by_field_name("arguments") {
                            for arg in named_children(args) {
                                out.push((map.value_of(arg), map.is_literal(arg)));
                            }
                        }
                    }
                }
            });
        }
        out
    }

    #[test]
    fn single_assignment_propagates() {
        let vals = probe_args("bits := 1024\nprobe(bits)");
        assert_eq!(vals[0].0, AbstractValue::IntConst(1024));
    }

    #[test]
    fn two_path_join_is_unknown() {
        let vals = probe_args("x := 1\nif c {\nx = 2\n}\nprobe(x)");
        assert_eq!(vals[0].0, AbstractValue::Unknown);
    }

    #[test]
    fn equal_branches_stay_constant() {
        let vals = probe_args("x := 2\nif c {\nx = 2\n}\nprobe(x)");
        assert_eq!(vals[0].0, AbstractValue::IntConst(2));
    }

    #[test]
    fn byte_conversion_tracks_length_and_literal() {
        let vals = probe_args("key := []byte(\"ab\")\nprobe(key)");
        assert_eq!(vals[0].0, AbstractValue::BytesLen(2));
        assert!(vals[0].1, "literal contents");
    }

    #[test]
    fn make_is_zero_filled_and_predictable() {
        let vals = probe_args("key := make([]byte, 16)\nprobe(key)");
        assert_eq!(vals[0].0, AbstractValue::BytesLen(16));
        assert!(vals[0].1, "zero-filled contents are predictable");
    }

    #[test]
    fn sized_array_uses_declared_length() {
        let vals = probe_args("iv := [8]byte{1, 2}\nprobe(iv, [...]byte{1, 2})");
        assert_eq!(vals[0].0, AbstractValue::BytesLen(8));
        assert!(vals[0].1);
        assert_eq!(vals[1].0, AbstractValue::BytesLen(2));
    }

    #[test]
    fn read_clears_literal_keeps_length() {
        let vals = probe_args("key := []byte(\"0123456789abcdef\")\nr.Read(key)\nprobe(key)");
        assert_eq!(vals[0].0, AbstractValue::BytesLen(16));
        assert!(!vals[0].1, "contents no longer literal after Read");
    }

    #[test]
    fn arithmetic_and_len_fold() {
        let vals = probe_args("n := 64 * 1024\nm := len(\"abcd\")\nprobe(n, m, 1<<10)");
        assert_eq!(vals[0].0, AbstractValue::IntConst(65536));
        assert_eq!(vals[1].0, AbstractValue::IntConst(4));
        assert_eq!(vals[2].0, AbstractValue::IntConst(1024));
    }

    #[test]
    fn selector_constants_resolve() {
        let vals = probe_args("v := tls.VersionTLS10\nprobe(v, tls.VersionTLS13)");
        assert_eq!(vals[0].0, AbstractValue::IntConst(0x0301));
        assert_eq!(vals[1].0, AbstractValue::IntConst(0x0304));
    }

    #[test]
    fn loop_increment_degrades_to_unknown() {
        let vals = probe_args("x := 0\nfor i := 0; i < 3; i++ {\nx += 2\n}\nprobe(x)");
        assert_eq!(vals[0].0, AbstractValue::Unknown);
    }

    #[test]
    fn byte_composite_literal_counts() {
        let vals = probe_args("iv := []byte{1, 2, 3, 4}\nprobe(iv)");
        assert_eq!(vals[0].0, AbstractValue::BytesLen(4));
        assert!(vals[0].1);
    }

    #[test]
    fn rerun_reaches_same_fixed_point() {
        let body = "x := 1\nfor c {\nx = x + 1\n}\ny := []byte(\"abc\")\nprobe(x, y)";
        let a = probe_args(body);
        let b = probe_args(body);
        assert_eq!(a, b);
    }

    #[test]
    fn go_int_literals() {
        assert_eq!(parse_go_int("0x10"), Some(16));
        assert_eq!(parse_go_int("0b101"), Some(5));
        assert_eq!(parse_go_int("0o17"), Some(15));
        assert_eq!(parse_go_int("017"), Some(15));
        assert_eq!(parse_go_int("1_000"), Some(1000));
        assert_eq!(parse_go_int("0"), Some(0));
    }
}
