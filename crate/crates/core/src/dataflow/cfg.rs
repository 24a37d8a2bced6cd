//! Control-flow graphs at statement granularity, plus def-use chains.
//!
//! Each CFG node owns a disjoint set of syntax subtrees (a statement, a
//! branch condition, the guard expressions of a switch). Detectors walk the
//! owned subtrees, so every expression in a function body is attributed to
//! exactly one node. Synthetic join nodes own nothing.

use std::collections::{BTreeSet, HashMap};

use tree_sitter::Node;

use crate::frontend::parse::{named_children, pos, text};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CfgNodeKind {
    Statement,
    Branch,
    LoopHead,
    Join,
}

pub struct CfgNode<'t> {
    /// Disjoint syntax subtrees this node evaluates. Empty for joins.
    pub owned: Vec<Node<'t>>,
    pub kind: CfgNodeKind,
    /// 1-based source line (joins inherit the construct's line).
    pub line: u32,
    /// Variables this node (re)defines.
    pub defs: Vec<String>,
    /// Variables this node reads.
    pub uses: Vec<String>,
    /// Not reachable from the entry node.
    pub dead: bool,
}

/// One reaching-definition edge: the value written at `def` may be the one
/// read at `use_site` through variable `var`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct DefUseLink {
    pub def: usize,
    pub use_site: usize,
    pub var: String,
}

pub struct CfgFunction<'t> {
    pub file: String,
    pub name: String,
    pub decl_line: u32,
    /// Parameter names (receiver included for methods).
    pub params: Vec<String>,
    /// Result slots in order: optional name plus type text.
    pub results: Vec<(Option<String>, String)>,
    pub nodes: Vec<CfgNode<'t>>,
    /// Directed control-flow edges between node indices.
    pub edges: Vec<(usize, usize)>,
    pub entry: Option<usize>,
    /// Indices of return-statement nodes.
    pub returns: Vec<usize>,
    pub def_use: Vec<DefUseLink>,
}

impl<'t> CfgFunction<'t> {
    /// Walk the owned subtrees of one node. Function-literal nodes are
    /// visited but their bodies are not entered (they have CFGs of their
    /// own).
    pub fn owned_walk(&self, idx: usize, visit: &mut dyn FnMut(Node<'t>)) {
        for &node in &self.nodes[idx].owned {
            walk_skipping_literals(node, visit);
        }
    }

    /// Successor map over def-use links, ignoring variable names.
    pub fn def_use_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); self.nodes.len()];
        for link in &self.def_use {
            adj[link.def].insert(link.use_site);
        }
        adj.into_iter().map(|s| s.into_iter().collect()).collect()
    }

    /// Def-use links arriving at `use_site` for a given variable.
    pub fn defs_reaching<'a>(
        &'a self,
        use_site: usize,
        var: &'a str,
    ) -> impl Iterator<Item = &'a DefUseLink> + 'a {
        self.def_use
            .iter()
            .filter(move |l| l.use_site == use_site && l.var == var)
    }
}

fn walk_skipping_literals<'t>(node: Node<'t>, visit: &mut dyn FnMut(Node<'t>)) {
    visit(node);
    if node.kind() == "func_literal" {
        return;
    }
    for child in named_children(node) {
        walk_skipping_literals(child, visit);
    }
}

/// Build a CFG for a function declaration, method declaration, or function
/// literal. Unsupported statement forms become opaque single nodes; the
/// graph is always well-formed.
pub fn build_cfg<'t>(decl: Node<'t>, src: &str, file: &str) -> CfgFunction<'t> {
    let (line, _) = pos(decl);
    let name = decl
        .child_by_field_name("name")
        .map(|n| text(n, src).to_string())
        .unwrap_or_else(|| format!("func@{line}"));

    let mut params = Vec::new();
    if let Some(recv) = decl.child_by_field_name("receiver") {
        collect_param_names(recv, src, &mut params);
    }
    if let Some(list) = decl.child_by_field_name("parameters") {
        collect_param_names(list, src, &mut params);
    }

    let mut results = Vec::new();
    if let Some(res) = decl.child_by_field_name("result") {
        collect_results(res, src, &mut results);
    }

    let mut builder = Builder {
        src,
        nodes: Vec::new(),
        edges: BTreeSet::new(),
        returns: Vec::new(),
        defers: Vec::new(),
        frontier: Vec::new(),
        contexts: Vec::new(),
    };
    if let Some(body) = decl.child_by_field_name("body") {
        builder.block(body);
    }

    // Deferred statements run on the way out: make every exit point flow
    // back into them so they precede the (implicit) exit edge.
    let tail = builder.frontier.clone();
    for &d in &builder.defers.clone() {
        for &r in &builder.returns.clone() {
            if r != d {
                builder.edges.insert((r, d));
            }
        }
        for &f in &tail {
            if f != d {
                builder.edges.insert((f, d));
            }
        }
    }

    let entry = if builder.nodes.is_empty() { None } else { Some(0) };
    let mut nodes = builder.nodes;
    let edges: Vec<(usize, usize)> = builder.edges.into_iter().collect();

    mark_dead(&mut nodes, &edges, entry);
    let def_use = compute_def_use(&nodes, &edges);

    CfgFunction {
        file: file.to_string(),
        name,
        decl_line: line,
        params,
        results,
        nodes,
        edges,
        entry,
        returns: builder.returns,
        def_use,
    }
}

/// A straight-line pseudo-function over the given statements, in order.
/// Package-level initializers are analyzed through one of these per file.
pub fn linear_cfg<'t>(file: &str, name: &str, stmts: &[Node<'t>], src: &str) -> CfgFunction<'t> {
    let nodes: Vec<CfgNode<'t>> = stmts
        .iter()
        .map(|stmt| {
            let (defs, uses) = extract_defs_uses(std::slice::from_ref(stmt), src);
            CfgNode {
                owned: vec![*stmt],
                kind: CfgNodeKind::Statement,
                line: pos(*stmt).0,
                defs,
                uses,
                dead: false,
            }
        })
        .collect();
    let edges: Vec<(usize, usize)> = (1..nodes.len()).map(|i| (i - 1, i)).collect();
    let def_use = compute_def_use(&nodes, &edges);
    let entry = if nodes.is_empty() { None } else { Some(0) };
    CfgFunction {
        file: file.to_string(),
        name: name.to_string(),
        decl_line: nodes.first().map(|n| n.line).unwrap_or(1),
        params: Vec::new(),
        results: Vec::new(),
        nodes,
        edges,
        entry,
        returns: Vec::new(),
        def_use,
    }
}

/// A CFG assembled from explicit parts — random graphs and fixtures in
/// tests.
pub fn synthetic_cfg<'t>(
    file: &str,
    name: &str,
    nodes: Vec<CfgNode<'t>>,
    edges: Vec<(usize, usize)>,
    def_use: Vec<DefUseLink>,
) -> CfgFunction<'t> {
    let entry = if nodes.is_empty() { None } else { Some(0) };
    CfgFunction {
        file: file.to_string(),
        name: name.to_string(),
        decl_line: nodes.first().map(|n| n.line).unwrap_or(1),
        params: Vec::new(),
        results: Vec::new(),
        nodes,
        edges,
        entry,
        returns: Vec::new(),
        def_use,
    }
}

fn collect_param_names(list: Node<'_>, src: &str, out: &mut Vec<String>) {
    for decl in named_children(list) {
        match decl.kind() {
            "parameter_declaration" | "variadic_parameter_declaration" => {
                for child in named_children(decl) {
                    if child.kind() == "identifier" {
                        out.push(text(child, src).to_string());
                    }
                }
            }
            _ => {}
        }
    }
}

fn collect_results(res: Node<'_>, src: &str, out: &mut Vec<(Option<String>, String)>) {
    if res.kind() != "parameter_list" {
        // Single unnamed result: the type node itself.
        out.push((None, text(res, src).to_string()));
        return;
    }
    for decl in named_children(res) {
        if decl.kind() != "parameter_declaration" {
            continue;
        }
        let ty = decl
            .child_by_field_name("type")
            .map(|t| text(t, src).to_string())
            .unwrap_or_default();
        let names: Vec<String> = named_children(decl)
            .into_iter()
            .filter(|c| c.kind() == "identifier")
            .map(|c| text(c, src).to_string())
            .collect();
        if names.is_empty() {
            out.push((None, ty));
        } else {
            for n in names {
                out.push((Some(n), ty.clone()));
            }
        }
    }
}

/// Break/continue context: a loop or a breakable switch/select.
struct FlowCtx {
    label: Option<String>,
    is_loop: bool,
    continue_target: Option<usize>,
    breaks: Vec<usize>,
}

struct Builder<'t, 's> {
    src: &'s str,
    nodes: Vec<CfgNode<'t>>,
    edges: BTreeSet<(usize, usize)>,
    returns: Vec<usize>,
    defers: Vec<usize>,
    /// Nodes whose control flow continues at whatever comes next.
    frontier: Vec<usize>,
    contexts: Vec<FlowCtx>,
}

impl<'t, 's> Builder<'t, 's> {
    /// Append a node, wiring the current frontier into it.
    fn push_node(&mut self, owned: Vec<Node<'t>>, kind: CfgNodeKind, line: u32) -> usize {
        let idx = self.nodes.len();
        let (defs, uses) = extract_defs_uses(&owned, self.src);
        self.nodes.push(CfgNode {
            owned,
            kind,
            line,
            defs,
            uses,
            dead: false,
        });
        for f in std::mem::take(&mut self.frontier) {
            self.edges.insert((f, idx));
        }
        self.frontier = vec![idx];
        idx
    }

    fn connect(&mut self, from: usize, to: usize) {
        self.edges.insert((from, to));
    }

    fn block(&mut self, block: Node<'t>) {
        for child in named_children(block) {
            if child.kind() == "statement_list" {
                for stmt in named_children(child) {
                    self.statement(stmt, None);
                }
            } else {
                self.statement(child, None);
            }
        }
    }

    fn statement(&mut self, stmt: Node<'t>, label: Option<String>) {
        let (line, _) = pos(stmt);
        match stmt.kind() {
            "block" => self.block(stmt),
            "labeled_statement" => {
                let lbl = stmt
                    .child_by_field_name("label")
                    .map(|l| text(l, self.src).to_string());
                // The labeled statement is the last named child.
                if let Some(inner) = named_children(stmt)
                    .into_iter()
                    .find(|c| c.kind() != "label_name")
                {
                    self.statement(inner, lbl);
                }
            }
            "if_statement" => self.if_statement(stmt, line),
            "for_statement" => self.for_statement(stmt, label, line),
            "expression_switch_statement" | "type_switch_statement" => {
                self.switch_statement(stmt, label, line)
            }
            "select_statement" => self.select_statement(stmt, label, line),
            "return_statement" => {
                let idx = self.push_node(vec![stmt], CfgNodeKind::Statement, line);
                self.returns.push(idx);
                self.frontier.clear();
            }
            "defer_statement" => {
                let idx = self.push_node(vec![stmt], CfgNodeKind::Statement, line);
                self.defers.push(idx);
            }
            "break_statement" => {
                let idx = self.push_node(vec![stmt], CfgNodeKind::Statement, line);
                let target_label = break_label(stmt, self.src);
                if let Some(ctx) = self.find_context(target_label.as_deref(), false) {
                    ctx.breaks.push(idx);
                }
                self.frontier.clear();
            }
            "continue_statement" => {
                let idx = self.push_node(vec![stmt], CfgNodeKind::Statement, line);
                let target_label = break_label(stmt, self.src);
                if let Some(target) = self
                    .find_context(target_label.as_deref(), true)
                    .and_then(|c| c.continue_target)
                {
                    self.connect(idx, target);
                }
                self.frontier.clear();
            }
            "goto_statement" => {
                // Target wiring is not modeled; flow stops here and the
                // label's statement is reached by its lexical predecessors.
                self.push_node(vec![stmt], CfgNodeKind::Statement, line);
                self.frontier.clear();
            }
            "empty_statement" => {}
            _ => {
                // Simple statements and anything unrecognized: one opaque node.
                self.push_node(vec![stmt], CfgNodeKind::Statement, line);
            }
        }
    }

    fn find_context(&mut self, label: Option<&str>, loops_only: bool) -> Option<&mut FlowCtx> {
        self.contexts.iter_mut().rev().find(|c| {
            (!loops_only || c.is_loop)
                && match label {
                    Some(l) => c.label.as_deref() == Some(l),
                    None => true,
                }
        })
    }

    fn if_statement(&mut self, stmt: Node<'t>, line: u32) {
        if let Some(init) = stmt.child_by_field_name("initializer") {
            self.push_node(vec![init], CfgNodeKind::Statement, line);
        }
        let cond_owned = stmt.child_by_field_name("condition").into_iter().collect();
        let cond = self.push_node(cond_owned, CfgNodeKind::Branch, line);

        self.frontier = vec![cond];
        if let Some(consequence) = stmt.child_by_field_name("consequence") {
            self.block(consequence);
        }
        let then_exits = std::mem::take(&mut self.frontier);

        self.frontier = vec![cond];
        if let Some(alternative) = stmt.child_by_field_name("alternative") {
            self.statement(alternative, None);
        }
        let else_exits = std::mem::take(&mut self.frontier);

        self.frontier = then_exits;
        self.frontier.extend(else_exits);
        self.push_node(Vec::new(), CfgNodeKind::Join, line);
    }

    fn for_statement(&mut self, stmt: Node<'t>, label: Option<String>, line: u32) {
        let mut head_owned: Vec<Node<'t>> = Vec::new();
        let mut update_stmt: Option<Node<'t>> = None;
        let mut init_stmt: Option<Node<'t>> = None;
        let mut has_exit_condition = false;

        for child in named_children(stmt) {
            match child.kind() {
                "for_clause" => {
                    init_stmt = child.child_by_field_name("initializer");
                    if let Some(cond) = child.child_by_field_name("condition") {
                        head_owned.push(cond);
                        has_exit_condition = true;
                    }
                    update_stmt = child.child_by_field_name("update");
                }
                "range_clause" => {
                    head_owned.push(child);
                    has_exit_condition = true;
                }
                "block" => {}
                // Bare `for cond { ... }`.
                _ => {
                    head_owned.push(child);
                    has_exit_condition = true;
                }
            }
        }

        if let Some(init) = init_stmt {
            self.push_node(vec![init], CfgNodeKind::Statement, line);
        }
        let head = self.push_node(head_owned, CfgNodeKind::LoopHead, line);

        // The update node exists before the body so `continue` can target it.
        let update = update_stmt.map(|u| {
            let idx = self.nodes.len();
            let (defs, uses) = extract_defs_uses(&[u], self.src);
            self.nodes.push(CfgNode {
                owned: vec![u],
                kind: CfgNodeKind::Statement,
                line: pos(u).0,
                defs,
                uses,
                dead: false,
            });
            idx
        });

        self.contexts.push(FlowCtx {
            label,
            is_loop: true,
            continue_target: Some(update.unwrap_or(head)),
            breaks: Vec::new(),
        });

        self.frontier = vec![head];
        if let Some(body) = stmt.child_by_field_name("body") {
            self.block(body);
        }
        let back_target = update.unwrap_or(head);
        for f in std::mem::take(&mut self.frontier) {
            self.connect(f, back_target);
        }
        if let Some(u) = update {
            self.connect(u, head);
        }

        let ctx = self.contexts.pop().expect("pushed above");
        self.frontier = ctx.breaks;
        if has_exit_condition {
            self.frontier.push(head);
        }
        self.push_node(Vec::new(), CfgNodeKind::Join, line);
    }

    fn switch_statement(&mut self, stmt: Node<'t>, label: Option<String>, line: u32) {
        if let Some(init) = stmt.child_by_field_name("initializer") {
            self.push_node(vec![init], CfgNodeKind::Statement, line);
        }

        let children = named_children(stmt);
        let mut branch_owned = Vec::new();
        let mut cases = Vec::new();
        let mut has_default = false;
        for child in &children {
            match child.kind() {
                "expression_case" | "type_case" | "default_case" => {
                    if child.kind() == "default_case" {
                        has_default = true;
                    }
                    // Guard expressions evaluate at the branch.
                    for part in named_children(*child) {
                        if part.kind() != "statement_list" {
                            branch_owned.push(part);
                        }
                    }
                    cases.push(*child);
                }
                "block" => {
                    // type_switch bodies nest cases inside a block.
                    for inner in named_children(*child) {
                        match inner.kind() {
                            "expression_case" | "type_case" | "default_case" => {
                                if inner.kind() == "default_case" {
                                    has_default = true;
                                }
                                for part in named_children(inner) {
                                    if part.kind() != "statement_list" {
                                        branch_owned.push(part);
                                    }
                                }
                                cases.push(inner);
                            }
                            _ => {}
                        }
                    }
                }
                _ => {
                    if stmt.child_by_field_name("initializer") != Some(*child) {
                        branch_owned.push(*child);
                    }
                }
            }
        }

        let branch = self.push_node(branch_owned, CfgNodeKind::Branch, line);
        self.contexts.push(FlowCtx {
            label,
            is_loop: false,
            continue_target: None,
            breaks: Vec::new(),
        });

        let mut exits = Vec::new();
        for case in cases {
            self.frontier = vec![branch];
            for part in named_children(case) {
                if part.kind() == "statement_list" {
                    for s in named_children(part) {
                        self.statement(s, None);
                    }
                }
            }
            exits.extend(std::mem::take(&mut self.frontier));
        }
        if !has_default {
            exits.push(branch);
        }

        let ctx = self.contexts.pop().expect("pushed above");
        self.frontier = exits;
        self.frontier.extend(ctx.breaks);
        self.push_node(Vec::new(), CfgNodeKind::Join, line);
    }

    fn select_statement(&mut self, stmt: Node<'t>, label: Option<String>, line: u32) {
        let branch = self.push_node(Vec::new(), CfgNodeKind::Branch, line);
        self.contexts.push(FlowCtx {
            label,
            is_loop: false,
            continue_target: None,
            breaks: Vec::new(),
        });

        let mut exits = Vec::new();
        for case in named_children(stmt) {
            if !matches!(case.kind(), "communication_case" | "default_case") {
                continue;
            }
            self.frontier = vec![branch];
            for part in named_children(case) {
                if part.kind() == "statement_list" {
                    for s in named_children(part) {
                        self.statement(s, None);
                    }
                } else {
                    // The communication operation of the case.
                    self.push_node(vec![part], CfgNodeKind::Statement, pos(part).0);
                }
            }
            exits.extend(std::mem::take(&mut self.frontier));
        }

        let ctx = self.contexts.pop().expect("pushed above");
        self.frontier = exits;
        self.frontier.extend(ctx.breaks);
        self.push_node(Vec::new(), CfgNodeKind::Join, line);
    }
}

fn break_label(stmt: Node<'_>, src: &str) -> Option<String> {
    named_children(stmt)
        .into_iter()
        .find(|c| c.kind() == "label_name")
        .map(|l| text(l, src).to_string())
}

fn mark_dead(nodes: &mut [CfgNode<'_>], edges: &[(usize, usize)], entry: Option<usize>) {
    let Some(entry) = entry else { return };
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
    for &(a, b) in edges {
        succ[a].push(b);
    }
    let mut seen = vec![false; nodes.len()];
    let mut stack = vec![entry];
    while let Some(n) = stack.pop() {
        if std::mem::replace(&mut seen[n], true) {
            continue;
        }
        for &s in &succ[n] {
            if !seen[s] {
                stack.push(s);
            }
        }
    }
    for (i, node) in nodes.iter_mut().enumerate() {
        node.dead = !seen[i];
    }
}

// ---- defs/uses extraction -------------------------------------------------

/// Calls that write through a buffer argument, Go-convention style. The
/// written argument becomes a definition so flows like
/// `rand.Read(b); use(b)` connect.
fn out_buffer_arg(callee_name: &str, bare: bool) -> Option<usize> {
    match callee_name {
        "Read" => Some(0),
        "ReadFull" | "ReadAtLeast" => Some(1),
        "copy" if bare => Some(0),
        _ => None,
    }
}

fn extract_defs_uses(owned: &[Node<'_>], src: &str) -> (Vec<String>, Vec<String>) {
    let mut defs = Vec::new();
    let mut uses = Vec::new();
    for node in owned {
        extract(*node, src, &mut defs, &mut uses);
    }
    defs.sort();
    defs.dedup();
    uses.sort();
    uses.dedup();
    (defs, uses)
}

fn extract(node: Node<'_>, src: &str, defs: &mut Vec<String>, uses: &mut Vec<String>) {
    match node.kind() {
        "func_literal" => {} // separate function; captures are not tracked
        "short_var_declaration" => {
            if let Some(left) = node.child_by_field_name("left") {
                collect_lhs(left, src, defs, uses, false);
            }
            if let Some(right) = node.child_by_field_name("right") {
                extract(right, src, defs, uses);
            }
        }
        "assignment_statement" => {
            let compound = node
                .child_by_field_name("operator")
                .map(|op| text(op, src) != "=")
                .unwrap_or(false);
            if let Some(left) = node.child_by_field_name("left") {
                collect_lhs(left, src, defs, uses, compound);
            }
            if let Some(right) = node.child_by_field_name("right") {
                extract(right, src, defs, uses);
            }
        }
        "inc_statement" | "dec_statement" => {
            if let Some(expr) = node.named_child(0) {
                if expr.kind() == "identifier" {
                    let name = text(expr, src).to_string();
                    defs.push(name.clone());
                    uses.push(name);
                } else {
                    extract(expr, src, defs, uses);
                }
            }
        }
        "var_spec" | "const_spec" => {
            for child in named_children(node) {
                if child.kind() == "identifier" {
                    defs.push(text(child, src).to_string());
                }
            }
            if let Some(value) = node.child_by_field_name("value") {
                extract(value, src, defs, uses);
            }
        }
        "range_clause" => {
            if let Some(left) = node.child_by_field_name("left") {
                collect_lhs(left, src, defs, uses, false);
            }
            if let Some(right) = node.child_by_field_name("right") {
                extract(right, src, defs, uses);
            }
        }
        "keyed_element" => {
            // Field names in composite literals are not variable reads;
            // only the value side is.
            if let Some(value) = named_children(node).last() {
                extract(*value, src, defs, uses);
            }
        }
        "call_expression" => {
            if let Some((name, bare)) = simple_callee_name(node, src) {
                if let Some(arg_idx) = out_buffer_arg(&name, bare) {
                    if let Some(args) = node.child_by_field_name("arguments") {
                        let arg_nodes = named_children(args);
                        if let Some(arg) = arg_nodes.get(arg_idx) {
                            if arg.kind() == "identifier" {
                                defs.push(text(*arg, src).to_string());
                            }
                        }
                    }
                }
            }
            for child in named_children(node) {
                extract(child, src, defs, uses);
            }
        }
        "identifier" => {
            uses.push(text(node, src).to_string());
        }
        "blank_identifier" | "field_identifier" | "package_identifier" | "type_identifier"
        | "label_name" => {}
        _ => {
            for child in named_children(node) {
                extract(child, src, defs, uses);
            }
        }
    }
}

/// Left-hand sides: plain identifiers define; selector/index targets only
/// read their base (field writes are handled syntactically by detectors).
fn collect_lhs(
    left: Node<'_>,
    src: &str,
    defs: &mut Vec<String>,
    uses: &mut Vec<String>,
    compound: bool,
) {
    let items = if left.kind() == "expression_list" {
        named_children(left)
    } else {
        vec![left]
    };
    for item in items {
        match item.kind() {
            "identifier" => {
                let name = text(item, src).to_string();
                if compound {
                    uses.push(name.clone());
                }
                defs.push(name);
            }
            "blank_identifier" => {}
            _ => extract(item, src, defs, uses),
        }
    }
}

fn simple_callee_name(call: Node<'_>, src: &str) -> Option<(String, bool)> {
    let function = call.child_by_field_name("function")?;
    match function.kind() {
        "identifier" => Some((text(function, src).to_string(), true)),
        "selector_expression" => function
            .child_by_field_name("field")
            .map(|f| (text(f, src).to_string(), false)),
        _ => None,
    }
}

// ---- reaching definitions -> def-use links --------------------------------

fn compute_def_use(nodes: &[CfgNode<'_>], edges: &[(usize, usize)]) -> Vec<DefUseLink> {
    // Definition sites, indexed for bitset dataflow.
    let mut sites: Vec<(usize, &str)> = Vec::new();
    let mut sites_of_var: HashMap<&str, Vec<usize>> = HashMap::new();
    for (idx, node) in nodes.iter().enumerate() {
        for var in &node.defs {
            sites_of_var.entry(var.as_str()).or_default().push(sites.len());
            sites.push((idx, var.as_str()));
        }
    }
    if sites.is_empty() {
        return Vec::new();
    }

    let words = sites.len().div_ceil(64);
    let mut gen = vec![vec![0u64; words]; nodes.len()];
    let mut kill = vec![vec![0u64; words]; nodes.len()];
    for (site_idx, &(node_idx, var)) in sites.iter().enumerate() {
        gen[node_idx][site_idx / 64] |= 1 << (site_idx % 64);
        for &other in &sites_of_var[var] {
            if other != site_idx {
                kill[node_idx][other / 64] |= 1 << (other % 64);
            }
        }
    }

    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
    let mut succs: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
    for &(a, b) in edges {
        preds[b].push(a);
        succs[a].push(b);
    }

    let mut inb = vec![vec![0u64; words]; nodes.len()];
    let mut outb = vec![vec![0u64; words]; nodes.len()];
    let mut worklist: Vec<usize> = (0..nodes.len()).collect();
    while let Some(n) = worklist.pop() {
        let mut new_in = vec![0u64; words];
        for &p in &preds[n] {
            for w in 0..words {
                new_in[w] |= outb[p][w];
            }
        }
        let mut new_out = vec![0u64; words];
        let mut changed = false;
        for w in 0..words {
            new_out[w] = gen[n][w] | (new_in[w] & !kill[n][w]);
            if new_out[w] != outb[n][w] {
                changed = true;
            }
        }
        inb[n] = new_in;
        if changed {
            outb[n] = new_out;
            for &s in &succs[n] {
                worklist.push(s);
            }
        }
    }

    let mut links = BTreeSet::new();
    for (n, node) in nodes.iter().enumerate() {
        for var in &node.uses {
            let Some(var_sites) = sites_of_var.get(var.as_str()) else {
                continue;
            };
            for &s in var_sites {
                if inb[n][s / 64] & (1 << (s % 64)) != 0 {
                    links.insert(DefUseLink {
                        def: sites[s].0,
                        use_site: n,
                        var: var.clone(),
                    });
                }
            }
        }
    }
    links.into_iter().collect()
}
