//! Parsing one Go file: syntax tree, package clause, import table.

use tree_sitter::{Language, Node, Parser};

use super::{default_import_name, is_test_path, ImportTable, SourceFile};

fn go_language() -> Language {
    tree_sitter_go::LANGUAGE.into()
}

/// Source text of a node.
pub(crate) fn text<'s>(node: Node<'_>, src: &'s str) -> &'s str {
    node.utf8_text(src.as_bytes()).unwrap_or("")
}

/// 1-based (line, column) of a node's start.
pub(crate) fn pos(node: Node<'_>) -> (u32, u32) {
    let p = node.start_position();
    (p.row as u32 + 1, p.column as u32 + 1)
}

/// Named children of a node, collected (cursor-based iteration has lifetime
/// knots; functions are small enough that a Vec is fine).
pub(crate) fn named_children<'t>(node: Node<'t>) -> Vec<Node<'t>> {
    let mut cursor = node.walk();
    node.named_children(&mut cursor).collect()
}

/// Pre-order walk of a subtree. `descend` decides whether to enter a node's
/// children, which is how call walks stay out of nested function literals.
pub(crate) fn preorder<'t>(
    root: Node<'t>,
    descend: &dyn Fn(Node<'t>) -> bool,
    visit: &mut dyn FnMut(Node<'t>),
) {
    visit(root);
    if !descend(root) {
        return;
    }
    for child in named_children(root) {
        preorder(child, descend, visit);
    }
}

/// Unquote a Go string literal node (interpreted or raw). Handles the
/// escapes that matter for byte-accurate lengths; unknown escapes keep
/// their literal characters.
pub(crate) fn string_literal_value(node: Node<'_>, src: &str) -> Option<String> {
    match node.kind() {
        "interpreted_string_literal" => {
            let raw = text(node, src);
            let inner = raw.strip_prefix('"')?.strip_suffix('"')?;
            Some(unescape(inner))
        }
        "raw_string_literal" => {
            let raw = text(node, src);
            let inner = raw.strip_prefix('`')?.strip_suffix('`')?;
            Some(inner.to_string())
        }
        _ => None,
    }
}

fn unescape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('n') => out.push('\n'),
            Some('t') => out.push('\t'),
            Some('r') => out.push('\r'),
            Some('\\') => out.push('\\'),
            Some('"') => out.push('"'),
            Some('\'') => out.push('\''),
            Some('0') => out.push('\0'),
            Some('a') => out.push('\x07'),
            Some('b') => out.push('\x08'),
            Some('f') => out.push('\x0c'),
            Some('v') => out.push('\x0b'),
            Some('x') => {
                let hex: String = chars.by_ref().take(2).collect();
                match u8::from_str_radix(&hex, 16) {
                    Ok(b) => out.push(b as char),
                    Err(_) => {
                        out.push_str("\\x");
                        out.push_str(&hex);
                    }
                }
            }
            Some('u') => {
                let hex: String = chars.by_ref().take(4).collect();
                match u32::from_str_radix(&hex, 16).ok().and_then(char::from_u32) {
                    Some(ch) => out.push(ch),
                    None => {
                        out.push_str("\\u");
                        out.push_str(&hex);
                    }
                }
            }
            Some(other) => {
                out.push('\\');
                out.push(other);
            }
            None => out.push('\\'),
        }
    }
    out
}

/// Parse one file. Never fails: syntax errors and cgo imports are reported
/// as diagnostics on the returned file, which is then skipped by analysis
/// (`parse_ok = false`) but kept in the model.
pub fn parse_source(path: &str, contents: &str) -> (SourceFile, Vec<String>) {
    let mut parser = Parser::new();
    parser
        .set_language(&go_language())
        .expect("bundled Go grammar is ABI-compatible");
    let tree = parser
        .parse(contents, None)
        .expect("parsing without a cancellation flag always yields a tree");

    let mut messages = Vec::new();
    let root = tree.root_node();

    let mut package_name = String::new();
    for child in named_children(root) {
        if child.kind() == "package_clause" {
            if let Some(ident) = named_children(child)
                .into_iter()
                .find(|n| n.kind() == "package_identifier")
            {
                package_name = text(ident, contents).to_string();
            }
            break;
        }
    }
    if package_name.is_empty() {
        messages.push("missing package clause".to_string());
    }

    let imports = collect_imports(root, contents);

    let mut parse_ok = true;
    if root.has_error() {
        messages.push("syntax errors; file skipped by analysis".to_string());
        parse_ok = false;
    }
    if imports.has_path("C") {
        messages.push("cgo file; skipped by analysis".to_string());
        parse_ok = false;
    }

    let file = SourceFile {
        path: path.to_string(),
        package_name,
        source: contents.to_string(),
        tree,
        imports,
        is_test: is_test_path(path),
        excluded: false,
        parse_ok,
    };
    (file, messages)
}

fn collect_imports(root: Node<'_>, src: &str) -> ImportTable {
    let mut table = ImportTable::default();
    for decl in named_children(root) {
        if decl.kind() != "import_declaration" {
            continue;
        }
        for node in named_children(decl) {
            match node.kind() {
                "import_spec" => record_import(node, src, &mut table),
                "import_spec_list" => {
                    for spec in named_children(node) {
                        if spec.kind() == "import_spec" {
                            record_import(spec, src, &mut table);
                        }
                    }
                }
                _ => {}
            }
        }
    }
    table
}

fn record_import(spec: Node<'_>, src: &str, table: &mut ImportTable) {
    let Some(path_node) = spec.child_by_field_name("path") else {
        return;
    };
    let Some(path) = string_literal_value(path_node, src) else {
        return;
    };
    match spec.child_by_field_name("name") {
        Some(name) if name.kind() == "dot" => table.dot_imports.push(path),
        Some(name) if name.kind() == "blank_identifier" => table.blank_imports.push(path),
        Some(name) => {
            let local = text(name, src).to_string();
            table.entries.insert(local, path);
        }
        None => {
            table.entries.insert(default_import_name(&path), path);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn imports_with_default_name() {
        let (file, diags) = parse_source("main.go", "package main\nimport \"crypto/md5\"\n");
        assert!(diags.is_empty());
        assert_eq!(file.package_name, "main");
        assert_eq!(file.imports.resolve("md5"), Some("crypto/md5"));
    }

    #[test]
    fn imports_with_alias_dot_and_blank() {
        let src = r#"package p

import (
	m "math/rand"
	. "strings"
	_ "embed"
)
"#;
        let (file, diags) = parse_source("p.go", src);
        assert!(diags.is_empty());
        assert_eq!(file.imports.resolve("m"), Some("math/rand"));
        assert_eq!(file.imports.dot_imports, vec!["strings"]);
        assert_eq!(file.imports.blank_imports, vec!["embed"]);
        assert!(file.imports.has_path("math/rand"));
    }

    #[test]
    fn syntax_error_yields_diagnostic_and_skip() {
        let (file, diags) = parse_source("b.go", "package b\nfunc f() {\n");
        assert!(!file.parse_ok);
        assert!(diags.iter().any(|m| m.contains("syntax")));
    }

    #[test]
    fn cgo_marked_skipped() {
        let (file, diags) = parse_source("c.go", "package c\nimport \"C\"\n");
        assert!(!file.parse_ok);
        assert!(diags.iter().any(|m| m.contains("cgo")));
    }

    #[test]
    fn parsing_is_total_on_arbitrary_bytes() {
        for garbage in ["", "\u{0}\u{1}\u{2}", "ゴー言語", "}}}}((", "package"] {
            let (_, _) = parse_source("x.go", garbage);
        }
    }

    #[test]
    fn string_literal_values() {
        let (file, _) = parse_source(
            "s.go",
            "package s\nimport \"a\\x2fb\"\nvar r = `raw\\n`\nvar i = \"a\\nb\"\n",
        );
        // The escaped import path decodes to a/b.
        assert!(file.imports.has_path("a/b"));
    }
}
