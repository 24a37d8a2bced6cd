//! Go project discovery and parsing.
//!
//! Builds an immutable [`ProjectModel`]: every `.go` file under a root,
//! parsed to a concrete syntax tree, with an import table and test-file
//! classification per file. There is no type checking here or anywhere
//! downstream — all later analyses work from names, imports, and local
//! dataflow only.

pub(crate) mod parse;
mod resolve;

pub use parse::parse_source;
pub use resolve::{resolve_qualified_call, CalleeResolution, QualifiedCallee};

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use walkdir::WalkDir;

use crate::error::{Error, Result};

/// One parsed Go source file. The syntax tree stays alive for the whole
/// analysis; nodes borrowed from it never outlive the model.
#[derive(Debug)]
pub struct SourceFile {
    /// Root-relative path with forward-slash separators.
    pub path: String,
    pub package_name: String,
    pub source: String,
    pub tree: tree_sitter::Tree,
    pub imports: ImportTable,
    /// `_test.go` file, or located under a `testdata` directory.
    pub is_test: bool,
    /// Test file while test exclusion is on.
    pub excluded: bool,
    /// False when the tree contains syntax errors or the file is cgo;
    /// such files stay in the model but produce no findings.
    pub parse_ok: bool,
}

impl SourceFile {
    /// True when detectors should look at this file.
    pub fn analyzable(&self) -> bool {
        self.parse_ok && !self.excluded
    }

    pub fn root_node(&self) -> tree_sitter::Node<'_> {
        self.tree.root_node()
    }
}

/// Local import bindings of one file.
#[derive(Debug, Clone, Default)]
pub struct ImportTable {
    /// Local name -> canonical import path. Contains explicit aliases and
    /// the implicit name (the last path segment) when no alias is given.
    pub entries: BTreeMap<String, String>,
    /// Paths imported via `.` (their exported names join the file scope).
    pub dot_imports: Vec<String>,
    /// Paths imported as `_` (side effects only).
    pub blank_imports: Vec<String>,
}

impl ImportTable {
    /// Import path bound to a local name, if any.
    pub fn resolve(&self, local: &str) -> Option<&str> {
        self.entries.get(local).map(String::as_str)
    }

    /// All imported paths, however they are bound.
    pub fn paths(&self) -> impl Iterator<Item = &str> {
        self.entries
            .values()
            .map(String::as_str)
            .chain(self.dot_imports.iter().map(String::as_str))
            .chain(self.blank_imports.iter().map(String::as_str))
    }

    pub fn has_path(&self, path: &str) -> bool {
        self.paths().any(|p| p == path)
    }

    pub fn any_path(&self, pred: impl Fn(&str) -> bool) -> bool {
        self.paths().any(pred)
    }
}

/// The implicit local name of an import path: its last segment, skipping a
/// major-version suffix (`math/rand/v2` binds `rand`) and the `go-`/`-go`
/// decorations common in repository names.
pub fn default_import_name(path: &str) -> String {
    let mut segments = path.split('/').rev().filter(|s| !s.is_empty());
    let mut name = segments.next().unwrap_or(path);
    if is_version_segment(name) {
        if let Some(prev) = segments.next() {
            name = prev;
        }
    }
    let name = name.strip_prefix("go-").unwrap_or(name);
    let name = name.strip_suffix("-go").unwrap_or(name);
    name.to_string()
}

fn is_version_segment(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next() == Some('v') && chars.as_str().chars().all(|c| c.is_ascii_digit())
        && s.len() > 1
}

/// File-level problem that did not stop the scan.
#[derive(Debug, Clone)]
pub struct Diagnostic {
    pub path: Option<String>,
    pub message: String,
}

/// A parsed Go module: all discovered files in a stable order.
#[derive(Debug)]
pub struct ProjectModel {
    pub root_path: PathBuf,
    /// `module` line of go.mod when present, else the root directory name.
    pub module_name: String,
    /// Ordered lexicographically by path.
    pub files: Vec<SourceFile>,
    pub diagnostics: Vec<Diagnostic>,
}

// The model is shared read-only across analysis workers.
const _: fn() = || {
    fn assert_send_sync<T: Send + Sync>() {}
    assert_send_sync::<ProjectModel>();
};

impl ProjectModel {
    pub fn analyzable_files(&self) -> impl Iterator<Item = (usize, &SourceFile)> {
        self.files
            .iter()
            .enumerate()
            .filter(|(_, f)| f.analyzable())
    }
}

/// Normalize a path string: forward slashes, no `.` segments, `..` resolved
/// where possible, no duplicate or trailing separators. Idempotent.
pub fn normalize_path(text: &str) -> String {
    let unified = text.replace('\\', "/");
    let absolute = unified.starts_with('/');
    let mut out: Vec<&str> = Vec::new();
    for seg in unified.split('/') {
        match seg {
            "" | "." => {}
            ".." => {
                if matches!(out.last(), Some(&last) if last != "..") {
                    out.pop();
                } else if !absolute {
                    out.push("..");
                }
            }
            other => out.push(other),
        }
    }
    let joined = out.join("/");
    if absolute {
        format!("/{joined}")
    } else {
        joined
    }
}

/// Test classification: Go test files and anything under `testdata`.
pub fn is_test_path(path: &str) -> bool {
    let normalized = normalize_path(path);
    normalized.ends_with("_test.go")
        || normalized.split('/').any(|seg| seg == "testdata")
}

/// Walk a directory tree and parse every `.go` file into a [`ProjectModel`].
///
/// `vendor/`, `testdata/`, and hidden directories are skipped. With
/// `exclude_tests`, test files stay in the model but are marked excluded
/// from analysis. Unreadable or unparseable files become diagnostics; only
/// an unusable root is fatal.
pub fn discover_project(root: &Path, exclude_tests: bool) -> Result<ProjectModel> {
    if !root.is_dir() {
        return Err(Error::Config(format!(
            "scan root {} is not a readable directory",
            root.display()
        )));
    }

    let mut rel_paths: Vec<(String, PathBuf)> = Vec::new();
    for entry in WalkDir::new(root)
        .follow_links(false)
        .into_iter()
        .filter_entry(|e| e.depth() == 0 || !skip_dir_entry(e))
    {
        let entry = match entry {
            Ok(e) => e,
            Err(_) => continue, // unreadable subtree: skip, not fatal
        };
        if !entry.file_type().is_file() {
            continue;
        }
        let name = entry.file_name().to_string_lossy();
        if !name.ends_with(".go") {
            continue;
        }
        let rel = entry
            .path()
            .strip_prefix(root)
            .unwrap_or(entry.path())
            .to_string_lossy()
            .into_owned();
        rel_paths.push((normalize_path(&rel), entry.path().to_path_buf()));
    }
    rel_paths.sort();
    rel_paths.dedup_by(|a, b| a.0 == b.0);

    let parsed: Vec<(Option<SourceFile>, Vec<Diagnostic>)> = rel_paths
        .par_iter()
        .map(|(rel, abs)| load_file(rel, abs, exclude_tests))
        .collect();

    let mut files = Vec::with_capacity(parsed.len());
    let mut diagnostics = Vec::new();
    for (file, diags) in parsed {
        diagnostics.extend(diags);
        if let Some(f) = file {
            files.push(f);
        }
    }

    let module_name = read_module_name(root).unwrap_or_else(|| {
        root.file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .filter(|n| !n.is_empty())
            .unwrap_or_else(|| "project".to_string())
    });

    Ok(ProjectModel {
        root_path: root.to_path_buf(),
        module_name,
        files,
        diagnostics,
    })
}

fn skip_dir_entry(entry: &walkdir::DirEntry) -> bool {
    if !entry.file_type().is_dir() {
        return false;
    }
    let name = entry.file_name().to_string_lossy();
    name == "vendor" || name == "testdata" || name.starts_with('.')
}

fn load_file(rel: &str, abs: &Path, exclude_tests: bool) -> (Option<SourceFile>, Vec<Diagnostic>) {
    let contents = match std::fs::read_to_string(abs) {
        Ok(c) => c,
        Err(e) => {
            return (
                None,
                vec![Diagnostic {
                    path: Some(rel.to_string()),
                    message: format!("unreadable: {e}"),
                }],
            );
        }
    };
    let (mut file, messages) = parse_source(rel, &contents);
    file.excluded = exclude_tests && file.is_test;
    let diags = messages
        .into_iter()
        .map(|message| Diagnostic {
            path: Some(rel.to_string()),
            message,
        })
        .collect();
    (Some(file), diags)
}

/// The `module` line of go.mod, when the file exists and has one.
fn read_module_name(root: &Path) -> Option<String> {
    let text = std::fs::read_to_string(root.join("go.mod")).ok()?;
    for line in text.lines() {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix("module") {
            let name = rest.trim().trim_matches('"');
            if !name.is_empty() {
                return Some(name.to_string());
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalize_is_idempotent_and_cleans() {
        let cases = [
            ("a/b.go", "a/b.go"),
            ("./a/b.go", "a/b.go"),
            ("a//b.go", "a/b.go"),
            ("a\\b.go", "a/b.go"),
            ("a/./b/../c.go", "a/c.go"),
            ("/repo/a.go", "/repo/a.go"),
            ("", ""),
        ];
        for (input, want) in cases {
            let once = normalize_path(input);
            assert_eq!(once, want, "normalize({input:?})");
            assert_eq!(normalize_path(&once), once, "idempotence on {input:?}");
        }
    }

    #[test]
    fn test_classification() {
        assert!(is_test_path("a/b_test.go"));
        assert!(is_test_path("pkg/testdata/x.go"));
        assert!(is_test_path("testdata/x.go"));
        assert!(!is_test_path("a/btest.go"));
        assert!(!is_test_path("a/testdatax/y.go"));
        assert!(!is_test_path("contest.go"));
    }

    #[test]
    fn default_import_names() {
        assert_eq!(default_import_name("crypto/md5"), "md5");
        assert_eq!(default_import_name("math/rand/v2"), "rand");
        assert_eq!(default_import_name("github.com/golang-jwt/jwt/v5"), "jwt");
        assert_eq!(default_import_name("github.com/dgrijalva/jwt-go"), "jwt");
        assert_eq!(default_import_name("golang.org/x/crypto/ssh"), "ssh");
    }

    #[test]
    fn discovery_skips_vendor_and_classifies_tests() {
        let dir = tempfile::tempdir().unwrap();
        let root = dir.path();
        std::fs::write(root.join("a.go"), "package a\n").unwrap();
        std::fs::write(root.join("a_test.go"), "package a\n").unwrap();
        std::fs::create_dir_all(root.join("vendor/dep")).unwrap();
        std::fs::write(root.join("vendor/dep/x.go"), "package dep\n").unwrap();
        std::fs::create_dir_all(root.join(".git")).unwrap();
        std::fs::write(root.join(".git/h.go"), "package h\n").unwrap();
        std::fs::write(root.join("go.mod"), "module example.com/demo\n").unwrap();

        let model = discover_project(root, true).unwrap();
        assert_eq!(model.module_name, "example.com/demo");
        let paths: Vec<&str> = model.files.iter().map(|f| f.path.as_str()).collect();
        assert_eq!(paths, vec!["a.go", "a_test.go"]);
        assert_eq!(model.analyzable_files().count(), 1);
        let test_file = &model.files[1];
        assert!(test_file.is_test && test_file.excluded);
    }

    #[test]
    fn discovery_of_empty_root_succeeds() {
        let dir = tempfile::tempdir().unwrap();
        let model = discover_project(dir.path(), true).unwrap();
        assert!(model.files.is_empty());
    }

    #[test]
    fn discovery_rejects_missing_root() {
        let err = discover_project(Path::new("/nonexistent/road"), true).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn files_are_ordered_and_unique() {
        let dir = tempfile::tempdir().unwrap();
        let root = dir.path();
        std::fs::create_dir_all(root.join("z")).unwrap();
        std::fs::create_dir_all(root.join("a")).unwrap();
        std::fs::write(root.join("z/1.go"), "package z\n").unwrap();
        std::fs::write(root.join("a/2.go"), "package a\n").unwrap();
        std::fs::write(root.join("m.go"), "package m\n").unwrap();
        let model = discover_project(root, true).unwrap();
        let paths: Vec<&str> = model.files.iter().map(|f| f.path.as_str()).collect();
        let mut sorted = paths.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(paths, sorted);
    }
}
