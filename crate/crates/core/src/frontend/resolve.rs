//! Callee resolution: from a call expression to a package-qualified name,
//! using only the file's import table. Method calls on local values stay
//! unresolved — that is a normal outcome, not an error.

use tree_sitter::Node;

use super::parse::text;
use super::ImportTable;

/// A callee resolved through an import binding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QualifiedCallee {
    /// Canonical import path, e.g. `crypto/rand`.
    pub package: String,
    /// Member path inside the package: `New`, or a chain like
    /// `StdEncoding.EncodeToString`.
    pub member: String,
    /// Binding came from a dot import; downstream checks lower confidence.
    pub via_dot: bool,
}

impl QualifiedCallee {
    /// Final name segment: `EncodeToString` for `StdEncoding.EncodeToString`.
    pub fn leaf(&self) -> &str {
        self.member.rsplit('.').next().unwrap_or(&self.member)
    }
}

/// Everything we can say about who a call invokes.
#[derive(Debug, Clone, Default)]
pub struct CalleeResolution {
    /// Package-level resolutions. More than one only under multiple dot
    /// imports; empty means unresolved.
    pub qualified: Vec<QualifiedCallee>,
    /// Method name when the receiver is not an imported package: `x.Foo()`.
    pub method: Option<String>,
    /// Plain identifier call: `helper()`, `make(...)`.
    pub bare: Option<String>,
}

impl CalleeResolution {
    pub fn is_unresolved(&self) -> bool {
        self.qualified.is_empty()
    }

    /// Does any resolution hit `package`.`member`? `member` may be a full
    /// chain; a bare member also matches the leaf of a chain.
    pub fn matches(&self, package: &str, member: &str) -> bool {
        self.qualified
            .iter()
            .any(|q| q.package == package && (q.member == member || q.leaf() == member))
    }

    /// Any resolution inside `package`, regardless of member.
    pub fn in_package(&self, package: &str) -> bool {
        self.qualified.iter().any(|q| q.package == package)
    }

    /// The called name with the receiver stripped: method name, qualified
    /// leaf, or bare identifier.
    pub fn called_name(&self) -> Option<&str> {
        if let Some(q) = self.qualified.first() {
            return Some(q.leaf());
        }
        self.method.as_deref().or(self.bare.as_deref())
    }
}

/// Resolve the callee of a call expression against the import table.
pub fn resolve_qualified_call(
    call: Node<'_>,
    src: &str,
    imports: &ImportTable,
) -> CalleeResolution {
    let mut resolution = CalleeResolution::default();
    let Some(function) = call.child_by_field_name("function") else {
        return resolution;
    };
    let function = unwrap_parens(function);

    match function.kind() {
        "identifier" => {
            let name = text(function, src).to_string();
            // Dot imports put the package's names in scope unqualified, so
            // every dot-imported path is a candidate origin.
            for path in &imports.dot_imports {
                resolution.qualified.push(QualifiedCallee {
                    package: path.clone(),
                    member: name.clone(),
                    via_dot: true,
                });
            }
            resolution.bare = Some(name);
        }
        "selector_expression" => {
            let mut chain = Vec::new();
            let mut cursor = function;
            loop {
                let field = cursor
                    .child_by_field_name("field")
                    .map(|f| text(f, src).to_string())
                    .unwrap_or_default();
                chain.push(field);
                let Some(operand) = cursor.child_by_field_name("operand") else {
                    break;
                };
                let operand = unwrap_parens(operand);
                if operand.kind() == "selector_expression" {
                    cursor = operand;
                    continue;
                }
                if operand.kind() == "identifier" {
                    let base = text(operand, src);
                    if let Some(path) = imports.resolve(base) {
                        chain.reverse();
                        resolution.qualified.push(QualifiedCallee {
                            package: path.to_string(),
                            member: chain.join("."),
                            via_dot: false,
                        });
                        return resolution;
                    }
                }
                break;
            }
            // Receiver is a local value (or an expression): method call.
            resolution.method = chain.first().cloned().filter(|s| !s.is_empty());
        }
        _ => {}
    }
    resolution
}

fn unwrap_parens(mut node: Node<'_>) -> Node<'_> {
    while node.kind() == "parenthesized_expression" {
        match node.named_child(0) {
            Some(inner) => node = inner,
            None => break,
        }
    }
    node
}
