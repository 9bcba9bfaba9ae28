//! Jsub source frontend: lexing, parsing, project loading and name resolution.
//!
//! The grammar is documented in `docs/jsub-grammar.md`.

mod ast;
mod lexer;
mod parser;
mod resolve;
mod span;

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

pub use ast::{AstClass, AstField, AstMethod, AstParam, BodyRef, RefKind, Receiver, TypeHint};
pub use parser::parse_file;
pub use resolve::{resolve_project, ReceiverType, ResolvedClass, ResolvedProject};
pub use span::SourceSpan;

use crate::error::{Error, Result};
use crate::template::Signature;

/// A non-fatal finding about the input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub message: String,
    pub span: Option<SourceSpan>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceFile {
    /// Path relative to the project root, `/`-separated.
    pub path: String,
    pub text: String,
    pub classes: Vec<AstClass>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ProjectAst {
    pub files: Vec<SourceFile>,
    pub diagnostics: Vec<Diagnostic>,
}

impl ProjectAst {
    pub fn classes(&self) -> impl Iterator<Item = &AstClass> {
        self.files.iter().flat_map(|f| f.classes.iter())
    }
}

fn is_source(path: &Path) -> bool {
    matches!(path.extension().and_then(|e| e.to_str()), Some("jsub" | "java"))
}

fn collect_sources(dir: &Path, root: &Path, out: &mut Vec<(String, std::path::PathBuf)>) -> Result<()> {
    let io = |e: std::io::Error| Error::Io {
        path: dir.to_path_buf(),
        message: e.to_string(),
    };
    for entry in fs::read_dir(dir).map_err(io)? {
        let path = entry.map_err(io)?.path();
        if path.is_dir() {
            collect_sources(&path, root, out)?;
        } else if is_source(&path) {
            let rel = path.strip_prefix(root).unwrap_or(&path);
            let rel = rel.components().map(|c| c.as_os_str().to_string_lossy()).collect::<Vec<_>>().join("/");
            out.push((rel, path));
        }
    }
    Ok(())
}

/// Parses every `*.jsub` / `*.java` file under `root`, in lexicographic order
/// of their relative paths.
pub fn parse_project(root: &Path) -> Result<ProjectAst> {
    if !root.is_dir() {
        return Err(Error::Io {
            path: root.to_path_buf(),
            message: "not a directory".into(),
        });
    }
    let mut found = Vec::new();
    collect_sources(root, root, &mut found)?;
    found.sort();
    let mut sources = Vec::with_capacity(found.len());
    for (rel, path) in found {
        let text = fs::read_to_string(&path).map_err(|e| Error::Io {
            path: path.clone(),
            message: e.to_string(),
        })?;
        sources.push((rel, text));
    }
    parse_sources(sources)
}

/// Parses in-memory sources given as `(relative path, text)` pairs. Files are
/// processed in lexicographic path order regardless of input order.
pub fn parse_sources<P: Into<String>, T: Into<String>>(sources: impl IntoIterator<Item = (P, T)>) -> Result<ProjectAst> {
    let mut sources: Vec<(String, String)> = sources.into_iter().map(|(p, t)| (p.into(), t.into())).collect();
    sources.sort_by(|a, b| a.0.cmp(&b.0));
    let mut project = ProjectAst::default();
    let mut declared: HashMap<String, String> = HashMap::new();
    for (path, text) in sources {
        let classes = parse_file(&text, &path)?;
        for class in &classes {
            if let Some(first) = declared.insert(class.name.clone(), path.clone()) {
                return Err(Error::DuplicateClass {
                    name: class.name.clone(),
                    first,
                    second: path,
                });
            }
            project.diagnostics.extend(duplicate_members(class));
        }
        project.files.push(SourceFile { path, text, classes });
    }
    Ok(project)
}

/// Members that repeat a signature (methods) or a name (fields) within one
/// class. Both declarations are kept.
pub fn duplicate_members(class: &AstClass) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let mut methods: HashMap<Signature, &AstMethod> = HashMap::new();
    for m in &class.methods {
        if let Some(prev) = methods.insert(m.signature(), m) {
            out.push(Diagnostic {
                message: format!(
                    "duplicate method {}.{} (first declared at {})",
                    class.name,
                    m.signature(),
                    prev.span
                ),
                span: Some(m.span.clone()),
            });
        }
    }
    let mut fields: HashMap<&str, &AstField> = HashMap::new();
    for f in &class.fields {
        if let Some(prev) = fields.insert(&f.name, f) {
            out.push(Diagnostic {
                message: format!("duplicate field {}.{} (first declared at {})", class.name, f.name, prev.span),
                span: Some(f.span.clone()),
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicate_class_across_files() {
        let err = parse_sources([("a.jsub", "class Target {}"), ("b.jsub", "class Target {}")]).unwrap_err();
        assert_eq!(err.name(), "DuplicateClass");
    }

    #[test]
    fn duplicate_member_is_a_diagnostic() {
        let p = parse_sources([("a.jsub", "class A { void m() {} void m() {} int f; int f; }")]).unwrap();
        assert_eq!(p.diagnostics.len(), 2);
        assert_eq!(p.files[0].classes[0].methods.len(), 2);
    }

    #[test]
    fn files_are_ordered_by_path() {
        let p = parse_sources([("z.jsub", "class Z {}"), ("a/b.jsub", "class B {}")]).unwrap();
        let paths: Vec<_> = p.files.iter().map(|f| f.path.as_str()).collect();
        assert_eq!(paths, ["a/b.jsub", "z.jsub"]);
    }

    #[test]
    fn empty_directory() {
        let dir = tempfile::tempdir().unwrap();
        assert_eq!(parse_project(dir.path()).unwrap().classes().count(), 0);
    }
}
