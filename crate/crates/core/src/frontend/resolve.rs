use std::collections::{BTreeMap, HashMap};

use super::ast::{AstClass, Receiver, TypeHint};
use super::{Diagnostic, ProjectAst};
use crate::error::{Error, Result};

/// Library types that commonly appear as receivers. They stay external but
/// are not worth a diagnostic.
const WELL_KNOWN: &[&str] = &["Object", "String", "System", "Math", "Integer", "Long", "Double", "Boolean", "Character", "StringBuilder"];

/// Static type of a member reference's receiver after name resolution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReceiverType {
    /// A class declared in the project.
    Project(String),
    /// A type the project does not declare (library classes, primitives).
    External(String),
    /// Depends on what an earlier reference resolves to; evaluated during
    /// graph construction.
    Deferred(TypeHint),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolvedClass {
    pub ast: AstClass,
    pub file: String,
    pub superclass: Option<usize>,
    /// `receiver_types[m][r]` is the receiver type of body reference `r` of method `m`.
    pub receiver_types: Vec<Vec<ReceiverType>>,
}

/// The project after name resolution. Immutable once built.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ResolvedProject {
    /// In file-path order, then declaration order.
    pub classes: Vec<ResolvedClass>,
    pub sources: BTreeMap<String, String>,
    pub diagnostics: Vec<Diagnostic>,
}

impl ResolvedProject {
    pub fn class_index(&self, name: &str) -> Option<usize> {
        self.classes.iter().position(|c| c.ast.name == name)
    }

    /// Proper ancestors, nearest first.
    pub fn ancestors(&self, class: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut cur = self.classes[class].superclass;
        while let Some(c) = cur {
            out.push(c);
            cur = self.classes[c].superclass;
        }
        out
    }
}

pub fn resolve_project(ast: ProjectAst) -> Result<ResolvedProject> {
    let mut diagnostics = ast.diagnostics;
    let mut sources = BTreeMap::new();
    let mut flat: Vec<(String, AstClass)> = Vec::new();
    for file in ast.files {
        for class in file.classes {
            flat.push((file.path.clone(), class));
        }
        sources.insert(file.path, file.text);
    }
    let index: HashMap<String, usize> = flat.iter().enumerate().map(|(i, (_, c))| (c.name.clone(), i)).collect();

    let mut superclass = Vec::with_capacity(flat.len());
    for (_, class) in &flat {
        let sup = match &class.extends_name {
            None => None,
            Some(name) => match index.get(name) {
                Some(&i) => Some(i),
                None => {
                    diagnostics.push(Diagnostic {
                        message: format!("{} extends unknown class {name}", class.name),
                        span: Some(class.span.clone()),
                    });
                    None
                }
            },
        };
        superclass.push(sup);
    }

    for start in 0..flat.len() {
        let mut path = vec![start];
        let mut cur = superclass[start];
        while let Some(c) = cur {
            if c == start {
                let mut cycle: Vec<String> = path.iter().map(|&i| flat[i].1.name.clone()).collect();
                cycle.push(flat[start].1.name.clone());
                return Err(Error::CyclicInheritance { cycle });
            }
            if path.contains(&c) {
                // Cycle not through `start`; reported when its members are visited.
                break;
            }
            path.push(c);
            cur = superclass[c];
        }
    }

    let type_of = |name: &str| {
        if index.contains_key(name) {
            ReceiverType::Project(name.to_owned())
        } else {
            ReceiverType::External(name.to_owned())
        }
    };

    let mut classes = Vec::with_capacity(flat.len());
    for (i, (file, class)) in flat.iter().enumerate() {
        let mut receiver_types = Vec::with_capacity(class.methods.len());
        for method in &class.methods {
            let mut types = Vec::with_capacity(method.body_refs.len());
            for r in &method.body_refs {
                let ty = match &r.receiver {
                    Receiver::ImplicitThis => ReceiverType::Project(class.name.clone()),
                    Receiver::Super => match superclass[i] {
                        Some(s) => ReceiverType::Project(flat[s].1.name.clone()),
                        None => ReceiverType::External("super".into()),
                    },
                    Receiver::Variable { type_name, .. } => type_of(type_name),
                    Receiver::Class(name) => type_of(name),
                    Receiver::Expr(TypeHint::Known(t)) => type_of(t),
                    Receiver::Expr(hint) => ReceiverType::Deferred(hint.clone()),
                };
                if let ReceiverType::External(t) = &ty {
                    if WELL_KNOWN.contains(&t.as_str()) {
                        types.push(ty);
                        continue;
                    }
                    diagnostics.push(Diagnostic {
                        message: format!("receiver type `{t}` of `{}` is not a project class", r.member_name),
                        span: Some(r.span.clone()),
                    });
                }
                types.push(ty);
            }
            receiver_types.push(types);
        }
        classes.push(ResolvedClass {
            ast: class.clone(),
            file: file.clone(),
            superclass: superclass[i],
            receiver_types,
        });
    }

    Ok(ResolvedProject {
        classes,
        sources,
        diagnostics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::parse_sources;

    #[test]
    fn receivers_and_superclasses() {
        let p = parse_sources([(
            "f.jsub",
            "class Source { void method(Target target) { target.doSomething(); } } class Target { void doSomething() {} } class Sub extends Target {}",
        )])
        .unwrap();
        let r = resolve_project(p).unwrap();
        let sub = r.class_index("Sub").unwrap();
        assert_eq!(r.classes[sub].superclass, r.class_index("Target"));
        assert_eq!(r.classes[0].receiver_types[0][0], ReceiverType::Project("Target".into()));
        assert!(r.ancestors(r.class_index("Source").unwrap()).is_empty());
    }

    #[test]
    fn cyclic_inheritance() {
        let p = parse_sources([("f.jsub", "class A extends B {} class B extends A {}")]).unwrap();
        let err = resolve_project(p).unwrap_err();
        assert_eq!(err, Error::CyclicInheritance { cycle: vec!["A".into(), "B".into(), "A".into()] });
    }

    #[test]
    fn unknown_superclass_is_a_diagnostic() {
        let p = parse_sources([("f.jsub", "class A extends Missing {}")]).unwrap();
        let r = resolve_project(p).unwrap();
        assert_eq!(r.classes[0].superclass, None);
        assert_eq!(r.diagnostics.len(), 1);
    }
}
