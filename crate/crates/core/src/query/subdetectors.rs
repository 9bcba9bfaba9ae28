//! The subdetector library.
//!
//! Each free function is a pure set-to-set step; [`Subdetector`] wraps one
//! with its declared input and output kinds so steps can be chained
//! dynamically.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use super::{LocationSet, SetKind};
use crate::error::{Error, Result};
use crate::graph::lookup::{ancestors, descendants, lineage, superclass};
use crate::graph::{LocationId, NodeTag, ProgramGraph, ReceiverKind, RelationTag};
use crate::template::Signature;

fn collect(kind: SetKind, ids: impl IntoIterator<Item = LocationId>) -> LocationSet {
    LocationSet::new_unchecked(kind, ids)
}

fn children(g: &ProgramGraph, input: &LocationSet, tag: NodeTag, kind: SetKind) -> LocationSet {
    collect(
        kind,
        input
            .iter()
            .flat_map(|c| g.targets(c, RelationTag::Contains))
            .filter(|m| g.tag(*m) == Some(tag)),
    )
}

/// Follows `tag` edges from every member until nothing new turns up.
fn closure(g: &ProgramGraph, input: &LocationSet, tag: RelationTag, forward: bool) -> BTreeSet<LocationId> {
    let mut out = BTreeSet::new();
    let mut frontier: Vec<LocationId> = input.iter().collect();
    while let Some(n) = frontier.pop() {
        let next: Vec<LocationId> = if forward {
            g.targets(n, tag).collect()
        } else {
            g.sources(n, tag).collect()
        };
        for m in next {
            if out.insert(m) {
                frontier.push(m);
            }
        }
    }
    out
}

pub fn classes_by_name(g: &ProgramGraph, input: &LocationSet, name: &str) -> LocationSet {
    collect(SetKind::Class, input.iter().filter(|c| g.name(*c) == name))
}

pub fn methods_of(g: &ProgramGraph, input: &LocationSet) -> LocationSet {
    children(g, input, NodeTag::Method, SetKind::Method)
}

pub fn fields_of(g: &ProgramGraph, input: &LocationSet) -> LocationSet {
    children(g, input, NodeTag::Field, SetKind::Field)
}

/// Proper ancestors of every member.
pub fn superclasses(g: &ProgramGraph, input: &LocationSet) -> LocationSet {
    collect(SetKind::Class, input.iter().flat_map(|c| ancestors(g, c)))
}

pub fn superclasses_direct(g: &ProgramGraph, input: &LocationSet) -> LocationSet {
    collect(SetKind::Class, input.iter().filter_map(|c| superclass(g, c)))
}

/// Proper descendants of every member.
pub fn subclasses(g: &ProgramGraph, input: &LocationSet) -> LocationSet {
    collect(SetKind::Class, input.iter().flat_map(|c| descendants(g, c)))
}

pub fn subclasses_direct(g: &ProgramGraph, input: &LocationSet) -> LocationSet {
    collect(
        SetKind::Class,
        input.iter().flat_map(|c| g.sources(c, RelationTag::Extends)),
    )
}

/// Class enclosing each member. Classes map to themselves.
pub fn enclosing_classes(g: &ProgramGraph, input: &LocationSet) -> LocationSet {
    collect(
        SetKind::Class,
        input.iter().filter_map(|n| match g.tag(n) {
            Some(NodeTag::Class) => Some(n),
            _ => g.enclosing_class(n),
        }),
    )
}

pub fn methods_matching(g: &ProgramGraph, input: &LocationSet, sig: &Signature) -> LocationSet {
    collect(
        SetKind::Method,
        input.iter().filter(|m| g.signature(*m).as_ref() == Some(sig)),
    )
}

pub fn methods_named(g: &ProgramGraph, input: &LocationSet, name: &str) -> LocationSet {
    collect(SetKind::Method, input.iter().filter(|m| g.name(*m) == name))
}

/// Methods that members override, transitively up the chain.
pub fn overridden_by(g: &ProgramGraph, input: &LocationSet) -> LocationSet {
    collect(SetKind::Method, closure(g, input, RelationTag::Overrides, true))
}

pub fn overridden_by_direct(g: &ProgramGraph, input: &LocationSet) -> LocationSet {
    collect(
        SetKind::Method,
        input.iter().flat_map(|m| g.targets(m, RelationTag::Overrides)),
    )
}

/// Methods overriding members, transitively down the chain.
pub fn overrides_of(g: &ProgramGraph, input: &LocationSet) -> LocationSet {
    collect(SetKind::Method, closure(g, input, RelationTag::Overrides, false))
}

pub fn overrides_of_direct(g: &ProgramGraph, input: &LocationSet) -> LocationSet {
    collect(
        SetKind::Method,
        input.iter().flat_map(|m| g.sources(m, RelationTag::Overrides)),
    )
}

pub fn callers_of(g: &ProgramGraph, input: &LocationSet) -> LocationSet {
    collect(
        SetKind::CallSite,
        input.iter().flat_map(|m| g.sources(m, RelationTag::Calls)),
    )
}

/// Fields and methods of a member's own class or its ancestors that its
/// body reaches through an implicit `this` or through `super`.
pub fn local_context_refs(g: &ProgramGraph, input: &LocationSet) -> LocationSet {
    let mut out = BTreeSet::new();
    for m in input.iter() {
        let Some(class) = g.enclosing_class(m) else { continue };
        let context = lineage(g, class);
        for r in g.targets(m, RelationTag::Contains) {
            let Some(node) = g.node(r) else { continue };
            if !matches!(node.attrs.receiver_kind, Some(ReceiverKind::ImplicitThis | ReceiverKind::Super)) {
                continue;
            }
            for rel in [RelationTag::Calls, RelationTag::Reads, RelationTag::Writes] {
                for target in g.targets(r, rel) {
                    if g.enclosing_class(target).is_some_and(|c| context.contains(&c)) {
                        out.insert(target);
                    }
                }
            }
        }
    }
    collect(SetKind::Any, out)
}

/// Members whose visibility is not private. Kind preserving.
pub fn non_private(g: &ProgramGraph, input: &LocationSet) -> LocationSet {
    input.clone().retain(|n| g.node(*n).is_some_and(|n| !n.is_private()))
}

pub fn concrete(g: &ProgramGraph, input: &LocationSet) -> LocationSet {
    input.clone().retain(|n| g.node(*n).is_some_and(|n| !n.attrs.is_abstract))
}

pub fn abstract_only(g: &ProgramGraph, input: &LocationSet) -> LocationSet {
    input.clone().retain(|n| g.node(*n).is_some_and(|n| n.attrs.is_abstract))
}

type Op = dyn Fn(&ProgramGraph, &LocationSet) -> LocationSet + Send + Sync;

/// A named, kinded query step.
#[derive(Clone)]
pub struct Subdetector {
    name: String,
    input: SetKind,
    output: SetKind,
    op: Arc<Op>,
}

impl fmt::Debug for Subdetector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} -> {}", self.name, self.input, self.output)
    }
}

impl Subdetector {
    pub fn new(
        name: impl Into<String>,
        input: SetKind,
        output: SetKind,
        op: impl Fn(&ProgramGraph, &LocationSet) -> LocationSet + Send + Sync + 'static,
    ) -> Self {
        Subdetector {
            name: name.into(),
            input,
            output,
            op: Arc::new(op),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn input_kind(&self) -> SetKind {
        self.input
    }

    pub fn output_kind(&self) -> SetKind {
        self.output
    }

    /// Runs the step. The result is narrowed to the declared output kind,
    /// so a custom op cannot leak ill-kinded ids.
    pub fn apply(&self, g: &ProgramGraph, input: &LocationSet) -> Result<LocationSet> {
        if !self.input.accepts(input.kind()) {
            return Err(Error::KindMismatch {
                producer: "input".into(),
                consumer: self.name.clone(),
                expected: self.input,
                found: input.kind(),
            });
        }
        let raw = (self.op)(g, input);
        Ok(LocationSet::filtered(g, self.output, raw.iter()))
    }

    pub fn classes_by_name(name: impl Into<String>) -> Self {
        let name = name.into();
        Self::new("classesByName", SetKind::Class, SetKind::Class, move |g, s| {
            classes_by_name(g, s, &name)
        })
    }

    pub fn methods_of() -> Self {
        Self::new("methods", SetKind::Class, SetKind::Method, methods_of)
    }

    pub fn fields_of() -> Self {
        Self::new("fields", SetKind::Class, SetKind::Field, fields_of)
    }

    pub fn superclasses() -> Self {
        Self::new("superclasses", SetKind::Class, SetKind::Class, superclasses)
    }

    pub fn superclasses_direct() -> Self {
        Self::new("superclasses_direct", SetKind::Class, SetKind::Class, superclasses_direct)
    }

    pub fn subclasses() -> Self {
        Self::new("subclasses", SetKind::Class, SetKind::Class, subclasses)
    }

    pub fn subclasses_direct() -> Self {
        Self::new("subclasses_direct", SetKind::Class, SetKind::Class, subclasses_direct)
    }

    pub fn enclosing_classes() -> Self {
        Self::new("enclosingClasses", SetKind::Any, SetKind::Class, enclosing_classes)
    }

    pub fn methods_matching(sig: Signature) -> Self {
        Self::new("matching", SetKind::Method, SetKind::Method, move |g, s| {
            methods_matching(g, s, &sig)
        })
    }

    pub fn methods_named(name: impl Into<String>) -> Self {
        let name = name.into();
        Self::new("named", SetKind::Method, SetKind::Method, move |g, s| methods_named(g, s, &name))
    }

    pub fn overridden_by() -> Self {
        Self::new("overriddenBy", SetKind::Method, SetKind::Method, overridden_by)
    }

    pub fn overridden_by_direct() -> Self {
        Self::new("overriddenBy_direct", SetKind::Method, SetKind::Method, overridden_by_direct)
    }

    pub fn overrides_of() -> Self {
        Self::new("overridesOf", SetKind::Method, SetKind::Method, overrides_of)
    }

    pub fn overrides_of_direct() -> Self {
        Self::new("overridesOf_direct", SetKind::Method, SetKind::Method, overrides_of_direct)
    }

    pub fn callers_of() -> Self {
        Self::new("callers", SetKind::Method, SetKind::CallSite, callers_of)
    }

    pub fn local_context_refs() -> Self {
        Self::new("localContextRefs", SetKind::Method, SetKind::Any, local_context_refs)
    }

    /// Visibility filter over sets of `kind`.
    pub fn non_private(kind: SetKind) -> Self {
        Self::new("nonPrivate", kind, kind, non_private)
    }

    pub fn concrete(kind: SetKind) -> Self {
        Self::new("concrete", kind, kind, concrete)
    }

    pub fn abstract_only(kind: SetKind) -> Self {
        Self::new("abstract", kind, kind, abstract_only)
    }
}

/// Runs `subs` in order starting from `seed`. The whole chain is kind
/// checked before any step executes.
pub fn chain(g: &ProgramGraph, seed: LocationSet, subs: &[Subdetector]) -> Result<LocationSet> {
    let mut produced = (String::from("seed"), seed.kind());
    for s in subs {
        if !s.input.accepts(produced.1) {
            return Err(Error::KindMismatch {
                producer: produced.0,
                consumer: s.name.clone(),
                expected: s.input,
                found: produced.1,
            });
        }
        produced = (s.name.clone(), s.output);
    }
    subs.iter().try_fold(seed, |set, s| s.apply(g, &set))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::{parse_sources, resolve_project};
    use crate::graph::build_graph;
    use crate::query::gen_program_classes;

    fn graph(src: &str) -> ProgramGraph {
        build_graph(&resolve_project(parse_sources([("t.jsub", src)]).unwrap()).unwrap())
    }

    fn names(g: &ProgramGraph, s: &LocationSet) -> Vec<String> {
        let mut v: Vec<String> = s.iter().map(|id| g.qualified_name(id)).collect();
        v.sort();
        v
    }

    #[test]
    fn ancestors_then_matching_signature() {
        let g = graph(
            "class LegacyEmployee { int salaryBonus(int m) { return m; } }
             class Employee extends LegacyEmployee { int salaryBonus(int m) { return 2 * m; } }",
        );
        let seed = classes_by_name(&g, &gen_program_classes(&g), "Employee");
        let out = chain(
            &g,
            seed,
            &[
                Subdetector::superclasses(),
                Subdetector::methods_of(),
                Subdetector::methods_matching(Signature::new("salaryBonus", ["int"])),
            ],
        )
        .unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(g.name(g.enclosing_class(out.iter().next().unwrap()).unwrap()), "LegacyEmployee");
    }

    #[test]
    fn empty_chain_is_identity() {
        let g = graph("class A {} class B extends A {}");
        let seed = gen_program_classes(&g);
        assert_eq!(chain(&g, seed.clone(), &[]).unwrap(), seed);
    }

    #[test]
    fn ill_kinded_chain_fails_before_running() {
        let g = graph("class A { void m() {} }");
        let err = chain(
            &g,
            gen_program_classes(&g),
            &[Subdetector::methods_of(), Subdetector::superclasses()],
        )
        .unwrap_err();
        match err {
            Error::KindMismatch { producer, consumer, expected, found } => {
                assert_eq!(producer, "methods");
                assert_eq!(consumer, "superclasses");
                assert_eq!(expected, SetKind::Class);
                assert_eq!(found, SetKind::Method);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn override_closure_is_transitive() {
        let g = graph("class A { void m() {} } class B extends A { void m() {} } class C extends B { void m() {} }");
        let a_m = LocationSet::filtered(&g, SetKind::Method, g.nodes_tagged(NodeTag::Method).map(|n| n.id).take(1));
        assert_eq!(names(&g, &overrides_of(&g, &a_m)), ["B.m()", "C.m()"]);
        assert_eq!(names(&g, &overrides_of_direct(&g, &a_m)), ["B.m()"]);
    }

    #[test]
    fn local_context_ignores_foreign_receivers() {
        let g = graph(
            "class Target { void doSomething() {} }
             class Source { private int local; void method(Target target) { target.doSomething(); local = local + 1; } }",
        );
        let m = LocationSet::filtered(&g, SetKind::Method, g.nodes_tagged(NodeTag::Method).map(|n| n.id));
        assert_eq!(names(&g, &local_context_refs(&g, &m)), ["Source.local"]);
    }
}
