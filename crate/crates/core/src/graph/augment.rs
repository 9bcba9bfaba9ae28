//! Mutations used by microsteps to model edits that have not been applied
//! to the source yet. Every operation bumps the generation counter.

use super::lookup::{is_primitive, recompute_overrides};
use super::{Attrs, Dangling, LocationId, NodeTag, ProgramGraph, RelationTag};
use crate::error::{Error, Result};
use crate::template::{ClassTemplate, MethodTemplate};

impl ProgramGraph {
    /// Inserts a synthetic method described by `t` into its enclosing class
    /// and recomputes OVERRIDES in both directions.
    pub fn add_method_node(&mut self, t: &MethodTemplate) -> Result<LocationId> {
        let class = self
            .class_named(&t.enclosing.name)
            .ok_or_else(|| Error::MissingEnclosingClass(t.enclosing.name.clone()))?;
        let mid = self.insert_node(
            NodeTag::Method,
            &t.name,
            None,
            Attrs {
                visibility: Some(t.visibility),
                is_static: t.is_static,
                is_abstract: t.is_abstract,
                type_name: Some(t.return_type.clone()),
                param_types: t.params.iter().map(|p| p.type_name.clone()).collect(),
                template: Some(t.describe()),
                ..Attrs::default()
            },
            true,
        );
        self.add_edge(class, mid, RelationTag::Contains);
        if let Some(c) = self.class_type(&t.return_type) {
            self.add_edge(mid, c, RelationTag::Returns);
        }
        for (i, p) in t.params.iter().enumerate() {
            let pid = self.insert_node(
                NodeTag::Parameter,
                &p.name,
                None,
                Attrs {
                    type_name: Some(p.type_name.clone()),
                    index: Some(i as u32),
                    template: Some(format!("{} parameter {}", t.describe(), p.name)),
                    ..Attrs::default()
                },
                true,
            );
            self.add_edge(mid, pid, RelationTag::HasParameter);
            if let Some(c) = self.class_type(&p.type_name) {
                self.add_edge(pid, c, RelationTag::OfType);
            }
        }
        recompute_overrides(self);
        self.bump_generation();
        Ok(mid)
    }

    /// Removes a method with its parameters and body references. Call sites
    /// that targeted it are marked [`Dangling::TargetRemoved`]; overriders
    /// fall back to the next ancestor declaration.
    pub fn remove_method_node(&mut self, method: LocationId) -> Result<()> {
        if self.tag(method) != Some(NodeTag::Method) {
            return Err(Error::UnknownLocation(method.0));
        }
        let callers: Vec<_> = self.sources(method, RelationTag::Calls).collect();
        for c in callers {
            if let Some(n) = self.node_mut(c) {
                n.attrs.dangling = Some(Dangling::TargetRemoved);
            }
        }
        let mut doomed: Vec<_> = self.targets(method, RelationTag::HasParameter).collect();
        doomed.extend(self.targets(method, RelationTag::Contains));
        doomed.push(method);
        for id in doomed {
            self.remove_node(id);
        }
        recompute_overrides(self);
        self.bump_generation();
        Ok(())
    }

    /// Inserts a synthetic class under the project root. Adding a class whose
    /// name already exists is allowed; detecting that is a detector's job.
    pub fn add_class_node(&mut self, t: &ClassTemplate) -> LocationId {
        let superclass = t.superclass_name.as_deref().map(|s| (s, self.class_named(s)));
        let cid = self.insert_node(
            NodeTag::Class,
            &t.name,
            None,
            Attrs {
                is_abstract: t.is_abstract,
                unresolved_superclass: match superclass {
                    Some((name, None)) => Some(name.to_owned()),
                    _ => None,
                },
                template: Some(format!("class {}", t.name)),
                ..Attrs::default()
            },
            true,
        );
        self.add_edge(Self::ROOT, cid, RelationTag::Contains);
        if let Some((_, Some(sup))) = superclass {
            self.add_edge(cid, sup, RelationTag::Extends);
        }
        recompute_overrides(self);
        self.bump_generation();
        cid
    }

    fn class_type(&self, ty: &str) -> Option<LocationId> {
        if is_primitive(ty) {
            None
        } else {
            self.class_named(ty)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::{parse_sources, resolve_project};
    use crate::graph::build_graph;

    fn graph(src: &str) -> ProgramGraph {
        build_graph(&resolve_project(parse_sources([("t.jsub", src)]).unwrap()).unwrap())
    }

    #[test]
    fn snapshot_is_independent() {
        let g = graph("class A {}");
        let mut copy = g.snapshot();
        assert!(copy.same_structure(&g));
        copy.add_class_node(&ClassTemplate::named("K"));
        assert_eq!(g.classes_named("K").count(), 0);
        assert_eq!(copy.classes_named("K").count(), 1);
        assert_eq!(g.generation(), 0);
        assert_eq!(copy.generation(), 1);
    }

    #[test]
    fn added_method_overrides_ancestor_and_is_overridden() {
        let mut g = graph("class A { void m(int x) {} } class B extends A {} class C extends B { void m(int y) {} }");
        let b = g.class_named("B").unwrap();
        let added = g.add_method_node(&MethodTemplate::new(ClassTemplate::named("B"), "m", ["int"])).unwrap();
        assert_eq!(g.enclosing_class(added), Some(b));
        let a_m = g.nodes_tagged(NodeTag::Method).find(|n| n.name == "m").unwrap().id;
        assert_eq!(g.targets(added, RelationTag::Overrides).collect::<Vec<_>>(), [a_m]);
        let c_m = g.sources(added, RelationTag::Overrides).collect::<Vec<_>>();
        assert_eq!(c_m.len(), 1);
        assert_eq!(g.name(g.enclosing_class(c_m[0]).unwrap()), "C");
        g.check_integrity().unwrap();
    }

    #[test]
    fn add_then_remove_restores_structure() {
        let g = graph("class A { void m(int x) {} } class B extends A { void m(int x) {} }");
        let mut h = g.snapshot();
        let t = MethodTemplate::new(ClassTemplate::named("A"), "k", ["A", "int"]);
        let id = h.add_method_node(&t).unwrap();
        h.remove_method_node(id).unwrap();
        assert!(h.same_structure(&g));
        assert_eq!(h.generation(), 2);
    }

    #[test]
    fn removal_redirects_overrides() {
        let mut g = graph("class S { void m() {} } class C extends S { void m() {} } class D extends C { void m() {} }");
        let ms: Vec<_> = g.nodes_tagged(NodeTag::Method).map(|n| n.id).collect();
        g.remove_method_node(ms[1]).unwrap();
        assert_eq!(g.targets(ms[2], RelationTag::Overrides).collect::<Vec<_>>(), [ms[0]]);
    }

    #[test]
    fn errors() {
        let mut g = graph("class A { int f; }");
        let t = MethodTemplate::new(ClassTemplate::named("Nope"), "m", Vec::<String>::new());
        assert_eq!(g.add_method_node(&t).unwrap_err(), Error::MissingEnclosingClass("Nope".into()));
        assert_eq!(g.remove_method_node(LocationId(999)).unwrap_err(), Error::UnknownLocation(999));
        let field = g.nodes_tagged(NodeTag::Field).next().unwrap().id;
        assert!(g.remove_method_node(field).is_err());
    }

    #[test]
    fn added_class_extends_existing() {
        let mut g = graph("class Target {}");
        let k = g.add_class_node(&ClassTemplate::named("K").extending("Target"));
        assert_eq!(g.targets(k, RelationTag::Extends).next(), g.class_named("Target").filter(|t| *t != k));
        let k2 = g.add_class_node(&ClassTemplate::named("K2").extending("Missing"));
        assert_eq!(g.node(k2).unwrap().attrs.unresolved_superclass.as_deref(), Some("Missing"));
        assert!(g.node(k).unwrap().synthetic);
    }
}
