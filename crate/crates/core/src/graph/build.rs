use super::lookup::{is_primitive, recompute_overrides, resolve_call, resolve_field};
use super::{AccessKind, Attrs, Dangling, LocationId, NodeTag, ProgramGraph, ReceiverKind, RelationTag};
use crate::frontend::{AstMethod, BodyRef, Receiver, ReceiverType, RefKind, ResolvedProject, TypeHint};

enum Member<'a> {
    Field(&'a crate::frontend::AstField),
    Method(usize, &'a AstMethod),
}

/// Converts a resolved project into its program graph.
///
/// Ids are assigned in file order, then source order, so two builds of the
/// same corpus are identical. Every body reference becomes a CALL_SITE or
/// FIELD_ACCESS node; those that do not resolve to a project member stay in
/// the graph marked [`Dangling::Unresolved`].
pub fn build_graph(project: &ResolvedProject) -> ProgramGraph {
    let mut g = ProgramGraph::new();
    let mut class_ids = Vec::with_capacity(project.classes.len());
    // (class index, method index, method id, body ref ids)
    let mut bodies: Vec<(usize, usize, LocationId, Vec<LocationId>)> = Vec::new();

    for (ci, class) in project.classes.iter().enumerate() {
        let ast = &class.ast;
        let cid = g.insert_node(
            NodeTag::Class,
            &ast.name,
            Some(ast.span.clone()),
            Attrs {
                is_abstract: ast.is_abstract,
                ..Attrs::default()
            },
            false,
        );
        g.add_edge(ProgramGraph::ROOT, cid, RelationTag::Contains);
        class_ids.push(cid);

        let mut members: Vec<Member> = ast.fields.iter().map(Member::Field).collect();
        members.extend(ast.methods.iter().enumerate().map(|(i, m)| Member::Method(i, m)));
        members.sort_by_key(|m| match m {
            Member::Field(f) => f.span.start(),
            Member::Method(_, m) => m.span.start(),
        });

        for member in members {
            match member {
                Member::Field(f) => {
                    let fid = g.insert_node(
                        NodeTag::Field,
                        &f.name,
                        Some(f.span.clone()),
                        Attrs {
                            visibility: Some(f.visibility),
                            is_static: f.is_static,
                            type_name: Some(f.type_name.clone()),
                            ..Attrs::default()
                        },
                        false,
                    );
                    g.add_edge(cid, fid, RelationTag::Contains);
                }
                Member::Method(mi, m) => {
                    let mid = g.insert_node(
                        NodeTag::Method,
                        &m.name,
                        Some(m.span.clone()),
                        Attrs {
                            visibility: Some(m.visibility),
                            is_static: m.is_static,
                            is_abstract: m.is_abstract,
                            type_name: Some(m.return_type.clone()),
                            param_types: m.params.iter().map(|p| p.type_name.clone()).collect(),
                            ..Attrs::default()
                        },
                        false,
                    );
                    g.add_edge(cid, mid, RelationTag::Contains);
                    for (pi, p) in m.params.iter().enumerate() {
                        let pid = g.insert_node(
                            NodeTag::Parameter,
                            &p.name,
                            Some(p.span.clone()),
                            Attrs {
                                type_name: Some(p.type_name.clone()),
                                index: Some(pi as u32),
                                ..Attrs::default()
                            },
                            false,
                        );
                        g.add_edge(mid, pid, RelationTag::HasParameter);
                    }
                    let mut refs = Vec::with_capacity(m.body_refs.len());
                    for r in &m.body_refs {
                        let tag = match r.kind {
                            RefKind::Call => NodeTag::CallSite,
                            RefKind::FieldRead | RefKind::FieldWrite => NodeTag::FieldAccess,
                        };
                        let rid = g.insert_node(tag, &r.member_name, Some(r.span.clone()), Attrs::default(), false);
                        g.add_edge(mid, rid, RelationTag::Contains);
                        refs.push(rid);
                    }
                    bodies.push((ci, mi, mid, refs));
                }
            }
        }
    }

    for (ci, class) in project.classes.iter().enumerate() {
        if let Some(sup) = class.superclass {
            g.add_edge(class_ids[ci], class_ids[sup], RelationTag::Extends);
        }
    }
    link_types(&mut g);
    recompute_overrides(&mut g);

    for (ci, mi, _, refs) in bodies {
        let class = &project.classes[ci];
        let method = &class.ast.methods[mi];
        let mut results: Vec<Option<String>> = Vec::with_capacity(refs.len());
        for (ri, (r, rid)) in method.body_refs.iter().zip(&refs).enumerate() {
            let result = resolve_ref(&mut g, r, *rid, &class.receiver_types[mi][ri], &results);
            results.push(result);
        }
    }
    g
}

/// OF_TYPE and RETURNS edges into project classes.
pub(super) fn link_types(g: &mut ProgramGraph) {
    let mut pending = Vec::new();
    for n in g.nodes() {
        let rel = match n.tag {
            NodeTag::Field | NodeTag::Parameter => RelationTag::OfType,
            NodeTag::Method => RelationTag::Returns,
            _ => continue,
        };
        let Some(ty) = n.attrs.type_name.as_deref() else { continue };
        if is_primitive(ty) {
            continue;
        }
        if let Some(c) = g.class_named(ty) {
            pending.push((n.id, c, rel));
        }
    }
    for (s, d, rel) in pending {
        g.add_edge(s, d, rel);
    }
}

fn receiver_kind(r: &BodyRef) -> ReceiverKind {
    match r.receiver {
        Receiver::ImplicitThis => ReceiverKind::ImplicitThis,
        Receiver::Super => ReceiverKind::Super,
        Receiver::Variable { .. } => ReceiverKind::Variable,
        Receiver::Class(_) => ReceiverKind::Class,
        Receiver::Expr(_) => ReceiverKind::Expr,
    }
}

/// Static type of a hint given the result types of earlier references.
pub(crate) fn eval_hint(hint: &TypeHint, results: &[Option<String>]) -> Option<String> {
    match hint {
        TypeHint::Known(t) => Some(t.clone()),
        TypeHint::Ref(i) => results.get(*i).cloned().flatten(),
        TypeHint::Unknown => None,
        TypeHint::Arith { plus, lhs, rhs } => {
            let l = eval_hint(lhs, results);
            let r = eval_hint(rhs, results);
            if *plus && (l.as_deref() == Some("String") || r.as_deref() == Some("String")) {
                return Some("String".into());
            }
            let (l, r) = (l?, r?);
            let numeric = ["byte", "short", "char", "int", "long", "float", "double"];
            if !numeric.contains(&l.as_str()) || !numeric.contains(&r.as_str()) {
                return None;
            }
            let promoted = ["double", "float", "long"]
                .into_iter()
                .find(|t| l == *t || r == *t)
                .unwrap_or("int");
            Some(promoted.to_owned())
        }
    }
}

fn resolve_ref(
    g: &mut ProgramGraph,
    r: &BodyRef,
    rid: LocationId,
    receiver: &ReceiverType,
    results: &[Option<String>],
) -> Option<String> {
    let receiver_class = match receiver {
        ReceiverType::Project(name) => Some(name.clone()),
        ReceiverType::External(_) => None,
        ReceiverType::Deferred(hint) => eval_hint(hint, results),
    }
    .filter(|name| g.class_named(name).is_some());
    let arg_types: Vec<Option<String>> = r.args.iter().map(|a| eval_hint(a, results)).collect();
    let class_id = receiver_class.as_deref().and_then(|c| g.class_named(c));

    let (target, edge) = match r.kind {
        RefKind::Call => (
            class_id.and_then(|c| resolve_call(g, c, &r.member_name, &arg_types)),
            RelationTag::Calls,
        ),
        RefKind::FieldRead => (
            class_id.and_then(|c| resolve_field(g, c, &r.member_name)),
            RelationTag::Reads,
        ),
        RefKind::FieldWrite => (
            class_id.and_then(|c| resolve_field(g, c, &r.member_name)),
            RelationTag::Writes,
        ),
    };
    let result = target.and_then(|t| g.node(t).and_then(|n| n.attrs.type_name.clone()));
    let node = g.node_mut(rid).expect("body ref node exists");
    node.attrs = Attrs {
        receiver_kind: Some(receiver_kind(r)),
        receiver_class,
        arg_types: if r.kind == RefKind::Call { arg_types } else { Vec::new() },
        access: match r.kind {
            RefKind::Call => None,
            RefKind::FieldRead => Some(AccessKind::Read),
            RefKind::FieldWrite => Some(AccessKind::Write),
        },
        dangling: target.is_none().then_some(Dangling::Unresolved),
        type_name: result.clone(),
        ..Attrs::default()
    };
    if let Some(t) = target {
        g.add_edge(rid, t, edge);
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::{parse_sources, resolve_project};

    fn graph(src: &str) -> ProgramGraph {
        build_graph(&resolve_project(parse_sources([("t.jsub", src)]).unwrap()).unwrap())
    }

    fn find(g: &ProgramGraph, tag: NodeTag, name: &str) -> LocationId {
        g.nodes_tagged(tag).find(|n| n.name == name).unwrap().id
    }

    #[test]
    fn empty_project_has_only_the_root() {
        let g = graph("");
        assert_eq!(g.node_count(), 1);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn override_edge_to_nearest_ancestor() {
        let g = graph("class Super { void m() {} } class Mid extends Super {} class C extends Mid { void m() {} }");
        let cm = g.nodes_tagged(NodeTag::Method).filter(|n| n.name == "m").map(|n| n.id).max().unwrap();
        let targets: Vec<_> = g.targets(cm, RelationTag::Overrides).collect();
        assert_eq!(targets.len(), 1);
        assert_eq!(g.name(g.enclosing_class(targets[0]).unwrap()), "Super");
        g.check_integrity().unwrap();
    }

    #[test]
    fn calls_prefer_the_cheapest_widening() {
        let g = graph(
            "class P { void m(long x) {} void m(double x) {} void a() { m(5); } void b() { m(1.5); } void c() { m(true); } }",
        );
        let sites: Vec<_> = g.nodes_tagged(NodeTag::CallSite).map(|n| n.id).collect();
        let target = |s| g.targets(s, RelationTag::Calls).next().map(|t| g.node(t).unwrap().attrs.param_types[0].clone());
        assert_eq!(target(sites[0]).as_deref(), Some("long"));
        assert_eq!(target(sites[1]).as_deref(), Some("double"));
        assert_eq!(target(sites[2]), None);
        assert_eq!(g.node(sites[2]).unwrap().attrs.dangling, Some(Dangling::Unresolved));
    }

    #[test]
    fn chained_receivers_use_result_types() {
        let g = graph("class A { B b; void m() { b.c.run(); } } class B { C c; } class C { void run() {} }");
        let run = find(&g, NodeTag::CallSite, "run");
        let n = g.node(run).unwrap();
        assert_eq!(n.attrs.receiver_class.as_deref(), Some("C"));
        assert_eq!(g.targets(run, RelationTag::Calls).count(), 1);
    }

    #[test]
    fn private_ancestor_members_are_invisible() {
        let g = graph("class S { private int f; } class C extends S { void m() { f = 1; } }");
        let acc = find(&g, NodeTag::FieldAccess, "f");
        assert_eq!(g.targets(acc, RelationTag::Writes).count(), 0);
    }

    #[test]
    fn hint_promotion() {
        let k = |t: &str| Box::new(TypeHint::Known(t.into()));
        let h = TypeHint::Arith { plus: false, lhs: k("int"), rhs: k("long") };
        assert_eq!(eval_hint(&h, &[]).as_deref(), Some("long"));
        let h = TypeHint::Arith { plus: true, lhs: k("String"), rhs: Box::new(TypeHint::Unknown) };
        assert_eq!(eval_hint(&h, &[]).as_deref(), Some("String"));
        let h = TypeHint::Arith { plus: false, lhs: k("char"), rhs: k("byte") };
        assert_eq!(eval_hint(&h, &[]).as_deref(), Some("int"));
    }
}
