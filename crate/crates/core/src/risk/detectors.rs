//! One detector per potential risk.
//!
//! Detectors for added methods take the destination class from the template.
//! When that class is absent from the graph nothing can clash with the new
//! method, so they answer with the empty set.

use super::{MethodTarget, PotentialRisk, RiskLabel, Subject};
use crate::error::{Error, Result};
use crate::graph::lookup::{
    ancestors, call_cost, declared_with_signature, descendants, is_proper_ancestor, lineage, visible_methods,
};
use crate::graph::{LocationId, NodeTag, ProgramGraph, RelationTag};
use crate::query::{subdetectors as sd, Classes, LocationSet, SetKind, Stream};
use crate::template::{ClassTemplate, MethodTemplate, Signature, Visibility};

pub fn detect(risk: &PotentialRisk, g: &ProgramGraph) -> Result<LocationSet> {
    use RiskLabel::*;
    match (&risk.subject, risk.label) {
        (Subject::AddMethod(t), Am1) => Ok(double_definition_method(g, t)),
        (Subject::AddMethod(t), Am2) => Ok(broken_subtyping(g, t)),
        (Subject::AddMethod(t), Am3) => Ok(corresponding_subclass_specification(g, t)),
        (Subject::AddMethod(t), Am4) => Ok(overload_parameter_conversion(g, t)),
        (Subject::RemoveMethod(t), Rm1) => missing_definition(g, t),
        (Subject::RemoveMethod(t), Rm2) => removed_concrete_override(g, t),
        (Subject::RemoveMethod(t), Rm3) => lost_specification(g, t),
        (Subject::RemoveMethod(t), Rm4) => missing_super_implementation(g, t),
        (Subject::RemoveMethod(t), Rm5) => missing_abstract_implementation(g, t),
        (Subject::Relocate { source, destination }, Mm1) => broken_local_references(g, source, destination),
        (Subject::AddClass(t), Ac1) => Ok(double_definition_class(g, t)),
        (subject, label) => Err(Error::UnresolvableTemplate(format!(
            "{label} cannot apply to {}",
            subject.describe()
        ))),
    }
}

/// Shared by AM-1 and AC-1: children of `container` of the given kind that
/// satisfy `same`.
pub fn double_definition(
    g: &ProgramGraph,
    container: LocationId,
    kind: SetKind,
    same: impl Fn(LocationId) -> bool,
) -> LocationSet {
    LocationSet::filtered(
        g,
        kind,
        g.targets(container, RelationTag::Contains).filter(|c| same(*c)),
    )
}

pub fn double_definition_method(g: &ProgramGraph, t: &MethodTemplate) -> LocationSet {
    let Some(class) = g.class_named(&t.enclosing.name) else {
        return LocationSet::empty(SetKind::Method);
    };
    let sig = t.signature();
    double_definition(g, class, SetKind::Method, |m| g.signature(m).as_ref() == Some(&sig))
}

pub fn double_definition_class(g: &ProgramGraph, t: &ClassTemplate) -> LocationSet {
    double_definition(g, ProgramGraph::ROOT, SetKind::Class, |c| g.name(c) == t.name)
}

fn destination<'g>(g: &'g ProgramGraph, t: &MethodTemplate) -> Option<Stream<'g, Classes>> {
    g.class_named(&t.enclosing.name).map(|c| {
        Stream::from_set(g, LocationSet::filtered(g, SetKind::Class, [c])).expect("class set")
    })
}

pub fn broken_subtyping(g: &ProgramGraph, t: &MethodTemplate) -> LocationSet {
    match destination(g, t) {
        Some(d) => d.superclasses().methods().matching(&t.signature()).non_private().into_set(),
        None => LocationSet::empty(SetKind::Method),
    }
}

pub fn corresponding_subclass_specification(g: &ProgramGraph, t: &MethodTemplate) -> LocationSet {
    match destination(g, t) {
        Some(d) => d.subclasses().methods().matching(&t.signature()).into_set(),
        None => LocationSet::empty(SetKind::Method),
    }
}

/// Call sites that would switch from their current target to the new method.
///
/// A call on a receiver of static class `R` can see the new method when `R`
/// is the destination, or descends from it and the new method is not
/// private. Resolution picks the unique cheapest candidate, so the call
/// switches exactly when the new method is strictly cheaper than the
/// current target.
pub fn overload_parameter_conversion(g: &ProgramGraph, t: &MethodTemplate) -> LocationSet {
    let Some(dest) = g.class_named(&t.enclosing.name) else {
        return LocationSet::empty(SetKind::CallSite);
    };
    let sig = t.signature();
    let mut hits = Vec::new();
    for site in g.nodes_tagged(NodeTag::CallSite) {
        let Some(current) = g.targets(site.id, RelationTag::Calls).next() else { continue };
        let Some(current_sig) = g.signature(current) else { continue };
        if current_sig.name != sig.name || current_sig.arity() != sig.arity() || current_sig == sig {
            continue;
        }
        let Some(receiver) = site.attrs.receiver_class.as_deref().and_then(|r| g.class_named(r)) else {
            continue;
        };
        let visible =
            receiver == dest || (t.visibility != Visibility::Private && is_proper_ancestor(g, dest, receiver));
        if !visible {
            continue;
        }
        let args = &site.attrs.arg_types;
        let Some(new_cost) = call_cost(g, &sig.param_types, args) else { continue };
        let old_cost = call_cost(g, &current_sig.param_types, args).expect("current target is applicable");
        if new_cost < old_cost {
            hits.push(site.id);
        }
    }
    LocationSet::filtered(g, SetKind::CallSite, hits)
}

fn removed(g: &ProgramGraph, t: &MethodTarget) -> Result<LocationSet> {
    let id = t.resolve(g)?;
    Ok(LocationSet::filtered(g, SetKind::Method, [id]))
}

pub fn missing_definition(g: &ProgramGraph, t: &MethodTarget) -> Result<LocationSet> {
    Ok(sd::callers_of(g, &removed(g, t)?))
}

pub fn removed_concrete_override(g: &ProgramGraph, t: &MethodTarget) -> Result<LocationSet> {
    let m = removed(g, t)?;
    Ok(sd::overridden_by_direct(g, &sd::concrete(g, &m)))
}

pub fn lost_specification(g: &ProgramGraph, t: &MethodTarget) -> Result<LocationSet> {
    Ok(sd::overrides_of(g, &removed(g, t)?))
}

/// Nearest declaration of `sig` that `class` sees: its own, or the nearest
/// ancestor's non-private one.
fn nearest_declaration(g: &ProgramGraph, class: LocationId, sig: &Signature) -> Option<LocationId> {
    visible_methods(g, class, &sig.name, sig.arity())
        .into_iter()
        .find(|m| g.signature(*m).as_ref() == Some(sig))
}

fn has_concrete(g: &ProgramGraph, class: LocationId, sig: &Signature) -> bool {
    nearest_declaration(g, class, sig).is_some_and(|m| !g.node(m).expect("method").attrs.is_abstract)
}

fn without(g: &ProgramGraph, method: LocationId) -> Result<ProgramGraph> {
    let mut scratch = g.snapshot();
    scratch.remove_method_node(method)?;
    Ok(scratch)
}

/// Subclasses of the removed method's class that no longer have any concrete
/// implementation once it is gone and that declare none themselves.
pub fn missing_super_implementation(g: &ProgramGraph, t: &MethodTarget) -> Result<LocationSet> {
    let id = t.resolve(g)?;
    let node = g.node(id).expect("resolved method");
    if node.attrs.is_abstract {
        return Ok(LocationSet::empty(SetKind::Class));
    }
    let sig = g.signature(id).expect("method");
    let class = g.enclosing_class(id).expect("method has a class");
    let after = without(g, id)?;
    let hits = descendants(g, class)
        .into_iter()
        .filter(|d| declared_with_signature(&after, *d, &sig).is_empty() && !has_concrete(&after, *d, &sig));
    Ok(LocationSet::filtered(g, SetKind::Class, hits))
}

/// Abstract declarations the removed method implements, directly or through
/// intermediate overrides, that some concrete class at or below the removed
/// method's class no longer implements once it is gone.
pub fn missing_abstract_implementation(g: &ProgramGraph, t: &MethodTarget) -> Result<LocationSet> {
    let id = t.resolve(g)?;
    let m = LocationSet::filtered(g, SetKind::Method, [id]);
    let obligations = sd::abstract_only(g, &sd::overridden_by(g, &m));
    if obligations.is_empty() {
        return Ok(obligations);
    }
    let class = g.enclosing_class(id).expect("method has a class");
    let after = without(g, id)?;
    let mut subtree = vec![class];
    subtree.extend(descendants(g, class));
    let concrete: Vec<LocationId> = subtree
        .into_iter()
        .filter(|c| !g.node(*c).expect("class").attrs.is_abstract)
        .collect();
    Ok(obligations.retain(|a| {
        let sig = g.signature(*a).expect("method");
        let owner = g.enclosing_class(*a).expect("method has a class");
        concrete
            .iter()
            .any(|c| (*c == owner || ancestors(g, *c).contains(&owner)) && !has_concrete(&after, *c, &sig))
    }))
}

/// Whether code in `from` may use `member`, declared in a class of the
/// project. Everything shares one package.
pub fn accessible(g: &ProgramGraph, member: LocationId, from: Option<LocationId>) -> bool {
    let node = g.node(member).expect("member");
    let owner = g.enclosing_class(member);
    match node.visibility() {
        Visibility::Public | Visibility::Package => true,
        Visibility::Private => from.is_some() && from == owner,
        Visibility::Protected => match (from, owner) {
            (Some(f), Some(o)) => f == o || lineage(g, f).contains(&o),
            _ => false,
        },
    }
}

pub fn broken_local_references(
    g: &ProgramGraph,
    source: &MethodTarget,
    destination: &MethodTemplate,
) -> Result<LocationSet> {
    let m = removed(g, source)?;
    let dest = g.class_named(&destination.enclosing.name);
    Ok(sd::local_context_refs(g, &m).retain(|r| !accessible(g, *r, dest)))
}

