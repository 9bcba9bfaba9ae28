//! Static lookup over the graph: inheritance walks, member resolution and
//! the automatic conversion rules used to pick between overloads.
//!
//! Overloads are ranked by conversion cost: the sum over arguments of the
//! length of the widening chain from argument type to parameter type. The
//! applicable candidate with the strictly smallest cost wins; a tie leaves
//! the call unresolved.

use std::collections::HashSet;

use super::{LocationId, NodeTag, ProgramGraph, RelationTag};
use crate::template::Signature;

pub const PRIMITIVES: &[&str] = &["boolean", "byte", "short", "char", "int", "long", "float", "double"];

pub fn is_primitive(ty: &str) -> bool {
    PRIMITIVES.contains(&ty)
}

fn numeric_rank(ty: &str) -> Option<u32> {
    ["byte", "short", "int", "long", "float", "double"]
        .iter()
        .position(|t| *t == ty)
        .map(|p| p as u32)
}

/// Number of widening steps from `from` to `to` along
/// byte→short→int→long→float→double, with char→int joining the chain.
/// `Some(0)` for identical types, `None` when no widening exists.
pub fn widening_distance(from: &str, to: &str) -> Option<u32> {
    if from == to {
        return Some(0);
    }
    let to_rank = numeric_rank(to)?;
    if from == "char" {
        let int_rank = numeric_rank("int")?;
        return (to_rank >= int_rank).then(|| 1 + to_rank - int_rank);
    }
    let from_rank = numeric_rank(from)?;
    (to_rank > from_rank).then(|| to_rank - from_rank)
}

/// Direct superclass of a class.
pub fn superclass(g: &ProgramGraph, class: LocationId) -> Option<LocationId> {
    g.targets(class, RelationTag::Extends).next()
}

/// Proper ancestors, nearest first.
pub fn ancestors(g: &ProgramGraph, class: LocationId) -> Vec<LocationId> {
    let mut out = Vec::new();
    let mut cur = superclass(g, class);
    while let Some(c) = cur {
        if c == class || out.contains(&c) {
            break;
        }
        out.push(c);
        cur = superclass(g, c);
    }
    out
}

/// Proper descendants, breadth-first.
pub fn descendants(g: &ProgramGraph, class: LocationId) -> Vec<LocationId> {
    let mut out: Vec<LocationId> = Vec::new();
    let mut frontier = vec![class];
    while let Some(c) = frontier.pop() {
        for sub in g.sources(c, RelationTag::Extends) {
            if sub != class && !out.contains(&sub) {
                out.push(sub);
                frontier.push(sub);
            }
        }
    }
    out.sort();
    out
}

pub fn is_proper_ancestor(g: &ProgramGraph, ancestor: LocationId, class: LocationId) -> bool {
    ancestors(g, class).contains(&ancestor)
}

/// Class plus its proper ancestors, nearest first.
pub fn lineage(g: &ProgramGraph, class: LocationId) -> Vec<LocationId> {
    let mut out = vec![class];
    out.extend(ancestors(g, class));
    out
}

pub fn members(g: &ProgramGraph, class: LocationId, tag: NodeTag) -> impl Iterator<Item = LocationId> + '_ {
    g.targets(class, RelationTag::Contains).filter(move |m| g.tag(*m) == Some(tag))
}

pub fn methods_of(g: &ProgramGraph, class: LocationId) -> impl Iterator<Item = LocationId> + '_ {
    members(g, class, NodeTag::Method)
}

/// Cost of converting a value of type `from` (`None` = unknown) to `to`.
pub fn conversion_cost(g: &ProgramGraph, from: Option<&str>, to: &str) -> Option<u32> {
    let Some(from) = from else { return Some(0) };
    if from == to {
        return Some(0);
    }
    if is_primitive(from) || is_primitive(to) {
        return widening_distance(from, to);
    }
    if from == "null" {
        return Some(0);
    }
    let from_class = g.class_named(from)?;
    ancestors(g, from_class)
        .iter()
        .position(|a| g.name(*a) == to)
        .map(|p| p as u32 + 1)
}

/// Total conversion cost of passing `args` to parameters `params`.
pub fn call_cost(g: &ProgramGraph, params: &[String], args: &[Option<String>]) -> Option<u32> {
    if params.len() != args.len() {
        return None;
    }
    params
        .iter()
        .zip(args)
        .map(|(p, a)| conversion_cost(g, a.as_deref(), p))
        .sum()
}

/// Methods named `name` with `arity` parameters that a receiver of static
/// class `class` can see: the nearest declaration per signature, ancestors'
/// private methods excluded. Within one class a later declaration shadows an
/// earlier one with the same signature.
pub fn visible_methods(g: &ProgramGraph, class: LocationId, name: &str, arity: usize) -> Vec<LocationId> {
    let mut seen: HashSet<Vec<String>> = HashSet::new();
    let mut out = Vec::new();
    for (depth, c) in lineage(g, class).into_iter().enumerate() {
        let mut ms: Vec<LocationId> = methods_of(g, c)
            .filter(|m| {
                let n = g.node(*m).expect("member exists");
                n.name == name && n.attrs.param_types.len() == arity && (depth == 0 || !n.is_private())
            })
            .collect();
        ms.sort_by(|a, b| b.cmp(a));
        for m in ms {
            if seen.insert(g.node(m).expect("member exists").attrs.param_types.clone()) {
                out.push(m);
            }
        }
    }
    out
}

/// Statically resolves a call on a receiver of class `class`.
pub fn resolve_call(g: &ProgramGraph, class: LocationId, name: &str, args: &[Option<String>]) -> Option<LocationId> {
    let mut best: Option<(u32, LocationId)> = None;
    let mut tied = false;
    for m in visible_methods(g, class, name, args.len()) {
        let params = &g.node(m).expect("member exists").attrs.param_types;
        let Some(cost) = call_cost(g, params, args) else { continue };
        match best {
            Some((b, _)) if cost > b => {}
            Some((b, _)) if cost == b => tied = true,
            _ => {
                best = Some((cost, m));
                tied = false;
            }
        }
    }
    best.filter(|_| !tied).map(|(_, m)| m)
}

/// Resolves a field name on a receiver of class `class`.
pub fn resolve_field(g: &ProgramGraph, class: LocationId, name: &str) -> Option<LocationId> {
    for (depth, c) in lineage(g, class).into_iter().enumerate() {
        let found = members(g, c, NodeTag::Field)
            .filter(|f| {
                let n = g.node(*f).expect("member exists");
                n.name == name && (depth == 0 || !n.is_private())
            })
            .max();
        if found.is_some() {
            return found;
        }
    }
    None
}

/// Methods declared directly in `class` with signature `sig`, in id order.
pub fn declared_with_signature(g: &ProgramGraph, class: LocationId, sig: &Signature) -> Vec<LocationId> {
    methods_of(g, class)
        .filter(|m| g.signature(*m).as_ref() == Some(sig))
        .collect()
}

/// The method `method` overrides: the declaration with the same signature
/// in the nearest proper ancestor that declares it non-privately.
pub fn override_target(g: &ProgramGraph, method: LocationId) -> Option<LocationId> {
    let sig = g.signature(method)?;
    let class = g.enclosing_class(method)?;
    for a in ancestors(g, class) {
        let found = declared_with_signature(g, a, &sig)
            .into_iter()
            .filter(|m| !g.node(*m).expect("member exists").is_private())
            .max();
        if found.is_some() {
            return found;
        }
    }
    None
}

/// Rebuilds every OVERRIDES edge from scratch.
pub(crate) fn recompute_overrides(g: &mut ProgramGraph) {
    let old: Vec<_> = g.edges().filter(|e| e.tag == RelationTag::Overrides).copied().collect();
    for e in old {
        g.remove_edge(e);
    }
    let methods: Vec<_> = g.nodes_tagged(NodeTag::Method).map(|n| n.id).collect();
    let new: Vec<_> = methods.into_iter().filter_map(|m| override_target(g, m).map(|t| (m, t))).collect();
    for (m, t) in new {
        g.add_edge(m, t, RelationTag::Overrides);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn widening_chain_lengths() {
        assert_eq!(widening_distance("int", "int"), Some(0));
        assert_eq!(widening_distance("int", "long"), Some(1));
        assert_eq!(widening_distance("byte", "double"), Some(5));
        assert_eq!(widening_distance("char", "int"), Some(1));
        assert_eq!(widening_distance("char", "double"), Some(4));
        assert_eq!(widening_distance("long", "int"), None);
        assert_eq!(widening_distance("char", "short"), None);
        assert_eq!(widening_distance("short", "char"), None);
        assert_eq!(widening_distance("boolean", "int"), None);
    }
}
