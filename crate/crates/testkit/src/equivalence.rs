//! Runs every core query and detector next to its oracle over an
//! exhaustive set of inputs for one graph.

use std::collections::{BTreeMap, BTreeSet};

use refd_core::engine::method_template_of;
use refd_core::graph::{LocationId, NodeTag, ProgramGraph, RelationTag};
use refd_core::query::{self, subdetectors as sd, LocationSet, SetKind};
use refd_core::risk::{detectors as det, MethodTarget};
use refd_core::template::{ClassTemplate, MethodTemplate, Visibility};

use crate::oracle::{self, Ids, World};

/// Name of a class that never occurs in generated or fixture projects.
pub const FRESH_CLASS: &str = "Fresh";

#[derive(Debug, Default)]
pub struct Outcome {
    pub checks: usize,
    pub mismatches: Vec<String>,
    /// Per query or detector, how many checks had a nonempty expected set.
    pub nonempty: BTreeMap<String, usize>,
}

impl Outcome {
    fn same(&mut self, what: impl FnOnce() -> String, core: &LocationSet, expected: &Ids) {
        self.checks += 1;
        if core.members() == expected && expected.is_empty() {
            return;
        }
        let what = what();
        if !expected.is_empty() {
            let key = what.split(['(', ' ']).next().unwrap_or_default().to_owned();
            *self.nonempty.entry(key).or_default() += 1;
        }
        if core.members() != expected {
            self.mismatches.push(format!("{what}: core {:?} oracle {:?}", core.members(), expected));
        }
    }

    fn same_ids(&mut self, what: impl FnOnce() -> String, core: Option<LocationId>, expected: Option<LocationId>) {
        self.checks += 1;
        if core != expected {
            self.mismatches.push(format!("{}: core {core:?} oracle {expected:?}", what()));
        }
    }

    pub fn merge(&mut self, other: Outcome) {
        self.checks += other.checks;
        self.mismatches.extend(other.mismatches);
        for (k, n) in other.nonempty {
            *self.nonempty.entry(k).or_default() += n;
        }
    }
}

fn set(g: &ProgramGraph, kind: SetKind, ids: impl IntoIterator<Item = LocationId>) -> LocationSet {
    LocationSet::filtered(g, kind, ids)
}

fn ids(tagged: impl Iterator<Item = LocationId>) -> Vec<LocationId> {
    tagged.collect()
}

/// Graph structure: OVERRIDES edges and CALLS edges against recomputation.
pub fn check_structure(g: &ProgramGraph) -> Outcome {
    let w = World::new(g);
    let mut out = Outcome::default();
    for m in g.nodes_tagged(NodeTag::Method) {
        let edge = g.targets(m.id, RelationTag::Overrides).next();
        out.same_ids(|| format!("OVERRIDES of {}", g.qualified_name(m.id)), edge, w.override_target(m.id));
    }
    for c in g.nodes_tagged(NodeTag::CallSite) {
        let edge = g.targets(c.id, RelationTag::Calls).next();
        out.same_ids(|| format!("CALLS of site {} ({})", c.id, c.name), edge, w.resolve(c.id));
    }
    out
}

pub fn check_queries(g: &ProgramGraph) -> Outcome {
    let w = World::new(g);
    let mut out = Outcome::default();
    out.same(|| "gen_program_classes".into(), &query::gen_program_classes(g), &oracle::program_classes(&w));
    out.same(|| "gen_instance_methods".into(), &query::gen_instance_methods(g), &oracle::instance_methods(&w));

    let classes = ids(g.nodes_tagged(NodeTag::Class).map(|n| n.id));
    let methods = ids(g.nodes_tagged(NodeTag::Method).map(|n| n.id));
    let mut class_inputs: Vec<Vec<LocationId>> = classes.iter().map(|c| vec![*c]).collect();
    class_inputs.push(classes.clone());
    class_inputs.push(Vec::new());
    let mut method_inputs: Vec<Vec<LocationId>> = methods.iter().map(|m| vec![*m]).collect();
    method_inputs.push(methods.clone());
    method_inputs.push(Vec::new());

    let mut names: BTreeSet<String> = classes.iter().map(|c| g.name(*c).to_owned()).collect();
    names.insert(FRESH_CLASS.into());
    let sigs: BTreeSet<(String, Vec<String>)> = methods
        .iter()
        .map(|m| (g.name(*m).to_owned(), g.node(*m).unwrap().attrs.param_types.clone()))
        .collect();

    for input in &class_inputs {
        let s = set(g, SetKind::Class, input.iter().copied());
        let o: Ids = input.iter().copied().collect();
        let d = || format!("{input:?}");
        for name in &names {
            out.same(|| format!("classes_by_name({name}) {}", d()), &sd::classes_by_name(g, &s, name), &oracle::classes_by_name(&w, &o, name));
        }
        out.same(|| format!("methods_of {}", d()), &sd::methods_of(g, &s), &oracle::methods_of(&w, &o));
        out.same(|| format!("fields_of {}", d()), &sd::fields_of(g, &s), &oracle::fields_of(&w, &o));
        out.same(|| format!("superclasses {}", d()), &sd::superclasses(g, &s), &oracle::superclasses(&w, &o));
        out.same(|| format!("superclasses_direct {}", d()), &sd::superclasses_direct(g, &s), &oracle::superclasses_direct(&w, &o));
        out.same(|| format!("subclasses {}", d()), &sd::subclasses(g, &s), &oracle::subclasses(&w, &o));
        out.same(|| format!("subclasses_direct {}", d()), &sd::subclasses_direct(g, &s), &oracle::subclasses_direct(&w, &o));
        out.same(|| format!("enclosing_classes {}", d()), &sd::enclosing_classes(g, &s.clone().widen()), &oracle::enclosing_classes(&w, &o));
    }
    for input in &method_inputs {
        let s = set(g, SetKind::Method, input.iter().copied());
        let o: Ids = input.iter().copied().collect();
        let d = || format!("{input:?}");
        for (name, params) in &sigs {
            let sig = refd_core::template::Signature::new(name.clone(), params.clone());
            out.same(|| format!("methods_matching({sig}) {}", d()), &sd::methods_matching(g, &s, &sig), &oracle::methods_matching(&w, &o, name, params));
        }
        out.same(|| format!("overridden_by {}", d()), &sd::overridden_by(g, &s), &oracle::overridden_by(&w, &o));
        out.same(|| format!("overrides_of {}", d()), &sd::overrides_of(g, &s), &oracle::overrides_of(&w, &o));
        out.same(|| format!("callers_of {}", d()), &sd::callers_of(g, &s), &oracle::callers_of(&w, &o));
        out.same(|| format!("local_context_refs {}", d()), &sd::local_context_refs(g, &s), &oracle::local_context_refs(&w, &o));
        out.same(|| format!("enclosing_classes {}", d()), &sd::enclosing_classes(g, &s.clone().widen()), &oracle::enclosing_classes(&w, &o));
    }
    let mixed: Vec<LocationId> = g
        .nodes()
        .filter(|n| matches!(n.tag, NodeTag::CallSite | NodeTag::FieldAccess | NodeTag::Field))
        .map(|n| n.id)
        .collect();
    out.same(
        || "enclosing_classes of body refs and fields".into(),
        &sd::enclosing_classes(g, &set(g, SetKind::Any, mixed.iter().copied())),
        &oracle::enclosing_classes(&w, &mixed.iter().copied().collect()),
    );
    out
}

/// Signatures worth adding: every declared one, plus one per call site
/// built from its argument types so the overload detector has work.
fn candidate_signatures(g: &ProgramGraph) -> BTreeSet<(String, Vec<String>)> {
    let mut sigs: BTreeSet<(String, Vec<String>)> = g
        .nodes_tagged(NodeTag::Method)
        .map(|m| (m.name.clone(), m.attrs.param_types.clone()))
        .collect();
    for c in g.nodes_tagged(NodeTag::CallSite) {
        let args: Option<Vec<String>> = c.attrs.arg_types.iter().cloned().collect();
        if let Some(args) = args.filter(|a| a.iter().all(|t| t != "null")) {
            sigs.insert((c.name.clone(), args));
        }
    }
    sigs
}

pub fn check_detectors(g: &ProgramGraph) -> Outcome {
    let w = World::new(g);
    let mut out = Outcome::default();
    let mut names: BTreeSet<String> = g.nodes_tagged(NodeTag::Class).map(|n| n.name.clone()).collect();
    names.insert(FRESH_CLASS.into());

    for class in &names {
        for (name, params) in candidate_signatures(g) {
            for vis in [Visibility::Public, Visibility::Private] {
                let t = MethodTemplate::new(ClassTemplate::named(class), name.clone(), params.clone()).with_visibility(vis);
                let d = || format!("{t} ({vis})");
                out.same(|| format!("AM-1 {}", d()), &det::double_definition_method(g, &t), &oracle::am1(&w, &t));
                out.same(|| format!("AM-2 {}", d()), &det::broken_subtyping(g, &t), &oracle::am2(&w, &t));
                out.same(|| format!("AM-3 {}", d()), &det::corresponding_subclass_specification(g, &t), &oracle::am3(&w, &t));
                out.same(|| format!("AM-4 {}", d()), &det::overload_parameter_conversion(g, &t), &oracle::am4(g, &t));
            }
        }
        let t = ClassTemplate::named(class);
        out.same(|| format!("AC-1 {class}"), &det::double_definition_class(g, &t), &oracle::ac1(&w, &t));
    }

    for m in ids(g.nodes_tagged(NodeTag::Method).map(|n| n.id)) {
        let template = method_template_of(g, m);
        let target = MethodTarget::pinned(template.clone(), m);
        let d = || g.qualified_name(m);
        let run = |r: refd_core::Result<LocationSet>| r.expect("pinned target resolves");
        out.same(|| format!("RM-1 {}", d()), &run(det::missing_definition(g, &target)), &oracle::rm1(&w, m));
        out.same(|| format!("RM-2 {}", d()), &run(det::removed_concrete_override(g, &target)), &oracle::rm2(&w, m));
        out.same(|| format!("RM-3 {}", d()), &run(det::lost_specification(g, &target)), &oracle::rm3(&w, m));
        out.same(|| format!("RM-4 {}", d()), &run(det::missing_super_implementation(g, &target)), &oracle::rm4(&w, m));
        out.same(|| format!("RM-5 {}", d()), &run(det::missing_abstract_implementation(g, &target)), &oracle::rm5(&w, m));
        for dest in &names {
            let moved = template.relocated(ClassTemplate::named(dest));
            out.same(
                || format!("MM-1 {} -> {dest}", d()),
                &run(det::broken_local_references(g, &target, &moved)),
                &oracle::mm1(&w, m, dest),
            );
        }
    }
    out
}

/// Everything above.
pub fn check_all(g: &ProgramGraph) -> Outcome {
    let mut out = check_structure(g);
    out.merge(check_queries(g));
    out.merge(check_detectors(g));
    out
}
