//! Engine invariants as reusable checks. Each returns `Err` with a
//! description of the first violation.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use refd_core::engine::{
    analyze, apply_effect, build_combine_methods_into_class, build_move_method, build_pull_up_method, detect_all,
    method_template_of, AnalyzeOptions, DefaultVerdict, Refactoring, VerdictFunction,
};
use refd_core::graph::lookup::ancestors;
use refd_core::graph::{LocationId, NodeTag, ProgramGraph};
use refd_core::query::{chain, gen_program_classes, LocationSet, SetKind, Subdetector};
use refd_core::risk::ActualRisk;
use refd_core::template::{ClassTemplate, MethodTemplate, ParameterSpec, Signature, Visibility};
use refd_core::Error;

use crate::random::random_graph;

type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn pick<T: Clone>(items: &[T], i: usize) -> Option<T> {
    (!items.is_empty()).then(|| items[i % items.len()].clone())
}

fn ids(g: &ProgramGraph, tag: NodeTag) -> Vec<LocationId> {
    g.nodes_tagged(tag).map(|n| n.id).collect()
}

/// Choices that select one refactoring out of a graph.
#[derive(Debug, Clone, Copy)]
pub struct Choice {
    pub kind: u8,
    pub a: usize,
    pub b: usize,
    pub c: usize,
}

impl Choice {
    pub fn random(rng: &mut impl Rng) -> Self {
        Choice {
            kind: rng.gen(),
            a: rng.gen(),
            b: rng.gen(),
            c: rng.gen(),
        }
    }

    /// The refactoring these choices describe, if it passes preconditions.
    pub fn build(self, g: &ProgramGraph) -> Option<Refactoring> {
        let m = pick(&ids(g, NodeTag::Method), self.a)?;
        let t = method_template_of(g, m);
        let class = g.enclosing_class(m)?;
        match self.kind % 3 {
            0 => {
                let dest = pick(&ancestors(g, class), self.b)?;
                build_pull_up_method(g, &t, &ClassTemplate::named(g.name(dest)), self.c.is_multiple_of(2)).ok()
            }
            1 => {
                let dest = pick(&ids(g, NodeTag::Class), self.b)?;
                build_move_method(g, &t, &ClassTemplate::named(g.name(dest))).ok()
            }
            _ => {
                let second = method_template_of(g, pick(&ids(g, NodeTag::Method), self.b)?);
                let name = if self.c.is_multiple_of(2) {
                    "Fresh".to_owned()
                } else {
                    g.name(pick(&ids(g, NodeTag::Class), self.c)?).to_owned()
                };
                build_combine_methods_into_class(g, &[t, second], &ClassTemplate::named(name)).ok()
            }
        }
    }
}

/// A verdict that answers with junk: a salted subset of each risk plus
/// ids that are not in the risk at all.
pub struct Scrambler(pub u64);

impl Scrambler {
    fn scramble(&self, risk: &ActualRisk) -> LocationSet {
        let mut junk = ProgramGraph::new();
        let mut out: Vec<LocationId> = risk
            .locations
            .iter()
            .filter(|id| (id.0 as u64).wrapping_add(self.0).is_multiple_of(2))
            .collect();
        for k in 0..(self.0 % 4) {
            out.push(junk.add_class_node(&ClassTemplate::named(format!("X{k}"))));
        }
        out.push(LocationId(u32::MAX));
        LocationSet::filtered(&junk, SetKind::Any, out)
    }
}

impl VerdictFunction for Scrambler {
    fn name(&self) -> &str {
        "scrambler"
    }
    fn double_definition_method(&self, risk: &ActualRisk, _: &Refactoring) -> LocationSet {
        self.scramble(risk)
    }
    fn broken_sub_typing(&self, risk: &ActualRisk, _: &Refactoring) -> LocationSet {
        self.scramble(risk)
    }
    fn corresponding_subclass_specification(&self, risk: &ActualRisk, _: &Refactoring) -> LocationSet {
        self.scramble(risk)
    }
    fn overload_parameter_conversion(&self, risk: &ActualRisk, _: &Refactoring) -> LocationSet {
        self.scramble(risk)
    }
    fn missing_definition(&self, risk: &ActualRisk, _: &Refactoring) -> LocationSet {
        self.scramble(risk)
    }
    fn removed_concrete_override(&self, risk: &ActualRisk, _: &Refactoring) -> LocationSet {
        self.scramble(risk)
    }
    fn broken_local_references(&self, risk: &ActualRisk, _: &Refactoring) -> LocationSet {
        self.scramble(risk)
    }
    fn double_definition_class(&self, risk: &ActualRisk, _: &Refactoring) -> LocationSet {
        self.scramble(risk)
    }
}

/// Adding a method and removing it again restores the graph.
pub fn add_then_remove(g: &ProgramGraph, class: usize, method: usize, private: bool, extra_param: bool) -> Check {
    let Some(class) = pick(&ids(g, NodeTag::Class), class) else { return Ok(()) };
    let host = ClassTemplate::named(g.name(class));
    let mut t = match pick(&ids(g, NodeTag::Method), method) {
        Some(id) => method_template_of(g, id).relocated(host),
        None => MethodTemplate::new(host, "m", ["int"]),
    };
    if extra_param {
        t.params.push(ParameterSpec::new("extra", "double"));
    }
    if private {
        t = t.with_visibility(Visibility::Private);
    }
    let mut h = g.snapshot();
    let id = h.add_method_node(&t).map_err(|e| e.to_string())?;
    h.check_integrity().map_err(|e| format!("after adding {}: {e}", t.describe()))?;
    h.remove_method_node(id).map_err(|e| e.to_string())?;
    h.check_integrity().map_err(|e| format!("after removing {}: {e}", t.describe()))?;
    ensure!(h.same_structure(g), "add/remove of {} changed the graph", t.describe());
    Ok(())
}

/// Every subdetector in the library, with representative arguments.
pub fn subdetector_library() -> Vec<Subdetector> {
    vec![
        Subdetector::classes_by_name("C1"),
        Subdetector::methods_of(),
        Subdetector::fields_of(),
        Subdetector::superclasses(),
        Subdetector::superclasses_direct(),
        Subdetector::subclasses(),
        Subdetector::subclasses_direct(),
        Subdetector::enclosing_classes(),
        Subdetector::methods_matching(Signature::new("m", ["int"])),
        Subdetector::methods_named("n"),
        Subdetector::overridden_by(),
        Subdetector::overridden_by_direct(),
        Subdetector::overrides_of(),
        Subdetector::overrides_of_direct(),
        Subdetector::callers_of(),
        Subdetector::local_context_refs(),
        Subdetector::non_private(SetKind::Method),
        Subdetector::non_private(SetKind::Any),
        Subdetector::concrete(SetKind::Method),
        Subdetector::abstract_only(SetKind::Class),
    ]
}

/// Typed sets hold only what their kind admits, chains fail exactly when
/// adjacent kinds disagree, and no query moves the generation counter.
pub fn kind_purity(g: &ProgramGraph, picks: &[usize]) -> Check {
    let library = subdetector_library();
    let generation = g.generation();
    let every: Vec<LocationId> = g.nodes().map(|n| n.id).collect();
    for s in &library {
        let input = LocationSet::filtered(g, s.input_kind(), every.iter().copied());
        let out = s.apply(g, &input).map_err(|e| e.to_string())?;
        ensure!(out.kind() == s.output_kind(), "{} declared {} but built {}", s.name(), s.output_kind(), out.kind());
        for id in out.iter() {
            let tag = g.tag(id).ok_or_else(|| format!("{} fabricated {id}", s.name()))?;
            ensure!(s.output_kind().admits(tag), "{} leaked a {tag:?} into a {}", s.name(), s.output_kind());
        }
    }
    let steps: Vec<Subdetector> = picks.iter().map(|i| library[i % library.len()].clone()).collect();
    let well_kinded = steps
        .iter()
        .try_fold(SetKind::Class, |k, s| s.input_kind().accepts(k).then_some(s.output_kind()))
        .is_some();
    match chain(g, gen_program_classes(g), &steps) {
        Ok(out) => {
            ensure!(well_kinded, "ill-kinded chain ran");
            let last = steps.last().map_or(SetKind::Class, |s| s.output_kind());
            ensure!(out.iter().all(|id| g.tag(id).is_some_and(|t| last.admits(t))), "chain output leaked");
        }
        Err(Error::KindMismatch { .. }) => ensure!(!well_kinded, "well-kinded chain rejected"),
        Err(e) => return Err(format!("unexpected chain error {e}")),
    }
    ensure!(g.generation() == generation, "a query mutated the graph");
    Ok(())
}

/// Whatever a verdict answers, dangers stay within the actual risks.
pub fn filter_only(g: &ProgramGraph, r: &Refactoring, salt: u64) -> Check {
    let r = r.clone().with_verdict(Arc::new(Scrambler(salt)));
    let (findings, _) = detect_all(&r, g, AnalyzeOptions::default());
    for d in &analyze(&r, g).dangers {
        let f = findings
            .iter()
            .find(|f| f.actual.microstep == d.microstep && f.actual.risk.label == d.label)
            .ok_or_else(|| format!("{} at {} has no actual risk", d.label, d.microstep))?;
        for l in &d.locations {
            ensure!(f.actual.locations.contains(l.id), "verdict added {} to {}", l.element, d.label);
        }
    }
    Ok(())
}

fn keyed(items: impl Iterator<Item = (String, String, Vec<LocationId>)>) -> Vec<(String, String, Vec<LocationId>)> {
    let mut v: Vec<_> = items.collect();
    v.sort();
    v
}

/// Under the default verdict, dangers are the actual risks unchanged.
pub fn default_identity(g: &ProgramGraph, r: &Refactoring) -> Check {
    let r = r.clone().with_verdict(Arc::new(DefaultVerdict));
    let (findings, _) = detect_all(&r, g, AnalyzeOptions::default());
    let expected = keyed(findings.iter().filter(|f| f.actual.is_actual()).map(|f| {
        (
            f.actual.microstep.to_string(),
            f.actual.risk.label.code().to_owned(),
            f.actual.locations.iter().collect(),
        )
    }));
    let got = keyed(analyze(&r, g).dangers.iter().map(|d| {
        let mut ids: Vec<LocationId> = d.locations.iter().map(|l| l.id).collect();
        ids.sort();
        (d.microstep.to_string(), d.label.code().to_owned(), ids)
    }));
    ensure!(expected == got, "actual risks {expected:?} but dangers {got:?}");
    Ok(())
}

/// Analysis leaves the baseline untouched, and analysing the same request on
/// a freshly built graph yields byte-identical JSON.
pub fn baseline_and_determinism(seed: u64, choice: Choice) -> Check {
    let g = random_graph(seed);
    let before = g.snapshot();
    let Some(r) = choice.build(&g) else { return Ok(()) };
    let first = analyze(&r, &g).to_document().to_json();
    ensure!(g.generation() == before.generation(), "generation moved");
    ensure!(g.same_structure(&before), "baseline structure changed");
    let rebuilt = random_graph(seed);
    let again = choice.build(&rebuilt).ok_or("rebuild lost the refactoring")?;
    let second = analyze(&again, &rebuilt).to_document().to_json();
    ensure!(first == second, "JSON differs between runs");
    let doc: refd_core::engine::ReportDocument = serde_json::from_str(&first).map_err(|e| e.to_string())?;
    ensure!(doc == analyze(&r, &g).to_document(), "JSON does not round-trip");
    Ok(())
}

/// Every leaf effect keeps the working graph referentially sound.
pub fn effects_keep_integrity(g: &ProgramGraph, r: &Refactoring) -> Check {
    let mut working = g.snapshot();
    for m in r.microsteps.iter().flat_map(|m| m.walk()).filter(|m| !m.is_composite()) {
        if apply_effect(m, &mut working).is_ok() {
            working.check_integrity().map_err(|e| format!("after {}: {e}", m.id))?;
        }
    }
    Ok(())
}

/// Tally of a deterministic sweep.
#[derive(Debug, Default, Clone, Copy)]
pub struct Sweep {
    pub graphs: usize,
    pub refactorings: usize,
}

/// Runs every invariant over `seeds` random projects with `per_graph`
/// refactoring choices each.
pub fn sweep(seeds: std::ops::Range<u64>, per_graph: usize) -> Result<Sweep, String> {
    let mut tally = Sweep::default();
    for seed in seeds {
        let g = random_graph(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        tally.graphs += 1;
        for _ in 0..per_graph {
            let at = |e: String| format!("seed {seed}: {e}");
            add_then_remove(&g, rng.gen(), rng.gen(), rng.gen(), rng.gen()).map_err(at)?;
            let picks: Vec<usize> = (0..rng.gen_range(0..6)).map(|_| rng.gen()).collect();
            kind_purity(&g, &picks).map_err(at)?;
            let choice = Choice::random(&mut rng);
            let Some(r) = choice.build(&g) else { continue };
            tally.refactorings += 1;
            filter_only(&g, &r, rng.gen()).map_err(at)?;
            default_identity(&g, &r).map_err(at)?;
            effects_keep_integrity(&g, &r).map_err(at)?;
            baseline_and_determinism(seed, choice).map_err(at)?;
        }
    }
    Ok(tally)
}
