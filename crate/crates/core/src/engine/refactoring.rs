use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::microstep::{Microstep, MicrostepId};
use super::resolve::{class_template_of, method_template_of, resolve_method};
use super::verdict::{DefaultVerdict, PullUpVerdict, VerdictFunction};
use crate::error::{Error, Result};
use crate::graph::lookup::{is_proper_ancestor, superclass};
use crate::graph::{LocationId, ProgramGraph};
use crate::risk::MethodTarget;
use crate::template::{ClassTemplate, MethodTemplate, ParameterSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RefactoringKind {
    PullUpMethod,
    MoveMethod,
    CombineMethodsIntoClass,
    /// Hand-assembled microstep lists, used to probe the engine directly.
    Custom,
}

impl RefactoringKind {
    pub const BUILT_IN: [RefactoringKind; 3] = [
        RefactoringKind::PullUpMethod,
        RefactoringKind::MoveMethod,
        RefactoringKind::CombineMethodsIntoClass,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RefactoringKind::PullUpMethod => "pull-up-method",
            RefactoringKind::MoveMethod => "move-method",
            RefactoringKind::CombineMethodsIntoClass => "combine-methods-into-class",
            RefactoringKind::Custom => "custom",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::BUILT_IN.into_iter().find(|k| k.as_str() == s)
    }
}

impl fmt::Display for RefactoringKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Parameters echoed into the report.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefactoringParams {
    pub methods: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub destination: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub to_direct_superclass: Option<bool>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub strict_paper_verdict: bool,
}

#[derive(Clone)]
pub struct Refactoring {
    pub kind: RefactoringKind,
    pub params: RefactoringParams,
    pub microsteps: Vec<Microstep>,
    pub verdict: Arc<dyn VerdictFunction>,
}

impl fmt::Debug for Refactoring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Refactoring")
            .field("kind", &self.kind)
            .field("params", &self.params)
            .field("microsteps", &self.microsteps)
            .field("verdict", &self.verdict.name())
            .finish()
    }
}

impl Refactoring {
    pub fn new(kind: RefactoringKind, params: RefactoringParams, verdict: Arc<dyn VerdictFunction>) -> Self {
        Refactoring {
            kind,
            params,
            microsteps: Vec::new(),
            verdict,
        }
    }

    /// A refactoring made of the given microsteps, in order.
    pub fn custom(microsteps: Vec<Microstep>, verdict: Arc<dyn VerdictFunction>) -> Self {
        let mut r = Self::new(RefactoringKind::Custom, RefactoringParams::default(), verdict);
        for m in microsteps {
            r.push(m);
        }
        r
    }

    pub fn push(&mut self, mut m: Microstep) {
        m.number(MicrostepId(vec![self.microsteps.len() as u32 + 1]));
        self.microsteps.push(m);
    }

    pub fn with_verdict(mut self, verdict: Arc<dyn VerdictFunction>) -> Self {
        self.verdict = verdict;
        self
    }
}

fn existing_method(g: &ProgramGraph, t: &MethodTemplate) -> Result<LocationId> {
    resolve_method(g, t)?.ok_or_else(|| Error::UnresolvableTemplate(t.describe()))
}

fn existing_class(g: &ProgramGraph, name: &str) -> Result<LocationId> {
    g.class_named(name).ok_or_else(|| Error::UnresolvableTemplate(name.to_owned()))
}

/// Moves a method into a proper ancestor of its class.
pub fn build_pull_up_method(
    g: &ProgramGraph,
    method: &MethodTemplate,
    destination: &ClassTemplate,
    strict_paper_verdict: bool,
) -> Result<Refactoring> {
    let id = existing_method(g, method)?;
    let dest = existing_class(g, &destination.name)?;
    let source = g.enclosing_class(id).expect("method has a class");
    if !is_proper_ancestor(g, dest, source) {
        return Err(Error::NotAnAncestor {
            class: g.name(source).to_owned(),
            destination: destination.name.clone(),
        });
    }
    let direct = superclass(g, source) == Some(dest);
    let full = method_template_of(g, id);
    let moved = full.relocated(class_template_of(g, dest));
    let mut r = Refactoring::new(
        RefactoringKind::PullUpMethod,
        RefactoringParams {
            methods: vec![full.describe()],
            destination: Some(destination.name.clone()),
            to_direct_superclass: Some(direct),
            strict_paper_verdict,
        },
        Arc::new(PullUpVerdict {
            to_direct_superclass: direct,
            exempt_source: !strict_paper_verdict,
        }),
    );
    r.push(Microstep::relocate_method(MethodTarget::pinned(full, id), moved));
    Ok(r)
}

/// Moves a method to another class. Callers are assumed to be rewritten to
/// call it on the destination, so the first parameter typed as the
/// destination becomes a parameter typed as the source class.
pub fn build_move_method(g: &ProgramGraph, method: &MethodTemplate, destination: &ClassTemplate) -> Result<Refactoring> {
    let id = existing_method(g, method)?;
    let dest = existing_class(g, &destination.name)?;
    let source = g.enclosing_class(id).expect("method has a class");
    if source == dest {
        return Err(Error::SameClass(destination.name.clone()));
    }
    let full = method_template_of(g, id);
    let mut moved = full.relocated(class_template_of(g, dest));
    let source_name = g.name(source);
    if let Some(p) = moved.params.iter_mut().find(|p| p.type_name == destination.name) {
        *p = ParameterSpec::new(source_name.to_lowercase(), source_name);
    }
    let mut r = Refactoring::new(
        RefactoringKind::MoveMethod,
        RefactoringParams {
            methods: vec![full.describe()],
            destination: Some(destination.name.clone()),
            ..RefactoringParams::default()
        },
        Arc::new(DefaultVerdict),
    );
    r.push(Microstep::relocate_method(MethodTarget::pinned(full, id), moved));
    Ok(r)
}

/// Creates `new_class`, then relocates each method into it in order.
pub fn build_combine_methods_into_class(
    g: &ProgramGraph,
    methods: &[MethodTemplate],
    new_class: &ClassTemplate,
) -> Result<Refactoring> {
    let resolved = methods
        .iter()
        .map(|m| existing_method(g, m).map(|id| (id, method_template_of(g, id))))
        .collect::<Result<Vec<_>>>()?;
    let mut r = Refactoring::new(
        RefactoringKind::CombineMethodsIntoClass,
        RefactoringParams {
            methods: resolved.iter().map(|(_, t)| t.describe()).collect(),
            destination: Some(new_class.name.clone()),
            ..RefactoringParams::default()
        },
        Arc::new(DefaultVerdict),
    );
    r.push(Microstep::add_class(new_class.clone()));
    for (id, full) in resolved {
        let moved = full.relocated(new_class.clone());
        r.push(Microstep::relocate_method(MethodTarget::pinned(full, id), moved));
    }
    Ok(r)
}
