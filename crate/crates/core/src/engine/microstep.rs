use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Result;
use crate::graph::ProgramGraph;
use crate::risk::{MethodTarget, PotentialRisk, RiskLabel, Subject};
use crate::template::{ClassTemplate, MethodTemplate};

/// Position of a microstep in its refactoring tree: `2` is the second
/// top-level step, `2.1` its first child.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MicrostepId(pub Vec<u32>);

impl fmt::Display for MicrostepId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        f.write_str(&parts.join("."))
    }
}

impl std::str::FromStr for MicrostepId {
    type Err = std::num::ParseIntError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.split('.').map(str::parse).collect::<Result<_, _>>().map(MicrostepId)
    }
}

impl Serialize for MicrostepId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for MicrostepId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum MicrostepKind {
    AddMethod,
    RemoveMethod,
    AddClass,
    RelocateMethod,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Microstep {
    pub id: MicrostepId,
    pub kind: MicrostepKind,
    pub subject: Subject,
    pub risks: Vec<PotentialRisk>,
    pub children: Vec<Microstep>,
}

impl Microstep {
    fn leaf(kind: MicrostepKind, subject: Subject, labels: &[RiskLabel]) -> Self {
        Microstep {
            id: MicrostepId::default(),
            kind,
            risks: labels.iter().map(|l| PotentialRisk::new(*l, subject.clone())).collect(),
            subject,
            children: Vec::new(),
        }
    }

    pub fn add_method(t: MethodTemplate) -> Self {
        Self::leaf(MicrostepKind::AddMethod, Subject::AddMethod(t), &RiskLabel::ADD_METHOD)
    }

    pub fn remove_method(t: MethodTarget) -> Self {
        Self::leaf(MicrostepKind::RemoveMethod, Subject::RemoveMethod(t), &RiskLabel::REMOVE_METHOD)
    }

    pub fn add_class(t: ClassTemplate) -> Self {
        Self::leaf(MicrostepKind::AddClass, Subject::AddClass(t), &[RiskLabel::Ac1])
    }

    /// Add at the destination, then remove at the source. The composite
    /// carries the broken-local-references risk itself.
    pub fn relocate_method(source: MethodTarget, destination: MethodTemplate) -> Self {
        let subject = Subject::Relocate {
            source: source.clone(),
            destination: destination.clone(),
        };
        Microstep {
            id: MicrostepId::default(),
            kind: MicrostepKind::RelocateMethod,
            risks: vec![PotentialRisk::new(RiskLabel::Mm1, subject.clone())],
            subject,
            children: vec![Self::add_method(destination), Self::remove_method(source)],
        }
    }

    pub fn is_composite(&self) -> bool {
        self.kind == MicrostepKind::RelocateMethod
    }

    /// Assigns hierarchical ids below `prefix`.
    pub(crate) fn number(&mut self, id: MicrostepId) {
        for (i, child) in self.children.iter_mut().enumerate() {
            let mut cid = id.0.clone();
            cid.push(i as u32 + 1);
            child.number(MicrostepId(cid));
        }
        self.id = id;
    }

    /// This microstep and all below it, depth first.
    pub fn walk(&self) -> Vec<&Microstep> {
        let mut out = vec![self];
        for c in &self.children {
            out.extend(c.walk());
        }
        out
    }
}

/// Applies the structural effect of `m` to `g`. A composite's effect is its
/// children's, in order.
pub fn apply_effect(m: &Microstep, g: &mut ProgramGraph) -> Result<()> {
    match &m.subject {
        _ if m.is_composite() => m.children.iter().try_for_each(|c| apply_effect(c, g)),
        Subject::AddMethod(t) => g.add_method_node(t).map(drop),
        Subject::RemoveMethod(t) => {
            let id = t.resolve(g)?;
            g.remove_method_node(id)
        }
        Subject::AddClass(t) => {
            g.add_class_node(t);
            Ok(())
        }
        Subject::Relocate { .. } => Ok(()),
    }
}
