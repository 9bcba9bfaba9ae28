//! Potential risks, their subjects, and the detectors that confirm them.
//!
//! A detector answers with a [`LocationSet`]; the risk is actual exactly when
//! that set is nonempty. No separate boolean is kept.

pub mod detectors;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::engine::{resolve_method, MicrostepId};
use crate::error::{Error, Result};
use crate::graph::{LocationId, NodeTag, ProgramGraph};
use crate::query::LocationSet;
use crate::template::{ClassTemplate, MethodTemplate};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RiskLabel {
    #[serde(rename = "AM-1")]
    Am1,
    #[serde(rename = "AM-2")]
    Am2,
    #[serde(rename = "AM-3")]
    Am3,
    #[serde(rename = "AM-4")]
    Am4,
    #[serde(rename = "RM-1")]
    Rm1,
    #[serde(rename = "RM-2")]
    Rm2,
    #[serde(rename = "RM-3")]
    Rm3,
    #[serde(rename = "RM-4")]
    Rm4,
    #[serde(rename = "RM-5")]
    Rm5,
    #[serde(rename = "MM-1")]
    Mm1,
    #[serde(rename = "AC-1")]
    Ac1,
}

impl RiskLabel {
    pub const ALL: [RiskLabel; 11] = [
        RiskLabel::Am1,
        RiskLabel::Am2,
        RiskLabel::Am3,
        RiskLabel::Am4,
        RiskLabel::Rm1,
        RiskLabel::Rm2,
        RiskLabel::Rm3,
        RiskLabel::Rm4,
        RiskLabel::Rm5,
        RiskLabel::Mm1,
        RiskLabel::Ac1,
    ];

    pub const ADD_METHOD: [RiskLabel; 4] = [RiskLabel::Am1, RiskLabel::Am2, RiskLabel::Am3, RiskLabel::Am4];
    pub const REMOVE_METHOD: [RiskLabel; 5] =
        [RiskLabel::Rm1, RiskLabel::Rm2, RiskLabel::Rm3, RiskLabel::Rm4, RiskLabel::Rm5];

    pub fn code(self) -> &'static str {
        match self {
            RiskLabel::Am1 => "AM-1",
            RiskLabel::Am2 => "AM-2",
            RiskLabel::Am3 => "AM-3",
            RiskLabel::Am4 => "AM-4",
            RiskLabel::Rm1 => "RM-1",
            RiskLabel::Rm2 => "RM-2",
            RiskLabel::Rm3 => "RM-3",
            RiskLabel::Rm4 => "RM-4",
            RiskLabel::Rm5 => "RM-5",
            RiskLabel::Mm1 => "MM-1",
            RiskLabel::Ac1 => "AC-1",
        }
    }

    pub fn from_code(code: &str) -> Option<RiskLabel> {
        RiskLabel::ALL.into_iter().find(|l| l.code() == code)
    }

    /// Name of the detector that confirms this risk.
    pub fn detector(self) -> &'static str {
        match self {
            RiskLabel::Am1 => "DoubleDefinition.Method",
            RiskLabel::Am2 => "BrokenSubTyping",
            RiskLabel::Am3 => "CorrespondingSubclassSpecification",
            RiskLabel::Am4 => "OverloadParameterConversion",
            RiskLabel::Rm1 => "MissingDefinition",
            RiskLabel::Rm2 => "RemovedConcreteOverride",
            RiskLabel::Rm3 => "LostSpecification",
            RiskLabel::Rm4 => "MissingSuperImplementation",
            RiskLabel::Rm5 => "MissingAbstractImplementation",
            RiskLabel::Mm1 => "BrokenLocalReferences",
            RiskLabel::Ac1 => "DoubleDefinition.Class",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            RiskLabel::Am1 => "a method with the same signature already exists in the destination class",
            RiskLabel::Am2 => {
                "a superclass of the destination declares the same signature, so the new method overrides it"
            }
            RiskLabel::Am3 => {
                "a subclass of the destination declares the same signature and would override the new method \
                 without having been written against it"
            }
            RiskLabel::Am4 => {
                "existing calls would bind to the new overload because its parameter types need fewer \
                 conversions"
            }
            RiskLabel::Rm1 => "the method is still called after its removal",
            RiskLabel::Rm2 => {
                "the removed method overrides a concrete method, so calls fall back to the inherited body"
            }
            RiskLabel::Rm3 => "methods that override the removed method lose the declaration they refine",
            RiskLabel::Rm4 => "subclasses inherit the removed body and have no implementation of their own",
            RiskLabel::Rm5 => {
                "the removed method implements an abstract method and a concrete class is left without an \
                 implementation"
            }
            RiskLabel::Mm1 => {
                "the method body uses members of its current class hierarchy that the destination cannot access"
            }
            RiskLabel::Ac1 => "a class with the same name already exists",
        }
    }
}

impl fmt::Display for RiskLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// A method to remove: its template plus, when the builder resolved it, the
/// id of the exact location. The pin survives snapshots and disambiguates
/// once augmentation has put a second method with the same signature in the
/// class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MethodTarget {
    pub template: MethodTemplate,
    pub pinned: Option<LocationId>,
}

impl MethodTarget {
    pub fn unpinned(template: MethodTemplate) -> Self {
        MethodTarget { template, pinned: None }
    }

    pub fn pinned(template: MethodTemplate, id: LocationId) -> Self {
        MethodTarget {
            template,
            pinned: Some(id),
        }
    }

    /// The location this target denotes in `g`.
    pub fn resolve(&self, g: &ProgramGraph) -> Result<LocationId> {
        if let Some(id) = self.pinned.filter(|id| g.tag(*id) == Some(NodeTag::Method)) {
            return Ok(id);
        }
        resolve_method(g, &self.template)?.ok_or_else(|| Error::UnresolvableTemplate(self.template.describe()))
    }
}

/// What a microstep, and therefore each of its risks, is about.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Subject {
    AddMethod(MethodTemplate),
    RemoveMethod(MethodTarget),
    AddClass(ClassTemplate),
    Relocate {
        source: MethodTarget,
        destination: MethodTemplate,
    },
}

impl Subject {
    pub fn describe(&self) -> String {
        match self {
            Subject::AddMethod(t) => format!("add {t}"),
            Subject::RemoveMethod(t) => format!("remove {}", t.template),
            Subject::AddClass(c) => format!("add class {c}"),
            Subject::Relocate { source, destination } => {
                format!("relocate {} to {}", source.template, destination.enclosing)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PotentialRisk {
    pub label: RiskLabel,
    pub subject: Subject,
}

impl PotentialRisk {
    pub fn new(label: RiskLabel, subject: Subject) -> Self {
        PotentialRisk { label, subject }
    }

    pub fn name(&self) -> &'static str {
        self.label.detector()
    }

    pub fn description(&self) -> &'static str {
        self.label.description()
    }

    /// Runs this risk's detector against `g`.
    pub fn detect(&self, g: &ProgramGraph) -> Result<LocationSet> {
        detectors::detect(self, g)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActualRisk {
    pub risk: PotentialRisk,
    pub locations: LocationSet,
    pub microstep: MicrostepId,
}

impl ActualRisk {
    pub fn is_actual(&self) -> bool {
        !self.locations.is_empty()
    }
}
