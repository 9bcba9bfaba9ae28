//! Verdict functions decide which parts of an actual risk are dangers.
//!
//! Dispatch is by risk label: [`judge`] calls the trait method for the
//! detector that produced the risk, and every method defaults to keeping all
//! locations. Whatever a verdict returns is intersected with the risk's own
//! locations, so verdicts can only filter.

use std::collections::BTreeSet;

use super::microstep::MicrostepKind;
use super::Refactoring;
use crate::graph::LocationId;
use crate::query::LocationSet;
use crate::risk::{ActualRisk, RiskLabel, Subject};

pub fn all(risk: &ActualRisk) -> LocationSet {
    risk.locations.clone()
}

pub fn none(risk: &ActualRisk) -> LocationSet {
    LocationSet::empty(risk.locations.kind())
}

pub fn subset(risk: &ActualRisk, keep: impl Fn(LocationId) -> bool) -> LocationSet {
    risk.locations.clone().retain(|id| keep(*id))
}

pub trait VerdictFunction: Send + Sync {
    fn name(&self) -> &str;

    fn double_definition_method(&self, risk: &ActualRisk, _r: &Refactoring) -> LocationSet {
        all(risk)
    }
    fn broken_sub_typing(&self, risk: &ActualRisk, _r: &Refactoring) -> LocationSet {
        all(risk)
    }
    fn corresponding_subclass_specification(&self, risk: &ActualRisk, _r: &Refactoring) -> LocationSet {
        all(risk)
    }
    fn overload_parameter_conversion(&self, risk: &ActualRisk, _r: &Refactoring) -> LocationSet {
        all(risk)
    }
    fn missing_definition(&self, risk: &ActualRisk, _r: &Refactoring) -> LocationSet {
        all(risk)
    }
    fn removed_concrete_override(&self, risk: &ActualRisk, _r: &Refactoring) -> LocationSet {
        all(risk)
    }
    fn lost_specification(&self, risk: &ActualRisk, _r: &Refactoring) -> LocationSet {
        all(risk)
    }
    fn missing_super_implementation(&self, risk: &ActualRisk, _r: &Refactoring) -> LocationSet {
        all(risk)
    }
    fn missing_abstract_implementation(&self, risk: &ActualRisk, _r: &Refactoring) -> LocationSet {
        all(risk)
    }
    fn broken_local_references(&self, risk: &ActualRisk, _r: &Refactoring) -> LocationSet {
        all(risk)
    }
    fn double_definition_class(&self, risk: &ActualRisk, _r: &Refactoring) -> LocationSet {
        all(risk)
    }
}

/// Locations of `risk` that the verdict keeps.
pub fn judge(verdict: &dyn VerdictFunction, risk: &ActualRisk, r: &Refactoring) -> LocationSet {
    let kept = match risk.risk.label {
        RiskLabel::Am1 => verdict.double_definition_method(risk, r),
        RiskLabel::Am2 => verdict.broken_sub_typing(risk, r),
        RiskLabel::Am3 => verdict.corresponding_subclass_specification(risk, r),
        RiskLabel::Am4 => verdict.overload_parameter_conversion(risk, r),
        RiskLabel::Rm1 => verdict.missing_definition(risk, r),
        RiskLabel::Rm2 => verdict.removed_concrete_override(risk, r),
        RiskLabel::Rm3 => verdict.lost_specification(risk, r),
        RiskLabel::Rm4 => verdict.missing_super_implementation(risk, r),
        RiskLabel::Rm5 => verdict.missing_abstract_implementation(risk, r),
        RiskLabel::Mm1 => verdict.broken_local_references(risk, r),
        RiskLabel::Ac1 => verdict.double_definition_class(risk, r),
    };
    risk.locations.clone().retain(|id| kept.contains(*id))
}

/// Keeps every actual risk.
#[derive(Debug, Clone, Copy, Default)]
pub struct DefaultVerdict;

impl VerdictFunction for DefaultVerdict {
    fn name(&self) -> &str {
        "default"
    }
}

/// Pinned ids of every method the refactoring removes.
pub fn removed_methods(r: &Refactoring) -> BTreeSet<LocationId> {
    r.microsteps
        .iter()
        .flat_map(|m| m.walk())
        .filter(|m| m.kind == MicrostepKind::RemoveMethod)
        .filter_map(|m| match &m.subject {
            Subject::RemoveMethod(t) => t.pinned,
            _ => None,
        })
        .collect()
}

#[derive(Debug, Clone, Copy)]
pub struct PullUpVerdict {
    /// The destination is the source class's direct superclass.
    pub to_direct_superclass: bool,
    /// Drop the method being pulled up from its own subclass-specification
    /// risk, since the paired removal deletes it.
    pub exempt_source: bool,
}

impl VerdictFunction for PullUpVerdict {
    fn name(&self) -> &str {
        "pull-up-method"
    }

    fn removed_concrete_override(&self, risk: &ActualRisk, _r: &Refactoring) -> LocationSet {
        if self.to_direct_superclass {
            none(risk)
        } else {
            all(risk)
        }
    }

    fn corresponding_subclass_specification(&self, risk: &ActualRisk, r: &Refactoring) -> LocationSet {
        if !self.exempt_source {
            return all(risk);
        }
        let removed = removed_methods(r);
        subset(risk, |id| !removed.contains(&id))
    }
}
