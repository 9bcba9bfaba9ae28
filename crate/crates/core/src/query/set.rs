use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{LocationId, NodeTag, ProgramGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SetKind {
    Class,
    Method,
    Field,
    CallSite,
    Any,
}

impl SetKind {
    pub fn admits(self, tag: NodeTag) -> bool {
        match self {
            SetKind::Class => tag == NodeTag::Class,
            SetKind::Method => tag == NodeTag::Method,
            SetKind::Field => tag == NodeTag::Field,
            SetKind::CallSite => tag == NodeTag::CallSite,
            SetKind::Any => true,
        }
    }

    /// Whether a set of kind `produced` may be fed to a consumer of `self`.
    pub fn accepts(self, produced: SetKind) -> bool {
        self == SetKind::Any || self == produced
    }
}

impl fmt::Display for SetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SetKind::Class => "ClassSet",
            SetKind::Method => "MethodSet",
            SetKind::Field => "FieldSet",
            SetKind::CallSite => "CallSiteSet",
            SetKind::Any => "AnySet",
        })
    }
}

/// A set of program locations whose members all satisfy `kind`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocationSet {
    kind: SetKind,
    members: BTreeSet<LocationId>,
}

impl LocationSet {
    pub fn empty(kind: SetKind) -> Self {
        LocationSet {
            kind,
            members: BTreeSet::new(),
        }
    }

    /// Builds a set from ids that the caller knows satisfy `kind`.
    pub(crate) fn new_unchecked(kind: SetKind, members: impl IntoIterator<Item = LocationId>) -> Self {
        LocationSet {
            kind,
            members: members.into_iter().collect(),
        }
    }

    /// Builds a set, keeping only ids present in `g` whose tag fits `kind`.
    pub fn filtered(g: &ProgramGraph, kind: SetKind, ids: impl IntoIterator<Item = LocationId>) -> Self {
        LocationSet {
            kind,
            members: ids.into_iter().filter(|id| g.tag(*id).is_some_and(|t| kind.admits(t))).collect(),
        }
    }

    /// Builds a set, failing on the first id that is missing or ill-kinded.
    pub fn checked(g: &ProgramGraph, kind: SetKind, ids: impl IntoIterator<Item = LocationId>) -> Result<Self> {
        let mut members = BTreeSet::new();
        for id in ids {
            match g.tag(id) {
                Some(t) if kind.admits(t) => {
                    members.insert(id);
                }
                _ => return Err(Error::UnknownLocation(id.0)),
            }
        }
        Ok(LocationSet { kind, members })
    }

    pub fn kind(&self) -> SetKind {
        self.kind
    }

    pub fn members(&self) -> &BTreeSet<LocationId> {
        &self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = LocationId> + '_ {
        self.members.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, id: LocationId) -> bool {
        self.members.contains(&id)
    }

    /// Same members viewed as an [`SetKind::Any`] set.
    pub fn widen(self) -> Self {
        LocationSet {
            kind: SetKind::Any,
            members: self.members,
        }
    }

    /// Members satisfying `keep`, same kind.
    pub fn retain(mut self, keep: impl FnMut(&LocationId) -> bool) -> Self {
        self.members.retain(keep);
        self
    }

    pub fn union(mut self, other: &LocationSet) -> Self {
        debug_assert!(self.kind == other.kind || self.kind == SetKind::Any);
        self.members.extend(other.members.iter().copied());
        self
    }
}
