use std::marker::PhantomData;

use super::subdetectors as sd;
use super::{gen_instance_methods, gen_program_classes, LocationSet, SetKind};
use crate::error::{Error, Result};
use crate::graph::ProgramGraph;
use crate::template::Signature;

/// Compile-time tag for a [`SetKind`].
pub trait Kind {
    const KIND: SetKind;
}

#[derive(Debug, Clone, Copy)]
pub struct Classes;
#[derive(Debug, Clone, Copy)]
pub struct Methods;
#[derive(Debug, Clone, Copy)]
pub struct Fields;
#[derive(Debug, Clone, Copy)]
pub struct CallSites;
#[derive(Debug, Clone, Copy)]
pub struct AnyKind;

impl Kind for Classes {
    const KIND: SetKind = SetKind::Class;
}
impl Kind for Methods {
    const KIND: SetKind = SetKind::Method;
}
impl Kind for Fields {
    const KIND: SetKind = SetKind::Field;
}
impl Kind for CallSites {
    const KIND: SetKind = SetKind::CallSite;
}
impl Kind for AnyKind {
    const KIND: SetKind = SetKind::Any;
}

/// A location set whose kind is part of its type, so only well-kinded
/// subdetector calls compile.
///
/// ```
/// # use refd_core::graph::ProgramGraph;
/// # use refd_core::query::Stream;
/// let g = ProgramGraph::new();
/// let inherited = Stream::program_classes(&g).named("Employee").superclasses().methods();
/// assert!(inherited.is_empty());
/// ```
#[derive(Debug, Clone)]
pub struct Stream<'g, K> {
    g: &'g ProgramGraph,
    set: LocationSet,
    kind: PhantomData<K>,
}

impl<'g, K: Kind> Stream<'g, K> {
    fn wrap(g: &'g ProgramGraph, set: LocationSet) -> Self {
        debug_assert_eq!(set.kind(), K::KIND);
        Stream { g, set, kind: PhantomData }
    }

    /// Adopts a dynamically typed set of the matching kind.
    pub fn from_set(g: &'g ProgramGraph, set: LocationSet) -> Result<Self> {
        if set.kind() != K::KIND {
            return Err(Error::KindMismatch {
                producer: "set".into(),
                consumer: "stream".into(),
                expected: K::KIND,
                found: set.kind(),
            });
        }
        Ok(Self::wrap(g, set))
    }

    pub fn set(&self) -> &LocationSet {
        &self.set
    }

    pub fn into_set(self) -> LocationSet {
        self.set
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }

    pub fn non_private(self) -> Self {
        let set = sd::non_private(self.g, &self.set);
        Self::wrap(self.g, set)
    }

    pub fn enclosing_classes(self) -> Stream<'g, Classes> {
        Stream::wrap(self.g, sd::enclosing_classes(self.g, &self.set))
    }
}

impl<'g> Stream<'g, Classes> {
    pub fn program_classes(g: &'g ProgramGraph) -> Self {
        Self::wrap(g, gen_program_classes(g))
    }

    pub fn named(self, name: &str) -> Self {
        Self::wrap(self.g, sd::classes_by_name(self.g, &self.set, name))
    }

    pub fn methods(self) -> Stream<'g, Methods> {
        Stream::wrap(self.g, sd::methods_of(self.g, &self.set))
    }

    pub fn fields(self) -> Stream<'g, Fields> {
        Stream::wrap(self.g, sd::fields_of(self.g, &self.set))
    }

    pub fn superclasses(self) -> Self {
        Self::wrap(self.g, sd::superclasses(self.g, &self.set))
    }

    pub fn superclasses_direct(self) -> Self {
        Self::wrap(self.g, sd::superclasses_direct(self.g, &self.set))
    }

    pub fn subclasses(self) -> Self {
        Self::wrap(self.g, sd::subclasses(self.g, &self.set))
    }

    pub fn subclasses_direct(self) -> Self {
        Self::wrap(self.g, sd::subclasses_direct(self.g, &self.set))
    }
}

impl<'g> Stream<'g, Methods> {
    pub fn instance_methods(g: &'g ProgramGraph) -> Self {
        Self::wrap(g, gen_instance_methods(g))
    }

    pub fn matching(self, sig: &Signature) -> Self {
        Self::wrap(self.g, sd::methods_matching(self.g, &self.set, sig))
    }

    pub fn named(self, name: &str) -> Self {
        Self::wrap(self.g, sd::methods_named(self.g, &self.set, name))
    }

    pub fn overridden_by(self) -> Self {
        Self::wrap(self.g, sd::overridden_by(self.g, &self.set))
    }

    pub fn overrides_of(self) -> Self {
        Self::wrap(self.g, sd::overrides_of(self.g, &self.set))
    }

    pub fn concrete(self) -> Self {
        Self::wrap(self.g, sd::concrete(self.g, &self.set))
    }

    pub fn abstract_only(self) -> Self {
        Self::wrap(self.g, sd::abstract_only(self.g, &self.set))
    }

    pub fn callers(self) -> Stream<'g, CallSites> {
        Stream::wrap(self.g, sd::callers_of(self.g, &self.set))
    }

    pub fn local_context_refs(self) -> Stream<'g, AnyKind> {
        Stream::wrap(self.g, sd::local_context_refs(self.g, &self.set))
    }
}
