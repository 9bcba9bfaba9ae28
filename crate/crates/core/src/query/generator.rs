use crate::graph::{NodeTag, ProgramGraph};

use super::{LocationSet, SetKind};

/// Starting point of a query.
#[derive(Clone, Copy)]
pub struct Generator {
    pub name: &'static str,
    pub kind: SetKind,
    produce: fn(&ProgramGraph) -> LocationSet,
}

impl Generator {
    pub const PROGRAM_CLASSES: Generator = Generator {
        name: "ProgramClasses",
        kind: SetKind::Class,
        produce: gen_program_classes,
    };
    pub const INSTANCE_METHODS: Generator = Generator {
        name: "InstanceMethods",
        kind: SetKind::Method,
        produce: gen_instance_methods,
    };
    pub const ALL_METHODS: Generator = Generator {
        name: "AllMethods",
        kind: SetKind::Method,
        produce: gen_all_methods,
    };
    pub const CALL_SITES: Generator = Generator {
        name: "CallSites",
        kind: SetKind::CallSite,
        produce: gen_call_sites,
    };

    pub fn produce(&self, g: &ProgramGraph) -> LocationSet {
        (self.produce)(g)
    }
}

impl std::fmt::Debug for Generator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Generator").field("name", &self.name).field("kind", &self.kind).finish()
    }
}

/// Every class in the program.
pub fn gen_program_classes(g: &ProgramGraph) -> LocationSet {
    LocationSet::new_unchecked(SetKind::Class, g.nodes_tagged(NodeTag::Class).map(|n| n.id))
}

/// Every non-static method.
pub fn gen_instance_methods(g: &ProgramGraph) -> LocationSet {
    LocationSet::new_unchecked(
        SetKind::Method,
        g.nodes_tagged(NodeTag::Method).filter(|n| !n.attrs.is_static).map(|n| n.id),
    )
}

pub fn gen_all_methods(g: &ProgramGraph) -> LocationSet {
    LocationSet::new_unchecked(SetKind::Method, g.nodes_tagged(NodeTag::Method).map(|n| n.id))
}

pub fn gen_call_sites(g: &ProgramGraph) -> LocationSet {
    LocationSet::new_unchecked(SetKind::CallSite, g.nodes_tagged(NodeTag::CallSite).map(|n| n.id))
}
