use std::path::PathBuf;

use refd_core::frontend::{parse_project, parse_sources, resolve_project};
use refd_core::graph::{build_graph, ProgramGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fixture {
    /// Source, Target and Sub: moving `Source.method` into `Target`.
    MoveMethod,
    /// LegacyEmployee and Employee both declaring `salaryBonus(int)`.
    PullUp,
    /// C overriding `Super.m`, called on a C-typed receiver.
    Override,
    /// Unrelated classes C and D both declaring `m()`.
    DoubleDefinition,
    /// Invoice and Receipt, each with `toString()`.
    Combine,
    /// P with `m(long)` and calls `m(5)` and `m(5L)`.
    Widening,
}

impl Fixture {
    pub const ALL: [Fixture; 6] = [
        Fixture::MoveMethod,
        Fixture::PullUp,
        Fixture::Override,
        Fixture::DoubleDefinition,
        Fixture::Combine,
        Fixture::Widening,
    ];

    pub fn code(self) -> &'static str {
        match self {
            Fixture::MoveMethod => "FIX-A",
            Fixture::PullUp => "FIX-B",
            Fixture::Override => "FIX-C",
            Fixture::DoubleDefinition => "FIX-D",
            Fixture::Combine => "FIX-E",
            Fixture::Widening => "FIX-F",
        }
    }

    pub fn dir_name(self) -> &'static str {
        match self {
            Fixture::MoveMethod => "move-method",
            Fixture::PullUp => "pull-up",
            Fixture::Override => "override",
            Fixture::DoubleDefinition => "double-definition",
            Fixture::Combine => "combine",
            Fixture::Widening => "widening",
        }
    }

    pub fn path(self) -> PathBuf {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(self.dir_name())
    }

    pub fn graph(self) -> ProgramGraph {
        let ast = parse_project(&self.path()).expect("fixture parses");
        build_graph(&resolve_project(ast).expect("fixture resolves"))
    }
}

/// Graph of an in-memory project.
pub fn graph_from_sources<P: Into<String>, T: Into<String>>(sources: impl IntoIterator<Item = (P, T)>) -> ProgramGraph {
    let ast = parse_sources(sources).expect("sources parse");
    build_graph(&resolve_project(ast).expect("sources resolve"))
}

/// Graph of a single-file project.
pub fn graph_of(src: &str) -> ProgramGraph {
    graph_from_sources([("t.jsub", src)])
}
