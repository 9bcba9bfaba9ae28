use std::path::PathBuf;

use crate::query::SetKind;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("{file}:{line}:{col}: syntax error: {message}")]
    Syntax {
        file: String,
        line: u32,
        col: u32,
        message: String,
    },
    #[error("class `{name}` is declared in both {first} and {second}")]
    DuplicateClass {
        name: String,
        first: String,
        second: String,
    },
    #[error("cyclic inheritance through {}", .cycle.join(" -> "))]
    CyclicInheritance { cycle: Vec<String> },
    #[error("cannot read {path}: {message}")]
    Io { path: PathBuf, message: String },

    #[error("enclosing class `{0}` does not exist in the graph")]
    MissingEnclosingClass(String),
    #[error("unknown program location {0}")]
    UnknownLocation(u32),

    #[error("subdetector `{consumer}` expects {expected} but `{producer}` yields {found}")]
    KindMismatch {
        producer: String,
        consumer: String,
        expected: SetKind,
        found: SetKind,
    },

    #[error("`{0}` does not resolve to an existing program location")]
    UnresolvableTemplate(String),
    #[error("`{0}` matches more than one program location")]
    AmbiguousTemplate(String),
    #[error("`{destination}` is not a superclass of `{class}`")]
    NotAnAncestor { class: String, destination: String },
    #[error("`{0}` already encloses the method")]
    SameClass(String),
}

impl Error {
    /// Stable engine error name, as surfaced to API clients.
    pub fn name(&self) -> &'static str {
        match self {
            Error::Syntax { .. } => "SyntaxError",
            Error::DuplicateClass { .. } => "DuplicateClass",
            Error::CyclicInheritance { .. } => "CyclicInheritance",
            Error::Io { .. } => "IoError",
            Error::MissingEnclosingClass(_) => "MissingEnclosingClass",
            Error::UnknownLocation(_) => "UnknownLocation",
            Error::KindMismatch { .. } => "KindMismatch",
            Error::UnresolvableTemplate(_) => "UnresolvableTemplate",
            Error::AmbiguousTemplate(_) => "AmbiguousTemplate",
            Error::NotAnAncestor { .. } => "NotAnAncestor",
            Error::SameClass(_) => "SameClass",
        }
    }
}
