//! Typed queries over the program graph.
//!
//! Generators produce a seed [`LocationSet`]; subdetectors map one set to
//! another. Each set carries a [`SetKind`] and every subdetector declares the
//! kind it consumes and the kind it yields, so an ill-typed chain (say,
//! asking superclasses for their return type) is rejected before it runs.
//! [`Stream`] offers the same library with the kinds checked at compile time.

mod generator;
mod set;
mod stream;
pub mod subdetectors;

pub use generator::{gen_all_methods, gen_call_sites, gen_instance_methods, gen_program_classes, Generator};
pub use set::{LocationSet, SetKind};
pub use stream::{AnyKind, CallSites, Classes, Fields, Kind, Methods, Stream};
pub use subdetectors::{chain, Subdetector};
