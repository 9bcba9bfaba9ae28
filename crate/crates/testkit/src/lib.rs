//! Shared test support for refd: the worked-example fixtures, a seeded
//! random project generator, and brute-force oracles that recompute every
//! query and detector from raw nodes and edges.

pub mod equivalence;
pub mod fixtures;
pub mod invariants;
pub mod oracle;
pub mod random;

pub use fixtures::{graph_from_sources, graph_of, Fixture};
