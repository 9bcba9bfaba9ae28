//! Refactoring danger diagnosis.
//!
//! A requested refactoring is decomposed into microsteps (add/remove a method,
//! add a class, relocate a method). Every microstep carries potential risks;
//! each risk has a detector that queries a tagged program graph and answers
//! with the set of program locations where the risk is actually present.
//! A refactoring-specific verdict then drops the actual risks that later
//! microsteps neutralise, and whatever survives is reported as a danger.
//!
//! The pipeline, bottom-up:
//!
//! - [`frontend`] parses Jsub (a small Java subset) into a resolved AST.
//! - [`graph`] turns that AST into a [`graph::ProgramGraph`] and provides the
//!   augmentation operations microsteps use to model pending edits.
//! - [`query`] offers typed location sets, generators, subdetectors and
//!   streams over the graph.
//! - [`risk`] is the catalog of potential risks and their detectors.
//! - [`engine`] builds refactoring trees, walks them, and applies verdicts.

pub mod engine;
pub mod error;
pub mod frontend;
pub mod graph;
pub mod query;
pub mod risk;
pub mod template;

pub use error::{Error, Result};
