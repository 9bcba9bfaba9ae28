//! Command line and HTTP front end for refd.
//!
//! Both entry points accept the same [`request::AnalysisRequest`] and answer
//! with a [`refd_core::engine::ReportDocument`].

pub mod cli;
pub mod project;
pub mod request;
pub mod selector;
pub mod service;

pub use project::Project;
pub use request::{AnalysisRequest, Methods, RequestError};
pub use selector::Selector;
