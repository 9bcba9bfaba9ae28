//! Refactoring trees, their analysis, and verdicts.
//!
//! Analysis runs on a snapshot of the baseline graph. Each leaf microstep
//! first runs its detectors against the working graph and then applies its
//! own effect, so a detector sees every earlier edit of the refactoring but
//! not its own. A composite runs its own detectors before its children.

mod analyze;
mod microstep;
mod refactoring;
mod report;
mod resolve;
pub mod verdict;

pub use analyze::{analyze, analyze_with, detect_all, AnalyzeOptions, Finding};
pub use microstep::{apply_effect, Microstep, MicrostepId, MicrostepKind};
pub use refactoring::{
    build_combine_methods_into_class, build_move_method, build_pull_up_method, Refactoring, RefactoringKind,
    RefactoringParams,
};
pub use report::{Danger, DangerLocation, DangerReport, DocDanger, DocLocation, ReportDocument, Summary};
pub use resolve::{class_template_of, method_template_of, resolve_class, resolve_method, resolve_template, TemplateRef};
pub use verdict::{DefaultVerdict, PullUpVerdict, VerdictFunction};
