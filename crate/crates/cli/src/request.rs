//! Analysis requests shared by the command line and the HTTP service.

use serde::{Deserialize, Serialize};

use refd_core::engine::{
    analyze, build_combine_methods_into_class, build_move_method, build_pull_up_method, ReportDocument,
    RefactoringKind,
};
use refd_core::graph::ProgramGraph;
use refd_core::template::ClassTemplate;

use crate::selector::{Selector, SelectorError};

/// One selector, or several for refactorings that take a list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Methods {
    One(String),
    Many(Vec<String>),
}

impl Methods {
    pub fn as_slice(&self) -> &[String] {
        match self {
            Methods::One(s) => std::slice::from_ref(s),
            Methods::Many(v) => v,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisRequest {
    pub refactoring: String,
    pub method: Methods,
    #[serde(default)]
    pub destination: Option<String>,
    /// Ignored by the service, which always analyses its loaded project.
    #[serde(default)]
    pub project: Option<String>,
    #[serde(default)]
    pub strict_paper_verdict: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RequestError {
    #[error("unknown refactoring `{0}` (expected one of pull-up-method, move-method, combine-methods-into-class)")]
    UnknownRefactoring(String),
    #[error(transparent)]
    Selector(#[from] SelectorError),
    #[error("{refactoring} requires {what}")]
    Missing { refactoring: &'static str, what: &'static str },
    #[error(transparent)]
    Engine(#[from] refd_core::Error),
}

impl RequestError {
    pub fn name(&self) -> &'static str {
        match self {
            RequestError::UnknownRefactoring(_) => "UnknownRefactoring",
            RequestError::Selector(_) => "InvalidSelector",
            RequestError::Missing { .. } => "MissingParameter",
            RequestError::Engine(e) => e.name(),
        }
    }
}

impl AnalysisRequest {
    pub fn run(&self, g: &ProgramGraph) -> Result<ReportDocument, RequestError> {
        let kind =
            RefactoringKind::parse(&self.refactoring).ok_or_else(|| RequestError::UnknownRefactoring(self.refactoring.clone()))?;
        let selectors = self
            .method
            .as_slice()
            .iter()
            .map(|s| s.parse::<Selector>())
            .collect::<Result<Vec<_>, _>>()?;
        let missing = |what| RequestError::Missing {
            refactoring: kind.as_str(),
            what,
        };
        let destination = ClassTemplate::named(self.destination.as_deref().ok_or_else(|| missing("a destination"))?);
        let single = || match &selectors[..] {
            [one] => Ok(one.template()),
            _ => Err(missing("exactly one method")),
        };
        let r = match kind {
            RefactoringKind::PullUpMethod => build_pull_up_method(g, &single()?, &destination, self.strict_paper_verdict)?,
            RefactoringKind::MoveMethod => build_move_method(g, &single()?, &destination)?,
            RefactoringKind::CombineMethodsIntoClass => {
                if selectors.is_empty() {
                    return Err(missing("at least one method"));
                }
                let templates: Vec<_> = selectors.iter().map(Selector::template).collect();
                build_combine_methods_into_class(g, &templates, &destination)?
            }
            RefactoringKind::Custom => unreachable!("not parseable"),
        };
        Ok(analyze(&r, g).to_document())
    }
}

/// A parameter a refactoring accepts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamInfo {
    pub name: String,
    #[serde(rename = "type")]
    pub type_name: String,
    pub required: bool,
    pub repeated: bool,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefactoringInfo {
    pub name: String,
    pub description: String,
    pub params: Vec<ParamInfo>,
}

fn param(name: &str, type_name: &str, required: bool, repeated: bool, description: &str) -> ParamInfo {
    ParamInfo {
        name: name.into(),
        type_name: type_name.into(),
        required,
        repeated,
        description: description.into(),
    }
}

/// The built-in refactorings, in a fixed order.
pub fn catalogue() -> Vec<RefactoringInfo> {
    RefactoringKind::BUILT_IN
        .into_iter()
        .map(|kind| {
            let (description, params) = match kind {
                RefactoringKind::PullUpMethod => (
                    "Move a method into a superclass of its class",
                    vec![
                        param("method", "selector", true, false, "method to pull up"),
                        param("destination", "class", true, false, "superclass that receives the method"),
                        param("strict_paper_verdict", "boolean", false, false, "keep the subclass-specification danger on the pulled method itself"),
                    ],
                ),
                RefactoringKind::MoveMethod => (
                    "Move a method to another class",
                    vec![
                        param("method", "selector", true, false, "method to move"),
                        param("destination", "class", true, false, "class that receives the method"),
                    ],
                ),
                RefactoringKind::CombineMethodsIntoClass => (
                    "Create a class and move the given methods into it",
                    vec![
                        param("method", "selector", true, true, "methods to move, in order"),
                        param("destination", "class", true, false, "name of the class to create"),
                    ],
                ),
                RefactoringKind::Custom => unreachable!("not built in"),
            };
            RefactoringInfo {
                name: kind.as_str().into(),
                description: description.into(),
                params,
            }
        })
        .collect()
}
