use std::collections::BTreeMap;
use std::path::Path;

use refd_core::frontend::{parse_project, parse_sources, resolve_project, ProjectAst};
use refd_core::graph::{build_graph, ProgramGraph};

/// A parsed project: the baseline graph plus the raw sources it came from.
#[derive(Debug, Clone)]
pub struct Project {
    pub graph: ProgramGraph,
    /// Relative path to text.
    pub sources: BTreeMap<String, String>,
    pub diagnostics: Vec<String>,
}

impl Project {
    pub fn load(root: &Path) -> refd_core::Result<Project> {
        Self::from_ast(parse_project(root)?)
    }

    pub fn from_sources<P: Into<String>, T: Into<String>>(
        sources: impl IntoIterator<Item = (P, T)>,
    ) -> refd_core::Result<Project> {
        Self::from_ast(parse_sources(sources)?)
    }

    fn from_ast(ast: ProjectAst) -> refd_core::Result<Project> {
        let resolved = resolve_project(ast)?;
        let diagnostics = resolved
            .diagnostics
            .iter()
            .map(|d| match &d.span {
                Some(s) => format!("{}:{}:{}: {}", s.file, s.start_line, s.start_col, d.message),
                None => d.message.clone(),
            })
            .collect();
        Ok(Project {
            graph: build_graph(&resolved),
            sources: resolved.sources.clone(),
            diagnostics,
        })
    }
}
