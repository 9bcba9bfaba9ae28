use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::microstep::MicrostepId;
use super::refactoring::{RefactoringKind, RefactoringParams};
use crate::frontend::SourceSpan;
use crate::graph::{LocationId, ProgramGraph};
use crate::risk::RiskLabel;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DangerLocation {
    pub id: LocationId,
    /// `Class`, `Class.field` or `Class.method(types)`.
    pub element: String,
    pub span: Option<SourceSpan>,
    pub synthetic_desc: Option<String>,
}

impl DangerLocation {
    pub fn of(g: &ProgramGraph, id: LocationId) -> Self {
        let node = g.node(id).expect("detected location exists");
        DangerLocation {
            id,
            element: g.qualified_name(id),
            span: node.span.clone(),
            synthetic_desc: node.synthetic.then(|| format!("synthetic {}", g.qualified_name(id))),
        }
    }

    /// Synthetic locations sort first, as file "" at line 0.
    pub fn sort_key(&self) -> (String, u32, u32) {
        match &self.span {
            Some(s) => (s.file.clone(), s.start_line, s.start_col),
            None => (String::new(), 0, 0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Danger {
    pub label: RiskLabel,
    pub detector: String,
    pub message: String,
    /// Sorted, never empty.
    pub locations: Vec<DangerLocation>,
    pub microstep: MicrostepId,
}

impl Danger {
    pub fn sort_key(&self) -> (String, u32, RiskLabel) {
        let (file, line, _) = self.locations[0].sort_key();
        (file, line, self.label)
    }
}

/// Result of one analysis. An empty danger list means none were detected;
/// nothing has been changed in the code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DangerReport {
    pub refactoring: RefactoringKind,
    pub params: RefactoringParams,
    pub dangers: Vec<Danger>,
    pub counts: BTreeMap<RiskLabel, usize>,
    pub baseline_generation: u64,
    pub diagnostics: Vec<String>,
}

impl DangerReport {
    pub fn is_clean(&self) -> bool {
        self.dangers.is_empty()
    }

    pub fn with_label(&self, label: RiskLabel) -> impl Iterator<Item = &Danger> {
        self.dangers.iter().filter(move |d| d.label == label)
    }

    pub fn to_document(&self) -> ReportDocument {
        ReportDocument {
            refactoring: self.refactoring,
            params: self.params.clone(),
            dangers: self
                .dangers
                .iter()
                .map(|d| DocDanger {
                    label: d.label,
                    detector: d.detector.clone(),
                    message: d.message.clone(),
                    locations: d.locations.iter().map(DocLocation::from).collect(),
                    microstep: d.microstep.to_string(),
                })
                .collect(),
            summary: Summary {
                per_label_counts: self.counts.iter().map(|(l, n)| (l.code().to_owned(), *n)).collect(),
            },
            diagnostics: self.diagnostics.clone(),
        }
    }
}

/// Serialized form of a [`DangerReport`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub refactoring: RefactoringKind,
    pub params: RefactoringParams,
    pub dangers: Vec<DocDanger>,
    pub summary: Summary,
    #[serde(default)]
    pub diagnostics: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocDanger {
    pub label: RiskLabel,
    pub detector: String,
    pub message: String,
    pub locations: Vec<DocLocation>,
    pub microstep: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocLocation {
    pub element: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub line: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub col: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub end_line: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub end_col: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub synthetic_desc: Option<String>,
}

impl From<&DangerLocation> for DocLocation {
    fn from(l: &DangerLocation) -> Self {
        DocLocation {
            element: l.element.clone(),
            file: l.span.as_ref().map(|s| s.file.clone()),
            line: l.span.as_ref().map(|s| s.start_line),
            col: l.span.as_ref().map(|s| s.start_col),
            end_line: l.span.as_ref().map(|s| s.end_line),
            end_col: l.span.as_ref().map(|s| s.end_col),
            synthetic_desc: l.synthetic_desc.clone(),
        }
    }
}

impl DocLocation {
    /// `file:line:col`, or the synthetic description in angle brackets.
    pub fn short(&self) -> String {
        match (&self.file, self.line, self.col) {
            (Some(f), Some(l), Some(c)) => format!("{f}:{l}:{c}"),
            _ => format!("<{}>", self.synthetic_desc.as_deref().unwrap_or(&self.element)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub per_label_counts: BTreeMap<String, usize>,
}

impl ReportDocument {
    /// One line per danger: `LABEL locations message`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for d in &self.dangers {
            let locs: Vec<String> = d.locations.iter().map(DocLocation::short).collect();
            out.push_str(&format!("{} {} {}\n", d.label, locs.join(","), d.message));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
