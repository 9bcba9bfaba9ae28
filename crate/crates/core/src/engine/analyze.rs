use std::collections::BTreeMap;

use super::microstep::{apply_effect, Microstep};
use super::report::{Danger, DangerLocation, DangerReport};
use super::verdict::judge;
use super::Refactoring;
use crate::graph::{LocationId, ProgramGraph};
use crate::risk::{ActualRisk, RiskLabel};

#[derive(Debug, Clone, Copy)]
pub struct AnalyzeOptions {
    /// Apply each microstep's effect to the working graph after detection.
    /// Turning this off shows what a tool without graph augmentation misses.
    pub augment: bool,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions { augment: true }
    }
}

/// An actual risk with its locations described as they were when found.
/// Synthetic locations can disappear from the working graph later on.
#[derive(Debug, Clone)]
pub struct Finding {
    pub actual: ActualRisk,
    pub described: BTreeMap<LocationId, DangerLocation>,
}

/// Every actual risk of `r`, in traversal order, plus diagnostics for
/// detectors or effects that failed.
pub fn detect_all(r: &Refactoring, baseline: &ProgramGraph, opts: AnalyzeOptions) -> (Vec<Finding>, Vec<String>) {
    let mut working = baseline.snapshot();
    let mut findings = Vec::new();
    let mut diagnostics = Vec::new();
    for m in &r.microsteps {
        visit(m, &mut working, opts, &mut findings, &mut diagnostics);
    }
    (findings, diagnostics)
}

fn visit(
    m: &Microstep,
    working: &mut ProgramGraph,
    opts: AnalyzeOptions,
    findings: &mut Vec<Finding>,
    diagnostics: &mut Vec<String>,
) {
    for risk in &m.risks {
        match risk.detect(working) {
            Ok(locations) => {
                let described = locations.iter().map(|id| (id, DangerLocation::of(working, id))).collect();
                findings.push(Finding {
                    actual: ActualRisk {
                        risk: risk.clone(),
                        locations,
                        microstep: m.id.clone(),
                    },
                    described,
                });
            }
            Err(e) => diagnostics.push(format!("{} in step {}: {e}", risk.label, m.id)),
        }
    }
    if m.is_composite() {
        for c in &m.children {
            visit(c, working, opts, findings, diagnostics);
        }
    } else if opts.augment {
        if let Err(e) = apply_effect(m, working) {
            diagnostics.push(format!("step {} ({}): {e}", m.id, m.subject.describe()));
        }
    }
}

pub fn analyze(r: &Refactoring, baseline: &ProgramGraph) -> DangerReport {
    analyze_with(r, baseline, AnalyzeOptions::default())
}

/// Walks the refactoring depth first, detecting each microstep's risks
/// before applying its effect, then lets the verdict filter the results.
pub fn analyze_with(r: &Refactoring, baseline: &ProgramGraph, opts: AnalyzeOptions) -> DangerReport {
    let (findings, diagnostics) = detect_all(r, baseline, opts);
    let mut dangers = Vec::new();
    for f in &findings {
        let kept = judge(r.verdict.as_ref(), &f.actual, r);
        if kept.is_empty() {
            continue;
        }
        let label = f.actual.risk.label;
        let mut locations: Vec<DangerLocation> = kept.iter().map(|id| f.described[&id].clone()).collect();
        locations.sort_by_key(|a| a.sort_key());
        dangers.push(Danger {
            label,
            detector: label.detector().to_owned(),
            message: format!("{}: {}", f.actual.risk.subject.describe(), label.description()),
            locations,
            microstep: f.actual.microstep.clone(),
        });
    }
    dangers.sort_by(|a, b| {
        a.sort_key()
            .cmp(&b.sort_key())
            .then_with(|| a.microstep.cmp(&b.microstep))
            .then_with(|| a.detector.cmp(&b.detector))
    });
    let mut counts: BTreeMap<RiskLabel, usize> = RiskLabel::ALL.iter().map(|l| (*l, 0)).collect();
    for d in &dangers {
        *counts.entry(d.label).or_default() += 1;
    }
    DangerReport {
        refactoring: r.kind,
        params: r.params.clone(),
        dangers,
        counts,
        baseline_generation: baseline.generation(),
        diagnostics,
    }
}
