use std::collections::BTreeSet;
use std::sync::Arc;

use refd_core::engine::{
    analyze, analyze_with, build_combine_methods_into_class, build_move_method, build_pull_up_method, resolve_method,
    AnalyzeOptions, DangerReport, DefaultVerdict, Microstep, Refactoring, VerdictFunction,
};
use refd_core::graph::ProgramGraph;
use refd_core::query::LocationSet;
use refd_core::risk::{ActualRisk, MethodTarget, RiskLabel};
use refd_core::template::{ClassTemplate, MethodTemplate};
use refd_core::Error;
use refd_testkit::{graph_of, Fixture};

fn method(class: &str, name: &str, params: &[&str]) -> MethodTemplate {
    MethodTemplate::new(ClassTemplate::named(class), name, params.iter().copied())
}

/// Every danger as (label, element) pairs.
fn summary(report: &DangerReport) -> BTreeSet<(String, String)> {
    report
        .dangers
        .iter()
        .flat_map(|d| d.locations.iter().map(move |l| (d.label.code().to_owned(), l.element.clone())))
        .collect()
}

fn pairs(items: &[(&str, &str)]) -> BTreeSet<(String, String)> {
    items.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
}

fn remove_only(g: &ProgramGraph, t: MethodTemplate) -> Refactoring {
    let id = resolve_method(g, &t).unwrap().unwrap();
    Refactoring::custom(vec![Microstep::remove_method(MethodTarget::pinned(t, id))], Arc::new(DefaultVerdict))
}

#[test]
fn move_method_reports_local_field_and_subclass_method() {
    let g = Fixture::MoveMethod.graph();
    let r = build_move_method(&g, &method("Source", "method", &["Target"]), &ClassTemplate::named("Target")).unwrap();
    let report = analyze(&r, &g);
    assert_eq!(summary(&report), pairs(&[("MM-1", "Source.local"), ("AM-3", "Sub.method(Source)")]));
    assert!(report.diagnostics.is_empty(), "{:?}", report.diagnostics);
    let mm1 = report.with_label(RiskLabel::Mm1).next().unwrap();
    let span = mm1.locations[0].span.as_ref().unwrap();
    assert_eq!((span.file.as_str(), span.start_line), ("Source.jsub", 3));
}

#[test]
fn pull_up_to_direct_superclass_drops_removed_override() {
    let g = Fixture::PullUp.graph();
    let t = method("Employee", "salaryBonus", &["int"]);
    let r = build_pull_up_method(&g, &t, &ClassTemplate::named("LegacyEmployee"), false).unwrap();
    assert_eq!(r.params.to_direct_superclass, Some(true));
    let report = analyze(&r, &g);
    assert_eq!(summary(&report), pairs(&[("AM-1", "LegacyEmployee.salaryBonus(int)")]));
    assert_eq!(report.counts[&RiskLabel::Rm2], 0);

    let plain = analyze(&r.clone().with_verdict(Arc::new(DefaultVerdict)), &g);
    assert_eq!(plain.counts[&RiskLabel::Rm2], 1);
    assert_eq!(plain.counts[&RiskLabel::Am3], 1);
    assert_eq!(plain.counts[&RiskLabel::Am1], 1);
}

#[test]
fn strict_verdict_keeps_source_in_subclass_specification() {
    let g = Fixture::PullUp.graph();
    let t = method("Employee", "salaryBonus", &["int"]);
    let r = build_pull_up_method(&g, &t, &ClassTemplate::named("LegacyEmployee"), true).unwrap();
    let report = analyze(&r, &g);
    assert_eq!(
        summary(&report),
        pairs(&[("AM-1", "LegacyEmployee.salaryBonus(int)"), ("AM-3", "Employee.salaryBonus(int)")])
    );
}

#[test]
fn pull_up_two_levels_keeps_removed_override() {
    let g = graph_of(
        "class A { void m() {} } class B extends A { } class C extends B { void m() {} }",
    );
    let r = build_pull_up_method(&g, &method("C", "m", &[]), &ClassTemplate::named("A"), false).unwrap();
    assert_eq!(r.params.to_direct_superclass, Some(false));
    let report = analyze(&r, &g);
    assert_eq!(report.counts[&RiskLabel::Rm2], 1);
}

#[test]
fn pull_up_preconditions() {
    let g = Fixture::PullUp.graph();
    let t = method("Employee", "salaryBonus", &["int"]);
    assert!(matches!(
        build_pull_up_method(&g, &t, &ClassTemplate::named("Employee"), false),
        Err(Error::NotAnAncestor { .. })
    ));
    assert!(matches!(
        build_pull_up_method(&g, &method("Employee", "nope", &[]), &ClassTemplate::named("LegacyEmployee"), false),
        Err(Error::UnresolvableTemplate(_))
    ));
}

#[test]
fn combine_detects_second_definition_only_with_augmentation() {
    let g = Fixture::Combine.graph();
    let methods = [method("Invoice", "toString", &[]), method("Receipt", "toString", &[])];
    let r = build_combine_methods_into_class(&g, &methods, &ClassTemplate::named("K")).unwrap();
    let report = analyze(&r, &g);
    assert_eq!(summary(&report), pairs(&[("AM-1", "K.toString()")]));
    let danger = &report.dangers[0];
    assert_eq!(danger.microstep.to_string(), "3.1");
    assert!(danger.locations[0].span.is_none());
    assert!(danger.locations[0].synthetic_desc.as_deref().unwrap().contains("K.toString()"));

    let blind = analyze_with(&r, &g, AnalyzeOptions { augment: false });
    assert!(blind.is_clean(), "{:?}", blind.dangers);
}

#[test]
fn combine_into_existing_class_flags_it() {
    let g = Fixture::Combine.graph();
    let r = build_combine_methods_into_class(&g, &[method("Invoice", "toString", &[])], &ClassTemplate::named("Receipt"))
        .unwrap();
    let report = analyze(&r, &g);
    assert!(summary(&report).contains(&("AC-1".to_owned(), "Receipt".to_owned())));
}

#[test]
fn single_method_into_fresh_class_is_clean() {
    let g = Fixture::Combine.graph();
    let r = build_combine_methods_into_class(&g, &[method("Receipt", "toString", &[])], &ClassTemplate::named("K"))
        .unwrap();
    assert!(analyze(&r, &g).is_clean());
}

#[test]
fn removing_an_override_falls_back_to_super() {
    let g = Fixture::Override.graph();
    let report = analyze(&remove_only(&g, method("C", "m", &[])), &g);
    let rm2: Vec<_> = report.with_label(RiskLabel::Rm2).flat_map(|d| &d.locations).map(|l| l.element.clone()).collect();
    assert_eq!(rm2, ["Super.m()"]);
    assert_eq!(report.counts[&RiskLabel::Rm1], 1);
}

#[test]
fn moving_into_class_with_same_method_is_a_double_definition() {
    let g = Fixture::DoubleDefinition.graph();
    let r = build_move_method(&g, &method("D", "m", &[]), &ClassTemplate::named("C")).unwrap();
    let report = analyze(&r, &g);
    assert_eq!(summary(&report), pairs(&[("AM-1", "C.m()")]));
}

#[test]
fn move_to_own_class_is_rejected() {
    let g = Fixture::DoubleDefinition.graph();
    let err = build_move_method(&g, &method("D", "m", &[]), &ClassTemplate::named("D")).unwrap_err();
    assert_eq!(err, Error::SameClass("D".into()));
}

#[test]
fn narrower_overload_captures_int_call_only() {
    let g = Fixture::Widening.graph();
    let add = Microstep::add_method(method("P", "m", &["int"]));
    let report = analyze(&Refactoring::custom(vec![add], Arc::new(DefaultVerdict)), &g);
    let am4: Vec<_> = report.with_label(RiskLabel::Am4).flat_map(|d| &d.locations).collect();
    assert_eq!(am4.len(), 1);
    assert_eq!(am4[0].span.as_ref().unwrap().start_line, 6);
}

/// Cancels a double definition against a removal of the same method later
/// in the refactoring.
struct CancelPairedRemoval;

impl VerdictFunction for CancelPairedRemoval {
    fn name(&self) -> &str {
        "cancel-paired-removal"
    }

    fn double_definition_method(&self, risk: &ActualRisk, r: &Refactoring) -> LocationSet {
        let removed = refd_core::engine::verdict::removed_methods(r);
        refd_core::engine::verdict::subset(risk, |id| !removed.contains(&id))
    }
}

#[test]
fn later_removal_mitigates_double_definition() {
    let g = graph_of("class C { void m() {} }");
    let t = method("C", "m", &[]);
    let id = resolve_method(&g, &t).unwrap().unwrap();
    let steps = || vec![Microstep::add_method(t.clone()), Microstep::remove_method(MethodTarget::pinned(t.clone(), id))];

    let raw = analyze(&Refactoring::custom(steps(), Arc::new(DefaultVerdict)), &g);
    assert_eq!(raw.counts[&RiskLabel::Am1], 1);
    let mitigated = analyze(&Refactoring::custom(steps(), Arc::new(CancelPairedRemoval)), &g);
    assert_eq!(mitigated.counts[&RiskLabel::Am1], 0);
}

#[test]
fn empty_refactoring_on_empty_graph() {
    let report = analyze(&Refactoring::custom(Vec::new(), Arc::new(DefaultVerdict)), &ProgramGraph::new());
    assert!(report.is_clean());
    assert_eq!(report.counts.len(), 11);
}
