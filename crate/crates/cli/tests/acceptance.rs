//! One line per acceptance criterion. Runs without the libtest harness so
//! the lines are always printed; exits nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::process::Command;
use std::sync::Arc;

use refd_core::engine::{
    analyze, analyze_with, build_combine_methods_into_class, build_move_method, build_pull_up_method, resolve_method,
    AnalyzeOptions, DangerReport, DefaultVerdict, Microstep, Refactoring, ReportDocument,
};
use refd_core::graph::lookup::{ancestors, methods_of};
use refd_core::graph::NodeTag;
use refd_core::risk::{MethodTarget, RiskLabel};
use refd_core::template::{ClassTemplate, MethodTemplate};
use refd_testkit::equivalence::{check_all, Outcome};
use refd_testkit::invariants;
use refd_testkit::random::{random_graph, MAX_CLASSES, MAX_DEPTH, MAX_METHODS};
use refd_testkit::Fixture;

type Verdict = Result<String, Vec<String>>;
type Criterion = (&'static str, fn() -> Verdict);

fn method(class: &str, name: &str, params: &[&str]) -> MethodTemplate {
    MethodTemplate::new(ClassTemplate::named(class), name, params.iter().copied())
}

fn found(report: &DangerReport) -> BTreeSet<(String, String)> {
    report
        .dangers
        .iter()
        .flat_map(|d| d.locations.iter().map(move |l| (d.label.code().to_owned(), l.element.clone())))
        .collect()
}

fn expect(fails: &mut Vec<String>, what: &str, report: &DangerReport, want: &[(&str, &str)]) {
    let want: BTreeSet<(String, String)> = want.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
    let got = found(report);
    if got != want {
        fails.push(format!("{what}: expected {want:?}, got {got:?}"));
    }
}

fn worked_examples() -> Verdict {
    let mut fails = Vec::new();
    let mut run = |what: &str, f: &mut dyn FnMut(&mut Vec<String>) -> refd_core::Result<()>| {
        if let Err(e) = f(&mut fails) {
            fails.push(format!("{what}: {e}"));
        }
    };

    run("FIX-A move", &mut |fails| {
        let g = Fixture::MoveMethod.graph();
        let r = build_move_method(&g, &method("Source", "method", &["Target"]), &ClassTemplate::named("Target"))?;
        expect(fails, "FIX-A move", &analyze(&r, &g), &[("MM-1", "Source.local"), ("AM-3", "Sub.method(Source)")]);
        Ok(())
    });

    run("FIX-B pull-up", &mut |fails| {
        let g = Fixture::PullUp.graph();
        let t = method("Employee", "salaryBonus", &["int"]);
        let r = build_pull_up_method(&g, &t, &ClassTemplate::named("LegacyEmployee"), false)?;
        let report = analyze(&r, &g);
        expect(fails, "FIX-B pull-up", &report, &[("AM-1", "LegacyEmployee.salaryBonus(int)")]);
        let plain = analyze(&r.with_verdict(Arc::new(DefaultVerdict)), &g);
        let rm2: Vec<_> = plain.with_label(RiskLabel::Rm2).flat_map(|d| &d.locations).map(|l| l.element.as_str()).collect();
        if rm2 != ["LegacyEmployee.salaryBonus(int)"] {
            fails.push(format!("FIX-B default verdict: expected RM-2 at LegacyEmployee.salaryBonus(int), got {rm2:?}"));
        }
        Ok(())
    });

    run("FIX-E combine", &mut |fails| {
        let g = Fixture::Combine.graph();
        let methods = [method("Invoice", "toString", &[]), method("Receipt", "toString", &[])];
        let r = build_combine_methods_into_class(&g, &methods, &ClassTemplate::named("K"))?;
        let report = analyze(&r, &g);
        expect(fails, "FIX-E combine", &report, &[("AM-1", "K.toString()")]);
        if report.dangers.first().map(|d| d.microstep.to_string()).as_deref() != Some("3.1") {
            fails.push("FIX-E combine: AM-1 should come from the second relocation".into());
        }
        let blind = analyze_with(&r, &g, AnalyzeOptions { augment: false });
        expect(fails, "FIX-E without augmentation", &blind, &[]);
        Ok(())
    });

    run("FIX-C remove", &mut |fails| {
        let g = Fixture::Override.graph();
        let t = method("C", "m", &[]);
        let id = resolve_method(&g, &t)?.expect("C.m exists");
        let r = Refactoring::custom(vec![Microstep::remove_method(MethodTarget::pinned(t, id))], Arc::new(DefaultVerdict));
        let report = analyze(&r, &g);
        let rm2: Vec<_> = report.with_label(RiskLabel::Rm2).flat_map(|d| &d.locations).map(|l| l.element.as_str()).collect();
        if rm2 != ["Super.m()"] {
            fails.push(format!("FIX-C: expected RM-2 = {{Super.m()}}, got {rm2:?}"));
        }
        Ok(())
    });

    run("FIX-D move", &mut |fails| {
        let g = Fixture::DoubleDefinition.graph();
        let r = build_move_method(&g, &method("D", "m", &[]), &ClassTemplate::named("C"))?;
        let am1: Vec<_> = analyze(&r, &g)
            .with_label(RiskLabel::Am1)
            .flat_map(|d| &d.locations)
            .map(|l| l.element.clone())
            .collect();
        if am1 != ["C.m()"] {
            fails.push(format!("FIX-D: expected AM-1 = {{C.m()}}, got {am1:?}"));
        }
        Ok(())
    });

    if fails.is_empty() {
        Ok("FIX-A, FIX-B (both verdicts), FIX-E (with and without augmentation), FIX-C, FIX-D".into())
    } else {
        Err(fails)
    }
}

fn oracle_equivalence() -> Verdict {
    let mut fails = Vec::new();
    let mut total = Outcome::default();
    for f in Fixture::ALL {
        total.merge(check_all(&f.graph()));
    }
    for seed in 0..200 {
        let g = random_graph(seed);
        let classes: Vec<_> = g.nodes_tagged(NodeTag::Class).map(|n| n.id).collect();
        let within = classes.len() <= MAX_CLASSES
            && classes.iter().all(|c| methods_of(&g, *c).count() <= MAX_METHODS && ancestors(&g, *c).len() <= MAX_DEPTH);
        if !within {
            fails.push(format!("seed {seed}: random project exceeds its bounds"));
        }
        total.merge(check_all(&g));
    }
    fails.extend(total.mismatches.iter().take(10).cloned());
    let silent: Vec<_> = RiskLabel::ALL
        .iter()
        .map(|l| l.code())
        .filter(|l| total.nonempty.get(*l).copied().unwrap_or(0) == 0)
        .collect();
    if !silent.is_empty() {
        fails.push(format!("detectors never exercised with a nonempty answer: {silent:?}"));
    }
    if fails.is_empty() {
        Ok(format!("{} checks over 6 fixtures and 200 random projects, 0 mismatches", total.checks))
    } else {
        Err(fails)
    }
}

fn invariant_suite() -> Verdict {
    match invariants::sweep(0..200, 3) {
        Ok(t) => Ok(format!(
            "filter-only, default identity, add/remove inversion, kind purity, baseline immutability, byte-stable JSON over {} graphs and {} refactorings",
            t.graphs, t.refactorings
        )),
        Err(e) => Err(vec![e]),
    }
}

fn cli_contract() -> Verdict {
    let mut fails = Vec::new();
    let empty = tempfile::tempdir().expect("temp dir");
    let pull_up = Fixture::PullUp.path();
    let combine = Fixture::Combine.path();
    let scenarios: [(&str, Vec<String>, i32); 3] = [
        (
            "clean combine",
            vec![combine.display().to_string(), "combine-methods-into-class".into(), "Receipt.toString()".into(), "K".into()],
            0,
        ),
        (
            "empty project",
            vec![empty.path().display().to_string(), "move-method".into(), "A.m()".into(), "B".into()],
            1,
        ),
        (
            "FIX-B pull-up",
            vec![pull_up.display().to_string(), "pull-up-method".into(), "Employee.salaryBonus(int)".into(), "LegacyEmployee".into()],
            2,
        ),
    ];
    let mut outputs = Vec::new();
    for (what, args, code) in &scenarios {
        let out = Command::new(env!("CARGO_BIN_EXE_refd"))
            .args(["analyze", "--project", &args[0], "--refactoring", &args[1], "--method", &args[2], "--destination", &args[3]])
            .output()
            .expect("refd runs");
        if out.status.code() != Some(*code) {
            fails.push(format!("{what}: exit {:?}, expected {code}", out.status.code()));
        }
        outputs.push(String::from_utf8_lossy(&out.stdout).into_owned());
    }
    for (i, text) in outputs.iter().enumerate() {
        if scenarios[i].2 == 1 {
            continue;
        }
        match serde_json::from_str::<ReportDocument>(text) {
            Ok(doc) => {
                let again: ReportDocument = serde_json::from_str(&doc.to_json()).expect("reparse");
                if again != doc || format!("{}\n", doc.to_json()) != *text {
                    fails.push(format!("{}: JSON does not round-trip", scenarios[i].0));
                }
            }
            Err(e) => fails.push(format!("{}: stdout is not a report: {e}", scenarios[i].0)),
        }
    }
    if fails.is_empty() {
        Ok("exit 0 clean, 1 error, 2 dangers; reports round-trip through JSON".into())
    } else {
        Err(fails)
    }
}

fn main() {
    let criteria: [Criterion; 4] = [
        ("worked examples", worked_examples),
        ("oracle equivalence", oracle_equivalence),
        ("invariant suite", invariant_suite),
        ("CLI contract", cli_contract),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(reasons) => {
                failed += 1;
                println!("FAIL {name}: {}", reasons.join("; "));
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
