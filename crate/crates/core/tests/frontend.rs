use std::fs;

use refd_core::frontend::{parse_file, parse_project, parse_sources, resolve_project, Receiver, RefKind, ReceiverType};
use refd_core::Error;
use refd_testkit::random::random_project;
use refd_testkit::Fixture;

#[test]
fn move_fixture_parses_into_three_classes() {
    let ast = parse_project(&Fixture::MoveMethod.path()).unwrap();
    let names: Vec<_> = ast.classes().map(|c| c.name.as_str()).collect();
    assert_eq!(names, ["Source", "Sub", "Target"]);
    let source = ast.classes().find(|c| c.name == "Source").unwrap();
    assert_eq!(source.fields[0].name, "local");
    assert_eq!(source.methods[0].signature().to_string(), "method(Target)");
    assert!(ast.diagnostics.is_empty());
}

#[test]
fn move_fixture_resolves_receivers_and_superclass() {
    let project = resolve_project(parse_project(&Fixture::MoveMethod.path()).unwrap()).unwrap();
    let sub = project.class_index("Sub").unwrap();
    assert_eq!(project.classes[sub].superclass, project.class_index("Target"));
    let source = &project.classes[project.class_index("Source").unwrap()];
    let first = &source.ast.methods[0].body_refs[0];
    assert_eq!(first.member_name, "doSomething");
    assert_eq!(source.receiver_types[0][0], ReceiverType::Project("Target".into()));
    let root = project.class_index("Target").unwrap();
    assert!(project.ancestors(root).is_empty());
}

#[test]
fn every_textual_reference_appears_once() {
    // Hand count per fixture: calls and field accesses written in method
    // bodies, `System.out` counting as a field read.
    let expected = [
        (Fixture::MoveMethod, 8),
        (Fixture::PullUp, 3),
        (Fixture::Override, 6),
        (Fixture::DoubleDefinition, 4),
        (Fixture::Combine, 0),
        (Fixture::Widening, 2),
    ];
    for (fixture, count) in expected {
        let ast = parse_project(&fixture.path()).unwrap();
        let refs: usize = ast.classes().flat_map(|c| &c.methods).map(|m| m.body_refs.len()).sum();
        assert_eq!(refs, count, "{}", fixture.code());
    }
}

#[test]
fn syntax_errors_carry_positions() {
    assert!(parse_file("", "e.jsub").unwrap().is_empty());
    match parse_file("class A { void m( }", "a.jsub") {
        Err(Error::Syntax { file, line, col, .. }) => {
            assert_eq!(file, "a.jsub");
            assert_eq!((line, col), (1, 17));
        }
        other => panic!("expected syntax error, got {other:?}"),
    }
}

#[test]
fn comments_and_strings_are_skipped() {
    let classes = parse_file(
        "// class Fake {}\nclass A { /* void x() {} */ void m() { String s = \"f(); g.h\"; } }",
        "c.jsub",
    )
    .unwrap();
    assert_eq!(classes.len(), 1);
    assert_eq!(classes[0].methods.len(), 1);
    assert!(classes[0].methods[0].body_refs.is_empty());
}

#[test]
fn duplicate_classes_are_rejected() {
    let err = parse_sources([("a.jsub", "class Target {}"), ("b.jsub", "class Target {}")]).unwrap_err();
    assert_eq!(
        err,
        Error::DuplicateClass {
            name: "Target".into(),
            first: "a.jsub".into(),
            second: "b.jsub".into()
        }
    );
}

#[test]
fn duplicate_members_are_diagnostics_not_errors() {
    let ast = parse_sources([("a.jsub", "class A { void m() {} int m() { return 1; } }")]).unwrap();
    assert_eq!(ast.diagnostics.len(), 1);
    assert_eq!(ast.classes().next().unwrap().methods.len(), 2);
}

#[test]
fn empty_and_missing_directories() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("notes.txt"), "class NotSource {}").unwrap();
    assert_eq!(parse_project(dir.path()).unwrap().classes().count(), 0);
    assert!(matches!(parse_project(&dir.path().join("absent")), Err(Error::Io { .. })));
}

#[test]
fn nested_directories_are_walked_in_path_order() {
    let dir = tempfile::tempdir().unwrap();
    fs::create_dir(dir.path().join("z")).unwrap();
    fs::write(dir.path().join("z/A.java"), "class A {}").unwrap();
    fs::write(dir.path().join("B.jsub"), "class B extends A {}").unwrap();
    let ast = parse_project(dir.path()).unwrap();
    let paths: Vec<_> = ast.files.iter().map(|f| f.path.as_str()).collect();
    assert_eq!(paths, ["B.jsub", "z/A.java"]);
}

#[test]
fn cycles_are_rejected() {
    let ast = parse_sources([("a.jsub", "class A extends B {} class B extends A {}")]).unwrap();
    assert!(matches!(resolve_project(ast), Err(Error::CyclicInheritance { .. })));
}

#[test]
fn unresolved_superclass_is_a_diagnostic() {
    let project = resolve_project(parse_sources([("a.jsub", "class A extends Missing {}")]).unwrap()).unwrap();
    assert_eq!(project.classes[0].superclass, None);
    assert_eq!(project.diagnostics.len(), 1);
}

#[test]
fn receivers_cover_every_form() {
    let src = "class A { B b; static void s() {} void m(B p) { B v = p; v.run(); p.run(); this.x(); x(); super.toString(); A.s(); b.c.run(); new B().run(); b = p; } void x() {} } class B { B c; void run() {} }";
    let class = &parse_file(src, "r.jsub").unwrap()[0];
    let kinds: Vec<_> = class.methods[1]
        .body_refs
        .iter()
        .map(|r| match &r.receiver {
            Receiver::ImplicitThis => "this",
            Receiver::Super => "super",
            Receiver::Variable { .. } => "var",
            Receiver::Class(_) => "class",
            Receiver::Expr(_) => "expr",
        })
        .collect();
    for k in ["this", "super", "var", "class", "expr"] {
        assert!(kinds.contains(&k), "missing {k} in {kinds:?}");
    }
    assert!(class.methods[1].body_refs.iter().any(|r| r.kind == RefKind::FieldWrite));
}

#[test]
fn spans_nest_and_parsing_is_deterministic() {
    let mut corpora: Vec<Vec<(String, String)>> = (0..50).map(random_project).collect();
    for f in Fixture::ALL {
        let dir = f.path();
        let mut files = Vec::new();
        for e in fs::read_dir(&dir).unwrap() {
            let p = e.unwrap().path();
            files.push((p.file_name().unwrap().to_string_lossy().into_owned(), fs::read_to_string(&p).unwrap()));
        }
        corpora.push(files);
    }
    for sources in corpora {
        let ast = parse_sources(sources.clone()).unwrap();
        assert_eq!(ast, parse_sources(sources.clone()).unwrap());
        for file in &ast.files {
            let lines = file.text.lines().count() as u32;
            for c in &file.classes {
                assert!(c.span.start() <= c.span.end() && c.span.end_line <= lines);
                for m in &c.methods {
                    assert!(c.span.encloses(&m.span), "{} !⊇ {}", c.name, m.name);
                    for p in &m.params {
                        assert!(m.span.encloses(&p.span));
                    }
                    for r in &m.body_refs {
                        assert!(m.span.encloses(&r.span));
                    }
                }
                for f in &c.fields {
                    assert!(c.span.encloses(&f.span));
                }
            }
        }
    }
}
