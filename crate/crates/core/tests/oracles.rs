use refd_testkit::equivalence::{check_all, Outcome};
use refd_testkit::random::random_graph;
use refd_testkit::Fixture;

fn assert_clean(what: &str, out: &Outcome) {
    assert!(
        out.mismatches.is_empty(),
        "{what}: {} of {} checks disagree, first: {:#?}",
        out.mismatches.len(),
        out.checks,
        &out.mismatches[..out.mismatches.len().min(5)]
    );
}

#[test]
fn fixtures_agree_with_oracles() {
    for f in Fixture::ALL {
        let out = check_all(&f.graph());
        assert!(out.checks > 0);
        assert_clean(f.code(), &out);
    }
}

#[test]
fn random_projects_agree_with_oracles() {
    let mut total = Outcome::default();
    for seed in 0..200 {
        let out = check_all(&random_graph(seed));
        assert_clean(&format!("seed {seed}"), &out);
        total.merge(out);
    }
    assert!(total.checks > 10_000, "only {} checks ran", total.checks);
    // Every detector must have been exercised with a nonempty answer.
    for label in ["AM-1", "AM-2", "AM-3", "AM-4", "RM-1", "RM-2", "RM-3", "RM-4", "RM-5", "MM-1", "AC-1"] {
        let hits = total.nonempty.get(label).copied().unwrap_or(0);
        assert!(hits > 0, "{label} never fired on the random corpus");
    }
    println!("{:?}", total.nonempty);
}
