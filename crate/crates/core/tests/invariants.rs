use proptest::prelude::*;

use refd_core::query::{gen_all_methods, gen_program_classes};
use refd_core::graph::NodeTag;
use refd_testkit::invariants::{self, Choice};
use refd_testkit::random::{random_graph, random_project};

fn choice() -> impl Strategy<Value = Choice> {
    (any::<u8>(), any::<usize>(), any::<usize>(), any::<usize>()).prop_map(|(kind, a, b, c)| Choice { kind, a, b, c })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn add_then_remove_is_identity(seed in 0u64..5000, c in any::<usize>(), m in any::<usize>(), private in any::<bool>(), extra in any::<bool>()) {
        let g = random_graph(seed);
        invariants::add_then_remove(&g, c, m, private, extra).map_err(TestCaseError::fail)?;
        prop_assert_eq!(g.generation(), 0);
    }

    #[test]
    fn typed_sets_stay_pure(seed in 0u64..5000, picks in proptest::collection::vec(any::<usize>(), 0..6)) {
        invariants::kind_purity(&random_graph(seed), &picks).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn verdicts_only_filter(seed in 0u64..5000, choice in choice(), salt in any::<u64>()) {
        let g = random_graph(seed);
        if let Some(r) = choice.build(&g) {
            invariants::filter_only(&g, &r, salt).map_err(TestCaseError::fail)?;
        }
    }

    #[test]
    fn default_verdict_reports_every_actual_risk(seed in 0u64..5000, choice in choice()) {
        let g = random_graph(seed);
        if let Some(r) = choice.build(&g) {
            invariants::default_identity(&g, &r).map_err(TestCaseError::fail)?;
        }
    }

    #[test]
    fn baseline_untouched_and_json_stable(seed in 0u64..5000, choice in choice()) {
        invariants::baseline_and_determinism(seed, choice).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn effects_preserve_integrity(seed in 0u64..5000, choice in choice()) {
        let g = random_graph(seed);
        if let Some(r) = choice.build(&g) {
            invariants::effects_keep_integrity(&g, &r).map_err(TestCaseError::fail)?;
        }
    }

    #[test]
    fn builds_are_reproducible(seed in 0u64..5000) {
        prop_assert_eq!(random_graph(seed).to_json(), random_graph(seed).to_json());
        let mut reversed = random_project(seed);
        reversed.reverse();
        prop_assert_eq!(refd_testkit::graph_from_sources(reversed).to_json(), random_graph(seed).to_json());
    }
}

#[test]
fn deterministic_sweep() {
    let tally = invariants::sweep(0..40, 4).unwrap();
    assert!(tally.refactorings > 40, "{tally:?}");
}

#[test]
fn generators_cover_their_kind() {
    let g = random_graph(11);
    assert_eq!(gen_program_classes(&g).len(), g.nodes_tagged(NodeTag::Class).count());
    assert_eq!(gen_all_methods(&g).len(), g.nodes_tagged(NodeTag::Method).count());
}
