use iterroot::functional_graphs::{BruteForceOptions, OrbitKind, SymbolicOrbitSpace};
use iterroot::FunctionalGraph;
use proptest::prelude::*;

fn graph() -> impl Strategy<Value = FunctionalGraph> {
    (1usize..=6).prop_flat_map(|n| prop::collection::vec(0..n, n)).prop_map(|img| FunctionalGraph::new(img).unwrap())
}

fn brute(f: &FunctionalGraph) -> Vec<FunctionalGraph> {
    f.brute_force_square_roots(None, BruteForceOptions::default()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn paired_roots_square_back(f in graph()) {
        if let Some(g) = f.square_root_paired() {
            prop_assert_eq!(g.square(), f);
        }
    }

    #[test]
    fn certificates_mean_no_roots(f in graph()) {
        if let Some(cert) = f.t3_check_finite() {
            prop_assert!(cert.verify(&f));
            prop_assert!(brute(&f).is_empty());
        }
    }

    #[test]
    fn injective_criterion_matches_enumeration(img in (1usize..=6).prop_flat_map(|n| Just((0..n).collect::<Vec<_>>()).prop_shuffle())) {
        let f = FunctionalGraph::new(img).unwrap();
        let verdict = f.multiplicity_sequence().unwrap().t2a_has_square_root();
        prop_assert_eq!(verdict, !brute(&f).is_empty());
    }

    #[test]
    fn pruned_search_agrees(f in graph()) {
        let pruned = f.brute_force_square_roots(None, BruteForceOptions { pruned: true, ..Default::default() }).unwrap();
        prop_assert_eq!(pruned, brute(&f));
    }

    #[test]
    fn components_are_closed_under_f(f in graph()) {
        let p = f.components();
        for v in 0..f.len() {
            prop_assert_eq!(p.labels[v], p.labels[f.apply(v)]);
        }
        prop_assert_eq!(p.members().len(), p.count);
    }

    #[test]
    fn json_round_trip(f in graph()) {
        let s = serde_json::to_string(&f).unwrap();
        prop_assert_eq!(serde_json::from_str::<FunctionalGraph>(&s).unwrap(), f);
    }

    #[test]
    fn symbolic_roots_square_to_the_shift(kinds in prop::collection::vec(
        prop_oneof![(1usize..6).prop_map(OrbitKind::Cycle), Just(OrbitKind::Unilateral), Just(OrbitKind::Bilateral)], 0..6)) {
        let space = SymbolicOrbitSpace::new(kinds).unwrap();
        match space.t2a_construct_root() {
            Ok(rule) => {
                for (o, kind) in space.orbits.iter().enumerate() {
                    let range: Vec<i64> = match kind {
                        OrbitKind::Cycle(d) => (0..*d as i64).collect(),
                        OrbitKind::Unilateral => (0..20).collect(),
                        OrbitKind::Bilateral => (-10..10).collect(),
                    };
                    for index in range {
                        let a = iterroot::functional_graphs::Address { orbit: o, index };
                        prop_assert_eq!(rule.apply(rule.apply(a)), space.successor(a));
                    }
                }
            }
            Err(_) => prop_assert!(!space.inventory().t2a_has_square_root()),
        }
    }
}

#[test]
fn two_components_examples() {
    // Two 2-cycles: paired into a 4-cycle.
    let f = FunctionalGraph::new(vec![1, 0, 3, 2]).unwrap();
    let g = f.square_root_two_components().unwrap();
    assert_eq!(g.square(), f);
    // A swap has none.
    let swap = FunctionalGraph::new(vec![1, 0]).unwrap();
    assert!(brute(&swap).is_empty());
    assert!(swap.square_root_two_components().is_err());
}

#[test]
fn guard_is_enforced() {
    let f = FunctionalGraph::identity(8);
    assert!(f.brute_force_square_roots(None, BruteForceOptions::default()).is_err());
}
