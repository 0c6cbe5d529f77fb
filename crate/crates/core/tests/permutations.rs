use iterroot::permutation_roots::double_bracket;
use iterroot::{CycleType, Permutation};
use itertools::Itertools;
use proptest::prelude::*;

fn perm() -> impl Strategy<Value = Permutation> {
    (1usize..=9).prop_flat_map(|k| Just((0..k).collect::<Vec<_>>()).prop_shuffle()).prop_map(|v| Permutation::new(v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn constructed_roots_are_roots(s in perm(), n in 1u64..=6) {
        match s.construct_nth_root(n) {
            Some(t) => prop_assert_eq!(t.pow(n), s),
            None => prop_assert!(!s.cycle_type().has_nth_root(n)),
        }
    }

    #[test]
    fn powers_have_predicted_cycle_type(s in perm(), n in 1u64..=6) {
        prop_assert_eq!(s.pow(n).cycle_type(), s.cycle_type().power_cycle_type(n));
    }

    #[test]
    fn cycle_type_sums_to_degree(s in perm()) {
        prop_assert_eq!(s.cycle_type().degree(), s.degree());
        let flat: Vec<usize> = s.cycles().into_iter().flatten().sorted().collect();
        prop_assert_eq!(flat, (0..s.degree()).collect::<Vec<_>>());
    }

    #[test]
    fn square_criterion_is_the_n_equals_two_case(s in perm()) {
        prop_assert_eq!(s.cycle_type().even_cycles_criterion(), s.cycle_type().has_nth_root(2));
    }
}

#[test]
fn criterion_matches_enumeration_in_s5() {
    let all: Vec<Permutation> = (0..5).permutations(5).map(|v| Permutation::new(v).unwrap()).collect();
    for n in 2..=4 {
        let powers: std::collections::HashSet<Permutation> = all.iter().map(|t| t.pow(n)).collect();
        for s in &all {
            assert_eq!(s.cycle_type().has_nth_root(n), powers.contains(s), "{s:?}, n = {n}");
        }
    }
}

#[test]
fn bracket_examples() {
    assert_eq!(double_bracket(4, 2), 2);
    assert_eq!(double_bracket(3, 2), 1);
    assert_eq!(double_bracket(6, 4), 4);
    assert_eq!(double_bracket(12, 18), 18);
    let ct = CycleType::from_counts([(2, 1), (4, 1)]);
    assert!(!ct.has_nth_root(2));
}
