//! Cross-module property tests.

use approxcover::{
    asymptotic_covering_number, covering_number, detect_ap, endpoint_gap_condition, hfold,
    is_approximate_group, lower_bound, normal_form_sets, normalize, stabilization_check, IntSet,
    Parallelism, DEFAULT_NODE_BUDGET,
};
use proptest::collection::btree_set;
use proptest::prelude::*;

fn small_set() -> impl Strategy<Value = IntSet> {
    btree_set(-60i64..=60, 2..=6).prop_map(|s| IntSet::new(s.into_iter().collect::<Vec<_>>()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normalization_round_trips(a in small_set()) {
        let nf = normalize(&a).unwrap();
        prop_assert_eq!(nf.reconstruct().unwrap(), a.clone());
        prop_assert_eq!(nf.normalized.min().unwrap(), 0);
        let renorm = normalize(&nf.normalized).unwrap();
        prop_assert_eq!(renorm.normalized, nf.normalized);
        prop_assert_eq!(renorm.offset, 0);
        prop_assert_eq!(renorm.scale, 1);
    }

    #[test]
    fn covering_number_is_affine_invariant(
        a in btree_set(0i64..=12, 2..=4),
        d in 1i64..=7,
        t in -50i64..=50,
        r in 2u64..=3,
    ) {
        let a = IntSet::new(a.into_iter().collect::<Vec<_>>());
        let image = a.dilate(d).unwrap().translate(t).unwrap();
        let base = covering_number(&a, r).unwrap();
        let moved = covering_number(&image, r).unwrap();
        prop_assert_eq!(base.covering_number, moved.covering_number);
    }

    #[test]
    fn witnesses_certify_and_are_minimal(a in small_set(), r in 2u64..=3) {
        let result = covering_number(&a, r).unwrap();
        let witness = result.witness.clone();
        prop_assert_eq!(witness.len() as u64, result.covering_number);
        prop_assert!(is_approximate_group(&a, r, &witness).unwrap());
        if witness.len() >= 2 {
            for drop in 0..witness.len() {
                let reduced: Vec<i64> = witness
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != drop)
                    .map(|(_, v)| v)
                    .collect();
                let reduced = IntSet::new(reduced);
                prop_assert!(
                    !is_approximate_group(&a, r, &reduced).unwrap(),
                    "witness stayed a cover after removing slot {}", drop
                );
            }
        }
    }

    #[test]
    fn lower_bound_never_exceeds_covering_number(
        a in btree_set(-20i64..=20, 2..=5),
        r in 2u64..=4,
    ) {
        let a = IntSet::new(a.into_iter().collect::<Vec<_>>());
        let lb = lower_bound(&a, r).unwrap();
        let cn = covering_number(&a, r).unwrap().covering_number;
        prop_assert!(lb <= cn, "lower bound {} exceeds covering number {}", lb, cn);
    }

    #[test]
    fn limit_value_matches_endpoint_gaps(a in small_set(), r in 2u64..=9) {
        let value = asymptotic_covering_number(&a, r).unwrap();
        if endpoint_gap_condition(&a).unwrap() {
            prop_assert_eq!(value, r);
        } else {
            prop_assert_eq!(value, r + 1);
        }
    }

    #[test]
    fn progression_iterates_stay_progressions(first in -20i64..=20, diff in 1i64..=6, m in 2u64..=5, h in 1u64..=5) {
        let elems: Vec<i64> = (0..m as i64).map(|i| first + i * diff).collect();
        let a = IntSet::new(elems);
        let folded = hfold(&a, h).unwrap();
        let shape = detect_ap(&folded)
            .unwrap()
            .expect("iterate of a progression is a progression");
        prop_assert_eq!(shape.size as u64, h * (m - 1) + 1);
        if m >= 2 {
            prop_assert_eq!(shape.diff, diff);
        }
    }

}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn scan_modes_agree(a in btree_set(0i64..=9, 2..=4), r in 2u64..=3) {
        let a = IntSet::new(a.into_iter().collect::<Vec<_>>());
        let seq = stabilization_check(&a, r, (1, 6), Parallelism::Sequential, DEFAULT_NODE_BUDGET).unwrap();
        let par = stabilization_check(&a, r, (1, 6), Parallelism::Parallel, DEFAULT_NODE_BUDGET).unwrap();
        prop_assert_eq!(seq, par);
    }
}

// Not a theorem: checked exhaustively on this family, asserted to catch
// regressions in the solver rather than to prove anything.
#[test]
fn covering_number_is_monotone_in_r_on_small_sets() {
    for elems in normal_form_sets(8, 4) {
        let a = IntSet::new(elems.clone());
        let mut prev = 0;
        for r in 1..=5u64 {
            let cn = covering_number(&a, r).unwrap().covering_number;
            assert!(
                cn >= prev,
                "covering number dropped from {prev} to {cn} at r={r} for {elems:?}"
            );
            prev = cn;
        }
    }
}

#[test]
fn limit_is_eventually_exact_on_small_sets() {
    for elems in normal_form_sets(6, 3) {
        let a = IntSet::new(elems.clone());
        let b = *elems.last().unwrap() as u64;
        for r in 2..=3u64 {
            let limit = asymptotic_covering_number(&a, r).unwrap();
            let hi = 2 * b + 10;
            let scan = stabilization_check(&a, r, (1, hi), Parallelism::default(), DEFAULT_NODE_BUDGET).unwrap();
            assert!(
                scan.matches_closed_form,
                "tail value {} from h={} disagrees with limit {limit} for {elems:?} r={r}",
                scan.tail_value, scan.tail_start
            );
        }
    }
}
