mod common;

use proptest::prelude::*;
use schurlab::solver::export_cnf;
use schurlab::transform::canonicalize;
use schurlab::{is_sum_free, residue, verify_coloring, Block, Coloring, Constraint};

fn block_strategy(max: u32) -> impl Strategy<Value = Vec<u32>> {
    proptest::collection::btree_set(1..=max, 0..12).prop_map(|s| s.into_iter().collect())
}

fn coloring_strategy() -> impl Strategy<Value = Coloring> {
    (1usize..=4, 1u32..=14).prop_flat_map(|(k, n)| {
        proptest::collection::vec(0..k as u8, n as usize).prop_map(move |a| Coloring::new(k, a).unwrap())
    })
}

proptest! {
    #[test]
    fn residue_is_periodic_and_in_range(x in 0u32..1_000_000, m in 1u32..1000) {
        let r = residue(x, m);
        prop_assert!((1..=m).contains(&r));
        prop_assert_eq!(residue(x + m, m), r);
        prop_assert_eq!(r % m, x % m);
    }

    #[test]
    fn classic_sum_free_implies_weak(set in block_strategy(40)) {
        let b = Block::new(set).unwrap();
        if is_sum_free(&b, Constraint::Classic) {
            prop_assert!(is_sum_free(&b, Constraint::Weak));
        }
        if is_sum_free(&b, Constraint::Modular(7)) {
            prop_assert!(is_sum_free(&b, Constraint::WeakModular(7)));
        }
    }

    #[test]
    fn large_modulus_agrees_with_integers(set in block_strategy(30), extra in 0u32..50) {
        let m = 2 * 30 + 1 + extra;
        let b = Block::new(set).unwrap();
        prop_assert_eq!(is_sum_free(&b, Constraint::Modular(m)), is_sum_free(&b, Constraint::Classic));
        prop_assert_eq!(is_sum_free(&b, Constraint::WeakModular(m)), is_sum_free(&b, Constraint::Weak));
    }

    #[test]
    fn canonicalize_is_idempotent_and_preserves_validity(c in coloring_strategy()) {
        let once = canonicalize(&c);
        prop_assert!(once.is_canonical());
        prop_assert_eq!(canonicalize(&once), once.clone());
        for rule in [Constraint::Classic, Constraint::Weak, Constraint::Modular(5)] {
            prop_assert_eq!(verify_coloring(&c, rule).valid, verify_coloring(&once, rule).valid);
        }
    }

    #[test]
    fn cnf_accepts_exactly_the_valid_colorings(c in coloring_strategy()) {
        for rule in [Constraint::Classic, Constraint::Weak, Constraint::WeakModular(4)] {
            let doc = export_cnf(c.k(), c.n(), rule);
            prop_assert_eq!(doc.is_satisfied_by(&doc.encode(&c)), common::naive_valid(c.assignment(), rule));
        }
    }
}
