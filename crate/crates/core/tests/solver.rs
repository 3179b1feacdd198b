mod common;

use common::*;
use schurlab::solver::{collect_colorings, enumerate_colorings, labelings, solve, Mode, SearchParams};
use schurlab::{is_sum_free, verify_coloring, Block, Constraint};

const ALL_RULES: [Constraint; 10] = [
    Constraint::Classic,
    Constraint::Weak,
    Constraint::Modular(1),
    Constraint::Modular(2),
    Constraint::Modular(3),
    Constraint::Modular(4),
    Constraint::WeakModular(1),
    Constraint::WeakModular(2),
    Constraint::WeakModular(3),
    Constraint::WeakModular(4),
];

#[test]
fn is_sum_free_matches_triple_enumeration_on_all_subsets() {
    for mask in 1u32..(1 << 12) {
        let set: Vec<u32> = (1..=12).filter(|v| mask & (1 << (v - 1)) != 0).collect();
        let block = Block::new(set.clone()).unwrap();
        for c in ALL_RULES {
            assert_eq!(is_sum_free(&block, c), naive_sum_free(&set, c), "{set:?} under {c}");
        }
    }
}

#[test]
fn classic_is_weak_plus_no_doubles() {
    for mask in 1u32..(1 << 12) {
        let set: Vec<u32> = (1..=12).filter(|v| mask & (1 << (v - 1)) != 0).collect();
        let block = Block::new(set.clone()).unwrap();
        let no_doubles = !set.iter().any(|x| set.contains(&(2 * x)));
        assert_eq!(
            is_sum_free(&block, Constraint::Classic),
            is_sum_free(&block, Constraint::Weak) && no_doubles,
            "{set:?}"
        );
    }
}

#[test]
fn ordering_chain_on_solved_instances() {
    let value = |k, c| solve(&SearchParams::prove(k, c)).unwrap().value;
    for k in 1..=3 {
        let (s, ws) = (value(k, Constraint::Classic), value(k, Constraint::Weak));
        assert!(s <= ws);
        for m in 1..=4 {
            let sm = value(k, Constraint::Modular(m));
            assert!(sm <= s && sm <= value(k, Constraint::WeakModular(m)), "K={k} m={m}");
        }
    }
}

#[test]
fn verify_matches_naive_on_all_small_colorings() {
    for c in ALL_RULES {
        for a in all_assignments(3, 7) {
            let coloring = schurlab::Coloring::new(3, a.clone()).unwrap();
            let report = verify_coloring(&coloring, c);
            assert_eq!(report.valid, naive_valid(&a, c), "{a:?} under {c}");
            for v in &report.violations {
                let t = v.triple;
                assert!(t.x <= t.y && naive_forbids(c, t.x, t.y, t.z));
                assert!([t.x, t.y, t.z].iter().all(|&u| coloring.block_of(u) == v.block));
            }
        }
    }
}

#[test]
fn solve_matches_brute_force() {
    let mut cases = vec![(1, Constraint::Classic), (2, Constraint::Classic), (3, Constraint::Classic)];
    cases.extend([(1, Constraint::Weak), (2, Constraint::Weak)]);
    for m in 1..=4 {
        for k in 1..=3 {
            cases.push((k, Constraint::Modular(m)));
            cases.push((k, Constraint::WeakModular(m)));
        }
    }
    for (k, c) in cases {
        let expected = brute_max(k, c, 14).unwrap_or_else(|| panic!("K={k} {c} exceeds the brute-force range"));
        let r = solve(&SearchParams::prove(k, c)).unwrap();
        assert_eq!(r.value, expected, "K={k} {c}");
        assert!(r.proven_maximal);
        assert_eq!(r.certificate.n(), expected);
        assert!(naive_valid(r.certificate.assignment(), c));
    }
}

#[test]
fn known_schur_and_weak_schur_values() {
    for k in 1..=4 {
        let r = solve(&SearchParams::prove(k, Constraint::Classic)).unwrap();
        assert_eq!(r.value, SCHUR[k - 1]);
        assert!(verify_coloring(&r.certificate, Constraint::Classic).valid);
    }
    for k in 1..=3 {
        let r = solve(&SearchParams::prove(k, Constraint::Weak)).unwrap();
        assert_eq!(r.value, WEAK_SCHUR[k - 1]);
        assert!(verify_coloring(&r.certificate, Constraint::Weak).valid);
    }
}

#[test]
fn modular_closed_forms_up_to_six_blocks() {
    for k in 1..=6 {
        let value = |c| solve(&SearchParams::prove(k, c)).unwrap().value;
        assert_eq!(value(Constraint::Modular(1)), 0);
        assert_eq!(value(Constraint::Modular(2)), 1);
        assert_eq!(value(Constraint::Modular(3)), if k == 1 { 1 } else { 2 });
        assert_eq!(value(Constraint::WeakModular(1)), ws1(k));
        assert_eq!(value(Constraint::WeakModular(2)), ws2(k));
        assert_eq!(value(Constraint::WeakModular(3)), ws3(k));
    }
}

#[test]
fn enumeration_counts_match_brute_force() {
    let cases = [
        (2, 4, Constraint::Classic),
        (3, 9, Constraint::Classic),
        (2, 8, Constraint::Weak),
        (3, 8, Constraint::Modular(4)),
        (3, 8, Constraint::WeakModular(3)),
        (4, 7, Constraint::Classic),
    ];
    for (k, n, c) in cases {
        let brute = brute_count(k, n, c);
        let all: Vec<_> = enumerate_colorings(k, n, c, false).unwrap().collect();
        assert_eq!(all.len() as u64, brute, "K={k} n={n} {c}");
        assert!(all.windows(2).all(|w| w[0].assignment() < w[1].assignment()));
        let canonical = collect_colorings(k, n, c, true, 1).unwrap();
        assert!(canonical.iter().all(|c| c.is_canonical()));
        assert_eq!(canonical.iter().map(labelings).sum::<u64>(), brute);
        assert_eq!(collect_colorings(k, n, c, true, 4).unwrap(), canonical);
    }
}

#[test]
fn schur_three_has_three_maximal_partitions_up_to_labels() {
    let maximal = collect_colorings(3, 13, Constraint::Classic, true, 2).unwrap();
    assert_eq!(maximal.len(), 3);
    assert_eq!(maximal.iter().map(labelings).sum::<u64>(), brute_count(3, 13, Constraint::Classic));
}

#[test]
fn thread_count_does_not_change_results() {
    let one = solve(&SearchParams::prove(4, Constraint::Classic).with_threads(1)).unwrap();
    let many = solve(&SearchParams::prove(4, Constraint::Classic).with_threads(4)).unwrap();
    assert_eq!(one.value, many.value);
    assert_eq!(one.certificate, many.certificate);
}

#[test]
fn lower_bound_stops_at_target() {
    let r = solve(&SearchParams::lower_bound(4, Constraint::Weak).with_target(40)).unwrap();
    assert!(r.value >= 40);
    assert!(verify_coloring(&r.certificate, Constraint::Weak).valid);
    assert_eq!(SearchParams::lower_bound(1, Constraint::Classic).mode, Mode::LowerBound);
}
