mod common;

use common::{all_assignments, naive_forbids, naive_sum_free};
use schurlab::manybody::{
    algebra_report, annihilation, creation, ground_state, hamiltonian, permanent_register, Basis, DeviationKind,
    DEFAULT_TOLERANCE,
};
use schurlab::{Coloring, Constraint};

/// Placements of `1..=n` over `k` levels (plus "absent" when allowed) whose
/// levels are all sum-free.
fn brute_placements(k: usize, n: u32, c: Constraint, absent: bool) -> Vec<Vec<u8>> {
    let colors = if absent { k + 1 } else { k };
    all_assignments(colors, n)
        .filter(|a| {
            (0..k as u8).all(|l| {
                let level: Vec<u32> = (1..=n).filter(|&v| a[v as usize - 1] == l).collect();
                naive_sum_free(&level, c)
            })
        })
        .collect()
}

#[test]
fn basis_sizes_match_brute_force() {
    for (k, n, c) in [(3, 13, Constraint::Classic), (2, 6, Constraint::Weak), (3, 5, Constraint::Modular(4))] {
        for absent in [false, true] {
            if absent && n > 8 {
                continue;
            }
            let basis = Basis::build(k, n, c, absent).unwrap();
            assert_eq!(basis.dim(), brute_placements(k, n, c, absent).len(), "K={k} n={n} {c} {absent}");
        }
    }
    assert_eq!(Basis::build(3, 13, Constraint::Classic, false).unwrap().dim(), 18);
}

#[test]
fn ladder_operators_match_explicit_placements() {
    let basis = Basis::build(2, 5, Constraint::Classic, true).unwrap();
    for v in 1..=5 {
        for level in 0..2 {
            let bd = creation(&basis, v, level).unwrap();
            let b = annihilation(&basis, v, level).unwrap();
            assert_eq!(b, bd.adjoint());
            for (col, state) in basis.states().iter().enumerate() {
                let i = basis.position(v).unwrap();
                let mut placed: Vec<u32> = basis.level_values(state, level);
                placed.push(v);
                let allowed = state.level(i).is_none() && naive_sum_free(&placed, Constraint::Classic);
                assert_eq!(bd.column(col).len(), usize::from(allowed));
                for (row, _) in bd.column(col) {
                    let target = basis.state(row);
                    assert!((0..2).all(|l| naive_sum_free(&basis.level_values(target, l), Constraint::Classic)));
                }
            }
        }
    }
}

#[test]
fn algebra_holds_on_small_bases() {
    let mut checked = 0;
    for c in [Constraint::Classic, Constraint::Weak, Constraint::Modular(3)] {
        for (k, n) in [(1, 6), (2, 4), (2, 5), (3, 4)] {
            let basis = Basis::build(k, n, c, true).unwrap();
            assert!(basis.dim() <= 2_000);
            let report = algebra_report(&basis).unwrap();
            assert!(report.holds, "K={k} n={n} {c}: {} unexplained", report.unexplained);
            assert!(report.adjoint && report.vacuum_annihilated && report.number_idempotent);
            assert!(report.creation_squared_zero && report.anticommutator_unit_on_unconstrained);
            for d in &report.deviations {
                assert_ne!(d.kind, DeviationKind::Unexplained);
                if let Some(t) = d.witness {
                    assert!(naive_forbids(c, t.x, t.y, t.z));
                    assert!(t.involves(d.mode.value) || t.involves(d.other.value));
                }
            }
            checked += 1;
        }
    }
    assert_eq!(checked, 12);
}

#[test]
fn hamiltonian_is_symmetric_with_real_spectrum() {
    let basis = Basis::build(3, 8, Constraint::Classic, false).unwrap();
    let h = hamiltonian(&basis, &[1.0, 2.0, 3.0], 0.3, 0.05).unwrap();
    let total = h.total();
    assert_eq!(total, total.transpose());
    let g = ground_state(&total, DEFAULT_TOLERANCE).unwrap();
    assert_eq!(g.spectrum.len(), basis.dim());
    let diag_min = (0..basis.dim()).map(|i| total[(i, i)]).fold(f64::INFINITY, f64::min);
    assert!(g.energy <= diag_min + 1e-12);
    for v in &g.eigenvectors {
        let residual = &total * v - v * g.energy;
        assert!(residual.amax() < 1e-9);
    }
}

#[test]
fn ground_state_without_hopping_is_the_combinatorial_minimum() {
    let energies = [1.0, 2.0, 3.0];
    let basis = Basis::build(3, 13, Constraint::Classic, false).unwrap();
    let h = hamiltonian(&basis, &energies, 0.0, 0.0).unwrap();
    let g = ground_state(&h.total(), 1e-9).unwrap();

    let brute = brute_placements(3, 13, Constraint::Classic, false);
    let energy = |a: &Vec<u8>| a.iter().map(|&l| energies[l as usize]).sum::<f64>();
    let min = brute.iter().map(energy).fold(f64::INFINITY, f64::min);
    let argmin: Vec<&Vec<u8>> = brute.iter().filter(|a| (energy(a) - min).abs() < 1e-9).collect();
    assert!((g.energy - min).abs() < 1e-9);
    assert_eq!(g.degeneracy, argmin.len());
    for a in argmin {
        // The largest register sits at the cheapest level and holds 7.
        assert_eq!(a[6], 0);
        let i = basis.find_coloring(&Coloring::new(3, a.clone()).unwrap()).unwrap();
        assert!(g.eigenvectors.iter().any(|v| v[i].abs() > 1e-9));
    }
}

#[test]
fn permanents_have_factorial_size_and_ignore_order() {
    for len in 1..=6u32 {
        let values: Vec<u32> = (1..=len).map(|i| 3 * i + 1).collect();
        let r = permanent_register(&values).unwrap();
        assert_eq!(r.len() as u64, (1..=len as u64).product::<u64>());
        let mut reversed = values.clone();
        reversed.reverse();
        assert_eq!(permanent_register(&reversed).unwrap(), r);
        assert!(r.terms.values().all(|&w| w == 1));
    }
}
