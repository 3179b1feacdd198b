//! Exact checks of the ladder-operator algebra on a basis with absent
//! states. The hard-core relations `[B_a, B+_a] = 1 - 2 N_a` and
//! `[B_a, B+_b] = 0` hold wherever creating the particle is unconstrained;
//! every entry where they fail is itemized with its cause.

use num_rational::Rational64;
use serde::Serialize;

use super::basis::Basis;
use super::operator::{annihilation, creation, number, ExactOp};
use super::ManybodyError;
use crate::constraint::Triple;

/// A single-particle mode: a value at a level (numbered from 1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Mode {
    pub value: u32,
    pub level: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    /// `[B_a, B+_a]` against `1 - 2 N_a`.
    SameMode,
    /// `[B_a, B+_b]` against 0.
    CrossMode,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeviationKind {
    /// Creating the particle is blocked by a sum in its level.
    SumFreeBlocked,
    /// The value already sits at another level.
    SingleOccupancy,
    /// Not explained by either constraint; never expected.
    Unexplained,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Deviation {
    pub relation: Relation,
    pub mode: Mode,
    pub other: Mode,
    pub row: usize,
    pub col: usize,
    /// The basis state the operators act on.
    pub state: String,
    pub measured: String,
    pub expected: String,
    pub kind: DeviationKind,
    pub witness: Option<Triple>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlgebraReport {
    pub dim: usize,
    pub modes: usize,
    /// `B_a` equals the adjoint of `B+_a` for every mode.
    pub adjoint: bool,
    /// Every `B_a` kills the all-absent state.
    pub vacuum_annihilated: bool,
    /// `N_a = B+_a B_a`.
    pub number_is_bdagger_b: bool,
    /// `N_a^2 = N_a`.
    pub number_idempotent: bool,
    /// `(B+_a)^2 = 0`.
    pub creation_squared_zero: bool,
    /// `[B_a, B_b] = 0` for all modes.
    pub annihilators_commute: bool,
    /// `{B_a, B+_a} = 1` wherever creating `a` is unconstrained.
    pub anticommutator_unit_on_unconstrained: bool,
    pub sum_free_blocked: usize,
    pub single_occupancy: usize,
    pub unexplained: usize,
    pub deviations: Vec<Deviation>,
    /// All identities hold and every deviation is explained.
    pub holds: bool,
}

struct ModeOps {
    mode: Mode,
    index: usize,
    level: usize,
    b: ExactOp,
    bd: ExactOp,
    n: ExactOp,
}

pub fn algebra_report(basis: &Basis) -> Result<AlgebraReport, ManybodyError> {
    if !basis.allows_absent() {
        return Err(ManybodyError::NeedsAbsentStates);
    }
    let dim = basis.dim();
    let mut ops = Vec::new();
    for (index, &value) in basis.values().iter().enumerate() {
        for level in 0..basis.k() {
            ops.push(ModeOps {
                mode: Mode { value, level: level + 1 },
                index,
                level,
                b: annihilation(basis, value, level)?,
                bd: creation(basis, value, level)?,
                n: number(basis, value, level)?,
            });
        }
    }
    let one = ExactOp::identity(dim);
    let two = Rational64::from_integer(2);

    let adjoint = ops.iter().all(|o| o.b == o.bd.adjoint());
    let vacuum_annihilated = match basis.vacuum() {
        Some(vac) => ops.iter().all(|o| o.b.column(vac).is_empty()),
        None => false,
    };
    let number_is_bdagger_b = ops.iter().all(|o| o.bd.mul(&o.b) == o.n);
    let number_idempotent = ops.iter().all(|o| o.n.mul(&o.n) == o.n);
    let creation_squared_zero = ops.iter().all(|o| o.bd.mul(&o.bd).is_zero());
    let annihilators_commute =
        ops.iter().enumerate().all(|(i, a)| ops[i + 1..].iter().all(|b| ExactOp::commutator(&a.b, &b.b).is_zero()));

    // Creating `o` on state `s` is unconstrained when the value is at o's
    // level already, or absent with nothing in the way.
    let unconstrained = |o: &ModeOps, s: usize| {
        let state = basis.state(s);
        match state.level(o.index) {
            Some(l) => l == o.level,
            None => basis.blocking_triple(state, o.index, o.level).is_none(),
        }
    };

    let anticommutator_unit_on_unconstrained = ops.iter().all(|o| {
        let residual = ExactOp::anticommutator(&o.b, &o.bd).sub(&one);
        let ok = residual.entries().all(|(r, c, _)| !(unconstrained(o, c) && unconstrained(o, r)));
        ok
    });

    let mut deviations = Vec::new();
    for a in &ops {
        let expected = one.sub(&a.n.scale(two));
        let commutator = ExactOp::commutator(&a.b, &a.bd);
        let residual = commutator.sub(&expected);
        for (row, col, _) in residual.entries() {
            let state = basis.state(col);
            let (kind, witness) = if row != col || unconstrained(a, col) {
                (DeviationKind::Unexplained, None)
            } else if state.level(a.index).is_some() {
                (DeviationKind::SingleOccupancy, None)
            } else {
                (DeviationKind::SumFreeBlocked, basis.blocking_triple(state, a.index, a.level))
            };
            let measured = commutator.get(row, col);
            deviations.push(Deviation {
                relation: Relation::SameMode,
                mode: a.mode,
                other: a.mode,
                row,
                col,
                state: basis.label(state),
                measured: measured.to_string(),
                expected: expected.get(row, col).to_string(),
                kind,
                witness,
            });
        }
    }
    for a in &ops {
        for b in &ops {
            if std::ptr::eq(a, b) {
                continue;
            }
            let c = ExactOp::commutator(&a.b, &b.bd);
            for (row, col, measured) in c.entries() {
                let state = basis.state(col);
                let (kind, witness) = if a.index == b.index {
                    // Moving the value between levels: B+_b B_a hops, the
                    // other order needs the value at both levels.
                    if state.level(a.index) == Some(a.level) {
                        (DeviationKind::SingleOccupancy, None)
                    } else {
                        (DeviationKind::Unexplained, None)
                    }
                } else {
                    // Removing a first unblocks b.
                    match basis.blocking_triple(state, b.index, b.level) {
                        Some(t) if a.level == b.level && t.involves(a.mode.value) => {
                            (DeviationKind::SumFreeBlocked, Some(t))
                        }
                        _ => (DeviationKind::Unexplained, None),
                    }
                };
                deviations.push(Deviation {
                    relation: Relation::CrossMode,
                    mode: a.mode,
                    other: b.mode,
                    row,
                    col,
                    state: basis.label(state),
                    measured: measured.to_string(),
                    expected: "0".into(),
                    kind,
                    witness,
                });
            }
        }
    }
    let count = |k: DeviationKind| deviations.iter().filter(|d| d.kind == k).count();
    let sum_free_blocked = count(DeviationKind::SumFreeBlocked);
    let single_occupancy = count(DeviationKind::SingleOccupancy);
    let unexplained = count(DeviationKind::Unexplained);
    let holds = adjoint
        && vacuum_annihilated
        && number_is_bdagger_b
        && number_idempotent
        && creation_squared_zero
        && annihilators_commute
        && anticommutator_unit_on_unconstrained
        && unexplained == 0;
    Ok(AlgebraReport {
        dim,
        modes: ops.len(),
        adjoint,
        vacuum_annihilated,
        number_is_bdagger_b,
        number_idempotent,
        creation_squared_zero,
        annihilators_commute,
        anticommutator_unit_on_unconstrained,
        sum_free_blocked,
        single_occupancy,
        unexplained,
        deviations,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraint::Constraint;

    #[test]
    fn single_mode_is_a_hard_core_boson() {
        let basis = Basis::over_values(1, &[1], Constraint::Weak, true).unwrap();
        assert_eq!(basis.dim(), 2);
        let b = annihilation(&basis, 1, 0).unwrap();
        let bd = creation(&basis, 1, 0).unwrap();
        let c = ExactOp::commutator(&b, &bd);
        assert_eq!(c.get(0, 0), Rational64::from_integer(1));
        assert_eq!(c.get(1, 1), Rational64::from_integer(-1));
        assert_eq!(c.nnz(), 2);
        let report = algebra_report(&basis).unwrap();
        assert!(report.holds && report.deviations.is_empty());
    }

    #[test]
    fn one_plus_one_blocks_two() {
        let basis = Basis::over_values(1, &[1, 2], Constraint::Classic, true).unwrap();
        let report = algebra_report(&basis).unwrap();
        assert!(report.holds, "{report:?}");
        assert!(report.sum_free_blocked > 0);
        assert!(report.deviations.iter().all(|d| d.witness == Some(Triple::new(1, 1, 2))));
    }

    #[test]
    fn values_without_sums_have_no_deviations() {
        let basis = Basis::over_values(1, &[1, 3], Constraint::Classic, true).unwrap();
        let report = algebra_report(&basis).unwrap();
        assert!(report.holds);
        assert!(report.deviations.is_empty());
    }

    #[test]
    fn two_levels_report_single_occupancy() {
        let basis = Basis::over_values(2, &[1, 2, 3], Constraint::Classic, true).unwrap();
        let report = algebra_report(&basis).unwrap();
        assert!(report.holds, "unexplained: {}", report.unexplained);
        assert!(report.single_occupancy > 0 && report.sum_free_blocked > 0);
    }
}
