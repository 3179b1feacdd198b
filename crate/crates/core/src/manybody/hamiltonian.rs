use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use super::basis::Basis;
use super::ManybodyError;

/// Dense eigensolving is refused above this dimension.
pub const MAX_DENSE_DIM: usize = 4_000;

/// Default tolerance for counting degenerate eigenvalues.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct Hamiltonian {
    /// `sum_k E(k) * (values at level k)`, diagonal.
    pub h0: DMatrix<f64>,
    /// `J` between every pair of states related by moving one value to
    /// another level where it stays sum-free.
    pub he: DMatrix<f64>,
    /// `lambda * sum_{k < k'} n_k n_k'`, diagonal.
    pub hi: DMatrix<f64>,
}

impl Hamiltonian {
    pub fn total(&self) -> DMatrix<f64> {
        &self.h0 + &self.he + &self.hi
    }
}

pub fn hamiltonian(basis: &Basis, energies: &[f64], hop: f64, interaction: f64) -> Result<Hamiltonian, ManybodyError> {
    let k = basis.k();
    if energies.len() != k {
        return Err(ManybodyError::EnergyCount { expected: k, got: energies.len() });
    }
    let dim = basis.dim();
    let mut h0 = DMatrix::zeros(dim, dim);
    let mut he = DMatrix::zeros(dim, dim);
    let mut hi = DMatrix::zeros(dim, dim);
    for (s, state) in basis.states().iter().enumerate() {
        let occ = basis.occupation(state);
        h0[(s, s)] = occ.iter().zip(energies).map(|(&n, &e)| n as f64 * e).sum();
        let mut pairs = 0usize;
        for a in 0..k {
            for b in a + 1..k {
                pairs += occ[a] * occ[b];
            }
        }
        hi[(s, s)] = interaction * pairs as f64;
        if hop != 0.0 {
            for i in 0..basis.values().len() {
                let Some(from) = state.level(i) else { continue };
                for to in 0..k {
                    if to == from || basis.blocking_triple(state, i, to).is_some() {
                        continue;
                    }
                    let t = basis.find(&state.with_level(i, Some(to))).expect("sum-free move stays in the basis");
                    // Each unordered pair of states is met once from each side.
                    he[(t, s)] = hop;
                }
            }
        }
    }
    Ok(Hamiltonian { h0, he, hi })
}

#[derive(Clone, Debug, Serialize)]
pub struct GroundState {
    pub energy: f64,
    pub degeneracy: usize,
    /// Orthonormal basis of the ground eigenspace, one vector per column.
    #[serde(skip)]
    pub eigenvectors: Vec<DVector<f64>>,
    /// All eigenvalues, ascending.
    pub spectrum: Vec<f64>,
}

/// Lowest eigenvalue of a real symmetric matrix and its eigenspace. Eigenvalues
/// within `tolerance` of the minimum count as degenerate.
pub fn ground_state(h: &DMatrix<f64>, tolerance: f64) -> Result<GroundState, ManybodyError> {
    let dim = h.nrows();
    if dim == 0 || h.ncols() != dim {
        return Err(ManybodyError::NotSquare { rows: dim, cols: h.ncols() });
    }
    if dim > MAX_DENSE_DIM {
        return Err(ManybodyError::TooLargeForDense { dim, max: MAX_DENSE_DIM });
    }
    let asymmetry = (h - h.transpose()).amax();
    if asymmetry > 1e-12 * h.amax().max(1.0) {
        return Err(ManybodyError::NotSelfAdjoint { asymmetry });
    }
    let (values, vectors) = if is_diagonal(h) {
        (h.diagonal(), DMatrix::identity(dim, dim))
    } else {
        let eig = SymmetricEigen::try_new(h.clone(), f64::EPSILON, 1000 * dim)
            .ok_or(ManybodyError::NumericalFailure { dim, detail: "symmetric QR iteration did not converge".into() })?;
        (eig.eigenvalues, eig.eigenvectors)
    };
    if values.iter().any(|v| !v.is_finite()) {
        return Err(ManybodyError::NumericalFailure { dim, detail: "non-finite eigenvalue".into() });
    }
    let energy = values.min();
    let ground: Vec<usize> = (0..dim).filter(|&i| values[i] - energy <= tolerance).collect();
    let mut spectrum: Vec<f64> = values.iter().copied().collect();
    spectrum.sort_by(f64::total_cmp);
    Ok(GroundState {
        energy,
        degeneracy: ground.len(),
        eigenvectors: ground.iter().map(|&i| vectors.column(i).into_owned()).collect(),
        spectrum,
    })
}

fn is_diagonal(h: &DMatrix<f64>) -> bool {
    (0..h.nrows()).all(|r| (0..h.ncols()).all(|c| r == c || h[(r, c)] == 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::Coloring;
    use crate::constraint::Constraint;

    #[test]
    fn diagonal_ground_state() {
        let h = DMatrix::from_diagonal(&DVector::from_vec(vec![5.0, 2.0, 2.0, 9.0]));
        let g = ground_state(&h, 1e-9).unwrap();
        assert_eq!((g.energy, g.degeneracy), (2.0, 2));
    }

    #[test]
    fn two_state_hopping() {
        let j = 0.7;
        let h = DMatrix::from_row_slice(2, 2, &[0.0, j, j, 0.0]);
        let g = ground_state(&h, 1e-9).unwrap();
        assert!((g.energy + j).abs() < 1e-12);
        assert_eq!(g.degeneracy, 1);
        let v = &g.eigenvectors[0];
        assert!((v[0].abs() - v[1].abs()).abs() < 1e-12);
    }

    #[test]
    fn rejects_asymmetric_and_mismatched_input() {
        let h = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(matches!(ground_state(&h, 1e-9), Err(ManybodyError::NotSelfAdjoint { .. })));
        let basis = Basis::build(3, 4, Constraint::Classic, false).unwrap();
        assert!(hamiltonian(&basis, &[1.0, 2.0], 0.0, 0.0).is_err());
    }

    #[test]
    fn schur_three_filling() {
        let basis = Basis::build(3, 13, Constraint::Classic, false).unwrap();
        let h = hamiltonian(&basis, &[1.0, 2.0, 3.0], 0.0, 0.0).unwrap();
        let eq7 = Coloring::from_blocks(3, &[&[1, 4, 7, 10, 13][..], &[2, 3, 11, 12], &[5, 6, 8, 9]]).unwrap();
        let i = basis.find_coloring(&eq7).unwrap();
        assert_eq!(h.h0[(i, i)], 25.0);
        let g = ground_state(&h.total(), 1e-9).unwrap();
        assert_eq!(g.energy, 25.0);
        // The five-element register at level 1, the others in either order,
        // for each of the three partitions.
        assert_eq!(g.degeneracy, 6);
    }

    #[test]
    fn hopping_only_moves_seven() {
        let basis = Basis::build(3, 13, Constraint::Classic, false).unwrap();
        let h = hamiltonian(&basis, &[1.0, 2.0, 3.0], 0.1, 0.0).unwrap();
        let seven = basis.position(7).unwrap();
        let mut couplings = 0;
        for r in 0..basis.dim() {
            for c in 0..basis.dim() {
                if h.he[(r, c)] != 0.0 {
                    couplings += 1;
                    let (a, b) = (basis.state(r).placement(), basis.state(c).placement());
                    let differing: Vec<usize> = (0..a.len()).filter(|&i| a[i] != b[i]).collect();
                    assert_eq!(differing, [seven]);
                }
            }
        }
        // Six labelings, each a triangle of three states: 6 * 3 * 2 entries.
        assert_eq!(couplings, 36);
        assert_eq!(h.he, h.he.transpose());
    }
}
