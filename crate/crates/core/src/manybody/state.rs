use super::basis::{Basis, BasisState};
use super::ManybodyError;

/// Real amplitudes over the states of a basis.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    pub amplitudes: Vec<f64>,
}

impl StateVector {
    pub fn zero(basis: &Basis) -> Self {
        StateVector { amplitudes: vec![0.0; basis.dim()] }
    }

    pub fn basis_state(basis: &Basis, index: usize) -> Self {
        let mut v = Self::zero(basis);
        v.amplitudes[index] = 1.0;
        v
    }

    /// `sum_j a_j |s_j>` for explicit states.
    pub fn superposition(basis: &Basis, terms: &[(BasisState, f64)]) -> Result<Self, ManybodyError> {
        let mut v = Self::zero(basis);
        for (state, a) in terms {
            let i = basis.find(state).ok_or_else(|| ManybodyError::StateNotInBasis(basis.label(state)))?;
            v.amplitudes[i] += a;
        }
        Ok(v)
    }

    /// `|core> (x) sum_k a_k |value at level k>`: the other values stay as in
    /// `core` while `value` is spread over the levels.
    pub fn factorized(
        basis: &Basis,
        core: &BasisState,
        value: u32,
        level_amplitudes: &[f64],
    ) -> Result<Self, ManybodyError> {
        let i = basis.position(value).ok_or(ManybodyError::ValueNotInBasis(value))?;
        let terms: Vec<(BasisState, f64)> = level_amplitudes
            .iter()
            .enumerate()
            .filter(|(_, a)| **a != 0.0)
            .map(|(k, &a)| (core.with_level(i, Some(k)), a))
            .collect();
        Self::superposition(basis, &terms)
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a * a).sum::<f64>().sqrt()
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        StateVector { amplitudes: self.amplitudes.iter().map(|a| a / n).collect() }
    }

    pub fn approx_eq(&self, other: &Self, tolerance: f64) -> bool {
        self.amplitudes.len() == other.amplitudes.len()
            && self.amplitudes.iter().zip(&other.amplitudes).all(|(a, b)| (a - b).abs() <= tolerance)
    }

    /// Nonzero amplitudes with state labels.
    pub fn table(&self, basis: &Basis, threshold: f64) -> Vec<(String, f64)> {
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(_, a)| a.abs() > threshold)
            .map(|(i, &a)| (basis.label(basis.state(i)), a))
            .collect()
    }
}
