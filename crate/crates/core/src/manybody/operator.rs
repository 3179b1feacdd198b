//! Exact sparse operators on a basis and the constrained ladder operators.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_rational::Rational64;

use super::basis::Basis;
use super::ManybodyError;

/// Square matrix with exact rational entries, stored by row. Zero entries
/// are never stored, so structural equality is matrix equality.
#[derive(Clone, Debug)]
pub struct ExactOp {
    label: String,
    rows: Vec<BTreeMap<usize, Rational64>>,
}

impl PartialEq for ExactOp {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
    }
}

impl ExactOp {
    pub fn zeros(dim: usize, label: impl Into<String>) -> Self {
        ExactOp { label: label.into(), rows: vec![BTreeMap::new(); dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut op = Self::zeros(dim, "1");
        for i in 0..dim {
            op.set(i, i, Rational64::from_integer(1));
        }
        op
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn get(&self, row: usize, col: usize) -> Rational64 {
        self.rows[row].get(&col).copied().unwrap_or_default()
    }

    pub fn set(&mut self, row: usize, col: usize, value: Rational64) {
        if value == Rational64::default() {
            self.rows[row].remove(&col);
        } else {
            self.rows[row].insert(col, value);
        }
    }

    fn add_to(&mut self, row: usize, col: usize, value: Rational64) {
        let sum = self.get(row, col) + value;
        self.set(row, col, sum);
    }

    /// Nonzero entries as `(row, col, value)` in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, Rational64)> + '_ {
        self.rows.iter().enumerate().flat_map(|(r, row)| row.iter().map(move |(&c, &v)| (r, c, v)))
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(BTreeMap::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BTreeMap::is_empty)
    }

    pub fn is_diagonal(&self) -> bool {
        self.entries().all(|(r, c, _)| r == c)
    }

    /// Transpose; entries are real, so this is also the adjoint.
    pub fn adjoint(&self) -> ExactOp {
        let mut out = ExactOp::zeros(self.dim(), format!("({})^+", self.label));
        for (r, c, v) in self.entries() {
            out.set(c, r, v);
        }
        out
    }

    pub fn mul(&self, other: &ExactOp) -> ExactOp {
        let mut out = ExactOp::zeros(self.dim(), format!("{} {}", self.label, other.label));
        for (r, row) in self.rows.iter().enumerate() {
            for (&mid, &a) in row {
                for (&c, &b) in &other.rows[mid] {
                    out.add_to(r, c, a * b);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &ExactOp) -> ExactOp {
        let mut out = self.clone().with_label(format!("{} + {}", self.label, other.label));
        for (r, c, v) in other.entries() {
            out.add_to(r, c, v);
        }
        out
    }

    pub fn sub(&self, other: &ExactOp) -> ExactOp {
        let mut out = self.clone().with_label(format!("{} - {}", self.label, other.label));
        for (r, c, v) in other.entries() {
            out.add_to(r, c, -v);
        }
        out
    }

    pub fn scale(&self, factor: Rational64) -> ExactOp {
        let mut out = ExactOp::zeros(self.dim(), format!("{factor} {}", self.label));
        for (r, c, v) in self.entries() {
            out.set(r, c, v * factor);
        }
        out
    }

    /// `[a, b] = ab - ba`.
    pub fn commutator(a: &ExactOp, b: &ExactOp) -> ExactOp {
        a.mul(b).sub(&b.mul(a)).with_label(format!("[{}, {}]", a.label, b.label))
    }

    /// `{a, b} = ab + ba`.
    pub fn anticommutator(a: &ExactOp, b: &ExactOp) -> ExactOp {
        a.mul(b).add(&b.mul(a)).with_label(format!("{{{}, {}}}", a.label, b.label))
    }

    /// Image of the basis vector `col`.
    pub fn column(&self, col: usize) -> Vec<(usize, Rational64)> {
        self.rows.iter().enumerate().filter_map(|(r, row)| row.get(&col).map(|&v| (r, v))).collect()
    }

    /// Dense text: a `dim N` header, then one row per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("# {}\ndim {}\n", self.label, self.dim());
        for r in 0..self.dim() {
            let row: Vec<String> = (0..self.dim()).map(|c| self.get(r, c).to_string()).collect();
            writeln!(out, "{}", row.join(" ")).unwrap();
        }
        out
    }
}

fn check_mode(basis: &Basis, value: u32, level: usize) -> Result<usize, ManybodyError> {
    if level >= basis.k() {
        return Err(ManybodyError::LevelOutOfRange { level, k: basis.k() });
    }
    if !basis.allows_absent() {
        return Err(ManybodyError::NeedsAbsentStates);
    }
    basis.position(value).ok_or(ManybodyError::ValueNotInBasis(value))
}

/// `B+_{v,k}`: places the absent value `v` at level `k` when the level stays
/// sum-free; zero on every other state.
pub fn creation(basis: &Basis, value: u32, level: usize) -> Result<ExactOp, ManybodyError> {
    let i = check_mode(basis, value, level)?;
    let mut op = ExactOp::zeros(basis.dim(), format!("B+({value},{})", level + 1));
    for (col, state) in basis.states().iter().enumerate() {
        if state.level(i).is_some() || basis.blocking_triple(state, i, level).is_some() {
            continue;
        }
        let target = state.with_level(i, Some(level));
        let row = basis.find(&target).expect("a sum-free placement is a basis state");
        op.set(row, col, Rational64::from_integer(1));
    }
    Ok(op)
}

/// `B_{v,k}`: removes `v` from level `k`; zero where `v` is absent or at
/// another level. Built directly, not as the adjoint of [`creation`].
pub fn annihilation(basis: &Basis, value: u32, level: usize) -> Result<ExactOp, ManybodyError> {
    let i = check_mode(basis, value, level)?;
    let mut op = ExactOp::zeros(basis.dim(), format!("B({value},{})", level + 1));
    for (col, state) in basis.states().iter().enumerate() {
        if state.level(i) != Some(level) {
            continue;
        }
        let row = basis.find(&state.with_level(i, None)).expect("removing a value keeps sum-freeness");
        op.set(row, col, Rational64::from_integer(1));
    }
    Ok(op)
}

/// `N_{v,k}`: 1 on states with `v` at level `k`.
pub fn number(basis: &Basis, value: u32, level: usize) -> Result<ExactOp, ManybodyError> {
    let i = check_mode(basis, value, level)?;
    let mut op = ExactOp::zeros(basis.dim(), format!("N({value},{})", level + 1));
    for (col, state) in basis.states().iter().enumerate() {
        if state.level(i) == Some(level) {
            op.set(col, col, Rational64::from_integer(1));
        }
    }
    Ok(op)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraint::Constraint;

    fn r(x: i64) -> Rational64 {
        Rational64::from_integer(x)
    }

    #[test]
    fn creation_respects_sum_freeness() {
        let basis = Basis::build(2, 2, Constraint::Classic, true).unwrap();
        let one_at_1 = basis.find(&super::super::BasisState::new(vec![Some(0), None])).unwrap();
        let b2_1 = creation(&basis, 2, 0).unwrap();
        assert!(b2_1.column(one_at_1).is_empty());
        let b2_2 = creation(&basis, 2, 1).unwrap();
        let image = b2_2.column(one_at_1);
        assert_eq!(image.len(), 1);
        assert_eq!(basis.label(basis.state(image[0].0)), "|1>_1 |2>_2");
        assert_eq!(image[0].1, r(1));
    }

    #[test]
    fn exact_arithmetic() {
        let id = ExactOp::identity(3);
        let two = id.scale(r(2));
        assert_eq!(two.sub(&id), id);
        assert_eq!(two.mul(&two), id.scale(r(4)));
        assert!(ExactOp::commutator(&two, &id).is_zero());
        assert_eq!(ExactOp::anticommutator(&id, &id), two);
        assert!(id.to_text().contains("dim 3\n1 0 0\n"));
    }

    #[test]
    fn mode_errors() {
        let closed = Basis::build(2, 3, Constraint::Classic, false).unwrap();
        assert_eq!(creation(&closed, 1, 0), Err(ManybodyError::NeedsAbsentStates));
        let open = Basis::build(2, 3, Constraint::Classic, true).unwrap();
        assert_eq!(creation(&open, 9, 0), Err(ManybodyError::ValueNotInBasis(9)));
        assert_eq!(annihilation(&open, 1, 2), Err(ManybodyError::LevelOutOfRange { level: 2, k: 2 }));
    }
}
