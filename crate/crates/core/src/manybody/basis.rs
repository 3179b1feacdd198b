use std::collections::HashMap;
use std::fmt::Write as _;

use serde::Serialize;

use super::ManybodyError;
use crate::coloring::Coloring;
use crate::constraint::{extension_violation, Block, Constraint, Triple};

/// Default cap on the number of basis states.
pub const DEFAULT_BASIS_CAP: usize = 20_000;

/// Where each value of the basis sits: `None` is the absence of the particle,
/// `Some(k)` the zero-based level `k`. Ordered lexicographically with absence
/// before every level.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct BasisState {
    placement: Vec<Option<u8>>,
}

impl BasisState {
    pub fn new(placement: Vec<Option<u8>>) -> Self {
        BasisState { placement }
    }

    pub fn placement(&self) -> &[Option<u8>] {
        &self.placement
    }

    /// Level of the value at position `i` of the basis value list.
    pub fn level(&self, i: usize) -> Option<usize> {
        self.placement[i].map(usize::from)
    }

    pub fn with_level(&self, i: usize, level: Option<usize>) -> BasisState {
        let mut placement = self.placement.clone();
        placement[i] = level.map(|l| l as u8);
        BasisState { placement }
    }
}

/// All sum-free placements of a list of values over `k` levels, in
/// lexicographic order.
#[derive(Clone, Debug)]
pub struct Basis {
    k: usize,
    values: Vec<u32>,
    constraint: Constraint,
    allow_absent: bool,
    states: Vec<BasisState>,
    index: HashMap<BasisState, usize>,
}

impl Basis {
    /// Basis over the values `1..=n`.
    pub fn build(k: usize, n: u32, constraint: Constraint, allow_absent: bool) -> Result<Self, ManybodyError> {
        Self::build_with_cap(k, &(1..=n).collect::<Vec<_>>(), constraint, allow_absent, DEFAULT_BASIS_CAP)
    }

    /// Basis over an explicit strictly increasing list of positive values.
    pub fn over_values(
        k: usize,
        values: &[u32],
        constraint: Constraint,
        allow_absent: bool,
    ) -> Result<Self, ManybodyError> {
        Self::build_with_cap(k, values, constraint, allow_absent, DEFAULT_BASIS_CAP)
    }

    pub fn build_with_cap(
        k: usize,
        values: &[u32],
        constraint: Constraint,
        allow_absent: bool,
        cap: usize,
    ) -> Result<Self, ManybodyError> {
        if k == 0 || k > u8::MAX as usize {
            return Err(ManybodyError::InvalidLevels(k));
        }
        if values.is_empty() || values[0] == 0 || values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ManybodyError::InvalidValues(values.to_vec()));
        }
        let mut builder = Builder {
            k,
            values,
            constraint,
            allow_absent,
            cap,
            levels: vec![Vec::new(); k],
            current: Vec::with_capacity(values.len()),
            states: Vec::new(),
        };
        builder.fill()?;
        let states = builder.states;
        let index = states.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        Ok(Basis { k, values: values.to_vec(), constraint, allow_absent, states, index })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn constraint(&self) -> Constraint {
        self.constraint
    }

    pub fn allows_absent(&self) -> bool {
        self.allow_absent
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[BasisState] {
        &self.states
    }

    pub fn state(&self, i: usize) -> &BasisState {
        &self.states[i]
    }

    pub fn find(&self, state: &BasisState) -> Option<usize> {
        self.index.get(state).copied()
    }

    /// Position of `value` in the value list.
    pub fn position(&self, value: u32) -> Option<usize> {
        self.values.binary_search(&value).ok()
    }

    /// Index of the all-absent state, if the basis has one.
    pub fn vacuum(&self) -> Option<usize> {
        self.find(&BasisState::new(vec![None; self.values.len()]))
    }

    /// Index of the state placing every value as in `coloring`, which must
    /// color exactly the values of this basis.
    pub fn find_coloring(&self, coloring: &Coloring) -> Option<usize> {
        if coloring.n() as usize != self.values.len() || self.values.last() != Some(&coloring.n()) {
            return None;
        }
        let placement = (1..=coloring.n()).map(|v| Some(coloring.block_of(v) as u8)).collect();
        self.find(&BasisState::new(placement))
    }

    /// Values placed at `level`, ascending.
    pub fn level_values(&self, state: &BasisState, level: usize) -> Vec<u32> {
        self.values.iter().zip(&state.placement).filter(|(_, p)| **p == Some(level as u8)).map(|(&v, _)| v).collect()
    }

    /// Number of values at each level.
    pub fn occupation(&self, state: &BasisState) -> Vec<usize> {
        let mut counts = vec![0; self.k];
        for l in state.placement.iter().flatten() {
            counts[*l as usize] += 1;
        }
        counts
    }

    /// The triple that would break `level` if the value at position `i`
    /// were placed there (its current placement ignored), or `None` when
    /// the placement is allowed.
    pub fn blocking_triple(&self, state: &BasisState, i: usize, level: usize) -> Option<Triple> {
        let v = self.values[i];
        let others: Vec<u32> = self
            .values
            .iter()
            .zip(&state.placement)
            .enumerate()
            .filter(|&(j, (_, p))| j != i && *p == Some(level as u8))
            .map(|(_, (&w, _))| w)
            .collect();
        extension_violation(&Block::from_sorted(others), v, self.constraint)
    }

    /// Ket notation, one register per level: `|1,4>_1 |2,3>_2`.
    pub fn label(&self, state: &BasisState) -> String {
        let mut out = String::new();
        for level in 0..self.k {
            let values: Vec<String> = self.level_values(state, level).iter().map(u32::to_string).collect();
            if level > 0 {
                out.push(' ');
            }
            write!(out, "|{}>_{}", values.join(","), level + 1).unwrap();
        }
        out
    }
}

struct Builder<'a> {
    k: usize,
    values: &'a [u32],
    constraint: Constraint,
    allow_absent: bool,
    cap: usize,
    levels: Vec<Vec<u32>>,
    current: Vec<Option<u8>>,
    states: Vec<BasisState>,
}

impl Builder<'_> {
    fn fill(&mut self) -> Result<(), ManybodyError> {
        let i = self.current.len();
        if i == self.values.len() {
            if self.states.len() == self.cap {
                return Err(ManybodyError::BasisTooLarge { cap: self.cap });
            }
            self.states.push(BasisState::new(self.current.clone()));
            return Ok(());
        }
        let v = self.values[i];
        if self.allow_absent {
            self.current.push(None);
            self.fill()?;
            self.current.pop();
        }
        for level in 0..self.k {
            let block = Block::from_sorted(self.levels[level].clone());
            if extension_violation(&block, v, self.constraint).is_some() {
                continue;
            }
            self.levels[level].push(v);
            self.current.push(Some(level as u8));
            self.fill()?;
            self.current.pop();
            self.levels[level].pop();
        }
        Ok(())
    }
}
