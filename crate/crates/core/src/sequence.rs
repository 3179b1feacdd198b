//! The self-correlated sequence 1, 3, 4, 5, 7, 9, 11, 12, ...: the integers
//! `n` such that `n / 2` is not in the sequence, i.e. the single-level
//! filling under the rule that `t` and `t + t` never coexist.

use serde::Serialize;
use thiserror::Error;

use crate::bits::BitVec;

/// Fewest terms accepted by [`fractal_check`].
pub const MIN_FRACTAL_TERMS: usize = 50;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SequenceError {
    #[error("need at least {needed} terms, have {have}")]
    InsufficientTerms { needed: usize, have: usize },
    #[error("at most {max} exponents fit in 64 bits, asked for {asked}")]
    TooManyExponents { max: usize, asked: usize },
}

#[derive(Clone, Debug, Default)]
pub struct SequenceState {
    terms: Vec<u64>,
    membership: BitVec,
}

impl SequenceState {
    pub fn terms(&self) -> &[u64] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest generated term (0 when empty).
    pub fn last(&self) -> u64 {
        self.terms.last().copied().unwrap_or(0)
    }

    /// Membership for `x` up to [`SequenceState::last`].
    pub fn contains(&self, x: u64) -> bool {
        self.membership.get(x as usize)
    }

    /// Appends the next term: `last + 1`, unless that is even with its half
    /// already a term, in which case `last + 2`.
    pub fn push_next(&mut self) -> u64 {
        let mut c = self.last() + 1;
        if c.is_multiple_of(2) && self.contains(c / 2) {
            c += 1;
        }
        self.terms.push(c);
        self.membership.set(c as usize);
        c
    }
}

pub fn generate(count: usize) -> SequenceState {
    let mut state = SequenceState {
        terms: Vec::with_capacity(count),
        // The k-th term is below 3k / 2 + 2.
        membership: BitVec::with_len(count * 3 / 2 + 2),
    };
    for _ in 0..count {
        state.push_next();
    }
    state
}

/// The even terms, in order.
pub fn even_terms(state: &SequenceState) -> Vec<u64> {
    state.terms.iter().copied().filter(|t| t % 2 == 0).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FractalReport {
    /// Terms are checked over `1..=range`.
    pub range: u64,
    /// Every odd integer in range is a term.
    pub odd_complete: bool,
    /// Every even term is a multiple of 4.
    pub evens_divisible_by_4: bool,
    /// The even terms divided by 4 are exactly the terms up to `range / 4`.
    pub quarter_is_prefix: bool,
    /// Length of the prefix reproduced by the quartered even terms.
    pub prefix_len: usize,
    pub passed: bool,
}

/// Checks the self-similarity: drop the odd terms, divide the rest by 4,
/// and the sequence starts over.
pub fn fractal_check(state: &SequenceState) -> Result<FractalReport, SequenceError> {
    if state.len() < MIN_FRACTAL_TERMS {
        return Err(SequenceError::InsufficientTerms { needed: MIN_FRACTAL_TERMS, have: state.len() });
    }
    let range = state.last();
    let odd_complete = (1..=range).step_by(2).all(|x| state.contains(x));
    let evens = even_terms(state);
    let evens_divisible_by_4 = evens.iter().all(|t| t % 4 == 0);
    let quarter: Vec<u64> = evens.iter().map(|t| t / 4).collect();
    let expected: Vec<u64> = state.terms.iter().copied().take_while(|&t| t <= range / 4).collect();
    let quarter_is_prefix = evens_divisible_by_4 && quarter == expected;
    Ok(FractalReport {
        range,
        odd_complete,
        evens_divisible_by_4,
        quarter_is_prefix,
        prefix_len: quarter.len(),
        passed: odd_complete && evens_divisible_by_4 && quarter_is_prefix,
    })
}

/// Largest count for which every exponent fits in a `u64`.
pub const MAX_EXPONENTS: usize = 63;

/// `e_1 = 1`, then `e_{i+1} = 2 e_i + 1` for even `i` and `2 e_i - 1` for odd `i`.
pub fn exponents(count: usize) -> Result<Vec<u64>, SequenceError> {
    if count > MAX_EXPONENTS {
        return Err(SequenceError::TooManyExponents { max: MAX_EXPONENTS, asked: count });
    }
    let mut out = Vec::with_capacity(count);
    let mut e = 1u64;
    for i in 1..=count {
        out.push(e);
        e = if i % 2 == 0 { 2 * e + 1 } else { 2 * e - 1 };
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub order: usize,
    pub term: u64,
    pub coefficient: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenfunReport {
    pub num_exponents: usize,
    pub exponents: Vec<u64>,
    /// Orders `0..valid_orders` are unaffected by the omitted factors.
    pub valid_orders: usize,
    /// Cumulative product coefficients at orders `0..valid_orders`.
    pub coefficients: Vec<u64>,
    pub mismatches: Vec<Mismatch>,
}

/// Expands `prod_{i <= E} (1 + x^{e_i}) / (1 - x)` and compares the
/// coefficient of `x^j` with the term `n_{j+1}` for every order below
/// `e_{E+1}`, the first order an omitted factor could change.
pub fn genfun_check(state: &SequenceState, num_exponents: usize) -> Result<GenfunReport, SequenceError> {
    let e = exponents(num_exponents + 1)?;
    let bound = e[num_exponents] as usize;
    if state.len() < bound {
        return Err(SequenceError::InsufficientTerms { needed: bound, have: state.len() });
    }
    let mut poly = vec![0u64; bound];
    poly[0] = 1;
    for &ei in &e[..num_exponents] {
        let ei = ei as usize;
        for d in (0..bound.saturating_sub(ei)).rev() {
            poly[d + ei] += poly[d];
        }
    }
    let mut coefficients = Vec::with_capacity(bound);
    let mut acc = 0u64;
    for c in poly {
        acc += c;
        coefficients.push(acc);
    }
    let mismatches = coefficients
        .iter()
        .zip(state.terms())
        .enumerate()
        .filter(|(_, (c, t))| c != t)
        .map(|(order, (&coefficient, &term))| Mismatch { order, term, coefficient })
        .collect();
    Ok(GenfunReport {
        num_exponents,
        exponents: e[..num_exponents].to_vec(),
        valid_orders: bound,
        coefficients,
        mismatches,
    })
}

/// Lattice picture of sites `1..=sites`: `1` where the site is a term.
pub fn occupancy(state: &SequenceState, sites: u64) -> Result<String, SequenceError> {
    if sites > state.last() {
        return Err(SequenceError::InsufficientTerms { needed: (sites as usize * 2).div_ceil(3), have: state.len() });
    }
    Ok((1..=sites).map(|x| if state.contains(x) { '1' } else { '0' }).collect())
}
