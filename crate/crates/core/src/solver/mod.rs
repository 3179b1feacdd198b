//! Exact search for Schur-type numbers `S(K)`, `WS(K)`, `S_m(K)`, `WS_m(K)`,
//! enumeration of valid colorings, and DIMACS export/import.
//!
//! The search places `1, 2, 3, ...` in order. Value 1 is pinned to block 0
//! and a value may open block `b + 1` only after block `b` is used, which
//! removes the `K!` relabelings. In Prove mode the whole tree is exhausted,
//! so the deepest node reached is the exact number and no coloring of
//! `1..=value + 1` exists.

mod cnf;
mod rules;
mod search;

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bits::{Bits, Wide};
use crate::coloring::{verify_coloring, Coloring, VerifyReport, MAX_BLOCKS};
use crate::constraint::{extension_violation, Constraint};

pub use cnf::{export_cnf, import_sat_assignment, CnfDocument, CnfError, DecodeError};
pub(crate) use rules::{AnyRule, BlockRule};
use rules::{ResidueRule, ShiftRule};
use search::{explore, prefixes, Completions, Limits, Outcome, Walker};

/// Default number of leading values fixed when splitting work.
pub const DEFAULT_SPLIT_DEPTH: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Exhaust the tree and certify maximality.
    Prove,
    /// Report the best certificate found within the budget.
    LowerBound,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Budget {
    pub wall: Option<Duration>,
    pub nodes: Option<u64>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }

    pub fn wall(limit: Duration) -> Self {
        Budget { wall: Some(limit), nodes: None }
    }

    pub fn nodes(limit: u64) -> Self {
        Budget { wall: None, nodes: Some(limit) }
    }

    pub fn is_limited(&self) -> bool {
        self.wall.is_some() || self.nodes.is_some()
    }
}

#[derive(Clone, Debug)]
pub struct SearchParams {
    pub k: usize,
    pub constraint: Constraint,
    pub mode: Mode,
    pub budget: Budget,
    pub start_hint: Option<Coloring>,
    /// LowerBound mode stops as soon as a certificate of this size exists.
    pub target: Option<u32>,
    pub threads: usize,
    pub split_depth: usize,
    /// Lifts the refusal of Prove runs known to be far beyond desk scale.
    pub allow_long: bool,
}

impl SearchParams {
    pub fn new(k: usize, constraint: Constraint, mode: Mode) -> Self {
        SearchParams {
            k,
            constraint,
            mode,
            budget: Budget::unlimited(),
            start_hint: None,
            target: None,
            threads: 1,
            split_depth: DEFAULT_SPLIT_DEPTH,
            allow_long: false,
        }
    }

    pub fn prove(k: usize, constraint: Constraint) -> Self {
        Self::new(k, constraint, Mode::Prove)
    }

    pub fn lower_bound(k: usize, constraint: Constraint) -> Self {
        Self::new(k, constraint, Mode::LowerBound)
    }

    pub fn with_budget(mut self, budget: Budget) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads.max(1);
        self
    }

    pub fn with_hint(mut self, hint: Coloring) -> Self {
        self.start_hint = Some(hint);
        self
    }

    pub fn with_target(mut self, target: u32) -> Self {
        self.target = Some(target);
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub nodes: u64,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult {
    pub value: u32,
    pub proven_maximal: bool,
    pub certificate: Coloring,
    pub stats: SearchStats,
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("budget exhausted before the search space was covered; best value so far is {}", .0.value)]
    BudgetExhausted(Box<SearchResult>),
    #[error("{0}")]
    ScaleRefused(String),
    #[error("invalid search parameters: {0}")]
    InvalidParams(String),
    #[error("start hint is not a valid coloring: {0:?}")]
    InvalidHint(VerifyReport),
    #[error("values beyond {0} cannot be represented")]
    CapacityExceeded(u32),
}

/// Blocks that `v` may join without breaking sum-freeness, zero-based.
pub fn admissible_blocks(partial: &Coloring, v: u32, constraint: Constraint) -> Vec<usize> {
    partial
        .blocks()
        .iter()
        .enumerate()
        .filter(|(_, block)| extension_violation(block, v, constraint).is_none())
        .map(|(b, _)| b)
        .collect()
}

/// Instances refused in Prove mode unless `allow_long` is set.
fn scale_refusal(k: usize, constraint: Constraint) -> Option<String> {
    match constraint {
        Constraint::Classic if k >= 5 => Some(format!(
            "refusing to prove S({k}): the exhaustive search is far beyond desk scale \
             (S(5) alone needed petabytes); use --lower-bound with a hint instead"
        )),
        Constraint::Weak if k >= 5 => Some(format!(
            "refusing to prove WS({k}): the exhaustive search is far beyond desk scale; \
             use --lower-bound instead"
        )),
        _ => None,
    }
}

pub fn solve(params: &SearchParams) -> Result<SearchResult, SolveError> {
    let started = Instant::now();
    let k = params.k;
    if k == 0 || k > MAX_BLOCKS {
        return Err(SolveError::InvalidParams(format!("K must be in 1..={MAX_BLOCKS}, got {k}")));
    }
    if params.budget.wall == Some(Duration::ZERO) || params.budget.nodes == Some(0) {
        return Err(SolveError::InvalidParams("budget must be positive".into()));
    }
    if params.mode == Mode::Prove && !params.allow_long {
        if let Some(msg) = scale_refusal(k, params.constraint) {
            return Err(SolveError::ScaleRefused(msg));
        }
    }
    let hint = match &params.start_hint {
        Some(h) => {
            let report = verify_coloring(h, params.constraint);
            if !report.valid || h.k() != k {
                return Err(SolveError::InvalidHint(report));
            }
            Some(h.canonical())
        }
        None => None,
    };

    let limits = Limits::new(
        params.budget.wall.map(|w| started + w),
        params.budget.nodes,
        if params.mode == Mode::LowerBound { params.target } else { None },
    );

    let mut best: Vec<u8> = hint.as_ref().map(|h| h.assignment().to_vec()).unwrap_or_default();
    // Extend the hint first: its prefix is a promising region of the tree.
    if let (Mode::LowerBound, Some(h)) = (params.mode, &hint) {
        let outcome = run_widening(params, &limits, h.assignment())?;
        if outcome.best.len() > best.len() {
            best = outcome.best;
        }
    }
    let done_early =
        limits.budget_hit() || params.target.is_some_and(|t| best.len() as u32 >= t) && params.mode == Mode::LowerBound;
    if !done_early {
        let outcome = run_widening(params, &limits, &[])?;
        if outcome.best.len() > best.len() {
            best = outcome.best;
        }
    }

    let certificate = Coloring::new(k, best).expect("search produces in-range blocks");
    debug_assert!(verify_coloring(&certificate, params.constraint).valid);
    let result = SearchResult {
        value: certificate.n(),
        proven_maximal: params.mode == Mode::Prove && !limits.budget_hit(),
        certificate,
        stats: SearchStats { nodes: limits.nodes(), elapsed: started.elapsed() },
    };
    if params.mode == Mode::Prove && limits.budget_hit() {
        return Err(SolveError::BudgetExhausted(Box::new(result)));
    }
    Ok(result)
}

/// Runs the search with the narrowest bit width, widening when the tree
/// reaches the representable limit.
fn run_widening(params: &SearchParams, limits: &Limits, prefix: &[u8]) -> Result<Outcome, SolveError> {
    let k = params.k;
    let weak = params.constraint.is_weak();
    if let Some(m) = params.constraint.modulus() {
        return run_with(ResidueRule::new(k, m, weak), params, limits, prefix);
    }
    let mut best = Outcome::default();
    if prefix.len() < u64::CAPACITY as usize {
        let outcome = run_with(ShiftRule::<u64>::new(k, weak), params, limits, prefix)?;
        if !outcome.capacity_hit || limits.stopped() {
            return Ok(outcome);
        }
        best = outcome;
    }
    if prefix.len() < u128::CAPACITY as usize {
        let outcome = run_with(ShiftRule::<u128>::new(k, weak), params, limits, prefix)?;
        if !outcome.capacity_hit || limits.stopped() {
            return Ok(best.merge(outcome));
        }
        best = best.merge(outcome);
    }
    let outcome = best.merge(run_with(ShiftRule::<Wide>::new(k, weak), params, limits, prefix)?);
    if outcome.capacity_hit && params.mode == Mode::Prove && !limits.stopped() {
        return Err(SolveError::CapacityExceeded(Wide::CAPACITY));
    }
    Ok(outcome)
}

fn run_with<R: BlockRule + Sync>(
    rule: R,
    params: &SearchParams,
    limits: &Limits,
    prefix: &[u8],
) -> Result<Outcome, SolveError> {
    let mut walker = Walker::new(rule, params.k, true);
    walker.extend_from(prefix).map_err(|i| SolveError::InvalidParams(format!("hint rejected at value {}", i + 1)))?;
    Ok(explore(walker, limits, params.split_depth, params.threads))
}

/// Streams every valid coloring of `1..=n` into `k` blocks in lexicographic
/// order of the assignment vector. With `canonical`, only colorings whose
/// blocks are ordered by minimum element (empty blocks last) are produced.
pub fn enumerate_colorings(
    k: usize,
    n: u32,
    constraint: Constraint,
    canonical: bool,
) -> Result<impl Iterator<Item = Coloring>, SolveError> {
    let rule = rule_for(k, n, constraint)?;
    let walker = Walker::new(rule, k, canonical);
    Ok(Completions::new(walker, n as usize).map(move |a| Coloring::new(k, a).expect("in range")))
}

/// Collects `enumerate_colorings` using `threads` workers; the order is the
/// same as the sequential stream.
pub fn collect_colorings(
    k: usize,
    n: u32,
    constraint: Constraint,
    canonical: bool,
    threads: usize,
) -> Result<Vec<Coloring>, SolveError> {
    if threads <= 1 {
        return Ok(enumerate_colorings(k, n, constraint, canonical)?.collect());
    }
    let rule = rule_for(k, n, constraint)?;
    let walker = Walker::new(rule, k, canonical);
    let depth = (n as usize).min(DEFAULT_SPLIT_DEPTH);
    let roots = prefixes(walker.clone(), depth);
    let expand = |root: &Vec<u8>| -> Vec<Coloring> {
        let mut w = walker.clone();
        w.extend_from(root).expect("root from same walker");
        Completions::new(w, n as usize).map(|a| Coloring::new(k, a).expect("in range")).collect()
    };
    let chunks: Vec<Vec<Coloring>> = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(|| roots.par_iter().map(expand).collect()),
        Err(_) => roots.iter().map(expand).collect(),
    };
    Ok(chunks.into_iter().flatten().collect())
}

/// Number of labeled colorings represented by one canonical coloring:
/// the injective labelings of its nonempty blocks.
pub fn labelings(canonical: &Coloring) -> u64 {
    let k = canonical.k() as u64;
    let used = canonical.used_blocks() as u64;
    (0..used).map(|i| k - i).product()
}

fn rule_for(k: usize, n: u32, constraint: Constraint) -> Result<AnyRule, SolveError> {
    if k == 0 || k > MAX_BLOCKS {
        return Err(SolveError::InvalidParams(format!("K must be in 1..={MAX_BLOCKS}, got {k}")));
    }
    AnyRule::for_size(k, n, constraint).ok_or(SolveError::CapacityExceeded(Wide::CAPACITY))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn col(k: usize, blocks: &[&[u32]]) -> Coloring {
        Coloring::from_blocks(k, blocks).unwrap()
    }

    #[test]
    fn admissible_blocks_examples() {
        let c = Constraint::Classic;
        let p = Coloring::new(2, vec![0]).unwrap();
        assert_eq!(admissible_blocks(&p, 2, c), vec![1]);
        assert_eq!(admissible_blocks(&col(2, &[&[1], &[2]]), 3, c), vec![0, 1]);
        assert_eq!(admissible_blocks(&col(2, &[&[1, 4], &[2, 3]]), 5, c), Vec::<usize>::new());
    }

    #[test]
    fn small_schur_numbers() {
        let r = solve(&SearchParams::prove(1, Constraint::Classic)).unwrap();
        assert_eq!((r.value, r.proven_maximal), (1, true));
        let r = solve(&SearchParams::prove(2, Constraint::Classic)).unwrap();
        assert_eq!(r.value, 4);
        assert_eq!(r.certificate, col(2, &[&[1, 4], &[2, 3]]));
        let r = solve(&SearchParams::prove(3, Constraint::Classic)).unwrap();
        assert_eq!(r.value, 13);
        assert!(verify_coloring(&r.certificate, Constraint::Classic).valid);
    }

    #[test]
    fn weak_and_modular_examples() {
        assert_eq!(solve(&SearchParams::prove(2, Constraint::Weak)).unwrap().value, 8);
        assert_eq!(solve(&SearchParams::prove(3, Constraint::Modular(3))).unwrap().value, 2);
        assert_eq!(solve(&SearchParams::prove(3, Constraint::WeakModular(3))).unwrap().value, 8);
        let r = solve(&SearchParams::prove(4, Constraint::Modular(1))).unwrap();
        assert_eq!((r.value, r.certificate.n()), (0, 0));
    }

    #[test]
    fn refuses_five_colour_proof() {
        assert!(matches!(solve(&SearchParams::prove(5, Constraint::Classic)), Err(SolveError::ScaleRefused(_))));
    }

    #[test]
    fn budget_exhaustion_reports_best_so_far() {
        let params = SearchParams::prove(3, Constraint::Classic).with_budget(Budget::nodes(10));
        match solve(&params) {
            Err(SolveError::BudgetExhausted(best)) => {
                assert!(!best.proven_maximal);
                assert!(verify_coloring(&best.certificate, Constraint::Classic).valid);
            }
            other => panic!("expected budget exhaustion, got {other:?}"),
        }
    }

    #[test]
    fn lower_bound_with_hint_and_target() {
        let hint = col(3, &[&[1, 4, 7, 10, 13], &[2, 3, 11, 12], &[5, 6, 8, 9]]);
        let params = SearchParams::lower_bound(3, Constraint::Classic).with_hint(hint.clone());
        let r = solve(&params).unwrap();
        assert_eq!(r.value, 13);
        assert!(!r.proven_maximal);

        let params = SearchParams::lower_bound(3, Constraint::Classic).with_target(10);
        let r = solve(&params).unwrap();
        assert!(r.value >= 10);

        let bad = col(3, &[&[1, 2]]);
        let params = SearchParams::lower_bound(3, Constraint::Classic).with_hint(bad);
        assert!(matches!(solve(&params), Err(SolveError::InvalidHint(_))));
    }

    #[test]
    fn thread_count_does_not_change_outcome() {
        for c in [Constraint::Classic, Constraint::Weak, Constraint::WeakModular(3)] {
            let one = solve(&SearchParams::prove(3, c).with_threads(1)).unwrap();
            let four = solve(&SearchParams::prove(3, c).with_threads(4)).unwrap();
            assert_eq!(one.value, four.value);
            assert_eq!(one.certificate, four.certificate);
            assert_eq!(one.proven_maximal, four.proven_maximal);
        }
    }

    #[test]
    fn enumeration_examples() {
        let c = Constraint::Classic;
        let s3: Vec<_> = enumerate_colorings(3, 13, c, true).unwrap().collect();
        assert_eq!(s3.len(), 3);
        assert_eq!(s3[0], col(3, &[&[1, 4, 7, 10, 13], &[2, 3, 11, 12], &[5, 6, 8, 9]]));
        assert_eq!(s3[1], col(3, &[&[1, 4, 10, 13], &[2, 3, 7, 11, 12], &[5, 6, 8, 9]]));
        assert_eq!(s3[2], col(3, &[&[1, 4, 10, 13], &[2, 3, 11, 12], &[5, 6, 7, 8, 9]]));
        let s2: Vec<_> = enumerate_colorings(2, 4, c, true).unwrap().collect();
        assert_eq!(s2, vec![col(2, &[&[1, 4], &[2, 3]])]);
        let s1: Vec<_> = enumerate_colorings(1, 1, c, true).unwrap().collect();
        assert_eq!(s1, vec![col(1, &[&[1]])]);
        assert_eq!(enumerate_colorings(2, 5, c, true).unwrap().count(), 0);
        assert_eq!(enumerate_colorings(3, 13, c, false).unwrap().count(), 18);
    }

    #[test]
    fn parallel_collection_matches_stream() {
        let c = Constraint::Weak;
        let seq: Vec<_> = enumerate_colorings(3, 14, c, true).unwrap().collect();
        let par = collect_colorings(3, 14, c, true, 3).unwrap();
        assert_eq!(seq, par);
        assert!(!seq.is_empty());
    }
}
