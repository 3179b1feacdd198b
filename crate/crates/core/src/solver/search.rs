//! Depth-first search over colorings of `1, 2, 3, ...` in increasing order.

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::Instant;

use rayon::prelude::*;

use super::rules::BlockRule;

/// A partial coloring of `1..=len` together with its incremental rule state.
#[derive(Clone)]
pub(crate) struct Walker<R: BlockRule> {
    rule: R,
    k: usize,
    canonical: bool,
    assignment: Vec<u8>,
    sizes: Vec<u32>,
    used: usize,
}

impl<R: BlockRule> Walker<R> {
    pub(crate) fn new(rule: R, k: usize, canonical: bool) -> Self {
        Walker { rule, k, canonical, assignment: Vec::new(), sizes: vec![0; k], used: 0 }
    }

    pub(crate) fn len(&self) -> usize {
        self.assignment.len()
    }

    pub(crate) fn assignment(&self) -> &[u8] {
        &self.assignment
    }

    pub(crate) fn capacity(&self) -> u32 {
        self.rule.capacity()
    }

    /// Upper bound (exclusive) on the blocks the next value may enter.
    /// Under symmetry breaking only the first empty block may be opened.
    #[inline]
    pub(crate) fn limit(&self) -> usize {
        if self.canonical {
            (self.used + 1).min(self.k)
        } else {
            self.k
        }
    }

    #[inline]
    pub(crate) fn admits_next(&self, block: usize) -> bool {
        self.rule.admits(block, self.assignment.len() as u32 + 1)
    }

    #[inline]
    pub(crate) fn push(&mut self, block: usize) {
        let v = self.assignment.len() as u32 + 1;
        self.rule.place(block, v);
        self.assignment.push(block as u8);
        if self.sizes[block] == 0 {
            self.used += 1;
        }
        self.sizes[block] += 1;
    }

    #[inline]
    pub(crate) fn pop(&mut self) {
        let block = self.assignment.pop().expect("pop on empty walker") as usize;
        let v = self.assignment.len() as u32 + 1;
        self.rule.unplace(block, v);
        self.sizes[block] -= 1;
        if self.sizes[block] == 0 {
            self.used -= 1;
        }
    }

    pub(crate) fn state_key(&self) -> Option<Vec<u8>> {
        self.rule.state_key(self.assignment.len() as u32 + 1)
    }

    /// True if no extension of the current prefix can reach value `to`.
    #[inline]
    pub(crate) fn doomed(&self, to: u32) -> bool {
        self.rule.blocked_between(self.assignment.len() as u32 + 1, to)
    }

    /// Replays `prefix`; fails if some value is not admitted where it sits
    /// or the prefix breaks the symmetry rule.
    pub(crate) fn extend_from(&mut self, prefix: &[u8]) -> Result<(), usize> {
        for (i, &b) in prefix.iter().enumerate() {
            let b = b as usize;
            if b >= self.limit() || !self.admits_next(b) {
                return Err(i);
            }
            self.push(b);
        }
        Ok(())
    }
}

/// Resource limits shared by all workers of one search.
pub(crate) struct Limits {
    pub(crate) deadline: Option<Instant>,
    pub(crate) node_limit: Option<u64>,
    pub(crate) target: Option<u32>,
    nodes: AtomicU64,
    stop: AtomicBool,
    budget_hit: AtomicBool,
}

impl Limits {
    pub(crate) fn new(deadline: Option<Instant>, node_limit: Option<u64>, target: Option<u32>) -> Self {
        Limits {
            deadline,
            node_limit,
            target,
            nodes: AtomicU64::new(0),
            stop: AtomicBool::new(false),
            budget_hit: AtomicBool::new(false),
        }
    }

    pub(crate) fn budget_hit(&self) -> bool {
        self.budget_hit.load(Ordering::Relaxed)
    }

    pub(crate) fn nodes(&self) -> u64 {
        self.nodes.load(Ordering::Relaxed)
    }

    pub(crate) fn stopped(&self) -> bool {
        self.stop.load(Ordering::Relaxed)
    }

    fn halt(&self, budget: bool) {
        if budget {
            self.budget_hit.store(true, Ordering::Relaxed);
        }
        self.stop.store(true, Ordering::Relaxed);
    }

    /// Publishes `batch` nodes and checks the budget.
    fn flush(&self, batch: u64) -> bool {
        let total = self.nodes.fetch_add(batch, Ordering::Relaxed) + batch;
        if self.node_limit.is_some_and(|limit| total >= limit) || self.deadline.is_some_and(|d| Instant::now() >= d) {
            self.halt(true);
        }
        self.stopped()
    }
}

const FLUSH_EVERY: u64 = 1 << 12;

/// Transposition table entries kept per worker.
const MEMO_CAPACITY: usize = 1 << 22;

/// Outcome of exploring one subtree.
#[derive(Clone, Debug, Default)]
pub(crate) struct Outcome {
    pub(crate) best: Vec<u8>,
    pub(crate) capacity_hit: bool,
}

impl Outcome {
    /// Keeps the deeper of the two; ties go to `self` (earlier in order).
    pub(crate) fn merge(mut self, other: Outcome) -> Outcome {
        if other.best.len() > self.best.len() {
            self.best = other.best;
        }
        self.capacity_hit |= other.capacity_hit;
        self
    }
}

struct Dfs<'a, R: BlockRule> {
    walker: Walker<R>,
    limits: &'a Limits,
    pending: u64,
    outcome: Outcome,
    /// Stop descending at this depth and report prefixes instead.
    split_at: Option<usize>,
    roots: Vec<Vec<u8>>,
    /// For rules with state keys: an upper bound on how many more values
    /// a fully explored state can take.
    memo: HashMap<Vec<u8>, u32>,
}

impl<R: BlockRule> Dfs<'_, R> {
    fn visit(&mut self) -> bool {
        self.pending += 1;
        if self.pending == FLUSH_EVERY {
            self.pending = 0;
            if self.limits.flush(FLUSH_EVERY) {
                return false;
            }
        }
        let depth = self.walker.len();
        if depth > self.outcome.best.len() {
            self.outcome.best = self.walker.assignment().to_vec();
            if self.limits.target.is_some_and(|t| depth as u32 >= t) {
                self.limits.halt(false);
                return false;
            }
        }
        // Only a subtree that can go deeper than the best so far matters.
        let goal = self.limits.target.unwrap_or(0).max(self.outcome.best.len() as u32 + 1);
        if self.walker.doomed(goal) {
            return true;
        }
        if self.split_at == Some(depth) {
            self.roots.push(self.walker.assignment().to_vec());
            return true;
        }
        if depth as u32 + 1 > self.walker.capacity() {
            self.outcome.capacity_hit = true;
            return true;
        }
        // Above the split depth children are only recorded, not explored.
        let key = if self.split_at.is_none() { self.walker.state_key() } else { None };
        if let Some(bound) = key.as_ref().and_then(|k| self.memo.get(k)) {
            if depth as u32 + bound < goal {
                return true;
            }
        }
        for b in 0..self.walker.limit() {
            if self.walker.admits_next(b) {
                self.walker.push(b);
                let go_on = self.visit();
                self.walker.pop();
                if !go_on {
                    return false;
                }
            }
        }
        // Every cut below used a goal no larger than the current one, so no
        // extension of this state goes past the current goal minus one.
        if let Some(key) = key {
            if self.memo.len() < MEMO_CAPACITY {
                let goal = self.limits.target.unwrap_or(0).max(self.outcome.best.len() as u32 + 1);
                let bound = (goal - 1).saturating_sub(depth as u32);
                let entry = self.memo.entry(key).or_insert(bound);
                *entry = (*entry).min(bound);
            }
        }
        true
    }

    fn finish(self) -> (Outcome, Vec<Vec<u8>>) {
        self.limits.flush(self.pending);
        (self.outcome, self.roots)
    }
}

/// Explores every extension of `start`, splitting the tree at `split_depth`
/// values into independent subtrees run on `threads` workers. The result is
/// the first deepest coloring in lexicographic order whatever the thread
/// count, unless the budget or target stops the search early.
pub(crate) fn explore<R: BlockRule + Sync>(
    start: Walker<R>,
    limits: &Limits,
    split_depth: usize,
    threads: usize,
) -> Outcome {
    let split_at = (start.len() + split_depth).max(start.len());
    let mut top = Dfs {
        walker: start.clone(),
        limits,
        pending: 0,
        outcome: Outcome::default(),
        split_at: Some(split_at),
        roots: Vec::new(),
        memo: HashMap::new(),
    };
    top.outcome.best = start.assignment().to_vec();
    top.visit();
    let (head, roots) = top.finish();

    let run_root = |root: &Vec<u8>| -> Outcome {
        if limits.stopped() {
            return Outcome::default();
        }
        let mut walker = start.clone();
        walker.extend_from(&root[start.len()..]).expect("roots come from the same walker");
        let mut dfs = Dfs {
            walker,
            limits,
            pending: 0,
            outcome: Outcome { best: root.clone(), capacity_hit: false },
            split_at: None,
            roots: Vec::new(),
            memo: HashMap::new(),
        };
        dfs.visit();
        dfs.finish().0
    };

    let outcomes: Vec<Outcome> = if threads <= 1 || roots.len() <= 1 {
        roots.iter().map(run_root).collect()
    } else {
        match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
            Ok(pool) => pool.install(|| roots.par_iter().map(run_root).collect()),
            Err(_) => roots.iter().map(run_root).collect(),
        }
    };
    outcomes.into_iter().fold(head, Outcome::merge)
}

/// Iterator over all completions of a walker's prefix to exactly `n` values,
/// in lexicographic order of the assignment vector.
pub(crate) struct Completions<R: BlockRule> {
    walker: Walker<R>,
    n: usize,
    base: usize,
    next: Vec<usize>,
    fresh: bool,
    done: bool,
}

impl<R: BlockRule> Completions<R> {
    pub(crate) fn new(walker: Walker<R>, n: usize) -> Self {
        let base = walker.len();
        Completions { next: vec![0; n + 1], walker, n, base, fresh: true, done: base > n }
    }
}

impl<R: BlockRule> Iterator for Completions<R> {
    type Item = Vec<u8>;

    fn next(&mut self) -> Option<Vec<u8>> {
        while !self.done {
            let depth = self.walker.len();
            if depth == self.n && self.fresh {
                self.fresh = false;
                return Some(self.walker.assignment().to_vec());
            }
            if depth < self.n && !(self.fresh && self.next[depth] == 0 && self.walker.doomed(self.n as u32)) {
                let limit = self.walker.limit();
                let mut b = self.next[depth];
                while b < limit && !self.walker.admits_next(b) {
                    b += 1;
                }
                if b < limit {
                    self.next[depth] = b + 1;
                    self.walker.push(b);
                    self.next[depth + 1] = 0;
                    self.fresh = true;
                    continue;
                }
            }
            if depth == self.base {
                self.done = true;
            } else {
                self.walker.pop();
            }
        }
        None
    }
}

/// All prefixes of length `depth` (or the full colorings, if `n` is smaller).
pub(crate) fn prefixes<R: BlockRule>(walker: Walker<R>, depth: usize) -> Vec<Vec<u8>> {
    Completions::new(walker, depth).collect()
}
