//! Transformations between maximal partitions: single-value moves, the set
//! of all rearrangements of a fixed reference partition, and a check of
//! whether that set is closed into a group.
//!
//! A move relocates one value by a cyclic block displacement: the move
//! `v: a -> b` shifts `v` from whatever block `c` it occupies to block
//! `c + (b - a) mod K`. Starting from the reference, this is the plain
//! relocation `a -> b`; composed with itself it keeps going round the
//! levels. Composite colorings are relabeled into canonical block order
//! before they are compared with the set.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::coloring::{verify_coloring, Certificate, Coloring, Violation};
use crate::constraint::{extension_violation, Constraint};
use crate::solver::{self, collect_colorings, SearchParams, SolveError};

/// One relocated value. Blocks are numbered from 1, as in `S1..SK`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Move {
    pub value: u32,
    pub from: usize,
    pub to: usize,
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: S{} -> S{}", self.value, self.from, self.to)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transformation {
    pub constraint: Constraint,
    pub moves: Vec<Move>,
    pub source: Coloring,
    pub target: Coloring,
}

impl Transformation {
    /// The transformation taking `source` to `target`, one move per value
    /// whose block differs. Both colorings must have the same size.
    pub fn between(source: &Coloring, target: &Coloring, constraint: Constraint) -> Self {
        assert_eq!(source.n(), target.n(), "colorings of different size");
        let moves = (1..=source.n())
            .filter(|&v| source.block_of(v) != target.block_of(v))
            .map(|v| Move { value: v, from: source.block_of(v) + 1, to: target.block_of(v) + 1 })
            .collect();
        Transformation { constraint, moves, source: source.clone(), target: target.clone() }
    }

    /// Number of moved values.
    pub fn order(&self) -> usize {
        self.moves.len()
    }

    pub fn is_identity(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        json!({
            "order": self.order(),
            "moves": self.moves,
            "target": Certificate::new(self.constraint, self.target.clone()).to_json_value(),
        })
    }
}

impl fmt::Display for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.moves.is_empty() {
            return write!(f, "identity");
        }
        let moves: Vec<String> = self.moves.iter().map(Move::to_string).collect();
        write!(f, "order {}: {}", self.order(), moves.join(", "))
    }
}

/// Applies `moves` to `coloring` with displacement semantics.
pub fn apply_moves(coloring: &Coloring, moves: &[Move]) -> Coloring {
    let k = coloring.k();
    let mut out = coloring.clone();
    for m in moves {
        let shift = (m.to + k - m.from) % k;
        let current = out.block_of(m.value);
        out.set_block(m.value, (current + shift) % k);
    }
    out
}

/// Relabels blocks so their minima increase, empty blocks last.
pub fn canonicalize(coloring: &Coloring) -> Coloring {
    coloring.canonical()
}

/// Every valid relocation of a single value to another block, in order of
/// value and then target block.
pub fn first_order_moves(coloring: &Coloring, constraint: Constraint) -> Vec<Transformation> {
    let blocks = coloring.blocks();
    let mut out = Vec::new();
    for v in 1..=coloring.n() {
        let from = coloring.block_of(v);
        for (to, block) in blocks.iter().enumerate() {
            // Removing v keeps its own block sum-free, so only the receiving
            // block needs checking.
            if to == from || extension_violation(block, v, constraint).is_some() {
                continue;
            }
            let mut target = coloring.clone();
            target.set_block(v, to);
            out.push(Transformation {
                constraint,
                moves: vec![Move { value: v, from: from + 1, to: to + 1 }],
                source: coloring.clone(),
                target,
            });
        }
    }
    out
}

#[derive(Debug, Error)]
pub enum TransformError {
    #[error("{0}")]
    ScaleRefused(String),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

/// Limits for [`build_rset`].
#[derive(Clone, Copy, Debug)]
pub struct RsetOptions {
    /// Refuse sets with more elements than this.
    pub max_elements: usize,
    pub threads: usize,
}

impl Default for RsetOptions {
    fn default() -> Self {
        RsetOptions { max_elements: 1024, threads: 1 }
    }
}

/// All rearrangements of the reference maximal partition, one per
/// canonical maximal partition. Element 0 is the identity.
#[derive(Clone, Debug)]
pub struct RSet {
    pub k: usize,
    pub constraint: Constraint,
    pub reference: Coloring,
    pub elements: Vec<Transformation>,
}

impl RSet {
    pub fn cardinality(&self) -> usize {
        self.elements.len()
    }

    /// Index of the element whose target is `coloring` after relabeling.
    pub fn index_of(&self, coloring: &Coloring) -> Option<usize> {
        let c = coloring.canonical();
        self.elements.iter().position(|e| e.target == c)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        json!({
            "reference": Certificate::new(self.constraint, self.reference.clone()).to_json_value(),
            "cardinality": self.cardinality(),
            "elements": self.elements.iter().map(Transformation::to_json_value).collect::<Vec<_>>(),
        })
    }
}

fn rset_refusal(k: usize, constraint: Constraint) -> Option<String> {
    match constraint {
        Constraint::Classic if k >= 5 => Some(format!(
            "refusing to build the transformation set for S({k}): it needs every maximal \
             partition at n = S({k}), far beyond desk scale"
        )),
        Constraint::Weak if k >= 4 => Some(format!(
            "refusing to build the transformation set for WS({k}): it needs a proof of WS({k}) \
             and every maximal partition, beyond desk scale"
        )),
        Constraint::Modular(m) | Constraint::WeakModular(m) if m > 4 => {
            Some(format!("refusing to build the transformation set for modulus {m}: only moduli up to 4 are supported"))
        }
        _ => None,
    }
}

/// Solves for the Schur-type number, enumerates every canonical maximal
/// partition and anchors them to the lexicographically least one.
pub fn build_rset(k: usize, constraint: Constraint, options: RsetOptions) -> Result<RSet, TransformError> {
    if let Some(msg) = rset_refusal(k, constraint) {
        return Err(TransformError::ScaleRefused(msg));
    }
    let solved = solver::solve(&SearchParams::prove(k, constraint).with_threads(options.threads))?;
    let partitions = collect_colorings(k, solved.value, constraint, true, options.threads)?;
    rset_from_partitions(k, constraint, partitions, options.max_elements)
}

/// Builds the set from an explicit list of canonical maximal partitions in
/// lexicographic order; the first one becomes the reference.
pub fn rset_from_partitions(
    k: usize,
    constraint: Constraint,
    partitions: Vec<Coloring>,
    max_elements: usize,
) -> Result<RSet, TransformError> {
    if partitions.len() > max_elements {
        return Err(TransformError::ScaleRefused(format!(
            "{} maximal partitions exceed the limit of {max_elements}",
            partitions.len()
        )));
    }
    let reference = partitions.first().cloned().unwrap_or_else(|| Coloring::empty(k));
    let elements = partitions.iter().map(|p| Transformation::between(&reference, p, constraint)).collect();
    Ok(RSet { k, constraint, reference, elements })
}

/// Result of composing two transformations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Composite {
    Valid(Transformation),
    /// Some block of the final coloring is no longer sum-free.
    Invalid {
        coloring: Coloring,
        violation: Violation,
    },
}

/// Applies `a`'s moves to its source, then `b`'s moves, verifying after each
/// stage. A valid result is returned relative to `a`'s source with its
/// target in canonical block order.
pub fn compose(a: &Transformation, b: &Transformation) -> Composite {
    let constraint = a.constraint;
    let mut current = a.source.clone();
    for moves in [&a.moves, &b.moves] {
        current = apply_moves(&current, moves);
        let report = verify_coloring(&current, constraint);
        if let Some(&violation) = report.violations.first() {
            return Composite::Invalid { coloring: current, violation };
        }
    }
    Composite::Valid(Transformation::between(&a.source, &current.canonical(), constraint))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Structure {
    Trivial,
    Cyclic { order: usize },
    Abelian { order: usize },
    NonAbelian { order: usize },
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Structure::Trivial => write!(f, "trivial group"),
            Structure::Cyclic { order } => write!(f, "cyclic group Z{order}"),
            Structure::Abelian { order } => write!(f, "non-cyclic abelian group of order {order}"),
            Structure::NonAbelian { order } => write!(f, "non-abelian group of order {order}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosureFailure {
    pub left: usize,
    pub right: usize,
    /// First violated triple of the composite coloring.
    pub violation: Violation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupReport {
    pub is_group: bool,
    pub cardinality: usize,
    pub closure_failures: Vec<ClosureFailure>,
    /// Elements with no two-sided inverse.
    pub missing_inverses: Vec<usize>,
    pub associative: bool,
    pub identified_structure: Option<Structure>,
    /// `table[i][j]` is the index of `compose(e_i, e_j)`, or `None` when
    /// the composite is invalid.
    pub table: Vec<Vec<Option<usize>>>,
}

/// Composes every ordered pair and checks the group axioms.
pub fn check_group(rset: &RSet) -> GroupReport {
    let n = rset.cardinality();
    let index: HashMap<&Coloring, usize> = rset.elements.iter().enumerate().map(|(i, e)| (&e.target, i)).collect();
    let mut table = vec![vec![None; n]; n];
    let mut closure_failures = Vec::new();
    for (i, a) in rset.elements.iter().enumerate() {
        for (j, b) in rset.elements.iter().enumerate() {
            match compose(a, b) {
                Composite::Valid(t) => {
                    // Every valid composite is a canonical maximal partition.
                    table[i][j] = Some(index[&t.target]);
                }
                Composite::Invalid { violation, .. } => {
                    closure_failures.push(ClosureFailure { left: i, right: j, violation });
                }
            }
        }
    }
    let identity = rset.elements.iter().position(Transformation::is_identity);
    let missing_inverses: Vec<usize> = (0..n)
        .filter(|&i| !(0..n).any(|j| identity.is_some() && table[i][j] == identity && table[j][i] == identity))
        .collect();
    let closed = closure_failures.is_empty();
    let associative = closed
        && (0..n).all(|a| {
            (0..n).all(|b| {
                let ab = table[a][b].unwrap();
                (0..n).all(|c| table[ab][c] == table[a][table[b][c].unwrap()])
            })
        });
    let is_group = closed && associative && missing_inverses.is_empty() && identity.is_some();
    let identified_structure = is_group.then(|| identify(&table, identity.unwrap()));
    GroupReport {
        is_group,
        cardinality: n,
        closure_failures,
        missing_inverses,
        associative,
        identified_structure,
        table,
    }
}

fn identify(table: &[Vec<Option<usize>>], identity: usize) -> Structure {
    let n = table.len();
    if n == 1 {
        return Structure::Trivial;
    }
    let element_order = |g: usize| {
        let mut x = g;
        let mut k = 1;
        while x != identity {
            x = table[x][g].unwrap();
            k += 1;
        }
        k
    };
    if (0..n).any(|g| element_order(g) == n) {
        return Structure::Cyclic { order: n };
    }
    let abelian = (0..n).all(|a| (0..n).all(|b| table[a][b] == table[b][a]));
    if abelian {
        Structure::Abelian { order: n }
    } else {
        Structure::NonAbelian { order: n }
    }
}

/// Cayley table with elements labeled `e0..`, `-` for invalid composites.
pub fn render_table(report: &GroupReport) -> String {
    let n = report.cardinality;
    let width = format!("e{}", n.saturating_sub(1)).len().max(1);
    let mut out = format!("{:>width$} |", "");
    for j in 0..n {
        out.push_str(&format!(" {:>width$}", format!("e{j}")));
    }
    out.push('\n');
    out.push_str(&"-".repeat(out.len() - 1));
    out.push('\n');
    for (i, row) in report.table.iter().enumerate() {
        out.push_str(&format!("{:>width$} |", format!("e{i}")));
        for cell in row {
            let s = cell.map_or("-".to_string(), |c| format!("e{c}"));
            out.push_str(&format!(" {s:>width$}"));
        }
        out.push('\n');
    }
    out
}
