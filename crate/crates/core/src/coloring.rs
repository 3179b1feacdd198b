//! Colorings of `1..=n` into `K` blocks, certificate verification, and the
//! certificate JSON format.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constraint::{extension_violation, Block, Constraint, ConstraintError, ConstraintKind, Triple};

/// Largest supported number of blocks.
pub const MAX_BLOCKS: usize = u8::MAX as usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ColoringError {
    #[error("number of blocks must be between 1 and {MAX_BLOCKS}, got {0}")]
    BlockCount(usize),
    #[error("value {value} is assigned to block {block}, but only {k} blocks exist")]
    BlockOutOfRange { value: u32, block: usize, k: usize },
    #[error("{got} blocks given for K = {k}")]
    TooManyBlocks { got: usize, k: usize },
    #[error("value {0} appears in more than one block")]
    Duplicate(u32),
    #[error("value {0} is missing from the partition of 1..={1}")]
    Missing(u32, u32),
    #[error("value {0} lies outside 1..={1}")]
    OutOfRange(u32, u32),
}

/// An assignment of every integer in `1..=n` to one of `k` blocks.
///
/// Block indices are zero-based in the API; text renderings label them
/// `S1..SK`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coloring {
    k: usize,
    assignment: Vec<u8>,
}

impl Coloring {
    /// `assignment[v - 1]` is the block of `v`.
    pub fn new(k: usize, assignment: Vec<u8>) -> Result<Self, ColoringError> {
        if k == 0 || k > MAX_BLOCKS {
            return Err(ColoringError::BlockCount(k));
        }
        if let Some((i, &b)) = assignment.iter().enumerate().find(|(_, &b)| b as usize >= k) {
            return Err(ColoringError::BlockOutOfRange { value: i as u32 + 1, block: b as usize, k });
        }
        Ok(Coloring { k, assignment })
    }

    /// Builds a coloring from explicit blocks whose union must be `1..=n`
    /// for `n` the largest value present. Missing trailing blocks are empty.
    pub fn from_blocks<B: AsRef<[u32]>>(k: usize, blocks: &[B]) -> Result<Self, ColoringError> {
        if k == 0 || k > MAX_BLOCKS {
            return Err(ColoringError::BlockCount(k));
        }
        if blocks.len() > k {
            return Err(ColoringError::TooManyBlocks { got: blocks.len(), k });
        }
        let n = blocks.iter().flat_map(|b| b.as_ref().iter().copied()).max().unwrap_or(0);
        let mut assignment: Vec<Option<u8>> = vec![None; n as usize];
        for (b, values) in blocks.iter().enumerate() {
            for &v in values.as_ref() {
                if v == 0 {
                    return Err(ColoringError::OutOfRange(v, n));
                }
                let slot = &mut assignment[v as usize - 1];
                if slot.is_some() {
                    return Err(ColoringError::Duplicate(v));
                }
                *slot = Some(b as u8);
            }
        }
        let assignment = assignment
            .into_iter()
            .enumerate()
            .map(|(i, b)| b.ok_or(ColoringError::Missing(i as u32 + 1, n)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Coloring { k, assignment })
    }

    pub fn empty(k: usize) -> Self {
        Coloring { k, assignment: Vec::new() }
    }

    pub fn n(&self) -> u32 {
        self.assignment.len() as u32
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn assignment(&self) -> &[u8] {
        &self.assignment
    }

    /// Block of `v`, for `v` in `1..=n`.
    pub fn block_of(&self, v: u32) -> usize {
        self.assignment[v as usize - 1] as usize
    }

    pub(crate) fn set_block(&mut self, v: u32, block: usize) {
        self.assignment[v as usize - 1] = block as u8;
    }

    pub fn block_values(&self, block: usize) -> Vec<u32> {
        self.assignment.iter().enumerate().filter(|(_, &b)| b as usize == block).map(|(i, _)| i as u32 + 1).collect()
    }

    pub fn block(&self, block: usize) -> Block {
        Block::from_sorted(self.block_values(block))
    }

    /// All `k` blocks in index order, including empty ones.
    pub fn blocks(&self) -> Vec<Block> {
        let mut out = vec![Vec::new(); self.k];
        for (i, &b) in self.assignment.iter().enumerate() {
            out[b as usize].push(i as u32 + 1);
        }
        out.into_iter().map(Block::from_sorted).collect()
    }

    /// Number of blocks holding at least one value.
    pub fn used_blocks(&self) -> usize {
        let mut seen = vec![false; self.k];
        for &b in &self.assignment {
            seen[b as usize] = true;
        }
        seen.into_iter().filter(|&s| s).count()
    }

    /// Relabels blocks so nonempty blocks appear in order of their minimum
    /// element and empty blocks come last.
    pub fn canonical(&self) -> Coloring {
        let mut relabel = vec![u8::MAX; self.k];
        let mut next = 0u8;
        let assignment = self
            .assignment
            .iter()
            .map(|&b| {
                let slot = &mut relabel[b as usize];
                if *slot == u8::MAX {
                    *slot = next;
                    next += 1;
                }
                *slot
            })
            .collect();
        Coloring { k: self.k, assignment }
    }

    pub fn is_canonical(&self) -> bool {
        let mut next = 0u8;
        for &b in &self.assignment {
            if b > next {
                return false;
            }
            if b == next {
                next += 1;
            }
        }
        true
    }

    /// The restriction of this coloring to `1..=n`.
    pub fn truncated(&self, n: u32) -> Coloring {
        Coloring { k: self.k, assignment: self.assignment[..n as usize].to_vec() }
    }
}

impl fmt::Display for Coloring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, block) in self.blocks().iter().enumerate() {
            let values: Vec<String> = block.values().iter().map(u32::to_string).collect();
            writeln!(f, "S{} = {{{}}}", i + 1, values.join(", "))?;
        }
        Ok(())
    }
}

/// A violating triple together with the block it was found in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub block: usize,
    #[serde(flatten)]
    pub triple: Triple,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

/// Lists every violating triple with `x <= y`, block by block, in
/// lexicographic `(x, y, z)` order within each block.
pub fn verify_coloring(coloring: &Coloring, constraint: Constraint) -> VerifyReport {
    let mut violations = Vec::new();
    for (b, block) in coloring.blocks().iter().enumerate() {
        for triple in block_violations(block.values(), constraint) {
            violations.push(Violation { block: b, triple });
        }
    }
    VerifyReport { valid: violations.is_empty(), violations }
}

/// Violating triples with `x <= y` among sorted distinct `values`.
fn block_violations(values: &[u32], constraint: Constraint) -> Vec<Triple> {
    let mut out = Vec::new();
    let Some(&max) = values.last() else { return out };
    match constraint.modulus() {
        None => {
            let mut member = vec![false; 2 * max as usize + 2];
            for &v in values {
                member[v as usize] = true;
            }
            for (i, &x) in values.iter().enumerate() {
                for &y in &values[i..] {
                    let z = x + y;
                    if member[z as usize] && constraint.forbids(x, y, z) {
                        out.push(Triple::new(x, y, z));
                    }
                }
            }
        }
        Some(m) => {
            let mut by_residue: Vec<Vec<u32>> = vec![Vec::new(); m as usize];
            for &v in values {
                by_residue[(v % m) as usize].push(v);
            }
            for (i, &x) in values.iter().enumerate() {
                for &y in &values[i..] {
                    for &z in &by_residue[((x + y) % m) as usize] {
                        if constraint.forbids(x, y, z) {
                            out.push(Triple::new(x, y, z));
                        }
                    }
                }
            }
        }
    }
    out
}

pub fn is_valid(coloring: &Coloring, constraint: Constraint) -> bool {
    verify_coloring(coloring, constraint).valid
}

#[derive(Debug, Error)]
pub enum CertificateError {
    #[error("malformed certificate JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Constraint(#[from] ConstraintError),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error("certificate declares n = {declared} but its blocks cover 1..={actual}")]
    SizeMismatch { declared: u32, actual: u32 },
}

/// A coloring paired with the rule it claims to satisfy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub constraint: Constraint,
    pub coloring: Coloring,
}

#[derive(Serialize, Deserialize)]
struct CertificateJson {
    kind: ConstraintKind,
    modulus: Option<u32>,
    #[serde(rename = "K")]
    k: usize,
    n: u32,
    blocks: Vec<Vec<u32>>,
}

impl Certificate {
    pub fn new(constraint: Constraint, coloring: Coloring) -> Self {
        Certificate { constraint, coloring }
    }

    pub fn verify(&self) -> VerifyReport {
        verify_coloring(&self.coloring, self.constraint)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let canonical = self.coloring.canonical();
        let raw = CertificateJson {
            kind: self.constraint.kind(),
            modulus: self.constraint.modulus(),
            k: canonical.k(),
            n: canonical.n(),
            blocks: canonical.blocks().into_iter().map(Block::into_vec).collect(),
        };
        serde_json::to_value(raw).expect("certificate serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("certificate serializes")
    }

    pub fn from_json_value(value: serde_json::Value) -> Result<Self, CertificateError> {
        let raw: CertificateJson = serde_json::from_value(value)?;
        Self::from_raw(raw)
    }

    /// Parses the certificate format; blocks may be listed in any order and
    /// their values in any order.
    pub fn from_json(text: &str) -> Result<Self, CertificateError> {
        let raw: CertificateJson = serde_json::from_str(text)?;
        Self::from_raw(raw)
    }

    /// Audits a certificate's block listing without requiring it to be a
    /// partition. Returns the declared `K` alongside the findings.
    pub fn audit_json(text: &str) -> Result<(Constraint, usize, BlockAudit), CertificateError> {
        let raw: CertificateJson = serde_json::from_str(text)?;
        let constraint = Constraint::new(raw.kind, raw.modulus)?;
        Ok((constraint, raw.k, audit_blocks(raw.n, &raw.blocks, constraint)))
    }

    fn from_raw(raw: CertificateJson) -> Result<Self, CertificateError> {
        let constraint = Constraint::new(raw.kind, raw.modulus)?;
        let mut blocks = raw
            .blocks
            .into_iter()
            .map(|b| {
                Block::new(b).map_err(|e| match e {
                    crate::constraint::BlockError::ZeroValue => ColoringError::OutOfRange(0, raw.n),
                    crate::constraint::BlockError::Duplicate(v) => ColoringError::Duplicate(v),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        blocks.sort_by_key(|b| b.min().unwrap_or(u32::MAX));
        let values: Vec<&[u32]> = blocks.iter().map(Block::values).collect();
        let coloring = Coloring::from_blocks(raw.k, &values)?;
        if coloring.n() != raw.n {
            if coloring.n() < raw.n {
                return Err(ColoringError::Missing(coloring.n() + 1, raw.n).into());
            }
            return Err(CertificateError::SizeMismatch { declared: raw.n, actual: coloring.n() });
        }
        Ok(Certificate { constraint, coloring })
    }
}

/// Findings on a block listing that may not be a partition of `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockAudit {
    pub n: u32,
    pub missing: Vec<u32>,
    pub duplicates: Vec<u32>,
    pub out_of_range: Vec<u32>,
    /// Violations among the values as listed.
    pub violations: Vec<Violation>,
    /// For each missing value, the blocks (zero-based) it could join
    /// without creating a violation, taking the listed values as fixed.
    pub admissible: Vec<(u32, Vec<usize>)>,
}

impl BlockAudit {
    pub fn is_partition(&self) -> bool {
        self.missing.is_empty() && self.duplicates.is_empty() && self.out_of_range.is_empty()
    }
}

/// Audits raw blocks against `1..=n` and `constraint` without requiring a
/// partition.
pub fn audit_blocks(n: u32, blocks: &[Vec<u32>], constraint: Constraint) -> BlockAudit {
    let mut seen = vec![0usize; n as usize + 1];
    let mut out_of_range = Vec::new();
    for &v in blocks.iter().flatten() {
        if v == 0 || v > n {
            out_of_range.push(v);
        } else {
            seen[v as usize] += 1;
        }
    }
    let missing: Vec<u32> = (1..=n).filter(|&v| seen[v as usize] == 0).collect();
    let duplicates: Vec<u32> = (1..=n).filter(|&v| seen[v as usize] > 1).collect();
    let clean: Vec<Vec<u32>> = blocks
        .iter()
        .map(|b| {
            let mut b: Vec<u32> = b.iter().copied().filter(|&v| v >= 1 && v <= n).collect();
            b.sort_unstable();
            b.dedup();
            b
        })
        .collect();
    let mut violations = Vec::new();
    for (i, b) in clean.iter().enumerate() {
        for t in block_violations(b, constraint) {
            violations.push(Violation { block: i, triple: t });
        }
    }
    let admissible = missing
        .iter()
        .map(|&v| {
            let ok = clean
                .iter()
                .enumerate()
                .filter(|(_, b)| {
                    let block = Block::from_sorted((*b).clone());
                    extension_violation(&block, v, constraint).is_none()
                })
                .map(|(i, _)| i)
                .collect();
            (v, ok)
        })
        .collect();
    BlockAudit { n, missing, duplicates, out_of_range, violations, admissible }
}
