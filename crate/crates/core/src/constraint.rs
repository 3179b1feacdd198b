//! Sum-free rules and the residue convention used by the modular variants.
//!
//! Four rules are supported. For a block `B` of positive integers and a
//! triple `(x, y, z)` drawn from `B`:
//!
//! * `Classic`: forbidden when `x + y = z`. `x = y` is allowed, so `2x = z`
//!   is a violation.
//! * `Weak`: forbidden when `x + y = z` with `x`, `y`, `z` pairwise distinct.
//! * `Modular(m)`: forbidden when `x + y ≡ z (mod m)`; repeated elements are
//!   allowed, so any multiple of `m` is self-violating (`m + m ≡ m`).
//! * `WeakModular(m)`: the modular rule restricted to pairwise distinct triples.
//!
//! Residues are reported in the system `{1, ..., m}` where `m` stands for
//! the zero class.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstraintError {
    #[error("modulus must be at least 1")]
    ZeroModulus,
    #[error("constraint kind `{0}` requires a modulus")]
    MissingModulus(&'static str),
    #[error("constraint kind `{0}` does not take a modulus")]
    UnexpectedModulus(&'static str),
    #[error("unknown constraint kind `{0}`")]
    UnknownKind(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BlockError {
    #[error("block values must be positive")]
    ZeroValue,
    #[error("value {0} appears more than once in the block")]
    Duplicate(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstraintKind {
    Classic,
    Weak,
    Modular,
    WeakModular,
}

impl ConstraintKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ConstraintKind::Classic => "classic",
            ConstraintKind::Weak => "weak",
            ConstraintKind::Modular => "modular",
            ConstraintKind::WeakModular => "weak-modular",
        }
    }
}

impl FromStr for ConstraintKind {
    type Err = ConstraintError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "classic" => Ok(ConstraintKind::Classic),
            "weak" => Ok(ConstraintKind::Weak),
            "modular" => Ok(ConstraintKind::Modular),
            "weak-modular" => Ok(ConstraintKind::WeakModular),
            other => Err(ConstraintError::UnknownKind(other.to_string())),
        }
    }
}

/// Which sum-free rule applies. The modular variants carry their modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Constraint {
    Classic,
    Weak,
    Modular(u32),
    WeakModular(u32),
}

impl Constraint {
    pub fn new(kind: ConstraintKind, modulus: Option<u32>) -> Result<Self, ConstraintError> {
        match (kind, modulus) {
            (_, Some(0)) => Err(ConstraintError::ZeroModulus),
            (ConstraintKind::Classic, None) => Ok(Constraint::Classic),
            (ConstraintKind::Weak, None) => Ok(Constraint::Weak),
            (ConstraintKind::Modular, Some(m)) => Ok(Constraint::Modular(m)),
            (ConstraintKind::WeakModular, Some(m)) => Ok(Constraint::WeakModular(m)),
            (k @ (ConstraintKind::Classic | ConstraintKind::Weak), Some(_)) => {
                Err(ConstraintError::UnexpectedModulus(k.as_str()))
            }
            (k, None) => Err(ConstraintError::MissingModulus(k.as_str())),
        }
    }

    pub fn kind(self) -> ConstraintKind {
        match self {
            Constraint::Classic => ConstraintKind::Classic,
            Constraint::Weak => ConstraintKind::Weak,
            Constraint::Modular(_) => ConstraintKind::Modular,
            Constraint::WeakModular(_) => ConstraintKind::WeakModular,
        }
    }

    pub fn modulus(self) -> Option<u32> {
        match self {
            Constraint::Modular(m) | Constraint::WeakModular(m) => Some(m),
            _ => None,
        }
    }

    /// True for the variants that require `x`, `y`, `z` pairwise distinct.
    pub fn is_weak(self) -> bool {
        matches!(self, Constraint::Weak | Constraint::WeakModular(_))
    }

    pub fn is_modular(self) -> bool {
        self.modulus().is_some()
    }

    /// Whether `x + y` and `z` collide under this rule, ignoring distinctness.
    #[inline]
    pub fn sums_to(self, x: u32, y: u32, z: u32) -> bool {
        match self.modulus() {
            None => x + y == z,
            Some(m) => residue(x + y, m) == residue(z, m),
        }
    }

    /// Whether `(x, y, z)` is a forbidden triple under this rule.
    #[inline]
    pub fn forbids(self, x: u32, y: u32, z: u32) -> bool {
        if self.is_weak() && (x == y || x == z || y == z) {
            return false;
        }
        self.sums_to(x, y, z)
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.modulus() {
            None => f.write_str(self.kind().as_str()),
            Some(m) => write!(f, "{} (m={m})", self.kind().as_str()),
        }
    }
}

/// Representative of `x` modulo `m` in `{1, ..., m}`; `m` stands for the zero class.
///
/// Panics if `m == 0`.
#[inline]
pub fn residue(x: u32, m: u32) -> u32 {
    match x % m {
        0 => m,
        r => r,
    }
}

/// A violating triple `x + y ≡ z` under some constraint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Triple {
    pub x: u32,
    pub y: u32,
    pub z: u32,
}

impl Triple {
    pub fn new(x: u32, y: u32, z: u32) -> Self {
        Triple { x, y, z }
    }

    pub fn involves(&self, v: u32) -> bool {
        self.x == v || self.y == v || self.z == v
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {} -> {}", self.x, self.y, self.z)
    }
}

/// A set of positive integers kept strictly increasing.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Block(Vec<u32>);

impl Block {
    /// Sorts `values`; rejects zero and duplicates.
    pub fn new(mut values: Vec<u32>) -> Result<Self, BlockError> {
        values.sort_unstable();
        if values.first() == Some(&0) {
            return Err(BlockError::ZeroValue);
        }
        if let Some(w) = values.windows(2).find(|w| w[0] == w[1]) {
            return Err(BlockError::Duplicate(w[0]));
        }
        Ok(Block(values))
    }

    /// Callers guarantee `values` is strictly increasing and positive.
    pub(crate) fn from_sorted(values: Vec<u32>) -> Self {
        debug_assert!(values.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(values.first().is_none_or(|&v| v > 0));
        Block(values)
    }

    pub fn values(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: u32) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn min(&self) -> Option<u32> {
        self.0.first().copied()
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.0
    }

    /// A copy of this block with `v` added.
    pub fn with(&self, v: u32) -> Block {
        let mut values = self.0.clone();
        if let Err(pos) = values.binary_search(&v) {
            values.insert(pos, v);
        }
        Block(values)
    }

    /// A copy of this block with `v` removed.
    pub fn without(&self, v: u32) -> Block {
        Block(self.0.iter().copied().filter(|&x| x != v).collect())
    }
}

impl<'de> Deserialize<'de> for Block {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let values = Vec::<u32>::deserialize(d)?;
        Block::new(values).map_err(serde::de::Error::custom)
    }
}

/// The lexicographically first violating triple of `block`, if any.
pub fn find_violation(block: &Block, constraint: Constraint) -> Option<Triple> {
    let values = block.values();
    for &x in values {
        for &y in values {
            if let Some(z) = first_partner(block, constraint, x, y, |_| true) {
                return Some(Triple::new(x, y, z));
            }
        }
    }
    None
}

pub fn is_sum_free(block: &Block, constraint: Constraint) -> bool {
    find_violation(block, constraint).is_none()
}

/// The lexicographically first violating triple involving `v` in `block ∪ {v}`.
///
/// Triples that avoid `v` are not reported, so this is the incremental
/// admissibility test when `block` is already sum-free.
pub fn extension_violation(block: &Block, v: u32, constraint: Constraint) -> Option<Triple> {
    let extended = block.with(v);
    for &x in extended.values() {
        for &y in extended.values() {
            let touches = x == v || y == v;
            if let Some(z) = first_partner(&extended, constraint, x, y, |z| touches || z == v) {
                return Some(Triple::new(x, y, z));
            }
        }
    }
    None
}

fn first_partner(block: &Block, constraint: Constraint, x: u32, y: u32, accept: impl Fn(u32) -> bool) -> Option<u32> {
    if constraint.is_modular() {
        block.values().iter().copied().find(|&z| accept(z) && constraint.forbids(x, y, z))
    } else {
        let z = x + y;
        (block.contains(z) && accept(z) && constraint.forbids(x, y, z)).then_some(z)
    }
}
