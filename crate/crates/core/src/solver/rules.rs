//! Incremental per-block admissibility state for the backtracking search.
//!
//! Values are always placed in increasing order, so for the non-modular
//! rules a new value `v` can only play the role of `z`. Each block keeps its
//! members and the set of sums they generate as bit sets; admitting `v` is a
//! single bit test.

use crate::bits::{Bits, Wide};
use crate::constraint::Constraint;

pub(crate) trait BlockRule: Clone + Send {
    /// Largest value the rule can track.
    fn capacity(&self) -> u32;
    fn admits(&self, block: usize, v: u32) -> bool;
    fn place(&mut self, block: usize, v: u32);
    /// Undoes the most recent `place`, which must have been `(block, v)`.
    fn unplace(&mut self, block: usize, v: u32);
    /// True if some value in `from..=to` is already excluded from every
    /// block, so no extension can reach `to`. Rules may answer false when
    /// they cannot tell cheaply.
    fn blocked_between(&self, _from: u32, _to: u32) -> bool {
        false
    }
    /// A key such that two states with equal keys admit exactly the same
    /// extensions by `next, next + 1, ...` up to a relabeling of blocks.
    /// `None` when the rule has no compact key.
    fn state_key(&self, _next: u32) -> Option<Vec<u8>> {
        None
    }
}

#[derive(Clone)]
pub(crate) struct ShiftRule<B: Bits> {
    weak: bool,
    members: Vec<B>,
    forbidden: Vec<B>,
    history: Vec<(B, B)>,
}

impl<B: Bits> ShiftRule<B> {
    pub(crate) fn new(k: usize, weak: bool) -> Self {
        ShiftRule {
            weak,
            members: vec![B::empty(); k],
            forbidden: vec![B::empty(); k],
            history: Vec::with_capacity(B::CAPACITY as usize + 1),
        }
    }
}

impl<B: Bits> BlockRule for ShiftRule<B> {
    fn capacity(&self) -> u32 {
        B::CAPACITY
    }

    #[inline]
    fn admits(&self, block: usize, v: u32) -> bool {
        !self.forbidden[block].test(v)
    }

    #[inline]
    fn place(&mut self, block: usize, v: u32) {
        let members = self.members[block];
        let forbidden = self.forbidden[block];
        self.history.push((members, forbidden));
        let mut grown = members;
        grown.set(v);
        // Weak rules never forbid v + v, so only existing members shift.
        let summands = if self.weak { members } else { grown };
        self.forbidden[block].or_shifted(&summands, v);
        self.members[block] = grown;
    }

    #[inline]
    fn unplace(&mut self, block: usize, _v: u32) {
        let (members, forbidden) = self.history.pop().expect("unplace without place");
        self.members[block] = members;
        self.forbidden[block] = forbidden;
    }

    #[inline]
    fn blocked_between(&self, from: u32, to: u32) -> bool {
        let mut all = self.forbidden[0];
        for f in &self.forbidden[1..] {
            all.and_assign(f);
        }
        all.any_between(from, to)
    }
}

/// Modular rules track residue counts per block; a new value may appear in
/// any role of a triple.
#[derive(Clone)]
pub(crate) struct ResidueRule {
    m: usize,
    weak: bool,
    counts: Vec<u32>,
}

impl ResidueRule {
    pub(crate) fn new(k: usize, m: u32, weak: bool) -> Self {
        ResidueRule { m: m as usize, weak, counts: vec![0; k * m as usize] }
    }

    fn block_counts(&self, block: usize) -> &[u32] {
        &self.counts[block * self.m..(block + 1) * self.m]
    }

    fn blocks(&self) -> usize {
        self.counts.len() / self.m
    }
}

impl BlockRule for ResidueRule {
    fn capacity(&self) -> u32 {
        u32::MAX / 2
    }

    fn admits(&self, block: usize, v: u32) -> bool {
        let m = self.m;
        let cnt = self.block_counts(block);
        let r = v as usize % m;
        if self.weak {
            for a in 0..m {
                // v as the sum: a + b = r with b = r - a.
                let b = (r + m - a) % m;
                let as_sum = if a == b { cnt[a] >= 2 } else { cnt[a] >= 1 && cnt[b] >= 1 };
                // v as a summand: v + a = c.
                let c = (r + a) % m;
                let as_summand = if a == c { cnt[a] >= 2 } else { cnt[a] >= 1 && cnt[c] >= 1 };
                if as_sum || as_summand {
                    return false;
                }
            }
            true
        } else {
            if r == 0 || cnt[(2 * r) % m] > 0 {
                return false;
            }
            for a in (0..m).filter(|&a| cnt[a] > 0) {
                let c = (a + r) % m;
                if c == r || cnt[c] > 0 || cnt[(r + m - a) % m] > 0 {
                    return false;
                }
            }
            true
        }
    }

    fn place(&mut self, block: usize, v: u32) {
        let r = v as usize % self.m;
        self.counts[block * self.m + r] += 1;
    }

    fn unplace(&mut self, block: usize, v: u32) {
        let r = v as usize % self.m;
        self.counts[block * self.m + r] -= 1;
    }

    fn blocked_between(&self, from: u32, to: u32) -> bool {
        let m = self.m as u32;
        let last = to.min(from.saturating_add(m - 1));
        (from..=last).any(|v| (0..self.blocks()).all(|b| !self.admits(b, v)))
    }

    fn state_key(&self, next: u32) -> Option<Vec<u8>> {
        // Admissibility only asks whether a residue occurs at all, or at
        // least twice for the weak rule.
        let cap = if self.weak { 2 } else { 1 };
        let mut blocks: Vec<Vec<u8>> =
            (0..self.blocks()).map(|b| self.block_counts(b).iter().map(|&c| c.min(cap) as u8).collect()).collect();
        blocks.sort_unstable();
        let mut key = Vec::with_capacity(self.counts.len() + 4);
        key.extend_from_slice(&(next % self.m as u32).to_le_bytes());
        key.extend(blocks.into_iter().flatten());
        Some(key)
    }
}

/// Runtime-selected rule, used where static dispatch buys nothing.
#[derive(Clone)]
pub(crate) enum AnyRule {
    Narrow(ShiftRule<u64>),
    Medium(ShiftRule<u128>),
    Wide(ShiftRule<Wide>),
    Residue(ResidueRule),
}

impl AnyRule {
    /// The narrowest rule able to hold values up to `n`, if any.
    pub(crate) fn for_size(k: usize, n: u32, constraint: Constraint) -> Option<Self> {
        let weak = constraint.is_weak();
        Some(match constraint.modulus() {
            Some(m) => AnyRule::Residue(ResidueRule::new(k, m, weak)),
            None if n <= u64::CAPACITY => AnyRule::Narrow(ShiftRule::new(k, weak)),
            None if n <= u128::CAPACITY => AnyRule::Medium(ShiftRule::new(k, weak)),
            None if n <= Wide::CAPACITY => AnyRule::Wide(ShiftRule::new(k, weak)),
            None => return None,
        })
    }
}

macro_rules! dispatch {
    ($self:ident, $r:ident => $e:expr) => {
        match $self {
            AnyRule::Narrow($r) => $e,
            AnyRule::Medium($r) => $e,
            AnyRule::Wide($r) => $e,
            AnyRule::Residue($r) => $e,
        }
    };
}

impl BlockRule for AnyRule {
    fn capacity(&self) -> u32 {
        dispatch!(self, r => r.capacity())
    }
    #[inline]
    fn admits(&self, block: usize, v: u32) -> bool {
        dispatch!(self, r => r.admits(block, v))
    }
    #[inline]
    fn place(&mut self, block: usize, v: u32) {
        dispatch!(self, r => r.place(block, v))
    }
    #[inline]
    fn unplace(&mut self, block: usize, v: u32) {
        dispatch!(self, r => r.unplace(block, v))
    }
    #[inline]
    fn blocked_between(&self, from: u32, to: u32) -> bool {
        dispatch!(self, r => r.blocked_between(from, to))
    }
    fn state_key(&self, next: u32) -> Option<Vec<u8>> {
        dispatch!(self, r => r.state_key(next))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraint::{extension_violation, Block};

    /// Every rule must agree with the generic extension check on every
    /// prefix reachable by placing 1..=n into one block where admitted.
    fn agree_with_reference(mut rule: impl BlockRule, constraint: Constraint, n: u32) {
        let mut block = Vec::new();
        for v in 1..=n {
            let reference = extension_violation(&Block::new(block.clone()).unwrap(), v, constraint);
            assert_eq!(rule.admits(0, v), reference.is_none(), "{constraint}: {block:?} + {v}");
            if reference.is_none() {
                rule.place(0, v);
                block.push(v);
            }
        }
    }

    #[test]
    fn rules_match_reference_greedy_fill() {
        agree_with_reference(ShiftRule::<u64>::new(1, false), Constraint::Classic, 60);
        agree_with_reference(ShiftRule::<u128>::new(1, true), Constraint::Weak, 120);
        agree_with_reference(ShiftRule::<Wide>::new(1, false), Constraint::Classic, 250);
        for m in 1..=7 {
            agree_with_reference(ResidueRule::new(1, m, false), Constraint::Modular(m), 40);
            agree_with_reference(ResidueRule::new(1, m, true), Constraint::WeakModular(m), 40);
        }
    }

    #[test]
    fn unplace_restores_state() {
        let mut rule = ShiftRule::<u64>::new(2, false);
        rule.place(0, 1);
        assert!(!rule.admits(0, 2));
        rule.place(1, 2);
        rule.unplace(1, 2);
        rule.unplace(0, 1);
        assert!(rule.admits(0, 2));
    }

    #[test]
    fn equal_residue_keys_admit_the_same_values() {
        // Place 1..=6 in every way over two blocks and compare states that
        // share a key on the next few values.
        for weak in [false, true] {
            let mut seen: std::collections::HashMap<Vec<u8>, Vec<[bool; 2]>> = Default::default();
            for code in 0..64u32 {
                let mut rule = ResidueRule::new(2, 4, weak);
                let mut ok = true;
                for v in 1..=6 {
                    let b = (code >> (v - 1) & 1) as usize;
                    if !rule.admits(b, v) {
                        ok = false;
                        break;
                    }
                    rule.place(b, v);
                }
                if !ok {
                    continue;
                }
                let mut sorted: Vec<[bool; 2]> = (7..=10).map(|v| [rule.admits(0, v), rule.admits(1, v)]).collect();
                for s in &mut sorted {
                    s.sort_unstable();
                }
                let key = rule.state_key(7).unwrap();
                let prev = seen.entry(key).or_insert_with(|| sorted.clone());
                assert_eq!(*prev, sorted);
            }
        }
        let mut a = ResidueRule::new(2, 3, false);
        a.place(0, 1);
        let mut b = ResidueRule::new(2, 3, false);
        b.place(1, 1);
        assert_eq!(a.state_key(2), b.state_key(2));
        assert_ne!(a.state_key(2), a.state_key(3));
    }
}
