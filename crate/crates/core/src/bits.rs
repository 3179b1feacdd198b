//! Fixed-width bit sets indexed by value. Bit `i` stands for the integer `i`;
//! bit 0 is never used.

pub trait Bits: Copy + Send + Sync + 'static {
    /// Largest value that can be stored.
    const CAPACITY: u32;

    fn empty() -> Self;
    fn test(&self, i: u32) -> bool;
    fn set(&mut self, i: u32);
    /// `self |= other << by`, discarding bits past the width.
    fn or_shifted(&mut self, other: &Self, by: u32);
    fn and_assign(&mut self, other: &Self);
    /// True if any bit in `lo..=hi` is set; `hi` may exceed the capacity.
    fn any_between(&self, lo: u32, hi: u32) -> bool;
}

#[inline]
fn word_mask(lo: u32, hi: u32) -> u64 {
    // Bits lo..=hi of one word, with 0 <= lo <= hi <= 63.
    (u64::MAX >> (63 - hi)) & (u64::MAX << lo)
}

impl Bits for u64 {
    const CAPACITY: u32 = 63;

    #[inline]
    fn empty() -> Self {
        0
    }
    #[inline]
    fn test(&self, i: u32) -> bool {
        (*self >> i) & 1 == 1
    }
    #[inline]
    fn set(&mut self, i: u32) {
        *self |= 1 << i;
    }
    #[inline]
    fn or_shifted(&mut self, other: &Self, by: u32) {
        if by < 64 {
            *self |= *other << by;
        }
    }
    #[inline]
    fn and_assign(&mut self, other: &Self) {
        *self &= *other;
    }
    #[inline]
    fn any_between(&self, lo: u32, hi: u32) -> bool {
        let hi = hi.min(63);
        lo <= hi && *self & word_mask(lo, hi) != 0
    }
}

impl Bits for u128 {
    const CAPACITY: u32 = 127;

    #[inline]
    fn empty() -> Self {
        0
    }
    #[inline]
    fn test(&self, i: u32) -> bool {
        (*self >> i) & 1 == 1
    }
    #[inline]
    fn set(&mut self, i: u32) {
        *self |= 1 << i;
    }
    #[inline]
    fn or_shifted(&mut self, other: &Self, by: u32) {
        if by < 128 {
            *self |= *other << by;
        }
    }
    #[inline]
    fn and_assign(&mut self, other: &Self) {
        *self &= *other;
    }
    #[inline]
    fn any_between(&self, lo: u32, hi: u32) -> bool {
        let hi = hi.min(127);
        if lo > hi {
            return false;
        }
        let mask = (u128::MAX >> (127 - hi)) & (u128::MAX << lo);
        *self & mask != 0
    }
}

/// 256-bit set stored as four little-endian words.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Wide([u64; 4]);

impl Bits for Wide {
    const CAPACITY: u32 = 255;

    #[inline]
    fn empty() -> Self {
        Wide([0; 4])
    }
    #[inline]
    fn test(&self, i: u32) -> bool {
        (self.0[(i / 64) as usize] >> (i % 64)) & 1 == 1
    }
    #[inline]
    fn set(&mut self, i: u32) {
        self.0[(i / 64) as usize] |= 1 << (i % 64);
    }
    #[inline]
    fn or_shifted(&mut self, other: &Self, by: u32) {
        let words = (by / 64) as usize;
        let bits = by % 64;
        for dst in (words..4).rev() {
            let src = dst - words;
            let mut w = other.0[src] << bits;
            if bits != 0 && src > 0 {
                w |= other.0[src - 1] >> (64 - bits);
            }
            self.0[dst] |= w;
        }
    }
    #[inline]
    fn and_assign(&mut self, other: &Self) {
        for (a, b) in self.0.iter_mut().zip(other.0) {
            *a &= b;
        }
    }
    #[inline]
    fn any_between(&self, lo: u32, hi: u32) -> bool {
        let hi = hi.min(255);
        if lo > hi {
            return false;
        }
        (lo / 64..=hi / 64).any(|w| {
            let from = if w == lo / 64 { lo % 64 } else { 0 };
            let to = if w == hi / 64 { hi % 64 } else { 63 };
            self.0[w as usize] & word_mask(from, to) != 0
        })
    }
}

/// Growable bit vector used for membership tests over large ranges.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BitVec {
    words: Vec<u64>,
}

impl BitVec {
    pub fn with_len(len: usize) -> Self {
        BitVec { words: vec![0; len.div_ceil(64)] }
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        self.words.get(i / 64).is_some_and(|w| (w >> (i % 64)) & 1 == 1)
    }

    #[inline]
    pub fn set(&mut self, i: usize) {
        let word = i / 64;
        if word >= self.words.len() {
            self.words.resize(word + 1, 0);
        }
        self.words[word] |= 1 << (i % 64);
    }
}
