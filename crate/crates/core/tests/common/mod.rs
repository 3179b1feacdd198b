#![allow(dead_code)]

use schurlab::Constraint;

/// Forbidden-triple test written from the rule definitions, independent of
/// the library's residue handling.
pub fn naive_forbids(c: Constraint, x: u32, y: u32, z: u32) -> bool {
    let distinct = x != y && y != z && x != z;
    match c {
        Constraint::Classic => x + y == z,
        Constraint::Weak => distinct && x + y == z,
        Constraint::Modular(m) => (x + y) % m == z % m,
        Constraint::WeakModular(m) => distinct && (x + y) % m == z % m,
    }
}

/// Sum-freeness by enumerating every ordered triple drawn from `set`.
pub fn naive_sum_free(set: &[u32], c: Constraint) -> bool {
    set.iter().all(|&x| set.iter().all(|&y| set.iter().all(|&z| !naive_forbids(c, x, y, z))))
}

/// No monochromatic forbidden triple, checked over all ordered triples.
pub fn naive_valid(assignment: &[u8], c: Constraint) -> bool {
    let n = assignment.len() as u32;
    let block = |v: u32| assignment[v as usize - 1];
    for x in 1..=n {
        for y in 1..=n {
            if block(x) != block(y) {
                continue;
            }
            for z in 1..=n {
                if block(z) == block(x) && naive_forbids(c, x, y, z) {
                    return false;
                }
            }
        }
    }
    true
}

/// Every assignment of `1..=n` to `k` blocks, as a flat odometer.
pub fn all_assignments(k: usize, n: u32) -> impl Iterator<Item = Vec<u8>> {
    let total = (k as u64).pow(n);
    (0..total).map(move |mut i| {
        (0..n)
            .map(|_| {
                let d = (i % k as u64) as u8;
                i /= k as u64;
                d
            })
            .collect()
    })
}

pub fn brute_count(k: usize, n: u32, c: Constraint) -> u64 {
    all_assignments(k, n).filter(|a| naive_valid(a, c)).count() as u64
}

/// Largest `n` up to `cap` for which `1..=n` splits into `k` valid blocks.
/// Validity is monotone in `n`, so the scan stops at the first failure.
pub fn brute_max(k: usize, c: Constraint, cap: u32) -> Option<u32> {
    let mut best = 0;
    for n in 1..=cap {
        if all_assignments(k, n).any(|a| naive_valid(&a, c)) {
            best = n;
        } else {
            return Some(best);
        }
    }
    None
}

/// The known Schur-type values used across tests.
pub const SCHUR: [u32; 5] = [1, 4, 13, 44, 160];
pub const WEAK_SCHUR: [u32; 4] = [2, 8, 23, 66];

pub fn ws1(k: usize) -> u32 {
    2 * k as u32
}

pub fn ws2(k: usize) -> u32 {
    if k == 1 {
        2
    } else {
        4 * (k as u32 - 1) + 1
    }
}

pub fn ws3(k: usize) -> u32 {
    match k {
        1 => 2,
        2 => 4,
        _ => 6 * (k as u32 - 2) + 2,
    }
}
