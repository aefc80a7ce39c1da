//! Exact minimum covers of a small ground set by members of a hereditary family.

use alloc::vec;
use alloc::vec::Vec;

/// Default cap on the ground-set size for cover-number evaluation.
pub const DEFAULT_COVER_CAP: usize = 14;

/// Result of [`min_cover`]: the cover size and one optimal cover as masks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cover {
    pub size: usize,
    pub parts: Vec<u64>,
}

/// Minimum number of base sets covering the full mask `(1<<n)-1`.
///
/// `is_base[mask]` must be given for every mask over `n` points. The table is
/// closed downward first, so only traces of base sets on the ground set matter.
/// Returns `None` when some point lies in no base set.
pub fn min_cover(n: usize, is_base: &[bool]) -> Option<Cover> {
    assert!(n < 32, "ground set too large for mask enumeration");
    assert_eq!(is_base.len(), 1usize << n);
    let full = (1u64 << n) - 1;
    let closed = down_close(n, is_base);
    if (0..n).any(|i| !closed[1 << i]) {
        return None;
    }
    let mut memo = vec![u8::MAX; 1usize << n];
    let mut choice = vec![0u64; 1usize << n];
    memo[0] = 0;
    let size = solve(full, &closed, &mut memo, &mut choice) as usize;
    let mut parts = Vec::with_capacity(size);
    let mut u = full;
    while u != 0 {
        let s = choice[u as usize];
        parts.push(s);
        u &= !s;
    }
    Some(Cover { size, parts })
}

fn down_close(n: usize, is_base: &[bool]) -> Vec<bool> {
    let mut c = is_base.to_vec();
    for mask in (0..(1u64 << n)).rev() {
        if !c[mask as usize] {
            c[mask as usize] = (0..n).any(|i| mask >> i & 1 == 0 && c[(mask | 1 << i) as usize]);
        }
    }
    c[0] = true;
    c
}

fn solve(u: u64, closed: &[bool], memo: &mut [u8], choice: &mut [u64]) -> u8 {
    if memo[u as usize] != u8::MAX {
        return memo[u as usize];
    }
    let low = u & u.wrapping_neg();
    let rest = u & !low;
    let mut best = u8::MAX;
    let mut best_set = low;
    // submasks of `rest`, each extended by the lowest point
    let mut sub = rest;
    loop {
        let s = sub | low;
        if closed[s as usize] && is_maximal_within(s, u, closed) {
            let v = solve(u & !s, closed, memo, choice).saturating_add(1);
            if v < best || (v == best && s < best_set) {
                best = v;
                best_set = s;
                if best == 1 {
                    break;
                }
            }
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & rest;
    }
    memo[u as usize] = best;
    choice[u as usize] = best_set;
    best
}

fn is_maximal_within(s: u64, u: u64, closed: &[bool]) -> bool {
    let mut free = u & !s;
    while free != 0 {
        let b = free & free.wrapping_neg();
        if closed[(s | b) as usize] {
            return false;
        }
        free &= !b;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(n: usize, base: impl Fn(u64) -> bool) -> Vec<bool> {
        (0..1u64 << n).map(base).collect()
    }

    #[test]
    fn singletons_only_needs_n() {
        let t = table(5, |m| m.count_ones() <= 1);
        assert_eq!(min_cover(5, &t).unwrap().size, 5);
    }

    #[test]
    fn pairs_cover_in_halves() {
        let t = table(6, |m| m.count_ones() <= 2);
        let c = min_cover(6, &t).unwrap();
        assert_eq!(c.size, 3);
        assert_eq!(c.parts.iter().fold(0, |a, p| a | p), 0b111111);
    }

    #[test]
    fn uncoverable_point() {
        let t = table(3, |m| m & 0b100 == 0);
        assert!(min_cover(3, &t).is_none());
    }

    #[test]
    fn non_hereditary_table_is_closed_downward() {
        // only the full set is listed; its subsets count through the closure
        let t = table(4, |m| m == 0b1111);
        assert_eq!(min_cover(4, &t).unwrap().size, 1);
    }

    #[test]
    fn empty_ground_set() {
        assert_eq!(min_cover(0, &[true]).unwrap().size, 0);
    }
}
