//! Finite subsets of ℕ as sorted vectors.

use alloc::vec::Vec;
use core::fmt;

/// A finite set of naturals, stored strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FinSet {
    elems: Vec<u64>,
}

impl FinSet {
    pub fn new() -> Self {
        FinSet { elems: Vec::new() }
    }

    /// Builds a set from any elements; duplicates collapse.
    pub fn from_unsorted(mut v: Vec<u64>) -> Self {
        v.sort_unstable();
        v.dedup();
        FinSet { elems: v }
    }

    /// `{0, 1, ..., n-1}`.
    pub fn range(n: u64) -> Self {
        FinSet { elems: (0..n).collect() }
    }

    /// The elements of `universe` at the positions of the set bits of `mask`.
    pub fn from_mask(universe: &[u64], mask: u64) -> Self {
        let elems = universe
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &x)| x)
            .collect();
        FinSet { elems }
    }

    /// Bitmask of this set relative to the sorted `universe`, if contained in it.
    pub fn mask_in(&self, universe: &[u64]) -> Option<u64> {
        let mut mask = 0u64;
        for x in &self.elems {
            let i = universe.binary_search(x).ok()?;
            mask |= 1 << i;
        }
        Some(mask)
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn contains(&self, x: u64) -> bool {
        self.elems.binary_search(&x).is_ok()
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.elems
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = u64> + ExactSizeIterator + '_ {
        self.elems.iter().copied()
    }

    pub fn first(&self) -> Option<u64> {
        self.elems.first().copied()
    }

    pub fn last(&self) -> Option<u64> {
        self.elems.last().copied()
    }

    pub fn insert(&mut self, x: u64) -> bool {
        match self.elems.binary_search(&x) {
            Ok(_) => false,
            Err(i) => {
                self.elems.insert(i, x);
                true
            }
        }
    }

    pub fn remove(&mut self, x: u64) -> bool {
        match self.elems.binary_search(&x) {
            Ok(i) => {
                self.elems.remove(i);
                true
            }
            Err(_) => false,
        }
    }

    pub fn without(&self, x: u64) -> Self {
        let mut s = self.clone();
        s.remove(x);
        s
    }

    pub fn union(&self, other: &Self) -> Self {
        self.merge(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.merge(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.merge(other, |a, b| a && !b)
    }

    pub fn symmetric_difference(&self, other: &Self) -> Self {
        self.merge(other, |a, b| a != b)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.elems.iter().all(|&x| other.contains(x))
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.intersection(other).is_empty()
    }

    /// Elements satisfying `keep`.
    pub fn filter(&self, mut keep: impl FnMut(u64) -> bool) -> Self {
        FinSet { elems: self.elems.iter().copied().filter(|&x| keep(x)).collect() }
    }

    /// All subsets as masks over `self.as_slice()`, `0..2^len`.
    pub fn subset_masks(&self) -> core::ops::Range<u64> {
        assert!(self.len() < 64, "subset enumeration needs fewer than 64 elements");
        0..(1u64 << self.len())
    }

    pub fn subset(&self, mask: u64) -> Self {
        FinSet::from_mask(&self.elems, mask)
    }

    fn merge(&self, other: &Self, keep: impl Fn(bool, bool) -> bool) -> Self {
        let (a, b) = (&self.elems, &other.elems);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        while i < a.len() || j < b.len() {
            let (x, in_a, in_b) = match (a.get(i), b.get(j)) {
                (Some(&x), Some(&y)) if x == y => {
                    i += 1;
                    j += 1;
                    (x, true, true)
                }
                (Some(&x), Some(&y)) if x < y => {
                    i += 1;
                    (x, true, false)
                }
                (Some(_), Some(&y)) => {
                    j += 1;
                    (y, false, true)
                }
                (Some(&x), None) => {
                    i += 1;
                    (x, true, false)
                }
                (None, Some(&y)) => {
                    j += 1;
                    (y, false, true)
                }
                (None, None) => unreachable!(),
            };
            if keep(in_a, in_b) {
                out.push(x);
            }
        }
        FinSet { elems: out }
    }
}

impl FromIterator<u64> for FinSet {
    fn from_iter<I: IntoIterator<Item = u64>>(iter: I) -> Self {
        FinSet::from_unsorted(iter.into_iter().collect())
    }
}

impl<const N: usize> From<[u64; N]> for FinSet {
    fn from(a: [u64; N]) -> Self {
        FinSet::from_unsorted(a.to_vec())
    }
}

impl From<Vec<u64>> for FinSet {
    fn from(v: Vec<u64>) -> Self {
        FinSet::from_unsorted(v)
    }
}

impl<'a> IntoIterator for &'a FinSet {
    type Item = u64;
    type IntoIter = core::iter::Copied<core::slice::Iter<'a, u64>>;
    fn into_iter(self) -> Self::IntoIter {
        self.elems.iter().copied()
    }
}

impl fmt::Display for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.elems.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    #[test]
    fn construction_sorts_and_dedups() {
        let s = FinSet::from_unsorted(vec![5, 1, 3, 1]);
        assert_eq!(s.as_slice(), &[1, 3, 5]);
        assert_eq!(alloc::format!("{s}"), "{1,3,5}");
    }

    #[test]
    fn masks_roundtrip() {
        let u = [2u64, 4, 7, 9];
        let s = FinSet::from([4, 9]);
        let m = s.mask_in(&u).unwrap();
        assert_eq!(m, 0b1010);
        assert_eq!(FinSet::from_mask(&u, m), s);
        assert_eq!(FinSet::from([3]).mask_in(&u), None);
    }

    fn arb_set() -> impl Strategy<Value = FinSet> {
        proptest::collection::vec(0u64..40, 0..15).prop_map(FinSet::from)
    }

    proptest! {
        #[test]
        fn set_algebra_matches_membership(a in arb_set(), b in arb_set()) {
            for x in 0..40u64 {
                let (ia, ib) = (a.contains(x), b.contains(x));
                prop_assert_eq!(a.union(&b).contains(x), ia || ib);
                prop_assert_eq!(a.intersection(&b).contains(x), ia && ib);
                prop_assert_eq!(a.difference(&b).contains(x), ia && !ib);
                prop_assert_eq!(a.symmetric_difference(&b).contains(x), ia != ib);
            }
            prop_assert!(a.intersection(&b).is_subset(&a));
            prop_assert!(a.is_subset(&a.union(&b)));
            let u = a.union(&b);
            prop_assert!(u.as_slice().windows(2).all(|w| w[0] < w[1]));
        }
    }
}
