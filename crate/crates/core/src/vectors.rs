//! Sequences of finitely supported vectors in c₀₀ and the submeasure φ_x.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{Signed, Zero};

use crate::rational::Rational;
use crate::set::FinSet;

/// Finitely supported vector: coordinate → nonzero value.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SparseVec {
    entries: BTreeMap<u64, Rational>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec::default()
    }

    pub fn from_entries(e: impl IntoIterator<Item = (u64, Rational)>) -> Self {
        let mut entries = BTreeMap::new();
        for (k, v) in e {
            *entries.entry(k).or_insert_with(Rational::zero) += v;
        }
        entries.retain(|_, v: &mut Rational| !v.is_zero());
        SparseVec { entries }
    }

    /// The unit vector `e_k` scaled by `v`.
    pub fn unit(k: u64, v: Rational) -> Self {
        SparseVec::from_entries([(k, v)])
    }

    pub fn get(&self, k: u64) -> Rational {
        self.entries.get(&k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn entries(&self) -> &BTreeMap<u64, Rational> {
        &self.entries
    }

    pub fn support(&self) -> FinSet {
        self.entries.keys().copied().collect()
    }

    /// Supremum norm.
    pub fn norm(&self) -> Rational {
        self.entries.values().map(|v| v.abs()).max().unwrap_or_else(Rational::zero)
    }

    pub fn abs(&self) -> Self {
        SparseVec { entries: self.entries.iter().map(|(k, v)| (*k, v.abs())).collect() }
    }

    pub fn is_nonneg(&self) -> bool {
        self.entries.values().all(|v| !v.is_negative())
    }

    /// Coordinates in `lo..hi`.
    pub fn window(&self, lo: u64, hi: u64) -> Self {
        SparseVec { entries: self.entries.range(lo..hi.max(lo)).map(|(k, v)| (*k, v.clone())).collect() }
    }

    /// The partial-sum projection keeping coordinates `< n`.
    pub fn head(&self, n: u64) -> Self {
        self.window(0, n)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut e = self.entries.clone();
        for (k, v) in &other.entries {
            *e.entry(*k).or_insert_with(Rational::zero) -= v;
        }
        e.retain(|_, v| !v.is_zero());
        SparseVec { entries: e }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut e = self.entries.clone();
        for (k, v) in &other.entries {
            *e.entry(*k).or_insert_with(Rational::zero) += v;
        }
        e.retain(|_, v| !v.is_zero());
        SparseVec { entries: e }
    }
}

type Gen = Arc<dyn Fn(u64) -> SparseVec + Send + Sync>;

#[derive(Clone)]
enum Source {
    Explicit(Vec<SparseVec>),
    Generated(Gen),
}

/// An indexed family `(x_n)` of finitely supported vectors.
///
/// Explicit families are zero beyond their stored length.
#[derive(Clone)]
pub struct VectorSeq {
    source: Source,
    nonneg: bool,
}

impl fmt::Debug for VectorSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.source {
            Source::Explicit(v) => f.debug_struct("VectorSeq").field("vectors", v).field("nonneg", &self.nonneg).finish(),
            Source::Generated(_) => f.debug_struct("VectorSeq").field("vectors", &"<generated>").field("nonneg", &self.nonneg).finish(),
        }
    }
}

impl VectorSeq {
    pub fn explicit(vectors: Vec<SparseVec>) -> Self {
        let nonneg = vectors.iter().all(SparseVec::is_nonneg);
        VectorSeq { source: Source::Explicit(vectors), nonneg }
    }

    /// A lazily generated family; `nonneg` is the caller's declaration.
    pub fn generated(nonneg: bool, f: impl Fn(u64) -> SparseVec + Send + Sync + 'static) -> Self {
        VectorSeq { source: Source::Generated(Arc::new(f)), nonneg }
    }

    pub fn get(&self, n: u64) -> SparseVec {
        match &self.source {
            Source::Explicit(v) => usize::try_from(n).ok().and_then(|i| v.get(i)).cloned().unwrap_or_default(),
            Source::Generated(g) => g(n),
        }
    }

    /// Number of stored vectors for explicit families.
    pub fn explicit_len(&self) -> Option<usize> {
        match &self.source {
            Source::Explicit(v) => Some(v.len()),
            Source::Generated(_) => None,
        }
    }

    pub fn is_nonneg(&self) -> bool {
        self.nonneg
    }

    pub fn norm(&self, n: u64) -> Rational {
        self.get(n).norm()
    }

    /// `x_n(k)`.
    pub fn entry(&self, n: u64, k: u64) -> Rational {
        self.get(n).get(k)
    }

    /// `φ_x(F) = sup_{G⊆F} ‖Σ_{n∈G} x_n‖`, via per-coordinate positive and negative parts.
    pub fn phi(&self, f: &FinSet) -> Rational {
        let mut pos: BTreeMap<u64, Rational> = BTreeMap::new();
        let mut neg: BTreeMap<u64, Rational> = BTreeMap::new();
        for n in f {
            for (k, v) in self.get(n).entries {
                let side = if v.is_negative() { &mut neg } else { &mut pos };
                *side.entry(k).or_insert_with(Rational::zero) += v.abs();
            }
        }
        pos.into_values().chain(neg.into_values()).max().unwrap_or_else(Rational::zero)
    }

    /// `x'_n(k) = |x_n(k)|`.
    pub fn abs_transform(&self) -> VectorSeq {
        match &self.source {
            Source::Explicit(v) => VectorSeq::explicit(v.iter().map(SparseVec::abs).collect()),
            Source::Generated(g) => {
                let g = g.clone();
                VectorSeq::generated(true, move |n| g(n).abs())
            }
        }
    }

    /// Applies `f(n, x_n)` to every vector; `nonneg` is declared for generated families.
    pub fn map(&self, f: impl Fn(u64, SparseVec) -> SparseVec + Send + Sync + 'static, nonneg: bool) -> VectorSeq {
        let this = self.clone();
        match &self.source {
            Source::Explicit(v) => {
                let out = v.iter().enumerate().map(|(i, x)| f(i as u64, x.clone())).collect();
                VectorSeq::explicit(out)
            }
            Source::Generated(_) => VectorSeq::generated(nonneg, move |n| f(n, this.get(n))),
        }
    }
}

/// Free-function form of [`VectorSeq::abs_transform`].
pub fn abs_transform(x: &VectorSeq) -> VectorSeq {
    x.abs_transform()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use alloc::vec;
    use proptest::prelude::*;

    fn v(entries: &[(u64, i64)]) -> SparseVec {
        SparseVec::from_entries(entries.iter().map(|&(k, x)| (k, Rational::from_integer(x.into()))))
    }

    #[test]
    fn signed_pair_evaluates_to_two() {
        let x = VectorSeq::explicit(vec![v(&[(0, 1), (1, -1)]), v(&[(0, 1), (1, 1)])]);
        assert_eq!(x.phi(&FinSet::from([0, 1])), int(2));
        assert_eq!(x.phi(&FinSet::new()), int(0));
        assert_eq!(x.phi(&FinSet::from([0])), int(1));
    }

    #[test]
    fn abs_transform_flips_signs() {
        let x = VectorSeq::explicit(vec![v(&[(0, 1), (1, -1)])]);
        let y = x.abs_transform();
        assert!(y.is_nonneg());
        assert_eq!(y.get(0), v(&[(0, 1), (1, 1)]));
        let z = y.abs_transform();
        assert_eq!(z.get(0), y.get(0));
    }

    #[test]
    fn projections() {
        let a = v(&[(0, 3), (2, -5), (7, 1)]);
        assert_eq!(a.norm(), int(5));
        assert_eq!(a.head(3), v(&[(0, 3), (2, -5)]));
        assert_eq!(a.window(1, 8), v(&[(2, -5), (7, 1)]));
        assert_eq!(a.sub(&a.head(3)), v(&[(7, 1)]));
        assert_eq!(SparseVec::unit(4, rat(1, 2)).norm(), rat(1, 2));
    }

    fn arb_seq() -> impl Strategy<Value = VectorSeq> {
        proptest::collection::vec(proptest::collection::vec((0u64..5, -4i64..5), 0..4), 1..8).prop_map(|rows| {
            VectorSeq::explicit(rows.iter().map(|r| v(r)).collect())
        })
    }

    fn brute(x: &VectorSeq, f: &FinSet) -> Rational {
        let mut best = Rational::zero();
        for m in f.subset_masks() {
            let s = f.subset(m).iter().fold(SparseVec::new(), |acc, n| acc.add(&x.get(n)));
            best = best.max(s.norm());
        }
        best
    }

    proptest! {
        #[test]
        fn closed_form_matches_subset_sup(x in arb_seq(), mask in 0u64..256) {
            let f = FinSet::from_mask(&[0, 1, 2, 3, 4, 5, 6, 7], mask);
            prop_assert_eq!(x.phi(&f), brute(&x, &f));
        }

        #[test]
        fn abs_never_decreases(x in arb_seq(), mask in 0u64..256) {
            let f = FinSet::from_mask(&[0, 1, 2, 3, 4, 5, 6, 7], mask);
            prop_assert!(x.abs_transform().phi(&f) >= x.phi(&f));
        }
    }
}
