//! Finitely supported additive measures.

use alloc::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::rational::Rational;
use crate::set::FinSet;

/// `μ(A) = Σ_{n∈A} w(n)` with finitely many positive weights.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PointMeasure {
    weights: BTreeMap<u64, Rational>,
}

impl PointMeasure {
    pub fn new() -> Self {
        PointMeasure::default()
    }

    /// Keeps the positive entries; zero weights are dropped.
    ///
    /// Returns `None` if any weight is negative.
    pub fn from_weights(w: impl IntoIterator<Item = (u64, Rational)>) -> Option<Self> {
        let mut weights = BTreeMap::new();
        for (n, r) in w {
            if r.is_negative() {
                return None;
            }
            if !r.is_zero() {
                *weights.entry(n).or_insert_with(Rational::zero) += r;
            }
        }
        Some(PointMeasure { weights })
    }

    /// Counting measure with weight `w` on every point of `s`.
    pub fn uniform(s: &FinSet, w: Rational) -> Self {
        PointMeasure::from_weights(s.iter().map(|n| (n, w.clone()))).expect("nonnegative weight")
    }

    pub fn weight(&self, n: u64) -> Rational {
        self.weights.get(&n).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn weights(&self) -> &BTreeMap<u64, Rational> {
        &self.weights
    }

    pub fn support(&self) -> FinSet {
        self.weights.keys().copied().collect()
    }

    pub fn measure(&self, a: &FinSet) -> Rational {
        if a.len() < self.weights.len() {
            a.iter().filter_map(|n| self.weights.get(&n)).sum()
        } else {
            self.weights.iter().filter(|(n, _)| a.contains(**n)).map(|(_, w)| w).sum()
        }
    }

    pub fn total(&self) -> Rational {
        self.weights.values().sum()
    }

    pub fn restrict(&self, keep: impl Fn(u64) -> bool) -> Self {
        PointMeasure {
            weights: self.weights.iter().filter(|(n, _)| keep(**n)).map(|(n, w)| (*n, w.clone())).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.weights.is_empty()
    }
}
