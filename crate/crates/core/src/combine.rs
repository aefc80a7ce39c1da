//! Combinators on submeasures, the Fin-group metric, and Sum/Exh diagnostics.

use alloc::vec;
use alloc::vec::Vec;

use crate::measure::PointMeasure;
use crate::rational::ExtRat;
use crate::set::FinSet;
use crate::spec::{EvalError, SubmeasureSpec, SumPart};
use crate::stream::SetStream;

/// Largest number of product measures materialized by [`sum_combine`].
pub const PRODUCT_CAP: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CombineError {
    #[error("cannot combine an empty list of submeasures")]
    Empty,
}

/// `F ↦ max_i φ_i(F)`.
///
/// A list of measure suprema stays a measure supremum (the lists are concatenated).
pub fn sup_combine(specs: Vec<SubmeasureSpec>) -> Result<SubmeasureSpec, CombineError> {
    if specs.is_empty() {
        return Err(CombineError::Empty);
    }
    if specs.len() == 1 {
        return Ok(specs.into_iter().next().unwrap());
    }
    if specs.iter().all(|s| matches!(s, SubmeasureSpec::SupMeasures(_))) {
        let ms = specs
            .into_iter()
            .flat_map(|s| match s {
                SubmeasureSpec::SupMeasures(m) => m,
                _ => unreachable!(),
            })
            .collect();
        return Ok(SubmeasureSpec::SupMeasures(ms));
    }
    Ok(SubmeasureSpec::Sup(specs))
}

/// `F ↦ Σ_n φ_n(F ∩ B_n)` over a finite list of parts.
///
/// When every part is a measure supremum `sup_k ν_n^k`, the result is again one:
/// its measures are `Σ_n ν_n^{s(n)}|B_n` over all choice tuples `s`, as long as
/// there are at most [`PRODUCT_CAP`] of them.
pub fn sum_combine(parts: Vec<SumPart>) -> Result<SubmeasureSpec, CombineError> {
    if parts.is_empty() {
        return Err(CombineError::Empty);
    }
    let all_measures = parts.iter().all(|p| matches!(&p.spec, SubmeasureSpec::SupMeasures(m) if !m.is_empty()));
    if all_measures {
        let restricted: Vec<Vec<PointMeasure>> = parts
            .iter()
            .map(|p| match &p.spec {
                SubmeasureSpec::SupMeasures(ms) => ms.iter().map(|m| m.restrict(|n| p.block.contains(n))).collect(),
                _ => unreachable!(),
            })
            .collect();
        let count = restricted.iter().try_fold(1usize, |acc, v| acc.checked_mul(v.len()));
        if matches!(count, Some(c) if c <= PRODUCT_CAP) {
            let mut products = vec![PointMeasure::new()];
            for choices in &restricted {
                let mut next = Vec::with_capacity(products.len() * choices.len());
                for p in &products {
                    for c in choices {
                        let w = p.weights().iter().chain(c.weights()).map(|(n, w)| (*n, w.clone()));
                        next.push(PointMeasure::from_weights(w).expect("positive weights"));
                    }
                }
                products = next;
            }
            return Ok(SubmeasureSpec::SupMeasures(products));
        }
    }
    Ok(SubmeasureSpec::Sum(parts))
}

/// `d(A, B) = φ(A △ B)`.
pub fn symdiff_metric(spec: &SubmeasureSpec, a: &FinSet, b: &FinSet) -> Result<ExtRat, EvalError> {
    spec.eval(&a.symmetric_difference(b))
}

/// Finite evidence about `Sum(φ)` and `Exh(φ)` membership along a stream prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SumExhReport {
    /// Elements read from the stream.
    pub elements: Vec<u64>,
    /// True when the stream ended before the requested prefix.
    pub exhausted: bool,
    /// `(count, Σ_{i<count} φ{x_i})` at geometric checkpoints and at the end.
    pub partial_sums: Vec<(u64, ExtRat)>,
    /// `(m, φ({x_i : m ≤ i < len}))` at geometric cuts, ending with the empty tail.
    pub tails: Vec<(u64, ExtRat)>,
}

/// Balanced pairwise sum; keeps intermediate denominators small for long harmonic-like runs.
fn tree_sum(v: &[ExtRat]) -> ExtRat {
    match v.len() {
        0 => ExtRat::zero(),
        1 => v[0].clone(),
        n => tree_sum(&v[..n / 2]) + tree_sum(&v[n / 2..]),
    }
}

/// Partial sums of point values and tail values on the first `prefix` stream elements.
pub fn sum_exh_diagnostics(spec: &SubmeasureSpec, stream: &mut SetStream, prefix: u64) -> Result<SumExhReport, EvalError> {
    let elements = stream.take_prefix(prefix);
    let len = elements.len() as u64;
    let exhausted = len < prefix;
    let mut checkpoints: Vec<u64> = core::iter::successors(Some(1u64), |c| c.checked_mul(2)).take_while(|&c| c < len).collect();
    checkpoints.push(len);
    let mut values = Vec::with_capacity(elements.len());
    for &x in &elements {
        values.push(match stream.point_value(x) {
            Some(v) => v,
            None => spec.singleton(x)?,
        });
    }
    let mut partial_sums = Vec::new();
    let mut acc = ExtRat::zero();
    let mut from = 0usize;
    for &c in &checkpoints {
        acc = acc + tree_sum(&values[from..c as usize]);
        from = c as usize;
        partial_sums.push((c, acc.clone()));
    }
    let mut cuts = vec![0u64];
    cuts.extend(core::iter::successors(Some(1u64), |c| c.checked_mul(2)).take_while(|&c| c < len));
    cuts.push(len);
    cuts.dedup();
    let mut tails = Vec::with_capacity(cuts.len());
    for m in cuts {
        let tail: FinSet = elements[m as usize..].iter().copied().collect();
        tails.push((m, spec.eval(&tail)?));
    }
    Ok(SumExhReport { elements, exhausted, partial_sums, tails })
}
