//! Selectors that pick sparse subsequences with exactly certified bounds.
//!
//! Every selector returns a [`SelectorCertificate`]: the selected indices `B`,
//! a bound `M`, and a ledger of exact inequalities. The certificate is verified
//! when every inequality holds and `φ(B) ≤ M`, which by monotonicity bounds
//! `φ(F)` for every `F ⊆ B`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{Signed, Zero};

use crate::colorings::{c0like_coloring, climbs, level_map, level_partition, schreier_zero_homogeneous, ColoringError};
use crate::ideals::{has_property_a, PropertyA};
use crate::rational::{int, pow2_inv, ExtRat, Rational};
use crate::set::FinSet;
use crate::spec::{EvalError, SubmeasureSpec};
use crate::stream::{ColumnModulus, SetStream};
use crate::vectors::{SparseVec, VectorSeq};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
}

impl Relation {
    pub fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Relation::Lt => lhs < rhs,
            Relation::Le => lhs <= rhs,
            Relation::Eq => lhs == rhs,
            Relation::Ge => lhs >= rhs,
            Relation::Gt => lhs > rhs,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Lt => "<",
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
            Relation::Gt => ">",
        })
    }
}

/// One exact inequality of a certificate ledger.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inequality {
    pub label: String,
    pub lhs: Rational,
    pub rel: Relation,
    pub rhs: Rational,
    pub holds: bool,
}

impl Inequality {
    pub fn new(label: impl Into<String>, lhs: Rational, rel: Relation, rhs: Rational) -> Self {
        let holds = rel.holds(&lhs, &rhs);
        Inequality { label: label.into(), lhs, rel, rhs, holds }
    }
}

/// Which argument produced the selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    SmallNorm,
    PropertyA,
    Trapped,
    C0Like,
    Schreier,
    BlockSequence,
    /// Norms tend to zero along the stream.
    TallNormNull,
    /// A norm-small subsequence exists inside the stream.
    TallSmallInside,
    /// Norms are bounded below; block-sequence selection.
    TallBounded,
}

impl Route {
    pub fn name(self) -> &'static str {
        match self {
            Route::SmallNorm => "small-norm",
            Route::PropertyA => "property-a",
            Route::Trapped => "trapped",
            Route::C0Like => "c0like",
            Route::Schreier => "schreier",
            Route::BlockSequence => "bp",
            Route::TallNormNull => "tall:norm-null",
            Route::TallSmallInside => "tall:small-inside",
            Route::TallBounded => "tall:bounded-below",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelectorCertificate {
    pub selected: FinSet,
    pub bound: Rational,
    /// `φ(B)`, the largest value over subsets of the selection.
    pub value: Rational,
    pub evidence: Vec<Inequality>,
    pub verified: bool,
    /// False when the argument relies on a budgeted scan instead of a modulus or an exhausted stream.
    pub certified: bool,
    pub route: Route,
}

impl SelectorCertificate {
    fn finish(selected: FinSet, bound: Rational, value: Rational, mut evidence: Vec<Inequality>, certified: bool, route: Route) -> Self {
        evidence.push(Inequality::new("φ(B) <= M", value.clone(), Relation::Le, bound.clone()));
        let verified = evidence.iter().all(|e| e.holds);
        SelectorCertificate { selected, bound, value, evidence, verified, certified, route }
    }

    pub fn failed(&self) -> impl Iterator<Item = &Inequality> {
        self.evidence.iter().filter(|e| !e.holds)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SelectorError {
    #[error("property A does not hold: {0:?}")]
    PropertyANotHolding(PropertyA),
    #[error("no qualifying element at stage {stage} after scanning {scanned}; picked so far {picked}")]
    Inconclusive { stage: usize, picked: FinSet, scanned: u64 },
    #[error("no extension of {selected} found after scanning {scanned}")]
    NoExtension { selected: FinSet, scanned: u64 },
    #[error("only color-1 Schreier elements found (last witness: q = {q}, coordinate {k:?})")]
    ColorOneOnly { q: u64, k: Option<u64> },
    #[error("alpha must be positive")]
    AlphaNotPositive,
    #[error("‖x_{index}‖ = {norm} lies below alpha")]
    NormBelowAlpha { index: u64, norm: Rational },
    #[error("certified mode needs a column modulus on the stream")]
    MissingModulus,
    #[error("modulus promised an index below {promised} with ‖S_{cut} x_b‖ < {tolerance}, none found")]
    ModulusViolated { cut: u64, tolerance: Rational, promised: u64 },
    #[error("norms keep growing along the scan (‖x_{index}‖ = {norm}); the sequence is not weakly null")]
    Unbounded { index: u64, norm: Rational },
    #[error("stream holds {have} elements, {want} needed")]
    ShortStream { have: usize, want: usize },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
}

fn finite_value(v: ExtRat) -> Rational {
    match v {
        ExtRat::Finite(r) => r,
        ExtRat::Infinite => panic!("selectors only handle finitely valued points"),
    }
}

/// Picks `b_0 < b_1 < ...` with `φ{b_k} ≤ 2^{-k}`; then `φ(B) ≤ Σ 2^{-k} ≤ 2`.
pub fn small_norm_selector(spec: &SubmeasureSpec, stream: &mut SetStream, len: usize, budget: u64) -> Result<SelectorCertificate, SelectorError> {
    let mut picks = Vec::new();
    let mut evidence = Vec::new();
    let mut scanned = 0u64;
    let mut sum = Rational::zero();
    for k in 0..len {
        let tol = pow2_inv(k as u64);
        loop {
            if scanned >= budget {
                return Err(SelectorError::Inconclusive { stage: k, picked: FinSet::from(picks), scanned });
            }
            let Some(n) = stream.next() else {
                return Err(SelectorError::Inconclusive { stage: k, picked: FinSet::from(picks), scanned });
            };
            scanned += 1;
            let v = finite_value(spec.singleton(n)?);
            if v <= tol {
                evidence.push(Inequality::new(format!("φ{{{n}}} <= 2^-{k}"), v.clone(), Relation::Le, tol));
                sum += v;
                picks.push(n);
                break;
            }
        }
    }
    let two = int(2);
    evidence.push(Inequality::new("Σ φ{b_k} <= 2", sum, Relation::Le, two.clone()));
    let b = FinSet::from(picks);
    let value = finite_value(spec.eval(&b)?);
    Ok(SelectorCertificate::finish(b, two, value, evidence, true, Route::SmallNorm))
}

/// Picks `b_k` with `φ{b_k} ≤ 2^{-k}`, or reports the stream trapped in a level set of finite value.
///
/// When stage `k` finds nothing, the scanned elements lie in `{n : φ{n} > 2^{-k}}`, whose value
/// the oracle bounds. The trapped certificate is certified only when the stream ran out.
pub fn property_a_selector(spec: &SubmeasureSpec, stream: &mut SetStream, len: usize, budget: u64) -> Result<SelectorCertificate, SelectorError> {
    let schedule: Vec<Rational> = (0..len as u64).map(pow2_inv).collect();
    let verdict = has_property_a(spec, &schedule);
    let PropertyA::Holds { bounds } = verdict else {
        return Err(SelectorError::PropertyANotHolding(verdict));
    };
    let mut picks: Vec<u64> = Vec::new();
    let mut evidence = Vec::new();
    let mut pick_sum = Rational::zero();
    let mut scanned = 0u64;
    for k in 0..len {
        let tol = pow2_inv(k as u64);
        let mut trapped: Vec<u64> = Vec::new();
        let mut exhausted = false;
        let found = loop {
            if scanned >= budget {
                break None;
            }
            let Some(n) = stream.next() else {
                exhausted = true;
                break None;
            };
            scanned += 1;
            let v = finite_value(spec.singleton(n)?);
            if v <= tol {
                break Some((n, v));
            }
            trapped.push(n);
        };
        match found {
            Some((n, v)) => {
                evidence.push(Inequality::new(format!("φ{{{n}}} <= 2^-{k}"), v.clone(), Relation::Le, tol));
                pick_sum += v;
                picks.push(n);
            }
            None if trapped.is_empty() && !exhausted => {
                return Err(SelectorError::Inconclusive { stage: k, picked: FinSet::from(picks), scanned });
            }
            None => {
                let level = bounds[k].1.clone();
                for &n in &trapped {
                    let v = finite_value(spec.singleton(n)?);
                    evidence.push(Inequality::new(format!("φ{{{n}}} > 2^-{k}"), v, Relation::Gt, tol.clone()));
                }
                evidence.push(Inequality::new(format!("φ({{n : φ{{n}} > 2^-{k}}}) from the level-set oracle"), level.clone(), Relation::Eq, level.clone()));
                let bound = level + &pick_sum;
                let b: FinSet = picks.iter().chain(&trapped).copied().collect();
                let value = finite_value(spec.eval(&b)?);
                return Ok(SelectorCertificate::finish(b, bound, value, evidence, exhausted, Route::Trapped));
            }
        }
    }
    let two = int(2);
    evidence.push(Inequality::new("Σ φ{b_k} <= 2", pick_sum, Relation::Le, two.clone()));
    let b = FinSet::from(picks);
    let value = finite_value(spec.eval(&b)?);
    Ok(SelectorCertificate::finish(b, two, value, evidence, true, Route::PropertyA))
}

fn coordinate_sums(x: &VectorSeq, b: &FinSet) -> BTreeMap<u64, Rational> {
    let mut sums: BTreeMap<u64, Rational> = BTreeMap::new();
    for n in b {
        for (&k, v) in x.get(n).entries() {
            *sums.entry(k).or_insert_with(Rational::zero) += v;
        }
    }
    sums
}

/// Greedily extends a 1-homogeneous set of the level-inclusion coloring.
///
/// Along such a set each coordinate climbs strictly through the dyadic levels,
/// so every coordinate sum is at most `Σ 2^{-i} = 2`.
pub fn c0like_selector(x: &VectorSeq, stream: &mut SetStream, len: usize, budget: u64) -> Result<SelectorCertificate, SelectorError> {
    let coloring = c0like_coloring(x, 0)?;
    let mut h: Vec<u64> = Vec::new();
    let mut maps: Vec<BTreeMap<u64, u32>> = Vec::new();
    let mut scanned = 0u64;
    while h.len() < len {
        if scanned >= budget {
            return Err(SelectorError::NoExtension { selected: FinSet::from(h), scanned });
        }
        let Some(m) = stream.next() else {
            return Err(SelectorError::NoExtension { selected: FinSet::from(h), scanned });
        };
        scanned += 1;
        level_partition(x, m)?;
        let lm = level_map(&x.get(m));
        if maps.iter().rev().all(|ln| climbs(ln, &lm)) {
            h.push(m);
            maps.push(lm);
        }
    }
    let b = FinSet::from(h);
    let mut evidence = Vec::new();
    let pairs = (b.len() * b.len().saturating_sub(1) / 2) as u64;
    let ones = b.iter().enumerate().map(|(t, n)| b.iter().skip(t + 1).filter(|&m| coloring.color(n, m) == 1).count() as u64).sum::<u64>();
    evidence.push(Inequality::new("pairs of color 1", int(ones), Relation::Eq, int(pairs)));
    let bound = if b.len() == 1 { x.norm(b.as_slice()[0]) } else { int(2) };
    let sums = coordinate_sums(x, &b);
    let max_sum = sums.values().max().cloned().unwrap_or_else(Rational::zero);
    evidence.push(Inequality::new("max_k Σ_{n∈B} x_n(k) <= 2", max_sum, Relation::Le, int(2)));
    let value = x.phi(&b);
    Ok(SelectorCertificate::finish(b, bound, value, evidence, true, Route::C0Like))
}

fn levels_above(x: &VectorSeq, n: u64, p: u32) -> Result<BTreeMap<u32, FinSet>, ColoringError> {
    Ok(level_partition(x, n)?.cells.into_iter().filter(|(i, _)| *i > p).collect())
}

/// Builds `H = {q} ∪ ...` on which every Schreier element has `c_3 = 0` and whose
/// level cells above `p` are pairwise disjoint; the bound is `q + 2`.
pub fn schreier_selector(x: &VectorSeq, p: u32, stream: &mut SetStream, len: usize, budget: u64) -> Result<SelectorCertificate, SelectorError> {
    let cand = stream.take_prefix(budget);
    let mut cells = BTreeMap::new();
    for &n in &cand {
        cells.insert(n, levels_above(x, n, p)?);
    }
    let disjoint = |a: u64, b: u64| cells[&a].iter().all(|(i, s): (&u32, &FinSet)| cells[&b].get(i).is_none_or(|t| s.is_disjoint(t)));
    let mut last_witness = (0u64, None);
    for (t, &q) in cand.iter().enumerate() {
        let mut h = FinSet::from([q]);
        if let Err(w) = schreier_zero_homogeneous(&h, x, p) {
            last_witness = w;
            continue;
        }
        for &y in &cand[t + 1..] {
            if h.len() >= len {
                break;
            }
            if !h.iter().all(|a| disjoint(a, y)) {
                continue;
            }
            let mut next = h.clone();
            next.insert(y);
            match schreier_zero_homogeneous(&next, x, p) {
                Ok(()) => h = next,
                Err(w) => last_witness = w,
            }
        }
        if h.len() >= len {
            let mut evidence = Vec::new();
            let thr = pow2_inv(p as u64 + 1);
            for (s, &a) in h.as_slice().iter().enumerate() {
                let mut count: BTreeMap<u64, u64> = BTreeMap::new();
                for b in h.iter().skip(s + 1) {
                    for (&k, v) in x.get(b).entries() {
                        if *v >= thr {
                            *count.entry(k).or_insert(0) += 1;
                        }
                    }
                }
                let worst = count.values().max().copied().unwrap_or(0);
                evidence.push(Inequality::new(format!("max_k #{{n ∈ H, n > {a} : x_n(k) >= 2^-{}}} < {a}", p + 1), int(worst), Relation::Lt, int(a)));
            }
            let overlaps = h.iter().enumerate().map(|(s, a)| h.iter().skip(s + 1).filter(|&b| !disjoint(a, b)).count() as u64).sum::<u64>();
            evidence.push(Inequality::new(format!("pairs overlapping above level {p}"), int(overlaps), Relation::Eq, int(0)));
            let value = x.phi(&h);
            return Ok(SelectorCertificate::finish(h, int(q + 2), value, evidence, true, Route::Schreier));
        }
    }
    Err(SelectorError::ColorOneOnly { q: last_witness.0, k: last_witness.1 })
}

/// A block-sequence selection: indices `b_k`, cuts `n_k` and blocks `y_k = x_{b_k}` on `[n_{k-1}, n_k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BpSelection {
    pub b: Vec<u64>,
    pub cuts: Vec<u64>,
    pub blocks: Vec<SparseVec>,
    pub alpha: Rational,
}

/// Whether a column modulus must back every choice of `b_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BpMode {
    Certified,
    Heuristic,
}

/// Least `n ≥ floor` with `‖x − S_n x‖ < tol`, where `S_n` keeps coordinates below `n`.
fn tail_cut(v: &SparseVec, floor: u64, tol: &Rational) -> u64 {
    let mut tail: Vec<(u64, Rational)> = v.entries().iter().map(|(&k, r)| (k, r.abs())).collect();
    // suffix maxima of |x(k)| over k ≥ cut
    let mut suffix = Rational::zero();
    let mut cut = tail.last().map_or(0, |(k, _)| k + 1);
    while let Some((k, r)) = tail.pop() {
        let m = suffix.clone().max(r);
        if m >= *tol {
            break;
        }
        suffix = m;
        cut = k;
    }
    cut.max(floor)
}

/// The selection recursion with tolerance `α/2^{k+3}` at step `k ≥ 1`:
/// `n_k` is the least cut past `n_{k-1}` leaving a tail below tolerance, and
/// `b_{k+1}` the least later index whose head `S_{n_k} x_b` is below the next tolerance.
pub fn bp_select(x: &VectorSeq, stream: &mut SetStream, alpha: &Rational, len: usize, budget: u64, mode: BpMode) -> Result<(BpSelection, SelectorCertificate), SelectorError> {
    if !alpha.is_positive() {
        return Err(SelectorError::AlphaNotPositive);
    }
    let modulus: Option<ColumnModulus> = stream.modulus_fn();
    if mode == BpMode::Certified && modulus.is_none() {
        return Err(SelectorError::MissingModulus);
    }
    let tol = |k: usize| alpha * pow2_inv(k as u64 + 3);
    let mut sel = BpSelection { b: Vec::new(), cuts: Vec::new(), blocks: Vec::new(), alpha: alpha.clone() };
    let mut evidence = Vec::new();
    let mut scanned = 0u64;
    let mut prev_cut = 0u64;
    let mut ratio_sum = Rational::zero();
    let mut sup_norm = Rational::zero();
    for k in 1..=len {
        let t = tol(k);
        let promised = if k > 1 { modulus.as_ref().map(|m| m(prev_cut, &t)) } else { None };
        let (b, v) = loop {
            if scanned >= budget {
                return Err(SelectorError::ShortStream { have: sel.b.len(), want: len });
            }
            let Some(b) = stream.next() else {
                return Err(SelectorError::ShortStream { have: sel.b.len(), want: len });
            };
            scanned += 1;
            let v = x.get(b);
            let norm = v.norm();
            if norm < *alpha {
                return Err(SelectorError::NormBelowAlpha { index: b, norm });
            }
            if k == 1 || v.head(prev_cut).norm() < t {
                break (b, v);
            }
            if let Some(p) = promised {
                if b >= p {
                    return Err(SelectorError::ModulusViolated { cut: prev_cut, tolerance: t, promised: p });
                }
            }
        };
        let head = v.head(prev_cut).norm();
        if k > 1 {
            evidence.push(Inequality::new(format!("‖S_{prev_cut} x_{b}‖ < α/2^{}", k + 3), head.clone(), Relation::Lt, t.clone()));
        }
        let cut = tail_cut(&v, prev_cut + 1, &t);
        let tail = v.sub(&v.head(cut)).norm();
        evidence.push(Inequality::new(format!("‖x_{b} - S_{cut} x_{b}‖ < α/2^{}", k + 3), tail.clone(), Relation::Lt, t.clone()));
        evidence.push(Inequality::new(format!("‖x_{b} - S_{cut} x_{b}‖ < α/2^{} (stated bound)", k + 1), tail, Relation::Lt, alpha * pow2_inv(k as u64 + 1)));
        let y = v.window(prev_cut, cut);
        let gap = v.sub(&y).norm();
        let ynorm = y.norm();
        let step = alpha * pow2_inv(k as u64 + 2);
        evidence.push(Inequality::new(format!("‖x_{b} - y_{k}‖ <= α/2^{}", k + 2), gap.clone(), Relation::Le, step.clone()));
        evidence.push(Inequality::new(format!("‖y_{k}‖ >= α - α/2^{}", k + 2), ynorm.clone(), Relation::Ge, alpha - &step));
        if ynorm.is_positive() {
            ratio_sum += gap / &ynorm;
        }
        sup_norm = sup_norm.max(v.norm());
        sel.b.push(b);
        sel.cuts.push(cut);
        sel.blocks.push(y);
        prev_cut = cut;
    }
    evidence.push(Inequality::new("Σ ‖x_b_k - y_k‖/‖y_k‖ < 1/2", ratio_sum, Relation::Lt, Rational::new(1.into(), 2.into())));
    let overlaps = sel.blocks.windows(2).filter(|w| match (w[0].entries().keys().last(), w[1].entries().keys().next()) {
        (Some(a), Some(b)) => a >= b,
        _ => false,
    });
    evidence.push(Inequality::new("overlapping consecutive blocks", int(overlaps.count() as u64), Relation::Eq, int(0)));
    let bound = sup_norm + alpha / int(2);
    let b = FinSet::from(sel.b.clone());
    let value = x.phi(&b);
    let cert = SelectorCertificate::finish(b, bound, value, evidence, mode == BpMode::Certified, Route::BlockSequence);
    Ok((sel, cert))
}

/// Dispatches on the norm profile of a scanned prefix.
///
/// Fails when the running maximum of the norms still grows in the second half of the scan.
pub fn tall_selector(x: &VectorSeq, stream: &mut SetStream, len: usize, budget: u64) -> Result<SelectorCertificate, SelectorError> {
    let modulus = stream.modulus_fn();
    let prefix = stream.take_prefix(budget);
    if prefix.len() < len {
        return Err(SelectorError::ShortStream { have: prefix.len(), want: len });
    }
    let norms: Vec<Rational> = prefix.iter().map(|&n| x.norm(n)).collect();
    let half = norms.len() / 2;
    let first_max = norms[..half].iter().max().cloned().unwrap_or_else(Rational::zero);
    if let Some(t) = (half..norms.len()).find(|&t| norms[t] > first_max && norms[t] > norms[..t].iter().max().cloned().unwrap_or_else(Rational::zero)) {
        let last_growth = (t..norms.len()).filter(|&s| norms[s] > norms[..s].iter().max().cloned().unwrap_or_else(Rational::zero)).count();
        if last_growth > 1 {
            return Err(SelectorError::Unbounded { index: prefix[t], norm: norms[t].clone() });
        }
    }
    let restream = |set: Vec<u64>| {
        let s = SetStream::new(set.into_iter());
        match &modulus {
            Some(m) => s.with_modulus(m.clone()),
            None => s,
        }
    };
    let spec = SubmeasureSpec::Vectors(x.clone());
    let quarter = norms.len() - norms.len() / 4;
    let small = pow2_inv(len.saturating_sub(1) as u64);
    if norms[quarter..].iter().all(|v| *v <= small) {
        let mut c = small_norm_selector(&spec, &mut restream(prefix.clone()), len, budget)?;
        c.route = Route::TallNormNull;
        return Ok(c);
    }
    if let Ok(mut c) = small_norm_selector(&spec, &mut restream(prefix.clone()), len, budget) {
        c.route = Route::TallSmallInside;
        return Ok(c);
    }
    let alpha = norms.iter().filter(|v| v.is_positive()).min().cloned().ok_or(SelectorError::ShortStream { have: 0, want: len })?;
    let kept: Vec<u64> = prefix.iter().zip(&norms).filter(|(_, v)| v.is_positive()).map(|(&n, _)| n).collect();
    let mode = if modulus.is_some() { BpMode::Certified } else { BpMode::Heuristic };
    let (_, mut c) = bp_select(x, &mut restream(kept), &alpha, len, budget, mode)?;
    c.route = Route::TallBounded;
    Ok(c)
}

/// `y_n(k) = ‖x_n‖/2^i` when `‖x_n‖/2^{i+1} < x_n(k) ≤ ‖x_n‖/2^i` for some `i < n`, else 0.
///
/// Each `y_n` takes at most `n+1` values, kept coordinates satisfy `x ≤ y < 2x`,
/// and zeroed coordinates are at most `‖x_n‖/2^n`.
pub fn quantize_c00(x: &VectorSeq) -> VectorSeq {
    x.map(
        |n, v| {
            let norm = v.norm();
            if norm.is_zero() {
                return v;
            }
            let entries = v.entries().iter().filter_map(|(&k, r)| {
                let t = r / &norm;
                // bands are closed on top: t = 2^-j lies in band j
                let level = crate::colorings::dyadic_level(&t);
                let band = if t == pow2_inv(level as u64 + 1) { level + 1 } else { level };
                ((band as u64) < n).then(|| (k, &norm * pow2_inv(band as u64)))
            });
            SparseVec::from_entries(entries.collect::<Vec<_>>())
        },
        true,
    )
}

/// Tail modulus: `k_n(ε)` with `|x_n(k)| < ε` for every `k > k_n(ε)`.
pub type TailModulus = dyn Fn(u64, &Rational) -> u64;

/// Zeroes coordinates beyond `k_n(2^{-n})`, so `‖x_n − y_n‖ < 2^{-n}`.
pub fn truncate_to_c00(x: &VectorSeq, modulus: Option<&TailModulus>, len: u64) -> Result<VectorSeq, SelectorError> {
    let m = modulus.ok_or(SelectorError::MissingModulus)?;
    Ok(VectorSeq::explicit((0..len).map(|n| x.get(n).head(m(n, &pow2_inv(n)) + 1)).collect()))
}

/// Replaces `x` by a sequence with finitely supported columns and the same values on the given sets.
///
/// Column `j` of the result is the coordinate of `x` attaining `φ_x(A_j)`, with the sign
/// achieving it, restricted to `A_j`. Values agree on every `A_j` and never exceed `φ_x`;
/// with all singletons among the `A_j`, norms are preserved.
pub fn wstar_nullify(x: &VectorSeq, sets: &[FinSet]) -> VectorSeq {
    let len = sets.iter().filter_map(|a| a.last()).max().map_or(0, |m| m + 1);
    let mut rows: Vec<BTreeMap<u64, Rational>> = (0..len).map(|_| BTreeMap::new()).collect();
    for (j, a) in sets.iter().enumerate() {
        let mut pos: BTreeMap<u64, Rational> = BTreeMap::new();
        let mut neg: BTreeMap<u64, Rational> = BTreeMap::new();
        for n in a {
            for (&k, v) in x.get(n).entries() {
                if v.is_positive() {
                    *pos.entry(k).or_insert_with(Rational::zero) += v;
                } else {
                    *neg.entry(k).or_insert_with(Rational::zero) -= v;
                }
            }
        }
        let best = pos.iter().map(|(&k, v)| (v.clone(), k, true)).chain(neg.iter().map(|(&k, v)| (v.clone(), k, false))).fold(None, |acc: Option<(Rational, u64, bool)>, c| match acc {
            Some(a) if a.0 >= c.0 => Some(a),
            _ => Some(c),
        });
        let Some((_, k, positive)) = best else { continue };
        for n in a {
            let v = x.entry(n, k);
            let w = if positive { v.max(Rational::zero()) } else { (-v).max(Rational::zero()) };
            if !w.is_zero() {
                rows[n as usize].insert(j as u64, w);
            }
        }
    }
    VectorSeq::explicit(rows.into_iter().map(SparseVec::from_entries).collect())
}

/// Named vector sequences used as selector instances.
pub mod instances {
    use super::*;
    use alloc::sync::Arc;

    /// `x_n = e_n`.
    pub fn basis() -> VectorSeq {
        VectorSeq::generated(true, |n| SparseVec::unit(n, int(1)))
    }

    /// Column modulus of [`basis`]: `S_k x_m = 0` for `m ≥ k`.
    pub fn basis_modulus() -> ColumnModulus {
        Arc::new(|k, _| k)
    }

    /// `x_n = e_n + 2^{-n-5} e_0`.
    pub fn perturbed_basis() -> VectorSeq {
        VectorSeq::generated(true, |n| SparseVec::unit(n, int(1)).add(&SparseVec::unit(0, pow2_inv(n + 5))))
    }

    /// Least `m ≥ k` with `‖S_k x_m‖ < ε`, for [`perturbed_basis`].
    pub fn perturbed_basis_modulus() -> ColumnModulus {
        Arc::new(|k, eps| {
            let mut m = k.max(1);
            while pow2_inv(m + 5) >= *eps {
                m += 1;
            }
            m
        })
    }

    /// `x_n = 2^{-n} e_n`.
    pub fn geometric() -> VectorSeq {
        VectorSeq::generated(true, |n| SparseVec::unit(n, pow2_inv(n)))
    }

    /// `e_n` at odd `n`, `2^{-n} e_n` at even `n`.
    pub fn mixed() -> VectorSeq {
        VectorSeq::generated(true, |n| SparseVec::unit(n, if n % 2 == 1 { int(1) } else { pow2_inv(n) }))
    }

    /// Every vector sits at level 0 on coordinate 0, so no two indices are colored 1.
    pub fn flat() -> VectorSeq {
        VectorSeq::generated(true, |_| SparseVec::unit(0, int(1)))
    }

    /// The class-block instance: coordinates `j = ⌊n/2^i⌋ − 1` carry `2^{-i-1}` for every `i` with `2^i ≤ n`.
    pub fn c0like_blocks() -> VectorSeq {
        VectorSeq::generated(true, |n| {
            SparseVec::from_entries((0..64u32).take_while(|&i| 1u64 << i <= n).map(|i| ((n >> i) - 1, pow2_inv(i as u64 + 1))).collect::<Vec<_>>())
        })
    }

    /// Looks up an instance by name.
    pub fn by_name(name: &str) -> Option<(VectorSeq, Option<ColumnModulus>)> {
        Some(match name {
            "basis" => (basis(), Some(basis_modulus())),
            "perturbed-basis" => (perturbed_basis(), Some(perturbed_basis_modulus())),
            "geometric" => (geometric(), Some(basis_modulus())),
            "mixed" => (mixed(), Some(basis_modulus())),
            "flat" => (flat(), None),
            "c0like-blocks" => (c0like_blocks(), None),
            "block-multiples" => (crate::ideals::block_multiples(Arc::new(crate::ideals::ArithV1)), None),
            _ => return None,
        })
    }

    pub const NAMES: [&str; 7] = ["basis", "perturbed-basis", "geometric", "mixed", "flat", "c0like-blocks", "block-multiples"];
}

#[cfg(test)]
mod tests {
    use super::instances::*;
    use super::*;
    use crate::ideals::{block_stream, diagonal_stream, ejemadecuada_generator, ArithV1, EjemVariant, PartitionScheme};
    use crate::rational::rat;
    use alloc::sync::Arc;
    use alloc::vec;
    use proptest::prelude::*;

    fn assert_verified(c: &SelectorCertificate) {
        let bad: Vec<&Inequality> = c.failed().collect();
        assert!(c.verified, "failed inequalities: {bad:?}");
    }

    #[test]
    fn small_norm_routes() {
        let g = SubmeasureSpec::Vectors(geometric());
        let c = small_norm_selector(&g, &mut SetStream::naturals(), 12, 100).unwrap();
        assert_eq!(c.selected, FinSet::range(12));
        assert_verified(&c);
        assert!(c.bound <= int(2));

        let e = ejemadecuada_generator(EjemVariant::A);
        let c = small_norm_selector(&e.spec, &mut SetStream::naturals(), 8, 10_000).unwrap();
        assert_verified(&c);
        let blocks: Vec<u64> = c.selected.iter().map(|m| ArithV1.block_of(m)).collect();
        for (k, b) in blocks.iter().enumerate() {
            assert!(*b >= k as u64);
        }
        let flat = SubmeasureSpec::Vectors(flat());
        assert!(matches!(small_norm_selector(&flat, &mut SetStream::naturals(), 3, 50), Err(SelectorError::Inconclusive { stage: 1, .. })));
    }

    #[test]
    fn property_a_branches() {
        let e = ejemadecuada_generator(EjemVariant::A);
        let s: Arc<dyn PartitionScheme> = Arc::new(ArithV1);
        let c = property_a_selector(&e.spec, &mut diagonal_stream(s.clone()), 10, 1000).unwrap();
        assert_eq!(c.route, Route::PropertyA);
        assert_verified(&c);
        assert!(c.bound <= int(2));

        // B_0 ∪ B_1 lies inside {φ{n} > 1/4}
        let inside = SetStream::filtered(|m| ArithV1.block_of(m) <= 1);
        let c = property_a_selector(&e.spec, &mut inside.into_iter().take(40).collect::<FinSet>().iter().collect::<Vec<_>>().into_iter().into_stream(), 5, 1000).unwrap();
        assert_eq!(c.route, Route::Trapped);
        assert!(c.certified);
        assert_verified(&c);
        let trapped = property_a_selector(&e.spec, &mut SetStream::filtered(|m| ArithV1.block_of(m) <= 1), 5, 200).unwrap();
        assert!(!trapped.certified && trapped.verified);
        assert_eq!(trapped.bound, int(3) + int(1) + rat(1, 2));

        let ed = SubmeasureSpec::construction(crate::ideals::EdSup(s));
        assert!(matches!(property_a_selector(&ed, &mut SetStream::naturals(), 3, 10), Err(SelectorError::PropertyANotHolding(_))));
    }

    trait IntoStream {
        fn into_stream(self) -> SetStream;
    }
    impl<I: Iterator<Item = u64> + 'static> IntoStream for I {
        fn into_stream(self) -> SetStream {
            SetStream::new(self)
        }
    }

    #[test]
    fn c0like_selection() {
        let x = c0like_blocks();
        let c = c0like_selector(&x, &mut SetStream::from(1), 10, 1 << 12).unwrap();
        assert_eq!(c.selected, (0..10).map(|i| 1u64 << i).collect());
        assert_verified(&c);
        let squares = SetStream::new((1u64..).map(|n| n * n));
        let c = c0like_selector(&x, &mut { squares }, 20, 5000).unwrap();
        assert_eq!(c.selected.len(), 20);
        assert_eq!(c.bound, int(2));
        assert_verified(&c);
        let one = c0like_selector(&x, &mut SetStream::from(5), 1, 10).unwrap();
        assert_eq!(one.selected, FinSet::from([5]));
        assert_eq!(one.bound, x.norm(5));
        assert!(matches!(c0like_selector(&flat(), &mut SetStream::naturals(), 2, 100), Err(SelectorError::NoExtension { .. })));
    }

    #[test]
    fn schreier_selection() {
        let c = schreier_selector(&basis(), 0, &mut SetStream::naturals(), 12, 200).unwrap();
        assert_eq!(c.selected.first(), Some(2));
        assert_eq!(c.bound, int(4));
        assert_verified(&c);
        let c = schreier_selector(&basis(), 0, &mut SetStream::from(7), 1, 5).unwrap();
        assert_eq!((c.selected.len(), c.bound.clone()), (1, int(9)));
        assert_verified(&c);
        // all mass on one coordinate: only color-1 elements
        assert!(matches!(schreier_selector(&flat(), 0, &mut SetStream::naturals(), 3, 3), Err(SelectorError::ColorOneOnly { .. })));
    }

    #[test]
    fn bp_on_basis_and_perturbation() {
        let mut s = SetStream::naturals().with_modulus(basis_modulus());
        let (sel, c) = bp_select(&basis(), &mut s, &int(1), 50, 1000, BpMode::Certified).unwrap();
        assert_eq!(sel.b, (0..50).collect::<Vec<_>>());
        assert_eq!(c.bound, rat(3, 2));
        for (k, &b) in sel.b.iter().enumerate() {
            assert_eq!(sel.blocks[k], basis().get(b));
        }
        assert_verified(&c);
        assert!(c.certified);

        let mut s = SetStream::naturals().with_modulus(perturbed_basis_modulus());
        let (sel, c) = bp_select(&perturbed_basis(), &mut s, &int(1), 60, 1000, BpMode::Certified).unwrap();
        assert_verified(&c);
        assert!(sel.b.windows(2).all(|w| w[1] == w[0] + 1));
        assert!(c.evidence.iter().any(|e| e.label.starts_with("‖x_1 - y_2‖") && e.lhs == pow2_inv(6)));
        assert_eq!(c.bound, rat(33, 32) + rat(1, 2));

        assert_eq!(bp_select(&basis(), &mut SetStream::naturals(), &int(0), 3, 10, BpMode::Heuristic).unwrap_err(), SelectorError::AlphaNotPositive);
        assert_eq!(bp_select(&basis(), &mut SetStream::naturals(), &int(1), 3, 10, BpMode::Certified).unwrap_err(), SelectorError::MissingModulus);
        assert!(matches!(bp_select(&geometric(), &mut SetStream::naturals(), &int(1), 3, 10, BpMode::Heuristic), Err(SelectorError::NormBelowAlpha { index: 1, .. })));
    }

    #[test]
    fn tall_routes() {
        let c = tall_selector(&geometric(), &mut SetStream::naturals(), 10, 400).unwrap();
        assert_eq!(c.route, Route::TallNormNull);
        assert_verified(&c);
        let c = tall_selector(&basis(), &mut SetStream::naturals().with_modulus(basis_modulus()), 10, 400).unwrap();
        assert_eq!(c.route, Route::TallBounded);
        assert_verified(&c);
        let c = tall_selector(&mixed(), &mut SetStream::naturals(), 10, 400).unwrap();
        assert_eq!(c.route, Route::TallSmallInside);
        assert_verified(&c);
        let s: Arc<dyn PartitionScheme> = Arc::new(ArithV1);
        let x = crate::ideals::block_multiples(s.clone());
        assert!(matches!(tall_selector(&x, &mut diagonal_stream(s.clone()), 10, 400), Err(SelectorError::Unbounded { .. })));
        // inside one block the norms are constant and the selection is a block sequence
        let c = tall_selector(&x, &mut block_stream(s, 3), 10, 400).unwrap();
        assert_eq!(c.route, Route::TallBounded);
        assert_verified(&c);
    }

    #[test]
    fn quantization_examples() {
        let y = quantize_c00(&basis());
        for n in 1..20 {
            assert_eq!(y.get(n), basis().get(n));
        }
        assert_eq!(y.get(0), SparseVec::new());
        // a coordinate at ‖x_n‖/2^{n+2} is dropped
        let x = VectorSeq::explicit(vec![SparseVec::new(), SparseVec::new(), SparseVec::new(), SparseVec::from_entries([(0, int(1)), (1, pow2_inv(5))])]);
        assert_eq!(quantize_c00(&x).get(3), SparseVec::unit(0, int(1)));
    }

    #[test]
    fn truncation_and_nullification() {
        let x = VectorSeq::generated(true, |n| SparseVec::from_entries((0..40).map(|k| (k, pow2_inv(n + k))).collect::<Vec<_>>()));
        assert_eq!(truncate_to_c00(&x, None, 3).unwrap_err(), SelectorError::MissingModulus);
        let m = |_: u64, _: &Rational| 0u64;
        let y = truncate_to_c00(&x, Some(&m), 20).unwrap();
        let total: Rational = (0..20).map(|n| x.get(n).sub(&y.get(n)).norm()).sum();
        assert!(total <= int(2));
        for n in 0..20 {
            assert!(x.get(n).sub(&y.get(n)).norm() <= pow2_inv(n));
        }

        let sets: Vec<FinSet> = (0..6).map(|n| FinSet::from([n])).chain([FinSet::from([0, 2, 4]), FinSet::range(6)]).collect();
        let z = wstar_nullify(&basis(), &sets);
        for n in 0..6 {
            assert_eq!(z.norm(n), int(1));
        }
        for a in &sets {
            assert_eq!(z.phi(a), basis().phi(a));
        }
    }

    fn small_vec() -> impl Strategy<Value = SparseVec> {
        proptest::collection::btree_map(0u64..12, (-8i64..=8, 1i64..=8), 0..6)
            .prop_map(|m| SparseVec::from_entries(m.into_iter().map(|(k, (p, q))| (k, rat(p, q))).collect::<Vec<_>>()))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn quantization_properties(vs in proptest::collection::vec(small_vec(), 1..8)) {
            let x = VectorSeq::explicit(vs.iter().map(|v| v.abs()).collect());
            let y = quantize_c00(&x);
            for n in 0..vs.len() as u64 {
                let (xv, yv) = (x.get(n), y.get(n));
                let norm = xv.norm();
                let distinct: alloc::collections::BTreeSet<Rational> = yv.entries().values().cloned().collect();
                prop_assert!(distinct.len() as u64 <= n);
                for (&k, r) in xv.entries() {
                    let q = yv.get(k);
                    if q.is_zero() {
                        prop_assert!(*r <= &norm * pow2_inv(n));
                    } else {
                        prop_assert!(*r <= q && q < r * int(2));
                    }
                }
            }
        }

        #[test]
        fn nullified_values_agree(vs in proptest::collection::vec(small_vec(), 1..7), masks in proptest::collection::vec(1u64..128, 1..10)) {
            let x = VectorSeq::explicit(vs.clone());
            let u: Vec<u64> = (0..vs.len() as u64).collect();
            let mut sets: Vec<FinSet> = u.iter().map(|&n| FinSet::from([n])).collect();
            sets.extend(masks.iter().map(|&m| FinSet::from_mask(&u, m & ((1 << u.len()) - 1))));
            let y = wstar_nullify(&x, &sets);
            for a in &sets {
                prop_assert_eq!(y.phi(a), x.phi(a));
            }
            for n in 0..vs.len() as u64 {
                prop_assert_eq!(y.norm(n), x.norm(n));
            }
            for m in 0..(1u64 << u.len()) {
                let f = FinSet::from_mask(&u, m);
                prop_assert!(y.phi(&f) <= x.phi(&f));
            }
        }

        #[test]
        fn bp_inequalities_hold_on_perturbed_streams(start in 0u64..20, len in 1usize..30) {
            let mut s = SetStream::from(start).with_modulus(perturbed_basis_modulus());
            let (_, c) = bp_select(&perturbed_basis(), &mut s, &int(1), len, 500, BpMode::Certified).unwrap();
            prop_assert!(c.verified);
        }
    }
}
