//! Pair colorings, homogeneous sets and the dyadic level structure of vector sequences.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_traits::{One, Signed};

use crate::cover::min_cover;
use crate::ideals::PartitionScheme;
use crate::rational::{pow2_inv, Rational};
use crate::set::FinSet;
use crate::stream::SetStream;
use crate::vectors::VectorSeq;

/// Largest set accepted by [`hom_cover_number`].
pub const HOM_COVER_CAP: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ColoringError {
    #[error("no homogeneous set of size {wanted} within the scan budget; largest found has color {color} and size {}", largest.len())]
    RamseyBudget { wanted: usize, color: u8, largest: FinSet },
    #[error("set of size {size} exceeds the cap {cap}")]
    CapExceeded { size: usize, cap: usize },
    #[error("search budget exhausted after {examined} candidates")]
    BudgetExhausted { examined: u64 },
    #[error("x_{n}({k}) = {value} lies outside [0, 1]; scale the sequence first")]
    Unscaled { n: u64, k: u64, value: Rational },
    #[error("x_{n} has {levels} nonempty levels, more than the allowed {allowed}")]
    TooManyLevels { n: u64, levels: usize, allowed: usize },
    #[error("{0} is not a Schreier element")]
    NotSchreier(FinSet),
    #[error("extracted set fails disjointness above {p} at indices {a} and {b}")]
    Verification { p: u32, a: u64, b: u64 },
}

/// Where a coloring came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColoringKind {
    Partition,
    Sierpinski,
    C0Like,
    Custom,
}

/// A symmetric coloring of pairs of naturals with colors 0 and 1.
#[derive(Clone)]
pub struct Coloring {
    kind: ColoringKind,
    rule: Arc<dyn Fn(u64, u64) -> u8 + Send + Sync>,
}

impl fmt::Debug for Coloring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Coloring({:?})", self.kind)
    }
}

impl Coloring {
    /// `rule(n, m)` is only called with `n < m`.
    pub fn new(kind: ColoringKind, rule: impl Fn(u64, u64) -> u8 + Send + Sync + 'static) -> Self {
        Coloring { kind, rule: Arc::new(rule) }
    }

    pub fn constant(c: u8) -> Self {
        Coloring::new(ColoringKind::Custom, move |_, _| c)
    }

    pub fn kind(&self) -> ColoringKind {
        self.kind
    }

    pub fn color(&self, a: u64, b: u64) -> u8 {
        debug_assert_ne!(a, b);
        if a < b {
            (self.rule)(a, b)
        } else {
            (self.rule)(b, a)
        }
    }

    /// Every pair of `h` has color `c`.
    pub fn is_homogeneous(&self, h: &FinSet, c: u8) -> bool {
        let s = h.as_slice();
        (0..s.len()).all(|i| s[i + 1..].iter().all(|&y| self.color(s[i], y) == c))
    }

    /// Homogeneous in some color.
    pub fn is_monochromatic(&self, h: &FinSet) -> bool {
        self.is_homogeneous(h, 0) || self.is_homogeneous(h, 1)
    }
}

/// Color 0 iff both points lie in the same block.
pub fn partition_coloring(scheme: Arc<dyn PartitionScheme>) -> Coloring {
    Coloring::new(ColoringKind::Partition, move |a, b| u8::from(scheme.block_of(a) != scheme.block_of(b)))
}

/// The `n`-th rational of `ℚ ∩ [0,1]` as `(p, q)` in lowest terms.
///
/// `r_0 = 0`, `r_1 = 1`, then the Stern–Brocot tree breadth-first, each level
/// left to right: `1/2, 1/3, 2/3, 1/4, 2/5, 3/5, 3/4, 1/5, ...`
pub fn stern_brocot(n: u64) -> (u64, u64) {
    match n {
        0 => (0, 1),
        1 => (1, 1),
        _ => {
            let m = n - 1;
            let depth = 63 - m.leading_zeros();
            let pos = m - (1u64 << depth);
            let (mut lo, mut hi) = ((0u64, 1u64), (1u64, 1u64));
            for bit in (0..depth).rev() {
                let med = (lo.0 + hi.0, lo.1 + hi.1);
                if pos >> bit & 1 == 1 {
                    lo = med;
                } else {
                    hi = med;
                }
            }
            (lo.0 + hi.0, lo.1 + hi.1)
        }
    }
}

pub fn stern_brocot_rational(n: u64) -> Rational {
    let (p, q) = stern_brocot(n);
    Rational::new(p.into(), q.into())
}

fn cmp_frac(a: (u64, u64), b: (u64, u64)) -> Ordering {
    (a.0 as u128 * b.1 as u128).cmp(&(b.0 as u128 * a.1 as u128))
}

/// For `n < m`: color 0 iff `r_n < r_m` in the Stern–Brocot enumeration.
pub fn sierpinski_coloring() -> Coloring {
    Coloring::new(ColoringKind::Sierpinski, |n, m| u8::from(cmp_frac(stern_brocot(n), stern_brocot(m)) != Ordering::Less))
}

/// Indices of `X = ∪_m X_m` among the first `limit` enumeration indices, with their `m`.
///
/// `X_m` is the greedy increasing subsequence of the enumeration inside
/// `(m/(m+1), (m+1)/(m+2))`, so each `X_m` is 0-homogeneous and the intervals increase with `m`.
pub fn sierpinski_parts(limit: u64) -> Vec<(u64, u64)> {
    let mut last: BTreeMap<u64, (u64, u64)> = BTreeMap::new();
    let mut out = Vec::new();
    for n in 0..limit {
        let r = stern_brocot(n);
        if r.0 == 0 || r.0 == r.1 {
            continue;
        }
        // m/(m+1) < p/q < (m+1)/(m+2)  iff  m < p/(q-p) < m+1
        let (p, d) = (r.0, r.1 - r.0);
        if p % d == 0 {
            continue;
        }
        let m = p / d;
        if last.get(&m).is_none_or(|&prev| cmp_frac(prev, r) == Ordering::Less) {
            last.insert(m, r);
            out.push((n, m));
        }
    }
    out
}

/// Extracts a homogeneous `L`-set from the first `scan_budget` stream elements.
///
/// Repeatedly takes the least remaining element as a pivot and keeps the
/// majority color class of its neighbours (ties go to 0). Pivots sharing a
/// pivot color form a homogeneous set.
pub fn ramsey_extract(c: &Coloring, stream: &mut SetStream, len: usize, scan_budget: u64) -> Result<(u8, FinSet), ColoringError> {
    assert!(len >= 2, "homogeneous sets of size below 2 are trivial");
    let mut rest: Vec<u64> = stream.take_prefix(scan_budget);
    let mut by_color: [Vec<u64>; 2] = [Vec::new(), Vec::new()];
    while !rest.is_empty() {
        let pivot = rest[0];
        let (zero, one): (Vec<u64>, Vec<u64>) = rest[1..].iter().partition(|&&y| c.color(pivot, y) == 0);
        let col = usize::from(one.len() > zero.len());
        by_color[col].push(pivot);
        rest = if col == 0 { zero } else { one };
        // any survivor extends every pivot class by one
        for col in 0..2 {
            let extra = usize::from(!rest.is_empty());
            if by_color[col].len() + extra >= len {
                let mut h: Vec<u64> = by_color[col].iter().copied().take(len).collect();
                if h.len() < len {
                    h.push(rest[0]);
                }
                let h = FinSet::from(h);
                assert!(c.is_homogeneous(&h, col as u8), "pivot construction yields homogeneous sets");
                return Ok((col as u8, h));
            }
        }
    }
    let col = usize::from(by_color[1].len() > by_color[0].len());
    Err(ColoringError::RamseyBudget { wanted: len, color: col as u8, largest: FinSet::from(by_color[col].clone()) })
}

/// Fewest homogeneous sets (of either color) covering `a`.
pub fn hom_cover_number(a: &FinSet, c: &Coloring) -> Result<u64, ColoringError> {
    let n = a.len();
    if n > HOM_COVER_CAP {
        return Err(ColoringError::CapExceeded { size: n, cap: HOM_COVER_CAP });
    }
    let pts = a.as_slice();
    let mut pair = vec![0u8; n * n];
    for i in 0..n {
        for j in i + 1..n {
            pair[i * n + j] = c.color(pts[i], pts[j]);
        }
    }
    let is_base: Vec<bool> = (0..1u64 << n)
        .map(|mask| {
            let idx: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            (0..2u8).any(|col| {
                idx.iter().enumerate().all(|(t, &i)| idx[t + 1..].iter().all(|&j| pair[i * n + j] == col))
            })
        })
        .collect();
    Ok(min_cover(n, &is_base).map_or(0, |cv| cv.size as u64))
}

/// Finds an `n`-set, homogeneous in color `1 - favored`, disjoint from `avoid`,
/// among the first `budget` candidates.
///
/// These are the finite sets a coloring favoring `favored` must contain in every positive set.
pub fn favors_witness(c: &Coloring, favored: u8, n: usize, avoid: &FinSet, candidates: &mut SetStream, budget: u64) -> Result<FinSet, ColoringError> {
    let want = 1 - favored;
    let pool: Vec<u64> = candidates.take_prefix(budget).into_iter().filter(|&x| !avoid.contains(x)).collect();
    if n == 0 {
        return Ok(FinSet::new());
    }
    let mut nodes = 0u64;
    let node_cap = budget.saturating_mul(1 << 10);
    let mut chosen = Vec::with_capacity(n);
    fn dfs(c: &Coloring, want: u8, pool: &[u64], start: usize, n: usize, chosen: &mut Vec<u64>, nodes: &mut u64, cap: u64) -> Option<bool> {
        if chosen.len() == n {
            return Some(true);
        }
        for i in start..pool.len() {
            *nodes += 1;
            if *nodes > cap {
                return None;
            }
            let y = pool[i];
            if chosen.iter().all(|&x| c.color(x, y) == want) {
                chosen.push(y);
                match dfs(c, want, pool, i + 1, n, chosen, nodes, cap) {
                    Some(true) => return Some(true),
                    None => return None,
                    Some(false) => {
                        chosen.pop();
                    }
                }
            }
        }
        Some(false)
    }
    match dfs(c, want, &pool, 0, n, &mut chosen, &mut nodes, node_cap) {
        Some(true) => Ok(FinSet::from(chosen)),
        _ => Err(ColoringError::BudgetExhausted { examined: pool.len() as u64 }),
    }
}

/// Dyadic level sets of one vector `x_n` with entries in `[0, 1]`.
///
/// `A_i = {k : 2^{-(i+1)} ≤ x_n(k) < 2^{-i}}`, with the value 1 placed at level 0.
/// Coordinates outside the support form `A_∞`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelPartition {
    pub index: u64,
    pub cells: BTreeMap<u32, FinSet>,
    pub support: FinSet,
}

impl LevelPartition {
    /// `L_n`, the nonempty finite levels.
    pub fn levels(&self) -> BTreeSet<u32> {
        self.cells.keys().copied().collect()
    }

    pub fn cell(&self, i: u32) -> FinSet {
        self.cells.get(&i).cloned().unwrap_or_default()
    }

    /// Level of coordinate `k`; `None` for `A_∞`.
    pub fn level_of(&self, k: u64) -> Option<u32> {
        self.cells.iter().find(|(_, s)| s.contains(k)).map(|(&i, _)| i)
    }

    pub fn min_level(&self) -> Option<u32> {
        self.cells.keys().next().copied()
    }
}

/// Level `i ≥ 0` of a value `v ∈ (0, 1]`.
pub fn dyadic_level(v: &Rational) -> u32 {
    debug_assert!(v.is_positive() && *v <= Rational::one());
    if v.is_one() {
        return 0;
    }
    let guess = (v.denom().bits() as i64 - v.numer().bits() as i64 - 1).max(0) as u32;
    let mut i = guess.saturating_sub(1);
    while pow2_inv(i as u64 + 1) > *v {
        i += 1;
    }
    i
}

/// The level partition of `x_n`; entries must lie in `[0, 1]`.
pub fn level_partition(x: &VectorSeq, n: u64) -> Result<LevelPartition, ColoringError> {
    let v = x.get(n);
    let mut cells: BTreeMap<u32, FinSet> = BTreeMap::new();
    for (&k, val) in v.entries() {
        if val.is_negative() || *val > Rational::one() {
            return Err(ColoringError::Unscaled { n, k, value: val.clone() });
        }
        cells.entry(dyadic_level(val)).or_default().insert(k);
    }
    Ok(LevelPartition { index: n, cells, support: v.support() })
}

/// For `n < m`: color 1 iff every cell `A^n_i` lies in `A^m_∞ ∪ ⋃_{j>i} A^m_j`.
///
/// The first `scan` vectors are validated up front.
pub fn c0like_coloring(x: &VectorSeq, scan: u64) -> Result<Coloring, ColoringError> {
    for n in 0..scan {
        level_partition(x, n)?;
    }
    let x = x.clone();
    Ok(Coloring::new(ColoringKind::C0Like, move |n, m| u8::from(climbs(&level_map(&x.get(n)), &level_map(&x.get(m))))))
}

/// Coordinate ↦ dyadic level for the positive entries of `v` (values above 1 count as level 0).
pub fn level_map(v: &crate::vectors::SparseVec) -> BTreeMap<u64, u32> {
    v.entries().iter().filter(|(_, r)| r.is_positive()).map(|(&k, r)| (k, dyadic_level(&r.clone().min(Rational::one())))).collect()
}

/// Every coordinate of `earlier` is absent from `later` or sits at a strictly higher level there.
pub fn climbs(earlier: &BTreeMap<u64, u32>, later: &BTreeMap<u64, u32>) -> bool {
    earlier.iter().all(|(k, &i)| later.get(k).is_none_or(|&j| j > i))
}

/// A family of partitions `Q_n` given by their finite cells `B^n_i`.
pub type Cells = dyn Fn(u64) -> BTreeMap<u32, FinSet>;

/// Extracts `target_len` indices and a threshold `p` with `B^n_i ∩ B^m_i = ∅` for all `i > p`
/// and distinct selected `n, m`, assuming at most `l` nonempty cells per index.
///
/// Follows the induction on `l`: first try a greedy run that is already disjoint
/// above the current threshold; otherwise fix the most frequent least level,
/// raise the threshold to it, drop that level and recurse.
pub fn eventually_disjoint_extract(cells: &Cells, candidates: &[u64], l: usize, target_len: usize) -> Result<(FinSet, u32), ColoringError> {
    let items: Vec<(u64, BTreeMap<u32, FinSet>)> = candidates.iter().map(|&n| (n, cells(n))).collect();
    for (n, c) in &items {
        if c.len() > l {
            return Err(ColoringError::TooManyLevels { n: *n, levels: c.len(), allowed: l });
        }
    }
    let refs: Vec<&(u64, BTreeMap<u32, FinSet>)> = items.iter().collect();
    let (chosen, p) = extract(&refs, l, target_len, 0).ok_or(ColoringError::BudgetExhausted { examined: candidates.len() as u64 })?;
    let full: BTreeMap<u64, &BTreeMap<u32, FinSet>> = items.iter().map(|(n, c)| (*n, c)).collect();
    for (t, &a) in chosen.iter().enumerate() {
        for &b in &chosen[t + 1..] {
            if !disjoint_above(full[&a], full[&b], p, &BTreeSet::new()) {
                return Err(ColoringError::Verification { p, a, b });
            }
        }
    }
    Ok((FinSet::from(chosen), p))
}

fn disjoint_above(a: &BTreeMap<u32, FinSet>, b: &BTreeMap<u32, FinSet>, p: u32, dropped: &BTreeSet<u32>) -> bool {
    a.iter().filter(|(i, _)| **i > p && !dropped.contains(i)).all(|(i, s)| b.get(i).is_none_or(|t| s.is_disjoint(t)))
}

fn extract(items: &[&(u64, BTreeMap<u32, FinSet>)], l: usize, target: usize, p: u32) -> Option<(Vec<u64>, u32)> {
    if items.len() < target {
        return None;
    }
    let mut run: Vec<&BTreeMap<u32, FinSet>> = Vec::new();
    let mut out = Vec::new();
    for (n, c) in items.iter().map(|x| (x.0, &x.1)) {
        if run.iter().all(|r| disjoint_above(r, c, p, &BTreeSet::new())) {
            run.push(c);
            out.push(n);
            if out.len() == target {
                return Some((out, p));
            }
        }
    }
    if l == 0 {
        return None;
    }
    let mut groups: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (t, it) in items.iter().enumerate() {
        if let Some((&v, _)) = it.1.iter().find(|(&i, _)| i > p) {
            groups.entry(v).or_default().push(t);
        }
    }
    let mut order: Vec<(u32, Vec<usize>)> = groups.into_iter().filter(|(_, g)| g.len() >= target).collect();
    order.sort_by_key(|(v, g)| (core::cmp::Reverse(g.len()), *v));
    for (v, g) in order {
        let sub: Vec<&(u64, BTreeMap<u32, FinSet>)> = g.iter().map(|&t| items[t]).collect();
        if let Some(found) = extract(&sub, l - 1, target, v) {
            return Some(found);
        }
    }
    None
}

/// `{q, n_1, ..., n_q}` with `q` the least element.
pub fn is_schreier(s: &FinSet) -> bool {
    s.first().is_some_and(|q| s.len() as u64 == q + 1)
}

/// `c_3(s) = 1` iff some coordinate `k` has `x_{n_j}(k) ≥ 2^{-p-1}` for every `n_j ∈ s ∖ {q}`.
pub fn schreier_c3(s: &FinSet, x: &VectorSeq, p: u32) -> Result<u8, ColoringError> {
    if !is_schreier(s) {
        return Err(ColoringError::NotSchreier(s.clone()));
    }
    let rest: Vec<u64> = s.iter().skip(1).collect();
    let Some((&first, others)) = rest.split_first() else { return Ok(1) };
    let thr = pow2_inv(p as u64 + 1);
    let v0 = x.get(first);
    let hit = v0.entries().iter().filter(|(_, v)| **v >= thr).any(|(&k, _)| others.iter().all(|&n| x.entry(n, k) >= thr));
    Ok(u8::from(hit))
}

/// Checks that every Schreier element inside `h` has `c_3 = 0`.
///
/// On failure returns `(q, k)`: with `q = 0` the element `{0}`, otherwise `q`
/// later members of `h` that all reach `2^{-p-1}` at coordinate `k`.
pub fn schreier_zero_homogeneous(h: &FinSet, x: &VectorSeq, p: u32) -> Result<(), (u64, Option<u64>)> {
    let thr = pow2_inv(p as u64 + 1);
    let s = h.as_slice();
    let heavy: Vec<Vec<u64>> = s.iter().map(|&n| x.get(n).entries().iter().filter(|(_, v)| **v >= thr).map(|(&k, _)| k).collect()).collect();
    for (t, &q) in s.iter().enumerate() {
        if q == 0 {
            return Err((0, None));
        }
        let mut count: BTreeMap<u64, u64> = BTreeMap::new();
        for ks in &heavy[t + 1..] {
            for &k in ks {
                *count.entry(k).or_insert(0) += 1;
            }
        }
        if let Some((&k, _)) = count.iter().find(|(_, &c)| c >= q) {
            return Err((q, Some(k)));
        }
    }
    Ok(())
}
