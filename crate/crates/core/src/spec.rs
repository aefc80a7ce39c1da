//! Submeasure representations and their evaluation on finite sets.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::cover::{min_cover, DEFAULT_COVER_CAP};
use crate::measure::PointMeasure;
use crate::rational::{ExtRat, Rational};
use crate::set::FinSet;
use crate::vectors::VectorSeq;

/// Hard cap on the universe of a [`TableSpec`].
pub const TABLE_CAP: u32 = 20;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("element {element} lies outside the universe {{0..{universe}}}")]
    OutsideUniverse { element: u64, universe: u64 },
    #[error("search budget exhausted; value is at least {lower_bound}")]
    BudgetExhausted { lower_bound: ExtRat },
    #[error("set of size {size} exceeds the cap {cap}")]
    TooLarge { size: usize, cap: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpecError {
    #[error("table universe {0} exceeds the cap {TABLE_CAP}")]
    TableTooLarge(u32),
    #[error("table for universe {universe} needs {expected} values, got {got}")]
    TableLength { universe: u32, expected: usize, got: usize },
}

/// A user-supplied submeasure given by code.
pub trait SetFunction: Send + Sync {
    fn eval(&self, f: &FinSet) -> Result<ExtRat, EvalError>;

    fn name(&self) -> String {
        String::from("construction")
    }

    /// Exact values of level sets `{n : φ{n} > ε}`, when known in closed form.
    fn level_sets(&self) -> Option<Arc<dyn LevelSetOracle>> {
        None
    }
}

/// Closed-form access to the level sets `M_ε = {n : φ{n} > ε}`.
pub trait LevelSetOracle: Send + Sync {
    /// `φ(ℕ)`.
    fn total(&self) -> ExtRat;

    /// `φ(M_ε)`.
    fn level_set_value(&self, eps: &Rational) -> ExtRat;

    /// Some `N` with `M_ε ⊆ B_0 ∪ … ∪ B_N`, for block-structured examples.
    fn level_set_blocks(&self, _eps: &Rational) -> Option<u64> {
        None
    }
}

/// Explicit values on every subset of `{0..u-1}`, indexed by bitmask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableSpec {
    universe: u32,
    values: Vec<ExtRat>,
}

impl TableSpec {
    pub fn new(universe: u32, values: Vec<ExtRat>) -> Result<Self, SpecError> {
        if universe > TABLE_CAP {
            return Err(SpecError::TableTooLarge(universe));
        }
        let expected = 1usize << universe;
        if values.len() != expected {
            return Err(SpecError::TableLength { universe, expected, got: values.len() });
        }
        Ok(TableSpec { universe, values })
    }

    /// Tabulates `f` on every subset of `{0..u-1}`.
    pub fn from_fn(universe: u32, f: impl Fn(&FinSet) -> ExtRat) -> Result<Self, SpecError> {
        if universe > TABLE_CAP {
            return Err(SpecError::TableTooLarge(universe));
        }
        let base: Vec<u64> = (0..universe as u64).collect();
        let values = (0..1u64 << universe).map(|m| f(&FinSet::from_mask(&base, m))).collect();
        TableSpec::new(universe, values)
    }

    pub fn universe(&self) -> u32 {
        self.universe
    }

    pub fn values(&self) -> &[ExtRat] {
        &self.values
    }

    pub fn value_at(&self, mask: u64) -> &ExtRat {
        &self.values[mask as usize]
    }

    pub fn set_value(&mut self, mask: u64, v: ExtRat) {
        self.values[mask as usize] = v;
    }

    pub fn mask_of(&self, f: &FinSet) -> Result<u64, EvalError> {
        let mut m = 0u64;
        for x in f {
            if x >= self.universe as u64 {
                return Err(EvalError::OutsideUniverse { element: x, universe: self.universe as u64 });
            }
            m |= 1 << x;
        }
        Ok(m)
    }

    pub fn eval(&self, f: &FinSet) -> Result<ExtRat, EvalError> {
        Ok(self.values[self.mask_of(f)? as usize].clone())
    }
}

/// A failure of the submeasure axioms in a table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TableViolation {
    EmptyNonZero { value: ExtRat },
    /// `smaller ⊂ larger` but `φ(smaller) > φ(larger)`.
    Monotonicity { smaller: FinSet, larger: FinSet, smaller_value: ExtRat, larger_value: ExtRat },
    /// Disjoint `a`, `b` with `φ(a ∪ b) > φ(a) + φ(b)`.
    Subadditivity { a: FinSet, b: FinSet, union_value: ExtRat, sum: ExtRat },
}

impl fmt::Display for TableViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableViolation::EmptyNonZero { value } => write!(f, "φ(∅) = {value} ≠ 0"),
            TableViolation::Monotonicity { smaller, larger, smaller_value, larger_value } => {
                write!(f, "monotonicity: φ({smaller}) = {smaller_value} > φ({larger}) = {larger_value}")
            }
            TableViolation::Subadditivity { a, b, union_value, sum } => {
                write!(f, "subadditivity: φ({a} ∪ {b}) = {union_value} > φ({a}) + φ({b}) = {sum}")
            }
        }
    }
}

/// Every violation of the submeasure axioms in `t`.
///
/// Monotonicity is checked on one-point extensions and subadditivity on disjoint
/// pairs; together these hold iff the axioms hold on all pairs.
pub fn validate_table(t: &TableSpec) -> Vec<TableViolation> {
    let u = t.universe as usize;
    let base: Vec<u64> = (0..u as u64).collect();
    let set = |m: u64| FinSet::from_mask(&base, m);
    let mut out = Vec::new();
    if !t.values[0].is_zero() {
        out.push(TableViolation::EmptyNonZero { value: t.values[0].clone() });
    }
    let full = (1u64 << u) - 1;
    for m in 0..=full {
        for i in 0..u {
            if m >> i & 1 == 0 {
                let l = m | 1 << i;
                if t.values[m as usize] > t.values[l as usize] {
                    out.push(TableViolation::Monotonicity {
                        smaller: set(m),
                        larger: set(l),
                        smaller_value: t.values[m as usize].clone(),
                        larger_value: t.values[l as usize].clone(),
                    });
                }
            }
        }
    }
    for a in 1..=full {
        // disjoint b > a so each unordered pair is visited once
        let comp = full & !a;
        let mut b = comp;
        while b != 0 {
            if b > a {
                let sum = &t.values[a as usize] + &t.values[b as usize];
                let uv = &t.values[(a | b) as usize];
                if *uv > sum {
                    out.push(TableViolation::Subadditivity { a: set(a), b: set(b), union_value: uv.clone(), sum });
                }
            }
            b = (b - 1) & comp;
        }
    }
    out
}

/// Membership predicate for a block or domain.
#[derive(Clone)]
pub enum Block {
    Set(FinSet),
    Pred(Arc<dyn Fn(u64) -> bool + Send + Sync>),
}

impl fmt::Debug for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Block::Set(s) => write!(f, "Block::Set({s})"),
            Block::Pred(_) => f.write_str("Block::Pred(..)"),
        }
    }
}

impl Block {
    pub fn pred(p: impl Fn(u64) -> bool + Send + Sync + 'static) -> Self {
        Block::Pred(Arc::new(p))
    }

    pub fn contains(&self, n: u64) -> bool {
        match self {
            Block::Set(s) => s.contains(n),
            Block::Pred(p) => p(n),
        }
    }

    pub fn trace(&self, f: &FinSet) -> FinSet {
        f.filter(|n| self.contains(n))
    }
}

/// `F ↦ min{n+1 : K(n, F)}`, with `K(n,·)` increasing in `n`.
#[derive(Clone)]
pub struct Filtration {
    pub member: Arc<dyn Fn(u64, &FinSet) -> bool + Send + Sync>,
    /// Largest level searched before giving up.
    pub max_level: u64,
}

impl Filtration {
    pub fn new(max_level: u64, member: impl Fn(u64, &FinSet) -> bool + Send + Sync + 'static) -> Self {
        Filtration { member: Arc::new(member), max_level }
    }

    pub fn eval(&self, f: &FinSet) -> Result<ExtRat, EvalError> {
        if f.is_empty() {
            return Ok(ExtRat::zero());
        }
        let k = |n: u64| (self.member)(n, f);
        if k(0) {
            return Ok(ExtRat::from_int(1));
        }
        // gallop to a level where K holds, then bisect; K is monotone in n
        let (mut lo, mut hi) = (0u64, 1u64);
        loop {
            if hi >= self.max_level {
                hi = self.max_level;
                if !k(hi) {
                    return Err(EvalError::BudgetExhausted { lower_bound: ExtRat::from_int(self.max_level.saturating_add(2)) });
                }
                break;
            }
            if k(hi) {
                break;
            }
            lo = hi;
            hi = hi.saturating_mul(2);
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if k(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(ExtRat::from_int(hi + 1))
    }
}

/// Minimum number of base sets needed to cover `F`.
#[derive(Clone)]
pub struct CoverSpec {
    pub base: Arc<dyn Fn(&FinSet) -> bool + Send + Sync>,
    pub cap: usize,
}

impl CoverSpec {
    pub fn new(base: impl Fn(&FinSet) -> bool + Send + Sync + 'static) -> Self {
        CoverSpec { base: Arc::new(base), cap: DEFAULT_COVER_CAP }
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap.min(30);
        self
    }

    /// An optimal cover of `F` by base subsets, or `None` if some point is in no base set.
    pub fn cover(&self, f: &FinSet) -> Result<Option<Vec<FinSet>>, EvalError> {
        if f.len() > self.cap {
            return Err(EvalError::TooLarge { size: f.len(), cap: self.cap });
        }
        let table: Vec<bool> = f.subset_masks().map(|m| (self.base)(&f.subset(m))).collect();
        Ok(min_cover(f.len(), &table).map(|c| c.parts.into_iter().map(|m| f.subset(m)).collect()))
    }

    pub fn eval(&self, f: &FinSet) -> Result<ExtRat, EvalError> {
        Ok(match self.cover(f)? {
            Some(parts) => ExtRat::from_int(parts.len() as u64),
            None => ExtRat::Infinite,
        })
    }
}

/// One summand of a [`SubmeasureSpec::Sum`]: `spec` applied to `F ∩ block`.
#[derive(Clone, Debug)]
pub struct SumPart {
    pub spec: SubmeasureSpec,
    pub block: Block,
}

/// A submeasure on ℕ in one of several exact representations.
#[derive(Clone)]
pub enum SubmeasureSpec {
    Table(TableSpec),
    /// `sup_k μ_k`.
    SupMeasures(Vec<PointMeasure>),
    /// `φ_x`.
    Vectors(VectorSeq),
    Filtration(Filtration),
    Cover(CoverSpec),
    Construction(Arc<dyn SetFunction>),
    Sup(Vec<SubmeasureSpec>),
    Sum(Vec<SumPart>),
    /// `F ↦ inner(F ∩ domain)`.
    Restricted { inner: Box<SubmeasureSpec>, domain: Block },
}

impl fmt::Debug for SubmeasureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubmeasureSpec::Table(t) => write!(f, "Table(u={})", t.universe),
            SubmeasureSpec::SupMeasures(m) => write!(f, "SupMeasures({} measures)", m.len()),
            SubmeasureSpec::Vectors(x) => write!(f, "Vectors({x:?})"),
            SubmeasureSpec::Filtration(k) => write!(f, "Filtration(max_level={})", k.max_level),
            SubmeasureSpec::Cover(c) => write!(f, "Cover(cap={})", c.cap),
            SubmeasureSpec::Construction(c) => write!(f, "Construction({})", c.name()),
            SubmeasureSpec::Sup(v) => f.debug_tuple("Sup").field(v).finish(),
            SubmeasureSpec::Sum(v) => f.debug_tuple("Sum").field(v).finish(),
            SubmeasureSpec::Restricted { inner, domain } => {
                f.debug_struct("Restricted").field("inner", inner).field("domain", domain).finish()
            }
        }
    }
}

impl SubmeasureSpec {
    pub fn construction(c: impl SetFunction + 'static) -> Self {
        SubmeasureSpec::Construction(Arc::new(c))
    }

    pub fn restricted(inner: SubmeasureSpec, domain: Block) -> Self {
        SubmeasureSpec::Restricted { inner: Box::new(inner), domain }
    }

    pub fn eval(&self, f: &FinSet) -> Result<ExtRat, EvalError> {
        match self {
            SubmeasureSpec::Table(t) => t.eval(f),
            SubmeasureSpec::SupMeasures(ms) => {
                Ok(ExtRat::Finite(ms.iter().map(|m| m.measure(f)).max().unwrap_or_default()))
            }
            SubmeasureSpec::Vectors(x) => Ok(ExtRat::Finite(x.phi(f))),
            SubmeasureSpec::Filtration(k) => k.eval(f),
            SubmeasureSpec::Cover(c) => c.eval(f),
            SubmeasureSpec::Construction(c) => c.eval(f),
            SubmeasureSpec::Sup(specs) => {
                let mut best = ExtRat::zero();
                for s in specs {
                    best = best.max(s.eval(f)?);
                }
                Ok(best)
            }
            SubmeasureSpec::Sum(parts) => {
                let mut total = ExtRat::zero();
                for p in parts {
                    let t = p.block.trace(f);
                    if !t.is_empty() {
                        total = total + p.spec.eval(&t)?;
                    }
                }
                Ok(total)
            }
            SubmeasureSpec::Restricted { inner, domain } => inner.eval(&domain.trace(f)),
        }
    }

    /// `φ{n}`.
    pub fn singleton(&self, n: u64) -> Result<ExtRat, EvalError> {
        self.eval(&FinSet::from([n]))
    }

    /// A finite set outside of which every point has value zero, when one is known.
    pub fn finite_support(&self) -> Option<FinSet> {
        match self {
            SubmeasureSpec::Table(t) => Some(FinSet::range(t.universe as u64)),
            SubmeasureSpec::SupMeasures(ms) => Some(ms.iter().fold(FinSet::new(), |a, m| a.union(&m.support()))),
            SubmeasureSpec::Vectors(x) => x.explicit_len().map(|n| {
                (0..n as u64).filter(|&i| !x.get(i).entries().is_empty()).collect()
            }),
            SubmeasureSpec::Sup(v) => v.iter().try_fold(FinSet::new(), |a, s| Some(a.union(&s.finite_support()?))),
            SubmeasureSpec::Sum(parts) => {
                parts.iter().try_fold(FinSet::new(), |a, p| Some(a.union(&p.block.trace(&p.spec.finite_support()?))))
            }
            SubmeasureSpec::Restricted { inner, domain } => inner.finite_support().map(|s| domain.trace(&s)),
            _ => None,
        }
    }

    /// Level-set oracle: the construction's own, or a finite-support scan.
    pub fn level_set_oracle(&self) -> Option<Arc<dyn LevelSetOracle>> {
        match self {
            SubmeasureSpec::Construction(c) => c.level_sets(),
            _ => {
                let support = self.finite_support()?;
                Some(Arc::new(FiniteSupportOracle { spec: self.clone(), support }))
            }
        }
    }
}

/// Exact level sets of a spec whose support is a known finite set.
pub struct FiniteSupportOracle {
    spec: SubmeasureSpec,
    support: FinSet,
}

impl LevelSetOracle for FiniteSupportOracle {
    fn total(&self) -> ExtRat {
        self.spec.eval(&self.support).unwrap_or(ExtRat::Infinite)
    }

    fn level_set_value(&self, eps: &Rational) -> ExtRat {
        let eps = ExtRat::Finite(eps.clone());
        let m = self.support.filter(|n| self.spec.singleton(n).map(|v| v > eps).unwrap_or(true));
        self.spec.eval(&m).unwrap_or(ExtRat::Infinite)
    }
}
