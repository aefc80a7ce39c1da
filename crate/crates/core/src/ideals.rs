//! Partition schemes and the canonical ideals built on them.
//!
//! Two schemes are fixed bit-for-bit:
//!
//! * `arith-v1`: the Cantor pairing. The `j`-th element of `B_n` is
//!   `(n+j)(n+j+1)/2 + j`, so `B_0 = {0, 2, 5, 9, ...}` and `B_1 = {1, 4, 8, ...}`.
//! * `intervals`: `P_n = [n(n-1)/2, n(n+1)/2)`, a partition into finite sets with `|P_n| = n`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::measure::PointMeasure;
use crate::rational::{int, pow2, pow2_inv, ExtRat, Rational};
use crate::set::FinSet;
use crate::spec::{Block, CoverSpec, EvalError, Filtration, LevelSetOracle, SetFunction, SubmeasureSpec, SumPart};
use crate::stream::SetStream;
use crate::vectors::{SparseVec, VectorSeq};
use crate::combine::{sum_combine, sup_combine};

/// A partition of ℕ into blocks `B_0, B_1, ...`, each enumerated increasingly.
pub trait PartitionScheme: Send + Sync + fmt::Debug {
    fn name(&self) -> &'static str;

    /// The `n` with `m ∈ B_n`.
    fn block_of(&self, m: u64) -> u64;

    /// Position of `m` inside its block.
    fn index_in_block(&self, m: u64) -> u64;

    /// The `j`-th element of `B_n`, if it exists and fits in `u64`.
    fn element(&self, n: u64, j: u64) -> Option<u64>;

    /// `|B_n|`, or `None` for an infinite block.
    fn block_len(&self, n: u64) -> Option<u64>;

    /// The first `count` elements of `B_n` (fewer if the block is shorter).
    fn block_prefix(&self, n: u64, count: u64) -> FinSet {
        (0..count).map_while(|j| self.element(n, j)).collect()
    }
}

/// Cantor-pairing scheme `arith-v1`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ArithV1;

fn tri(w: u64) -> Option<u64> {
    u64::try_from(w as u128 * (w as u128 + 1) / 2).ok()
}

impl ArithV1 {
    /// `(n, j)` with `m` the `j`-th element of `B_n`.
    pub fn unpair(m: u64) -> (u64, u64) {
        let w = (((8 * m as u128 + 1).isqrt() - 1) / 2) as u64;
        let j = m - tri(w).expect("diagonal index fits");
        (w - j, j)
    }
}

impl PartitionScheme for ArithV1 {
    fn name(&self) -> &'static str {
        "arith-v1"
    }

    fn block_of(&self, m: u64) -> u64 {
        ArithV1::unpair(m).0
    }

    fn index_in_block(&self, m: u64) -> u64 {
        ArithV1::unpair(m).1
    }

    fn element(&self, n: u64, j: u64) -> Option<u64> {
        tri(n.checked_add(j)?)?.checked_add(j)
    }

    fn block_len(&self, _n: u64) -> Option<u64> {
        None
    }
}

/// Finite intervals `P_n` with `|P_n| = n`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Intervals;

impl PartitionScheme for Intervals {
    fn name(&self) -> &'static str {
        "intervals"
    }

    fn block_of(&self, m: u64) -> u64 {
        // largest n with n(n-1)/2 ≤ m
        ((1 + (8 * m as u128 + 1).isqrt()) / 2) as u64
    }

    fn index_in_block(&self, m: u64) -> u64 {
        let n = self.block_of(m);
        m - tri(n - 1).expect("fits")
    }

    fn element(&self, n: u64, j: u64) -> Option<u64> {
        if j >= n {
            return None;
        }
        tri(n - 1)?.checked_add(j)
    }

    fn block_len(&self, n: u64) -> Option<u64> {
        Some(n)
    }
}

/// Looks up a scheme by its documented name.
pub fn scheme_by_name(name: &str) -> Option<Arc<dyn PartitionScheme>> {
    match name {
        "arith-v1" => Some(Arc::new(ArithV1)),
        "intervals" => Some(Arc::new(Intervals)),
        _ => None,
    }
}

/// Increasing enumeration of `B_n`.
pub fn block_stream(scheme: Arc<dyn PartitionScheme>, n: u64) -> SetStream {
    SetStream::new((0u64..).map_while(move |j| scheme.element(n, j)))
}

/// `m_i` = first element of `B_i`, for `i = 0, 1, ...` (a selector of the blocks).
pub fn diagonal_stream(scheme: Arc<dyn PartitionScheme>) -> SetStream {
    SetStream::new((0u64..).map_while(move |i| scheme.element(i, 0)))
}

/// Distinct blocks met by `a`, with multiplicities.
fn block_counts(scheme: &dyn PartitionScheme, a: &FinSet) -> BTreeMap<u64, u64> {
    let mut c = BTreeMap::new();
    for x in a {
        *c.entry(scheme.block_of(x)).or_insert(0) += 1;
    }
    c
}

/// `F` meets every block at most once.
pub fn is_partial_selector(scheme: &dyn PartitionScheme, f: &FinSet) -> bool {
    block_counts(scheme, f).values().all(|&c| c <= 1)
}

/// `F` lies inside a single block.
pub fn is_within_piece(scheme: &dyn PartitionScheme, f: &FinSet) -> bool {
    block_counts(scheme, f).len() <= 1
}

/// `sup{m : A ∩ B_m ≠ ∅} + 1`, and 0 on `∅`.
pub fn phi_fin_times_empty(scheme: &dyn PartitionScheme, a: &FinSet) -> ExtRat {
    match a.iter().map(|x| scheme.block_of(x)).max() {
        Some(m) => ExtRat::from_int(m + 1),
        None => ExtRat::zero(),
    }
}

/// The same value as a filtration: `K_n = P(B_0 ∪ … ∪ B_n)`.
pub fn fin_times_empty_filtration(scheme: Arc<dyn PartitionScheme>, max_level: u64) -> SubmeasureSpec {
    SubmeasureSpec::Filtration(Filtration::new(max_level, move |n, f| f.iter().all(|x| scheme.block_of(x) <= n)))
}

/// Point masses `μ_k{k} = m+1` for `k ∈ B_m`, `k < upto`; their supremum is [`phi_fin_times_empty`].
pub fn fin_times_empty_measures(scheme: &dyn PartitionScheme, upto: u64) -> SubmeasureSpec {
    SubmeasureSpec::SupMeasures(
        (0..upto).map(|k| PointMeasure::from_weights([(k, int(scheme.block_of(k) + 1))]).expect("positive")).collect(),
    )
}

/// `min |F|` with `A ⊆ ∪_{n∈F} B_n`: the number of blocks `A` meets.
pub fn psi_block_cover(scheme: &dyn PartitionScheme, a: &FinSet) -> ExtRat {
    ExtRat::from_int(block_counts(scheme, a).len() as u64)
}

/// Argument of [`psi_ed`]: an explicit finite set or a whole block `B_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EdArg {
    Finite(FinSet),
    Piece(u64),
}

/// `min{m : |A ∩ B_n| ≤ m for all n > m}`.
pub fn psi_ed(scheme: &dyn PartitionScheme, a: &EdArg) -> ExtRat {
    match a {
        EdArg::Piece(j) => ExtRat::from_int(*j),
        EdArg::Finite(f) => {
            let counts = block_counts(scheme, f);
            let mut m = 0u64;
            loop {
                if counts.range(m + 1..).all(|(_, &c)| c <= m) {
                    return ExtRat::from_int(m);
                }
                m += 1;
            }
        }
    }
}

/// `max_n min(|A ∩ B_n|, n+1)`: the supremum of counting measures on `(n+1)`-subsets of `B_n`.
pub fn ed_sup_representation(scheme: &dyn PartitionScheme, a: &FinSet) -> ExtRat {
    let v = block_counts(scheme, a).iter().map(|(&n, &c)| c.min(n.saturating_add(1))).max().unwrap_or(0);
    ExtRat::from_int(v)
}

/// All counting measures `μ_n^F`, `F` an `(n+1)`-subset of `B_n`, traced on a finite `universe`.
///
/// On subsets of `universe` their supremum equals [`ed_sup_representation`].
pub fn ed_sup_measures_on(scheme: &dyn PartitionScheme, universe: &FinSet) -> SubmeasureSpec {
    let mut out = Vec::new();
    for (n, _) in block_counts(scheme, universe) {
        let pts: Vec<u64> = universe.iter().filter(|&x| scheme.block_of(x) == n).collect();
        let size = (n.saturating_add(1)).min(pts.len() as u64) as u32;
        for mask in 0..(1u64 << pts.len()) {
            if mask.count_ones() == size {
                out.push(PointMeasure::uniform(&FinSet::from_mask(&pts, mask), int(1)));
            }
        }
    }
    SubmeasureSpec::SupMeasures(out)
}

/// Base sets for `ED`: subsets of a single block, and partial selectors.
pub fn ed_base(scheme: &dyn PartitionScheme, f: &FinSet) -> bool {
    is_within_piece(scheme, f) || is_partial_selector(scheme, f)
}

/// The cover-number submeasure of `ED`: fewest pieces and selectors covering `A`.
pub fn ed_cover_spec(scheme: Arc<dyn PartitionScheme>) -> SubmeasureSpec {
    SubmeasureSpec::Cover(CoverSpec::new(move |f| ed_base(scheme.as_ref(), f)))
}

/// Mazur's literal recursion for `ED`: `K_0 = {∅}`, `K_1` = pieces and selectors,
/// `K_{n+1}` = unions of `n+1` members of `K_n`, so `K_n` = sets covered by `n!` base sets.
///
/// Sets larger than the cover cap are reported as never entering a level.
pub fn ed_mazur_filtration(scheme: Arc<dyn PartitionScheme>, max_level: u64) -> SubmeasureSpec {
    let cover = CoverSpec::new(move |f| ed_base(scheme.as_ref(), f));
    SubmeasureSpec::Filtration(Filtration::new(max_level, move |n, f| {
        if n == 0 {
            return f.is_empty();
        }
        let Ok(ExtRat::Finite(c)) = cover.eval(f) else { return false };
        let fact = (1..=n).try_fold(1u64, |acc, i| acc.checked_mul(i)).unwrap_or(u64::MAX);
        c <= int(fact)
    }))
}

/// `Δ = ∪_n C_n` with `C_n` the first `n+1` elements of `B_n`.
pub fn in_delta(scheme: &dyn PartitionScheme, m: u64) -> bool {
    scheme.index_in_block(m) <= scheme.block_of(m)
}

pub fn delta_block(scheme: Arc<dyn PartitionScheme>) -> Block {
    Block::pred(move |m| in_delta(scheme.as_ref(), m))
}

/// Increasing enumeration of `Δ`.
pub fn delta_stream(scheme: Arc<dyn PartitionScheme>) -> SetStream {
    SetStream::filtered(move |m| in_delta(scheme.as_ref(), m))
}

/// A representation of `ED` traced on `Δ`, giving `ED_fin`.
pub fn ed_fin(scheme: Arc<dyn PartitionScheme>, representation: SubmeasureSpec) -> SubmeasureSpec {
    SubmeasureSpec::restricted(representation, delta_block(scheme))
}

/// `ψ` with `ψ(ℕ) = ∞` and level sets `ℕ` below 1 and empty from 1 on.
struct UnitSingletons;

impl LevelSetOracle for UnitSingletons {
    fn total(&self) -> ExtRat {
        ExtRat::Infinite
    }
    fn level_set_value(&self, eps: &Rational) -> ExtRat {
        if *eps < Rational::one() {
            ExtRat::Infinite
        } else {
            ExtRat::zero()
        }
    }
}

/// Every level set meets infinitely many blocks.
struct UnboundedSingletons;

impl LevelSetOracle for UnboundedSingletons {
    fn total(&self) -> ExtRat {
        ExtRat::Infinite
    }
    fn level_set_value(&self, _eps: &Rational) -> ExtRat {
        ExtRat::Infinite
    }
}

macro_rules! block_construction {
    ($name:ident, $label:expr, $f:expr, $oracle:expr) => {
        #[derive(Debug, Clone)]
        pub struct $name(pub Arc<dyn PartitionScheme>);

        impl SetFunction for $name {
            fn eval(&self, a: &FinSet) -> Result<ExtRat, EvalError> {
                Ok($f(self.0.as_ref(), a))
            }
            fn name(&self) -> String {
                format!("{}[{}]", $label, self.0.name())
            }
            fn level_sets(&self) -> Option<Arc<dyn LevelSetOracle>> {
                $oracle
            }
        }
    };
}

block_construction!(FinTimesEmpty, "fin-times-empty", phi_fin_times_empty, Some(Arc::new(UnboundedSingletons)));
block_construction!(BlockCover, "block-cover", psi_block_cover, Some(Arc::new(UnitSingletons)));
block_construction!(EdSup, "ed-sup", ed_sup_representation, Some(Arc::new(UnitSingletons)));
block_construction!(
    EdPsi,
    "ed-psi",
    |s: &dyn PartitionScheme, a: &FinSet| psi_ed(s, &EdArg::Finite(a.clone())),
    Some(Arc::new(UnboundedSingletons))
);

/// `A ↦ Σ_{n∈A} w(n)`, the measure behind a summable ideal.
#[derive(Clone)]
pub struct WeightedCount {
    pub weight: Arc<dyn Fn(u64) -> Rational + Send + Sync>,
}

impl WeightedCount {
    /// Weights `1/(n+1)`.
    pub fn harmonic() -> Self {
        WeightedCount { weight: Arc::new(|n| Rational::new(BigInt::one(), BigInt::from(n) + 1)) }
    }
}

impl SetFunction for WeightedCount {
    fn eval(&self, a: &FinSet) -> Result<ExtRat, EvalError> {
        Ok(ExtRat::Finite(a.iter().map(|n| (self.weight)(n)).sum()))
    }
    fn name(&self) -> String {
        String::from("weighted-count")
    }
}

/// `x_n = m·e_n` for `n ∈ B_m`; `φ_x(F) = max{m : F ∩ B_m ≠ ∅}`.
pub fn block_multiples(scheme: Arc<dyn PartitionScheme>) -> VectorSeq {
    VectorSeq::generated(true, move |n| SparseVec::unit(n, int(scheme.block_of(n))))
}

/// Evidence that `φ` has property A along a schedule of `ε`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PropertyA {
    /// `φ(ℕ) = ∞` and every tested level set has the listed finite value (and block bound).
    Holds { bounds: Vec<(Rational, Rational, Option<u64>)> },
    /// `φ(ℕ) < ∞`.
    FailsFiniteTotal { total: Rational },
    /// The level set at `eps` has infinite value.
    FailsAt { eps: Rational },
    Inconclusive { reason: &'static str },
}

/// Tests property A with the spec's level-set oracle.
pub fn has_property_a(spec: &SubmeasureSpec, schedule: &[Rational]) -> PropertyA {
    let Some(oracle) = spec.level_set_oracle() else {
        return PropertyA::Inconclusive { reason: "no level-set oracle for this representation" };
    };
    if let ExtRat::Finite(t) = oracle.total() {
        return PropertyA::FailsFiniteTotal { total: t };
    }
    let mut bounds = Vec::new();
    for eps in schedule {
        match oracle.level_set_value(eps) {
            ExtRat::Infinite => return PropertyA::FailsAt { eps: eps.clone() },
            ExtRat::Finite(v) => bounds.push((eps.clone(), v, oracle.level_set_blocks(eps))),
        }
    }
    PropertyA::Holds { bounds }
}

/// Finite surrogate for `A ∈ Fin(φ)` along a stream prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Boundedness {
    /// Every prefix of length ≤ `prefix` has value ≤ the bound; `max` is the largest seen.
    BoundedSoFar { max: ExtRat, prefix: u64 },
    /// The first prefix `witness` with `φ(witness) > bound`, ending at `element`.
    Exceeded { bound: ExtRat, element: u64, witness: FinSet, value: ExtRat },
    Inconclusive { budget: u64 },
}

/// Evaluates growing prefixes of the stream against `bound`, reading at most `budget` elements.
pub fn bounded_on_prefix(spec: &SubmeasureSpec, stream: &mut SetStream, bound: &ExtRat, budget: u64) -> Result<Boundedness, EvalError> {
    let elems = stream.take_prefix(budget);
    let eval = |t: usize| -> Result<Option<ExtRat>, EvalError> {
        let f: FinSet = elems[..t].iter().copied().collect();
        match spec.eval(&f) {
            Ok(v) => Ok(Some(v)),
            Err(EvalError::BudgetExhausted { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    };
    // values are monotone in the prefix: gallop, then bisect for the first excess
    let n = elems.len();
    let (mut lo, mut hi) = (0usize, 1usize);
    let mut last_ok;
    loop {
        let t = hi.min(n);
        if t == 0 {
            return Ok(Boundedness::BoundedSoFar { max: ExtRat::zero(), prefix: 0 });
        }
        let Some(v) = eval(t)? else { return Ok(Boundedness::Inconclusive { budget }) };
        if v > *bound {
            hi = t;
            break;
        }
        last_ok = v;
        lo = t;
        if t == n {
            return Ok(Boundedness::BoundedSoFar { max: last_ok, prefix: n as u64 });
        }
        hi *= 2;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        let Some(v) = eval(mid)? else { return Ok(Boundedness::Inconclusive { budget }) };
        if v > *bound {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let witness: FinSet = elems[..hi].iter().copied().collect();
    let value = eval(hi)?.expect("evaluated before");
    Ok(Boundedness::Exceeded { bound: bound.clone(), element: elems[hi - 1], witness, value })
}

/// Sub-block size discipline for the property-A construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EjemVariant {
    /// `|B_n^k| = 2^n (n+1)` for every `k`.
    A,
    /// `|B_n^k| = (n+1)(2^n + k)`.
    B,
}

/// Blocks `B_n` of a base scheme cut into consecutive sub-blocks `B_n^k`.
#[derive(Debug, Clone)]
pub struct EjemScheme {
    pub variant: EjemVariant,
    pub base: Arc<dyn PartitionScheme>,
}

impl EjemScheme {
    /// Index within `B_n` where `B_n^k` starts, if it fits in `u128`.
    pub fn sub_block_start(&self, n: u64, k: u64) -> Option<u128> {
        let (n1, k) = (n as u128 + 1, k as u128);
        let p = 1u128.checked_shl(n as u32).filter(|_| n < 127)?;
        match self.variant {
            EjemVariant::A => p.checked_mul(n1)?.checked_mul(k),
            EjemVariant::B => {
                let lin = k.checked_mul(p)?;
                let quad = k.checked_mul(k.saturating_sub(1))? / 2;
                n1.checked_mul(lin.checked_add(quad)?)
            }
        }
    }

    /// `|B_n^k|` as an integer.
    pub fn sub_block_len(&self, n: u64, k: u64) -> BigInt {
        let base = pow2(n) * (n + 1);
        match self.variant {
            EjemVariant::A => base,
            EjemVariant::B => base + BigInt::from(k) * (n + 1),
        }
    }

    /// `(n, k)` with `m ∈ B_n^k`.
    pub fn locate(&self, m: u64) -> (u64, u64) {
        let n = self.base.block_of(m);
        let j = self.base.index_in_block(m) as u128;
        let fits = |k: u64| self.sub_block_start(n, k).is_some_and(|s| s <= j);
        let (mut lo, mut hi) = (0u64, 1u64);
        while fits(hi) {
            lo = hi;
            hi = hi.saturating_mul(2);
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if fits(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (n, lo)
    }

    /// `ν_n^k{x} = (n+1)/|B_n^k|`.
    pub fn point_weight(&self, n: u64, k: u64) -> Rational {
        match self.variant {
            EjemVariant::A => pow2_inv(n),
            EjemVariant::B => Rational::new(BigInt::one(), pow2(n) + k),
        }
    }

    /// Elements of `B_n^k`, when its size is at most `cap`.
    pub fn sub_block(&self, n: u64, k: u64, cap: u64) -> Option<FinSet> {
        let len: u64 = self.sub_block_len(n, k).try_into().ok().filter(|&l| l <= cap)?;
        let start: u64 = self.sub_block_start(n, k)?.try_into().ok()?;
        (start..start + len).map(|j| self.base.element(n, j)).collect::<Option<Vec<_>>>().map(FinSet::from)
    }

    /// First element of `B_n^k`.
    pub fn sub_block_min(&self, n: u64, k: u64) -> Option<u64> {
        self.base.element(n, self.sub_block_start(n, k)?.try_into().ok()?)
    }
}

/// `φ = Σ_n sup_k ν_n^k`, evaluated in closed form.
#[derive(Debug, Clone)]
pub struct Ejemadecuada(pub EjemScheme);

impl Ejemadecuada {
    pub fn value(&self, a: &FinSet) -> Rational {
        let mut counts: BTreeMap<(u64, u64), u64> = BTreeMap::new();
        for x in a {
            *counts.entry(self.0.locate(x)).or_insert(0) += 1;
        }
        let mut per_block: BTreeMap<u64, Rational> = BTreeMap::new();
        for ((n, k), c) in counts {
            let v = self.0.point_weight(n, k) * int(c);
            let e = per_block.entry(n).or_insert_with(Rational::zero);
            if v > *e {
                *e = v;
            }
        }
        per_block.into_values().sum()
    }
}

impl SetFunction for Ejemadecuada {
    fn eval(&self, a: &FinSet) -> Result<ExtRat, EvalError> {
        Ok(ExtRat::Finite(self.value(a)))
    }
    fn name(&self) -> String {
        format!("ejemadecuada-{:?}[{}]", self.0.variant, self.0.base.name()).to_lowercase()
    }
    fn level_sets(&self) -> Option<Arc<dyn LevelSetOracle>> {
        Some(Arc::new(EjemLevelSets))
    }
}

/// Level sets of the construction: `M_ε` consists of whole sub-blocks of `B_0..B_N`,
/// `N = max{n : 2^{-n} > ε}`, and includes `B_n^0` for each such `n`, so `φ(M_ε) = Σ_{n≤N} (n+1)`.
struct EjemLevelSets;

impl EjemLevelSets {
    fn top_block(eps: &Rational) -> Option<u64> {
        if *eps >= Rational::one() {
            return None;
        }
        let mut n = 0u64;
        while pow2_inv(n + 1) > *eps {
            n += 1;
        }
        Some(n)
    }
}

impl LevelSetOracle for EjemLevelSets {
    fn total(&self) -> ExtRat {
        ExtRat::Infinite
    }
    fn level_set_value(&self, eps: &Rational) -> ExtRat {
        match Self::top_block(eps) {
            None => ExtRat::zero(),
            Some(n) => ExtRat::from_int((n + 1) * (n + 2) / 2),
        }
    }
    fn level_set_blocks(&self, eps: &Rational) -> Option<u64> {
        Self::top_block(eps)
    }
}

/// One checked fact of the property-A construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactCheck {
    pub fact: u8,
    pub statement: &'static str,
    pub holds: bool,
    pub detail: String,
}

/// Scheme, closed-form spec, and finite checks of the property-A construction.
#[derive(Debug, Clone)]
pub struct EjemGenerator {
    pub scheme: EjemScheme,
    pub spec: SubmeasureSpec,
}

/// Builds the property-A construction over `arith-v1`.
pub fn ejemadecuada_generator(variant: EjemVariant) -> EjemGenerator {
    let scheme = EjemScheme { variant, base: Arc::new(ArithV1) };
    let spec = SubmeasureSpec::construction(Ejemadecuada(scheme.clone()));
    EjemGenerator { scheme, spec }
}

impl EjemGenerator {
    pub fn construction(&self) -> Ejemadecuada {
        Ejemadecuada(self.scheme.clone())
    }

    /// `Σ_n sup_k ν_n^k` assembled with [`sum_combine`] and [`sup_combine`],
    /// each measure truncated to `[0, horizon)`. Agrees with the closed form there.
    pub fn truncated(&self, horizon: u64) -> SubmeasureSpec {
        let mut by_sub: BTreeMap<u64, BTreeMap<u64, Vec<u64>>> = BTreeMap::new();
        for m in 0..horizon {
            let (n, k) = self.scheme.locate(m);
            by_sub.entry(n).or_default().entry(k).or_default().push(m);
        }
        let mut parts = Vec::new();
        for (n, subs) in by_sub {
            let measures: Vec<SubmeasureSpec> = subs
                .into_iter()
                .map(|(k, pts)| {
                    let w = self.scheme.point_weight(n, k);
                    SubmeasureSpec::SupMeasures(alloc::vec![PointMeasure::uniform(&FinSet::from(pts), w)])
                })
                .collect();
            let base = self.scheme.base.clone();
            parts.push(SumPart {
                spec: sup_combine(measures).expect("nonempty"),
                block: Block::pred(move |m| base.block_of(m) == n),
            });
        }
        if parts.is_empty() {
            return SubmeasureSpec::SupMeasures(Vec::new());
        }
        sum_combine(parts).expect("nonempty")
    }

    /// Stream `x_k = min B_n^k`, `k = 0, 1, ...`: a selector of the sub-blocks of `B_n`.
    pub fn sub_block_selector(&self, n: u64) -> SetStream {
        let s = self.scheme.clone();
        SetStream::new((0u64..).map_while(move |k| s.sub_block_min(n, k)))
    }

    /// Checks facts (1), (3), (5) and (6) on finite prefixes.
    ///
    /// `max_block` bounds the blocks examined and `prefix` the naturals scanned.
    pub fn check_facts(&self, max_block: u64, prefix: u64) -> Vec<FactCheck> {
        let c = self.construction();
        let mut out = Vec::new();

        let mut ok = true;
        let mut detail = String::new();
        for n in 0..=max_block {
            for k in 0..3 {
                let Some(b) = self.scheme.sub_block(n, k, 1 << 16) else { continue };
                let v = c.value(&b);
                if v != int(n + 1) {
                    ok = false;
                    detail = format!("φ(B_{n}^{k}) = {v}");
                }
            }
        }
        if ok {
            detail = format!("φ(B_n^k) = n+1 for n ≤ {max_block}, k < 3");
        }
        out.push(FactCheck { fact: 1, statement: "φ(B_n^k) = n+1", holds: ok, detail });

        let mut ok = true;
        let mut detail = String::new();
        for e in 0..=max_block {
            let eps = pow2_inv(e);
            // least N with 2^-N < ε
            let n_top = e + 1;
            for x in 0..prefix {
                let (n, k) = self.scheme.locate(x);
                if self.scheme.point_weight(n, k) >= eps && n > n_top {
                    ok = false;
                    detail = format!("x = {x} in B_{n} has φ{{x}} ≥ 2^-{e}");
                }
            }
        }
        if ok {
            detail = format!("M_ε ⊆ B_0 ∪ … ∪ B_N (2^-N < ε) for ε = 2^-e, e ≤ {max_block}, on [0, {prefix})");
        }
        out.push(FactCheck { fact: 3, statement: "M_ε ⊆ B_0 ∪ … ∪ B_N", holds: ok, detail });

        let selector: FinSet = (0..=max_block.max(32)).filter_map(|n| self.scheme.base.element(n, n)).collect();
        let total: Rational = selector.iter().map(|x| c.value(&FinSet::from([x]))).sum();
        let two = int(2);
        out.push(FactCheck {
            fact: 5,
            statement: "selectors of the B_n lie in Sum(φ)",
            holds: total <= two,
            detail: format!("Σ φ{{x_n}} = {} over {} blocks", crate::rational::to_decimal(&total, 6), selector.len()),
        });

        let mut ok = true;
        let mut detail = String::new();
        for n in 0..=max_block.min(6) {
            let trace = FinSet::from((0..prefix).filter(|&m| self.scheme.base.block_of(m) == n).collect::<Vec<_>>());
            if c.value(&trace) > int(n + 1) {
                ok = false;
                detail = format!("φ(B_{n} ∩ prefix) exceeds {}", n + 1);
            }
            for cut in [0u64, 10, 100, 1000] {
                let mut k = 0;
                while self.scheme.sub_block_min(n, k).is_some_and(|m| m < cut) {
                    k += 1;
                }
                if let Some(b) = self.scheme.sub_block(n, k, 1 << 16) {
                    if c.value(&b) != int(n + 1) {
                        ok = false;
                        detail = format!("tail of B_{n} beyond {cut} has small value");
                    }
                }
            }
        }
        if ok {
            detail = String::from("φ(B_n ∩ prefix) ≤ n+1 while tails past 0, 10, 100, 1000 keep a sub-block of value n+1");
        }
        out.push(FactCheck { fact: 6, statement: "B_n ∈ Fin(φ) ∖ Exh(φ)", holds: ok, detail });
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pathology::{hat_phi, integer_pathology_criterion, minimal_witness, pathology_degree, CriterionVerdict, MinimalWitness};
    use crate::rational::rat;
    use alloc::vec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn arith() -> Arc<dyn PartitionScheme> {
        Arc::new(ArithV1)
    }

    #[test]
    fn arith_v1_blocks() {
        let s = ArithV1;
        assert_eq!(s.block_prefix(0, 6).as_slice(), &[0, 2, 5, 9, 14, 20]);
        assert_eq!(s.block_prefix(1, 4).as_slice(), &[1, 4, 8, 13]);
        assert_eq!(s.block_prefix(2, 3).as_slice(), &[3, 7, 12]);
        for m in 0..5000u64 {
            let (n, j) = ArithV1::unpair(m);
            assert_eq!(s.element(n, j), Some(m));
        }
        assert_eq!(ArithV1::unpair(u64::MAX).0 + ArithV1::unpair(u64::MAX).1 > 0, true);
    }

    #[test]
    fn intervals_blocks() {
        let s = Intervals;
        assert_eq!(s.block_prefix(0, 5).len(), 0);
        assert_eq!(s.block_prefix(1, 5).as_slice(), &[0]);
        assert_eq!(s.block_prefix(4, 9).as_slice(), &[6, 7, 8, 9]);
        for m in 0..3000u64 {
            let n = s.block_of(m);
            assert_eq!(s.element(n, s.index_in_block(m)), Some(m));
        }
    }

    #[test]
    fn fin_times_empty_representations_agree() {
        let s = arith();
        let filt = fin_times_empty_filtration(s.clone(), 1 << 20);
        let meas = fin_times_empty_measures(s.as_ref(), 200);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let a: FinSet = (0..rng.gen_range(0..8)).map(|_| rng.gen_range(0..200u64)).collect();
            let v = phi_fin_times_empty(s.as_ref(), &a);
            assert_eq!(filt.eval(&a).unwrap(), v);
            assert_eq!(meas.eval(&a).unwrap(), v);
        }
        // meets B_3 and B_1 only
        let a = FinSet::from([s.element(3, 2).unwrap(), s.element(1, 0).unwrap()]);
        assert_eq!(phi_fin_times_empty(s.as_ref(), &a), ExtRat::from_int(4));
        assert_eq!(phi_fin_times_empty(s.as_ref(), &FinSet::new()), ExtRat::zero());
    }

    #[test]
    fn block_cover_on_selectors_is_cardinality_and_hull() {
        let s = arith();
        let psi = SubmeasureSpec::construction(BlockCover(s.clone()));
        let a = FinSet::from([s.element(1, 0).unwrap(), s.element(1, 5).unwrap(), s.element(4, 1).unwrap()]);
        assert_eq!(psi.eval(&a).unwrap(), ExtRat::from_int(2));
        let sel: FinSet = (0..6).map(|n| s.element(n, 3 * n + 1).unwrap()).collect();
        assert!(is_partial_selector(s.as_ref(), &sel));
        assert_eq!(psi.eval(&sel).unwrap(), ExtRat::from_int(6));
        assert_eq!(hat_phi(&psi, &sel).unwrap().value, int(6));
    }

    #[test]
    fn ed_values() {
        let s = arith();
        // x1 ∈ B_0; x2, x3 ∈ B_1
        let triple = FinSet::from([s.element(0, 0).unwrap(), s.element(1, 0).unwrap(), s.element(1, 1).unwrap()]);
        let cover = ed_cover_spec(s.clone());
        assert_eq!(cover.eval(&triple).unwrap(), ExtRat::from_int(2));
        for y in &triple {
            assert_eq!(cover.eval(&triple.without(y)).unwrap(), ExtRat::from_int(1));
        }
        assert_eq!(integer_pathology_criterion(&cover, &triple).unwrap(), CriterionVerdict::Fired { value: 2, size: 3 });
        assert!(hat_phi(&cover, &triple).unwrap().value < int(2));

        // the literal recursion shifts every value up by one level
        let mazur = ed_mazur_filtration(s.clone(), 30);
        assert_eq!(mazur.eval(&triple).unwrap(), ExtRat::from_int(3));
        assert_eq!(mazur.eval(&triple.without(1)).unwrap(), ExtRat::from_int(2));
        assert!(matches!(integer_pathology_criterion(&mazur, &triple).unwrap(), CriterionVerdict::NotFired { .. }));

        match minimal_witness(&cover, 2, 8, 10_000).unwrap() {
            MinimalWitness::Found(b) => {
                assert_eq!(cover.eval(&b).unwrap(), ExtRat::from_int(2));
                assert_eq!(b, FinSet::from([0, 1, 2]));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn ed_psi_and_sup() {
        let s = arith();
        assert_eq!(psi_ed(s.as_ref(), &EdArg::Piece(5)), ExtRat::from_int(5));
        assert_eq!(psi_ed(s.as_ref(), &EdArg::Finite(FinSet::new())), ExtRat::zero());
        let sel: FinSet = (0..=5).map(|n| s.element(n, 0).unwrap()).collect();
        assert_eq!(psi_ed(s.as_ref(), &EdArg::Finite(sel)), ExtRat::from_int(1));
        let seven = s.block_prefix(3, 7);
        assert_eq!(ed_sup_representation(s.as_ref(), &seven), ExtRat::from_int(4));
        for n in 0..6 {
            assert_eq!(ed_sup_representation(s.as_ref(), &s.block_prefix(n, n + 1)), ExtRat::from_int(n + 1));
        }
        let u = FinSet::range(10);
        let meas = ed_sup_measures_on(s.as_ref(), &u);
        let closed = SubmeasureSpec::construction(EdSup(s.clone()));
        for m in 0..1024u64 {
            let f = u.subset(m);
            assert_eq!(meas.eval(&f).unwrap(), closed.eval(&f).unwrap());
        }
        assert_eq!(pathology_degree(&closed, 8, 5).unwrap().degree, int(1));
    }

    #[test]
    fn ed_representations_classify_structured_families_alike() {
        let s = arith();
        let sup = SubmeasureSpec::construction(EdSup(s.clone()));
        let psi = SubmeasureSpec::construction(EdPsi(s.clone()));
        let piece = s.block_prefix(2, 40);
        let selector: FinSet = (0..40).map(|n| s.element(n, 1).unwrap()).collect();
        let double: FinSet = (0..20).flat_map(|n| [s.element(n, 0).unwrap(), s.element(n, 1).unwrap()]).collect();
        for f in [&piece, &selector, &double] {
            assert!(sup.eval(f).unwrap() <= ExtRat::from_int(3));
            assert!(psi.eval(f).unwrap() <= ExtRat::from_int(3));
        }
        // growing chunks of growing blocks are unbounded for both
        let growing: FinSet = (1..12).flat_map(|n| s.block_prefix(n, n).iter().collect::<Vec<_>>()).collect();
        assert!(sup.eval(&growing).unwrap() >= ExtRat::from_int(11));
        assert!(psi.eval(&growing).unwrap() >= ExtRat::from_int(5));
    }

    #[test]
    fn delta_and_restriction() {
        let s = arith();
        let d: Vec<u64> = delta_stream(s.clone()).take(8).collect();
        assert!(d.iter().all(|&m| in_delta(s.as_ref(), m)));
        assert_eq!(d[0], 0);
        let cover = ed_cover_spec(s.clone());
        let fin = ed_fin(s.clone(), cover.clone());
        let sub: FinSet = d.iter().copied().take(6).collect();
        assert_eq!(fin.eval(&sub).unwrap(), cover.eval(&sub).unwrap());
    }

    #[test]
    fn property_a_verdicts() {
        let g = ejemadecuada_generator(EjemVariant::A);
        let sched: Vec<Rational> = (0..6).map(pow2_inv).chain([rat(3, 10)]).collect();
        match has_property_a(&g.spec, &sched) {
            PropertyA::Holds { bounds } => {
                let (eps, v, n) = &bounds[2];
                assert_eq!(eps, &rat(1, 4));
                assert_eq!(v, &int(3));
                assert_eq!(*n, Some(1));
            }
            other => panic!("{other:?}"),
        }
        let ed = SubmeasureSpec::construction(EdSup(arith()));
        assert_eq!(has_property_a(&ed, &[rat(1, 2)]), PropertyA::FailsAt { eps: rat(1, 2) });
        let finite = SubmeasureSpec::SupMeasures(vec![PointMeasure::uniform(&FinSet::range(5), int(1))]);
        assert_eq!(has_property_a(&finite, &[rat(1, 2)]), PropertyA::FailsFiniteTotal { total: int(5) });
        let blind = ed_cover_spec(arith());
        assert!(matches!(has_property_a(&blind, &[rat(1, 2)]), PropertyA::Inconclusive { .. }));
    }

    #[test]
    fn boundedness_verdicts() {
        let s = arith();
        let x = SubmeasureSpec::Vectors(block_multiples(s.clone()));
        let mut diag = diagonal_stream(s.clone());
        match bounded_on_prefix(&x, &mut diag, &ExtRat::from_int(10), 100).unwrap() {
            Boundedness::Exceeded { value, witness, .. } => {
                assert_eq!(value, ExtRat::from_int(11));
                assert_eq!(witness.len(), 12);
            }
            other => panic!("{other:?}"),
        }
        let mut inside = block_stream(s.clone(), 3);
        assert_eq!(
            bounded_on_prefix(&x, &mut inside, &ExtRat::from_int(3), 50).unwrap(),
            Boundedness::BoundedSoFar { max: ExtRat::from_int(3), prefix: 50 }
        );
        let empty = SubmeasureSpec::SupMeasures(vec![]);
        let mut any = SetStream::naturals();
        assert_eq!(
            bounded_on_prefix(&empty, &mut any, &ExtRat::zero(), 20).unwrap(),
            Boundedness::BoundedSoFar { max: ExtRat::zero(), prefix: 20 }
        );
        let filt = fin_times_empty_filtration(s.clone(), 3);
        let mut diag = diagonal_stream(s);
        assert_eq!(bounded_on_prefix(&filt, &mut diag, &ExtRat::from_int(100), 10).unwrap(), Boundedness::Inconclusive { budget: 10 });
    }

    #[test]
    fn ejemadecuada_point_values_and_sub_blocks() {
        for variant in [EjemVariant::A, EjemVariant::B] {
            let g = ejemadecuada_generator(variant);
            for n in 0..4 {
                for k in 0..3 {
                    let b = g.scheme.sub_block(n, k, 1 << 12).unwrap();
                    assert_eq!(g.spec.eval(&b).unwrap(), ExtRat::from_int(n + 1));
                    let w = g.spec.eval(&FinSet::from([b.as_slice()[0]])).unwrap();
                    let expect = match variant {
                        EjemVariant::A => pow2_inv(n),
                        EjemVariant::B => Rational::new(BigInt::one(), pow2(n) + k),
                    };
                    assert_eq!(w, ExtRat::Finite(expect));
                    for x in &b {
                        assert_eq!(g.scheme.locate(x), (n, k));
                    }
                }
            }
            assert_eq!(g.scheme.sub_block_len(0, 0), BigInt::from(1));
        }
    }

    #[test]
    fn ejemadecuada_truncation_matches_closed_form() {
        for variant in [EjemVariant::A, EjemVariant::B] {
            let g = ejemadecuada_generator(variant);
            let t = g.truncated(60);
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            for _ in 0..200 {
                let a: FinSet = (0..rng.gen_range(0..10)).map(|_| rng.gen_range(0..60u64)).collect();
                assert_eq!(t.eval(&a).unwrap(), g.spec.eval(&a).unwrap());
            }
        }
    }

    #[test]
    fn ejemadecuada_facts_hold() {
        for variant in [EjemVariant::A, EjemVariant::B] {
            let g = ejemadecuada_generator(variant);
            for f in g.check_facts(5, 3000) {
                assert!(f.holds, "{variant:?} fact {}: {}", f.fact, f.detail);
            }
        }
    }
}
