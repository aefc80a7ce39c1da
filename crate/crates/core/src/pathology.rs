//! The non-pathological hull `φ̂`, pathology degree, and integer-valued criteria.
//!
//! `φ̂(A)` is the optimum of the packing LP
//! `max Σ_{i∈A} w_i` subject to `Σ_{i∈B} w_i ≤ φ(B)` for every nonempty `B ⊆ A`,
//! solved exactly through its covering dual and certified by complementary slackness.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::lp::{solve_cover_lp, LpError};
use crate::measure::PointMeasure;
use crate::rational::{ExtRat, Rational};
use crate::set::FinSet;
use crate::spec::{EvalError, SubmeasureSpec};

/// Default cap on `|A|` for hull computations.
pub const LP_CAP: usize = 14;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HullError {
    #[error("set of size {size} exceeds the LP cap {cap}")]
    TooLarge { size: usize, cap: usize },
    #[error("φ(A) is infinite")]
    Infinite,
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("optimality certificate rejected: {0}")]
    Certificate(&'static str),
}

/// `φ̂(A)` with a dominated measure attaining it and a fractional cover proving optimality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hull {
    pub set: FinSet,
    pub value: Rational,
    /// Dominated measure supported on `A` with total mass `value`.
    pub witness: PointMeasure,
    /// `(B, y_B)` with `Σ_{B∋i} y_B ≥ 1` and `Σ y_B φ(B) = value`.
    pub cover: Vec<(FinSet, Rational)>,
}

/// Checks a packing/cover pair against every subset constraint of `a`.
///
/// `phi[mask]` holds `φ` on the subsets of `a`, indexed over `a.as_slice()`.
pub fn verify_hull_certificate(a: &FinSet, phi: &[ExtRat], hull: &Hull) -> Result<(), &'static str> {
    let pts = a.as_slice();
    let n = pts.len();
    let w: Vec<Rational> = pts.iter().map(|&p| hull.witness.weight(p)).collect();
    if hull.witness.support().iter().any(|p| !a.contains(p)) {
        return Err("witness charges a point outside A");
    }
    for mask in 1..(1u64 << n) {
        let load: Rational = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| &w[i]).sum();
        if ExtRat::Finite(load) > phi[mask as usize] {
            return Err("witness violates a subset constraint");
        }
    }
    let mut coverage = alloc::vec![Rational::zero(); n];
    let mut cost = Rational::zero();
    for (b, y) in &hull.cover {
        if !y.is_positive() {
            return Err("cover weight not positive");
        }
        let m = b.mask_in(pts).ok_or("cover set leaves A")?;
        let ExtRat::Finite(c) = &phi[m as usize] else { return Err("cover uses an infinite set") };
        cost += c * y;
        for i in 0..n {
            if m >> i & 1 == 1 {
                coverage[i] += y;
            }
        }
        let load: Rational = (0..n).filter(|i| m >> i & 1 == 1).map(|i| &w[i]).sum();
        if &load != c {
            return Err("complementary slackness fails on a cover set");
        }
    }
    let one = Rational::from_integer(1.into());
    for i in 0..n {
        if coverage[i] < one {
            return Err("cover misses a point");
        }
        if w[i].is_positive() && coverage[i] != one {
            return Err("complementary slackness fails on a charged point");
        }
    }
    let total: Rational = w.iter().sum();
    if total != hull.value || cost != hull.value {
        return Err("objective values differ");
    }
    Ok(())
}

/// `φ̂(A)` from a table of `φ` on the subsets of `a`.
pub fn hat_phi_from_table(a: &FinSet, phi: &[ExtRat]) -> Result<Hull, HullError> {
    let pts = a.as_slice();
    let n = pts.len();
    if phi[(1usize << n) - 1] == ExtRat::Infinite {
        return Err(HullError::Infinite);
    }
    // a subset whose one-point extension has the same value is implied; singletons stay for the start basis
    let mut columns = Vec::new();
    for mask in 1..(1u64 << n) {
        let ExtRat::Finite(c) = &phi[mask as usize] else { continue };
        let implied = mask.count_ones() > 1
            && (0..n).any(|i| mask >> i & 1 == 0 && phi[(mask | 1 << i) as usize] == phi[mask as usize]);
        if !implied {
            columns.push((mask, c.clone()));
        }
    }
    let sol = solve_cover_lp(n, &columns)?;
    let witness = PointMeasure::from_weights(pts.iter().copied().zip(sol.packing.iter().cloned()))
        .ok_or(HullError::Certificate("negative packing weight"))?;
    let cover = sol.cover.iter().map(|(m, y)| (a.subset(*m), y.clone())).collect();
    let hull = Hull { set: a.clone(), value: sol.value, witness, cover };
    verify_hull_certificate(a, phi, &hull).map_err(HullError::Certificate)?;
    Ok(hull)
}

/// Values of `spec` on every subset of `a`, indexed by mask over `a.as_slice()`.
pub fn subset_values(spec: &SubmeasureSpec, a: &FinSet) -> Result<Vec<ExtRat>, EvalError> {
    a.subset_masks().map(|m| spec.eval(&a.subset(m))).collect()
}

/// `φ̂(A)` with an exact certificate; `|A| ≤ LP_CAP` and `φ(A) < ∞` required.
pub fn hat_phi(spec: &SubmeasureSpec, a: &FinSet) -> Result<Hull, HullError> {
    if a.len() > LP_CAP {
        return Err(HullError::TooLarge { size: a.len(), cap: LP_CAP });
    }
    if spec.eval(a)? == ExtRat::Infinite {
        return Err(HullError::Infinite);
    }
    hat_phi_from_table(a, &subset_values(spec, a)?)
}

/// Exact pathology degree over a finite scan family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathologyReport {
    pub degree: Rational,
    /// First set in scan order attaining the degree.
    pub witness_set: Option<FinSet>,
    pub witness_value: Option<Rational>,
    pub witness_hull: Option<Hull>,
    pub universe: u64,
    pub max_size: usize,
    pub scanned: u64,
    pub skipped_infinite: u64,
    pub skipped_null: u64,
    /// True when no set qualified and the degree 1 is conventional.
    pub empty_scan: bool,
}

/// `max φ(A)/φ̂(A)` over nonempty `A ⊆ {0..universe-1}` with `|A| ≤ max_size`.
///
/// Sets are scanned by size, then lexicographically; the first strict maximum wins.
/// Sets with `φ(A) = ∞` or `φ̂(A) = 0` are skipped.
pub fn pathology_degree(spec: &SubmeasureSpec, universe: u64, max_size: usize) -> Result<PathologyReport, HullError> {
    if max_size > LP_CAP {
        return Err(HullError::TooLarge { size: max_size, cap: LP_CAP });
    }
    assert!(universe <= 63, "pathology scans use 64-bit masks");
    let pts: Vec<u64> = (0..universe).collect();
    let mut memo: BTreeMap<u64, ExtRat> = BTreeMap::new();
    let mut value = |mask: u64| -> Result<ExtRat, EvalError> {
        if let Some(v) = memo.get(&mask) {
            return Ok(v.clone());
        }
        let v = spec.eval(&FinSet::from_mask(&pts, mask))?;
        memo.insert(mask, v.clone());
        Ok(v)
    };
    let mut report = PathologyReport {
        degree: Rational::from_integer(1.into()),
        witness_set: None,
        witness_value: None,
        witness_hull: None,
        universe,
        max_size,
        scanned: 0,
        skipped_infinite: 0,
        skipped_null: 0,
        empty_scan: true,
    };
    let top = max_size.min(universe as usize);
    for size in 1..=top {
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            let mask = combo.iter().fold(0u64, |m, &i| m | 1 << i);
            report.scanned += 1;
            match value(mask)? {
                ExtRat::Infinite => report.skipped_infinite += 1,
                ExtRat::Finite(v) => {
                    let a = FinSet::from_mask(&pts, mask);
                    let table: Vec<ExtRat> = (0..1u64 << size)
                        .map(|m| {
                            let g = combo.iter().enumerate().filter(|(j, _)| m >> j & 1 == 1).fold(0u64, |g, (_, &i)| g | 1 << i);
                            value(g)
                        })
                        .collect::<Result<_, _>>()?;
                    let hull = hat_phi_from_table(&a, &table)?;
                    if hull.value.is_zero() {
                        report.skipped_null += 1;
                    } else {
                        let ratio = &v / &hull.value;
                        if report.empty_scan || ratio > report.degree {
                            report.empty_scan = false;
                            report.degree = ratio;
                            report.witness_set = Some(a);
                            report.witness_value = Some(v);
                            report.witness_hull = Some(hull);
                        }
                    }
                }
            }
            if !next_combination(&mut combo, universe as usize) {
                break;
            }
        }
    }
    Ok(report)
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Outcome of the integer-valued pathology criterion on one set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CriterionVerdict {
    /// `|A| ≥ 2`, every `A∖{x}` has smaller value, and `φ(A) < |A|`: `φ` is pathological.
    Fired { value: u64, size: usize },
    NotFired { reason: &'static str },
    /// Some tested value is not a finite integer.
    Inapplicable { set: FinSet, value: ExtRat },
}

/// Tests the integer-valued criterion for pathology on `A`.
pub fn integer_pathology_criterion(spec: &SubmeasureSpec, a: &FinSet) -> Result<CriterionVerdict, EvalError> {
    let as_int = |s: &FinSet| -> Result<Result<u64, CriterionVerdict>, EvalError> {
        let v = spec.eval(s)?;
        Ok(match &v {
            ExtRat::Finite(r) if r.is_integer() => Ok(r.to_integer().try_into().unwrap_or(u64::MAX)),
            _ => Err(CriterionVerdict::Inapplicable { set: s.clone(), value: v }),
        })
    };
    let va = match as_int(a)? {
        Ok(v) => v,
        Err(e) => return Ok(e),
    };
    let mut all_drop = true;
    for x in a {
        match as_int(&a.without(x))? {
            Ok(v) => all_drop &= v < va,
            Err(e) => return Ok(e),
        }
    }
    Ok(if a.len() < 2 {
        CriterionVerdict::NotFired { reason: "needs at least two points" }
    } else if !all_drop {
        CriterionVerdict::NotFired { reason: "some one-point deletion keeps the value" }
    } else if va as u128 >= a.len() as u128 {
        CriterionVerdict::NotFired { reason: "value is not below the cardinality" }
    } else {
        CriterionVerdict::Fired { value: va, size: a.len() }
    })
}

/// Outcome of [`minimal_witness`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MinimalWitness {
    Found(FinSet),
    Inconclusive { examined: u64 },
}

/// A ⊆-minimal `B ⊆ {0..universe-1}` with `φ(B) = k`, scanning by size then lexicographically.
///
/// `budget` bounds the number of candidate sets evaluated.
pub fn minimal_witness(spec: &SubmeasureSpec, k: u64, universe: u64, budget: u64) -> Result<MinimalWitness, EvalError> {
    if k == 0 {
        return Ok(MinimalWitness::Found(FinSet::new()));
    }
    let target = ExtRat::from_int(k);
    let pts: Vec<u64> = (0..universe).collect();
    let mut examined = 0u64;
    for size in 1..=universe as usize {
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            if examined >= budget {
                return Ok(MinimalWitness::Inconclusive { examined });
            }
            examined += 1;
            let b: FinSet = combo.iter().map(|&i| pts[i]).collect();
            if spec.eval(&b)? == target {
                let mut minimal = true;
                for x in &b {
                    if spec.eval(&b.without(x))? >= target {
                        minimal = false;
                        break;
                    }
                }
                if minimal {
                    return Ok(MinimalWitness::Found(b));
                }
            }
            if !next_combination(&mut combo, universe as usize) {
                break;
            }
        }
    }
    Ok(MinimalWitness::Inconclusive { examined })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use crate::spec::TableSpec;
    use alloc::vec;
    use proptest::prelude::*;
    use subm_oracles::{hat_phi_by_vertices, pathology_degree_by_vertices};

    fn phi0() -> SubmeasureSpec {
        SubmeasureSpec::Table(
            TableSpec::from_fn(3, |s| match s.len() {
                0 => ExtRat::zero(),
                1 | 2 => ExtRat::from_int(1),
                _ => ExtRat::from_int(2),
            })
            .unwrap(),
        )
    }

    #[test]
    fn minimal_pathological_hull() {
        let h = hat_phi(&phi0(), &FinSet::from([0, 1, 2])).unwrap();
        assert_eq!(h.value, rat(3, 2));
        for p in 0..3 {
            assert_eq!(h.witness.weight(p), rat(1, 2));
        }
        assert_eq!(hat_phi(&phi0(), &FinSet::from([0, 1])).unwrap().value, int(1));
        assert_eq!(hat_phi(&phi0(), &FinSet::new()).unwrap().value, int(0));
    }

    #[test]
    fn minimal_pathological_degree_is_four_thirds() {
        let r = pathology_degree(&phi0(), 3, 3).unwrap();
        assert_eq!(r.degree, rat(4, 3));
        assert_eq!(r.witness_set, Some(FinSet::from([0, 1, 2])));
        assert!(!r.empty_scan);
    }

    #[test]
    fn measure_is_its_own_hull() {
        let mu = PointMeasure::from_weights([(0, rat(1, 3)), (2, int(2)), (5, rat(7, 4))]).unwrap();
        let spec = SubmeasureSpec::SupMeasures(vec![mu.clone()]);
        let a = FinSet::from([0, 1, 2, 5]);
        let h = hat_phi(&spec, &a).unwrap();
        assert_eq!(h.value, mu.measure(&a));
        assert_eq!(h.witness, mu);
        let r = pathology_degree(&spec, 6, 4).unwrap();
        assert_eq!(r.degree, int(1));
    }

    #[test]
    fn hull_errors() {
        let spec = SubmeasureSpec::SupMeasures(vec![]);
        assert!(matches!(hat_phi(&spec, &FinSet::range(15)), Err(HullError::TooLarge { size: 15, .. })));
        let inf = SubmeasureSpec::Table(TableSpec::from_fn(1, |s| if s.is_empty() { ExtRat::zero() } else { ExtRat::Infinite }).unwrap());
        assert_eq!(hat_phi(&inf, &FinSet::from([0])), Err(HullError::Infinite));
        let r = pathology_degree(&inf, 1, 1).unwrap();
        assert!(r.empty_scan);
        assert_eq!(r.degree, int(1));
        assert_eq!(r.skipped_infinite, 1);
    }

    #[test]
    fn criterion_cases() {
        assert_eq!(
            integer_pathology_criterion(&phi0(), &FinSet::from([0, 1, 2])).unwrap(),
            CriterionVerdict::Fired { value: 2, size: 3 }
        );
        let count = SubmeasureSpec::SupMeasures(vec![PointMeasure::uniform(&FinSet::range(4), int(1))]);
        assert!(matches!(integer_pathology_criterion(&count, &FinSet::from([0, 1, 2])).unwrap(), CriterionVerdict::NotFired { .. }));
        let half = SubmeasureSpec::SupMeasures(vec![PointMeasure::uniform(&FinSet::range(4), rat(1, 2))]);
        assert!(matches!(integer_pathology_criterion(&half, &FinSet::from([0])).unwrap(), CriterionVerdict::Inapplicable { .. }));
    }

    #[test]
    fn minimal_witnesses_small() {
        assert_eq!(minimal_witness(&phi0(), 0, 3, 10).unwrap(), MinimalWitness::Found(FinSet::new()));
        assert_eq!(minimal_witness(&phi0(), 1, 3, 10).unwrap(), MinimalWitness::Found(FinSet::from([0])));
        assert_eq!(minimal_witness(&phi0(), 2, 3, 100).unwrap(), MinimalWitness::Found(FinSet::from([0, 1, 2])));
        assert_eq!(minimal_witness(&phi0(), 2, 3, 3).unwrap(), MinimalWitness::Inconclusive { examined: 3 });
    }

    /// Random lscsm on `{0..u-1}`: max of a weighted set-cover cost and a measure.
    fn random_table(u: u32, costs: &[(u64, i64)], weights: &[i64]) -> TableSpec {
        let base = CoverCosts { u, costs: costs.to_vec() }.all();
        TableSpec::from_fn(u, |s| {
            let m = s.mask_in(&(0..u as u64).collect::<Vec<_>>()).unwrap();
            let mu: i64 = (0..u as usize).filter(|i| m >> i & 1 == 1).map(|i| weights[i % weights.len()]).sum();
            ExtRat::Finite(rat(base[m as usize], 1).max(rat(mu, 3)))
        })
        .unwrap()
    }

    struct CoverCosts {
        u: u32,
        costs: Vec<(u64, i64)>,
    }

    impl CoverCosts {
        /// Cheapest cover of every mask by the listed sets (each point also coverable alone at cost 2).
        fn all(&self) -> Vec<i64> {
            let full = 1usize << self.u;
            let mut options: Vec<(u64, i64)> = self.costs.clone();
            options.extend((0..self.u).map(|i| (1u64 << i, 2)));
            let mut best = vec![i64::MAX; full];
            best[0] = 0;
            for s in 0..full {
                if best[s] == i64::MAX {
                    continue;
                }
                for &(set, c) in &options {
                    let t = s | set as usize & (full - 1);
                    best[t] = best[t].min(best[s] + c);
                }
            }
            (0..full).map(|m| (0..full).filter(|&t| t & m == m).map(|t| best[t]).min().unwrap()).collect()
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]

        #[test]
        fn lp_matches_vertex_enumeration(costs in proptest::collection::vec((1u64..16, 1i64..4), 0..5), weights in proptest::collection::vec(0i64..4, 1..4)) {
            let t = random_table(4, &costs, &weights);
            let spec = SubmeasureSpec::Table(t.clone());
            for mask in 1..16u64 {
                let a = FinSet::from_mask(&[0, 1, 2, 3], mask);
                let h = hat_phi(&spec, &a).unwrap();
                let pts = a.as_slice().to_vec();
                let phi = |m: u64| {
                    let s = FinSet::from_mask(&pts, m);
                    spec.eval(&s).unwrap().finite().cloned()
                };
                prop_assert_eq!(h.value.clone(), hat_phi_by_vertices(pts.len(), &phi));
                prop_assert!(ExtRat::Finite(h.value) <= spec.eval(&a).unwrap());
            }
            let full = |m: u64| t.value_at(m).finite().cloned();
            prop_assert_eq!(pathology_degree(&spec, 4, 4).unwrap().degree, pathology_degree_by_vertices(4, 4, &full));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn hull_is_monotone(costs in proptest::collection::vec((1u64..32, 1i64..4), 0..6), a in 1u64..32, b in 1u64..32) {
            let spec = SubmeasureSpec::Table(random_table(5, &costs, &[0]));
            let pts = [0u64, 1, 2, 3, 4];
            let big = FinSet::from_mask(&pts, a | b);
            let small = FinSet::from_mask(&pts, a);
            prop_assert!(hat_phi(&spec, &small).unwrap().value <= hat_phi(&spec, &big).unwrap().value);
        }

        #[test]
        fn measure_suprema_are_not_pathological(ws in proptest::collection::vec(proptest::collection::vec((0u64..6, 1i64..5), 1..5), 1..4), sub in 1u64..64) {
            let ms: Vec<PointMeasure> = ws.iter().map(|w| PointMeasure::from_weights(w.iter().map(|&(n, x)| (n, int(x as u64)))).unwrap()).collect();
            let spec = SubmeasureSpec::SupMeasures(ms);
            let a = FinSet::from_mask(&[0, 1, 2, 3, 4, 5], sub);
            prop_assert_eq!(ExtRat::Finite(hat_phi(&spec, &a).unwrap().value), spec.eval(&a).unwrap());
            let restricted = SubmeasureSpec::restricted(spec, crate::spec::Block::Set(a));
            prop_assert_eq!(pathology_degree(&restricted, 6, 4).unwrap().degree, int(1));
        }
    }
}
