//! Exact revised simplex for covering linear programs over subsets of a small ground set.
//!
//! Solves `min Σ_j c_j y_j` subject to `Σ_{j ∋ i} y_j ≥ 1` for every point `i`,
//! `y ≥ 0`, where each column `j` is a subset (bitmask) with cost `c_j ≥ 0`.
//! The simplex multipliers at optimum solve the packing dual
//! `max Σ_i w_i` subject to `Σ_{i∈B} w_i ≤ c_B`, `w ≥ 0`.
//! Bland's rule governs both entering and leaving choices.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LpError {
    #[error("point {0} has no singleton column to start from")]
    MissingSingleton(usize),
    #[error("negative column cost")]
    NegativeCost,
    #[error("objective unbounded below")]
    Unbounded,
    #[error("iteration limit {0} reached")]
    IterationLimit(usize),
}

/// Optimal primal cover and dual packing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverLpSolution {
    pub value: Rational,
    /// Dual packing weights `w_i`, one per point.
    pub packing: Vec<Rational>,
    /// Columns with positive cover weight, as `(mask, y)`.
    pub cover: Vec<(u64, Rational)>,
    pub iterations: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
enum Var {
    Column(usize),
    Surplus(usize),
}

/// Solves the covering LP on `n` points with the given columns.
pub fn solve_cover_lp(n: usize, columns: &[(u64, Rational)]) -> Result<CoverLpSolution, LpError> {
    if columns.iter().any(|(_, c)| c.is_negative()) {
        return Err(LpError::NegativeCost);
    }
    if n == 0 {
        return Ok(CoverLpSolution { value: Rational::zero(), packing: Vec::new(), cover: Vec::new(), iterations: 0 });
    }
    let mut basis = Vec::with_capacity(n);
    for i in 0..n {
        let j = columns.iter().position(|(m, _)| *m == 1u64 << i).ok_or(LpError::MissingSingleton(i))?;
        basis.push(Var::Column(j));
    }
    let zero = Rational::zero();
    let one = Rational::one();
    let mut binv: Vec<Vec<Rational>> = (0..n).map(|r| (0..n).map(|c| if r == c { one.clone() } else { zero.clone() }).collect()).collect();
    let mut xb: Vec<Rational> = vec![one.clone(); n];
    let cost = |v: Var| -> Rational {
        match v {
            Var::Column(j) => columns[j].1.clone(),
            Var::Surplus(_) => Rational::zero(),
        }
    };
    let limit = 10_000 + 50 * columns.len();
    let mut iterations = 0;
    loop {
        // multipliers π = c_B B⁻¹
        let cb: Vec<Rational> = basis.iter().map(|&v| cost(v)).collect();
        let pi: Vec<Rational> = (0..n)
            .map(|c| (0..n).filter(|&r| !cb[r].is_zero() && !binv[r][c].is_zero()).map(|r| &cb[r] * &binv[r][c]).sum())
            .collect();
        let entering = columns
            .iter()
            .enumerate()
            .find(|(_, (mask, c))| {
                let load: Rational = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| &pi[i]).sum();
                *c < load
            })
            .map(|(j, _)| Var::Column(j))
            .or_else(|| (0..n).find(|&i| pi[i].is_negative()).map(Var::Surplus));
        let Some(q) = entering else {
            let value: Rational = pi.iter().sum();
            let mut cover: Vec<(u64, Rational)> = basis
                .iter()
                .zip(&xb)
                .filter_map(|(v, x)| match v {
                    Var::Column(j) if x.is_positive() => Some((columns[*j].0, x.clone())),
                    _ => None,
                })
                .collect();
            cover.sort_by(|a, b| a.0.cmp(&b.0));
            return Ok(CoverLpSolution { value, packing: pi, cover, iterations });
        };
        iterations += 1;
        if iterations > limit {
            return Err(LpError::IterationLimit(limit));
        }
        let d: Vec<Rational> = (0..n)
            .map(|r| match q {
                Var::Column(j) => {
                    let mask = columns[j].0;
                    (0..n).filter(|i| mask >> i & 1 == 1).map(|i| &binv[r][i]).sum()
                }
                Var::Surplus(i) => -binv[r][i].clone(),
            })
            .collect();
        let mut leave: Option<(usize, Rational)> = None;
        for r in 0..n {
            if d[r].is_positive() {
                let theta = &xb[r] / &d[r];
                let better = match &leave {
                    None => true,
                    Some((lr, t)) => theta < *t || (theta == *t && basis[r] < basis[*lr]),
                };
                if better {
                    leave = Some((r, theta));
                }
            }
        }
        let (r, _) = leave.ok_or(LpError::Unbounded)?;
        let piv = d[r].clone();
        for c in 0..n {
            binv[r][c] = &binv[r][c] / &piv;
        }
        xb[r] = &xb[r] / &piv;
        let prow = binv[r].clone();
        let px = xb[r].clone();
        for s in 0..n {
            if s != r && !d[s].is_zero() {
                for c in 0..n {
                    if !prow[c].is_zero() {
                        binv[s][c] = &binv[s][c] - &d[s] * &prow[c];
                    }
                }
                xb[s] = &xb[s] - &d[s] * &px;
            }
        }
        basis[r] = q;
    }
}
