//! Brute-force reference computations, written independently of `subm-core`.
//!
//! Every routine here is exponential and meant for tiny instances only.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

pub type Q = BigRational;

pub fn q(p: i64, d: i64) -> Q {
    Q::new(BigInt::from(p), BigInt::from(d))
}

/// Solves the square system `a x = b` exactly; `None` when singular.
pub fn solve_linear(mut a: Vec<Vec<Q>>, mut b: Vec<Q>) -> Option<Vec<Q>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        let p = a[col][col].clone();
        for c in col..n {
            a[col][c] = &a[col][c] / &p;
        }
        b[col] = &b[col] / &p;
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..n {
                    let v = &f * &a[col][c];
                    a[r][c] -= v;
                }
                let v = &f * &b[col];
                b[r] -= v;
            }
        }
    }
    Some(b)
}

fn combinations(m: usize, k: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..m {
            if m - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, m, k, cur, f);
            cur.pop();
        }
    }
    rec(0, m, k, &mut Vec::new(), f);
}

/// `max Σ w_i` over `w ≥ 0` with `Σ_{i∈B} w_i ≤ phi(B)` for every nonempty mask `B`
/// of `n` points, by enumerating every vertex of the feasible polytope.
///
/// `phi` returns `None` for an infinite value (constraint dropped).
pub fn hat_phi_by_vertices(n: usize, phi: &dyn Fn(u64) -> Option<Q>) -> Q {
    if n == 0 {
        return Q::zero();
    }
    // rows: n nonnegativity constraints, then one per finite subset
    let mut rows: Vec<(Vec<Q>, Q)> = Vec::new();
    for i in 0..n {
        let mut r = vec![Q::zero(); n];
        r[i] = -Q::from_integer(1.into());
        rows.push((r, Q::zero()));
    }
    for mask in 1..(1u64 << n) {
        if let Some(v) = phi(mask) {
            let r = (0..n).map(|i| if mask >> i & 1 == 1 { Q::from_integer(1.into()) } else { Q::zero() }).collect();
            rows.push((r, v));
        }
    }
    let mut best: Option<Q> = None;
    combinations(rows.len(), n, &mut |idx| {
        let a = idx.iter().map(|&i| rows[i].0.clone()).collect();
        let b = idx.iter().map(|&i| rows[i].1.clone()).collect();
        if let Some(w) = solve_linear(a, b) {
            let feasible = rows.iter().all(|(r, rhs)| {
                let lhs: Q = r.iter().zip(&w).map(|(a, x)| a * x).sum();
                lhs <= *rhs
            });
            if feasible {
                let obj: Q = w.iter().sum();
                if best.as_ref().is_none_or(|b| obj > *b) {
                    best = Some(obj);
                }
            }
        }
    });
    best.expect("w = 0 is always a vertex")
}

/// `max φ(A)/φ̂(A)` over nonempty `A ⊆ {0..u-1}`, `|A| ≤ max_size`, finite `φ(A)`
/// and `φ̂(A) > 0`; 1 when nothing qualifies. `phi` works on masks of `{0..u-1}`.
pub fn pathology_degree_by_vertices(u: usize, max_size: usize, phi: &dyn Fn(u64) -> Option<Q>) -> Q {
    let mut best = Q::from_integer(1.into());
    for a in 1..(1u64 << u) {
        if a.count_ones() as usize > max_size {
            continue;
        }
        let Some(va) = phi(a) else { continue };
        let pts: Vec<usize> = (0..u).filter(|i| a >> i & 1 == 1).collect();
        let local = |m: u64| {
            let mut g = 0u64;
            for (j, &p) in pts.iter().enumerate() {
                if m >> j & 1 == 1 {
                    g |= 1 << p;
                }
            }
            phi(g)
        };
        let h = hat_phi_by_vertices(pts.len(), &local);
        if h.is_positive() {
            let r = va / h;
            if r > best {
                best = r;
            }
        }
    }
    best
}

/// `sup_{G⊆F} ‖Σ_{n∈G} x_n‖_∞` by enumerating all subsets of `F`.
///
/// `x[n]` lists `(coordinate, value)` pairs.
pub fn phi_x_by_subsets(x: &[Vec<(u64, Q)>], f: &[usize]) -> Q {
    let mut best = Q::zero();
    for mask in 0..(1u64 << f.len()) {
        let mut acc: std::collections::BTreeMap<u64, Q> = Default::default();
        for (j, &n) in f.iter().enumerate() {
            if mask >> j & 1 == 1 {
                for (k, v) in &x[n] {
                    *acc.entry(*k).or_insert_with(Q::zero) += v;
                }
            }
        }
        for v in acc.values() {
            if v.abs() > best {
                best = v.abs();
            }
        }
    }
    best
}

/// Smallest number of blocks in a partition of `{0..n-1}` whose blocks all satisfy `ok`,
/// found by enumerating every set partition. `None` if no partition qualifies.
pub fn cover_by_partitions(n: usize, ok: &dyn Fn(u64) -> bool) -> Option<usize> {
    fn rec(i: usize, n: usize, blocks: &mut Vec<u64>, ok: &dyn Fn(u64) -> bool, best: &mut Option<usize>) {
        if best.is_some_and(|b| blocks.len() >= b) {
            return;
        }
        if i == n {
            if blocks.iter().all(|&b| ok(b)) {
                *best = Some(blocks.len());
            }
            return;
        }
        for j in 0..blocks.len() {
            blocks[j] |= 1 << i;
            rec(i + 1, n, blocks, ok, best);
            blocks[j] &= !(1 << i);
        }
        blocks.push(1 << i);
        rec(i + 1, n, blocks, ok, best);
        blocks.pop();
    }
    let mut best = None;
    rec(0, n, &mut Vec::new(), ok, &mut best);
    if n == 0 {
        return Some(0);
    }
    best
}

/// Integer square root by bisection.
pub fn isqrt(n: u64) -> u64 {
    let (mut lo, mut hi) = (0u64, 1u64 << 32);
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if mid.checked_mul(mid).is_some_and(|s| s <= n) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_hull() {
        let phi = |m: u64| Some(if m.count_ones() <= 2 { q(1, 1) } else { q(2, 1) });
        assert_eq!(hat_phi_by_vertices(3, &phi), q(3, 2));
        assert_eq!(pathology_degree_by_vertices(3, 3, &phi), q(4, 3));
    }

    #[test]
    fn partitions_of_four_into_pairs() {
        assert_eq!(cover_by_partitions(4, &|b| b.count_ones() <= 2), Some(2));
        assert_eq!(cover_by_partitions(3, &|b| b.count_ones() <= 1), Some(3));
    }

    #[test]
    fn subset_sup() {
        let x = vec![vec![(0, q(1, 1)), (1, q(-1, 1))], vec![(0, q(1, 1)), (1, q(1, 1))]];
        assert_eq!(phi_x_by_subsets(&x, &[0, 1]), q(2, 1));
    }

    #[test]
    fn square_roots() {
        for n in [0u64, 1, 2, 3, 4, 15, 16, 17, 1 << 40, u64::MAX] {
            let r = isqrt(n);
            assert!(r * r <= n && (r + 1).checked_mul(r + 1).is_none_or(|s| s > n));
        }
    }
}
