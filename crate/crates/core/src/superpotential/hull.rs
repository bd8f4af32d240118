//! Exact convex-hull vertex detection by brute force over small subsets.

use num_traits::{One, Signed};

use crate::algebra::linear::{solve, Matrix};
use crate::algebra::Rational;
use crate::orbit::ExtVector;

/// Calls `f` on every `k`-subset of `0..n` (as sorted index lists).
pub fn for_each_subset(n: usize, k: usize, f: &mut impl FnMut(&[usize]) -> bool) -> bool {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize]) -> bool) -> bool {
        if cur.len() == k {
            return f(cur);
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            if rec(i + 1, n, k, cur, f) {
                return true;
            }
            cur.pop();
        }
        false
    }
    rec(0, n, k, &mut Vec::with_capacity(k), f)
}

/// Barycentric coordinates of `x` with respect to affinely independent
/// points, if `x` lies in their affine span.
fn barycentric(x: &ExtVector, pts: &[&ExtVector]) -> Option<Vec<Rational>> {
    let dim = x.len();
    let k = pts.len();
    let mut rows: Vec<Vec<Rational>> = (0..dim).map(|i| pts.iter().map(|p| p.0[i].clone()).collect()).collect();
    rows.push(vec![Rational::one(); k]);
    let mut rhs = x.0.clone();
    rhs.push(Rational::one());
    let sol = solve(&Matrix::from_rows(&rows), &rhs)?;
    sol.nullspace.is_empty().then_some(sol.particular)
}

/// Whether `x` is a convex combination of `pts`.
pub fn in_convex_hull(x: &ExtVector, pts: &[ExtVector]) -> bool {
    if pts.is_empty() {
        return false;
    }
    let max_k = (x.len() + 1).min(pts.len());
    (1..=max_k).any(|k| {
        for_each_subset(pts.len(), k, &mut |idx| {
            let sel: Vec<&ExtVector> = idx.iter().map(|&i| &pts[i]).collect();
            barycentric(x, &sel).is_some_and(|l| l.iter().all(|v| !v.is_negative()))
        })
    })
}

/// Indices of the vertices of `conv(pts)`. Duplicated points count once
/// (first occurrence).
pub fn hull_vertices(pts: &[ExtVector]) -> Vec<usize> {
    (0..pts.len())
        .filter(|&i| {
            if pts[..i].contains(&pts[i]) {
                return false;
            }
            let others: Vec<ExtVector> =
                pts.iter().enumerate().filter(|(j, p)| *j != i && *p != &pts[i]).map(|(_, p)| p.clone()).collect();
            !in_convex_hull(&pts[i], &others)
        })
        .collect()
}
