//! Exact linear algebra over the rationals.

use num_traits::{One, Zero};

use super::Rational;

/// Dense rational matrix in row-major order.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn from_rows(rows: &[Vec<Rational>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged matrix");
            for (j, v) in r.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        m
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = Rational::one() / &self[(r, c)];
            for j in c..self.cols {
                let v = &self[(r, j)] * &inv;
                self[(r, j)] = v;
            }
            for i in 0..self.rows {
                if i == r || self[(i, c)].is_zero() {
                    continue;
                }
                let f = self[(i, c)].clone();
                for j in c..self.cols {
                    let v = &self[(i, j)] - &f * &self[(r, j)];
                    self[(i, j)] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

/// Solution set of `A x = b`: a particular solution plus a nullspace basis.
#[derive(Clone, Debug)]
pub struct Solution {
    pub particular: Vec<Rational>,
    pub nullspace: Vec<Vec<Rational>>,
}

/// Solves `A x = b` exactly. Returns `None` if the system is inconsistent.
/// Free variables are set to zero in the particular solution.
pub fn solve(a: &Matrix, b: &[Rational]) -> Option<Solution> {
    assert_eq!(a.rows, b.len());
    let n = a.cols;
    let mut aug = Matrix::zeros(a.rows, n + 1);
    for i in 0..a.rows {
        for j in 0..n {
            aug[(i, j)] = a[(i, j)].clone();
        }
        aug[(i, n)] = b[i].clone();
    }
    let pivots = aug.rref();
    if pivots.last() == Some(&n) {
        return None;
    }
    let mut particular = vec![Rational::zero(); n];
    for (r, &c) in pivots.iter().enumerate() {
        particular[c] = aug[(r, n)].clone();
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let nullspace = free
        .iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); n];
            v[f] = Rational::one();
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = -aug[(r, f)].clone();
            }
            v
        })
        .collect();
    Some(Solution { particular, nullspace })
}

/// Signature `(positive, negative, zero)` of a symmetric rational matrix via
/// symmetric Gaussian elimination with congruence moves.
pub fn signature(sym: &Matrix) -> (usize, usize, usize) {
    assert_eq!(sym.rows, sym.cols);
    let n = sym.rows;
    let mut m = sym.clone();
    let (mut pos, mut neg, mut zero) = (0, 0, 0);
    let mut active: Vec<usize> = (0..n).collect();
    while !active.is_empty() {
        // pick a nonzero diagonal pivot, or manufacture one with a row/column add
        let pivot = active.iter().copied().find(|&i| !m[(i, i)].is_zero());
        let k = match pivot {
            Some(k) => k,
            None => {
                let pair = active
                    .iter()
                    .copied()
                    .find_map(|i| active.iter().copied().find(|&j| j != i && !m[(i, j)].is_zero()).map(|j| (i, j)));
                match pair {
                    None => {
                        zero += active.len();
                        break;
                    }
                    Some((i, j)) => {
                        // x_i <- x_i + x_j makes m[i][i] = 2 m[i][j] (m[j][j] = 0)
                        for c in 0..n {
                            let v = &m[(i, c)] + &m[(j, c)];
                            m[(i, c)] = v;
                        }
                        for r in 0..n {
                            let v = &m[(r, i)] + &m[(r, j)];
                            m[(r, i)] = v;
                        }
                        i
                    }
                }
            }
        };
        let d = m[(k, k)].clone();
        if d > Rational::zero() {
            pos += 1;
        } else {
            neg += 1;
        }
        active.retain(|&i| i != k);
        for &i in &active {
            let f = &m[(i, k)] / &d;
            if f.is_zero() {
                continue;
            }
            for &j in &active {
                let v = &m[(i, j)] - &f * &m[(k, j)];
                m[(i, j)] = v;
            }
        }
    }
    (pos, neg, zero)
}
