//! Dense matrices over a generic scalar field: multiplication, Gaussian
//! elimination with partial pivoting, and kernel bases, over exact
//! rationals as well as floats.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use std::fmt;
use std::ops::{Index, IndexMut};

/// Row-major dense matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "empty matrix");
        Matrix { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        assert!(!rows.is_empty(), "empty matrix");
        let cols = rows[0].len();
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Matrix { rows: rows.len(), cols, data: rows.into_iter().flatten().collect() }
    }

    pub fn diagonal(entries: &[S]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)].clone() + other[(i, j)].clone())
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)].clone() - other[(i, j)].clone())
    }

    pub fn scale(&self, factor: &S) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)].clone() * factor.clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)].clone();
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] = out[(i, j)].clone() + a.clone() * other[(k, j)].clone();
                }
            }
        }
        out
    }

    /// `v^T * self` for a row vector `v`.
    pub fn left_mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![S::zero(); self.cols];
        for i in 0..self.rows {
            if v[i].is_zero() {
                continue;
            }
            for j in 0..self.cols {
                out[j] = out[j].clone() + v[i].clone() * self[(i, j)].clone();
            }
        }
        out
    }

    /// `self * v` for a column vector `v`.
    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(v.len(), self.cols);
        let mut out = vec![S::zero(); self.rows];
        for i in 0..self.rows {
            let mut acc = S::zero();
            for j in 0..self.cols {
                acc = acc + self[(i, j)].clone() * v[j].clone();
            }
            out[i] = acc;
        }
        out
    }

    /// Copies the `rows x cols` block whose top-left corner is `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols, "block out of range");
        Self::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)].clone())
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Self) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(r0 + i, c0 + j)] = block[(i, j)].clone();
            }
        }
    }

    pub fn max_abs(&self) -> S {
        crate::scalar::max_abs(&self.data)
    }

    pub fn max_abs_diff(&self, other: &Self) -> S {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.sub(other).max_abs()
    }

    pub fn is_symmetric_within(&self, tol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                if !self[(i, j)].approx_eq(&self[(j, i)], tol) {
                    return false;
                }
            }
        }
        true
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].abs_f64()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Solves `self * X = rhs` by Gaussian elimination with partial pivoting.
    ///
    /// Pivots compare by absolute value, so the rational backend eliminates
    /// exactly and reports singularity exactly.
    pub fn solve(&self, rhs: &Self) -> Result<Self> {
        assert!(self.is_square(), "solve needs a square matrix");
        assert_eq!(self.rows, rhs.rows, "dimension mismatch in solve");
        let n = self.rows;
        let mut a = self.clone();
        let mut b = rhs.clone();
        for col in 0..n {
            let pivot_row = (col..n)
                .max_by(|&p, &q| {
                    a[(p, col)].abs().partial_cmp(&a[(q, col)].abs()).expect("unordered pivot")
                })
                .unwrap();
            if a[(pivot_row, col)].is_zero() {
                return Err(Error::SingularMatrix);
            }
            if pivot_row != col {
                a.swap_rows(pivot_row, col);
                b.swap_rows(pivot_row, col);
            }
            let pivot = a[(col, col)].clone();
            for r in (col + 1)..n {
                if a[(r, col)].is_zero() {
                    continue;
                }
                let factor = a[(r, col)].clone() / pivot.clone();
                for c in col..n {
                    let v = a[(col, c)].clone() * factor.clone();
                    a[(r, c)] = a[(r, c)].clone() - v;
                }
                for c in 0..b.cols {
                    let v = b[(col, c)].clone() * factor.clone();
                    b[(r, c)] = b[(r, c)].clone() - v;
                }
            }
        }
        // back substitution
        let mut x = Matrix::<S>::zeros(n, b.cols);
        for c in 0..b.cols {
            for i in (0..n).rev() {
                let mut acc = b[(i, c)].clone();
                for j in (i + 1)..n {
                    acc = acc - a[(i, j)].clone() * x[(j, c)].clone();
                }
                x[(i, c)] = acc / a[(i, i)].clone();
            }
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<Self> {
        self.solve(&Self::identity(self.rows))
    }

    /// 1-norm condition estimate `||A||_1 * ||A^-1||_1`; infinite when singular.
    pub fn condition_one(&self) -> f64 {
        match self.inverse() {
            Ok(inv) => self.norm_one() * inv.norm_one(),
            Err(_) => f64::INFINITY,
        }
    }

    /// Basis of the kernel `{v : self * v = 0}` via reduced row echelon form.
    ///
    /// Entries with absolute value at most `pivot_tol` are treated as zero;
    /// pass `0.0` on the exact backend.
    pub fn null_space(&self, pivot_tol: f64) -> Vec<Vec<S>> {
        let mut a = self.clone();
        let (rows, cols) = (a.rows, a.cols);
        let mut pivot_cols = Vec::new();
        let mut r = 0usize;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let pivot_row = (r..rows)
                .max_by(|&p, &q| {
                    a[(p, c)].abs().partial_cmp(&a[(q, c)].abs()).expect("unordered pivot")
                })
                .unwrap();
            if a[(pivot_row, c)].abs_f64() <= pivot_tol || a[(pivot_row, c)].is_zero() {
                continue;
            }
            a.swap_rows(pivot_row, r);
            let pivot = a[(r, c)].clone();
            for j in c..cols {
                a[(r, j)] = a[(r, j)].clone() / pivot.clone();
            }
            for i in 0..rows {
                if i == r || a[(i, c)].is_zero() {
                    continue;
                }
                let factor = a[(i, c)].clone();
                for j in c..cols {
                    let v = a[(r, j)].clone() * factor.clone();
                    a[(i, j)] = a[(i, j)].clone() - v;
                }
            }
            pivot_cols.push(c);
            r += 1;
        }
        let mut basis = Vec::new();
        for free in 0..cols {
            if pivot_cols.contains(&free) {
                continue;
            }
            let mut v = vec![S::zero(); cols];
            v[free] = S::one();
            for (pr, &pc) in pivot_cols.iter().enumerate() {
                v[pc] = -a[(pr, free)].clone();
            }
            basis.push(v);
        }
        basis
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl<S: Scalar> Index<(usize, usize)> for Matrix<S> {
    type Output = S;

    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S: Scalar> IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

impl<S: fmt::Debug> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{:?} ", self.data[i * self.cols + j])?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::Zero;
    use crate::scalar::Rational;

    fn r(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn solve_recovers_exact_inverse() {
        let a = Matrix::from_rows(vec![
            vec![r(1, 2), r(0, 1)],
            vec![r(1, 3), r(1, 6)],
        ]);
        let inv = a.inverse().unwrap();
        assert_eq!(
            inv,
            Matrix::from_rows(vec![vec![r(2, 1), r(0, 1)], vec![r(-4, 1), r(6, 1)]])
        );
        assert_eq!(a.mul(&inv), Matrix::identity(2));
    }

    #[test]
    fn singular_matrix_is_detected_exactly() {
        let a = Matrix::from_rows(vec![
            vec![r(1, 1), r(2, 1)],
            vec![r(2, 1), r(4, 1)],
        ]);
        assert!(matches!(a.inverse(), Err(Error::SingularMatrix)));
    }

    #[test]
    fn null_space_of_rank_one_matrix() {
        // rows all proportional to (1, 2, 3): kernel has dimension 2
        let a = Matrix::from_rows(vec![
            vec![r(1, 1), r(2, 1), r(3, 1)],
            vec![r(2, 1), r(4, 1), r(6, 1)],
        ]);
        let basis = a.null_space(0.0);
        assert_eq!(basis.len(), 2);
        for v in &basis {
            let image = a.mul_vec(v);
            assert!(image.iter().all(|e| e.is_zero()));
        }
    }

    #[test]
    fn float_pivoting_handles_small_leading_entry() {
        let a = Matrix::from_rows(vec![vec![1e-14f64, 1.0], vec![1.0, 1.0]]);
        let x = a.solve(&Matrix::from_rows(vec![vec![1.0], vec![2.0]])).unwrap();
        let residual0 = 1e-14 * x[(0, 0)] + x[(1, 0)] - 1.0;
        let residual1 = x[(0, 0)] + x[(1, 0)] - 2.0;
        assert!(residual0.abs() < 1e-10 && residual1.abs() < 1e-10);
    }

    #[test]
    fn one_norm_is_max_column_sum() {
        let a = Matrix::from_rows(vec![vec![1.0f64, -7.0], vec![-2.0, 0.5]]);
        assert_eq!(a.norm_one(), 7.5);
    }
}
