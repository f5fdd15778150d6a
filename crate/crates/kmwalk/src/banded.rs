//! Banded matrices and polynomial evaluation on them.
//!
//! Storage is dense with declared bandwidths; multiplication walks only
//! the band. Entries outside the declared band are identically zero.

use crate::matrix::Matrix;
use crate::orthopoly::JacobiCoefficients;
use crate::poly::Polynomial;
use crate::scalar::Scalar;

/// Square matrix with declared lower/upper bandwidths.
///
/// Entries outside the declared band are identically zero, not merely
/// small; [`BandedMatrix::verify_band`] checks this structurally.
#[derive(Clone, PartialEq)]
pub struct BandedMatrix<S> {
    lower_bw: usize,
    upper_bw: usize,
    data: Matrix<S>,
}

impl<S: Scalar> BandedMatrix<S> {
    /// Wraps a dense square matrix, measuring the actual bandwidths.
    pub fn from_dense(data: Matrix<S>) -> Self {
        assert!(data.is_square(), "banded matrices are square");
        let n = data.nrows();
        let mut lower = 0usize;
        let mut upper = 0usize;
        for i in 0..n {
            for j in 0..n {
                if !data[(i, j)].is_zero() {
                    if i > j {
                        lower = lower.max(i - j);
                    } else {
                        upper = upper.max(j - i);
                    }
                }
            }
        }
        BandedMatrix { lower_bw: lower, upper_bw: upper, data }
    }

    pub fn identity(n: usize) -> Self {
        BandedMatrix { lower_bw: 0, upper_bw: 0, data: Matrix::identity(n) }
    }

    pub fn zeros(n: usize) -> Self {
        BandedMatrix { lower_bw: 0, upper_bw: 0, data: Matrix::zeros(n, n) }
    }

    pub fn size(&self) -> usize {
        self.data.nrows()
    }

    pub fn lower_bandwidth(&self) -> usize {
        self.lower_bw
    }

    pub fn upper_bandwidth(&self) -> usize {
        self.upper_bw
    }

    pub fn bandwidth(&self) -> usize {
        self.lower_bw.max(self.upper_bw)
    }

    pub fn entry(&self, i: usize, j: usize) -> &S {
        &self.data[(i, j)]
    }

    pub fn dense(&self) -> &Matrix<S> {
        &self.data
    }

    pub fn into_dense(self) -> Matrix<S> {
        self.data
    }

    /// Confirms that every entry outside the declared band is exactly zero.
    pub fn verify_band(&self) -> bool {
        let n = self.size();
        for i in 0..n {
            for j in 0..n {
                let inside =
                    (j + self.lower_bw >= i) && (i + self.upper_bw >= j);
                if !inside && !self.data[(i, j)].is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// Band-aware product; bandwidths add (clamped to the size).
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.size(), other.size());
        let n = self.size();
        let lower = (self.lower_bw + other.lower_bw).min(n - 1);
        let upper = (self.upper_bw + other.upper_bw).min(n - 1);
        let mut out = Matrix::<S>::zeros(n, n);
        for i in 0..n {
            let k_lo = i.saturating_sub(self.lower_bw);
            let k_hi = (i + self.upper_bw).min(n - 1);
            for k in k_lo..=k_hi {
                let a = self.data[(i, k)].clone();
                if a.is_zero() {
                    continue;
                }
                let j_lo = k.saturating_sub(other.lower_bw);
                let j_hi = (k + other.upper_bw).min(n - 1);
                for j in j_lo..=j_hi {
                    out[(i, j)] = out[(i, j)].clone() + a.clone() * other.data[(k, j)].clone();
                }
            }
        }
        BandedMatrix { lower_bw: lower, upper_bw: upper, data: out }
    }

    /// `self + factor * I`.
    pub fn add_scalar_diag(&self, factor: &S) -> Self {
        let mut data = self.data.clone();
        for i in 0..self.size() {
            data[(i, i)] = data[(i, i)].clone() + factor.clone();
        }
        BandedMatrix { lower_bw: self.lower_bw, upper_bw: self.upper_bw, data }
    }

    pub fn scale(&self, factor: &S) -> Self {
        BandedMatrix {
            lower_bw: self.lower_bw,
            upper_bw: self.upper_bw,
            data: self.data.scale(factor),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.size(), other.size());
        BandedMatrix {
            lower_bw: self.lower_bw.max(other.lower_bw),
            upper_bw: self.upper_bw.max(other.upper_bw),
            data: self.data.add(&other.data),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.size(), other.size());
        BandedMatrix {
            lower_bw: self.lower_bw.max(other.lower_bw),
            upper_bw: self.upper_bw.max(other.upper_bw),
            data: self.data.sub(&other.data),
        }
    }

    /// `self^n` by repeated band-aware multiplication.
    pub fn pow(&self, n: usize) -> Self {
        let mut acc = Self::identity(self.size());
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn max_abs_diff(&self, other: &Self) -> S {
        self.data.max_abs_diff(&other.data)
    }

    /// All entries `>= -tol` and every row sum equal to 1 within `tol`
    /// (both exact on the rational backend).
    pub fn is_stochastic(&self, tol: f64) -> bool {
        let n = self.size();
        for i in 0..n {
            let mut sum = S::zero();
            for j in 0..n {
                if !self.data[(i, j)].nonneg_within(tol) {
                    return false;
                }
                sum = sum + self.data[(i, j)].clone();
            }
            if !sum.approx_eq(&S::one(), tol) {
                return false;
            }
        }
        true
    }

    pub fn row_sums(&self) -> Vec<S> {
        (0..self.size())
            .map(|i| {
                let mut acc = S::zero();
                for j in 0..self.size() {
                    acc = acc + self.data[(i, j)].clone();
                }
                acc
            })
            .collect()
    }
}

impl<S: Scalar> std::fmt::Debug for BandedMatrix<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "BandedMatrix(size={}, band=({},{}), data={:?})",
            self.size(),
            self.lower_bw,
            self.upper_bw,
            self.data
        )
    }
}

/// Tridiagonal matrix of a three-term recurrence: `b` on the diagonal, `a`
/// on the superdiagonal, `c` on the subdiagonal.
pub fn jacobi_matrix<S: Scalar>(coeffs: &JacobiCoefficients<S>) -> BandedMatrix<S> {
    let n = coeffs.size();
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = coeffs.b()[i].clone();
        if i + 1 < n {
            m[(i, i + 1)] = coeffs.a()[i].clone();
            m[(i + 1, i)] = coeffs.c()[i + 1].clone();
        }
    }
    let bw = if n > 1 { 1 } else { 0 };
    BandedMatrix { lower_bw: bw, upper_bw: bw, data: m }
}

/// Evaluates `theta(m)` by Horner's scheme: one band-aware multiply per
/// degree. The result's declared bandwidth is `deg(theta) * bandwidth(m)`,
/// clamped to the size; entries beyond it are structurally zero.
pub fn theta_of_matrix<S: Scalar>(theta: &Polynomial<S>, m: &BandedMatrix<S>) -> BandedMatrix<S> {
    let n = m.size();
    let deg = theta.degree();
    let mut acc = BandedMatrix {
        lower_bw: 0,
        upper_bw: 0,
        data: Matrix::identity(n).scale(&theta.coeff(deg)),
    };
    for k in (0..deg).rev() {
        acc = acc.mul(m).add_scalar_diag(&theta.coeff(k));
    }
    // each Horner step widened the declared band by band(m), so the result
    // carries deg * band(m) clamped to the size
    debug_assert_eq!(acc.lower_bw, (deg * m.lower_bandwidth()).min(n - 1));
    debug_assert_eq!(acc.upper_bw, (deg * m.upper_bandwidth()).min(n - 1));
    debug_assert!(acc.verify_band());
    acc
}
