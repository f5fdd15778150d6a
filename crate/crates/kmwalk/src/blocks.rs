//! Block partition of a banded matrix and the matrix-valued orthogonal
//! polynomials it generates.
//!
//! A banded matrix of bandwidth at most `m` whose size is a multiple of `m`
//! is block tridiagonal in `m x m` blocks. When the matrix is `theta(J)`
//! for a tridiagonal `J` and `deg theta = m`, the superdiagonal blocks are
//! invertible lower triangular, and the block three-term recurrence
//!
//! ```text
//! x P_j(x) = A_j P_{j+1}(x) + B_j P_j(x) + C_j P_{j-1}(x),   P_-1 = 0, P_0 = I
//! ```
//!
//! produces a finite sequence of matrix polynomials orthogonal for the
//! weight `W(x) = w_x v(x) v(x)^T` with `v(x) = (p_0(x), .., p_{m-1}(x))`.

use crate::banded::BandedMatrix;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::orthopoly::{value_table, DiscreteMeasure, ScalarFamily};
use crate::poly::Polynomial;
use crate::scalar::Scalar;

/// Condition-number ceiling for block inversion on the float backend.
const MAX_BLOCK_CONDITION: f64 = 1e12;

/// `m x m` block partition of a block tridiagonal matrix.
///
/// `A_i` sit on the block superdiagonal (`i = 0..L-2`), `B_i` on the
/// diagonal (`i = 0..L-1`) and `C_i` on the subdiagonal (`i = 1..L-1`).
#[derive(Clone, Debug)]
pub struct BlockTridiagonal<S> {
    block_size: usize,
    a: Vec<Matrix<S>>,
    b: Vec<Matrix<S>>,
    c: Vec<Matrix<S>>, // c[i-1] stores C_i
}

impl<S: Scalar> BlockTridiagonal<S> {
    /// Partitions `matrix` into `block_size` blocks.
    ///
    /// Errors when the block size does not divide the matrix size or when
    /// the bandwidth exceeds the block size (the matrix would not be block
    /// tridiagonal).
    pub fn from_banded(matrix: &BandedMatrix<S>, block_size: usize) -> Result<Self> {
        let size = matrix.size();
        if block_size < 1 {
            return Err(Error::Domain("block size must be at least 1".into()));
        }
        if !size.is_multiple_of(block_size) {
            return Err(Error::Partition { block: block_size, size });
        }
        if matrix.bandwidth() > block_size {
            return Err(Error::NotBlockTridiagonal {
                bandwidth: matrix.bandwidth(),
                block: block_size,
            });
        }
        let rows = size / block_size;
        let dense = matrix.dense();
        let m = block_size;
        let mut a = Vec::with_capacity(rows.saturating_sub(1));
        let mut b = Vec::with_capacity(rows);
        let mut c = Vec::with_capacity(rows.saturating_sub(1));
        for i in 0..rows {
            b.push(dense.block(i * m, i * m, m, m));
            if i + 1 < rows {
                a.push(dense.block(i * m, (i + 1) * m, m, m));
                c.push(dense.block((i + 1) * m, i * m, m, m));
            }
        }
        Ok(BlockTridiagonal { block_size, a, b, c })
    }

    pub fn block_size(&self) -> usize {
        self.block_size
    }

    /// Number of block rows `L`.
    pub fn block_rows(&self) -> usize {
        self.b.len()
    }

    pub fn a(&self, i: usize) -> &Matrix<S> {
        &self.a[i]
    }

    pub fn b(&self, i: usize) -> &Matrix<S> {
        &self.b[i]
    }

    /// `C_i` for `i = 1..L-1`.
    pub fn c(&self, i: usize) -> &Matrix<S> {
        assert!(i >= 1, "C_0 does not exist");
        &self.c[i - 1]
    }

    /// Rebuilds the banded matrix from the blocks.
    pub fn assemble(&self) -> BandedMatrix<S> {
        let m = self.block_size;
        let rows = self.block_rows();
        let mut dense = Matrix::zeros(rows * m, rows * m);
        for i in 0..rows {
            dense.set_block(i * m, i * m, &self.b[i]);
            if i + 1 < rows {
                dense.set_block(i * m, (i + 1) * m, &self.a[i]);
                dense.set_block((i + 1) * m, i * m, &self.c[i]);
            }
        }
        BandedMatrix::from_dense(dense)
    }
}

/// Matrix-valued polynomial stored by coefficient blocks, degree-ascending.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixPolynomial<S> {
    block_size: usize,
    coeffs: Vec<Matrix<S>>,
}

impl<S: Scalar> MatrixPolynomial<S> {
    pub fn zero(block_size: usize) -> Self {
        MatrixPolynomial { block_size, coeffs: vec![Matrix::zeros(block_size, block_size)] }
    }

    pub fn identity(block_size: usize) -> Self {
        MatrixPolynomial { block_size, coeffs: vec![Matrix::identity(block_size)] }
    }

    pub fn from_coeffs(coeffs: Vec<Matrix<S>>) -> Self {
        assert!(!coeffs.is_empty());
        let block_size = coeffs[0].nrows();
        assert!(coeffs.iter().all(|c| c.nrows() == block_size && c.ncols() == block_size));
        MatrixPolynomial { block_size, coeffs }
    }

    pub fn block_size(&self) -> usize {
        self.block_size
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> Matrix<S> {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.block_size, self.block_size))
    }

    pub fn leading_coefficient(&self) -> &Matrix<S> {
        self.coeffs.last().expect("nonempty")
    }

    /// Horner evaluation at a scalar point.
    pub fn eval(&self, x: &S) -> Matrix<S> {
        let mut acc = self.coeffs.last().expect("nonempty").clone();
        for c in self.coeffs.iter().rev().skip(1) {
            acc = acc.scale(x).add(c);
        }
        acc
    }

    /// Multiplication by `x`.
    fn shift_up(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Matrix::zeros(self.block_size, self.block_size));
        coeffs.extend(self.coeffs.iter().cloned());
        MatrixPolynomial { block_size: self.block_size, coeffs }
    }

    /// Left multiplication of every coefficient by `g`.
    fn left_mul(&self, g: &Matrix<S>) -> Self {
        MatrixPolynomial {
            block_size: self.block_size,
            coeffs: self.coeffs.iter().map(|c| g.mul(c)).collect(),
        }
    }

    fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k).sub(&other.coeff(k))).collect();
        MatrixPolynomial { block_size: self.block_size, coeffs }
    }

    fn trim(mut self) -> Self {
        while self.coeffs.len() > 1 && self.coeffs.last().is_some_and(|c| c.max_abs().is_zero())
        {
            self.coeffs.pop();
        }
        self
    }
}

fn invert_block<S: Scalar>(block: &Matrix<S>, index: usize) -> Result<Matrix<S>> {
    let inv = block.inverse().map_err(|_| {
        if S::EXACT {
            Error::SingularMatrix
        } else {
            Error::IllConditioned { index, cond: f64::INFINITY }
        }
    })?;
    if !S::EXACT {
        let cond = block.norm_one() * inv.norm_one();
        if cond > MAX_BLOCK_CONDITION {
            return Err(Error::IllConditioned { index, cond });
        }
    }
    Ok(inv)
}

/// Generates `P_0 .. P_{L-1}` from the block three-term recurrence,
/// `P_{j+1} = A_j^{-1} ((x I - B_j) P_j - C_j P_{j-1})`.
pub fn mvop_sequence<S: Scalar>(blocks: &BlockTridiagonal<S>) -> Result<Vec<MatrixPolynomial<S>>> {
    let m = blocks.block_size();
    let rows = blocks.block_rows();
    let mut polys = Vec::with_capacity(rows);
    polys.push(MatrixPolynomial::identity(m));
    let mut prev = MatrixPolynomial::zero(m);
    for j in 0..rows.saturating_sub(1) {
        let a_inv = invert_block(blocks.a(j), j)?;
        let cur = polys.last().expect("nonempty").clone();
        let mut next = cur.shift_up().sub(&cur.left_mul(blocks.b(j)));
        if j >= 1 {
            next = next.sub(&prev.left_mul(blocks.c(j)));
        }
        polys.push(next.left_mul(&a_inv).trim());
        prev = cur;
    }
    Ok(polys)
}

/// Weight matrix at support point `x_index`:
/// `w_x v(x) v(x)^T` with `v(x) = (p_0(v_x), .., p_{m-1}(v_x))`.
/// Symmetric, positive semidefinite, rank one.
pub fn weight_matrix<S: Scalar>(
    fam: &ScalarFamily<S>,
    measure: &DiscreteMeasure<S>,
    x_index: usize,
    block_size: usize,
) -> Result<Matrix<S>> {
    if x_index >= measure.len() {
        return Err(Error::Domain(format!("support index {x_index} out of range")));
    }
    if block_size > fam.size() {
        return Err(Error::Domain(format!(
            "block size {block_size} exceeds family size {}",
            fam.size()
        )));
    }
    let point = &measure.points()[x_index];
    let v = fam.coeffs().eval_all_up_to(block_size - 1, point)?;
    let w = measure.weights()[x_index].clone();
    Ok(Matrix::from_fn(block_size, block_size, |i, j| {
        w.clone() * v[i].clone() * v[j].clone()
    }))
}

/// The matrix-valued inner product
/// `<P, Q> = sum_x P(theta(v_x)) W(x) Q(theta(v_x))^T`.
pub fn inner_product<S: Scalar>(
    p: &MatrixPolynomial<S>,
    q: &MatrixPolynomial<S>,
    theta: &Polynomial<S>,
    fam: &ScalarFamily<S>,
    measure: &DiscreteMeasure<S>,
) -> Result<Matrix<S>> {
    let m = p.block_size();
    if q.block_size() != m {
        return Err(Error::LengthMismatch { left: m, right: q.block_size() });
    }
    if m > fam.size() {
        return Err(Error::Domain(format!(
            "block size {m} exceeds family size {}",
            fam.size()
        )));
    }
    // W(x) = w_x v v^T is rank one, so the summand factors as
    // w_x (P(t) v)(Q(t) v)^T with intermediates the size of the result
    let mut acc = Matrix::<S>::zeros(m, m);
    for x in 0..measure.len() {
        let point = &measure.points()[x];
        let t = theta.eval(point);
        let v = fam.coeffs().eval_all_up_to(m - 1, point)?;
        let w = &measure.weights()[x];
        let pu = p.eval(&t).mul_vec(&v);
        let qu = q.eval(&t).mul_vec(&v);
        for r in 0..m {
            for c in 0..m {
                acc[(r, c)] =
                    acc[(r, c)].clone() + w.clone() * pu[r].clone() * qu[c].clone();
            }
        }
    }
    Ok(acc)
}

/// Block norm matrices `H_j = diag(h_{mj}, .., h_{mj+m-1})` assembled from
/// the scalar norms.
pub fn norm_blocks<S: Scalar>(norms: &[S], block_size: usize) -> Result<Vec<Matrix<S>>> {
    if block_size < 1 || !norms.len().is_multiple_of(block_size) {
        return Err(Error::Partition { block: block_size, size: norms.len() });
    }
    Ok(norms.chunks(block_size).map(Matrix::diagonal).collect())
}

/// Largest deviation, over all support points, in the link between the
/// matrix-valued and scalar families:
/// `P_j(theta(v_x)) (p_0(v_x),..,p_{m-1}(v_x))^T = (p_{mj}(v_x),..,p_{mj+m-1}(v_x))^T`.
pub fn scalar_link_deviation<S: Scalar>(
    j: usize,
    theta: &Polynomial<S>,
    fam: &ScalarFamily<S>,
    measure: &DiscreteMeasure<S>,
    polys: &[MatrixPolynomial<S>],
) -> Result<S> {
    if j >= polys.len() {
        return Err(Error::Domain(format!(
            "index {j} out of range for {} polynomials",
            polys.len()
        )));
    }
    let m = polys[j].block_size();
    let needed = m * (j + 1);
    if needed > fam.size() {
        return Err(Error::Domain(format!(
            "scalar family of size {} too small for block row {j}",
            fam.size()
        )));
    }
    let table = value_table(fam.coeffs(), measure)?;
    let mut worst = S::zero();
    for x in 0..measure.len() {
        let t = theta.eval(&measure.points()[x]);
        let v0: Vec<S> = (0..m).map(|r| table[(r, x)].clone()).collect();
        let lhs = polys[j].eval(&t).mul_vec(&v0);
        for r in 0..m {
            let dev = (lhs[r].clone() - table[(m * j + r, x)].clone()).abs();
            if dev > worst {
                worst = dev;
            }
        }
    }
    Ok(worst)
}

/// One basis element of the symmetry space, split into real and imaginary
/// parts (the defining relation conjugate-transposes `T`, so the two parts
/// satisfy different linear systems).
#[derive(Clone, Debug)]
pub struct CommutantElement<S> {
    pub real: Matrix<S>,
    pub imag: Matrix<S>,
}

/// Basis of the real vector space `{T : T W(x) = W(x) T^* for all x}`.
#[derive(Clone, Debug)]
pub struct CommutantReport<S> {
    pub basis: Vec<CommutantElement<S>>,
}

impl<S> CommutantReport<S> {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Dimension 1 means the weight is irreducible: the only symmetries are
    /// real multiples of the identity.
    pub fn is_irreducible(&self) -> bool {
        self.basis.len() == 1
    }
}

/// Solves the symmetry equations for explicitly given weight matrices.
pub fn commutant_of_weights<S: Scalar>(weights: &[Matrix<S>]) -> CommutantReport<S> {
    assert!(!weights.is_empty());
    let m = weights[0].nrows();
    let unknowns = m * m;
    let total = weights.len() * m * m;

    // T = X + iY: the real part solves X W = W X^T, the imaginary part
    // solves Y W = -W Y^T, independently
    let mut sys_x = Matrix::<S>::zeros(total, unknowns);
    let mut sys_y = Matrix::<S>::zeros(total, unknowns);
    let mut row = 0;
    for w in weights {
        assert_eq!(w.nrows(), m);
        for r in 0..m {
            for c in 0..m {
                for b in 0..m {
                    // coefficient of t_{r b} from (T W)[r,c]
                    sys_x[(row, r * m + b)] = sys_x[(row, r * m + b)].clone() + w[(b, c)].clone();
                    sys_y[(row, r * m + b)] = sys_y[(row, r * m + b)].clone() + w[(b, c)].clone();
                    // coefficient of t_{c b} from (W T^T)[r,c]
                    sys_x[(row, c * m + b)] = sys_x[(row, c * m + b)].clone() - w[(r, b)].clone();
                    sys_y[(row, c * m + b)] = sys_y[(row, c * m + b)].clone() + w[(r, b)].clone();
                }
                row += 1;
            }
        }
    }

    let pivot_tol = if S::EXACT {
        0.0
    } else {
        let scale = sys_x.max_abs().to_f64().max(sys_y.max_abs().to_f64()).max(1.0);
        1e-10 * scale
    };
    let mut basis = Vec::new();
    for v in sys_x.null_space(pivot_tol) {
        basis.push(CommutantElement {
            real: Matrix::from_fn(m, m, |i, j| v[i * m + j].clone()),
            imag: Matrix::zeros(m, m),
        });
    }
    for v in sys_y.null_space(pivot_tol) {
        basis.push(CommutantElement {
            real: Matrix::zeros(m, m),
            imag: Matrix::from_fn(m, m, |i, j| v[i * m + j].clone()),
        });
    }
    CommutantReport { basis }
}

/// Basis of the symmetry space of the rank-one weight family built from the
/// first `block_size` scalar polynomials.
pub fn commutant_basis<S: Scalar>(
    fam: &ScalarFamily<S>,
    measure: &DiscreteMeasure<S>,
    block_size: usize,
) -> Result<CommutantReport<S>> {
    let weights: Result<Vec<Matrix<S>>> = (0..measure.len())
        .map(|x| weight_matrix(fam, measure, x, block_size))
        .collect();
    Ok(commutant_of_weights(&weights?))
}

/// Verdict of the norm-ratio criterion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormRatioVerdict {
    /// No ratio `h_{mn+i}/h_{mn+j}` is constant in `n`, so every `T` with
    /// `T H_n = H_n T^*` is real diagonal.
    Diagonal,
    /// Some ratio is constant over the available rows; the criterion cannot
    /// conclude anything.
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct RatioPair {
    pub i: usize,
    pub j: usize,
    pub constant: bool,
}

#[derive(Clone, Debug)]
pub struct NormRatioReport {
    pub pairs: Vec<RatioPair>,
    pub verdict: NormRatioVerdict,
}

/// Tests, for each pair `i != j` inside a block row, whether the norm ratio
/// `h_{mn+i}/h_{mn+j}` is constant in `n`. Exact cross-multiplication on the
/// rational backend, relative tolerance `1e-9` on floats.
pub fn norm_ratio_test<S: Scalar>(norms: &[S], block_size: usize) -> Result<NormRatioReport> {
    let rows = norms.len() / block_size;
    if rows < 2 {
        return Err(Error::InsufficientData {
            context: "norm-ratio criterion",
            needed: 2 * block_size,
            got: norms.len(),
        });
    }
    let h = |n: usize, i: usize| norms[n * block_size + i].clone();
    let mut pairs = Vec::new();
    for i in 0..block_size {
        for j in 0..block_size {
            if i == j {
                continue;
            }
            // h(n,i)/h(n,j) == h(0,i)/h(0,j) for all n, cross-multiplied
            let constant = (1..rows).all(|n| {
                let lhs = h(n, i) * h(0, j);
                let rhs = h(0, i) * h(n, j);
                let tol = 1e-9 * rhs.abs_f64().max(1e-300);
                lhs.approx_eq(&rhs, tol)
            });
            pairs.push(RatioPair { i, j, constant });
        }
    }
    let verdict = if pairs.iter().all(|p| !p.constant) {
        NormRatioVerdict::Diagonal
    } else {
        NormRatioVerdict::Inconclusive
    };
    Ok(NormRatioReport { pairs, verdict })
}
