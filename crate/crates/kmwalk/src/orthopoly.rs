//! Scalar orthogonal polynomials on finite discrete measures.
//!
//! The built-in family is the symmetric Krawtchouk family, orthogonal for
//! the binomial weight `C(N,x) 2^-N`; everything else is driven by
//! user-supplied three-term recurrence data.
//!
//! Norms are always taken against the *probability-normalised* measure, so
//! `h_0 = 1` and, for the urn family, `h_n = 1/C(N,n)`. The stored norms are
//! the single source of truth for the block norm matrices downstream.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::poly::Polynomial;
use crate::scalar::{binomial, Scalar};

/// Evaluates the symmetric (p = 1/2) Krawtchouk polynomial `K_j(x)` for
/// parameter `n`, by the forward three-term recurrence
///
/// ```text
/// (n - j) K_{j+1}(x) = (n - 2x) K_j(x) - j K_{j-1}(x),   K_0 = 1, K_{-1} = 0.
/// ```
///
/// The final term carries `K_{j-1}`; together with the orthogonality and
/// eigenvector checks in the test suite this pins the recurrence down
/// unambiguously.
///
/// ```
/// use kmwalk::orthopoly::krawtchouk;
/// // K_1(x) = 1 - 2x/n
/// assert_eq!(krawtchouk(1, &1.0f64, 4).unwrap(), 0.5);
/// // K_j(0) = 1 for every degree
/// assert_eq!(krawtchouk(3, &0.0f64, 5).unwrap(), 1.0);
/// ```
pub fn krawtchouk<S: Scalar>(j: usize, x: &S, n: usize) -> Result<S> {
    if j > n {
        return Err(Error::Domain(format!("krawtchouk degree {j} exceeds parameter {n}")));
    }
    let mut prev = S::zero(); // K_{-1}
    let mut cur = S::one(); // K_0
    for d in 0..j {
        let next = ((S::from_int(n as i64) - S::from_int(2) * x.clone()) * cur.clone()
            - S::from_int(d as i64) * prev.clone())
            / S::from_int((n - d) as i64);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Three-term recurrence data `x p_n = a_n p_{n+1} + b_n p_n + c_n p_{n-1}`
/// for a finite family `p_0 .. p_{size-1}`.
///
/// All three coefficient vectors have length `size`, with the boundary
/// conventions `c_0 = 0` and `a_{size-1} = 0`.
#[derive(Clone, Debug)]
pub struct JacobiCoefficients<S> {
    a: Vec<S>,
    b: Vec<S>,
    c: Vec<S>,
}

impl<S: Scalar> JacobiCoefficients<S> {
    pub fn new(a: Vec<S>, b: Vec<S>, c: Vec<S>) -> Result<Self> {
        let size = b.len();
        if size == 0 {
            return Err(Error::Domain("empty recurrence".into()));
        }
        if a.len() != size || c.len() != size {
            return Err(Error::LengthMismatch { left: a.len().max(c.len()), right: size });
        }
        for (n, v) in a.iter().enumerate().take(size - 1) {
            if !v.is_positive() {
                return Err(Error::Domain(format!("a_{n} must be positive")));
            }
        }
        for (n, v) in c.iter().enumerate().skip(1) {
            if !v.is_positive() {
                return Err(Error::Domain(format!("c_{n} must be positive")));
            }
        }
        if !a[size - 1].is_zero() || !c[0].is_zero() {
            return Err(Error::Domain("boundary convention: a_{size-1} = c_0 = 0".into()));
        }
        Ok(JacobiCoefficients { a, b, c })
    }

    /// Recurrence of the single-ball urn chain on `0..=n`:
    /// `a_i = (n-i)/n`, `b_i = 0`, `c_i = i/n`.
    pub fn ehrenfest(n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::Domain(format!("need at least one ball, got {n}")));
        }
        let nn = S::from_int(n as i64);
        let a = (0..=n).map(|i| S::from_int((n - i) as i64) / nn.clone()).collect();
        let b = vec![S::zero(); n + 1];
        let c = (0..=n).map(|i| S::from_int(i as i64) / nn.clone()).collect();
        Self::new(a, b, c)
    }

    pub fn size(&self) -> usize {
        self.b.len()
    }

    pub fn a(&self) -> &[S] {
        &self.a
    }

    pub fn b(&self) -> &[S] {
        &self.b
    }

    pub fn c(&self) -> &[S] {
        &self.c
    }

    /// Row sums `a_n + b_n + c_n = 1` within `tol` (exact on rationals).
    pub fn is_stochastic_within(&self, tol: f64) -> bool {
        (0..self.size()).all(|n| {
            let sum = self.a[n].clone() + self.b[n].clone() + self.c[n].clone();
            sum.approx_eq(&S::one(), tol)
        })
    }

    /// `p_n(x)` by solving the recurrence forward from `p_0 = 1`.
    pub fn eval_poly(&self, n: usize, x: &S) -> Result<S> {
        let vals = self.eval_all_up_to(n, x)?;
        Ok(vals.into_iter().last().unwrap())
    }

    /// `(p_0(x), .., p_n(x))` in one forward pass.
    pub fn eval_all_up_to(&self, n: usize, x: &S) -> Result<Vec<S>> {
        if n >= self.size() {
            return Err(Error::Domain(format!(
                "degree {n} out of range for family of size {}",
                self.size()
            )));
        }
        let mut vals = Vec::with_capacity(n + 1);
        vals.push(S::one());
        let mut prev = S::zero();
        let mut cur = S::one();
        for d in 0..n {
            if self.a[d].is_zero() {
                return Err(Error::SingularRecurrence { index: d, degree: n });
            }
            let next = ((x.clone() - self.b[d].clone()) * cur.clone()
                - self.c[d].clone() * prev.clone())
                / self.a[d].clone();
            prev = cur;
            cur = next.clone();
            vals.push(next);
        }
        Ok(vals)
    }

    /// Monomial coefficients of `p_n`, by running the recurrence on
    /// polynomials instead of values.
    pub fn poly_coeffs(&self, n: usize) -> Result<Polynomial<S>> {
        if n >= self.size() {
            return Err(Error::Domain(format!(
                "degree {n} out of range for family of size {}",
                self.size()
            )));
        }
        let mut prev = Polynomial::zero();
        let mut cur = Polynomial::constant(S::one());
        for d in 0..n {
            if self.a[d].is_zero() {
                return Err(Error::SingularRecurrence { index: d, degree: n });
            }
            let inv_a = S::one() / self.a[d].clone();
            let next = cur
                .shift_up()
                .sub(&cur.scale(&self.b[d]))
                .sub(&prev.scale(&self.c[d]))
                .scale(&inv_a);
            prev = cur;
            cur = next;
        }
        Ok(cur)
    }
}

/// Finitely supported probability measure: support points and weights.
#[derive(Clone, Debug)]
pub struct DiscreteMeasure<S> {
    points: Vec<S>,
    weights: Vec<S>,
}

impl<S: Scalar> DiscreteMeasure<S> {
    pub fn new(points: Vec<S>, weights: Vec<S>) -> Result<Self> {
        if points.len() != weights.len() {
            return Err(Error::LengthMismatch { left: points.len(), right: weights.len() });
        }
        if points.is_empty() {
            return Err(Error::Domain("empty measure".into()));
        }
        for w in &weights {
            if !w.nonneg_within(1e-12) {
                return Err(Error::Domain("negative weight".into()));
            }
        }
        let mut total = S::zero();
        for w in &weights {
            total = total + w.clone();
        }
        if !total.approx_eq(&S::one(), 1e-10) {
            return Err(Error::Domain(format!("weights sum to {total}, expected 1")));
        }
        for i in 0..points.len() {
            for j in (i + 1)..points.len() {
                if points[i] == points[j] {
                    return Err(Error::Domain("support points must be pairwise distinct".into()));
                }
            }
        }
        Ok(DiscreteMeasure { points, weights })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[S] {
        &self.points
    }

    pub fn weights(&self) -> &[S] {
        &self.weights
    }
}

/// Binomial measure of the single-ball urn chain: points
/// `1 - 2x/n` for `x = 0..=n` with weights `C(n,x) 2^-n`.
pub fn ehrenfest_measure<S: Scalar>(n: usize) -> Result<DiscreteMeasure<S>> {
    if n < 1 {
        return Err(Error::Domain(format!("need at least one ball, got {n}")));
    }
    let points = (0..=n)
        .map(|x| S::one() - S::from_int(2) * S::from_int(x as i64) / S::from_int(n as i64))
        .collect();
    let half_pow = {
        let mut p = S::one();
        for _ in 0..n {
            p = p / S::from_int(2);
        }
        p
    };
    let weights = (0..=n).map(|x| binomial::<S>(n, x) * half_pow.clone()).collect();
    DiscreteMeasure::new(points, weights)
}

/// A recurrence family together with its norms under a fixed measure.
#[derive(Clone, Debug)]
pub struct ScalarFamily<S> {
    coeffs: JacobiCoefficients<S>,
    norms: Vec<S>,
}

impl<S: Scalar> ScalarFamily<S> {
    /// Computes `h_n = sum_x p_n(v_x)^2 w_x` for every degree and rejects
    /// nonpositive values (the measure would not be positive definite for
    /// the family).
    pub fn from_measure(coeffs: JacobiCoefficients<S>, measure: &DiscreteMeasure<S>) -> Result<Self> {
        if coeffs.size() > measure.len() {
            return Err(Error::Domain(format!(
                "family of size {} cannot be orthogonal on {} points",
                coeffs.size(),
                measure.len()
            )));
        }
        let table = value_table(&coeffs, measure)?;
        let mut norms = Vec::with_capacity(coeffs.size());
        for n in 0..coeffs.size() {
            let mut h = S::zero();
            for (x, w) in measure.weights().iter().enumerate() {
                h = h + table[(n, x)].clone() * table[(n, x)].clone() * w.clone();
            }
            if !h.is_positive() {
                return Err(Error::Domain(format!("norm h_{n} is not positive")));
            }
            norms.push(h);
        }
        Ok(ScalarFamily { coeffs, norms })
    }

    pub fn coeffs(&self) -> &JacobiCoefficients<S> {
        &self.coeffs
    }

    pub fn size(&self) -> usize {
        self.coeffs.size()
    }

    pub fn norms(&self) -> &[S] {
        &self.norms
    }
}

/// Values `p_n(v_x)` for all degrees (rows) and support points (columns).
pub fn value_table<S: Scalar>(
    coeffs: &JacobiCoefficients<S>,
    measure: &DiscreteMeasure<S>,
) -> Result<Matrix<S>> {
    let size = coeffs.size();
    let mut table = Matrix::zeros(size, measure.len());
    for (x, point) in measure.points().iter().enumerate() {
        let vals = coeffs.eval_all_up_to(size - 1, point)?;
        for (n, v) in vals.into_iter().enumerate() {
            table[(n, x)] = v;
        }
    }
    Ok(table)
}

/// Result of a full Gram-matrix orthogonality check.
#[derive(Clone, Debug)]
pub struct GramReport<S> {
    /// Diagonal entries `h_n`.
    pub norms: Vec<S>,
    /// Largest `|G_nm|` over `n != m`; zero for a size-1 family.
    pub max_offdiag: S,
    /// Whether the off-diagonal deviation is within the requested tolerance.
    pub orthogonal_within_tol: bool,
}

/// Computes the Gram matrix `G_nm = sum_x p_n(v_x) p_m(v_x) w_x` and reports
/// the largest off-diagonal entry together with the diagonal norms.
pub fn gram_check<S: Scalar>(
    fam: &ScalarFamily<S>,
    measure: &DiscreteMeasure<S>,
    tol: f64,
) -> Result<GramReport<S>> {
    let size = fam.size();
    let table = value_table(fam.coeffs(), measure)?;
    let mut norms = Vec::with_capacity(size);
    let mut max_offdiag = S::zero();
    for n in 0..size {
        for m in n..size {
            let mut g = S::zero();
            for (x, w) in measure.weights().iter().enumerate() {
                g = g + table[(n, x)].clone() * table[(m, x)].clone() * w.clone();
            }
            if n == m {
                norms.push(g);
            } else if g.abs() > max_offdiag {
                max_offdiag = g.abs();
            }
        }
    }
    let orthogonal_within_tol = max_offdiag.abs_f64() <= tol;
    Ok(GramReport { norms, max_offdiag, orthogonal_within_tol })
}
