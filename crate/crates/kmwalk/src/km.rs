//! Karlin-McGregor spectral representation of n-step probabilities.
//!
//! For a walk with transition matrix `theta(J)`, orthogonality measure
//! `mu = {(v_x, w_x)}` and polynomial family `p_i`,
//!
//! ```text
//! (theta(J)^n)[i][j] = (1/h_j) sum_x theta(v_x)^n p_i(v_x) p_j(v_x) w_x ,
//! ```
//!
//! and blockwise, with the matrix-valued polynomials `P_I` and norm blocks
//! `H_J`,
//!
//! ```text
//! [theta(J)^n][I][J] = (sum_x theta(v_x)^n P_I(..) W(x) P_J(..)^T) H_J^{-1} .
//! ```
//!
//! Powers of `theta(v_x)` are taken by repeated multiplication per support
//! point; no eigensolver enters this path, so it can serve as an oracle for
//! one and vice versa.

use crate::banded::BandedMatrix;
use crate::blocks::{mvop_sequence, norm_blocks, BlockTridiagonal, MatrixPolynomial};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::models::Model;
use crate::orthopoly::{
    ehrenfest_measure, value_table, DiscreteMeasure, JacobiCoefficients, ScalarFamily,
};
use crate::poly::Polynomial;
use crate::scalar::Scalar;

/// Everything the spectral formulas need, precomputed from a model: the
/// measure, the scalar family with its norms, the value table `p_i(v_x)`,
/// and (when the block size divides the state count) the block partition
/// with its matrix polynomials.
pub struct KmContext<S: Scalar> {
    balls: usize,
    matrix: BandedMatrix<S>,
    theta: Polynomial<S>,
    measure: DiscreteMeasure<S>,
    fam: ScalarFamily<S>,
    table: Matrix<S>,
    theta_values: Vec<S>,
    block: Option<BlockData<S>>,
}

struct BlockData<S> {
    block_size: usize,
    polys: Vec<MatrixPolynomial<S>>,
    /// `actions[j][x] = P_j(theta(v_x)) v(x)` with `v = (p_0 .. p_{m-1})`.
    actions: Vec<Vec<Vec<S>>>,
    norm_inverses: Vec<Matrix<S>>,
}

impl<S: Scalar> KmContext<S> {
    /// Builds the context for a model. Block data is available when the
    /// map polynomial's degree is at least 1 and divides the state count.
    pub fn new(model: &dyn Model<S>) -> Result<Self> {
        let balls = model.ball_count();
        let measure = ehrenfest_measure::<S>(balls)?;
        let fam = ScalarFamily::from_measure(JacobiCoefficients::ehrenfest(balls)?, &measure)?;
        let table = value_table(fam.coeffs(), &measure)?;
        let theta = model.theta();
        let theta_values: Vec<S> = measure.points().iter().map(|p| theta.eval(p)).collect();
        let matrix = model.transition_matrix().clone();

        let m = theta.degree();
        let block = if m >= 1 && (balls + 1) % m == 0 {
            let blocks = BlockTridiagonal::from_banded(&matrix, m)?;
            let polys = mvop_sequence(&blocks)?;
            let mut actions: Vec<Vec<Vec<S>>> = vec![Vec::new(); polys.len()];
            for x in 0..measure.len() {
                let v: Vec<S> = (0..m).map(|r| table[(r, x)].clone()).collect();
                for (j, poly) in polys.iter().enumerate() {
                    actions[j].push(poly.eval(&theta_values[x]).mul_vec(&v));
                }
            }
            let norm_inverses = norm_blocks(fam.norms(), m)?
                .iter()
                .map(|h| h.inverse())
                .collect::<Result<Vec<_>>>()?;
            Some(BlockData { block_size: m, polys, actions, norm_inverses })
        } else {
            None
        };

        Ok(KmContext { balls, matrix, theta, measure, fam, table, theta_values, block })
    }

    pub fn ball_count(&self) -> usize {
        self.balls
    }

    pub fn states(&self) -> usize {
        self.balls + 1
    }

    pub fn theta(&self) -> &Polynomial<S> {
        &self.theta
    }

    pub fn family(&self) -> &ScalarFamily<S> {
        &self.fam
    }

    pub fn measure(&self) -> &DiscreteMeasure<S> {
        &self.measure
    }

    pub fn transition_matrix(&self) -> &BandedMatrix<S> {
        &self.matrix
    }

    /// Block size of the block representation, when available.
    pub fn block_size(&self) -> Option<usize> {
        self.block.as_ref().map(|b| b.block_size)
    }

    pub fn matrix_polynomials(&self) -> Option<&[MatrixPolynomial<S>]> {
        self.block.as_ref().map(|b| b.polys.as_slice())
    }

    /// `(theta(J)^n)[i][j]` from the spectral sum. Raw entry: float
    /// cancellation noise is not clamped here.
    pub fn scalar_entry(&self, n: usize, i: usize, j: usize) -> Result<S> {
        let states = self.states();
        if i >= states || j >= states {
            return Err(Error::Domain(format!("state ({i},{j}) out of range")));
        }
        let mut acc = S::zero();
        for x in 0..self.measure.len() {
            let mut tp = S::one();
            for _ in 0..n {
                tp = tp * self.theta_values[x].clone();
            }
            acc = acc
                + tp
                    * self.table[(i, x)].clone()
                    * self.table[(j, x)].clone()
                    * self.measure.weights()[x].clone();
        }
        Ok(acc / self.fam.norms()[j].clone())
    }

    /// The whole `theta(J)^n` assembled from scalar entries.
    pub fn scalar_matrix(&self, n: usize) -> Result<Matrix<S>> {
        let states = self.states();
        let mut out = Matrix::<S>::zeros(states, states);
        for x in 0..self.measure.len() {
            let mut tp = S::one();
            for _ in 0..n {
                tp = tp * self.theta_values[x].clone();
            }
            for i in 0..states {
                let left = tp.clone() * self.table[(i, x)].clone();
                if left.is_zero() {
                    continue;
                }
                for j in 0..states {
                    out[(i, j)] = out[(i, j)].clone()
                        + left.clone()
                            * self.table[(j, x)].clone()
                            * self.measure.weights()[x].clone();
                }
            }
        }
        for j in 0..states {
            let inv = S::one() / self.fam.norms()[j].clone();
            for i in 0..states {
                out[(i, j)] = out[(i, j)].clone() * inv.clone();
            }
        }
        Ok(out)
    }

    /// The `(I,J)` block of `theta(J)^n` from the block spectral sum.
    pub fn block_entry(&self, n: usize, block_i: usize, block_j: usize) -> Result<Matrix<S>> {
        let data = self
            .block
            .as_ref()
            .ok_or(Error::MissingBlockData("block size does not divide the state count"))?;
        let rows = data.polys.len();
        if block_i >= rows || block_j >= rows {
            return Err(Error::Domain(format!("block ({block_i},{block_j}) out of range")));
        }
        let m = data.block_size;
        let mut acc = Matrix::<S>::zeros(m, m);
        for x in 0..self.measure.len() {
            let mut tp = S::one();
            for _ in 0..n {
                tp = tp * self.theta_values[x].clone();
            }
            let w = tp * self.measure.weights()[x].clone();
            let ui = &data.actions[block_i][x];
            let uj = &data.actions[block_j][x];
            for r in 0..m {
                for c in 0..m {
                    acc[(r, c)] = acc[(r, c)].clone() + w.clone() * ui[r].clone() * uj[c].clone();
                }
            }
        }
        Ok(acc.mul(&data.norm_inverses[block_j]))
    }

    /// Row `start` of `theta(J)^n` as a probability vector.
    ///
    /// On the float backend, cancellation residue down to `-1e-12` is
    /// clamped to zero; anything more negative, or a row sum off by more
    /// than `1e-10`, is an error.
    pub fn n_step_distribution(&self, start: usize, n: usize) -> Result<Vec<S>> {
        let states = self.states();
        if start >= states {
            return Err(Error::Domain(format!("start state {start} out of range")));
        }
        let mut row = Vec::with_capacity(states);
        for j in 0..states {
            let e = self.scalar_entry(n, start, j)?;
            if !e.nonneg_within(1e-12) {
                return Err(Error::Domain(format!(
                    "entry {j} of the {n}-step row is negative: {e}"
                )));
            }
            row.push(if e.nonneg_within(0.0) { e } else { S::zero() });
        }
        let mut sum = S::zero();
        for e in &row {
            sum = sum + e.clone();
        }
        if !sum.approx_eq(&S::one(), 1e-10) {
            return Err(Error::Domain(format!("{n}-step row sums to {sum}")));
        }
        Ok(row)
    }
}

/// Total-variation distance `(1/2) sum |p_i - q_i|`.
pub fn tv_distance<S: Scalar>(p: &[S], q: &[S]) -> Result<S> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch { left: p.len(), right: q.len() });
    }
    let mut acc = S::zero();
    for (a, b) in p.iter().zip(q) {
        acc = acc + (a.clone() - b.clone()).abs();
    }
    Ok(acc / S::from_int(2))
}
