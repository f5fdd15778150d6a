use super::identities::k_ball_matrix;
use super::{gate_stochastic, Model};
use crate::banded::BandedMatrix;
use crate::error::{Error, Result};
use crate::orthopoly::{krawtchouk, JacobiCoefficients};
use crate::poly::Polynomial;
use crate::scalar::Scalar;

/// Mixture of k-ball moves: at each step a batch size `k_i` is drawn with
/// probability `q_i` and the corresponding k-ball move is performed. The
/// transition matrix is the convex combination of the batch matrices.
pub struct MultiBall<S> {
    balls: usize,
    /// `(weight, batch size)` pairs, deduplicated and sorted by batch size.
    parts: Vec<(S, usize)>,
    matrix: BandedMatrix<S>,
}

impl<S: Scalar> std::fmt::Debug for MultiBall<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.describe())
    }
}

impl<S: Scalar> MultiBall<S> {
    /// Builds the mixture from `(weight, batch size)` pairs. Weights must be
    /// nonnegative and sum to 1; duplicate batch sizes are merged by adding
    /// their weights.
    pub fn new(balls: usize, parts: Vec<(S, usize)>) -> Result<Self> {
        if balls < 1 {
            return Err(Error::Domain(format!("need at least one ball, got {balls}")));
        }
        if parts.is_empty() {
            return Err(Error::Domain("mixture needs at least one component".into()));
        }
        let mut merged: Vec<(S, usize)> = Vec::new();
        let mut total = S::zero();
        for (q, k) in parts {
            if !q.nonneg_within(0.0) {
                return Err(Error::Domain(format!("mixture weight {q} is negative")));
            }
            if k < 1 || k > balls {
                return Err(Error::Domain(format!(
                    "batch size k={k} out of range 1..={balls}"
                )));
            }
            total = total + q.clone();
            match merged.iter_mut().find(|(_, kk)| *kk == k) {
                Some((w, _)) => *w = w.clone() + q,
                None => merged.push((q, k)),
            }
        }
        if !total.approx_eq(&S::one(), 1e-10) {
            return Err(Error::Domain(format!("mixture weights sum to {total}, expected 1")));
        }
        merged.sort_by_key(|(_, k)| *k);

        let mut acc = BandedMatrix::zeros(balls + 1);
        for (q, k) in &merged {
            acc = acc.add(&k_ball_matrix::<S>(balls, *k).scale(q));
        }
        gate_stochastic(&acc, "multi-ball mixture")?;
        Ok(MultiBall { balls, parts: merged, matrix: acc })
    }

    pub fn parts(&self) -> &[(S, usize)] {
        &self.parts
    }
}

impl<S: Scalar> Model<S> for MultiBall<S> {
    fn name(&self) -> &'static str {
        "multi-ball"
    }

    fn ball_count(&self) -> usize {
        self.balls
    }

    fn describe(&self) -> String {
        let parts: Vec<String> =
            self.parts.iter().map(|(q, k)| format!("{q}*J_{k}")).collect();
        format!("multi-ball(N={}, {})", self.balls, parts.join(" + "))
    }

    fn theta(&self) -> Polynomial<S> {
        let coeffs = JacobiCoefficients::<S>::ehrenfest(self.balls).expect("validated");
        let mut theta = Polynomial::zero();
        for (q, k) in &self.parts {
            theta = theta.add(&coeffs.poly_coeffs(*k).expect("validated").scale(q));
        }
        theta
    }

    fn transition_matrix(&self) -> &BandedMatrix<S> {
        &self.matrix
    }

    fn eigenvalue(&self, j: usize) -> S {
        let mut acc = S::zero();
        for (q, k) in &self.parts {
            acc = acc
                + q.clone()
                    * krawtchouk(*k, &S::from_int(j as i64), self.balls).expect("validated");
        }
        acc
    }
}
