use super::identities::k_ball_matrix;
use super::{gate_stochastic, Model};
use crate::banded::BandedMatrix;
use crate::error::{Error, Result};
use crate::orthopoly::{krawtchouk, JacobiCoefficients};
use crate::poly::Polynomial;
use crate::scalar::Scalar;

/// `k`-ball urn chain: exactly `k` distinct balls, chosen uniformly, change
/// urn per step. From state `i` the walk reaches `i - k + 2l` with the
/// hypergeometric probability `C(i, k-l) C(N-i, l) / C(N, k)`, so every
/// reachable state has the parity of `i + k`.
pub struct KBall<S> {
    balls: usize,
    k: usize,
    matrix: BandedMatrix<S>,
}

impl<S: Scalar> std::fmt::Debug for KBall<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", format_args!("KBall(N={}, k={})", self.balls, self.k))
    }
}

impl<S: Scalar> KBall<S> {
    pub fn new(balls: usize, k: usize) -> Result<Self> {
        if balls < 1 {
            return Err(Error::Domain(format!("need at least one ball, got {balls}")));
        }
        if k < 1 || k > balls {
            return Err(Error::Domain(format!(
                "batch size k={k} out of range 1..={balls}"
            )));
        }
        let matrix = k_ball_matrix(balls, k);
        gate_stochastic(&matrix, "k-ball urn chain")?;
        Ok(KBall { balls, k, matrix })
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

impl<S: Scalar> Model<S> for KBall<S> {
    fn name(&self) -> &'static str {
        "k-ball"
    }

    fn ball_count(&self) -> usize {
        self.balls
    }

    fn describe(&self) -> String {
        format!("k-ball(N={}, k={})", self.balls, self.k)
    }

    fn theta(&self) -> Polynomial<S> {
        // the k-th recurrence polynomial of the single-ball chain expands
        // the Krawtchouk polynomial in the spectral variable
        JacobiCoefficients::<S>::ehrenfest(self.balls)
            .and_then(|c| c.poly_coeffs(self.k))
            .expect("validated parameters")
    }

    fn transition_matrix(&self) -> &BandedMatrix<S> {
        &self.matrix
    }

    fn eigenvalue(&self, j: usize) -> S {
        krawtchouk(self.k, &S::from_int(j as i64), self.balls).expect("validated parameters")
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
    fn two_ball_row_hand_checked() {
        let model = KBall::<Rational>::new(4, 2).unwrap();
        let m = model.transition_matrix();
        let row2: Vec<Rational> = (0..5).map(|j| m.entry(2, j).clone()).collect();
        assert_eq!(row2, vec![r(1, 6), r(0, 1), r(2, 3), r(0, 1), r(1, 6)]);
    }

    #[test]
    fn one_ball_batch_is_the_classical_chain() {
        let kball = KBall::<Rational>::new(6, 1).unwrap();
        let classical = super::super::Classical::<Rational>::new(6).unwrap();
        assert!(kball
            .transition_matrix()
            .max_abs_diff(classical.transition_matrix())
            .is_zero());
        assert_eq!(kball.theta().coeffs(), &[r(0, 1), r(1, 1)]);
    }

    #[test]
    fn full_batch_is_the_reversal_permutation() {
        let model = KBall::<Rational>::new(5, 5).unwrap();
        let m = model.transition_matrix();
        for i in 0..=5usize {
            for j in 0..=5usize {
                let expected = if j == 5 - i { r(1, 1) } else { r(0, 1) };
                assert_eq!(m.entry(i, j), &expected);
            }
        }
    }

    #[test]
    fn rows_sum_to_one_exactly() {
        for n in 1..=8usize {
            for k in 1..=n {
                let model = KBall::<Rational>::new(n, k).unwrap();
                for s in model.transition_matrix().row_sums() {
                    assert_eq!(s, r(1, 1), "n={n} k={k}");
                }
            }
        }
    }

    #[test]
    fn quadratic_batch_map_polynomial() {
        // k=2: theta(x) = (N x^2 - 1)/(N - 1)
        for n in [3usize, 5, 8] {
            let model = KBall::<Rational>::new(n, 2).unwrap();
            let theta = model.theta();
            let nm1 = n as i64 - 1;
            assert_eq!(theta.coeffs(), &[r(-1, nm1), r(0, 1), r(n as i64, nm1)]);
        }
    }

    #[test]
    fn bandwidth_is_k() {
        let model = KBall::<Rational>::new(9, 3).unwrap();
        assert_eq!(model.transition_matrix().bandwidth(), 3);
        assert!(model.transition_matrix().verify_band());
    }

    #[test]
    fn parameter_validation() {
        assert!(KBall::<f64>::new(4, 0).is_err());
        assert!(KBall::<f64>::new(4, 5).is_err());
        assert!(KBall::<f64>::new(0, 1).is_err());
    }
}
