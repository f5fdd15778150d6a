use super::{gate_stochastic, Model};
use crate::banded::BandedMatrix;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::poly::Polynomial;
use crate::scalar::Scalar;

/// Quadratic deformation of the urn chain: with probability `q` two
/// uniformly chosen labels flip, with probability `1-q` one does.
///
/// The transition matrix is five-diagonal,
///
/// ```text
/// M[i][i-2] = q i(i-1) / (N(N-1))          M[i][i-1] = (1-q) i / N
/// M[i][i]   = 2q i(N-i) / (N(N-1))
/// M[i][i+1] = (1-q)(N-i) / N               M[i][i+2] = q (N-i)(N-i-1) / (N(N-1))
/// ```
///
/// and equals `theta(M0)` for the quadratic
/// `theta(x) = qN/(N-1) x^2 + (1-q) x - q/(N-1)`.
pub struct QDeformed<S> {
    balls: usize,
    q: S,
    matrix: BandedMatrix<S>,
}

impl<S: Scalar> std::fmt::Debug for QDeformed<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", format_args!("QDeformed(N={}, q={})", self.balls, self.q))
    }
}

impl<S: Scalar> QDeformed<S> {
    pub fn new(balls: usize, q: S) -> Result<Self> {
        if balls < 2 {
            return Err(Error::Domain(format!(
                "q-deformed model needs at least 2 balls, got {balls}"
            )));
        }
        if !q.nonneg_within(0.0) || q > S::one() {
            return Err(Error::Domain(format!("q must lie in [0,1], got {q}")));
        }
        let matrix = Self::build_matrix(balls, &q);
        gate_stochastic(&matrix, "q-deformed urn chain")?;
        Ok(QDeformed { balls, q, matrix })
    }

    pub fn q(&self) -> &S {
        &self.q
    }

    fn build_matrix(n: usize, q: &S) -> BandedMatrix<S> {
        let size = n + 1;
        let nn = S::from_int(n as i64);
        let pair = nn.clone() * S::from_int((n - 1) as i64); // N(N-1)
        let one_minus_q = S::one() - q.clone();
        let mut m = Matrix::zeros(size, size);
        for i in 0..size {
            let fi = S::from_int(i as i64);
            let rem = S::from_int((n - i) as i64);
            if i >= 2 {
                m[(i, i - 2)] =
                    q.clone() * fi.clone() * S::from_int(i as i64 - 1) / pair.clone();
            }
            if i >= 1 {
                m[(i, i - 1)] = one_minus_q.clone() * fi.clone() / nn.clone();
            }
            m[(i, i)] = S::from_int(2) * q.clone() * fi.clone() * rem.clone() / pair.clone();
            if i + 1 < size {
                m[(i, i + 1)] = one_minus_q.clone() * rem.clone() / nn.clone();
            }
            if i + 2 < size {
                m[(i, i + 2)] =
                    q.clone() * rem.clone() * S::from_int((n - i) as i64 - 1) / pair.clone();
            }
        }
        BandedMatrix::from_dense(m)
    }
}

impl<S: Scalar> Model<S> for QDeformed<S> {
    fn name(&self) -> &'static str {
        "q-deformed"
    }

    fn ball_count(&self) -> usize {
        self.balls
    }

    fn describe(&self) -> String {
        format!("q-deformed(N={}, q={})", self.balls, self.q)
    }

    fn theta(&self) -> Polynomial<S> {
        let n_minus_1 = S::from_int(self.balls as i64 - 1);
        Polynomial::new(vec![
            -self.q.clone() / n_minus_1.clone(),
            S::one() - self.q.clone(),
            self.q.clone() * S::from_int(self.balls as i64) / n_minus_1,
        ])
    }

    fn transition_matrix(&self) -> &BandedMatrix<S> {
        &self.matrix
    }

    fn eigenvalue(&self, j: usize) -> S {
        let lambda =
            S::one() - S::from_int(2 * j as i64) / S::from_int(self.balls as i64);
        self.theta().eval(&lambda)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::Zero;
    use crate::banded::{jacobi_matrix, theta_of_matrix};
    use crate::orthopoly::JacobiCoefficients;
    use crate::scalar::Rational;

    fn r(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn four_state_matrix_hand_checked() {
        let model = QDeformed::new(3, r(1, 2)).unwrap();
        let m = model.transition_matrix();
        let expected = [vec![r(0, 1), r(1, 2), r(1, 2), r(0, 1)],
            vec![r(1, 6), r(1, 3), r(1, 3), r(1, 6)],
            vec![r(1, 6), r(1, 3), r(1, 3), r(1, 6)],
            vec![r(0, 1), r(1, 2), r(1, 2), r(0, 1)]];
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(m.entry(i, j), &expected[i][j], "entry ({i},{j})");
            }
        }
        assert_eq!((m.lower_bandwidth(), m.upper_bandwidth()), (2, 2));
    }

    #[test]
    fn corner_entry_equals_q() {
        for (n, q) in [(3usize, r(1, 2)), (7, r(2, 5)), (11, r(9, 10))] {
            let model = QDeformed::new(n, q.clone()).unwrap();
            assert_eq!(model.transition_matrix().entry(0, 2), &q);
        }
    }

    #[test]
    fn quadratic_map_polynomial() {
        let model = QDeformed::new(3, r(1, 2)).unwrap();
        let theta = model.theta();
        assert_eq!(theta.coeffs(), &[r(-1, 4), r(1, 2), r(3, 4)]);
        assert_eq!(theta.eval(&r(1, 1)), r(1, 1));
        assert_eq!(theta.coeff_sum(), r(1, 1));
    }

    #[test]
    fn matrix_equals_polynomial_of_chain() {
        for n in [3usize, 5, 7] {
            for q in [r(0, 1), r(1, 4), r(1, 3), r(1, 2), r(3, 4), r(1, 1)] {
                let model = QDeformed::new(n, q).unwrap();
                let m0 = jacobi_matrix(&JacobiCoefficients::<Rational>::ehrenfest(n).unwrap());
                let mapped = theta_of_matrix(&model.theta(), &m0);
                assert!(model
                    .transition_matrix()
                    .max_abs_diff(&mapped)
                    .is_zero());
            }
        }
    }

    #[test]
    fn zero_deformation_reduces_to_classical_chain() {
        let model = QDeformed::new(5, r(0, 1)).unwrap();
        let m0 = jacobi_matrix(&JacobiCoefficients::<Rational>::ehrenfest(5).unwrap());
        assert!(model.transition_matrix().max_abs_diff(&m0).is_zero());
    }

    #[test]
    fn parameter_validation() {
        assert!(QDeformed::new(1, r(1, 2)).is_err());
        assert!(QDeformed::new(5, r(-1, 10)).is_err());
        assert!(QDeformed::new(5, r(11, 10)).is_err());
    }

    #[test]
    fn spectrum_example_with_double_eigenvalue() {
        let model = QDeformed::new(3, r(1, 2)).unwrap();
        let eigs: Vec<Rational> = (0..=3).map(|j| model.eigenvalue(j)).collect();
        assert_eq!(eigs, vec![r(1, 1), r(0, 1), r(-1, 3), r(0, 1)]);
    }
}
