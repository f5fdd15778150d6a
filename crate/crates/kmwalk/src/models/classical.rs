use super::{gate_stochastic, Model};
use crate::banded::{jacobi_matrix, BandedMatrix};
use crate::error::Result;
use crate::orthopoly::JacobiCoefficients;
use crate::poly::Polynomial;
use crate::scalar::Scalar;

/// Classical urn chain: one uniformly chosen ball changes urn per step.
///
/// Row `i` moves to `i-1` with probability `i/N` and to `i+1` with
/// probability `(N-i)/N`.
pub struct Classical<S> {
    balls: usize,
    matrix: BandedMatrix<S>,
}

impl<S: Scalar> std::fmt::Debug for Classical<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", format_args!("Classical(N={})", self.balls))
    }
}

impl<S: Scalar> Classical<S> {
    pub fn new(balls: usize) -> Result<Self> {
        let coeffs = JacobiCoefficients::<S>::ehrenfest(balls)?;
        let matrix = jacobi_matrix(&coeffs);
        gate_stochastic(&matrix, "classical urn chain")?;
        Ok(Classical { balls, matrix })
    }
}

impl<S: Scalar> Model<S> for Classical<S> {
    fn name(&self) -> &'static str {
        "classical"
    }

    fn ball_count(&self) -> usize {
        self.balls
    }

    fn describe(&self) -> String {
        format!("classical(N={})", self.balls)
    }

    fn theta(&self) -> Polynomial<S> {
        Polynomial::identity()
    }

    fn transition_matrix(&self) -> &BandedMatrix<S> {
        &self.matrix
    }

    fn eigenvalue(&self, j: usize) -> S {
        S::one() - S::from_int(2 * j as i64) / S::from_int(self.balls as i64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn r(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn two_ball_chain_matches_hand_computation() {
        let model = Classical::<Rational>::new(2).unwrap();
        let m = model.transition_matrix();
        let rows: Vec<Vec<Rational>> =
            (0..3).map(|i| (0..3).map(|j| m.entry(i, j).clone()).collect()).collect();
        assert_eq!(
            rows,
            vec![
                vec![r(0, 1), r(1, 1), r(0, 1)],
                vec![r(1, 2), r(0, 1), r(1, 2)],
                vec![r(0, 1), r(1, 1), r(0, 1)],
            ]
        );
    }

    #[test]
    fn eigenvalues_are_equally_spaced() {
        let model = Classical::<Rational>::new(4).unwrap();
        let eigs: Vec<Rational> = (0..=4).map(|j| model.eigenvalue(j)).collect();
        assert_eq!(eigs, vec![r(1, 1), r(1, 2), r(0, 1), r(-1, 2), r(-1, 1)]);
    }

    #[test]
    fn zero_balls_rejected() {
        assert!(Classical::<f64>::new(0).is_err());
    }
}
