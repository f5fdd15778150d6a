//! Independent numeric eigenvalue oracle.
//!
//! Detailed balance makes `D^{1/2} M D^{-1/2}` symmetric for
//! `D = diag(pi)`, so a symmetric eigensolver can cross-check the analytic
//! spectrum without sharing any code path with it.

use super::{stationary, Model};
use crate::banded::BandedMatrix;
use crate::scalar::Scalar;
use nalgebra::DMatrix;

/// Eigenvalues of the model's transition matrix from a dense symmetric
/// eigensolver, sorted descending. Panics if symmetrisation fails, which
/// would mean the model violates detailed balance.
pub fn numeric_spectrum<S: Scalar>(model: &dyn Model<S>) -> Vec<f64> {
    let pi: Vec<S> = stationary(model.ball_count()).expect("positive ball count");
    symmetrized_eigenvalues(model.transition_matrix(), &pi)
}

fn symmetrized_eigenvalues<S: Scalar>(matrix: &BandedMatrix<S>, pi: &[S]) -> Vec<f64> {
    let n = matrix.size();
    assert_eq!(pi.len(), n);
    let sqrt_pi: Vec<f64> = pi.iter().map(|p| p.to_f64().sqrt()).collect();
    let sym = DMatrix::from_fn(n, n, |i, j| {
        matrix.entry(i, j).to_f64() * sqrt_pi[i] / sqrt_pi[j]
    });
    let asym = (&sym - sym.transpose()).abs().max();
    assert!(
        asym < 1e-10,
        "symmetrisation failed (deviation {asym:.3e}): matrix is not reversible"
    );
    let sym = (&sym + sym.transpose()).scale(0.5);
    let mut eigs: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    eigs.sort_by(|a, b| b.partial_cmp(a).unwrap());
    eigs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{spectrum, Classical, KBall, MultiBall, QDeformed};
    use crate::scalar::Rational;

    fn sorted_analytic<S: Scalar>(model: &dyn Model<S>) -> Vec<f64> {
        let mut eigs: Vec<f64> =
            spectrum(model).eigenvalues().iter().map(|e| e.to_f64()).collect();
        eigs.sort_by(|a, b| b.partial_cmp(a).unwrap());
        eigs
    }

    #[test]
    fn oracle_agrees_with_analytic_formula() {
        let models: Vec<Box<dyn Model<f64>>> = vec![
            Box::new(Classical::new(10).unwrap()),
            Box::new(QDeformed::new(9, 0.4).unwrap()),
            Box::new(KBall::new(12, 4).unwrap()),
            Box::new(MultiBall::new(8, vec![(0.5, 1), (0.25, 2), (0.25, 3)]).unwrap()),
        ];
        for m in &models {
            let analytic = sorted_analytic(m.as_ref());
            let numeric = numeric_spectrum(m.as_ref());
            assert_eq!(analytic.len(), numeric.len());
            for (a, b) in analytic.iter().zip(&numeric) {
                assert!((a - b).abs() < 1e-8, "{}: {a} vs {b}", m.describe());
            }
        }
    }

    #[test]
    fn oracle_handles_rational_models() {
        let model = QDeformed::new(7, Rational::from_ratio(2, 5)).unwrap();
        let analytic = sorted_analytic(&model);
        let numeric = numeric_spectrum(&model);
        for (a, b) in analytic.iter().zip(&numeric) {
            assert!((a - b).abs() < 1e-8);
        }
    }
}
