//! Structural identities of the k-ball family.
//!
//! The batch matrices satisfy a three-term recurrence in the batch size and
//! are Krawtchouk polynomials of the single-ball chain; both facts are
//! verified here entrywise, exactly on the rational backend.

use crate::banded::{jacobi_matrix, theta_of_matrix, BandedMatrix};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::orthopoly::JacobiCoefficients;
use crate::scalar::{binomial, Scalar};

/// Transition matrix of the `k`-ball move on `0..=n`, with the convention
/// that the 0-ball move is the identity.
pub fn k_ball_matrix<S: Scalar>(n: usize, k: usize) -> BandedMatrix<S> {
    assert!(n >= 1, "need at least one ball");
    assert!(k <= n, "batch size exceeds ball count");
    if k == 0 {
        return BandedMatrix::identity(n + 1);
    }
    let total = binomial::<S>(n, k);
    let size = n + 1;
    let mut m = Matrix::zeros(size, size);
    for i in 0..size {
        for l in 0..=k {
            // target i - k + 2l; out-of-range targets carry a vanishing
            // binomial, so they can be skipped outright
            let shifted = i + 2 * l;
            if shifted < k || shifted - k > n {
                continue;
            }
            let j = shifted - k;
            let num = binomial::<S>(i, k - l) * binomial::<S>(n - i, l);
            if !num.is_zero() {
                m[(i, j)] = num / total.clone();
            }
        }
    }
    BandedMatrix::from_dense(m)
}

/// Largest entrywise deviation in the batch-size recurrence
/// `(k - n) J_{k+1} = k J_{k-1} - n J_1 J_k` over `k = 1 .. kmax-1`,
/// starting from `J_0 = I`.
pub fn kball_recurrence_deviation<S: Scalar>(n: usize, kmax: usize) -> Result<S> {
    if kmax > n {
        return Err(Error::Domain(format!("kmax={kmax} exceeds ball count {n}")));
    }
    let j1 = k_ball_matrix::<S>(n, 1);
    let mut prev = BandedMatrix::identity(n + 1);
    let mut cur = j1.clone();
    let mut worst = S::zero();
    for k in 1..kmax {
        let next = k_ball_matrix::<S>(n, k + 1);
        let lhs = next.scale(&S::from_int(k as i64 - n as i64));
        let rhs = prev
            .scale(&S::from_int(k as i64))
            .sub(&j1.mul(&cur).scale(&S::from_int(n as i64)));
        let dev = lhs.max_abs_diff(&rhs);
        if dev > worst {
            worst = dev;
        }
        prev = cur;
        cur = next;
    }
    Ok(worst)
}

/// Largest entrywise deviation between the `k`-ball matrix and the
/// Krawtchouk polynomial of the single-ball chain that should equal it.
pub fn kball_krawtchouk_deviation<S: Scalar>(n: usize, k: usize) -> Result<S> {
    if k > n {
        return Err(Error::Domain(format!("batch size k={k} out of range 0..={n}")));
    }
    let coeffs = JacobiCoefficients::<S>::ehrenfest(n)?;
    let theta = coeffs.poly_coeffs(k)?;
    let mapped = theta_of_matrix(&theta, &jacobi_matrix(&coeffs));
    Ok(k_ball_matrix::<S>(n, k).max_abs_diff(&mapped))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::Zero;
    use crate::scalar::Rational;

    #[test]
    fn recurrence_exact_for_small_ball_counts() {
        for n in 2..=8usize {
            let dev = kball_recurrence_deviation::<Rational>(n, n).unwrap();
            assert!(dev.is_zero(), "n={n}: deviation {dev}");
        }
    }

    #[test]
    fn recurrence_float_backend_stays_tiny() {
        let dev = kball_recurrence_deviation::<f64>(5, 4).unwrap();
        assert!(dev <= 1e-12, "deviation {dev}");
    }

    #[test]
    fn two_ball_matrix_from_rearranged_recurrence() {
        // J_2 = (n J_1^2 - I)/(n - 1)
        let n = 3usize;
        let j1 = k_ball_matrix::<Rational>(n, 1);
        let lhs = k_ball_matrix::<Rational>(n, 2);
        let rhs = j1
            .mul(&j1)
            .scale(&Rational::from_int(n as i64))
            .sub(&BandedMatrix::identity(n + 1))
            .scale(&Rational::from_ratio(1, n as i64 - 1));
        assert!(lhs.max_abs_diff(&rhs).is_zero());
    }

    #[test]
    fn krawtchouk_identity_exact_for_all_batch_sizes() {
        for n in [4usize, 7] {
            for k in 0..=n {
                let dev = kball_krawtchouk_deviation::<Rational>(n, k).unwrap();
                assert!(dev.is_zero(), "n={n} k={k}: deviation {dev}");
            }
        }
    }

    #[test]
    fn zero_and_one_ball_batches() {
        let id = k_ball_matrix::<Rational>(4, 0);
        assert!(id.max_abs_diff(&BandedMatrix::identity(5)).is_zero());
        assert!(kball_krawtchouk_deviation::<Rational>(4, 0).unwrap().is_zero());
        assert!(kball_krawtchouk_deviation::<Rational>(4, 1).unwrap().is_zero());
    }

    #[test]
    fn kmax_out_of_range_rejected() {
        assert!(kball_recurrence_deviation::<f64>(4, 5).is_err());
        assert!(kball_krawtchouk_deviation::<f64>(4, 5).is_err());
    }
}
