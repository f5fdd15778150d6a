//! Analytic spectra, multiplicity structure, stationary distribution.
//!
//! Eigenvalues come from the closed form `theta(1 - 2j/N)` rather than an
//! eigensolver; coincidence of eigenvalues is an exact-arithmetic question,
//! so the rational backend clusters by equality while the float backend
//! uses the relative tolerance `|x - y| < 1e-9 * max(1, |x|)`.

use super::{Model, QDeformed};
use crate::banded::BandedMatrix;
use crate::error::{Error, Result};
use crate::scalar::{binomial, Scalar};

const CLUSTER_TOL: f64 = 1e-9;

fn same_eigenvalue<S: Scalar>(x: &S, y: &S) -> bool {
    if S::EXACT {
        x == y
    } else {
        (x.to_f64() - y.to_f64()).abs() < CLUSTER_TOL * x.abs_f64().max(1.0)
    }
}

/// Eigenvalues of a model, indexed by `j`, with their coincidence classes.
#[derive(Clone, Debug)]
pub struct SpectrumReport<S> {
    eigenvalues: Vec<S>,
    classes: Vec<Vec<usize>>,
}

impl<S: Scalar> SpectrumReport<S> {
    pub fn eigenvalues(&self) -> &[S] {
        &self.eigenvalues
    }

    /// Partition of the index set by equal eigenvalue, in first-seen order.
    pub fn multiplicity_classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    /// Class id of index `j` (classes are numbered in first-seen order).
    pub fn class_of(&self, j: usize) -> usize {
        self.classes.iter().position(|c| c.contains(&j)).expect("index in range")
    }

    /// Number of eigenvalues attained more than once.
    pub fn repeated_count(&self) -> usize {
        self.classes.iter().filter(|c| c.len() >= 2).count()
    }

    pub fn is_simple(&self) -> bool {
        self.classes.iter().all(|c| c.len() == 1)
    }

    /// Spectral gaps; see [`SpectralGap`].
    pub fn spectral_gap(&self) -> SpectralGap {
        let mut max_not_one = 0.0f64;
        let mut max_not_unimodular = 0.0f64;
        for e in &self.eigenvalues {
            let is_one = if S::EXACT {
                e == &S::one()
            } else {
                (e.to_f64() - 1.0).abs() < CLUSTER_TOL
            };
            let modulus = e.abs_f64();
            let is_unimodular = if S::EXACT {
                e.abs() == S::one()
            } else {
                (modulus - 1.0).abs() < CLUSTER_TOL
            };
            if !is_one {
                max_not_one = max_not_one.max(modulus);
            }
            if !is_unimodular {
                max_not_unimodular = max_not_unimodular.max(modulus);
            }
        }
        SpectralGap {
            excluding_one: 1.0 - max_not_one,
            excluding_unimodular: 1.0 - max_not_unimodular,
        }
    }
}

/// Two readings of the spectral gap. Periodic models carry eigenvalue -1,
/// which makes the first gap zero; the second ignores all eigenvalues of
/// modulus one. Maxima over an empty set count as zero, so a spectrum of
/// pure unimodular eigenvalues reports a gap of 1 in the second reading.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralGap {
    pub excluding_one: f64,
    pub excluding_unimodular: f64,
}

/// Analytic spectrum `theta(1 - 2j/N)`, `j = 0..=N`, with multiplicity
/// classes.
pub fn spectrum<S: Scalar>(model: &dyn Model<S>) -> SpectrumReport<S> {
    let eigenvalues: Vec<S> = (0..model.states()).map(|j| model.eigenvalue(j)).collect();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (j, e) in eigenvalues.iter().enumerate() {
        match classes
            .iter_mut()
            .find(|class| same_eigenvalue(&eigenvalues[class[0]], e))
        {
            Some(class) => class.push(j),
            None => classes.push(vec![j]),
        }
    }
    SpectrumReport { eigenvalues, classes }
}

/// Binomial stationary distribution `pi_m = C(N,m) 2^-N`, shared by every
/// model in the zoo.
pub fn stationary<S: Scalar>(balls: usize) -> Result<Vec<S>> {
    if balls < 1 {
        return Err(Error::Domain(format!("need at least one ball, got {balls}")));
    }
    let mut half_pow = S::one();
    for _ in 0..balls {
        half_pow = half_pow / S::from_int(2);
    }
    Ok((0..=balls).map(|m| binomial::<S>(balls, m) * half_pow.clone()).collect())
}

/// Largest deviation in the detailed-balance relation
/// `pi_i M[i][j] = pi_j M[j][i]`.
pub fn detailed_balance_deviation<S: Scalar>(matrix: &BandedMatrix<S>, pi: &[S]) -> S {
    let n = matrix.size();
    assert_eq!(pi.len(), n);
    let mut worst = S::zero();
    for i in 0..n {
        for j in (i + 1)..n {
            let dev = (pi[i].clone() * matrix.entry(i, j).clone()
                - pi[j].clone() * matrix.entry(j, i).clone())
            .abs();
            if dev > worst {
                worst = dev;
            }
        }
    }
    worst
}

/// Multiplicity structure of the q-deformed spectrum at a given `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicityReport {
    /// Whether `q` belongs to the critical set.
    pub in_omega: bool,
    /// The index `i` with `q = (3 - 2i/(N-1))^-1`, when it exists.
    pub i: Option<usize>,
    /// `i/2 + 1` for even `i`, `(i+1)/2` for odd `i`, 0 outside the set.
    pub predicted_doubles: usize,
    /// Number of eigenvalues that actually coincide in pairs.
    pub observed_doubles: usize,
}

/// The critical set `{(3 - 2i/(N-1))^-1 : i = 0..N-1}` of deformation
/// parameters at which the q-deformed spectrum degenerates. Increasing in
/// `i`, ranging over [1/3, 1].
pub fn omega_set<S: Scalar>(balls: usize) -> Result<Vec<S>> {
    if balls < 2 {
        return Err(Error::Domain("critical set needs at least 2 balls".into()));
    }
    Ok((0..balls)
        .map(|i| {
            let denom = S::from_int(3)
                - S::from_int(2 * i as i64) / S::from_int(balls as i64 - 1);
            S::one() / denom
        })
        .collect())
}

/// Index `i` with `q = (3 - 2i/(N-1))^-1`, if any. Exact on the rational
/// backend; the float backend matches within the clustering tolerance.
pub fn omega_index<S: Scalar>(balls: usize, q: &S) -> Result<Option<usize>> {
    if balls < 2 {
        return Err(Error::Domain("critical set needs at least 2 balls".into()));
    }
    if !q.is_positive() {
        return Ok(None);
    }
    // i = (3 - 1/q)(N-1)/2
    let candidate = (S::from_int(3) - S::one() / q.clone())
        * S::from_int(balls as i64 - 1)
        / S::from_int(2);
    let rounded = candidate.to_f64().round();
    if !rounded.is_finite() || rounded < 0.0 || rounded > (balls - 1) as f64 {
        return Ok(None);
    }
    let i = rounded as usize;
    if candidate.approx_eq(&S::from_int(i as i64), CLUSTER_TOL) {
        Ok(Some(i))
    } else {
        Ok(None)
    }
}

/// Compares the predicted number of double eigenvalues of the q-deformed
/// model against the observed count from the analytic spectrum.
pub fn multiplicity_report<S: Scalar>(balls: usize, q: &S) -> Result<MultiplicityReport> {
    let i = omega_index(balls, q)?;
    let predicted = match i {
        Some(i) if i % 2 == 0 => i / 2 + 1,
        Some(i) => i.div_ceil(2),
        None => 0,
    };
    let model = QDeformed::new(balls, q.clone())?;
    let observed = spectrum(&model).repeated_count();
    Ok(MultiplicityReport {
        in_omega: i.is_some(),
        i,
        predicted_doubles: predicted,
        observed_doubles: observed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::Zero;
    use crate::models::{Classical, KBall, MultiBall};
    use crate::scalar::Rational;

    fn r(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn classical_spectrum_and_gaps() {
        let model = Classical::<Rational>::new(2).unwrap();
        let report = spectrum(&model);
        assert_eq!(report.eigenvalues(), &[r(1, 1), r(0, 1), r(-1, 1)]);
        assert!(report.is_simple());
        let gap = report.spectral_gap();
        assert_eq!(gap.excluding_one, 0.0);
        assert_eq!(gap.excluding_unimodular, 1.0);
    }

    #[test]
    fn deformed_spectrum_with_double() {
        let model = QDeformed::new(3, r(1, 2)).unwrap();
        let report = spectrum(&model);
        assert_eq!(report.eigenvalues(), &[r(1, 1), r(0, 1), r(-1, 3), r(0, 1)]);
        assert_eq!(report.repeated_count(), 1);
        assert_eq!(report.multiplicity_classes(), &[vec![0], vec![1, 3], vec![2]]);
        assert_eq!(report.class_of(3), 1);
        let gap = report.spectral_gap();
        assert!((gap.excluding_one - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn gap_values_stay_in_unit_interval() {
        let models: Vec<Box<dyn Model<f64>>> = vec![
            Box::new(Classical::new(6).unwrap()),
            Box::new(QDeformed::new(7, 0.3).unwrap()),
            Box::new(KBall::new(8, 3).unwrap()),
            Box::new(MultiBall::new(9, vec![(0.2, 1), (0.8, 4)]).unwrap()),
        ];
        for m in &models {
            let gap = spectrum(m.as_ref()).spectral_gap();
            for g in [gap.excluding_one, gap.excluding_unimodular] {
                assert!((0.0..=1.0).contains(&g), "{} gap {g}", m.describe());
            }
        }
    }

    #[test]
    fn stationary_small_cases() {
        assert_eq!(stationary::<Rational>(2).unwrap(), vec![r(1, 4), r(1, 2), r(1, 4)]);
        assert_eq!(stationary::<Rational>(1).unwrap(), vec![r(1, 2), r(1, 2)]);
    }

    #[test]
    fn stationary_is_invariant_for_every_variant() {
        let models: Vec<Box<dyn Model<Rational>>> = vec![
            Box::new(Classical::new(5).unwrap()),
            Box::new(QDeformed::new(5, r(2, 5)).unwrap()),
            Box::new(KBall::new(5, 3).unwrap()),
            Box::new(MultiBall::new(5, vec![(r(1, 3), 2), (r(2, 3), 4)]).unwrap()),
        ];
        for m in &models {
            let pi = stationary::<Rational>(5).unwrap();
            let image = m.transition_matrix().dense().left_mul_vec(&pi);
            assert_eq!(image, pi, "{}", m.describe());
            assert!(detailed_balance_deviation(m.transition_matrix(), &pi).is_zero());
        }
    }

    #[test]
    fn omega_membership_examples() {
        // i=0 gives q=1/3, i=N-1 gives q=1
        assert_eq!(omega_index(11, &r(1, 3)).unwrap(), Some(0));
        assert_eq!(omega_index(11, &r(1, 1)).unwrap(), Some(10));
        assert_eq!(omega_index(11, &r(3, 10)).unwrap(), None);
        assert_eq!(omega_index(11, &r(0, 1)).unwrap(), None);
        let omega: Vec<Rational> = omega_set(11).unwrap();
        assert_eq!(omega.len(), 11);
        for (i, q) in omega.iter().enumerate() {
            assert_eq!(omega_index(11, q).unwrap(), Some(i));
            assert!(q >= &r(1, 3) && q <= &r(1, 1));
        }
    }

    #[test]
    fn multiplicity_matches_prediction_on_known_cases() {
        let report = multiplicity_report(11, &r(1, 3)).unwrap();
        assert_eq!(report, MultiplicityReport {
            in_omega: true,
            i: Some(0),
            predicted_doubles: 1,
            observed_doubles: 1,
        });

        let report = multiplicity_report(11, &r(3, 10)).unwrap();
        assert_eq!(report.predicted_doubles, 0);
        assert_eq!(report.observed_doubles, 0);
        assert!(!report.in_omega);

        // q = 1: every eigenvalue pairs up
        let report = multiplicity_report(11, &r(1, 1)).unwrap();
        assert_eq!(report.i, Some(10));
        assert_eq!(report.predicted_doubles, 6);
        assert_eq!(report.observed_doubles, 6);
    }

    #[test]
    fn float_clustering_finds_near_coincidence() {
        let model = QDeformed::new(3, 0.5f64).unwrap();
        let report = spectrum(&model);
        assert_eq!(report.repeated_count(), 1);
    }
}
