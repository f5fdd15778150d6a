//! Numeric backends.
//!
//! Every algorithm in this crate is generic over [`Scalar`], which is
//! implemented for two backends:
//!
//! * [`f64`] for large problems and Monte Carlo work,
//! * [`Rational`] (arbitrary-precision rationals) for identity checks and
//!   eigenvalue-multiplicity detection, where floating point cannot certify
//!   that two eigenvalues actually coincide.
//!
//! Comparison helpers take a tolerance that is honoured by the float backend
//! and ignored by the exact one, so a single test can assert "equal within
//! `tol`" and get exact equality for free on rationals.

use num::{BigInt, BigRational, Signed, ToPrimitive};
use std::fmt::{Debug, Display};

/// Exact rational scalar used by the `rational` backend.
pub type Rational = BigRational;

/// Field element the library is generic over.
pub trait Scalar: Clone + PartialOrd + Debug + Display + Signed + Send + Sync + 'static {
    /// True when arithmetic is exact (no rounding).
    const EXACT: bool;

    fn from_int(v: i64) -> Self;

    /// `num / den`; `den` must be nonzero.
    fn from_ratio(num: i64, den: i64) -> Self;

    /// Lossy conversion used for reporting and float oracles.
    fn to_f64(&self) -> f64;

    /// Equality within `tol` on the float backend, exact equality on the
    /// rational backend.
    fn approx_eq(&self, other: &Self, tol: f64) -> bool;

    /// `self >= 0` allowing a `-tol` slack on the float backend.
    fn nonneg_within(&self, tol: f64) -> bool;

    /// `|self|` as f64, for deviation reports.
    fn abs_f64(&self) -> f64 {
        self.to_f64().abs()
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_int(v: i64) -> Self {
        v as f64
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self - other).abs() <= tol
    }

    fn nonneg_within(&self, tol: f64) -> bool {
        *self >= -tol
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn approx_eq(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }

    fn nonneg_within(&self, _tol: f64) -> bool {
        !self.is_negative()
    }
}

/// Binomial coefficient `C(n, k)` in the scalar field.
///
/// Computed by the multiplicative recurrence so the rational backend stays
/// exact and the float backend avoids intermediate overflow for `n` up to a
/// few thousand.
pub fn binomial<S: Scalar>(n: usize, k: usize) -> S {
    if k > n {
        return S::zero();
    }
    let k = k.min(n - k);
    let mut acc = S::one();
    for i in 0..k {
        acc = acc * S::from_int((n - i) as i64) / S::from_int((i + 1) as i64);
    }
    acc
}

/// Largest `|v|` in a slice, as the scalar type; zero for an empty slice.
pub fn max_abs<S: Scalar>(values: &[S]) -> S {
    let mut best = S::zero();
    for v in values {
        let a = v.abs();
        if a > best {
            best = a;
        }
    }
    best
}
