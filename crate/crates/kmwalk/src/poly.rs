//! Scalar polynomials in the monomial basis.
//!
//! Used for the map polynomial Θ that turns a tridiagonal transition matrix
//! into a banded one. Coefficients are stored degree-ascending.

use crate::scalar::Scalar;
use std::fmt;

/// Dense polynomial with coefficients in the scalar field.
#[derive(Clone, PartialEq)]
pub struct Polynomial<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> Polynomial<S> {
    /// Builds a polynomial from degree-ascending coefficients, trimming
    /// trailing zeros. The empty list (or all zeros) is the zero polynomial.
    pub fn new(mut coeffs: Vec<S>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(S::zero());
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: vec![S::zero()] }
    }

    pub fn constant(c: S) -> Self {
        Polynomial::new(vec![c])
    }

    /// The identity map `x`.
    pub fn identity() -> Self {
        Polynomial { coeffs: vec![S::zero(), S::one()] }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> S {
        self.coeffs.get(k).cloned().unwrap_or_else(S::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Sum of the coefficients, i.e. the value at 1. A stochastic map
    /// polynomial must have coefficient sum 1 so that row sums are preserved.
    pub fn coeff_sum(&self) -> S {
        let mut acc = S::zero();
        for c in &self.coeffs {
            acc = acc + c.clone();
        }
        acc
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &S) -> S {
        let mut acc = self.coeffs.last().cloned().unwrap_or_else(S::zero);
        for c in self.coeffs.iter().rev().skip(1) {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn scale(&self, factor: &S) -> Self {
        Polynomial::new(self.coeffs.iter().map(|c| c.clone() * factor.clone()).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k) + other.coeff(k));
        }
        Polynomial::new(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-S::one()))
    }

    /// Multiplication by `x` (degree shift).
    pub fn shift_up(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut out = Vec::with_capacity(self.coeffs.len() + 1);
        out.push(S::zero());
        out.extend(self.coeffs.iter().cloned());
        Polynomial::new(out)
    }
}

impl<S: Scalar> fmt::Debug for Polynomial<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial{:?}", self.coeffs)
    }
}

impl<S: Scalar> fmt::Display for Polynomial<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() && self.degree() > 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*x")?,
                _ => write!(f, "({c})*x^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
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
    fn horner_matches_direct_expansion() {
        // 2x^2 - 3x + 1 at x = 5/2 -> 2*25/4 - 15/2 + 1 = 6
        let p = Polynomial::new(vec![r(1, 1), r(-3, 1), r(2, 1)]);
        assert_eq!(p.eval(&r(5, 2)), r(6, 1));
        assert_eq!(p.degree(), 2);
        assert_eq!(p.coeff_sum(), r(0, 1));
    }

    #[test]
    fn trailing_zeros_trimmed() {
        let p = Polynomial::new(vec![r(1, 1), r(0, 1), r(0, 1)]);
        assert_eq!(p.degree(), 0);
        let z: Polynomial<Rational> = Polynomial::new(vec![]);
        assert!(z.is_zero());
        assert_eq!(z.degree(), 0);
    }

    #[test]
    fn arithmetic_identities() {
        let p = Polynomial::new(vec![r(1, 2), r(2, 1)]);
        let q = Polynomial::new(vec![r(-1, 2), r(1, 1), r(3, 1)]);
        let s = p.add(&q);
        let x = r(7, 3);
        assert_eq!(s.eval(&x), p.eval(&x) + q.eval(&x));
        assert_eq!(p.sub(&p).eval(&x), r(0, 1));
        assert_eq!(p.shift_up().eval(&x), x.clone() * p.eval(&x));
    }
}
