//! Random walks whose transition matrix is a polynomial in a tridiagonal
//! stochastic matrix.
//!
//! The crate builds the classical single-ball urn chain and its polynomial
//! extensions (quadratic deformation, k-ball batches, mixtures of batches),
//! constructs the associated matrix-valued orthogonal polynomials with
//! explicit weights and norms, and uses them to compute spectra,
//! multiplicity structure, Karlin-McGregor n-step probabilities, and Monte
//! Carlo cross-checks.
//!
//! # Backends
//!
//! All algorithms are generic over [`scalar::Scalar`] with two backends:
//! [`f64`] and exact rationals ([`scalar::Rational`]). Identities that hold
//! exactly (matrix recurrences, orthogonality, eigenvalue coincidence) are
//! tested exactly on the rational backend; the float backend covers larger
//! sizes and simulation.
//!
//! # Quick tour
//!
//! ```
//! use kmwalk::models::{spectrum, Model, QDeformed};
//! use kmwalk::scalar::{Rational, Scalar};
//!
//! let model = QDeformed::new(3, Rational::from_ratio(1, 2)).unwrap();
//! let report = spectrum(&model);
//! // eigenvalues 1, 0, -1/3, 0: one double eigenvalue
//! assert_eq!(report.repeated_count(), 1);
//! assert!(model.transition_matrix().is_stochastic(0.0));
//! ```

pub mod banded;
pub mod blocks;
pub mod error;
pub mod km;
pub mod matrix;
pub mod models;
pub mod orthopoly;
pub mod poly;
pub mod scalar;
pub mod sim;

pub use error::{Error, Result};
pub use scalar::{Rational, Scalar};
