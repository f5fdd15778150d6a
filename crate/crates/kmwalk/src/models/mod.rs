//! Urn-model zoo.
//!
//! Every walk in this crate is a polynomial image of the single-ball urn
//! chain: its transition matrix equals `theta(M0)` for the tridiagonal
//! matrix `M0` and a model-specific polynomial `theta` with coefficient
//! sum 1. Each variant lives behind the [`Model`] trait and is registered
//! by name, so the CLI (or any caller) can select one at runtime:
//!
//! * `classical` — one ball moved per step (`theta(x) = x`),
//! * `q-deformed` — quadratic deformation mixing one- and two-ball moves,
//! * `k-ball` — exactly `k` distinct balls moved per step,
//! * `multi-ball` — a probability mixture of `k`-ball moves.

mod classical;
mod identities;
mod k_ball;
mod multi_ball;
mod oracle;
mod q_deformed;
mod spectrum;

pub use classical::Classical;
pub use identities::{k_ball_matrix, kball_krawtchouk_deviation, kball_recurrence_deviation};
pub use k_ball::KBall;
pub use multi_ball::MultiBall;
pub use oracle::numeric_spectrum;
pub use q_deformed::QDeformed;
pub use spectrum::{
    detailed_balance_deviation, multiplicity_report, omega_index, omega_set, spectrum, stationary,
    MultiplicityReport, SpectralGap, SpectrumReport,
};

use crate::banded::BandedMatrix;
use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::scalar::Scalar;
use std::fmt::Debug;

/// A random walk on `0..=N` whose transition matrix is a polynomial in the
/// single-ball urn chain.
///
/// Implementations construct their transition matrix directly from the
/// model's combinatorics; that the matrix equals `theta(M0)` is an identity
/// the test suite verifies, not a definition the code relies on.
pub trait Model<S: Scalar>: Debug + Send + Sync {
    /// Registry name of the variant.
    fn name(&self) -> &'static str;

    /// Number of balls `N`; the state space is `0..=N`.
    fn ball_count(&self) -> usize;

    /// Human-readable parameterisation, e.g. `q-deformed(N=11, q=3/10)`.
    fn describe(&self) -> String;

    /// The polynomial mapping the single-ball chain to this model's
    /// transition matrix. Its coefficients sum to 1.
    fn theta(&self) -> Polynomial<S>;

    /// The transition matrix, built directly from the model dynamics.
    fn transition_matrix(&self) -> &BandedMatrix<S>;

    /// The `j`-th eigenvalue `theta(1 - 2j/N)`, evaluated by a numerically
    /// stable per-model formula.
    fn eigenvalue(&self, j: usize) -> S;

    /// Number of states `N + 1`.
    fn states(&self) -> usize {
        self.ball_count() + 1
    }
}

/// Parameter bag a registry entry builds a model from. Factories pick what
/// they need and reject missing or out-of-range values.
#[derive(Clone, Debug, Default)]
pub struct ModelParams<S> {
    /// Ball count `N`.
    pub balls: usize,
    /// Deformation parameter for `q-deformed`.
    pub q: Option<S>,
    /// Ball batch size for `k-ball`.
    pub k: Option<usize>,
    /// Mixture weights for `multi-ball`.
    pub qvec: Option<Vec<S>>,
    /// Batch sizes for `multi-ball`, aligned with `qvec`.
    pub kvec: Option<Vec<usize>>,
}

/// Factory signature of a registry entry.
pub type ModelFactory<S> = fn(&ModelParams<S>) -> Result<Box<dyn Model<S>>>;

/// A named model variant and its factory.
pub struct RegistryEntry<S: Scalar> {
    pub name: &'static str,
    pub summary: &'static str,
    pub build: ModelFactory<S>,
}

/// All registered model variants.
pub fn registry<S: Scalar>() -> Vec<RegistryEntry<S>> {
    vec![
        RegistryEntry {
            name: "classical",
            summary: "single-ball urn chain (nearest-neighbour walk)",
            build: |p| Ok(Box::new(Classical::new(p.balls)?)),
        },
        RegistryEntry {
            name: "q-deformed",
            summary: "mix of one- and two-ball moves, quadratic in the chain",
            build: |p| {
                let q = p.q.clone().ok_or_else(|| {
                    Error::Domain("q-deformed model needs a deformation parameter q".into())
                })?;
                Ok(Box::new(QDeformed::new(p.balls, q)?) as Box<dyn Model<S>>)
            },
        },
        RegistryEntry {
            name: "k-ball",
            summary: "exactly k distinct balls moved per step",
            build: |p| {
                let k = p
                    .k
                    .ok_or_else(|| Error::Domain("k-ball model needs a batch size k".into()))?;
                Ok(Box::new(KBall::new(p.balls, k)?) as Box<dyn Model<S>>)
            },
        },
        RegistryEntry {
            name: "multi-ball",
            summary: "probability mixture of k-ball moves",
            build: |p| {
                let qvec = p.qvec.clone().ok_or_else(|| {
                    Error::Domain("multi-ball model needs mixture weights (qvec)".into())
                })?;
                let kvec = p.kvec.clone().ok_or_else(|| {
                    Error::Domain("multi-ball model needs batch sizes (kvec)".into())
                })?;
                if qvec.len() != kvec.len() {
                    return Err(Error::LengthMismatch { left: qvec.len(), right: kvec.len() });
                }
                let parts = qvec.into_iter().zip(kvec).collect();
                Ok(Box::new(MultiBall::new(p.balls, parts)?) as Box<dyn Model<S>>)
            },
        },
    ]
}

/// Builds the named variant from the parameter bag.
pub fn build_model<S: Scalar>(name: &str, params: &ModelParams<S>) -> Result<Box<dyn Model<S>>> {
    for entry in registry::<S>() {
        if entry.name == name {
            return (entry.build)(params);
        }
    }
    Err(Error::UnknownModel(name.to_string()))
}

/// Picks the registry name implied by which parameters are present:
/// mixture vectors select `multi-ball`, a batch size selects `k-ball`,
/// a deformation parameter selects `q-deformed`, nothing selects
/// `classical`.
pub fn infer_model_name<S>(params: &ModelParams<S>) -> &'static str {
    if params.qvec.is_some() || params.kvec.is_some() {
        "multi-ball"
    } else if params.k.is_some() {
        "k-ball"
    } else if params.q.is_some() {
        "q-deformed"
    } else {
        "classical"
    }
}

/// Stochasticity gate run by every model constructor.
pub(crate) fn gate_stochastic<S: Scalar>(matrix: &BandedMatrix<S>, what: &str) -> Result<()> {
    if !matrix.is_stochastic(1e-12) {
        return Err(Error::NotStochastic(what.to_string()));
    }
    Ok(())
}
