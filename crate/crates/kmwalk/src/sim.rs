//! Monte Carlo simulation of the urn walks.
//!
//! # Reproducibility contract
//!
//! The generator is ChaCha8 (`rand_chacha`), seeded from the 64-bit config
//! seed via the standard SplitMix expansion. Trajectory `t` draws from
//! stream `t` of that generator (ChaCha's 64-bit stream counter), so
//! per-trajectory randomness is independent of scheduling: serial and
//! parallel runs produce bit-identical trajectories and reports. Statistics
//! are merged by trajectory index, never by completion order.

use crate::error::{Error, Result};
use crate::km::{tv_distance, KmContext};
use crate::models::Model;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Simulation parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SimConfig {
    pub start: usize,
    pub steps: usize,
    pub trials: u64,
    pub seed: u64,
}

impl SimConfig {
    fn validate(&self, model: &dyn Model<f64>) -> Result<()> {
        if self.start > model.ball_count() {
            return Err(Error::Domain(format!(
                "start state {} out of range 0..={}",
                self.start,
                model.ball_count()
            )));
        }
        if self.trials < 1 {
            return Err(Error::Domain("need at least one trial".into()));
        }
        Ok(())
    }
}

/// Per-row inverse-CDF sampler over the nonzero transition entries.
/// Rows carry at most `2k+1` nonzeros; sampling scans the cumulative row.
struct RowSampler {
    rows: Vec<Vec<(usize, f64)>>, // (target state, cumulative probability)
}

impl RowSampler {
    fn new(model: &dyn Model<f64>) -> Self {
        let matrix = model.transition_matrix();
        let n = matrix.size();
        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            let mut cdf = Vec::new();
            let mut acc = 0.0f64;
            for j in 0..n {
                let p = *matrix.entry(i, j);
                if p > 0.0 {
                    acc += p;
                    cdf.push((j, acc));
                }
            }
            rows.push(cdf);
        }
        RowSampler { rows }
    }

    fn sample(&self, state: usize, u: f64) -> usize {
        let row = &self.rows[state];
        for &(j, cum) in row {
            if u < cum {
                return j;
            }
        }
        // u landed in the roundoff sliver past the last cumulative value
        row.last().expect("row has transitions").0
    }
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn run_trial(sampler: &RowSampler, cfg: &SimConfig, trial: u64, steps: usize) -> Vec<usize> {
    let mut rng = trial_rng(cfg.seed, trial);
    let mut path = Vec::with_capacity(steps + 1);
    let mut state = cfg.start;
    path.push(state);
    for _ in 0..steps {
        state = sampler.sample(state, rng.gen::<f64>());
        path.push(state);
    }
    path
}

/// The trajectory of trial 0: states at times `0..=steps`.
pub fn sample_path(model: &dyn Model<f64>, cfg: &SimConfig) -> Result<Vec<usize>> {
    sample_path_for_trial(model, cfg, 0)
}

/// The trajectory of a given trial index, deterministic in `(seed, trial)`.
pub fn sample_path_for_trial(
    model: &dyn Model<f64>,
    cfg: &SimConfig,
    trial: u64,
) -> Result<Vec<usize>> {
    cfg.validate(model)?;
    let sampler = RowSampler::new(model);
    Ok(run_trial(&sampler, cfg, trial, cfg.steps))
}

/// Histogram of the time-`n` states over all trials.
///
/// `threads = 0` uses the global thread pool; any other value runs on a
/// dedicated pool of that size. The result does not depend on the choice.
pub fn empirical_distribution(
    model: &dyn Model<f64>,
    cfg: &SimConfig,
    n: usize,
    threads: usize,
) -> Result<Vec<u64>> {
    cfg.validate(model)?;
    if n > cfg.steps {
        return Err(Error::Domain(format!("time {n} exceeds configured steps {}", cfg.steps)));
    }
    let sampler = RowSampler::new(model);
    let states = model.states();
    let run = || -> Vec<u64> {
        let finals: Vec<usize> = (0..cfg.trials)
            .into_par_iter()
            .map(|trial| *run_trial(&sampler, cfg, trial, n).last().expect("nonempty path"))
            .collect();
        let mut counts = vec![0u64; states];
        for s in finals {
            counts[s] += 1;
        }
        counts
    };
    if threads == 0 {
        Ok(run())
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::Domain(format!("thread pool: {e}")))?;
        Ok(pool.install(run))
    }
}

/// Comparison of the empirical time-`n` distribution against the spectral
/// formula.
#[derive(Clone, Debug, PartialEq)]
pub struct SimReport {
    pub n: usize,
    pub trials: u64,
    pub counts: Vec<u64>,
    pub empirical: Vec<f64>,
    pub analytic: Vec<f64>,
    /// Per-state z-scores under the binomial sampling model.
    pub z: Vec<f64>,
    /// Total-variation distance between the two distributions.
    pub tv: f64,
    /// Largest per-state z-score, `max` of `z`.
    pub z_max: f64,
}

/// Runs `cfg.trials` trajectories to time `n` and scores the empirical
/// distribution against the Karlin-McGregor row.
pub fn empirical_vs_analytic(
    model: &dyn Model<f64>,
    cfg: &SimConfig,
    n: usize,
    threads: usize,
) -> Result<SimReport> {
    let counts = empirical_distribution(model, cfg, n, threads)?;
    let analytic = KmContext::new(model)?.n_step_distribution(cfg.start, n)?;
    let trials = cfg.trials as f64;
    let empirical: Vec<f64> = counts.iter().map(|&c| c as f64 / trials).collect();
    let tv = tv_distance(&empirical, &analytic)?;

    let z: Vec<f64> = counts
        .iter()
        .zip(&analytic)
        .map(|(&count, &p)| binomial_z(count, trials, p))
        .collect();
    let z_max = z.iter().fold(0.0f64, |a, &b| a.max(b));
    Ok(SimReport { n, trials: cfg.trials, counts, empirical, analytic, z, tv, z_max })
}

/// z-score of `count` successes in `trials` draws of probability `p`.
/// Impossible outcomes (mass where `p` is 0 or missing mass where `p` is 1)
/// score infinite.
fn binomial_z(count: u64, trials: f64, p: f64) -> f64 {
    let variance = trials * p * (1.0 - p);
    let deviation = count as f64 - trials * p;
    if variance > 0.0 {
        deviation.abs() / variance.sqrt()
    } else if deviation == 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{Classical, KBall, QDeformed};

    #[test]
    fn single_ball_walk_is_deterministic() {
        let model = Classical::new(1).unwrap();
        let cfg = SimConfig { start: 0, steps: 5, trials: 1, seed: 7 };
        assert_eq!(sample_path(&model, &cfg).unwrap(), vec![0, 1, 0, 1, 0, 1]);
    }

    #[test]
    fn zero_steps_is_the_start_state() {
        let model = QDeformed::new(5, 0.4).unwrap();
        let cfg = SimConfig { start: 3, steps: 0, trials: 1, seed: 1 };
        assert_eq!(sample_path(&model, &cfg).unwrap(), vec![3]);
    }

    #[test]
    fn paths_are_reproducible_and_stream_separated() {
        let model = QDeformed::new(9, 0.35).unwrap();
        let cfg = SimConfig { start: 4, steps: 50, trials: 1, seed: 42 };
        let a = sample_path_for_trial(&model, &cfg, 3).unwrap();
        let b = sample_path_for_trial(&model, &cfg, 3).unwrap();
        let c = sample_path_for_trial(&model, &cfg, 4).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn even_batch_sizes_preserve_parity() {
        let model = KBall::new(4, 2).unwrap();
        let cfg = SimConfig { start: 2, steps: 200, trials: 1, seed: 5 };
        for trial in 0..8u64 {
            let path = sample_path_for_trial(&model, &cfg, trial).unwrap();
            assert!(path.iter().all(|s| s % 2 == 0), "trial {trial}");
        }
    }

    #[test]
    fn classical_walk_alternates_parity() {
        let model = Classical::new(7).unwrap();
        let cfg = SimConfig { start: 3, steps: 100, trials: 1, seed: 9 };
        let path = sample_path(&model, &cfg).unwrap();
        for (t, s) in path.iter().enumerate() {
            assert_eq!(s % 2, (3 + t) % 2);
        }
    }

    #[test]
    fn deterministic_row_gives_zero_tv() {
        let model = Classical::new(2).unwrap();
        let cfg = SimConfig { start: 0, steps: 1, trials: 500, seed: 11 };
        let report = empirical_vs_analytic(&model, &cfg, 1, 0).unwrap();
        assert_eq!(report.counts, vec![0, 500, 0]);
        assert_eq!(report.tv, 0.0);
        assert_eq!(report.z_max, 0.0);
    }

    #[test]
    fn single_trial_at_time_zero() {
        let model = QDeformed::new(5, 0.4).unwrap();
        let cfg = SimConfig { start: 2, steps: 0, trials: 1, seed: 1 };
        let report = empirical_vs_analytic(&model, &cfg, 0, 0).unwrap();
        assert_eq!(report.counts[2], 1);
        assert!(report.tv < 1e-12, "tv {}", report.tv);
        assert!(report.z_max.is_finite() && report.z_max < 1e-6, "z {}", report.z_max);
    }

    #[test]
    fn thread_count_does_not_change_the_report() {
        let model = QDeformed::new(7, 0.3).unwrap();
        let cfg = SimConfig { start: 0, steps: 4, trials: 20_000, seed: 123 };
        let serial = empirical_vs_analytic(&model, &cfg, 4, 1).unwrap();
        let parallel = empirical_vs_analytic(&model, &cfg, 4, 8).unwrap();
        assert_eq!(serial, parallel);
    }

    #[test]
    fn empirical_distribution_tracks_analytic_row() {
        let model = QDeformed::new(5, 0.45).unwrap();
        let cfg = SimConfig { start: 1, steps: 3, trials: 40_000, seed: 77 };
        let report = empirical_vs_analytic(&model, &cfg, 3, 0).unwrap();
        // loose statistical bounds; the acceptance suite runs the tight ones
        assert!(report.tv < 3.0 * (6.0 / 40_000.0f64).sqrt(), "tv {}", report.tv);
        assert!(report.z_max < 6.0, "z_max {}", report.z_max);
    }

    #[test]
    fn config_validation() {
        let model = QDeformed::new(5, 0.4).unwrap();
        let bad_start = SimConfig { start: 9, steps: 1, trials: 1, seed: 0 };
        assert!(sample_path(&model, &bad_start).is_err());
        let bad_trials = SimConfig { start: 0, steps: 1, trials: 0, seed: 0 };
        assert!(empirical_distribution(&model, &bad_trials, 1, 0).is_err());
        let cfg = SimConfig { start: 0, steps: 1, trials: 1, seed: 0 };
        assert!(empirical_distribution(&model, &cfg, 2, 0).is_err());
    }
}
