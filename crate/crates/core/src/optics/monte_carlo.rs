//! Seeded single-photon detection experiment.
//!
//! Trial `t` reads the two 64-bit words at positions `2t, 2t + 1` of the
//! ChaCha8 keystream keyed by the seed: the first picks the prepared state,
//! the second the detector. Because the stream is random-access, chunks of
//! trials can be evaluated in any order or on any thread and the report is
//! the same.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{detection_distribution, Prepared, SetupConfig};
use crate::exec::Execution;
use crate::tol;
use crate::Result;

const CHUNK: u64 = 8192;
/// Outcome probabilities below this are rounding residue and never sampled.
const ZERO_CUTOFF: f64 = 1e-15;
/// 32-bit keystream words consumed per trial.
const WORDS_PER_TRIAL: u128 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MonteCarloReport {
    pub n_trials: u64,
    pub n_pd1: u64,
    pub n_pd2: u64,
    pub n_inconclusive: u64,
    pub n_leak: u64,
    /// PD(1) clicks on state 2 plus PD(2) clicks on state 1.
    pub n_errors: u64,
    pub seed: u64,
}

impl MonteCarloReport {
    fn merge(self, other: Self) -> Self {
        Self {
            n_trials: self.n_trials + other.n_trials,
            n_pd1: self.n_pd1 + other.n_pd1,
            n_pd2: self.n_pd2 + other.n_pd2,
            n_inconclusive: self.n_inconclusive + other.n_inconclusive,
            n_leak: self.n_leak + other.n_leak,
            n_errors: self.n_errors + other.n_errors,
            seed: self.seed,
        }
    }

    pub fn n_conclusive(&self) -> u64 {
        self.n_pd1 + self.n_pd2
    }
}

fn unit(word: u64) -> f64 {
    (word >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Index of the outcome selected by `u ∈ [0, 1)`; outcomes of zero
/// probability are never chosen.
fn pick(u: f64, probs: &[f64; 4]) -> usize {
    let mut acc = 0.0;
    let mut last = 0;
    for (k, &p) in probs.iter().enumerate() {
        if p <= 0.0 {
            continue;
        }
        acc += p;
        last = k;
        if u < acc {
            return k;
        }
    }
    last
}

/// Run `n_trials` trials with priors `(p1, 1 − p1)` using the default
/// execution strategy.
pub fn monte_carlo(
    config: &SetupConfig,
    p1: f64,
    n_trials: u64,
    seed: u64,
) -> Result<MonteCarloReport> {
    monte_carlo_with(config, p1, n_trials, seed, Execution::default())
}

pub fn monte_carlo_with(
    config: &SetupConfig,
    p1: f64,
    n_trials: u64,
    seed: u64,
    exec: Execution,
) -> Result<MonteCarloReport> {
    tol::check_unit_interval("p1", p1)?;
    let clean = |d: super::DetectorDistribution| {
        d.as_array().map(|p| if p <= ZERO_CUTOFF { 0.0 } else { p })
    };
    let dist1 = clean(detection_distribution(config, Prepared::State1));
    let dist2 = clean(detection_distribution(config, Prepared::State2));

    let chunks = n_trials.div_ceil(CHUNK) as usize;
    let empty = MonteCarloReport {
        seed,
        ..Default::default()
    };
    let report = exec.map_reduce(
        chunks,
        empty,
        |chunk| {
            let start = chunk as u64 * CHUNK;
            let end = (start + CHUNK).min(n_trials);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_word_pos(start as u128 * WORDS_PER_TRIAL);
            let mut r = MonteCarloReport {
                seed,
                n_trials: end - start,
                ..Default::default()
            };
            for _ in start..end {
                let state1 = unit(rng.next_u64()) < p1;
                let probs = if state1 { &dist1 } else { &dist2 };
                match pick(unit(rng.next_u64()), probs) {
                    0 => {
                        r.n_pd1 += 1;
                        r.n_errors += u64::from(!state1);
                    }
                    1 => {
                        r.n_pd2 += 1;
                        r.n_errors += u64::from(state1);
                    }
                    2 => r.n_inconclusive += 1,
                    _ => r.n_leak += 1,
                }
            }
            r
        },
        MonteCarloReport::merge,
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::super::ps_max;
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4};

    #[test]
    fn pick_skips_zero_probability_outcomes() {
        let probs = [0.5, 0.0, 0.5, 0.0];
        assert_eq!(pick(0.0, &probs), 0);
        assert_eq!(pick(0.49, &probs), 0);
        assert_eq!(pick(0.5, &probs), 2);
        assert_eq!(pick(0.999_999_999_999, &probs), 2);
        // rounding shortfall falls back to the last populated outcome
        assert_eq!(pick(0.9999, &[0.3, 0.3, 0.3, 0.0]), 2);
    }

    #[test]
    fn optimal_run_has_no_errors() {
        let cfg = SetupConfig::optimal(FRAC_PI_4, 0.6, FRAC_PI_2).unwrap();
        for seed in [0, 1, 42, u64::MAX] {
            let r = monte_carlo(&cfg, 0.6, 50_000, seed).unwrap();
            assert_eq!(r.n_errors, 0);
            assert_eq!(r.n_leak, 0);
            assert_eq!(r.n_pd1 + r.n_pd2 + r.n_inconclusive + r.n_leak, r.n_trials);
        }
    }

    #[test]
    fn boundary_runs_have_no_errors() {
        for p1 in [0.1, 0.9] {
            let cfg = SetupConfig::optimal(FRAC_PI_3, p1, FRAC_PI_2).unwrap();
            let r = monte_carlo(&cfg, p1, 50_000, 7).unwrap();
            assert_eq!(r.n_errors, 0, "p1 = {p1}");
            assert!(r.n_pd1 + r.n_pd2 > 0);
        }
    }

    #[test]
    fn reproducible_and_partition_independent() {
        let cfg = SetupConfig::with_x(1.0, 0.3, 1.1).unwrap();
        let a = monte_carlo_with(&cfg, 0.4, 30_001, 7, Execution::Sequential).unwrap();
        let b = monte_carlo_with(&cfg, 0.4, 30_001, 7, Execution::Parallel).unwrap();
        let c = monte_carlo_with(&cfg, 0.4, 30_001, 7, Execution::Sequential).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert_ne!(a, monte_carlo(&cfg, 0.4, 30_001, 8).unwrap());
        assert!(a.n_leak > 0);
    }

    #[test]
    fn prefix_of_a_longer_run_is_the_shorter_run() {
        // trial t always reads the same keystream words
        let cfg = SetupConfig::with_x(1.0, 0.3, 1.1).unwrap();
        let short = monte_carlo(&cfg, 0.4, CHUNK, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut n_pd1 = 0;
        let d1 = detection_distribution(&cfg, Prepared::State1).as_array();
        let d2 = detection_distribution(&cfg, Prepared::State2).as_array();
        for _ in 0..CHUNK {
            let s1 = unit(rng.next_u64()) < 0.4;
            if pick(unit(rng.next_u64()), if s1 { &d1 } else { &d2 }) == 0 {
                n_pd1 += 1;
            }
        }
        assert_eq!(short.n_pd1, n_pd1);
    }

    #[test]
    fn conclusive_rate_is_within_binomial_band() {
        let (alpha, p1) = (FRAC_PI_4, 0.6);
        let cfg = SetupConfig::optimal(alpha, p1, FRAC_PI_2).unwrap();
        let n = 200_000u64;
        let r = monte_carlo(&cfg, p1, n, 2024).unwrap();
        let p = ps_max(alpha, p1, 1.0 - p1, FRAC_PI_2).unwrap();
        let sigma = (n as f64 * p * (1.0 - p)).sqrt();
        assert!(((r.n_conclusive() as f64) - n as f64 * p).abs() < 4.0 * sigma);
    }

    #[test]
    fn zero_trials() {
        let cfg = SetupConfig::optimal(FRAC_PI_4, 0.6, FRAC_PI_2).unwrap();
        let r = monte_carlo(&cfg, 0.6, 0, 1).unwrap();
        assert_eq!(r.n_trials, 0);
        assert!(monte_carlo(&cfg, 1.5, 10, 1).is_err());
    }
}
