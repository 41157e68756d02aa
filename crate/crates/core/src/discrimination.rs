//! Optimal discrimination of two pure states with priors `(p1, p2)` and
//! overlap modulus `|β|`.
//!
//! Unambiguous discrimination succeeds with the Jaeger–Shimony probability
//!
//! ```text
//! p_s = 1 − 2√(p1p2)|β|            if |β| ≤ min{√(p1/p2), √(p2/p1)}
//! p_s = (1 − |β|²) max{p1, p2}     otherwise
//! ```
//!
//! and minimum-error discrimination fails with the Helstrom probability
//! `p_e = (1 − √(1 − 4p1p2|β|²))/2`. The `*_of_gamma` functions evaluate both
//! on the `|γ|`-decomposition of `diag(λ1, 1−λ1)` in closed form.

use crate::decomposition::{
    decomposition_overlap, decomposition_probabilities, DecompositionParameter,
};
use crate::tol;
use crate::{Error, Result};

/// Which states of the pair an optimal unambiguous measurement can identify.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DiscriminationRegime {
    BothConclusive,
    OnlyState1,
    OnlyState2,
}

impl DiscriminationRegime {
    pub fn as_str(&self) -> &'static str {
        match self {
            DiscriminationRegime::BothConclusive => "BothConclusive",
            DiscriminationRegime::OnlyState1 => "OnlyState1",
            DiscriminationRegime::OnlyState2 => "OnlyState2",
        }
    }
}

impl std::fmt::Display for DiscriminationRegime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscriminationMetrics {
    pub p_success: f64,
    pub p_error_min: f64,
    pub regime: DiscriminationRegime,
}

/// `min{√(p1/p2), √(p2/p1)}`.
pub fn regime_threshold(p1: f64, p2: f64) -> f64 {
    if p1 == p2 {
        return 1.0;
    }
    let (lo, hi) = if p1 < p2 { (p1, p2) } else { (p2, p1) };
    (lo / hi).sqrt()
}

fn check_overlap(beta_mod: f64) -> Result<f64> {
    if !(0.0..=1.0 + tol::PROBABILITY_SUM).contains(&beta_mod) {
        return Err(Error::out_of_range("|beta|", beta_mod, 0.0, 1.0));
    }
    Ok(beta_mod.min(1.0))
}

/// Regime of the optimal unambiguous measurement. The threshold itself
/// belongs to [`DiscriminationRegime::BothConclusive`].
pub fn classify_regime(p1: f64, p2: f64, beta_mod: f64) -> Result<DiscriminationRegime> {
    tol::check_priors(p1, p2)?;
    let beta_mod = check_overlap(beta_mod)?;
    Ok(regime_unchecked(p1, p2, beta_mod))
}

fn regime_unchecked(p1: f64, p2: f64, beta_mod: f64) -> DiscriminationRegime {
    if beta_mod <= regime_threshold(p1, p2) || p1 == p2 {
        DiscriminationRegime::BothConclusive
    } else if p1 > p2 {
        DiscriminationRegime::OnlyState1
    } else {
        DiscriminationRegime::OnlyState2
    }
}

/// Optimal unambiguous success probability.
pub fn jaeger_shimony_ps(p1: f64, p2: f64, beta_mod: f64) -> Result<f64> {
    tol::check_priors(p1, p2)?;
    let beta_mod = check_overlap(beta_mod)?;
    let ps = match regime_unchecked(p1, p2, beta_mod) {
        DiscriminationRegime::BothConclusive => 1.0 - 2.0 * (p1 * p2).sqrt() * beta_mod,
        _ => (1.0 - beta_mod * beta_mod) * p1.max(p2),
    };
    tol::clamp_probability(ps)
}

/// Helstrom minimum error probability.
pub fn helstrom_pe(p1: f64, p2: f64, beta_mod: f64) -> Result<f64> {
    tol::check_priors(p1, p2)?;
    let beta_mod = check_overlap(beta_mod)?;
    helstrom_from_radicand(1.0 - 4.0 * p1 * p2 * beta_mod * beta_mod)
}

fn helstrom_from_radicand(radicand: f64) -> Result<f64> {
    if radicand < -tol::ROUND_TRIP {
        return Err(Error::InconsistentInputs(format!(
            "Helstrom radicand {radicand} is negative"
        )));
    }
    tol::clamp_probability(0.5 * (1.0 - radicand.max(0.0).sqrt()))
}

/// Both figures of merit at once.
pub fn metrics(p1: f64, p2: f64, beta_mod: f64) -> Result<DiscriminationMetrics> {
    Ok(DiscriminationMetrics {
        p_success: jaeger_shimony_ps(p1, p2, beta_mod)?,
        p_error_min: helstrom_pe(p1, p2, beta_mod)?,
        regime: classify_regime(p1, p2, beta_mod)?,
    })
}

/// Priors and overlap modulus of the `|γ|`-decomposition.
fn gamma_inputs(lambda1: f64, gamma_mod: f64) -> Result<(f64, f64, f64)> {
    let (p1, p2) = decomposition_probabilities(lambda1, gamma_mod)?;
    let beta = decomposition_overlap(lambda1, DecompositionParameter::new(gamma_mod, 0.0)?)?.norm();
    Ok((p1, p2, beta))
}

/// Regime of the `|γ|`-decomposition of `diag(λ1, 1−λ1)`.
pub fn regime_of_gamma(lambda1: f64, gamma_mod: f64) -> Result<DiscriminationRegime> {
    let (p1, p2, beta) = gamma_inputs(lambda1, gamma_mod)?;
    Ok(regime_unchecked(p1, p2, beta.min(1.0)))
}

/// Optimal unambiguous success probability for the `|γ|`-decomposition,
/// written directly in `(λ1, |γ|)`.
pub fn ps_of_gamma(lambda1: f64, gamma_mod: f64) -> Result<f64> {
    let (p1, p2, beta) = gamma_inputs(lambda1, gamma_mod)?;
    let l2 = 1.0 - lambda1;
    let g2 = gamma_mod * gamma_mod;
    let den = lambda1 + (l2 - lambda1) * g2;
    let ps = match regime_unchecked(p1, p2, beta.min(1.0)) {
        DiscriminationRegime::BothConclusive => {
            1.0 - 2.0
                * (lambda1 - l2).abs()
                * gamma_mod
                * (lambda1 * l2 * (1.0 - g2)).max(0.0).sqrt()
                / den
        }
        _ => {
            let state_den = lambda1 * lambda1 + (l2 - lambda1) * g2;
            (1.0 - (lambda1 - l2).powi(2) * g2 * (1.0 - g2) / state_den)
                * (lambda1 * l2).max(state_den)
                / den
        }
    };
    tol::clamp_probability(ps)
}

/// Helstrom error probability for the `|γ|`-decomposition, written directly
/// in `(λ1, |γ|)`.
pub fn pe_of_gamma(lambda1: f64, gamma_mod: f64) -> Result<f64> {
    // validates the inputs and the degenerate endpoints
    decomposition_probabilities(lambda1, gamma_mod)?;
    let l2 = 1.0 - lambda1;
    let g2 = gamma_mod * gamma_mod;
    let den = lambda1 + (l2 - lambda1) * g2;
    let ratio = lambda1 * l2 * (lambda1 - l2).powi(2) * g2 * (1.0 - g2) / (den * den);
    helstrom_from_radicand(1.0 - 4.0 * ratio)
}
