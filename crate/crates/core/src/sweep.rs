//! Parameter sweeps behind the figure-data commands.

use std::fmt;

use crate::decomposition::{
    decomposition_overlap, decomposition_probabilities, DecompositionParameter,
};
use crate::discrimination::{pe_of_gamma, ps_of_gamma, regime_of_gamma, DiscriminationRegime};
use crate::exec::Execution;
use crate::optics::{orthogonality_phi, success_probability_x, SetupConfig};
use crate::tol;
use crate::{Error, Result};

/// `steps` evenly spaced points from `start` to `stop` inclusive. The last
/// point is exactly `stop`.
pub fn linspace(start: f64, stop: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let last = (steps - 1) as f64;
            (0..steps)
                .map(|k| {
                    if k + 1 == steps {
                        stop
                    } else {
                        start + (stop - start) * (k as f64 / last)
                    }
                })
                .collect()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    GammaSq,
    X,
}

impl fmt::Display for SweepVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepVariable::GammaSq => "gamma_sq",
            SweepVariable::X => "x",
        })
    }
}

/// A one-dimensional sweep over `|γ|²` (at fixed `λ1`) or over `x` (at
/// fixed `α, p1, φ′`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    variable: SweepVariable,
    start: f64,
    stop: f64,
    steps: usize,
}

impl SweepSpec {
    /// `upper` is the top of the variable's domain: 1 for `|γ|²`, `α` for `x`.
    pub fn new(
        variable: SweepVariable,
        start: f64,
        stop: f64,
        steps: usize,
        upper: f64,
    ) -> Result<Self> {
        if steps < 2 {
            return Err(Error::out_of_range(
                "steps",
                steps as f64,
                2.0,
                f64::INFINITY,
            ));
        }
        if start.partial_cmp(&stop) != Some(std::cmp::Ordering::Less) {
            return Err(Error::InconsistentInputs(format!(
                "sweep start {start} must be below stop {stop}"
            )));
        }
        let name = match variable {
            SweepVariable::GammaSq => "gamma_sq",
            SweepVariable::X => "x",
        };
        for v in [start, stop] {
            if v < -tol::INVARIANT || v > upper + tol::INVARIANT {
                return Err(Error::out_of_range(name, v, 0.0, upper));
            }
        }
        Ok(Self {
            variable,
            start: start.max(0.0),
            stop: stop.min(upper),
            steps,
        })
    }

    /// Full `[0, 1]` sweep of `|γ|²`.
    pub fn gamma_sq(steps: usize) -> Result<Self> {
        Self::new(SweepVariable::GammaSq, 0.0, 1.0, steps, 1.0)
    }

    /// Full `[0, α]` sweep of `x`.
    pub fn x(alpha: f64, steps: usize) -> Result<Self> {
        if !(alpha > 0.0 && alpha < std::f64::consts::PI) {
            return Err(Error::out_of_range(
                "alpha",
                alpha,
                0.0,
                std::f64::consts::PI,
            ));
        }
        Self::new(SweepVariable::X, 0.0, alpha, steps, alpha)
    }

    pub fn variable(&self) -> SweepVariable {
        self.variable
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn stop(&self) -> f64 {
        self.stop
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn points(&self) -> Vec<f64> {
        linspace(self.start, self.stop, self.steps)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaSweepRow {
    pub gamma_sq: f64,
    pub p1: f64,
    pub beta_mod: f64,
    pub p_s: f64,
    pub p_e: f64,
}

/// Priors, overlap and figures of merit of the `|γ|`-decomposition of
/// `diag(λ1, 1−λ1)` along `spec`.
pub fn sweep_gamma(lambda1: f64, spec: &SweepSpec, exec: Execution) -> Result<Vec<GammaSweepRow>> {
    if spec.variable != SweepVariable::GammaSq {
        return Err(Error::InconsistentInputs(format!(
            "expected a gamma_sq sweep, got {}",
            spec.variable
        )));
    }
    tol::check_unit_interval("lambda1", lambda1)?;
    let points = spec.points();
    exec.map_collect(points.len(), |k| gamma_row(lambda1, points[k]))
        .into_iter()
        .collect()
}

fn gamma_row(lambda1: f64, gamma_sq: f64) -> Result<GammaSweepRow> {
    let gamma = DecompositionParameter::from_modulus_sq(gamma_sq, 0.0)?;
    let (p1, _) = decomposition_probabilities(lambda1, gamma.modulus())?;
    Ok(GammaSweepRow {
        gamma_sq,
        p1,
        beta_mod: decomposition_overlap(lambda1, gamma)?.norm(),
        p_s: ps_of_gamma(lambda1, gamma.modulus())?,
        p_e: pe_of_gamma(lambda1, gamma.modulus())?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionCell {
    pub gamma_sq: f64,
    pub lambda1: f64,
    pub regime: DiscriminationRegime,
    pub p_s: f64,
}

/// Regime and success probability over the `(|γ|², λ1)` plane, with
/// `|γ|² = i/resolution` for `i = 0..=resolution` and
/// `λ1 = j/resolution` for `j = 1..resolution`. The pure-state rows
/// `λ1 ∈ {0, 1}` are excluded. Rows are ordered by `λ1`, then `|γ|²`.
pub fn region_map(resolution: usize, exec: Execution) -> Result<Vec<RegionCell>> {
    if resolution < 10 {
        return Err(Error::out_of_range(
            "resolution",
            resolution as f64,
            10.0,
            f64::INFINITY,
        ));
    }
    let res = resolution as f64;
    let width = resolution + 1;
    let rows = resolution - 1;
    exec.map_collect(rows * width, |k| {
        let (j, i) = (k / width + 1, k % width);
        let gamma_sq = i as f64 / res;
        let lambda1 = j as f64 / res;
        let g = gamma_sq.sqrt();
        Ok(RegionCell {
            gamma_sq,
            lambda1,
            regime: regime_of_gamma(lambda1, g)?,
            p_s: ps_of_gamma(lambda1, g)?,
        })
    })
    .into_iter()
    .collect()
}

/// One point of a `p_s(x)` curve. Infeasible points, where no `φ` makes
/// the `η` states orthogonal, carry `None`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XSweepRow {
    pub x: f64,
    pub p_s: Option<f64>,
    pub q_s1: Option<f64>,
    pub q_s2: Option<f64>,
}

impl XSweepRow {
    pub fn feasible(&self) -> bool {
        self.p_s.is_some()
    }
}

/// `p_s(x)` and the path-2 probabilities `q_s1, q_s2` along `spec`.
pub fn sweep_x(
    alpha: f64,
    p1: f64,
    varphi: f64,
    spec: &SweepSpec,
    exec: Execution,
) -> Result<Vec<XSweepRow>> {
    if spec.variable != SweepVariable::X {
        return Err(Error::InconsistentInputs(format!(
            "expected an x sweep, got {}",
            spec.variable
        )));
    }
    tol::check_unit_interval("p1", p1)?;
    crate::optics::check_geometry(alpha, spec.stop)?;
    let points = spec.points();
    exec.map_collect(points.len(), |k| x_row(alpha, p1, varphi, points[k]))
        .into_iter()
        .collect()
}

fn x_row(alpha: f64, p1: f64, varphi: f64, x: f64) -> Result<XSweepRow> {
    let phi = match orthogonality_phi(alpha, x, varphi) {
        Ok(phi) => phi,
        Err(Error::InfeasibleGeometry { .. }) => {
            return Ok(XSweepRow {
                x,
                p_s: None,
                q_s1: None,
                q_s2: None,
            })
        }
        Err(e) => return Err(e),
    };
    let p_s = tol::clamp_probability(success_probability_x(alpha, x, varphi, p1, 1.0 - p1)?)?;
    let cfg = SetupConfig {
        alpha,
        x,
        phi,
        varphi,
        xi: 0.0,
    };
    let (q_s1, q_s2) = crate::optics::q_values(&cfg);
    Ok(XSweepRow {
        x,
        p_s: Some(p_s),
        q_s1: Some(tol::clamp_probability(q_s1)?),
        q_s2: Some(tol::clamp_probability(q_s2)?),
    })
}
