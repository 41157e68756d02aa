//! Polarization/path circuit for optimal unambiguous discrimination.
//!
//! A single photon carries the information state in its polarization and
//! travels on four distinguishable paths `1, 2, 2′, 2″`. The circuit is
//!
//! ```text
//! PBS1(1→2) → WP1 on 1 (φ), WP2 on 2 (φ′) → PBS2(1→2′) → PBS3(2′↔2)
//!          → WP3 on 2 (ξ) → PBS4(2→2″)
//! ```
//!
//! after which a click on path 2″ is PD(1) ("state 1"), on path 2 PD(2)
//! ("state 2"), on path 1 the inconclusive detector and on path 2′ a leak
//! that vanishes at `φ′ = ±π/2`.
//!
//! Element conventions:
//!
//! - PBS between paths `a` and `b`: `|h⟩` stays on its path, `|v⟩` swaps
//!   paths and picks up a factor `i`.
//! - [`apply_wp`] is the rotation `[[cos θ, −sin θ], [sin θ, cos θ]]` on
//!   `(h, v)`. WP1 is that rotation at `θ = φ`; WP2 at `θ = φ′ + π`, i.e.
//!   `[[−cos φ′, sin φ′], [−sin φ′, −cos φ′]]`, which sends
//!   `|v⟩ → sin φ′|h⟩ − cos φ′|v⟩`.
//! - WP3 is a retarder `diag(1, ∓i)` (sign following `sin φ′`) followed by
//!   the rotation at `π/2 − ξ`; it sends `cos ξ|h⟩ ± i sin ξ|v⟩ → |v⟩` and
//!   the orthogonal state to `|h⟩` up to phase.

mod analysis;
mod monte_carlo;

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::qcore::{Basis, PureState};
use crate::tol;
use crate::{Error, Result};

pub(crate) use analysis::q_values;
pub use analysis::{
    eta_pair, grid_search_x, optimal_eta, optimal_x, optimal_xi, orthogonality_phi, ps_max,
    success_probability_x, EtaPair,
};
pub use monte_carlo::{monte_carlo, monte_carlo_with, MonteCarloReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PathLabel {
    P1,
    P2,
    P2Prime,
    P2DoublePrime,
}

impl PathLabel {
    pub const ALL: [PathLabel; 4] = [
        PathLabel::P1,
        PathLabel::P2,
        PathLabel::P2Prime,
        PathLabel::P2DoublePrime,
    ];

    fn index(self) -> usize {
        match self {
            PathLabel::P1 => 0,
            PathLabel::P2 => 1,
            PathLabel::P2Prime => 2,
            PathLabel::P2DoublePrime => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarization {
    H,
    V,
}

/// Which of the two input states was prepared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Prepared {
    State1,
    State2,
}

/// Photon state over path ⊗ polarization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircuitState {
    amps: [Complex64; 8],
}

impl CircuitState {
    fn slot(path: PathLabel, pol: Polarization) -> usize {
        2 * path.index() + matches!(pol, Polarization::V) as usize
    }

    /// Put a polarization state on one path.
    pub fn on_path(pol: &PureState, path: PathLabel) -> Result<Self> {
        if pol.basis() != Basis::Polarization {
            return Err(Error::BasisMismatch(Basis::Polarization, pol.basis()));
        }
        let mut amps = [Complex64::new(0.0, 0.0); 8];
        amps[Self::slot(path, Polarization::H)] = pol.amp0();
        amps[Self::slot(path, Polarization::V)] = pol.amp1();
        Ok(Self { amps })
    }

    pub fn amp(&self, path: PathLabel, pol: Polarization) -> Complex64 {
        self.amps[Self::slot(path, pol)]
    }

    pub fn amps(&self) -> &[Complex64; 8] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn path_probability(&self, path: PathLabel) -> f64 {
        self.amp(path, Polarization::H).norm_sqr() + self.amp(path, Polarization::V).norm_sqr()
    }

    /// Unnormalized `(h, v)` amplitudes on `path`.
    pub fn path_amps(&self, path: PathLabel) -> [Complex64; 2] {
        [
            self.amp(path, Polarization::H),
            self.amp(path, Polarization::V),
        ]
    }

    /// Largest amplitude difference to `other`.
    pub fn max_abs_diff(&self, other: &CircuitState) -> f64 {
        self.amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Circuit geometry.
///
/// `alpha` is the angle between the two input polarizations, `x` the angle
/// of state 1 above `|h⟩`, `phi`/`varphi` the WP1/WP2 angles and `xi` the
/// orientation of `η1` that WP3 rotates onto `|v⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SetupConfig {
    pub alpha: f64,
    pub x: f64,
    pub phi: f64,
    pub varphi: f64,
    pub xi: f64,
}

impl SetupConfig {
    /// Requires `0 ≤ x ≤ α ≤ π/2`.
    pub fn new(alpha: f64, x: f64, phi: f64, varphi: f64, xi: f64) -> Result<Self> {
        check_geometry(alpha, x)?;
        if alpha > FRAC_PI_2 + tol::INVARIANT {
            return Err(Error::out_of_range("alpha", alpha, 0.0, FRAC_PI_2));
        }
        for (name, v) in [("phi", phi), ("varphi", varphi), ("xi", xi)] {
            if !v.is_finite() {
                return Err(Error::out_of_range(name, v, f64::MIN, f64::MAX));
            }
        }
        Ok(Self {
            alpha,
            x: x.clamp(0.0, alpha),
            phi,
            varphi,
            xi,
        })
    }

    /// Geometry at a given `x`: `φ` from the η-orthogonality condition and
    /// `ξ` read off the resulting `η` pair.
    pub fn with_x(alpha: f64, x: f64, varphi: f64) -> Result<Self> {
        let phi = orthogonality_phi(alpha, x, varphi)?;
        let mut cfg = Self::new(alpha, x, phi, varphi, 0.0)?;
        cfg.xi = analysis::eta_orientation(&cfg);
        Ok(cfg)
    }

    /// Optimal geometry for priors `(p1, 1 − p1)`.
    pub fn optimal(alpha: f64, p1: f64, varphi: f64) -> Result<Self> {
        tol::check_unit_interval("p1", p1)?;
        let p2 = 1.0 - p1;
        let x = optimal_x(alpha, p1, p2)?;
        let phi = orthogonality_phi(alpha, x, varphi)?;
        Self::new(alpha, x, phi, varphi, optimal_xi(alpha, p1, p2)?)
    }
}

pub(crate) fn check_geometry(alpha: f64, x: f64) -> Result<()> {
    if !alpha.is_finite() || alpha < 0.0 {
        return Err(Error::out_of_range("alpha", alpha, 0.0, PI));
    }
    if x.is_nan() || x < -tol::INVARIANT || x > alpha + tol::INVARIANT {
        return Err(Error::out_of_range("x", x, 0.0, alpha));
    }
    Ok(())
}

/// Input polarization of the prepared state.
pub fn input_polarization(alpha: f64, x: f64, which: Prepared) -> Result<PureState> {
    check_geometry(alpha, x)?;
    Ok(input_polarization_unchecked(alpha, x, which))
}

fn input_polarization_unchecked(alpha: f64, x: f64, which: Prepared) -> PureState {
    let (h, v) = match which {
        Prepared::State1 => (x.cos(), x.sin()),
        Prepared::State2 => ((alpha - x).cos(), -(alpha - x).sin()),
    };
    PureState::new_unchecked(
        Complex64::new(h, 0.0),
        Complex64::new(v, 0.0),
        Basis::Polarization,
    )
}

/// Prepared state entering on path 1.
pub fn input_state(alpha: f64, x: f64, which: Prepared) -> Result<CircuitState> {
    CircuitState::on_path(&input_polarization(alpha, x, which)?, PathLabel::P1)
}

/// Polarizing beam splitter coupling paths `a` and `b`.
pub fn apply_pbs(state: &CircuitState, a: PathLabel, b: PathLabel) -> Result<CircuitState> {
    if a == b {
        return Err(Error::InconsistentInputs(format!(
            "beam splitter ports coincide ({a:?})"
        )));
    }
    let i = Complex64::new(0.0, 1.0);
    let mut out = *state;
    let va = CircuitState::slot(a, Polarization::V);
    let vb = CircuitState::slot(b, Polarization::V);
    out.amps[vb] = i * state.amps[va];
    out.amps[va] = i * state.amps[vb];
    Ok(out)
}

/// Real polarization rotation by `angle` on one path.
pub fn apply_wp(state: &CircuitState, path: PathLabel, angle: f64) -> CircuitState {
    let (s, c) = angle.sin_cos();
    let mut out = *state;
    let h = CircuitState::slot(path, Polarization::H);
    let v = CircuitState::slot(path, Polarization::V);
    let (ah, av) = (state.amps[h], state.amps[v]);
    out.amps[h] = ah * c - av * s;
    out.amps[v] = ah * s + av * c;
    out
}

/// Phase `e^{i·phase}` on the `|v⟩` component of one path.
pub fn apply_retarder(state: &CircuitState, path: PathLabel, phase: f64) -> CircuitState {
    let mut out = *state;
    out.amps[CircuitState::slot(path, Polarization::V)] *= Complex64::from_polar(1.0, phase);
    out
}

/// Every intermediate state of the circuit up to the detection stage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainStages {
    pub input: CircuitState,
    pub after_pbs1: CircuitState,
    pub after_wps: CircuitState,
    pub after_pbs2: CircuitState,
    pub after_pbs3: CircuitState,
}

pub fn evolve_stages(config: &SetupConfig, which: Prepared) -> ChainStages {
    use PathLabel::*;
    let pol = input_polarization_unchecked(config.alpha, config.x, which);
    let input = CircuitState::on_path(&pol, P1).expect("polarization basis");
    let pbs = |s: &CircuitState, a, b| apply_pbs(s, a, b).expect("distinct ports");
    let after_pbs1 = pbs(&input, P1, P2);
    let after_wps = apply_wp(
        &apply_wp(&after_pbs1, P1, config.phi),
        P2,
        config.varphi + PI,
    );
    let after_pbs2 = pbs(&after_wps, P1, P2Prime);
    let after_pbs3 = pbs(&after_pbs2, P2, P2Prime);
    ChainStages {
        input,
        after_pbs1,
        after_wps,
        after_pbs2,
        after_pbs3,
    }
}

/// State in front of the detection stage.
pub fn evolve(config: &SetupConfig, which: Prepared) -> CircuitState {
    evolve_stages(config, which).after_pbs3
}

/// WP3 and PBS4 on path 2.
pub fn detection_stage(state: &CircuitState, config: &SetupConfig) -> CircuitState {
    let retard = if config.varphi.sin() < 0.0 {
        FRAC_PI_2
    } else {
        -FRAC_PI_2
    };
    let s = apply_retarder(state, PathLabel::P2, retard);
    let s = apply_wp(&s, PathLabel::P2, FRAC_PI_2 - config.xi);
    apply_pbs(&s, PathLabel::P2, PathLabel::P2DoublePrime).expect("distinct ports")
}

/// Outcome probabilities of the four detectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorDistribution {
    pub p_pd1: f64,
    pub p_pd2: f64,
    pub p_inconclusive: f64,
    pub p_leak: f64,
}

impl DetectorDistribution {
    pub fn total(&self) -> f64 {
        self.p_pd1 + self.p_pd2 + self.p_inconclusive + self.p_leak
    }

    /// Probabilities in sampling order: PD(1), PD(2), inconclusive, leak.
    pub fn as_array(&self) -> [f64; 4] {
        [self.p_pd1, self.p_pd2, self.p_inconclusive, self.p_leak]
    }
}

pub fn detection_distribution(config: &SetupConfig, which: Prepared) -> DetectorDistribution {
    let out = detection_stage(&evolve(config, which), config);
    DetectorDistribution {
        p_pd1: out.path_probability(PathLabel::P2DoublePrime),
        p_pd2: out.path_probability(PathLabel::P2),
        p_inconclusive: out.path_probability(PathLabel::P1),
        p_leak: out.path_probability(PathLabel::P2Prime),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, FRAC_PI_6};

    const I: Complex64 = Complex64::new(0.0, 1.0);

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn build(entries: &[(PathLabel, Polarization, Complex64)]) -> CircuitState {
        let mut amps = [c(0.0); 8];
        for &(p, pol, a) in entries {
            amps[CircuitState::slot(p, pol)] += a;
        }
        CircuitState { amps }
    }

    #[test]
    fn input_examples() {
        let s = input_state(1.0, 0.0, Prepared::State1).unwrap();
        assert_eq!(
            s,
            CircuitState::on_path(&PureState::h(), PathLabel::P1).unwrap()
        );

        let o = |alpha: f64, x: f64| {
            let a = input_polarization(alpha, x, Prepared::State1).unwrap();
            let b = input_polarization(alpha, x, Prepared::State2).unwrap();
            crate::qcore::inner_product(&a, &b).unwrap()
        };
        assert!((o(FRAC_PI_3, FRAC_PI_6) - c(0.5)).norm() < 1e-15);
        assert!((o(FRAC_PI_4, 0.1) - c(FRAC_PI_4.cos())).norm() < 1e-15);

        assert!(input_state(0.5, 0.6, Prepared::State1).is_err());
        assert!(input_state(0.5, -0.1, Prepared::State2).is_err());
    }

    #[test]
    fn pbs_examples() {
        use PathLabel::*;
        let v1 = CircuitState::on_path(&PureState::v(), P1).unwrap();
        let out = apply_pbs(&v1, P1, P2).unwrap();
        assert_eq!(out, build(&[(P2, Polarization::V, I)]));

        let h1 = CircuitState::on_path(&PureState::h(), P1).unwrap();
        assert_eq!(apply_pbs(&h1, P1, P2).unwrap(), h1);

        let r = std::f64::consts::FRAC_1_SQRT_2;
        let diag = CircuitState::on_path(
            &PureState::new(c(r), c(r), Basis::Polarization).unwrap(),
            P1,
        )
        .unwrap();
        let out = apply_pbs(&diag, P1, P2).unwrap();
        let expected = build(&[(P1, Polarization::H, c(r)), (P2, Polarization::V, I * r)]);
        assert!(out.max_abs_diff(&expected) < 1e-16);

        assert!(apply_pbs(&diag, P2, P2).is_err());
    }

    #[test]
    fn wp_examples() {
        use PathLabel::*;
        let h1 = CircuitState::on_path(&PureState::h(), P1).unwrap();
        assert_eq!(apply_wp(&h1, P1, 0.0), h1);

        let phi = 0.37;
        let out = apply_wp(&h1, P1, phi);
        let expected = build(&[
            (P1, Polarization::H, c(phi.cos())),
            (P1, Polarization::V, c(phi.sin())),
        ]);
        assert!(out.max_abs_diff(&expected) < 1e-16);
        // other paths untouched
        assert_eq!(apply_wp(&h1, P2, phi), h1);

        // WP2 convention: rotation at φ′ + π sends |v⟩ to sin φ′|h⟩ − cos φ′|v⟩.
        let varphi = 1.1;
        let v2 = CircuitState::on_path(&PureState::v(), P2).unwrap();
        let out = apply_wp(&v2, P2, varphi + PI);
        let expected = build(&[
            (P2, Polarization::H, c(varphi.sin())),
            (P2, Polarization::V, c(-varphi.cos())),
        ]);
        assert!(out.max_abs_diff(&expected) < 1e-15);
    }

    /// The intermediate kets of the chain, written out by hand.
    fn displayed_chain(cfg: &SetupConfig, which: Prepared) -> [CircuitState; 4] {
        use PathLabel::*;
        use Polarization::*;
        let (a, b, sign) = match which {
            Prepared::State1 => (cfg.x.cos(), cfg.x.sin(), 1.0),
            Prepared::State2 => ((cfg.alpha - cfg.x).cos(), (cfg.alpha - cfg.x).sin(), -1.0),
        };
        let (sp, cp) = cfg.phi.sin_cos();
        let (sv, cv) = cfg.varphi.sin_cos();
        let s = sign;
        let pbs1 = build(&[(P1, H, c(a)), (P2, V, I * (s * b))]);
        let wps = build(&[
            (P1, H, c(a * cp)),
            (P1, V, c(a * sp)),
            (P2, H, I * (s * b * sv)),
            (P2, V, I * (-s * b * cv)),
        ]);
        let pbs2 = build(&[
            (P1, H, c(a * cp)),
            (P2Prime, V, I * (a * sp)),
            (P2, H, I * (s * b * sv)),
            (P2, V, I * (-s * b * cv)),
        ]);
        // a cos φ|h⟩|1⟩ + s·i√q η|2⟩ + s·b cos φ′|v⟩|2′⟩ with
        // √q η = b sin φ′|h⟩ + s·i a sin φ|v⟩
        let pbs3 = build(&[
            (P1, H, c(a * cp)),
            (P2, H, I * (s * b * sv)),
            (P2, V, I * I * (a * sp)),
            (P2Prime, V, c(s * b * cv)),
        ]);
        [pbs1, wps, pbs2, pbs3]
    }

    #[test]
    fn chain_matches_displayed_kets() {
        for &(alpha, x, phi, varphi) in &[
            (FRAC_PI_3, 0.4, 0.3, 1.2),
            (FRAC_PI_4, 0.0, 0.9, FRAC_PI_2),
            (1.2, 1.2, -0.4, 2.5),
        ] {
            let cfg = SetupConfig::new(alpha, x, phi, varphi, 0.0).unwrap();
            for which in [Prepared::State1, Prepared::State2] {
                let st = evolve_stages(&cfg, which);
                let shown = displayed_chain(&cfg, which);
                let got = [st.after_pbs1, st.after_wps, st.after_pbs2, st.after_pbs3];
                for (g, e) in got.iter().zip(shown.iter()) {
                    assert!(g.max_abs_diff(e) < 1e-12, "{which:?} {g:?} vs {e:?}");
                    assert!((g.norm_sqr() - 1.0).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn evolve_examples() {
        // φ = φ′ = 0: nothing reaches path 2
        let cfg = SetupConfig::new(FRAC_PI_3, 0.5, 0.0, 0.0, 0.0).unwrap();
        for which in [Prepared::State1, Prepared::State2] {
            assert!(evolve(&cfg, which).path_probability(PathLabel::P2) < 1e-30);
        }
        // x = 0, state 1 is |h⟩: only h on path 1 and the φ branch
        let cfg = SetupConfig::new(FRAC_PI_3, 0.0, 0.7, 1.0, 0.0).unwrap();
        let s = evolve(&cfg, Prepared::State1);
        assert!((s.amp(PathLabel::P1, Polarization::H) - c(0.7f64.cos())).norm() < 1e-15);
        assert!(s.amp(PathLabel::P2Prime, Polarization::V).norm() < 1e-15);
        assert!(s.amp(PathLabel::P2, Polarization::H).norm() < 1e-15);
    }

    #[test]
    fn detection_at_optimum() {
        for &(alpha, p1) in &[
            (FRAC_PI_4, 0.6),
            (FRAC_PI_3, 0.1),
            (FRAC_PI_4, 0.8),
            (1.0, 0.5),
        ] {
            let cfg = SetupConfig::optimal(alpha, p1, FRAC_PI_2).unwrap();
            let d1 = detection_distribution(&cfg, Prepared::State1);
            let d2 = detection_distribution(&cfg, Prepared::State2);
            assert!(d1.p_pd2 < 1e-12 && d2.p_pd1 < 1e-12, "{d1:?} {d2:?}");
            assert!(d1.p_leak < 1e-12 && d2.p_leak < 1e-12);
            assert!((d1.total() - 1.0).abs() < 1e-12 && (d2.total() - 1.0).abs() < 1e-12);
            let weighted = p1 * d1.p_pd1 + (1.0 - p1) * d2.p_pd2;
            let best = ps_max(alpha, p1, 1.0 - p1, FRAC_PI_2).unwrap();
            assert!((weighted - best).abs() < 1e-12);
            let inconclusive = p1 * d1.p_inconclusive + (1.0 - p1) * d2.p_inconclusive;
            assert!((inconclusive - (1.0 - best)).abs() < 1e-12);
        }
    }

    #[test]
    fn detection_closed_forms_off_optimum() {
        let cfg = SetupConfig::new(1.1, 0.3, 0.5, 0.8, 0.2).unwrap();
        let d = detection_distribution(&cfg, Prepared::State1);
        let q1 = (0.3f64.cos() * 0.5f64.sin()).powi(2) + (0.3f64.sin() * 0.8f64.sin()).powi(2);
        assert!((d.p_pd1 + d.p_pd2 - q1).abs() < 1e-12);
        assert!((d.p_inconclusive - (0.3f64.cos() * 0.5f64.cos()).powi(2)).abs() < 1e-12);
        assert!((d.p_leak - (0.3f64.sin() * 0.8f64.cos()).powi(2)).abs() < 1e-12);
        assert!((d.total() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn negative_varphi_optimum_is_still_unambiguous() {
        let cfg = SetupConfig::optimal(FRAC_PI_4, 0.6, -FRAC_PI_2).unwrap();
        let d1 = detection_distribution(&cfg, Prepared::State1);
        let d2 = detection_distribution(&cfg, Prepared::State2);
        assert!(d1.p_pd2 < 1e-12 && d2.p_pd1 < 1e-12);
    }

    #[test]
    fn config_validation() {
        assert!(SetupConfig::new(2.0, 0.5, 0.0, 0.0, 0.0).is_err());
        assert!(SetupConfig::new(1.0, 1.5, 0.0, 0.0, 0.0).is_err());
        assert!(SetupConfig::new(1.0, 0.5, f64::NAN, 0.0, 0.0).is_err());
        assert!(SetupConfig::with_x(2.0, 1.0, FRAC_PI_2).is_err());
    }

    #[test]
    fn with_x_orientation_matches_optimal_xi() {
        for &(alpha, p1) in &[
            (FRAC_PI_4, 0.6),
            (FRAC_PI_3, 0.3),
            (FRAC_PI_3, 0.1),
            (FRAC_PI_4, 0.8),
        ] {
            let opt = SetupConfig::optimal(alpha, p1, FRAC_PI_2).unwrap();
            let derived = SetupConfig::with_x(alpha, opt.x, FRAC_PI_2).unwrap();
            assert!(
                (opt.xi - derived.xi).abs() < 1e-9,
                "{} vs {}",
                opt.xi,
                derived.xi
            );
            assert!((opt.phi - derived.phi).abs() < 1e-15);
        }
    }
}
