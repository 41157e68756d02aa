//! Closed-form analysis of the circuit: η-orthogonality, success
//! probability as a function of `x`, and the optimal geometry.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use super::SetupConfig;
use crate::discrimination::regime_threshold;
use crate::exec::Execution;
use crate::qcore::{Basis, PureState};
use crate::tol;
use crate::{Error, Result};

/// Path-2 polarization states and the probabilities of reaching path 2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaPair {
    pub eta1: PureState,
    pub eta2: PureState,
    pub q_s1: f64,
    pub q_s2: f64,
}

/// WP1 angle `φ ∈ [0, π/2]` that makes `η1 ⊥ η2`:
/// `sin²φ = tan x · tan(α−x) · sin²φ′`.
pub fn orthogonality_phi(alpha: f64, x: f64, varphi: f64) -> Result<f64> {
    super::check_geometry(alpha, x)?;
    let x = x.clamp(0.0, alpha);
    let s = varphi.sin();
    let rhs = if x == 0.0 || x == alpha {
        0.0
    } else {
        x.tan() * (alpha - x).tan() * s * s
    };
    if !(-tol::INVARIANT..=1.0 + tol::INVARIANT).contains(&rhs) {
        return Err(Error::InfeasibleGeometry { value: rhs });
    }
    Ok(rhs.clamp(0.0, 1.0).sqrt().asin())
}

/// `(q_s1, q_s2)` for the configured `φ`.
pub(crate) fn q_values(cfg: &SetupConfig) -> (f64, f64) {
    let (sp, sv) = (cfg.phi.sin(), cfg.varphi.sin());
    let (sx, cx) = cfg.x.sin_cos();
    let (sy, cy) = (cfg.alpha - cfg.x).sin_cos();
    (
        cx * cx * sp * sp + sx * sx * sv * sv,
        cy * cy * sp * sp + sy * sy * sv * sv,
    )
}

/// Normalized path-2 states `η1, η2` and `q_s1, q_s2`.
pub fn eta_pair(config: &SetupConfig) -> Result<EtaPair> {
    let (q_s1, q_s2) = q_values(config);
    if q_s1 < 1e-30 {
        return Err(Error::UndefinedEta { index: 1, q: q_s1 });
    }
    if q_s2 < 1e-30 {
        return Err(Error::UndefinedEta { index: 2, q: q_s2 });
    }
    let (sp, sv) = (config.phi.sin(), config.varphi.sin());
    let (sx, cx) = config.x.sin_cos();
    let (sy, cy) = (config.alpha - config.x).sin_cos();
    let (n1, n2) = (q_s1.sqrt(), q_s2.sqrt());
    Ok(EtaPair {
        eta1: PureState::new_unchecked(
            Complex64::new(sx * sv / n1, 0.0),
            Complex64::new(0.0, cx * sp / n1),
            Basis::Polarization,
        ),
        eta2: PureState::new_unchecked(
            Complex64::new(sy * sv / n2, 0.0),
            Complex64::new(0.0, -cy * sp / n2),
            Basis::Polarization,
        ),
        q_s1,
        q_s2,
    })
}

/// Orientation `ξ` of `η1` once the relative `i` on `|v⟩` is removed; read
/// off `η2` when `η1` is not populated.
pub(crate) fn eta_orientation(cfg: &SetupConfig) -> f64 {
    let (q1, q2) = q_values(cfg);
    let sp = cfg.phi.sin();
    let sv = cfg.varphi.sin().abs();
    if q1 > 1e-30 {
        (cfg.x.cos() * sp).atan2(cfg.x.sin() * sv)
    } else if q2 > 1e-30 {
        let y = cfg.alpha - cfg.x;
        (y.sin() * sv).atan2(y.cos() * sp)
    } else {
        0.0
    }
}

/// `p_s(x) = [p1 sin x / cos(α−x) + p2 sin(α−x) / cos x] sin α sin²φ′`,
/// valid where the orthogonality condition is feasible.
pub fn success_probability_x(alpha: f64, x: f64, varphi: f64, p1: f64, p2: f64) -> Result<f64> {
    tol::check_priors(p1, p2)?;
    orthogonality_phi(alpha, x, varphi)?;
    let x = x.clamp(0.0, alpha);
    let sv = varphi.sin();
    let value = (p1 * x.sin() / (alpha - x).cos() + p2 * (alpha - x).sin() / x.cos())
        * alpha.sin()
        * sv
        * sv;
    Ok(value)
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_nan() || alpha <= 0.0 || alpha > FRAC_PI_2 + tol::INVARIANT {
        return Err(Error::out_of_range("alpha", alpha, 0.0, FRAC_PI_2));
    }
    Ok(())
}

fn interior(alpha: f64, p1: f64, p2: f64) -> bool {
    alpha.cos() <= regime_threshold(p1, p2)
}

/// `x` maximizing `p_s(x)`.
///
/// Interior optimum `cos x = √p2 sin α / √(1 − 2√(p1p2) cos α)` when
/// `cos α ≤ min{√(p1/p2), √(p2/p1)}`; otherwise `x = 0` for `p1 < p2` and
/// `x = α` for `p1 > p2`.
pub fn optimal_x(alpha: f64, p1: f64, p2: f64) -> Result<f64> {
    tol::check_priors(p1, p2)?;
    check_alpha(alpha)?;
    let alpha = alpha.min(FRAC_PI_2);
    if interior(alpha, p1, p2) {
        let cos_x = p2.sqrt() * alpha.sin() / (1.0 - 2.0 * (p1 * p2).sqrt() * alpha.cos()).sqrt();
        Ok(cos_x.clamp(alpha.cos(), 1.0).acos().clamp(0.0, alpha))
    } else if p1 < p2 {
        Ok(0.0)
    } else {
        Ok(alpha)
    }
}

/// Largest achievable `p_s(x)`; at `φ′ = ±π/2` this is the Jaeger–Shimony
/// probability with `|β| = cos α`.
pub fn ps_max(alpha: f64, p1: f64, p2: f64, varphi: f64) -> Result<f64> {
    tol::check_priors(p1, p2)?;
    if alpha.is_nan() || !(0.0..=FRAC_PI_2 + tol::INVARIANT).contains(&alpha) {
        return Err(Error::out_of_range("alpha", alpha, 0.0, FRAC_PI_2));
    }
    let ca = alpha.min(FRAC_PI_2).cos();
    let sv = varphi.sin();
    let base = if ca <= regime_threshold(p1, p2) {
        1.0 - 2.0 * (p1 * p2).sqrt() * ca
    } else {
        (1.0 - ca * ca) * p1.max(p2)
    };
    tol::clamp_probability(base * sv * sv)
}

/// `ξ` of the optimal `η` pair: `cos ξ = √(p1 − √(p1p2) cos α) / √(1 − 2√(p1p2) cos α)`
/// in the interior regime, `π/2` (η1 ∝ |v⟩) for `p1 < p2` and `0`
/// (η1 = |h⟩) for `p1 > p2` at the boundary.
pub fn optimal_xi(alpha: f64, p1: f64, p2: f64) -> Result<f64> {
    tol::check_priors(p1, p2)?;
    check_alpha(alpha)?;
    if interior(alpha, p1, p2) {
        let r = (p1 * p2).sqrt() * alpha.cos();
        let cos_xi = ((p1 - r).max(0.0) / (1.0 - 2.0 * r)).sqrt();
        Ok(cos_xi.clamp(0.0, 1.0).acos())
    } else if p1 < p2 {
        Ok(FRAC_PI_2)
    } else {
        Ok(0.0)
    }
}

/// Optimal `η` pair at `φ′ = π/2`, in the real-rotation form
/// `η1 = cos ξ|h⟩ + sin ξ|v⟩`, `η2 = −sin ξ|h⟩ + cos ξ|v⟩` (interior), or
/// `(i|v⟩, |h⟩)` / `(|h⟩, −i|v⟩)` at the boundary.
pub fn optimal_eta(alpha: f64, p1: f64, p2: f64) -> Result<EtaPair> {
    let x = optimal_x(alpha, p1, p2)?;
    let xi = optimal_xi(alpha, p1, p2)?;
    let sa = alpha.sin();
    let q_s1 = x.sin() * sa / (alpha - x).cos();
    let q_s2 = (alpha - x).sin() * sa / x.cos();
    let re = |v: f64| Complex64::new(v, 0.0);
    let (eta1, eta2) = if interior(alpha, p1, p2) {
        let (s, c) = xi.sin_cos();
        (
            PureState::new_unchecked(re(c), re(s), Basis::Polarization),
            PureState::new_unchecked(re(-s), re(c), Basis::Polarization),
        )
    } else if p1 < p2 {
        (
            PureState::new_unchecked(re(0.0), Complex64::new(0.0, 1.0), Basis::Polarization),
            PureState::h(),
        )
    } else {
        (
            PureState::h(),
            PureState::new_unchecked(re(0.0), Complex64::new(0.0, -1.0), Basis::Polarization),
        )
    };
    Ok(EtaPair {
        eta1,
        eta2,
        q_s1,
        q_s2,
    })
}

const GRID_CHUNK: usize = 4096;

/// Brute-force maximum of `p_s(x)` over `points` equally spaced `x ∈ [0, α]`.
///
/// Returns `(x, p_s)` of the first grid point attaining the maximum. Sines
/// and cosines are advanced by an angle-addition recurrence re-anchored
/// every 4096 points.
pub fn grid_search_x(
    alpha: f64,
    p1: f64,
    p2: f64,
    varphi: f64,
    points: usize,
    exec: Execution,
) -> Result<(f64, f64)> {
    tol::check_priors(p1, p2)?;
    check_alpha(alpha)?;
    if points < 2 {
        return Err(Error::out_of_range(
            "points",
            points as f64,
            2.0,
            f64::INFINITY,
        ));
    }
    let alpha = alpha.min(FRAC_PI_2);
    let (sa, ca) = alpha.sin_cos();
    let sv = varphi.sin();
    let scale = sa * sv * sv;
    let last = (points - 1) as f64;
    let step = alpha / last;
    let (sd, cd) = step.sin_cos();
    let chunks = points.div_ceil(GRID_CHUNK);

    let best = exec.map_reduce(
        chunks,
        (usize::MAX, f64::NEG_INFINITY),
        |chunk| {
            let start = chunk * GRID_CHUNK;
            let end = (start + GRID_CHUNK).min(points);
            let (mut s, mut c) = (alpha * start as f64 / last).sin_cos();
            let mut best = (usize::MAX, f64::NEG_INFINITY);
            for k in start..end {
                let sy = sa * c - ca * s;
                let cy = ca * c + sa * s;
                let value = (p1 * s / cy + p2 * sy / c) * scale;
                if value > best.1 {
                    best = (k, value);
                }
                (s, c) = (s * cd + c * sd, c * cd - s * sd);
            }
            best
        },
        |a, b| {
            if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) {
                b
            } else {
                a
            }
        },
    );
    Ok((alpha * best.0 as f64 / last, best.1))
}

#[cfg(test)]
mod tests {
    use super::super::{evolve, PathLabel, Prepared};
    use super::*;
    use crate::discrimination::jaeger_shimony_ps;
    use crate::qcore::inner_product;
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, FRAC_PI_6};

    #[test]
    fn phi_examples() {
        assert_eq!(orthogonality_phi(FRAC_PI_3, 0.0, FRAC_PI_2).unwrap(), 0.0);

        for alpha in [0.3, FRAC_PI_3, 1.4] {
            let phi = orthogonality_phi(alpha, alpha / 2.0, FRAC_PI_2).unwrap();
            assert!((phi - (alpha / 2.0).tan().asin()).abs() < 1e-12);
            let cfg = SetupConfig::new(alpha, alpha / 2.0, phi, FRAC_PI_2, 0.0).unwrap();
            let eta = eta_pair(&cfg).unwrap();
            assert!(inner_product(&eta.eta1, &eta.eta2).unwrap().norm() < 1e-12);
        }

        let phi = orthogonality_phi(FRAC_PI_3, FRAC_PI_6, FRAC_PI_4).unwrap();
        assert!((phi - (FRAC_PI_6.tan() * 0.5f64.sqrt()).asin()).abs() < 1e-12);
        let cfg = SetupConfig::new(FRAC_PI_3, FRAC_PI_6, phi, FRAC_PI_4, 0.0).unwrap();
        let eta = eta_pair(&cfg).unwrap();
        assert!(inner_product(&eta.eta1, &eta.eta2).unwrap().norm() < 1e-12);
    }

    #[test]
    fn phi_infeasible_and_invalid() {
        assert!(matches!(
            orthogonality_phi(2.0, 1.0, FRAC_PI_2),
            Err(Error::InfeasibleGeometry { .. })
        ));
        assert!(matches!(
            orthogonality_phi(2.0, 0.1, FRAC_PI_2),
            Err(Error::InfeasibleGeometry { .. })
        ));
        assert!(matches!(
            orthogonality_phi(1.0, 1.2, FRAC_PI_2),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn eta_examples() {
        let cfg = SetupConfig::new(1.0, 0.4, FRAC_PI_2, FRAC_PI_2, 0.0).unwrap();
        let eta = eta_pair(&cfg).unwrap();
        assert!((eta.q_s1 - 1.0).abs() < 1e-15);
        assert!((eta.eta1.amp0() - Complex64::new(0.4f64.sin(), 0.0)).norm() < 1e-15);
        assert!((eta.eta1.amp1() - Complex64::new(0.0, 0.4f64.cos())).norm() < 1e-15);

        let zero = SetupConfig::new(1.0, 0.0, 0.0, FRAC_PI_2, 0.0).unwrap();
        assert_eq!(
            eta_pair(&zero).unwrap_err(),
            Error::UndefinedEta { index: 1, q: 0.0 }
        );
    }

    #[test]
    fn eta_matches_evolved_path2_amplitudes() {
        let alpha = FRAC_PI_3;
        let x = FRAC_PI_4;
        let cfg = SetupConfig::with_x(alpha, x, FRAC_PI_2).unwrap();
        let eta = eta_pair(&cfg).unwrap();
        let i = Complex64::new(0.0, 1.0);
        let s1 = evolve(&cfg, Prepared::State1);
        let s2 = evolve(&cfg, Prepared::State2);
        assert!((s1.path_probability(PathLabel::P2) - eta.q_s1).abs() < 1e-12);
        assert!((s2.path_probability(PathLabel::P2) - eta.q_s2).abs() < 1e-12);
        let a1 = s1.path_amps(PathLabel::P2);
        let a2 = s2.path_amps(PathLabel::P2);
        for k in 0..2 {
            assert!((a1[k] - i * eta.q_s1.sqrt() * eta.eta1.amps()[k]).norm() < 1e-12);
            assert!((a2[k] + i * eta.q_s2.sqrt() * eta.eta2.amps()[k]).norm() < 1e-12);
        }
        // at x = α/2 with φ′ = π/2, q_s1 = q_s2 = sin x sin α / cos(α − x)
        let sym = SetupConfig::with_x(alpha, alpha / 2.0, FRAC_PI_2).unwrap();
        let e = eta_pair(&sym).unwrap();
        let expected = (alpha / 2.0).sin() * alpha.sin() / (alpha / 2.0).cos();
        assert!((e.q_s1 - expected).abs() < 1e-12 && (e.q_s2 - expected).abs() < 1e-12);
    }

    #[test]
    fn success_probability_examples() {
        // x = 0 leaves only the β2 term, p2 sin²α sin²φ′
        let v = success_probability_x(FRAC_PI_3, 0.0, 1.0, 0.3, 0.7).unwrap();
        assert!((v - 0.7 * FRAC_PI_3.sin().powi(2) * 1.0f64.sin().powi(2)).abs() < 1e-15);

        let a = success_probability_x(FRAC_PI_3, FRAC_PI_6, FRAC_PI_2, 0.1, 0.9).unwrap();
        let b = success_probability_x(FRAC_PI_3, FRAC_PI_6, FRAC_PI_2, 0.7, 0.3).unwrap();
        assert!((a - b).abs() < 1e-15);

        let v = success_probability_x(FRAC_PI_4, 0.631, FRAC_PI_2, 0.6, 0.4).unwrap();
        assert!((v - 0.30718).abs() < 1e-4);

        assert!(success_probability_x(2.0, 1.0, FRAC_PI_2, 0.5, 0.5).is_err());
    }

    #[test]
    fn success_probability_equals_weighted_q() {
        for &(alpha, x, varphi, p1) in &[
            (1.0, 0.3, 1.2, 0.3),
            (FRAC_PI_4, 0.6, FRAC_PI_2, 0.6),
            (1.5, 1.49, 0.4, 0.9),
        ] {
            let cfg = SetupConfig::with_x(alpha, x, varphi).unwrap();
            let eta = eta_pair(&cfg).unwrap();
            let v = success_probability_x(alpha, x, varphi, p1, 1.0 - p1).unwrap();
            assert!((v - (p1 * eta.q_s1 + (1.0 - p1) * eta.q_s2)).abs() < 1e-12);
        }
    }

    #[test]
    fn optimal_x_examples() {
        for alpha in [0.2, FRAC_PI_4, 1.3] {
            assert!((optimal_x(alpha, 0.5, 0.5).unwrap() - alpha / 2.0).abs() < 1e-12);
        }
        assert_eq!(optimal_x(FRAC_PI_3, 0.1, 0.9).unwrap(), 0.0);
        assert_eq!(optimal_x(FRAC_PI_4, 0.8, 0.2).unwrap(), FRAC_PI_4);

        let x = optimal_x(FRAC_PI_4, 0.6, 0.4).unwrap();
        let cos_x =
            0.4f64.sqrt() * FRAC_PI_4.sin() / (1.0 - 2.0 * 0.24f64.sqrt() * FRAC_PI_4.cos()).sqrt();
        assert!((x.cos() - cos_x).abs() < 1e-12);

        for &(alpha, p1) in &[
            (FRAC_PI_3, 0.1),
            (FRAC_PI_4, 0.6),
            (FRAC_PI_3, 0.3),
            (FRAC_PI_4, 0.8),
        ] {
            let x = optimal_x(alpha, p1, 1.0 - p1).unwrap();
            let (gx, gv) = grid_search_x(
                alpha,
                p1,
                1.0 - p1,
                FRAC_PI_2,
                1_000_001,
                Execution::default(),
            )
            .unwrap();
            let v = success_probability_x(alpha, x, FRAC_PI_2, p1, 1.0 - p1).unwrap();
            assert!((x - gx).abs() < 1e-6, "{x} vs {gx}");
            assert!(v >= gv - 1e-9);
        }

        assert!(optimal_x(0.0, 0.5, 0.5).is_err());
        assert!(optimal_x(2.0, 0.5, 0.5).is_err());
    }

    #[test]
    fn ps_max_examples() {
        assert!((ps_max(FRAC_PI_2, 0.3, 0.7, FRAC_PI_2).unwrap() - 1.0).abs() < 1e-15);
        assert!((ps_max(FRAC_PI_3, 0.1, 0.9, FRAC_PI_2).unwrap() - 0.675).abs() < 1e-12);
        let v = ps_max(FRAC_PI_4, 0.6, 0.4, FRAC_PI_2).unwrap();
        assert!((v - (1.0 - 2.0 * 0.24f64.sqrt() * FRAC_PI_4.cos())).abs() < 1e-15);
        assert!((v - 0.30718).abs() < 1e-4);
        for &(alpha, p1) in &[(FRAC_PI_3, 0.1), (FRAC_PI_4, 0.6), (0.2, 0.45)] {
            let js = jaeger_shimony_ps(p1, 1.0 - p1, alpha.cos()).unwrap();
            assert!((ps_max(alpha, p1, 1.0 - p1, FRAC_PI_2).unwrap() - js).abs() < 1e-12);
        }
        // sin²φ′ scaling
        let half = ps_max(FRAC_PI_4, 0.6, 0.4, FRAC_PI_4).unwrap();
        assert!((half - 0.5 * v).abs() < 1e-15);
    }

    #[test]
    fn optimal_eta_examples() {
        for alpha in [0.4, 1.0, 1.5] {
            let xi = optimal_xi(alpha, 0.5, 0.5).unwrap();
            assert!((xi - FRAC_PI_4).abs() < 1e-12);
        }
        let e = optimal_eta(FRAC_PI_3, 0.1, 0.9).unwrap();
        assert_eq!(
            e.eta1.amps(),
            [Complex64::new(0.0, 0.0), Complex64::new(0.0, 1.0)]
        );
        assert_eq!(e.eta2, PureState::h());

        let e = optimal_eta(FRAC_PI_4, 0.8, 0.2).unwrap();
        assert_eq!(e.eta1, PureState::h());
        assert_eq!(
            e.eta2.amps(),
            [Complex64::new(0.0, 0.0), Complex64::new(0.0, -1.0)]
        );

        // interior: moduli of the circuit η1 at the optimum follow cos ξ, sin ξ
        let (alpha, p1) = (FRAC_PI_4, 0.6);
        let e = optimal_eta(alpha, p1, 1.0 - p1).unwrap();
        assert!(inner_product(&e.eta1, &e.eta2).unwrap().norm() < 1e-12);
        let cfg =
            SetupConfig::with_x(alpha, optimal_x(alpha, p1, 1.0 - p1).unwrap(), FRAC_PI_2).unwrap();
        let circuit = eta_pair(&cfg).unwrap();
        assert!(inner_product(&circuit.eta1, &circuit.eta2).unwrap().norm() < 1e-12);
        assert!((circuit.eta1.amp0().norm() - e.eta1.amp0().norm()).abs() < 1e-9);
        assert!((circuit.eta1.amp1().norm() - e.eta1.amp1().norm()).abs() < 1e-9);
        assert!((circuit.q_s1 - e.q_s1).abs() < 1e-12 && (circuit.q_s2 - e.q_s2).abs() < 1e-12);
    }

    #[test]
    fn grid_search_strategies_agree() {
        let a = grid_search_x(
            FRAC_PI_4,
            0.6,
            0.4,
            FRAC_PI_2,
            100_003,
            Execution::Sequential,
        )
        .unwrap();
        let b =
            grid_search_x(FRAC_PI_4, 0.6, 0.4, FRAC_PI_2, 100_003, Execution::Parallel).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn grid_recurrence_tracks_direct_evaluation() {
        let (alpha, p1) = (1.2, 0.35);
        let (x, v) =
            grid_search_x(alpha, p1, 1.0 - p1, 1.0, 10_001, Execution::Sequential).unwrap();
        let direct = success_probability_x(alpha, x, 1.0, p1, 1.0 - p1).unwrap();
        assert!((v - direct).abs() < 1e-12);
    }
}
