//! Two-state pure decompositions `ρ = p1|β1⟩⟨β1| + p2|β2⟩⟨β2|` of a
//! rank-two mixed state.
//!
//! Every such decomposition (with `λ1 ≠ λ2`) is fixed by the complex
//! parameter `γ = ⟨λ1|β1⟩ = |γ|e^{iθ}`, with the `|λ2⟩` component of `β1`
//! taken real and nonnegative:
//!
//! ```text
//! |β1⟩ = γ|λ1⟩ + √(1−|γ|²)|λ2⟩
//! |β2⟩ = (λ1√(1−|γ|²)|λ1⟩ − λ2γ*|λ2⟩) / √(λ1² + (λ2−λ1)|γ|²)
//! p1   = λ1λ2 / (λ1 + (λ2−λ1)|γ|²)
//! ⟨β1|β2⟩ = (λ1−λ2)|γ|√(1−|γ|²) e^{−iθ} / √(λ1² + (λ2−λ1)|γ|²)
//! ```
//!
//! `|γ| ∈ {0, 1}` recovers the spectral decomposition and `|γ|² = λ1` the
//! balanced one (`p1 = p2 = 1/2`), whose states have the largest overlap
//! modulus `|λ1 − λ2|`. States are returned in the eigenbasis; use
//! [`Decomposition::to_ambient`] to express them in the basis of the
//! eigenvectors.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::qcore::{Basis, DensityMatrix2, PureState, RankTwoMixedState};
use crate::tol;
use crate::{Error, Result};

/// `γ = |γ| e^{iθ}` with `|γ| ∈ [0, 1]` and `θ ∈ [0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecompositionParameter {
    modulus: f64,
    phase: f64,
}

impl DecompositionParameter {
    /// The phase is wrapped into `[0, 2π)`; it is stored as 0 when the
    /// modulus vanishes.
    pub fn new(modulus: f64, phase: f64) -> Result<Self> {
        tol::check_unit_interval("|gamma|", modulus)?;
        if !phase.is_finite() {
            return Err(Error::out_of_range("theta", phase, f64::MIN, f64::MAX));
        }
        let phase = if modulus == 0.0 {
            0.0
        } else {
            wrap_phase(phase)
        };
        Ok(Self { modulus, phase })
    }

    /// Parametrize by `|γ|²`.
    pub fn from_modulus_sq(modulus_sq: f64, phase: f64) -> Result<Self> {
        tol::check_unit_interval("|gamma|^2", modulus_sq)?;
        Self::new(modulus_sq.sqrt(), phase)
    }

    pub fn modulus(&self) -> f64 {
        self.modulus
    }

    pub fn modulus_sq(&self) -> f64 {
        self.modulus * self.modulus
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    pub fn value(&self) -> Complex64 {
        Complex64::from_polar(self.modulus, self.phase)
    }
}

fn wrap_phase(phase: f64) -> f64 {
    let w = phase.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// A two-state decomposition together with its priors and overlap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decomposition {
    gamma: DecompositionParameter,
    p1: f64,
    p2: f64,
    beta1: PureState,
    beta2: PureState,
    overlap: Complex64,
}

impl Decomposition {
    pub fn gamma(&self) -> DecompositionParameter {
        self.gamma
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }

    pub fn p2(&self) -> f64 {
        self.p2
    }

    pub fn beta1(&self) -> &PureState {
        &self.beta1
    }

    pub fn beta2(&self) -> &PureState {
        &self.beta2
    }

    /// `β = ⟨β1|β2⟩`.
    pub fn overlap(&self) -> Complex64 {
        self.overlap
    }

    /// `p1|β1⟩⟨β1| + p2|β2⟩⟨β2|`, in the basis the states are written in.
    pub fn reconstruct(&self) -> DensityMatrix2 {
        mixture(self.p1, &self.beta1, self.p2, &self.beta2)
    }

    /// `(β1, β2)` in the ambient basis of `state`'s eigenvectors.
    pub fn to_ambient(&self, state: &RankTwoMixedState) -> Result<(PureState, PureState)> {
        Ok((
            state.to_ambient(&self.beta1)?,
            state.to_ambient(&self.beta2)?,
        ))
    }
}

fn mixture(p1: f64, b1: &PureState, p2: f64, b2: &PureState) -> DensityMatrix2 {
    let m1 = b1.projector();
    let m2 = b2.projector();
    let mut m = [[Complex64::new(0.0, 0.0); 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            m[r][c] = m1[r][c] * p1 + m2[r][c] * p2;
        }
    }
    DensityMatrix2::new_unchecked(m, b1.basis())
}

/// `λ1 + (λ2−λ1)|γ|²`.
fn prior_denominator(lambda1: f64, lambda2: f64, modulus_sq: f64) -> f64 {
    lambda1 + (lambda2 - lambda1) * modulus_sq
}

/// `λ1² + (λ2−λ1)|γ|²`.
fn state_denominator(lambda1: f64, lambda2: f64, modulus_sq: f64) -> f64 {
    lambda1 * lambda1 + (lambda2 - lambda1) * modulus_sq
}

fn degenerate(lambda1: f64, modulus: f64) -> Error {
    Error::DegenerateDecomposition(format!(
        "λ1 = {lambda1}, |γ| = {modulus}: the source state is pure along β1"
    ))
}

/// Priors `(p1, p2)` of the `|γ|`-decomposition of `diag(λ1, 1−λ1)`.
pub fn decomposition_probabilities(lambda1: f64, gamma_modulus: f64) -> Result<(f64, f64)> {
    tol::check_unit_interval("lambda1", lambda1)?;
    tol::check_unit_interval("|gamma|", gamma_modulus)?;
    let lambda2 = 1.0 - lambda1;
    priors(lambda1, lambda2, gamma_modulus)
}

fn priors(lambda1: f64, lambda2: f64, modulus: f64) -> Result<(f64, f64)> {
    let g2 = modulus * modulus;
    let den = prior_denominator(lambda1, lambda2, g2);
    if den <= tol::DEGENERATE {
        return Err(degenerate(lambda1, modulus));
    }
    let p1 = lambda1 * lambda2 / den;
    let p2 = state_denominator(lambda1, lambda2, g2) / den;
    Ok((p1, p2))
}

/// `⟨β1|β2⟩` for `diag(λ1, 1−λ1)` and parameter `γ`.
pub fn decomposition_overlap(lambda1: f64, gamma: DecompositionParameter) -> Result<Complex64> {
    tol::check_unit_interval("lambda1", lambda1)?;
    overlap(lambda1, 1.0 - lambda1, gamma)
}

fn overlap(lambda1: f64, lambda2: f64, gamma: DecompositionParameter) -> Result<Complex64> {
    let g = gamma.modulus;
    let den = state_denominator(lambda1, lambda2, g * g);
    if den <= tol::DEGENERATE {
        return Err(degenerate(lambda1, g));
    }
    let modulus = (lambda1 - lambda2) * g * (1.0 - g * g).max(0.0).sqrt() / den.sqrt();
    Ok(Complex64::from_polar(1.0, -gamma.phase) * modulus)
}

/// The decomposition of `state` selected by `gamma`.
///
/// Fails with [`Error::EqualEigenvalues`] when `λ1 = λ2`; that family is
/// produced by [`degenerate_decomposition`].
pub fn decomposition_states(
    state: &RankTwoMixedState,
    gamma: DecompositionParameter,
) -> Result<Decomposition> {
    if state.is_degenerate() {
        return Err(Error::EqualEigenvalues);
    }
    let (l1, l2) = (state.lambda1(), state.lambda2());
    let g = gamma.modulus;
    let g2 = g * g;
    let co = (1.0 - g2).max(0.0).sqrt();
    let (p1, p2) = priors(l1, l2, g)?;
    let norm = state_denominator(l1, l2, g2);
    if norm <= tol::DEGENERATE {
        return Err(degenerate(l1, g));
    }
    let norm = norm.sqrt();
    let gv = gamma.value();

    let beta1 = PureState::new_unchecked(gv, Complex64::new(co, 0.0), Basis::Eigen);
    let beta2 = PureState::new_unchecked(
        Complex64::new(l1 * co / norm, 0.0),
        -gv.conj() * (l2 / norm),
        Basis::Eigen,
    );
    Ok(Decomposition {
        gamma,
        p1,
        p2,
        beta1,
        beta2,
        overlap: overlap(l1, l2, gamma)?,
    })
}

/// Equal-prior decomposition, reached at `|γ| = √λ1`.
///
/// For `λ1 = λ2` this is the member of the degenerate family at the same
/// `γ`, an orthogonal pair. Pure states (`λ1 ∈ {0, 1}`) have no balanced
/// decomposition.
pub fn balanced_decomposition(state: &RankTwoMixedState, theta: f64) -> Result<Decomposition> {
    let gamma = DecompositionParameter::new(state.lambda1().sqrt(), theta)?;
    if state.is_degenerate() {
        return Ok(degenerate_decomposition(gamma));
    }
    decomposition_states(state, gamma)
}

/// The `λ1 = λ2 = 1/2` family: every member is an orthogonal pair with equal
/// priors.
pub fn degenerate_decomposition(gamma: DecompositionParameter) -> Decomposition {
    let g = gamma.modulus;
    let co = (1.0 - g * g).max(0.0).sqrt();
    let beta1 = PureState::new_unchecked(
        Complex64::from_polar(g, -gamma.phase),
        Complex64::new(co, 0.0),
        Basis::Eigen,
    );
    let beta2 = PureState::new_unchecked(
        Complex64::new(co, 0.0),
        -Complex64::from_polar(g, gamma.phase),
        Basis::Eigen,
    );
    Decomposition {
        gamma,
        p1: 0.5,
        p2: 0.5,
        beta1,
        beta2,
        overlap: Complex64::new(0.0, 0.0),
    }
}

/// `|⟨β1|β2⟩|` recovered from the two projector expectations through
/// `⟨β1|ρ|β1⟩ + ⟨β2|ρ|β2⟩ = 1 + |⟨β1|β2⟩|²`.
///
/// The pair must decompose `rho` for some priors; this is checked by a
/// least-squares fit of `(p1, p2)` with residual at most 1e-8.
pub fn overlap_from_projections(
    rho: &DensityMatrix2,
    beta1: &PureState,
    beta2: &PureState,
) -> Result<f64> {
    let (p1, p2) = fit_priors(rho, beta1, beta2)?;
    let residual = mixture(p1, beta1, p2, beta2).max_abs_diff(rho);
    if residual > 1e-8 || p1 < -1e-8 || p2 < -1e-8 {
        return Err(Error::InconsistentInputs(format!(
            "states do not decompose ρ (residual {residual:e}, p1 = {p1}, p2 = {p2})"
        )));
    }
    let arg = beta1.expectation(rho)? + beta2.expectation(rho)? - 1.0;
    if arg < -tol::ROUND_TRIP {
        return Err(Error::InconsistentInputs(format!(
            "⟨β1|ρ|β1⟩ + ⟨β2|ρ|β2⟩ − 1 = {arg}"
        )));
    }
    Ok(arg.max(0.0).sqrt())
}

/// Least-squares `(p1, p2)` for `ρ ≈ p1 P1 + p2 P2` over the real and
/// imaginary parts of the four entries.
fn fit_priors(rho: &DensityMatrix2, b1: &PureState, b2: &PureState) -> Result<(f64, f64)> {
    if b1.basis() != rho.basis() {
        return Err(Error::BasisMismatch(rho.basis(), b1.basis()));
    }
    if b2.basis() != rho.basis() {
        return Err(Error::BasisMismatch(rho.basis(), b2.basis()));
    }
    let flat = |m: &[[Complex64; 2]; 2]| -> [f64; 8] {
        let mut out = [0.0; 8];
        for (k, z) in m.iter().flatten().enumerate() {
            out[2 * k] = z.re;
            out[2 * k + 1] = z.im;
        }
        out
    };
    let a = flat(&b1.projector());
    let b = flat(&b2.projector());
    let y = flat(rho.entries());
    let dot = |u: &[f64; 8], v: &[f64; 8]| u.iter().zip(v).map(|(x, y)| x * y).sum::<f64>();
    let (aa, ab, bb) = (dot(&a, &a), dot(&a, &b), dot(&b, &b));
    let (ay, by) = (dot(&a, &y), dot(&b, &y));
    let det = aa * bb - ab * ab;
    if det.abs() <= 1e-14 {
        return Err(Error::InconsistentInputs(
            "β1 and β2 are the same state".into(),
        ));
    }
    Ok(((ay * bb - by * ab) / det, (aa * by - ab * ay) / det))
}

/// Recover `γ = ⟨λ1|β1⟩` from a decomposition state, after fixing the
/// global phase of `β1` so that `⟨λ2|β1⟩` is real and nonnegative.
pub fn gamma_from_state(
    state: &RankTwoMixedState,
    beta1: &PureState,
) -> Result<DecompositionParameter> {
    let [c1, c2] = state.eigen_components(beta1)?;
    let aligned = if c2.norm() > 0.0 {
        c1 * (c2.conj() / c2.norm())
    } else {
        c1
    };
    let modulus = aligned.norm().min(1.0);
    let phase = if modulus <= tol::DEGENERATE {
        0.0
    } else {
        aligned.arg()
    };
    DecompositionParameter::new(
        if modulus <= tol::DEGENERATE {
            0.0
        } else {
            modulus
        },
        phase,
    )
}
