//! Two-level states, 2×2 density matrices and the SPDC photon-pair source.
//!
//! Amplitudes are stored against a declared [`Basis`]: the eigenbasis
//! `{|λ1⟩, |λ2⟩}` of some mixed state, or the polarization basis
//! `{|h⟩, |v⟩}`. Operations that combine states refuse to mix bases.

use num_complex::Complex64;

use crate::tol;
use crate::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Basis a two-component amplitude vector is written in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    /// `{|λ1⟩, |λ2⟩}`, eigenvectors of a rank-two mixed state.
    Eigen,
    /// `{|h⟩, |v⟩}`.
    Polarization,
}

pub type Matrix2 = [[Complex64; 2]; 2];

/// Normalized two-level pure state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureState {
    amp0: Complex64,
    amp1: Complex64,
    basis: Basis,
}

impl PureState {
    /// Build a state from amplitudes that are already normalized.
    pub fn new(amp0: Complex64, amp1: Complex64, basis: Basis) -> Result<Self> {
        let norm = amp0.norm_sqr() + amp1.norm_sqr();
        if !norm.is_finite() || (norm - 1.0).abs() > tol::INVARIANT {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { amp0, amp1, basis })
    }

    /// Normalize arbitrary (nonzero) amplitudes.
    pub fn normalized(amp0: Complex64, amp1: Complex64, basis: Basis) -> Result<Self> {
        let norm = (amp0.norm_sqr() + amp1.norm_sqr()).sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::NotNormalized(norm * norm));
        }
        Ok(Self {
            amp0: amp0 / norm,
            amp1: amp1 / norm,
            basis,
        })
    }

    pub(crate) fn new_unchecked(amp0: Complex64, amp1: Complex64, basis: Basis) -> Self {
        Self { amp0, amp1, basis }
    }

    /// First basis vector (`|λ1⟩` or `|h⟩`).
    pub fn basis0(basis: Basis) -> Self {
        Self::new_unchecked(ONE, ZERO, basis)
    }

    /// Second basis vector (`|λ2⟩` or `|v⟩`).
    pub fn basis1(basis: Basis) -> Self {
        Self::new_unchecked(ZERO, ONE, basis)
    }

    pub fn h() -> Self {
        Self::basis0(Basis::Polarization)
    }

    pub fn v() -> Self {
        Self::basis1(Basis::Polarization)
    }

    pub fn amp0(&self) -> Complex64 {
        self.amp0
    }

    pub fn amp1(&self) -> Complex64 {
        self.amp1
    }

    pub fn amps(&self) -> [Complex64; 2] {
        [self.amp0, self.amp1]
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    /// Same amplitudes, relabelled to another basis.
    pub fn with_basis(self, basis: Basis) -> Self {
        Self { basis, ..self }
    }

    /// Multiply by a global phase `e^{iφ}`.
    pub fn with_global_phase(self, phase: f64) -> Self {
        let w = Complex64::from_polar(1.0, phase);
        Self {
            amp0: self.amp0 * w,
            amp1: self.amp1 * w,
            ..self
        }
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn projector(&self) -> Matrix2 {
        let a = self.amps();
        let mut m = [[ZERO; 2]; 2];
        for (r, row) in m.iter_mut().enumerate() {
            for (c, entry) in row.iter_mut().enumerate() {
                *entry = a[r] * a[c].conj();
            }
        }
        m
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn expectation(&self, rho: &DensityMatrix2) -> Result<f64> {
        if self.basis != rho.basis {
            return Err(Error::BasisMismatch(self.basis, rho.basis));
        }
        let a = self.amps();
        let mut acc = ZERO;
        for r in 0..2 {
            for c in 0..2 {
                acc += a[r].conj() * rho.entries[r][c] * a[c];
            }
        }
        Ok(acc.re)
    }

    /// Fidelity `|⟨a|b⟩|²`, insensitive to global phase.
    pub fn fidelity(&self, other: &PureState) -> Result<f64> {
        Ok(inner_product(self, other)?.norm_sqr())
    }
}

/// `⟨a|b⟩`.
pub fn inner_product(a: &PureState, b: &PureState) -> Result<Complex64> {
    if a.basis != b.basis {
        return Err(Error::BasisMismatch(a.basis, b.basis));
    }
    Ok(a.amp0.conj() * b.amp0 + a.amp1.conj() * b.amp1)
}

/// Validated 2×2 density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix2 {
    entries: Matrix2,
    basis: Basis,
}

impl DensityMatrix2 {
    /// Validate Hermiticity, unit trace and positivity, each within
    /// [`tol::INVARIANT`].
    pub fn new(entries: Matrix2, basis: Basis) -> Result<Self> {
        let herm = hermiticity_defect(&entries);
        if !herm.is_finite() || herm > tol::INVARIANT {
            return Err(Error::InvalidDensityMatrix(format!(
                "not Hermitian (defect {herm:e})"
            )));
        }
        let trace = entries[0][0].re + entries[1][1].re;
        if (trace - 1.0).abs() > tol::INVARIANT {
            return Err(Error::InvalidDensityMatrix(format!("trace {trace}")));
        }
        let (low, _) = hermitian_eigenvalues(&entries);
        if low < -tol::INVARIANT {
            return Err(Error::InvalidDensityMatrix(format!(
                "negative eigenvalue {low}"
            )));
        }
        Ok(Self { entries, basis })
    }

    pub(crate) fn new_unchecked(entries: Matrix2, basis: Basis) -> Self {
        Self { entries, basis }
    }

    pub fn diagonal(d0: f64, d1: f64, basis: Basis) -> Result<Self> {
        Self::new(
            [
                [Complex64::new(d0, 0.0), ZERO],
                [ZERO, Complex64::new(d1, 0.0)],
            ],
            basis,
        )
    }

    pub fn entries(&self) -> &Matrix2 {
        &self.entries
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn trace(&self) -> f64 {
        self.entries[0][0].re + self.entries[1][1].re
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &DensityMatrix2) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..2 {
            for c in 0..2 {
                worst = worst.max((self.entries[r][c] - other.entries[r][c]).norm());
            }
        }
        worst
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> (f64, f64) {
        hermitian_eigenvalues(&self.entries)
    }
}

fn hermiticity_defect(m: &Matrix2) -> f64 {
    (m[0][1] - m[1][0].conj())
        .norm()
        .max(m[0][0].im.abs())
        .max(m[1][1].im.abs())
}

fn hermitian_eigenvalues(m: &Matrix2) -> (f64, f64) {
    let a = m[0][0].re;
    let d = m[1][1].re;
    let mean = 0.5 * (a + d);
    let radius = (0.25 * (a - d) * (a - d) + m[0][1].norm_sqr()).sqrt();
    (mean - radius, mean + radius)
}

/// `Σ p_i |ψ_i⟩⟨ψ_i|`.
///
/// Probabilities must be nonnegative and sum to one within
/// [`tol::PROBABILITY_SUM`]; the result is divided by the actual sum so the
/// trace is exactly one.
pub fn density_from_ensemble(pairs: &[(f64, PureState)]) -> Result<DensityMatrix2> {
    let Some((_, first)) = pairs.first() else {
        return Err(Error::InvalidProbabilities("empty ensemble".into()));
    };
    let basis = first.basis;
    let mut total = 0.0;
    let mut m = [[ZERO; 2]; 2];
    for (p, psi) in pairs {
        if psi.basis != basis {
            return Err(Error::BasisMismatch(basis, psi.basis));
        }
        if p.is_nan() || *p < 0.0 {
            return Err(Error::InvalidProbabilities(format!("negative weight {p}")));
        }
        total += p;
        let proj = psi.projector();
        for r in 0..2 {
            for c in 0..2 {
                m[r][c] += proj[r][c] * *p;
            }
        }
    }
    if (total - 1.0).abs() > tol::PROBABILITY_SUM {
        return Err(Error::InvalidProbabilities(format!(
            "weights sum to {total}"
        )));
    }
    for row in m.iter_mut() {
        for entry in row.iter_mut() {
            *entry /= total;
        }
    }
    DensityMatrix2::new(m, basis)
}

/// Rank-two mixed state `λ1|λ1⟩⟨λ1| + λ2|λ2⟩⟨λ2|`.
///
/// The `(λ1, λ2)` labelling supplied by the caller is preserved; the
/// decomposition formulas depend on which eigenvalue is called `λ1`, not on
/// which is larger.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankTwoMixedState {
    lambda1: f64,
    lambda2: f64,
    eigvec1: PureState,
    eigvec2: PureState,
}

impl RankTwoMixedState {
    pub fn new(lambda1: f64, lambda2: f64, eigvec1: PureState, eigvec2: PureState) -> Result<Self> {
        tol::check_unit_interval("lambda1", lambda1)?;
        tol::check_unit_interval("lambda2", lambda2)?;
        if (lambda1 + lambda2 - 1.0).abs() > tol::INVARIANT {
            return Err(Error::InvalidProbabilities(format!(
                "lambda1 + lambda2 = {}",
                lambda1 + lambda2
            )));
        }
        let overlap = inner_product(&eigvec1, &eigvec2)?.norm();
        if overlap > tol::INVARIANT {
            return Err(Error::InconsistentInputs(format!(
                "eigenvectors are not orthogonal (|overlap| = {overlap:e})"
            )));
        }
        Ok(Self {
            lambda1,
            lambda2,
            eigvec1,
            eigvec2,
        })
    }

    /// `diag(λ1, 1 − λ1)` with the canonical basis vectors of `basis` as
    /// eigenvectors.
    pub fn canonical(lambda1: f64, basis: Basis) -> Result<Self> {
        tol::check_unit_interval("lambda1", lambda1)?;
        Ok(Self {
            lambda1,
            lambda2: 1.0 - lambda1,
            eigvec1: PureState::basis0(basis),
            eigvec2: PureState::basis1(basis),
        })
    }

    pub fn lambda1(&self) -> f64 {
        self.lambda1
    }

    pub fn lambda2(&self) -> f64 {
        self.lambda2
    }

    pub fn eigvec1(&self) -> &PureState {
        &self.eigvec1
    }

    pub fn eigvec2(&self) -> &PureState {
        &self.eigvec2
    }

    pub fn basis(&self) -> Basis {
        self.eigvec1.basis
    }

    pub fn is_degenerate(&self) -> bool {
        (self.lambda1 - self.lambda2).abs() <= tol::INVARIANT
    }

    pub fn density(&self) -> DensityMatrix2 {
        let p1 = self.eigvec1.projector();
        let p2 = self.eigvec2.projector();
        let mut m = [[ZERO; 2]; 2];
        for r in 0..2 {
            for c in 0..2 {
                m[r][c] = p1[r][c] * self.lambda1 + p2[r][c] * self.lambda2;
            }
        }
        DensityMatrix2::new_unchecked(m, self.basis())
    }

    /// Express a state written in this state's eigenbasis in the ambient
    /// basis the eigenvectors are written in.
    pub fn to_ambient(&self, psi: &PureState) -> Result<PureState> {
        if psi.basis != Basis::Eigen {
            return Err(Error::BasisMismatch(Basis::Eigen, psi.basis));
        }
        let v1 = self.eigvec1.amps();
        let v2 = self.eigvec2.amps();
        Ok(PureState::new_unchecked(
            psi.amp0 * v1[0] + psi.amp1 * v2[0],
            psi.amp0 * v1[1] + psi.amp1 * v2[1],
            self.basis(),
        ))
    }

    /// Components `(⟨λ1|ψ⟩, ⟨λ2|ψ⟩)`; a state already tagged
    /// [`Basis::Eigen`] is read off directly.
    pub fn eigen_components(&self, psi: &PureState) -> Result<[Complex64; 2]> {
        if psi.basis == Basis::Eigen {
            return Ok(psi.amps());
        }
        Ok([
            inner_product(&self.eigvec1, psi)?,
            inner_product(&self.eigvec2, psi)?,
        ])
    }
}

/// Spectral decomposition of a 2×2 density matrix.
///
/// Eigenvalues come back in ascending order (`lambda1 ≤ lambda2`), each
/// paired with its eigenvector. For a diagonal input the canonical basis
/// vectors are used, so `diag(0.7, 0.3)` yields `eigvec1 = basis1`.
/// When the eigenvalues coincide every basis diagonalizes the input; the
/// canonical basis of the representation is returned and only the
/// reconstruction is meaningful.
pub fn eigendecompose(rho: &DensityMatrix2) -> Result<RankTwoMixedState> {
    let m = &rho.entries;
    let herm = hermiticity_defect(m);
    if !herm.is_finite() || herm > tol::INVARIANT {
        return Err(Error::InvalidDensityMatrix(format!(
            "not Hermitian (defect {herm:e})"
        )));
    }
    let basis = rho.basis;
    let (low, high) = hermitian_eigenvalues(m);
    let a = m[0][0].re;
    let d = m[1][1].re;
    let b = m[0][1];

    let (l1, l2) = (low.clamp(0.0, 1.0), high.clamp(0.0, 1.0));
    let (l1, l2, v1, v2) = if b.norm() <= f64::EPSILON * (a.abs() + d.abs() + 1.0) {
        // read the diagonal directly so exact inputs stay exact
        let (a, d) = (a.clamp(0.0, 1.0), d.clamp(0.0, 1.0));
        if a <= d {
            (a, d, PureState::basis0(basis), PureState::basis1(basis))
        } else {
            (d, a, PureState::basis1(basis), PureState::basis0(basis))
        }
    } else {
        // Two candidate null vectors of (ρ − λI); keep the better conditioned one.
        let c1 = (b, Complex64::new(low - a, 0.0));
        let c2 = (Complex64::new(low - d, 0.0), b.conj());
        let n1 = c1.0.norm_sqr() + c1.1.norm_sqr();
        let n2 = c2.0.norm_sqr() + c2.1.norm_sqr();
        let (x, y) = if n1 >= n2 { c1 } else { c2 };
        let v1 = PureState::normalized(x, y, basis)?;
        let v2 = PureState::new_unchecked(-v1.amp1.conj(), v1.amp0.conj(), basis);
        (l1, l2, v1, v2)
    };
    Ok(RankTwoMixedState {
        lambda1: l1,
        lambda2: l2,
        eigvec1: v1,
        eigvec2: v2,
    })
}

/// Two-photon polarization state over `{hh, hv, vh, vv}`; the first label is
/// the signal photon, the second the idler.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitPure {
    amps: [Complex64; 4],
}

impl TwoQubitPure {
    pub fn new(amps: [Complex64; 4]) -> Result<Self> {
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if !norm.is_finite() || (norm - 1.0).abs() > tol::INVARIANT {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { amps })
    }

    pub fn amps(&self) -> &[Complex64; 4] {
        &self.amps
    }
}

/// Heralded source state `√λ1|h⟩_s|h⟩_i + √(1−λ1)|v⟩_s|v⟩_i`.
pub fn prepare_spdc(lambda1: f64) -> Result<TwoQubitPure> {
    tol::check_unit_interval("lambda1", lambda1)?;
    Ok(TwoQubitPure {
        amps: [
            Complex64::new(lambda1.sqrt(), 0.0),
            ZERO,
            ZERO,
            Complex64::new((1.0 - lambda1).sqrt(), 0.0),
        ],
    })
}

/// Reduced state of the signal photon after discarding the idler.
pub fn partial_trace_idler(psi: &TwoQubitPure) -> DensityMatrix2 {
    let a = &psi.amps;
    let mut m = [[ZERO; 2]; 2];
    for (s, row) in m.iter_mut().enumerate() {
        for (t, entry) in row.iter_mut().enumerate() {
            *entry = (0..2).map(|i| a[2 * s + i] * a[2 * t + i].conj()).sum();
        }
    }
    DensityMatrix2::new_unchecked(m, Basis::Polarization)
}
