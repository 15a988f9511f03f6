//! Probe states and their quantum Fisher information.
//!
//! The probe is cos(α/2)|e⟩ + sin(α/2)|g⟩ after a phase gate e^{iφ} on |e⟩.
//! Dephasing multiplies the coherence by e^{−γ}. The QFI is computed from
//! the spectral decomposition of ρ(ξ):
//!
//! F = Σᵢ (∂λᵢ)²/λᵢ + Σ_{i≠j} 2(λᵢ−λⱼ)²/(λᵢ+λⱼ) |⟨φᵢ|∂φⱼ⟩|²,
//!
//! with ∂λᵢ = ⟨φᵢ|∂ρ|φᵢ⟩ and ⟨φᵢ|∂φⱼ⟩ = ⟨φᵢ|∂ρ|φⱼ⟩/(λⱼ−λᵢ), so only ∂ρ is
//! ever differentiated.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::spectral::reduce_angle;

/// Eigenvalues at or below this are outside the support.
pub const EPS_EIG: f64 = 1e-12;
/// Eigenvalue gaps below this count as degenerate.
pub const EPS_DEG: f64 = 1e-10;
/// Default central-difference step.
pub const DEFAULT_STEP: f64 = 1e-6;

const HERMITIAN_TOL: f64 = 1e-14;
const COUPLING_TOL: f64 = 1e-10;
const NORM_TOL: f64 = 1e-10;

pub type Ket<T> = [Complex<T>; 2];

/// Amplitude and phase parameters of the probe, α ∈ [0, π], φ ∈ [0, 2π).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeState<T> {
    alpha: T,
    phi: T,
}

impl<T: Real> ProbeState<T> {
    pub fn new(alpha: T, phi: T) -> Result<Self> {
        if !(alpha >= T::zero() && alpha <= T::PI()) {
            return Err(Error::domain("alpha", alpha.as_f64(), "0 ≤ alpha ≤ π"));
        }
        if !phi.is_finite() {
            return Err(Error::domain("phi", phi.as_f64(), "finite"));
        }
        Ok(ProbeState {
            alpha,
            phi: reduce_angle(phi),
        })
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn phi(&self) -> T {
        self.phi
    }
}

/// Plain 2×2 complex matrix in the {|e⟩, |g⟩} basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix2<T> {
    pub m: [[Complex<T>; 2]; 2],
}

impl<T: Real> Matrix2<T> {
    pub fn new(m: [[Complex<T>; 2]; 2]) -> Self {
        Matrix2 { m }
    }

    pub fn zero() -> Self {
        let z = Complex::new(T::zero(), T::zero());
        Matrix2 {
            m: [[z, z], [z, z]],
        }
    }

    pub fn trace(&self) -> Complex<T> {
        self.m[0][0] + self.m[1][1]
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.m;
        Matrix2 {
            m: [
                [m[0][0].conj(), m[1][0].conj()],
                [m[0][1].conj(), m[1][1].conj()],
            ],
        }
    }

    pub fn apply(&self, v: &Ket<T>) -> Ket<T> {
        [
            self.m[0][0] * v[0] + self.m[0][1] * v[1],
            self.m[1][0] * v[0] + self.m[1][1] * v[1],
        ]
    }

    /// ⟨u|M|v⟩
    pub fn sandwich(&self, u: &Ket<T>, v: &Ket<T>) -> Complex<T> {
        inner(u, &self.apply(v))
    }

    pub fn scaled(&self, k: T) -> Self {
        let mut out = *self;
        for row in out.m.iter_mut() {
            for x in row.iter_mut() {
                *x = *x * k;
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = *self;
        for (i, row) in out.m.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = *x - other.m[i][j];
            }
        }
        out
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        let mut d = T::zero();
        for i in 0..2 {
            for j in 0..2 {
                d = d.max((self.m[i][j] - other.m[i][j]).norm());
            }
        }
        d
    }
}

/// ⟨u|v⟩
pub fn inner<T: Real>(u: &Ket<T>, v: &Ket<T>) -> Complex<T> {
    u[0].conj() * v[0] + u[1].conj() * v[1]
}

/// A validated qubit density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix2<T>(Matrix2<T>);

impl<T: Real> DensityMatrix2<T> {
    /// Checks Hermiticity and unit trace to 1e-14, eigenvalues ≥ −1e-12.
    pub fn new(m: Matrix2<T>) -> Result<Self> {
        let tol = T::tolerance(HERMITIAN_TOL);
        if m.max_abs_diff(&m.adjoint()) > tol {
            return Err(Error::NotDensityMatrix {
                reason: "not Hermitian",
            });
        }
        let tr = m.trace();
        if (tr.re - T::one()).abs() > tol || tr.im.abs() > tol {
            return Err(Error::NotDensityMatrix {
                reason: "trace differs from 1",
            });
        }
        let eig = eigh(&m);
        if eig.values[0] < -T::tolerance(EPS_EIG) {
            return Err(Error::NotDensityMatrix {
                reason: "negative eigenvalue",
            });
        }
        Ok(DensityMatrix2(m))
    }

    pub fn matrix(&self) -> &Matrix2<T> {
        &self.0
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex<T> {
        self.0.m[i][j]
    }

    /// Tr ρ², 1 for pure states.
    pub fn purity(&self) -> T {
        let m = &self.0.m;
        (m[0][0] * m[0][0] + m[0][1] * m[1][0] + m[1][0] * m[0][1] + m[1][1] * m[1][1]).re
    }

    pub fn eigen(&self) -> Eigen2<T> {
        eigh(&self.0)
    }
}

/// Ascending eigenvalues with orthonormal eigenvectors.
///
/// Each eigenvector has its first non-negligible component real and positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigen2<T> {
    pub values: [T; 2],
    pub vectors: [Ket<T>; 2],
}

fn normalize_gauge<T: Real>(v: Ket<T>) -> Ket<T> {
    let norm = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    let lead = if v[0].norm() > T::tolerance(1e-14) * norm {
        v[0]
    } else {
        v[1]
    };
    let phase = lead.conj() / lead.norm();
    [v[0] * phase / norm, v[1] * phase / norm]
}

/// Eigendecomposition of a Hermitian 2×2 matrix (only the upper triangle
/// and the real diagonal are read).
pub fn eigh<T: Real>(m: &Matrix2<T>) -> Eigen2<T> {
    let a = m.m[0][0].re;
    let d = m.m[1][1].re;
    let b = m.m[0][1];
    let half = T::lit(0.5);
    let mean = half * (a + d);
    let radius = (half * (a - d)).hypot(b.norm());
    let values = [mean - radius, mean + radius];

    let one = Complex::new(T::one(), T::zero());
    let zero = Complex::new(T::zero(), T::zero());
    if radius <= T::min_positive_value() || b.norm() <= T::epsilon() * radius {
        // diagonal up to rounding: basis vectors, ordered by eigenvalue
        let (lo, hi) = if a <= d {
            ([one, zero], [zero, one])
        } else {
            ([zero, one], [one, zero])
        };
        return Eigen2 {
            values,
            vectors: [lo, hi],
        };
    }
    let vector_for = |lambda: T| {
        // (a − λ)x + b y = 0 and b* x + (d − λ) y = 0; use the better-conditioned row
        let u1 = [b, Complex::new(lambda - a, T::zero())];
        let u2 = [Complex::new(lambda - d, T::zero()), b.conj()];
        let n1 = u1[0].norm_sqr() + u1[1].norm_sqr();
        let n2 = u2[0].norm_sqr() + u2[1].norm_sqr();
        normalize_gauge(if n1 >= n2 { u1 } else { u2 })
    };
    Eigen2 {
        values,
        vectors: [vector_for(values[0]), vector_for(values[1])],
    }
}

fn probe_matrix<T: Real>(alpha: T, phi: T, gamma: T) -> Matrix2<T> {
    let half = T::lit(0.5);
    let (s, c) = (half * alpha).sin_cos();
    let coherence = Complex::from_polar(half * (-gamma).exp() * alpha.sin(), phi);
    Matrix2::new([
        [Complex::new(c * c, T::zero()), coherence],
        [coherence.conj(), Complex::new(s * s, T::zero())],
    ])
}

/// Pure prepared state U_φ|φ_α⟩⟨φ_α|U_φ†.
pub fn prepare_state<T: Real>(probe: &ProbeState<T>) -> DensityMatrix2<T> {
    DensityMatrix2(probe_matrix(probe.alpha, probe.phi, T::zero()))
}

/// State after dephasing: populations unchanged, coherence ½ e^{−γ+iφ} sin α.
pub fn evolve_state<T: Real>(probe: &ProbeState<T>, gamma: T) -> Result<DensityMatrix2<T>> {
    if !(gamma >= T::zero()) {
        return Err(Error::domain("gamma", gamma.as_f64(), "gamma ≥ 0"));
    }
    Ok(DensityMatrix2(probe_matrix(probe.alpha, probe.phi, gamma)))
}

/// One-parameter family of qubit states ρ(ξ).
pub trait StateFamily<T: Real> {
    fn state(&self, xi: T) -> Result<DensityMatrix2<T>>;

    /// ∂ρ/∂ξ in closed form, when the family knows it.
    fn derivative(&self, _xi: T) -> Option<Matrix2<T>> {
        None
    }
}

/// Wraps a closure as a [`StateFamily`] without an analytic derivative.
pub struct FnFamily<F>(pub F);

impl<T: Real, F: Fn(T) -> Result<DensityMatrix2<T>>> StateFamily<T> for FnFamily<F> {
    fn state(&self, xi: T) -> Result<DensityMatrix2<T>> {
        (self.0)(xi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parameter {
    Alpha,
    Phi,
}

/// The dephased probe viewed as a function of α or φ, the other held fixed.
///
/// Angles are taken as given (no range reduction) so that finite differences
/// may step across the stored ranges.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolvedFamily<T> {
    pub alpha: T,
    pub phi: T,
    pub gamma: T,
    pub parameter: Parameter,
}

impl<T: Real> EvolvedFamily<T> {
    pub fn new(probe: &ProbeState<T>, gamma: T, parameter: Parameter) -> Result<Self> {
        if !(gamma >= T::zero()) {
            return Err(Error::domain("gamma", gamma.as_f64(), "gamma ≥ 0"));
        }
        Ok(EvolvedFamily {
            alpha: probe.alpha(),
            phi: probe.phi(),
            gamma,
            parameter,
        })
    }

    fn angles(&self, xi: T) -> (T, T) {
        match self.parameter {
            Parameter::Alpha => (xi, self.phi),
            Parameter::Phi => (self.alpha, xi),
        }
    }

    /// The parameter value this family was built around.
    pub fn point(&self) -> T {
        match self.parameter {
            Parameter::Alpha => self.alpha,
            Parameter::Phi => self.phi,
        }
    }
}

impl<T: Real> StateFamily<T> for EvolvedFamily<T> {
    fn state(&self, xi: T) -> Result<DensityMatrix2<T>> {
        let (alpha, phi) = self.angles(xi);
        DensityMatrix2::new(probe_matrix(alpha, phi, self.gamma))
    }

    fn derivative(&self, xi: T) -> Option<Matrix2<T>> {
        let (alpha, phi) = self.angles(xi);
        let half = T::lit(0.5);
        let decay = (-self.gamma).exp();
        let zero = Complex::new(T::zero(), T::zero());
        let m = match self.parameter {
            Parameter::Alpha => {
                let pop = half * alpha.sin();
                let coh = Complex::from_polar(half * decay * alpha.cos(), phi);
                [
                    [Complex::new(-pop, T::zero()), coh],
                    [coh.conj(), Complex::new(pop, T::zero())],
                ]
            }
            Parameter::Phi => {
                let coh = Complex::from_polar(half * decay * alpha.sin(), phi)
                    * Complex::new(T::zero(), T::one());
                [[zero, coh], [coh.conj(), zero]]
            }
        };
        Some(Matrix2::new(m))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub enum DerivativeMode<T> {
    #[default]
    Analytic,
    /// Central difference with one Richardson refinement, h ∈ [1e-8, 1e-3].
    CentralDifference { h: T },
}

fn check_step<T: Real>(h: T) -> Result<()> {
    let v = h.as_f64();
    if (1e-8..=1e-3).contains(&v) {
        Ok(())
    } else {
        Err(Error::domain("h", v, "1e-8 ≤ h ≤ 1e-3"))
    }
}

fn central_difference<T: Real, F: StateFamily<T> + ?Sized>(
    family: &F,
    xi: T,
    h: T,
) -> Result<Matrix2<T>> {
    let diff = |step: T| -> Result<Matrix2<T>> {
        let up = family.state(xi + step)?;
        let down = family.state(xi - step)?;
        Ok(up
            .matrix()
            .sub(down.matrix())
            .scaled(T::one() / (T::lit(2.0) * step)))
    };
    let coarse = diff(h)?;
    let fine = diff(h * T::lit(0.5))?;
    // (4 D(h/2) − D(h)) / 3
    Ok(fine
        .scaled(T::lit(4.0))
        .sub(&coarse)
        .scaled(T::one() / T::lit(3.0)))
}

/// QFI with its two partial sums.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QfiReport<T> {
    pub value: T,
    /// Σᵢ (∂λᵢ)²/λᵢ
    pub eigen_terms: T,
    /// Σ_{i≠j} 2(λᵢ−λⱼ)²/(λᵢ+λⱼ)|⟨φᵢ|∂φⱼ⟩|²
    pub coherence_terms: T,
    /// Index pairs (i, j), diagonal included, skipped by the support or
    /// degeneracy thresholds.
    pub dropped_pairs: usize,
}

/// QFI of `family` at `xi0` from the spectral decomposition of ρ(xi0).
pub fn qfi_general<T: Real, F: StateFamily<T> + ?Sized>(
    family: &F,
    xi0: T,
    mode: DerivativeMode<T>,
) -> Result<QfiReport<T>> {
    let rho = family.state(xi0)?;
    let d_rho = match mode {
        DerivativeMode::Analytic => family.derivative(xi0).ok_or(Error::NoAnalyticDerivative)?,
        DerivativeMode::CentralDifference { h } => {
            check_step(h)?;
            central_difference(family, xi0, h)?
        }
    };

    let eps_eig = T::tolerance(EPS_EIG);
    let eps_deg = T::tolerance(EPS_DEG);
    let coupling_tol = T::tolerance(COUPLING_TOL);
    let Eigen2 { values, vectors } = rho.eigen();
    let mut eigen_terms = T::zero();
    let mut coherence_terms = T::zero();
    let mut dropped_pairs = 0;

    for i in 0..2 {
        for j in 0..2 {
            let (li, lj) = (values[i], values[j]);
            if i == j {
                if li > eps_eig {
                    let d_lambda = d_rho.sandwich(&vectors[i], &vectors[i]).re;
                    eigen_terms = eigen_terms + d_lambda * d_lambda / li;
                } else {
                    dropped_pairs += 1;
                }
                continue;
            }
            if li + lj <= eps_eig {
                dropped_pairs += 1;
                continue;
            }
            let coupling = d_rho.sandwich(&vectors[i], &vectors[j]);
            let gap = lj - li;
            if gap.abs() < eps_deg {
                if li > eps_eig && lj > eps_eig && coupling.norm() > coupling_tol {
                    return Err(Error::Degenerate {
                        lambda_i: li.as_f64(),
                        lambda_j: lj.as_f64(),
                        coupling: coupling.norm().as_f64(),
                    });
                }
                dropped_pairs += 1;
                continue;
            }
            let overlap = coupling.norm_sqr() / (gap * gap);
            coherence_terms = coherence_terms + T::lit(2.0) * gap * gap / (li + lj) * overlap;
        }
    }

    Ok(QfiReport {
        value: eigen_terms + coherence_terms,
        eigen_terms,
        coherence_terms,
        dropped_pairs,
    })
}

/// One-parameter family of normalized qubit kets.
pub trait PureFamily<T: Real> {
    fn ket(&self, xi: T) -> Ket<T>;

    fn ket_derivative(&self, _xi: T) -> Option<Ket<T>> {
        None
    }
}

/// The undephased probe ket (e^{iφ} cos(α/2), sin(α/2)).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeKet<T> {
    pub alpha: T,
    pub phi: T,
    pub parameter: Parameter,
}

impl<T: Real> PureFamily<T> for ProbeKet<T> {
    fn ket(&self, xi: T) -> Ket<T> {
        let (alpha, phi) = match self.parameter {
            Parameter::Alpha => (xi, self.phi),
            Parameter::Phi => (self.alpha, xi),
        };
        let (s, c) = (alpha * T::lit(0.5)).sin_cos();
        [Complex::from_polar(c, phi), Complex::new(s, T::zero())]
    }

    fn ket_derivative(&self, xi: T) -> Option<Ket<T>> {
        let half = T::lit(0.5);
        Some(match self.parameter {
            Parameter::Alpha => {
                let (s, c) = (xi * half).sin_cos();
                [
                    Complex::from_polar(-half * s, self.phi),
                    Complex::new(half * c, T::zero()),
                ]
            }
            Parameter::Phi => {
                let c = (self.alpha * half).cos();
                [
                    Complex::from_polar(c, xi) * Complex::new(T::zero(), T::one()),
                    Complex::new(T::zero(), T::zero()),
                ]
            }
        })
    }
}

/// Pure-state QFI 4(⟨∂φ|∂φ⟩ − |⟨∂φ|φ⟩|²).
///
/// Uses the family's analytic derivative when present, otherwise a
/// Richardson-refined central difference with the default step.
pub fn qfi_pure<T: Real, F: PureFamily<T> + ?Sized>(family: &F, xi0: T) -> Result<T> {
    let psi = family.ket(xi0);
    let norm_sq = inner(&psi, &psi).re;
    if (norm_sq - T::one()).abs() > T::tolerance(NORM_TOL) {
        return Err(Error::Normalization {
            norm_sq: norm_sq.as_f64(),
        });
    }
    let d_psi = match family.ket_derivative(xi0) {
        Some(d) => d,
        None => {
            let h = T::lit(DEFAULT_STEP);
            let diff = |step: T| {
                let up = family.ket(xi0 + step);
                let down = family.ket(xi0 - step);
                let k = T::one() / (T::lit(2.0) * step);
                [(up[0] - down[0]) * k, (up[1] - down[1]) * k]
            };
            let (coarse, fine) = (diff(h), diff(h * T::lit(0.5)));
            let third = T::one() / T::lit(3.0);
            [
                (fine[0] * T::lit(4.0) - coarse[0]) * third,
                (fine[1] * T::lit(4.0) - coarse[1]) * third,
            ]
        }
    };
    let value = T::lit(4.0) * (inner(&d_psi, &d_psi).re - inner(&d_psi, &psi).norm_sqr());
    Ok(value.max(T::zero()))
}

/// QFI of the amplitude parameter: 1, independent of the dephasing.
pub fn qfi_alpha<T: Real>() -> T {
    T::one()
}

/// QFI of the phase parameter at α = π/2: e^{−2γ}.
pub fn qfi_phi<T: Real>(gamma: T) -> Result<T> {
    if !(gamma >= T::zero()) {
        return Err(Error::domain("gamma", gamma.as_f64(), "gamma ≥ 0"));
    }
    Ok((T::lit(-2.0) * gamma).exp())
}

/// Lower bound 1/√(ν F) on the estimation error after ν repetitions.
pub fn cramer_rao_bound<T: Real>(fisher: T, nu: u64) -> Result<T> {
    if !(fisher > T::zero()) {
        return Err(Error::domain("fisher", fisher.as_f64(), "fisher > 0"));
    }
    if nu == 0 {
        return Err(Error::domain("nu", 0.0, "nu ≥ 1"));
    }
    let nu = T::from_u64(nu).expect("repetition count representable");
    Ok((nu * fisher).sqrt().recip())
}
