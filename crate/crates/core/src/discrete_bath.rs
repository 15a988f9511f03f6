//! Finite collection of bosonic modes coupled to the qubit.
//!
//! Each mode contributes a displacement amplitude α_k(t) = g_k (1 − e^{iω_k t})/ω_k;
//! squeezing maps it to β_k = α_k cosh r + e^{iθ} α_k* sinh r and the
//! dephasing factor is γ(t) = Σ_k 2|β_k|². The same sum expands to
//! Σ_k 4 g_k² (1 − cos ω_k t)/ω_k² [cosh 2r − cos(ω_k t − θ) sinh 2r],
//! whose continuum limit with 4 g²(ω) dω → J(ω) dω is the integral form.
//!
//! The global phase of the interaction-picture propagator has unit modulus
//! and cancels in the reduced state, so it is not computed.

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::spectral::{OhmicSpectrum, SqueezeParams};

/// Default frequency cut, in units of ω_c.
pub const DEFAULT_OMEGA_MAX_FACTOR: f64 = 40.0;

/// Mode sums are reduced in fixed chunks of this size, in order.
const CHUNK: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathMode<T> {
    omega: T,
    g: T,
}

impl<T: Real> BathMode<T> {
    pub fn new(omega: T, g: T) -> Result<Self> {
        if !(omega > T::zero()) || !omega.is_finite() {
            return Err(Error::domain(
                "omega",
                omega.as_f64(),
                "omega > 0 and finite",
            ));
        }
        if !g.is_finite() {
            return Err(Error::domain("g", g.as_f64(), "finite"));
        }
        Ok(BathMode { omega, g })
    }

    pub fn omega(&self) -> T {
        self.omega
    }

    pub fn g(&self) -> T {
        self.g
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Provenance<T> {
    Manual,
    Discretized {
        spec: OhmicSpectrum<T>,
        n_modes: usize,
        omega_max: T,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteBath<T> {
    modes: Vec<BathMode<T>>,
    provenance: Provenance<T>,
}

impl<T: Real> DiscreteBath<T> {
    pub fn manual(modes: Vec<BathMode<T>>) -> Result<Self> {
        if modes.is_empty() {
            return Err(Error::domain("n_modes", 0.0, "at least one mode"));
        }
        Ok(DiscreteBath {
            modes,
            provenance: Provenance::Manual,
        })
    }

    pub fn modes(&self) -> &[BathMode<T>] {
        &self.modes
    }

    pub fn provenance(&self) -> &Provenance<T> {
        &self.provenance
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    /// Σ_k 4 g_k², the discrete counterpart of ∫ J(ω) dω.
    pub fn total_weight(&self) -> T {
        chunked_sum(&self.modes, |m| T::lit(4.0) * m.g * m.g)
    }
}

/// α_k(t) = g_k (1 − e^{iω_k t}) / ω_k.
pub fn mode_amplitude<T: Real>(mode: &BathMode<T>, t: T) -> Complex<T> {
    let phase = mode.omega * t;
    let sh = (phase * T::lit(0.5)).sin();
    // 1 − e^{ix} = 2 sin²(x/2) − i sin x
    let one_minus = Complex::new(T::lit(2.0) * sh * sh, -phase.sin());
    one_minus * (mode.g / mode.omega)
}

/// β_k = α_k cosh r + e^{iθ} α_k* sinh r.
pub fn squeezed_amplitude<T: Real>(alpha_k: Complex<T>, sq: &SqueezeParams<T>) -> Complex<T> {
    let phase = Complex::new(sq.theta().cos(), sq.theta().sin());
    alpha_k * sq.r().cosh() + phase * alpha_k.conj() * sq.r().sinh()
}

fn chunked_sum<T: Real, F>(modes: &[BathMode<T>], term: F) -> T
where
    F: Fn(&BathMode<T>) -> T + Sync,
{
    let partial: Vec<T> = modes
        .par_chunks(CHUNK)
        .map(|chunk| chunk.iter().map(&term).fold(T::zero(), |acc, x| acc + x))
        .collect();
    partial.into_iter().fold(T::zero(), |acc, x| acc + x)
}

/// Both mode-sum forms of γ(t): (Σ 2|β_k|², closed per-mode expansion).
pub fn gamma_discrete_forms<T: Real>(
    bath: &DiscreteBath<T>,
    t: T,
    sq: &SqueezeParams<T>,
) -> Result<(T, T)> {
    if !(t >= T::zero()) || !t.is_finite() {
        return Err(Error::domain("t", t.as_f64(), "t ≥ 0 and finite"));
    }
    let two = T::lit(2.0);
    let beta_form = chunked_sum(&bath.modes, |m| {
        two * squeezed_amplitude(mode_amplitude(m, t), sq).norm_sqr()
    });

    let (cosh2r, sinh2r) = ((two * sq.r()).cosh(), (two * sq.r()).sinh());
    let closed_form = chunked_sum(&bath.modes, |m| {
        let phase = m.omega * t;
        let sh = (phase * T::lit(0.5)).sin();
        let window = two * sh * sh / (m.omega * m.omega);
        T::lit(4.0) * m.g * m.g * window * (cosh2r - (phase - sq.theta()).cos() * sinh2r)
    });
    Ok((beta_form, closed_form))
}

/// γ(t) for a finite bath; the two sum forms are cross-checked to 1e-12.
pub fn gamma_discrete<T: Real>(bath: &DiscreteBath<T>, t: T, sq: &SqueezeParams<T>) -> Result<T> {
    let (beta_form, closed_form) = gamma_discrete_forms(bath, t, sq)?;
    let scale = beta_form.abs().max(closed_form.abs());
    if (beta_form - closed_form).abs() > T::tolerance(1e-12) * scale {
        return Err(Error::FormMismatch {
            beta_form: beta_form.as_f64(),
            closed_form: closed_form.as_f64(),
        });
    }
    Ok(closed_form.max(T::zero()))
}

/// Midpoint discretization: ω_k = (k − ½)Δω, Δω = ω_max/N, g_k = √(J(ω_k)Δω/4).
pub fn discretize_spectrum<T: Real>(
    spec: &OhmicSpectrum<T>,
    n_modes: usize,
    omega_max: T,
) -> Result<DiscreteBath<T>> {
    if n_modes == 0 {
        return Err(Error::domain("n_modes", 0.0, "at least one mode"));
    }
    if !(omega_max > T::zero()) || !omega_max.is_finite() {
        return Err(Error::domain(
            "omega_max",
            omega_max.as_f64(),
            "positive and finite",
        ));
    }
    let dw = omega_max / T::from_count(n_modes);
    let half = T::lit(0.5);
    let modes = (1..=n_modes)
        .map(|k| {
            let omega = (T::from_count(k) - half) * dw;
            let g = (spec.density_unchecked(omega) * dw / T::lit(4.0)).sqrt();
            BathMode { omega, g }
        })
        .collect();
    Ok(DiscreteBath {
        modes,
        provenance: Provenance::Discretized {
            spec: *spec,
            n_modes,
            omega_max,
        },
    })
}
