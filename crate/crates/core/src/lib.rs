//! Dephasing of a qubit probe in a squeezed (thermal) Ohmic-family reservoir
//! and the resulting quantum Fisher information.
//!
//! Every numerical routine is generic over [`Real`] (`f32` or `f64`). The
//! type aliases at the crate root fix the scalar to `f64`, which is what the
//! tolerances quoted in the docs refer to.
//!
//! ```
//! use sqfi_core::{gamma_analytic, qfi_phi, OhmicSpectrum, SqueezeParams};
//!
//! let spec = OhmicSpectrum::new(0.6, 2.0, 1.0).unwrap();
//! let vacuum = SqueezeParams::new(0.0, 0.0).unwrap();
//! let g = gamma_analytic(1.0, &spec, &vacuum).unwrap();
//! assert!((g - 0.3).abs() < 1e-12);
//! assert!((qfi_phi(g).unwrap() - (-0.6f64).exp()).abs() < 1e-15);
//! ```

// Domain guards are written `!(x > 0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Quadrature nodes, Lanczos coefficients and reference values keep their published digits.
#![allow(clippy::excessive_precision)]

pub mod dephasing;
pub mod discrete_bath;
pub mod error;
pub mod qfi;
pub mod quadrature;
pub mod scalar;
pub mod special;
pub mod spectral;

pub use dephasing::{
    gamma_analytic, gamma_analytic_complex, gamma_quadrature, gamma_series, gamma_thermal,
    gamma_vacuum, thermal_factor, MethodTag,
};
pub use discrete_bath::{
    discretize_spectrum, gamma_discrete, gamma_discrete_forms, mode_amplitude, squeezed_amplitude,
    DEFAULT_OMEGA_MAX_FACTOR,
};
pub use error::{Error, Result};
pub use qfi::{
    cramer_rao_bound, evolve_state, prepare_state, qfi_alpha, qfi_general, qfi_phi, qfi_pure,
    FnFamily, Parameter, PureFamily, StateFamily,
};
pub use scalar::Real;
pub use special::gamma;
pub use spectral::{mean_occupation, spectral_density, SpectrumClass};

pub type SqueezeParams = spectral::SqueezeParams<f64>;
pub type OhmicSpectrum = spectral::OhmicSpectrum<f64>;
pub type ThermalParams = spectral::ThermalParams<f64>;
pub type GammaSeries = dephasing::GammaSeries<f64>;
pub type GammaMethod = dephasing::GammaMethod<f64>;
pub type QuadratureEstimate = quadrature::Estimate<f64>;
pub type BathMode = discrete_bath::BathMode<f64>;
pub type DiscreteBath = discrete_bath::DiscreteBath<f64>;
pub type ProbeState = qfi::ProbeState<f64>;
pub type DensityMatrix2 = qfi::DensityMatrix2<f64>;
pub type Matrix2 = qfi::Matrix2<f64>;
pub type QfiReport = qfi::QfiReport<f64>;
pub type EvolvedFamily = qfi::EvolvedFamily<f64>;
pub type ProbeKet = qfi::ProbeKet<f64>;
pub type DerivativeMode = qfi::DerivativeMode<f64>;
