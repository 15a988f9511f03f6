//! The dephasing factor γ(t) by three independent routes.
//!
//! * [`gamma_analytic`]: closed form in complex powers (1 ± iτ)^(1−s),
//!   (1 ± 2iτ)^(1−s) with τ = ω_c t.
//! * [`gamma_vacuum`]: the r = 0 special case written with arctan and a real
//!   power, evaluated through the real Gamma function at s − 1.
//! * [`gamma_quadrature`]: adaptive quadrature of
//!   ∫₀^∞ J(ω) (1 − cos ωt)/ω² [cosh 2r − cos(ωt − θ) sinh 2r] dω.
//!
//! All three agree to better than 1e-7 relative on the validation grid.

use num_complex::Complex;
use rayon::prelude::*;

use crate::discrete_bath::{discretize_spectrum, gamma_discrete};
use crate::error::{Error, Result};
use crate::quadrature::{self, Estimate};
use crate::scalar::Real;
use crate::special::gamma as euler_gamma;
use crate::spectral::{mean_occupation, OhmicSpectrum, SqueezeParams, ThermalParams};

/// Values in [−NEGATIVE_CLAMP, 0) are rounding noise and clamp to zero.
pub const NEGATIVE_CLAMP: f64 = 1e-12;

/// Largest tolerated imaginary part of the closed-form expression.
pub const IMAG_RESIDUE_TOL: f64 = 1e-10;

pub const DEFAULT_REL_TOL: f64 = 1e-10;

/// Panel count cap for the oscillatory quadrature.
pub const MAX_PANELS: usize = 4096;

const MAX_INTERVALS: usize = 200_000;

fn check_time<T: Real>(t: T) -> Result<()> {
    if t >= T::zero() && t.is_finite() {
        Ok(())
    } else {
        Err(Error::domain("t", t.as_f64(), "t ≥ 0 and finite"))
    }
}

fn clamp_nonnegative<T: Real>(value: T) -> Result<T> {
    if value >= T::zero() {
        Ok(value)
    } else if value >= -T::tolerance(NEGATIVE_CLAMP) {
        Ok(T::zero())
    } else {
        Err(Error::Negative {
            value: value.as_f64(),
        })
    }
}

/// exp(w) − 1 without cancellation for small |w|.
fn expm1_complex<T: Real>(w: Complex<T>) -> Complex<T> {
    let half_v = w.im * T::lit(0.5);
    let s = half_v.sin();
    Complex::new(
        w.re.exp_m1() * w.im.cos() - T::lit(2.0) * s * s,
        w.re.exp() * w.im.sin(),
    )
}

/// Principal log of 1 + i x. The base has real part 1, so its argument
/// atan x stays inside (−π/2, π/2) and no branch cut is crossed.
fn log_one_plus_i<T: Real>(x: T) -> Complex<T> {
    let arg = x.atan();
    debug_assert!(arg.abs() < T::FRAC_PI_2() || x.is_infinite());
    Complex::new(T::lit(0.5) * (x * x).ln_1p(), arg)
}

/// (z^a − 1)/a for z = exp(log_z), continued to a = 0 as log_z.
fn power_minus_one_over<T: Real>(a: T, log_z: Complex<T>) -> Complex<T> {
    if a == T::zero() {
        log_z
    } else {
        expm1_complex(log_z * a) / a
    }
}

/// The closed-form expression before the realness check, as a complex number.
///
/// With a = 1 − s and L(c) = Log(1 + i c τ), every complex power enters as
/// z^a − 1 = a·h(c) with h(c) = expm1(a L(c))/a, and Γ(s − 1)·a = −Γ(s).
/// That turns the closed form into
///
/// γ = (η/4) Γ(s) { 2 cosh 2r [h(1) + h(−1)]
///                  + e^{−iθ} sinh 2r [2h(−1) − h(−2)]
///                  + e^{iθ} sinh 2r [2h(1) − h(2)] },
///
/// which is finite and smooth through s = 1, where h(c) → L(c).
pub fn gamma_analytic_complex<T: Real>(
    t: T,
    spec: &OhmicSpectrum<T>,
    sq: &SqueezeParams<T>,
) -> Result<Complex<T>> {
    check_time(t)?;
    let tau = spec.omega_c() * t;
    let a = T::one() - spec.s();
    let two = T::lit(2.0);

    let h1p = power_minus_one_over(a, log_one_plus_i(tau));
    let h1m = power_minus_one_over(a, log_one_plus_i(-tau));
    let h2p = power_minus_one_over(a, log_one_plus_i(two * tau));
    let h2m = power_minus_one_over(a, log_one_plus_i(-two * tau));

    let two_r = two * sq.r();
    let (cosh2r, sinh2r) = (two_r.cosh(), two_r.sinh());
    let phase = Complex::new(sq.theta().cos(), sq.theta().sin());

    let vacuum = (h1p + h1m) * (two * cosh2r);
    let squeezed = (phase.conj() * (h1m * two - h2m) + phase * (h1p * two - h2p)) * sinh2r;

    let prefactor = spec.eta() * euler_gamma(spec.s()) / T::lit(4.0);
    Ok((vacuum + squeezed) * prefactor)
}

/// Closed-form dephasing factor of the squeezed vacuum reservoir.
///
/// The imaginary residue of the expression is checked against
/// [`IMAG_RESIDUE_TOL`] (relative to max(1, |γ|)) and discarded.
pub fn gamma_analytic<T: Real>(t: T, spec: &OhmicSpectrum<T>, sq: &SqueezeParams<T>) -> Result<T> {
    let z = gamma_analytic_complex(t, spec, sq)?;
    let scale = T::one().max(z.re.abs());
    if !z.re.is_finite() || z.im.abs() > T::tolerance(IMAG_RESIDUE_TOL) * scale {
        return Err(Error::ImaginaryResidue {
            real: z.re.as_f64(),
            imag: z.im.as_f64(),
        });
    }
    clamp_nonnegative(z.re)
}

/// Unsqueezed reservoir: η [1 − cos((s−1) arctan τ) / (1+τ²)^((s−1)/2)] Γ(s−1),
/// and (η/2) ln(1 + τ²) at s = 1.
pub fn gamma_vacuum<T: Real>(t: T, spec: &OhmicSpectrum<T>) -> Result<T> {
    check_time(t)?;
    let tau = spec.omega_c() * t;
    let half = T::lit(0.5);
    let log_mod = (tau * tau).ln_1p();
    if spec.s() == T::one() {
        return clamp_nonnegative(spec.eta() * half * log_mod);
    }
    let sm1 = spec.s() - T::one();
    // 1 − cos(x) e^q = −expm1(q) + 2 e^q sin²(x/2)
    let q = -half * sm1 * log_mod;
    let sx = (half * sm1 * tau.atan()).sin();
    let bracket = -q.exp_m1() + T::lit(2.0) * q.exp() * sx * sx;
    clamp_nonnegative(spec.eta() * bracket * euler_gamma(sm1))
}

fn check_rel_tol<T: Real>(rel_tol: T) -> Result<()> {
    let v = rel_tol.as_f64();
    if (1e-13..=1e-3).contains(&v) {
        Ok(())
    } else {
        Err(Error::domain("rel_tol", v, "1e-13 ≤ rel_tol ≤ 1e-3"))
    }
}

/// Upper bound on the integrand's mass beyond x = ω/ω_c ≥ `x`:
/// 2 η e^{2r} ∫ₓ^∞ u^{s−2} e^{−u} du.
fn tail_bound<T: Real>(x: T, spec: &OhmicSpectrum<T>, sq: &SqueezeParams<T>) -> T {
    let a = spec.s() - T::lit(2.0);
    let damping = T::one() - a.max(T::zero()) / x;
    T::lit(2.0) * spec.eta() * (T::lit(2.0) * sq.r()).exp() * x.powf(a) * (-x).exp() / damping
}

/// Quadrature of the integral definition of γ(t); returns the value together
/// with its estimated absolute error (tail truncation included).
///
/// The range is cut at U = ω_c (40 + ln(1/rel_tol)) and split into panels at
/// multiples of π/t (at most [`MAX_PANELS`]).
pub fn gamma_quadrature<T: Real>(
    t: T,
    spec: &OhmicSpectrum<T>,
    sq: &SqueezeParams<T>,
    rel_tol: T,
) -> Result<Estimate<T>> {
    check_time(t)?;
    check_rel_tol(rel_tol)?;
    if t == T::zero() {
        return Ok(Estimate::zero());
    }

    let two = T::lit(2.0);
    let half = T::lit(0.5);
    let (cosh2r, sinh2r) = ((two * sq.r()).cosh(), (two * sq.r()).sinh());
    let theta = sq.theta();
    let integrand = |omega: T| {
        if omega <= T::zero() {
            return T::zero();
        }
        let phase = omega * t;
        let sh = (half * phase).sin();
        // 1 − cos ωt = 2 sin²(ωt/2)
        let window = two * sh * sh / (omega * omega);
        spec.density_unchecked(omega) * window * (cosh2r - (phase - theta).cos() * sinh2r)
    };

    let x_max = T::lit(40.0) + rel_tol.recip().ln().max(T::zero());
    let upper = spec.omega_c() * x_max;
    let half_period = T::PI() / t;
    let step = if upper / half_period <= T::from_count(MAX_PANELS) {
        half_period
    } else {
        upper / T::from_count(MAX_PANELS)
    };
    let mut breakpoints: Vec<T> = (0..=MAX_PANELS)
        .map(|k| T::from_count(k) * step)
        .take_while(|&w| w < upper)
        .collect();
    breakpoints.push(upper);

    let opts = quadrature::Options {
        rel_tol,
        abs_tol: T::min_positive_value(),
        max_intervals: MAX_INTERVALS,
    };
    let mut est = quadrature::integrate_panels(&integrand, &breakpoints, &opts)?;
    est.abs_error = est.abs_error + tail_bound(x_max, spec, sq);
    if est.abs_error > rel_tol * est.value.abs() && est.abs_error > T::min_positive_value() {
        return Err(Error::Convergence {
            achieved: (est.abs_error / est.value.abs()).as_f64(),
            requested: rel_tol.as_f64(),
            intervals: est.intervals,
        });
    }
    est.value = clamp_nonnegative(est.value)?;
    Ok(est)
}

/// Squeezed thermal reservoir: (2⟨n⟩ + 1) γ(t).
pub fn gamma_thermal<T: Real>(
    t: T,
    spec: &OhmicSpectrum<T>,
    sq: &SqueezeParams<T>,
    thermal: &ThermalParams<T>,
) -> Result<T> {
    Ok(thermal_factor(thermal) * gamma_analytic(t, spec, sq)?)
}

/// The factor 2⟨n⟩ + 1 multiplying the vacuum-temperature dephasing.
pub fn thermal_factor<T: Real>(thermal: &ThermalParams<T>) -> T {
    T::lit(2.0) * mean_occupation(thermal) + T::one()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MethodTag {
    Analytic,
    Quadrature,
    Discrete,
}

impl MethodTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            MethodTag::Analytic => "analytic",
            MethodTag::Quadrature => "quadrature",
            MethodTag::Discrete => "discrete",
        }
    }
}

/// How γ(t) is evaluated, with the route's own accuracy knobs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GammaMethod<T> {
    Analytic,
    Quadrature { rel_tol: T },
    Discrete { n_modes: usize, omega_max: T },
}

impl<T: Real> GammaMethod<T> {
    pub fn tag(&self) -> MethodTag {
        match self {
            GammaMethod::Analytic => MethodTag::Analytic,
            GammaMethod::Quadrature { .. } => MethodTag::Quadrature,
            GammaMethod::Discrete { .. } => MethodTag::Discrete,
        }
    }

    /// Evaluates γ(t) (times 2⟨n⟩ + 1 when a thermal state is given).
    pub fn evaluate(
        &self,
        t: T,
        spec: &OhmicSpectrum<T>,
        sq: &SqueezeParams<T>,
        thermal: Option<&ThermalParams<T>>,
    ) -> Result<T> {
        let base = match *self {
            GammaMethod::Analytic => gamma_analytic(t, spec, sq)?,
            GammaMethod::Quadrature { rel_tol } => gamma_quadrature(t, spec, sq, rel_tol)?.value,
            GammaMethod::Discrete { n_modes, omega_max } => {
                let bath = discretize_spectrum(spec, n_modes, omega_max)?;
                gamma_discrete(&bath, t, sq)?
            }
        };
        Ok(thermal.map_or(T::one(), thermal_factor) * base)
    }
}

/// γ(t) sampled on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaSeries<T> {
    times: Vec<T>,
    values: Vec<T>,
    method: MethodTag,
}

impl<T: Real> GammaSeries<T> {
    pub fn new(times: Vec<T>, values: Vec<T>, method: MethodTag) -> Result<Self> {
        validate_grid(&times)?;
        if times.len() != values.len() {
            return Err(Error::InvalidGrid {
                reason: "times and values differ in length",
            });
        }
        if values.iter().any(|v| !(*v >= T::zero())) {
            return Err(Error::InvalidGrid {
                reason: "dephasing values must be nonnegative",
            });
        }
        Ok(GammaSeries {
            times,
            values,
            method,
        })
    }

    pub fn times(&self) -> &[T] {
        &self.times
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn method(&self) -> MethodTag {
        self.method
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (T, T)> + '_ {
        self.times.iter().copied().zip(self.values.iter().copied())
    }
}

fn validate_grid<T: Real>(times: &[T]) -> Result<()> {
    if times.is_empty() {
        return Err(Error::InvalidGrid {
            reason: "empty grid",
        });
    }
    if times.iter().any(|t| !(*t >= T::zero()) || !t.is_finite()) {
        return Err(Error::InvalidGrid {
            reason: "times must be finite and nonnegative",
        });
    }
    if times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidGrid {
            reason: "times must be strictly increasing",
        });
    }
    Ok(())
}

/// Evaluates γ on every grid point in parallel.
///
/// Points are independent, so the output is identical to a sequential pass.
/// The first failing time (in grid order) is reported.
pub fn gamma_series<T: Real>(
    times: &[T],
    spec: &OhmicSpectrum<T>,
    sq: &SqueezeParams<T>,
    thermal: Option<&ThermalParams<T>>,
    method: &GammaMethod<T>,
) -> Result<GammaSeries<T>> {
    validate_grid(times)?;
    let results: Vec<Result<T>> = times
        .par_iter()
        .map(|&t| method.evaluate(t, spec, sq, thermal))
        .collect();
    let mut values = Vec::with_capacity(times.len());
    for (&t, r) in times.iter().zip(results) {
        values.push(r.map_err(|e| Error::AtTime {
            t: t.as_f64(),
            source: Box::new(e),
        })?);
    }
    GammaSeries::new(times.to_vec(), values, method.tag())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{LN_2, PI};

    fn spec(eta: f64, s: f64) -> OhmicSpectrum<f64> {
        OhmicSpectrum::new(eta, s, 1.0).unwrap()
    }

    fn sq(r: f64, theta: f64) -> SqueezeParams<f64> {
        SqueezeParams::new(r, theta).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        if a == b {
            0.0
        } else {
            (a - b).abs() / a.abs().max(b.abs())
        }
    }

    #[test]
    fn zero_time_is_zero() {
        for &s in &[0.5, 1.0, 2.0] {
            assert_eq!(
                gamma_analytic(0.0, &spec(0.6, s), &sq(0.8, 2.0)).unwrap(),
                0.0
            );
            assert_eq!(gamma_vacuum(0.0, &spec(0.6, s)).unwrap(), 0.0);
            let q = gamma_quadrature(0.0, &spec(0.6, s), &sq(0.8, 2.0), 1e-10).unwrap();
            assert_eq!(q.value, 0.0);
            assert_eq!(q.evaluations, 0);
        }
    }

    #[test]
    fn super_ohmic_vacuum_at_unit_time() {
        let g = gamma_analytic(1.0, &spec(0.6, 2.0), &sq(0.0, 0.0)).unwrap();
        assert!((g - 0.3).abs() < 1e-12, "{g}");
        let g = gamma_vacuum(1.0, &spec(0.6, 2.0)).unwrap();
        assert!((g - 0.3).abs() < 1e-12, "{g}");
    }

    #[test]
    fn ohmic_vacuum_limit() {
        let g = gamma_vacuum(1.0, &spec(0.6, 1.0)).unwrap();
        assert!((g - 0.3 * LN_2).abs() < 1e-15);
        assert!((g - 0.207_944).abs() < 1e-6);
        for ds in [1e-6, -1e-6] {
            let near = gamma_vacuum(1.0, &spec(0.6, 1.0 + ds)).unwrap();
            assert!(rel(g, near) < 1e-5);
        }
    }

    // Reference integrals from 25-digit arbitrary-precision quadrature of the
    // integral definition, panels at multiples of π/t.
    #[test]
    fn closed_form_matches_reference_integrals() {
        let table = [
            (2.0, 0.6, 1.0, 0.8, 2.0, 0.611_530_717_273_411_901),
            (1.0, 0.6, 1.0, 0.0, 0.0, 0.207_944_154_167_983_585),
            (5.0, 0.6, 0.8, 0.8, 3.0, 2.220_745_598_964_323_45),
            (1.0, 0.6, 2.0, 0.8, 0.0, 0.915_773_418_550_479_357),
            (3.0, 1.0, 0.5, 0.3, 1.0, 1.401_191_227_622_229_99),
        ];
        for (t, eta, s, r, th, want) in table {
            let g = gamma_analytic(t, &spec(eta, s), &sq(r, th)).unwrap();
            assert!(
                rel(g, want) < 1e-12,
                "t={t} s={s} r={r} θ={th}: {g} vs {want}"
            );
        }
    }

    #[test]
    fn quadrature_matches_vacuum_value() {
        let q = gamma_quadrature(1.0, &spec(0.6, 2.0), &sq(0.0, 0.0), 1e-10).unwrap();
        assert!((q.value - 0.3).abs() < 3e-11, "{:?}", q);
        assert!(q.abs_error <= 1e-10 * q.value);
    }

    #[test]
    fn quadrature_matches_closed_form_sub_ohmic() {
        let s = spec(0.6, 0.8);
        let p = sq(0.8, 3.0);
        let q = gamma_quadrature(5.0, &s, &p, 1e-9).unwrap();
        let a = gamma_analytic(5.0, &s, &p).unwrap();
        assert!(rel(q.value, a) < 1e-7);
    }

    #[test]
    fn quadrature_rejects_bad_tolerance() {
        assert!(gamma_quadrature(1.0, &spec(0.6, 2.0), &sq(0.0, 0.0), 1e-2).is_err());
        assert!(gamma_quadrature(1.0, &spec(0.6, 2.0), &sq(0.0, 0.0), 1e-15).is_err());
    }

    #[test]
    fn small_frequency_behaviour_is_finite() {
        // integrand ~ η ω^s t²/2 · [cosh 2r − cos θ sinh 2r] as ω → 0
        let (s, t, r, th) = (0.4_f64, 2.0_f64, 0.5_f64, 1.0_f64);
        let w = 1e-7_f64;
        let bracket = (2.0 * r).cosh() - (w * t - th).cos() * (2.0 * r).sinh();
        let window = 2.0 * (0.5 * w * t).sin().powi(2) / (w * w);
        let exact = 0.6 * w.powf(s) * (-w).exp() * window * bracket;
        let taylor =
            0.6 * w.powf(s) * t * t / 2.0 * ((2.0 * r).cosh() - th.cos() * (2.0 * r).sinh());
        assert!(rel(exact, taylor) < 1e-5);
        assert!(exact.is_finite());
    }

    #[test]
    fn negative_time_rejected() {
        assert!(gamma_analytic(-1.0, &spec(0.6, 2.0), &sq(0.0, 0.0)).is_err());
        assert!(gamma_vacuum(-1.0, &spec(0.6, 2.0)).is_err());
        assert!(gamma_quadrature(-1.0, &spec(0.6, 2.0), &sq(0.0, 0.0), 1e-8).is_err());
    }

    #[test]
    fn thermal_examples() {
        let s = spec(0.6, 2.0);
        let p = sq(0.0, 0.0);
        let cold = ThermalParams::vacuum(1.0).unwrap();
        assert_eq!(
            gamma_thermal(1.0, &s, &p, &cold).unwrap(),
            gamma_analytic(1.0, &s, &p).unwrap()
        );
        let warm = ThermalParams::new(1.0, LN_2).unwrap();
        let g = gamma_thermal(1.0, &s, &p, &warm).unwrap();
        assert!((g - 0.9).abs() < 1e-12);
    }

    #[test]
    fn thermal_increases_with_temperature() {
        let s = spec(0.6, 0.8);
        let p = sq(0.8, PI / 2.0);
        let mut prev = 0.0;
        for i in 0..20 {
            let th = ThermalParams::new(0.1 + 0.3 * i as f64, 1.0).unwrap();
            let g = gamma_thermal(5.0, &s, &p, &th).unwrap();
            assert!(g > prev);
            prev = g;
        }
    }

    #[test]
    fn cutoff_rescaling() {
        for &wc in &[0.5, 2.0, 7.0] {
            let scaled = OhmicSpectrum::new(0.6, 1.4, wc).unwrap();
            let unit = spec(0.6, 1.4);
            let p = sq(0.3, 2.5);
            for &t in &[0.1, 1.0, 3.7] {
                let a = gamma_analytic(t, &scaled, &p).unwrap();
                let b = gamma_analytic(wc * t, &unit, &p).unwrap();
                assert!(rel(a, b) < 1e-12);
            }
        }
    }

    #[test]
    fn series_examples() {
        let s = spec(0.6, 2.0);
        let p = sq(0.0, 0.0);
        let one = gamma_series(&[0.0], &s, &p, None, &GammaMethod::Analytic).unwrap();
        assert_eq!(one.values(), &[0.0]);
        let two = gamma_series(&[0.0, 1.0], &s, &p, None, &GammaMethod::Analytic).unwrap();
        assert_eq!(two.values()[0], 0.0);
        assert!((two.values()[1] - 0.3).abs() < 1e-12);
        assert_eq!(two.method(), MethodTag::Analytic);
    }

    #[test]
    fn series_rejects_bad_grids() {
        let s = spec(0.6, 2.0);
        let p = sq(0.0, 0.0);
        assert!(gamma_series(&[1.0, 1.0], &s, &p, None, &GammaMethod::Analytic).is_err());
        assert!(gamma_series(&[-1.0, 1.0], &s, &p, None, &GammaMethod::Analytic).is_err());
        assert!(gamma_series::<f64>(&[], &s, &p, None, &GammaMethod::Analytic).is_err());
    }

    #[test]
    fn series_reports_failing_time() {
        let s = spec(0.6, 2.0);
        let p = sq(0.0, 0.0);
        let m = GammaMethod::Discrete {
            n_modes: 0,
            omega_max: 40.0,
        };
        match gamma_series(&[0.0, 1.0], &s, &p, None, &m) {
            Err(Error::AtTime { t, .. }) => assert_eq!(t, 0.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn clamp_behaviour() {
        assert_eq!(clamp_nonnegative(-5e-13_f64).unwrap(), 0.0);
        assert!(clamp_nonnegative(-1e-9_f64).is_err());
        assert_eq!(clamp_nonnegative(0.25_f64).unwrap(), 0.25);
    }

    #[test]
    fn single_precision_tracks_double() {
        let s32 = OhmicSpectrum::<f32>::new(0.6, 2.0, 1.0).unwrap();
        let p32 = SqueezeParams::<f32>::new(0.8, 0.0).unwrap();
        let g32 = gamma_analytic(1.0_f32, &s32, &p32).unwrap();
        let g64 = gamma_analytic(1.0, &spec(0.6, 2.0), &sq(0.8, 0.0)).unwrap();
        assert!(((g32 as f64) - g64).abs() < 1e-5);
    }
}
