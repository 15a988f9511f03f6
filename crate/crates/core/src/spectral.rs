//! Reservoir parameters and the Ohmic-family spectral density.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Squeezing of the reservoir modes: magnitude `r` and reference phase `theta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeParams<T> {
    r: T,
    theta: T,
}

impl<T: Real> SqueezeParams<T> {
    /// `theta` is reduced into [0, 2π).
    pub fn new(r: T, theta: T) -> Result<Self> {
        if !(r >= T::zero()) || !r.is_finite() {
            return Err(Error::domain("r", r.as_f64(), "r ≥ 0 and finite"));
        }
        if !theta.is_finite() {
            return Err(Error::domain("theta", theta.as_f64(), "finite"));
        }
        Ok(SqueezeParams {
            r,
            theta: reduce_angle(theta),
        })
    }

    pub fn vacuum() -> Self {
        SqueezeParams {
            r: T::zero(),
            theta: T::zero(),
        }
    }

    pub fn r(&self) -> T {
        self.r
    }

    pub fn theta(&self) -> T {
        self.theta
    }

    pub fn is_vacuum(&self) -> bool {
        self.r == T::zero()
    }
}

/// Reduces an angle into [0, 2π).
pub(crate) fn reduce_angle<T: Real>(x: T) -> T {
    let two_pi = T::TAU();
    let mut y = x % two_pi;
    if y < T::zero() {
        y = y + two_pi;
    }
    if y >= two_pi {
        y = T::zero();
    }
    y
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpectrumClass {
    SubOhmic,
    Ohmic,
    SuperOhmic,
}

impl fmt::Display for SpectrumClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpectrumClass::SubOhmic => "sub-Ohmic",
            SpectrumClass::Ohmic => "Ohmic",
            SpectrumClass::SuperOhmic => "super-Ohmic",
        })
    }
}

/// J(ω) = η ω^s / ω_c^(s−1) · exp(−ω/ω_c).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OhmicSpectrum<T> {
    eta: T,
    s: T,
    omega_c: T,
}

impl<T: Real> OhmicSpectrum<T> {
    pub fn new(eta: T, s: T, omega_c: T) -> Result<Self> {
        let positive = |name, v: T| {
            if v > T::zero() && v.is_finite() {
                Ok(())
            } else {
                Err(Error::domain(name, v.as_f64(), "positive and finite"))
            }
        };
        positive("eta", eta)?;
        positive("s", s)?;
        positive("omega_c", omega_c)?;
        Ok(OhmicSpectrum { eta, s, omega_c })
    }

    pub fn eta(&self) -> T {
        self.eta
    }

    pub fn s(&self) -> T {
        self.s
    }

    pub fn omega_c(&self) -> T {
        self.omega_c
    }

    pub fn classify(&self) -> SpectrumClass {
        if self.s < T::one() {
            SpectrumClass::SubOhmic
        } else if self.s == T::one() {
            SpectrumClass::Ohmic
        } else {
            SpectrumClass::SuperOhmic
        }
    }

    /// Same spectrum with a different Ohmicity exponent.
    pub fn with_s(&self, s: T) -> Result<Self> {
        Self::new(self.eta, s, self.omega_c)
    }

    pub(crate) fn density_unchecked(&self, omega: T) -> T {
        let x = omega / self.omega_c;
        self.eta * self.omega_c * x.powf(self.s) * (-x).exp()
    }
}

/// Reservoir temperature together with the qubit frequency that sets ⟨n⟩.
///
/// Only ω₀ enters the occupation number, not a mode-resolved n̄(ω_k); the
/// thermal factor is therefore a single multiplicative constant on γ(t).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalParams<T> {
    temperature: T,
    omega0: T,
    boltzmann: T,
}

impl<T: Real> ThermalParams<T> {
    /// Natural units, k_B = 1.
    pub fn new(temperature: T, omega0: T) -> Result<Self> {
        Self::with_boltzmann(temperature, omega0, T::one())
    }

    pub fn with_boltzmann(temperature: T, omega0: T, boltzmann: T) -> Result<Self> {
        if !(temperature >= T::zero()) || !temperature.is_finite() {
            return Err(Error::domain(
                "temperature",
                temperature.as_f64(),
                "temperature ≥ 0",
            ));
        }
        if !(omega0 > T::zero()) || !omega0.is_finite() {
            return Err(Error::domain(
                "omega0",
                omega0.as_f64(),
                "positive and finite",
            ));
        }
        if !(boltzmann > T::zero()) || !boltzmann.is_finite() {
            return Err(Error::domain(
                "boltzmann",
                boltzmann.as_f64(),
                "positive and finite",
            ));
        }
        Ok(ThermalParams {
            temperature,
            omega0,
            boltzmann,
        })
    }

    /// Zero temperature: the squeezed vacuum.
    pub fn vacuum(omega0: T) -> Result<Self> {
        Self::new(T::zero(), omega0)
    }

    pub fn temperature(&self) -> T {
        self.temperature
    }

    pub fn omega0(&self) -> T {
        self.omega0
    }

    pub fn boltzmann(&self) -> T {
        self.boltzmann
    }

    /// Inverse temperature 1/(k T); `None` at T = 0.
    pub fn beta(&self) -> Option<T> {
        if self.temperature > T::zero() {
            Some(T::one() / (self.boltzmann * self.temperature))
        } else {
            None
        }
    }
}

/// Evaluates J(ω) for ω > 0.
pub fn spectral_density<T: Real>(omega: T, spec: &OhmicSpectrum<T>) -> Result<T> {
    if !(omega > T::zero()) {
        return Err(Error::domain("omega", omega.as_f64(), "omega > 0"));
    }
    Ok(spec.density_unchecked(omega))
}

/// Bose–Einstein occupation ⟨n⟩ = 1/(exp(βω₀) − 1), zero at T = 0.
pub fn mean_occupation<T: Real>(thermal: &ThermalParams<T>) -> T {
    match thermal.beta() {
        None => T::zero(),
        Some(beta) => T::one() / (beta * thermal.omega0).exp_m1(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{LN_2, PI};

    fn spec(eta: f64, s: f64, wc: f64) -> OhmicSpectrum<f64> {
        OhmicSpectrum::new(eta, s, wc).unwrap()
    }

    #[test]
    fn density_examples() {
        let j = spectral_density(1.0, &spec(0.6, 2.0, 1.0)).unwrap();
        assert!((j - 0.6 * (-1.0_f64).exp()).abs() < 1e-15);
        assert!((j - 0.220_728).abs() < 1e-6);
        let j = spectral_density(2.0, &spec(1.0, 1.0, 1.0)).unwrap();
        assert!((j - 0.270_671).abs() < 1e-6);
        assert!(spectral_density(1e-300, &spec(0.6, 2.0, 1.0)).unwrap() < 1e-100);
    }

    #[test]
    fn density_rejects_nonpositive_frequency() {
        assert!(spectral_density(0.0, &spec(1.0, 1.0, 1.0)).is_err());
        assert!(spectral_density(-1.0, &spec(1.0, 1.0, 1.0)).is_err());
    }

    #[test]
    fn density_is_positive_and_bounded_on_log_grid() {
        for &s in &[0.3, 0.8, 1.0, 2.0, 3.0] {
            let sp = spec(0.6, s, 1.0);
            let mut max = 0.0_f64;
            for i in 0..=900 {
                let w = 10f64.powf(-6.0 + 9.0 * i as f64 / 900.0);
                let j = spectral_density(w, &sp).unwrap();
                assert!(j >= 0.0 && j.is_finite(), "s={s} ω={w}");
                // e^{−ω} underflows beyond ω ≈ 700
                if w < 700.0 {
                    assert!(j > 0.0, "s={s} ω={w}");
                }
                max = max.max(j);
            }
            assert!(max.is_finite());
        }
    }

    #[test]
    fn cutoff_scaling_law() {
        for &c in &[0.25, 3.0, 17.0] {
            for &w in &[1e-3, 0.5, 2.0, 30.0] {
                let lhs = spectral_density(w, &spec(0.6, 1.7, c)).unwrap() / c;
                let rhs = spectral_density(w / c, &spec(0.6, 1.7, 1.0)).unwrap();
                assert!((lhs - rhs).abs() <= 1e-12 * rhs, "c={c} ω={w}");
            }
        }
    }

    #[test]
    fn classification_labels() {
        assert_eq!(spec(1.0, 0.5, 1.0).classify(), SpectrumClass::SubOhmic);
        assert_eq!(spec(1.0, 1.0, 1.0).classify(), SpectrumClass::Ohmic);
        assert_eq!(spec(1.0, 2.0, 1.0).classify(), SpectrumClass::SuperOhmic);
        assert_eq!(SpectrumClass::SubOhmic.to_string(), "sub-Ohmic");
    }

    #[test]
    fn invalid_spectra() {
        assert!(OhmicSpectrum::new(0.0, 1.0, 1.0).is_err());
        assert!(OhmicSpectrum::new(1.0, 0.0, 1.0).is_err());
        assert!(OhmicSpectrum::new(1.0, 1.0, -1.0).is_err());
        assert!(OhmicSpectrum::new(1.0, f64::NAN, 1.0).is_err());
    }

    #[test]
    fn theta_is_reduced() {
        let sq = SqueezeParams::new(0.5, -PI / 2.0).unwrap();
        assert!((sq.theta() - 1.5 * PI).abs() < 1e-15);
        let sq = SqueezeParams::new(0.5, 5.0 * PI).unwrap();
        assert!((sq.theta() - PI).abs() < 1e-14);
        assert_eq!(SqueezeParams::new(0.0, 2.0 * PI).unwrap().theta(), 0.0);
        assert!(SqueezeParams::new(-0.1, 0.0).is_err());
    }

    #[test]
    fn occupation_examples() {
        assert_eq!(mean_occupation(&ThermalParams::vacuum(1.0).unwrap()), 0.0);
        // β ω₀ = ln 2 with T = 1
        let th = ThermalParams::new(1.0, LN_2).unwrap();
        assert!((mean_occupation(&th) - 1.0).abs() < 1e-14);
        let th = ThermalParams::new(1.0, 1.5_f64.ln()).unwrap();
        assert!((mean_occupation(&th) - 2.0).abs() < 1e-13);
        assert!(ThermalParams::new(1.0, 1.0).unwrap().beta().is_some());
        assert!(ThermalParams::vacuum(1.0).unwrap().beta().is_none());
    }

    #[test]
    fn occupation_increases_with_temperature() {
        let mut prev = -1.0;
        for i in 0..20 {
            let th = ThermalParams::new(0.05 + 0.25 * i as f64, 1.3).unwrap();
            let n = mean_occupation(&th);
            assert!(n > prev);
            prev = n;
        }
    }

    #[test]
    fn boltzmann_constant_rescales_temperature() {
        let a = ThermalParams::<f64>::with_boltzmann(2.0, 1.0, 0.5).unwrap();
        let b = ThermalParams::new(1.0, 1.0).unwrap();
        assert!((mean_occupation(&a) - mean_occupation(&b)).abs() < 1e-15);
        assert!(ThermalParams::with_boltzmann(1.0, 1.0, 0.0).is_err());
        assert!(ThermalParams::new(-1.0, 1.0).is_err());
    }
}
