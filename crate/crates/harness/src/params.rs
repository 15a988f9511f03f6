//! Named model parameters shared by the CLI flags and the sweep configs.

use std::fmt;
use std::str::FromStr;

use sqfi_core::{OhmicSpectrum, SqueezeParams, ThermalParams};

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Param {
    T,
    Eta,
    S,
    OmegaC,
    R,
    Theta,
    Temperature,
    Omega0,
    Boltzmann,
}

impl Param {
    pub const ALL: [Param; 9] = [
        Param::T,
        Param::Eta,
        Param::S,
        Param::OmegaC,
        Param::R,
        Param::Theta,
        Param::Temperature,
        Param::Omega0,
        Param::Boltzmann,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Param::T => "t",
            Param::Eta => "eta",
            Param::S => "s",
            Param::OmegaC => "omega_c",
            Param::R => "r",
            Param::Theta => "theta",
            Param::Temperature => "temperature",
            Param::Omega0 => "omega0",
            Param::Boltzmann => "boltzmann",
        }
    }

    /// `None` for parameters that must always be given.
    pub fn default_value(self) -> Option<f64> {
        match self {
            Param::T | Param::Eta | Param::S => None,
            Param::OmegaC | Param::Omega0 | Param::Boltzmann => Some(1.0),
            Param::R | Param::Theta | Param::Temperature => Some(0.0),
        }
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Param {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().replace('-', "_");
        Param::ALL
            .into_iter()
            .find(|p| p.name() == key)
            .ok_or_else(|| {
                let known: Vec<_> = Param::ALL.iter().map(|p| p.name()).collect();
                HarnessError::Config(format!(
                    "unknown parameter '{s}' (expected one of {})",
                    known.join(", ")
                ))
            })
    }
}

/// One full model instance: time, spectrum, squeezing and temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelPoint {
    pub t: f64,
    pub eta: f64,
    pub s: f64,
    pub omega_c: f64,
    pub r: f64,
    pub theta: f64,
    pub temperature: f64,
    pub omega0: f64,
    pub boltzmann: f64,
}

impl ModelPoint {
    /// Fills unbound parameters with their defaults; fails if a required one is missing.
    pub fn from_bindings<I: IntoIterator<Item = (Param, f64)>>(bindings: I) -> Result<Self> {
        let mut values: [Option<f64>; 9] = Param::ALL.map(Param::default_value);
        let mut seen = [false; 9];
        for (p, v) in bindings {
            let i = p as usize;
            if seen[i] {
                return Err(HarnessError::Config(format!("parameter '{p}' bound twice")));
            }
            seen[i] = true;
            values[i] = Some(v);
        }
        let missing: Vec<_> = Param::ALL
            .iter()
            .zip(&values)
            .filter(|(_, v)| v.is_none())
            .map(|(p, _)| p.name())
            .collect();
        if !missing.is_empty() {
            return Err(HarnessError::Config(format!(
                "missing required parameter(s): {}",
                missing.join(", ")
            )));
        }
        let v = values.map(|x| x.unwrap_or_default());
        Ok(ModelPoint {
            t: v[0],
            eta: v[1],
            s: v[2],
            omega_c: v[3],
            r: v[4],
            theta: v[5],
            temperature: v[6],
            omega0: v[7],
            boltzmann: v[8],
        })
    }

    pub fn get(&self, p: Param) -> f64 {
        match p {
            Param::T => self.t,
            Param::Eta => self.eta,
            Param::S => self.s,
            Param::OmegaC => self.omega_c,
            Param::R => self.r,
            Param::Theta => self.theta,
            Param::Temperature => self.temperature,
            Param::Omega0 => self.omega0,
            Param::Boltzmann => self.boltzmann,
        }
    }

    pub fn set(&mut self, p: Param, value: f64) {
        let slot = match p {
            Param::T => &mut self.t,
            Param::Eta => &mut self.eta,
            Param::S => &mut self.s,
            Param::OmegaC => &mut self.omega_c,
            Param::R => &mut self.r,
            Param::Theta => &mut self.theta,
            Param::Temperature => &mut self.temperature,
            Param::Omega0 => &mut self.omega0,
            Param::Boltzmann => &mut self.boltzmann,
        };
        *slot = value;
    }

    pub fn spectrum(&self) -> sqfi_core::Result<OhmicSpectrum> {
        OhmicSpectrum::new(self.eta, self.s, self.omega_c)
    }

    pub fn squeeze(&self) -> sqfi_core::Result<SqueezeParams> {
        SqueezeParams::new(self.r, self.theta)
    }

    pub fn thermal(&self) -> sqfi_core::Result<ThermalParams> {
        ThermalParams::with_boltzmann(self.temperature, self.omega0, self.boltzmann)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for p in Param::ALL {
            assert_eq!(p.name().parse::<Param>().unwrap(), p);
        }
        assert_eq!("omega-c".parse::<Param>().unwrap(), Param::OmegaC);
        assert!("omega".parse::<Param>().is_err());
    }

    #[test]
    fn defaults_and_required() {
        let p = ModelPoint::from_bindings([(Param::T, 1.0), (Param::Eta, 0.6), (Param::S, 2.0)])
            .unwrap();
        assert_eq!(p.omega_c, 1.0);
        assert_eq!(p.r, 0.0);
        assert_eq!(p.temperature, 0.0);
        let err = ModelPoint::from_bindings([(Param::T, 1.0)]).unwrap_err();
        assert!(err.to_string().contains("eta, s"));
        assert!(ModelPoint::from_bindings([(Param::T, 1.0), (Param::T, 2.0)]).is_err());
    }

    #[test]
    fn get_set() {
        let mut p =
            ModelPoint::from_bindings([(Param::T, 1.0), (Param::Eta, 0.6), (Param::S, 2.0)])
                .unwrap();
        for (i, q) in Param::ALL.into_iter().enumerate() {
            p.set(q, i as f64 + 0.5);
            assert_eq!(p.get(q), i as f64 + 0.5);
        }
    }
}
