//! Sweep configuration: a TOML document (a JSON mirror is also accepted).
//!
//! ```toml
//! quantity = "qfi_phi"      # gamma | qfi_phi | qfi_alpha | delta_qfi_vs_vacuum
//! method = "analytic"       # analytic | quadrature | discrete
//!
//! [fixed]
//! eta = 0.6
//! s = 2.0
//!
//! [axis1]
//! name = "r"
//! min = 0.0
//! max = 1.0
//! points = 41
//!
//! [axis2]
//! name = "t"
//! min = 0.0
//! max = 10.0
//! points = 51
//! endpoint = true          # optional, default true
//!
//! [options]                 # all optional
//! rel_tol = 1e-10           # quadrature
//! modes = 4000              # discrete
//! omega_max = 40.0          # discrete, default 40·omega_c
//! jobs = 4
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sqfi_core::dephasing::DEFAULT_REL_TOL;
use sqfi_core::{qfi_alpha, qfi_phi, GammaMethod, DEFAULT_OMEGA_MAX_FACTOR};

use crate::error::{HarnessError, Result};
use crate::params::{ModelPoint, Param};

pub const DEFAULT_MODES: usize = 4000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Quantity {
    Gamma,
    QfiPhi,
    QfiAlpha,
    DeltaQfiVsVacuum,
}

impl Quantity {
    pub const ALL: [Quantity; 4] = [
        Quantity::Gamma,
        Quantity::QfiPhi,
        Quantity::QfiAlpha,
        Quantity::DeltaQfiVsVacuum,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::Gamma => "gamma",
            Quantity::QfiPhi => "qfi_phi",
            Quantity::QfiAlpha => "qfi_alpha",
            Quantity::DeltaQfiVsVacuum => "delta_qfi_vs_vacuum",
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Quantity {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        Quantity::ALL
            .into_iter()
            .find(|q| q.name() == s.replace('-', "_"))
            .ok_or_else(|| HarnessError::Config(format!("unknown quantity '{s}'")))
    }
}

#[derive(
    Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum,
)]
#[serde(rename_all = "snake_case")]
pub enum MethodKind {
    #[default]
    Analytic,
    Quadrature,
    Discrete,
}

impl MethodKind {
    pub fn name(self) -> &'static str {
        match self {
            MethodKind::Analytic => "analytic",
            MethodKind::Quadrature => "quadrature",
            MethodKind::Discrete => "discrete",
        }
    }
}

impl FromStr for MethodKind {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "analytic" => Ok(MethodKind::Analytic),
            "quadrature" => Ok(MethodKind::Quadrature),
            "discrete" => Ok(MethodKind::Discrete),
            _ => Err(HarnessError::Config(format!("unknown method '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rel_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modes: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jobs: Option<usize>,
}

impl Options {
    pub fn is_empty(&self) -> bool {
        *self == Options::default()
    }
}

/// Method plus accuracy knobs, resolved per model point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MethodConfig {
    pub kind: MethodKind,
    pub rel_tol: Option<f64>,
    pub modes: Option<usize>,
    pub omega_max: Option<f64>,
}

impl MethodConfig {
    pub fn analytic() -> Self {
        MethodConfig {
            kind: MethodKind::Analytic,
            rel_tol: None,
            modes: None,
            omega_max: None,
        }
    }

    pub fn resolve(&self, point: &ModelPoint) -> GammaMethod {
        match self.kind {
            MethodKind::Analytic => GammaMethod::Analytic,
            MethodKind::Quadrature => GammaMethod::Quadrature {
                rel_tol: self.rel_tol.unwrap_or(DEFAULT_REL_TOL),
            },
            MethodKind::Discrete => GammaMethod::Discrete {
                n_modes: self.modes.unwrap_or(DEFAULT_MODES),
                omega_max: self
                    .omega_max
                    .unwrap_or(DEFAULT_OMEGA_MAX_FACTOR * point.omega_c),
            },
        }
    }
}

/// γ including the thermal factor 2⟨n⟩ + 1.
pub fn gamma_at(point: &ModelPoint, method: &MethodConfig) -> sqfi_core::Result<f64> {
    let spec = point.spectrum()?;
    let sq = point.squeeze()?;
    let thermal = point.thermal()?;
    method
        .resolve(point)
        .evaluate(point.t, &spec, &sq, Some(&thermal))
}

pub fn evaluate(
    quantity: Quantity,
    point: &ModelPoint,
    method: &MethodConfig,
) -> sqfi_core::Result<f64> {
    let gamma = gamma_at(point, method)?;
    match quantity {
        Quantity::Gamma => Ok(gamma),
        Quantity::QfiPhi => qfi_phi(gamma),
        Quantity::QfiAlpha => Ok(qfi_alpha()),
        Quantity::DeltaQfiVsVacuum => {
            let mut vacuum = *point;
            vacuum.r = 0.0;
            vacuum.theta = 0.0;
            let gamma_vac = gamma_at(&vacuum, method)?;
            Ok(qfi_phi(gamma)? - qfi_phi(gamma_vac)?)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub points: usize,
    /// Whether `max` itself is sampled; default true.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub endpoint: Option<bool>,
}

impl Axis {
    pub fn new(name: &str, min: f64, max: f64, points: usize) -> Self {
        Axis {
            name: name.to_string(),
            min,
            max,
            points,
            endpoint: None,
        }
    }

    /// Parses `name:min:max:points`.
    pub fn parse_compact(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad =
            || HarnessError::Config(format!("axis '{s}' is not of the form name:min:max:points"));
        if parts.len() != 4 {
            return Err(bad());
        }
        let num = |x: &str| x.trim().parse::<f64>().map_err(|_| bad());
        Ok(Axis::new(
            parts[0].trim(),
            num(parts[1])?,
            num(parts[2])?,
            parts[3].trim().parse().map_err(|_| bad())?,
        ))
    }

    pub fn param(&self) -> Result<Param> {
        self.name.parse()
    }

    pub fn values(&self) -> Vec<f64> {
        let intervals = if self.endpoint.unwrap_or(true) {
            self.points - 1
        } else {
            self.points
        };
        let span = self.max - self.min;
        (0..self.points)
            .map(|i| {
                if i == self.points - 1 && self.endpoint.unwrap_or(true) {
                    self.max
                } else {
                    self.min + span * i as f64 / intervals as f64
                }
            })
            .collect()
    }

    fn validate(&self) -> Result<Param> {
        let p = self.param()?;
        if self.points < 2 {
            return Err(HarnessError::Config(format!(
                "axis '{}' needs at least 2 points",
                self.name
            )));
        }
        if !self.min.is_finite() || !self.max.is_finite() || self.min >= self.max {
            return Err(HarnessError::Config(format!(
                "axis '{}' needs finite min < max (got {} .. {})",
                self.name, self.min, self.max
            )));
        }
        Ok(p)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub quantity: Quantity,
    #[serde(default)]
    pub method: MethodKind,
    #[serde(default)]
    pub fixed: BTreeMap<String, f64>,
    pub axis1: Axis,
    pub axis2: Axis,
    #[serde(default, skip_serializing_if = "Options::is_empty")]
    pub options: Options,
}

/// A validated spec with parameter names resolved.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub axis1: Param,
    pub axis2: Param,
    pub base: ModelPoint,
    pub method: MethodConfig,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<Resolved> {
        let a1 = self.axis1.validate()?;
        let a2 = self.axis2.validate()?;
        if a1 == a2 {
            return Err(HarnessError::Config(format!("both axes sweep '{a1}'")));
        }
        let mut bindings = Vec::with_capacity(self.fixed.len() + 2);
        for (name, &value) in &self.fixed {
            let p: Param = name.parse()?;
            if p == a1 || p == a2 {
                return Err(HarnessError::Config(format!(
                    "'{p}' is both fixed and swept"
                )));
            }
            if !value.is_finite() {
                return Err(HarnessError::Config(format!("fixed '{p}' is not finite")));
            }
            bindings.push((p, value));
        }
        bindings.push((a1, self.axis1.min));
        bindings.push((a2, self.axis2.min));
        let base = ModelPoint::from_bindings(bindings)?;

        if let Some(tol) = self.options.rel_tol {
            if !(1e-13..=1e-3).contains(&tol) {
                return Err(HarnessError::Config(format!(
                    "rel_tol {tol} outside [1e-13, 1e-3]"
                )));
            }
        }
        if self.options.modes == Some(0) {
            return Err(HarnessError::Config("modes must be at least 1".into()));
        }
        if let Some(w) = self.options.omega_max {
            if !(w > 0.0 && w.is_finite()) {
                return Err(HarnessError::Config(format!(
                    "omega_max {w} must be positive"
                )));
            }
        }
        if self.options.jobs == Some(0) {
            return Err(HarnessError::Config("jobs must be at least 1".into()));
        }
        Ok(Resolved {
            axis1: a1,
            axis2: a2,
            base,
            method: MethodConfig {
                kind: self.method,
                rel_tol: self.options.rel_tol,
                modes: self.options.modes,
                omega_max: self.options.omega_max,
            },
        })
    }

    /// Loads TOML, or JSON when the extension is `.json`.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        let is_json = path
            .extension()
            .is_some_and(|e| e.eq_ignore_ascii_case("json"));
        let parsed = if is_json {
            Self::from_json(&text)
        } else {
            Self::from_toml(&text)
        };
        parsed.map_err(|e| match e {
            HarnessError::Config(message) => HarnessError::Parse {
                path: path.to_path_buf(),
                message,
            },
            other => other,
        })
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("sweep spec serializes to TOML")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("sweep spec serializes to JSON")
    }
}
