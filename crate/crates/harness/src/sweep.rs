use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sqfi_core::dephasing::{DEFAULT_REL_TOL, IMAG_RESIDUE_TOL, NEGATIVE_CLAMP};
use sqfi_core::DEFAULT_OMEGA_MAX_FACTOR;

use crate::config::{evaluate, MethodKind, SweepSpec, DEFAULT_MODES};
use crate::error::{HarnessError, Result};

/// Environment variable that overrides the default worker count.
pub const JOBS_ENV: &str = "SQFI_JOBS";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub axis1: f64,
    pub axis2: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub method: String,
    pub shape: [usize; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rel_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modes: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_max_over_omega_c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_max: Option<f64>,
    pub imag_residue_tol: f64,
    pub negative_clamp: f64,
    pub jobs: usize,
    pub wall_time_s: f64,
}

/// Grid rows are ordered axis1-major: all axis2 values for the first axis1 value, then the next.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub spec: SweepSpec,
    pub grid: Vec<GridPoint>,
    pub metadata: Metadata,
}

impl SweepResult {
    pub fn axis1_values(&self) -> Vec<f64> {
        self.grid
            .iter()
            .step_by(self.metadata.shape[1])
            .map(|p| p.axis1)
            .collect()
    }

    pub fn axis2_values(&self) -> Vec<f64> {
        self.grid[..self.metadata.shape[1]]
            .iter()
            .map(|p| p.axis2)
            .collect()
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.grid[i * self.metadata.shape[1] + j].value
    }

    /// Values along axis1 at fixed axis2 index `j`.
    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.metadata.shape[0])
            .map(|i| self.value(i, j))
            .collect()
    }

    /// Values along axis2 at fixed axis1 index `i`.
    pub fn row(&self, i: usize) -> Vec<f64> {
        let n = self.metadata.shape[1];
        self.grid[i * n..(i + 1) * n]
            .iter()
            .map(|p| p.value)
            .collect()
    }
}

/// Worker count: explicit value, else the spec's `jobs`, else [`default_jobs`].
pub fn resolve_jobs(explicit: Option<usize>, spec: &SweepSpec) -> Result<usize> {
    match explicit.or(spec.options.jobs) {
        Some(0) => Err(HarnessError::Config("jobs must be at least 1".into())),
        Some(j) => Ok(j),
        None => default_jobs(),
    }
}

/// `SQFI_JOBS` when set, else the number of processors.
pub fn default_jobs() -> Result<usize> {
    match std::env::var(JOBS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(j) if j > 0 => Ok(j),
            _ => Err(HarnessError::Config(format!(
                "{JOBS_ENV}='{v}' is not a positive integer"
            ))),
        },
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    run_sweep_with_jobs(spec, None)
}

pub fn run_sweep_with_jobs(spec: &SweepSpec, jobs: Option<usize>) -> Result<SweepResult> {
    let resolved = spec.validate()?;
    let jobs = resolve_jobs(jobs, spec)?;
    let xs = spec.axis1.values();
    let ys = spec.axis2.values();
    let (n1, n2) = (xs.len(), ys.len());

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| HarnessError::Pool(e.to_string()))?;

    let start = Instant::now();
    let mut slots: Vec<Option<sqfi_core::Result<f64>>> = vec![None; n1 * n2];
    pool.install(|| {
        slots.par_iter_mut().enumerate().for_each(|(k, slot)| {
            let mut point = resolved.base;
            point.set(resolved.axis1, xs[k / n2]);
            point.set(resolved.axis2, ys[k % n2]);
            *slot = Some(evaluate(spec.quantity, &point, &resolved.method));
        });
    });
    let wall_time_s = start.elapsed().as_secs_f64();

    let mut grid = Vec::with_capacity(n1 * n2);
    for (k, slot) in slots.into_iter().enumerate() {
        let (x, y) = (xs[k / n2], ys[k % n2]);
        let at = |source| HarnessError::Point {
            axis1: spec.axis1.name.clone(),
            value1: x,
            axis2: spec.axis2.name.clone(),
            value2: y,
            source,
        };
        let value = slot.expect("every slot is filled").map_err(at)?;
        if !value.is_finite() {
            return Err(at(sqfi_core::Error::Domain {
                name: "value",
                value,
                requirement: "finite",
            }));
        }
        grid.push(GridPoint {
            axis1: x,
            axis2: y,
            value,
        });
    }

    let m = &resolved.method;
    let discrete = m.kind == MethodKind::Discrete;
    let metadata = Metadata {
        method: m.kind.name().to_string(),
        shape: [n1, n2],
        rel_tol: (m.kind == MethodKind::Quadrature).then(|| m.rel_tol.unwrap_or(DEFAULT_REL_TOL)),
        modes: discrete.then(|| m.modes.unwrap_or(DEFAULT_MODES)),
        omega_max_over_omega_c: (discrete && m.omega_max.is_none())
            .then_some(DEFAULT_OMEGA_MAX_FACTOR),
        omega_max: if discrete { m.omega_max } else { None },
        imag_residue_tol: IMAG_RESIDUE_TOL,
        negative_clamp: NEGATIVE_CLAMP,
        jobs: pool.current_num_threads(),
        wall_time_s,
    };
    Ok(SweepResult {
        spec: spec.clone(),
        grid,
        metadata,
    })
}
