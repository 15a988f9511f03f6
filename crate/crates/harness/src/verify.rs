//! Closed form against quadrature over the reference grid.

use std::f64::consts::PI;

use rayon::prelude::*;
use sqfi_core::{gamma_analytic, gamma_quadrature, gamma_vacuum, OhmicSpectrum, SqueezeParams};

use crate::error::{HarnessError, Result};

pub const GRID_S: [f64; 3] = [0.8, 1.0, 2.0];
pub const GRID_R: [f64; 3] = [0.0, 0.1, 0.8];
pub const GRID_THETA: [f64; 4] = [0.0, 2.0, 3.0, PI];
pub const GRID_TIMES: usize = 50;
pub const GRID_T_MAX: f64 = 10.0;
pub const GRID_ETA: f64 = 0.6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridCase {
    pub s: f64,
    pub r: f64,
    pub theta: f64,
    pub t: f64,
}

pub fn oracle_grid() -> Vec<GridCase> {
    let mut cases = Vec::with_capacity(GRID_S.len() * GRID_R.len() * GRID_THETA.len() * GRID_TIMES);
    for &s in &GRID_S {
        for &r in &GRID_R {
            for &theta in &GRID_THETA {
                for k in 0..GRID_TIMES {
                    let t = GRID_T_MAX * k as f64 / (GRID_TIMES - 1) as f64;
                    cases.push(GridCase { s, r, theta, t });
                }
            }
        }
    }
    cases
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Deviation {
    pub case: GridCase,
    pub analytic: f64,
    pub quadrature: f64,
    pub rel: f64,
    pub abs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub points: usize,
    pub worst_rel: Deviation,
    pub worst_abs: Deviation,
    /// |γ_vac(t=1; η=0.6, s=2) − 0.3|
    pub vacuum_error: f64,
    /// |γ(s=1) − 0.3 ln 2| against the quadrature value at t=1, η=0.6.
    pub ohmic_error: f64,
}

fn relative(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

fn compare(case: GridCase, rel_tol: f64) -> sqfi_core::Result<Deviation> {
    let spec = OhmicSpectrum::new(GRID_ETA, case.s, 1.0)?;
    let sq = SqueezeParams::new(case.r, case.theta)?;
    let analytic = gamma_analytic(case.t, &spec, &sq)?;
    let quadrature = gamma_quadrature(case.t, &spec, &sq, rel_tol)?.value;
    Ok(Deviation {
        case,
        analytic,
        quadrature,
        rel: relative(analytic, quadrature),
        abs: (analytic - quadrature).abs(),
    })
}

/// Evaluates both routes on every grid point using `jobs` workers.
pub fn run_verify(rel_tol: f64, jobs: usize) -> Result<VerifyReport> {
    let cases = oracle_grid();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| HarnessError::Pool(e.to_string()))?;
    let results: Vec<sqfi_core::Result<Deviation>> =
        pool.install(|| cases.par_iter().map(|&c| compare(c, rel_tol)).collect());
    let deviations = results.into_iter().collect::<sqfi_core::Result<Vec<_>>>()?;

    let pick = |key: fn(&Deviation) -> f64| {
        *deviations
            .iter()
            .reduce(|a, b| if key(b) > key(a) { b } else { a })
            .expect("grid is non-empty")
    };

    let unit = OhmicSpectrum::new(GRID_ETA, 2.0, 1.0)?;
    let vacuum_error = (gamma_vacuum(1.0, &unit)? - 0.3).abs();
    let ohmic = OhmicSpectrum::new(GRID_ETA, 1.0, 1.0)?;
    let vac = SqueezeParams::vacuum();
    let ohmic_quadrature = gamma_quadrature(1.0, &ohmic, &vac, rel_tol)?.value;
    let ohmic_error = (gamma_analytic(1.0, &ohmic, &vac)? - ohmic_quadrature).abs();

    Ok(VerifyReport {
        points: deviations.len(),
        worst_rel: pick(|d| d.rel),
        worst_abs: pick(|d| d.abs),
        vacuum_error,
        ohmic_error,
    })
}
