use thiserror::Error;

/// Errors raised by the physical and numerical routines.
///
/// Offending values are carried as `f64` regardless of the scalar type
/// the computation ran in.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} = {value} is outside its domain ({requirement})")]
    Domain {
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },

    #[error("quadrature did not converge: estimated relative error {achieved:e} > requested {requested:e} after {intervals} intervals")]
    Convergence {
        achieved: f64,
        requested: f64,
        intervals: usize,
    },

    #[error("closed-form dephasing factor has imaginary residue {imag:e} (real part {real})")]
    ImaginaryResidue { real: f64, imag: f64 },

    #[error("dephasing factor evaluated to {value:e}, below the negative-clamp tolerance")]
    Negative { value: f64 },

    #[error("degenerate eigenvalues {lambda_i} and {lambda_j} with coupling {coupling:e}")]
    Degenerate {
        lambda_i: f64,
        lambda_j: f64,
        coupling: f64,
    },

    #[error("state vector norm² = {norm_sq} deviates from 1")]
    Normalization { norm_sq: f64 },

    #[error("matrix is not a density matrix: {reason}")]
    NotDensityMatrix { reason: &'static str },

    #[error("family provides no analytic derivative")]
    NoAnalyticDerivative,

    #[error("invalid time grid: {reason}")]
    InvalidGrid { reason: &'static str },

    #[error("mode-sum forms disagree: Σ2|β|² = {beta_form}, closed sum = {closed_form}")]
    FormMismatch { beta_form: f64, closed_form: f64 },

    #[error("at t = {t}: {source}")]
    AtTime {
        t: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, requirement: &'static str) -> Self {
        Error::Domain {
            name,
            value,
            requirement,
        }
    }

    /// True when the failure is numerical non-convergence rather than bad input.
    pub fn is_convergence(&self) -> bool {
        match self {
            Error::Convergence { .. } => true,
            Error::AtTime { source, .. } => source.is_convergence(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
