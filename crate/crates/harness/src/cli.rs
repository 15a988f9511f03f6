use std::f64::consts::FRAC_PI_2;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sqfi_core::dephasing::DEFAULT_REL_TOL;
use sqfi_core::{
    cramer_rao_bound, discretize_spectrum, gamma_discrete, qfi_alpha, qfi_general, thermal_factor,
    DerivativeMode, EvolvedFamily, Parameter, ProbeState, DEFAULT_OMEGA_MAX_FACTOR,
};

use crate::config::{gamma_at, Axis, MethodConfig, MethodKind, Quantity, SweepSpec, DEFAULT_MODES};
use crate::emit::{self, Format};
use crate::error::{HarnessError, Result};
use crate::params::{ModelPoint, Param};
use crate::sweep::{default_jobs, run_sweep_with_jobs};
use crate::verify::run_verify;

#[derive(Debug, Parser)]
#[command(
    name = "sqfi",
    version,
    about = "Dephasing and quantum Fisher information of a qubit in a squeezed Ohmic-family reservoir",
    propagate_version = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the dephasing factor γ(t) at one point.
    Gamma(GammaArgs),
    /// Quantum Fisher information of α or φ and the Cramér-Rao bound.
    Qfi(QfiArgs),
    /// Evaluate a quantity over a two-axis grid.
    Sweep(SweepArgs),
    /// Compare a discretized bath with the closed form.
    Discrete(DiscreteArgs),
    /// Check the closed form against quadrature on the reference grid.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Evolution time.
    #[arg(long)]
    pub t: f64,
    /// Coupling strength η.
    #[arg(long)]
    pub eta: f64,
    /// Ohmicity exponent.
    #[arg(long)]
    pub s: f64,
    /// Cutoff frequency.
    #[arg(long, default_value_t = 1.0)]
    pub omega_c: f64,
    /// Squeeze magnitude.
    #[arg(long, default_value_t = 0.0)]
    pub r: f64,
    /// Squeeze phase.
    #[arg(long, default_value_t = 0.0)]
    pub theta: f64,
    /// Reservoir temperature (0 for the squeezed vacuum).
    #[arg(long, default_value_t = 0.0)]
    pub temperature: f64,
    /// Qubit frequency entering the thermal occupation.
    #[arg(long, default_value_t = 1.0)]
    pub omega0: f64,
    /// Boltzmann constant in the chosen units.
    #[arg(long, default_value_t = 1.0)]
    pub boltzmann: f64,
}

impl ModelArgs {
    pub fn point(&self) -> ModelPoint {
        ModelPoint {
            t: self.t,
            eta: self.eta,
            s: self.s,
            omega_c: self.omega_c,
            r: self.r,
            theta: self.theta,
            temperature: self.temperature,
            omega0: self.omega0,
            boltzmann: self.boltzmann,
        }
    }
}

#[derive(Debug, Args)]
pub struct MethodArgs {
    /// Route used for γ(t).
    #[arg(long, value_enum, default_value_t = MethodKind::Analytic)]
    pub method: MethodKind,
    /// Relative tolerance of the quadrature route.
    #[arg(long)]
    pub rel_tol: Option<f64>,
    /// Mode count of the discrete route.
    #[arg(long)]
    pub modes: Option<usize>,
    /// Frequency cut of the discrete route (default 40·omega_c).
    #[arg(long)]
    pub omega_max: Option<f64>,
}

impl MethodArgs {
    fn config(&self) -> MethodConfig {
        MethodConfig {
            kind: self.method,
            rel_tol: self.rel_tol,
            modes: self.modes,
            omega_max: self.omega_max,
        }
    }
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct GammaArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub method: MethodArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EstimatedParam {
    Alpha,
    Phi,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct QfiArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub method: MethodArgs,
    /// Parameter to estimate.
    #[arg(long, value_enum)]
    pub param: EstimatedParam,
    /// Polar angle of the probe, in [0, π].
    #[arg(long, default_value_t = FRAC_PI_2)]
    pub alpha: f64,
    /// Azimuthal angle of the probe.
    #[arg(long, default_value_t = 0.0)]
    pub phi: f64,
    /// Number of repetitions for the Cramér-Rao bound.
    #[arg(long, default_value_t = 1)]
    pub nu: u64,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct SweepArgs {
    /// TOML config (or JSON with a .json extension).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format; inferred from the --out extension, else csv.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Quantity evaluated at each grid point.
    #[arg(long, value_enum)]
    pub quantity: Option<Quantity>,
    /// Route used for γ(t).
    #[arg(long, value_enum)]
    pub method: Option<MethodKind>,
    /// First axis as name:min:max:points.
    #[arg(long)]
    pub axis1: Option<String>,
    /// Second axis as name:min:max:points.
    #[arg(long)]
    pub axis2: Option<String>,
    /// Fixed parameter binding name=value (repeatable).
    #[arg(long = "set", value_name = "NAME=VALUE")]
    pub set: Vec<String>,
    /// Relative tolerance of the quadrature route.
    #[arg(long)]
    pub rel_tol: Option<f64>,
    /// Mode count of the discrete route.
    #[arg(long)]
    pub modes: Option<usize>,
    /// Frequency cut of the discrete route (default 40·omega_c).
    #[arg(long)]
    pub omega_max: Option<f64>,
    /// Worker threads (default: the SQFI_JOBS variable, else all processors).
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Print the merged configuration as TOML and exit.
    #[arg(long)]
    pub print_config: bool,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct DiscreteArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Number of bath modes.
    #[arg(long, default_value_t = DEFAULT_MODES)]
    pub modes: usize,
    /// Frequency cut (default 40·omega_c).
    #[arg(long)]
    pub omega_max: Option<f64>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Quadrature relative tolerance.
    #[arg(long, default_value_t = DEFAULT_REL_TOL)]
    pub rel_tol: f64,
    /// Largest acceptable relative deviation.
    #[arg(long, default_value_t = 1e-7)]
    pub threshold: f64,
    /// Worker threads (default: the SQFI_JOBS variable, else all processors).
    #[arg(long)]
    pub jobs: Option<usize>,
}

/// Formats `x` with `digits` significant digits.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exponent = x.abs().log10().floor() as i32;
    if !(-5..15).contains(&exponent) {
        return format!("{:.*e}", digits - 1, x);
    }
    let decimals = (digits as i32 - 1 - exponent).max(0) as usize;
    format!("{x:.decimals$}")
}

/// Runs the CLI and returns the process exit code.
pub fn run<I, A>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = A>,
    A: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                1
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}", describe(&e));
            e.exit_code()
        }
    }
}

fn flag_name(name: &str) -> String {
    match name {
        "n_modes" => "modes".to_string(),
        other => other.replace('_', "-"),
    }
}

fn describe(e: &HarnessError) -> String {
    match e {
        HarnessError::Core(sqfi_core::Error::Domain { name, .. }) => {
            format!("invalid value for --{}: {e}", flag_name(name))
        }
        _ => e.to_string(),
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Gamma(a) => gamma_cmd(&a, out),
        Command::Qfi(a) => qfi_cmd(&a, out),
        Command::Sweep(a) => sweep_cmd(&a, out),
        Command::Discrete(a) => discrete_cmd(&a, out),
        Command::Verify(a) => verify_cmd(&a, out),
    }
}

fn io_out(e: std::io::Error) -> HarnessError {
    HarnessError::io("<stdout>", e)
}

fn gamma_cmd(a: &GammaArgs, out: &mut dyn Write) -> Result<i32> {
    let g = gamma_at(&a.model.point(), &a.method.config())?;
    writeln!(out, "{}", format_sig(g, 15)).map_err(io_out)?;
    Ok(0)
}

fn qfi_cmd(a: &QfiArgs, out: &mut dyn Write) -> Result<i32> {
    let gamma = gamma_at(&a.model.point(), &a.method.config())?;
    let probe = ProbeState::new(a.alpha, a.phi)?;
    let (parameter, closed) = match a.param {
        EstimatedParam::Alpha => (Parameter::Alpha, qfi_alpha::<f64>()),
        EstimatedParam::Phi => (Parameter::Phi, (-2.0 * gamma).exp() * a.alpha.sin().powi(2)),
    };
    let family = EvolvedFamily::new(&probe, gamma, parameter)?;
    let report = qfi_general(&family, family.point(), DerivativeMode::Analytic)?;
    let bound = if report.value > 0.0 {
        format_sig(cramer_rao_bound(report.value, a.nu)?, 12)
    } else {
        "inf".to_string()
    };
    writeln!(out, "qfi {}", format_sig(report.value, 12)).map_err(io_out)?;
    writeln!(out, "closed_form {}", format_sig(closed, 15)).map_err(io_out)?;
    writeln!(out, "gamma {}", format_sig(gamma, 15)).map_err(io_out)?;
    writeln!(out, "cramer_rao_bound {bound} (nu = {})", a.nu).map_err(io_out)?;
    Ok(0)
}

/// Builds the sweep spec from an optional config file plus flag overrides.
pub fn merged_spec(a: &SweepArgs) -> Result<SweepSpec> {
    let mut spec = match &a.config {
        Some(path) => Some(SweepSpec::load(path)?),
        None => None,
    };
    let axis = |s: &Option<String>| s.as_deref().map(Axis::parse_compact).transpose();
    let (axis1, axis2) = (axis(&a.axis1)?, axis(&a.axis2)?);
    if spec.is_none() {
        let missing =
            |what: &str| HarnessError::Config(format!("--{what} is required without --config"));
        spec = Some(SweepSpec {
            quantity: a.quantity.ok_or_else(|| missing("quantity"))?,
            method: MethodKind::Analytic,
            fixed: Default::default(),
            axis1: axis1.clone().ok_or_else(|| missing("axis1"))?,
            axis2: axis2.clone().ok_or_else(|| missing("axis2"))?,
            options: Default::default(),
        });
    }
    let mut spec = spec.expect("spec is set above");
    if let Some(q) = a.quantity {
        spec.quantity = q;
    }
    if let Some(m) = a.method {
        spec.method = m;
    }
    if let Some(x) = axis1 {
        spec.axis1 = x;
    }
    if let Some(x) = axis2 {
        spec.axis2 = x;
    }
    for binding in &a.set {
        let (name, value) = binding
            .split_once('=')
            .ok_or_else(|| HarnessError::Config(format!("--set '{binding}' is not NAME=VALUE")))?;
        let p: Param = name.parse()?;
        let v: f64 = value.trim().parse().map_err(|_| {
            HarnessError::Config(format!("--set {name}: '{value}' is not a number"))
        })?;
        spec.fixed.insert(p.name().to_string(), v);
    }
    if a.rel_tol.is_some() {
        spec.options.rel_tol = a.rel_tol;
    }
    if a.modes.is_some() {
        spec.options.modes = a.modes;
    }
    if a.omega_max.is_some() {
        spec.options.omega_max = a.omega_max;
    }
    if a.jobs.is_some() {
        spec.options.jobs = a.jobs;
    }
    spec.validate()?;
    Ok(spec)
}

fn infer_format(path: Option<&PathBuf>) -> Format {
    match path.and_then(|p| p.extension()).and_then(|e| e.to_str()) {
        Some("json") => Format::Json,
        Some("svg") => Format::SvgHeatmap,
        _ => Format::Csv,
    }
}

fn sweep_cmd(a: &SweepArgs, out: &mut dyn Write) -> Result<i32> {
    let spec = merged_spec(a)?;
    if a.print_config {
        write!(out, "{}", spec.to_toml()).map_err(io_out)?;
        return Ok(0);
    }
    let result = run_sweep_with_jobs(&spec, None)?;
    let format = a.format.unwrap_or_else(|| infer_format(a.out.as_ref()));
    match &a.out {
        Some(path) => {
            emit::emit(&result, format, path)?;
            writeln!(
                out,
                "wrote {} points to {} ({:.3} s, {} jobs)",
                result.grid.len(),
                path.display(),
                result.metadata.wall_time_s,
                result.metadata.jobs
            )
            .map_err(io_out)?;
        }
        None => out
            .write_all(&emit::render(&result, format))
            .map_err(io_out)?,
    }
    Ok(0)
}

fn discrete_cmd(a: &DiscreteArgs, out: &mut dyn Write) -> Result<i32> {
    let point = a.model.point();
    let spec = point.spectrum()?;
    let sq = point.squeeze()?;
    let factor = thermal_factor(&point.thermal()?);
    let omega_max = a
        .omega_max
        .unwrap_or(DEFAULT_OMEGA_MAX_FACTOR * point.omega_c);
    let bath = discretize_spectrum(&spec, a.modes, omega_max)?;
    let discrete = factor * gamma_discrete(&bath, point.t, &sq)?;
    let analytic = gamma_at(&point, &MethodConfig::analytic())?;
    let abs = (discrete - analytic).abs();
    let rel = if analytic == 0.0 {
        abs
    } else {
        abs / analytic.abs()
    };
    writeln!(out, "discrete {}", format_sig(discrete, 15)).map_err(io_out)?;
    writeln!(out, "analytic {}", format_sig(analytic, 15)).map_err(io_out)?;
    writeln!(out, "abs_deviation {abs:.3e}").map_err(io_out)?;
    writeln!(out, "rel_deviation {rel:.3e}").map_err(io_out)?;
    writeln!(
        out,
        "modes {} omega_max {}",
        a.modes,
        format_sig(omega_max, 6)
    )
    .map_err(io_out)?;
    Ok(0)
}

fn verify_cmd(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let jobs = match a.jobs {
        Some(0) => return Err(HarnessError::Config("--jobs must be at least 1".into())),
        Some(j) => j,
        None => default_jobs()?,
    };
    let report = run_verify(a.rel_tol, jobs)?;
    let w = report.worst_rel;
    writeln!(out, "points {}", report.points).map_err(io_out)?;
    writeln!(
        out,
        "max_rel_deviation {:.3e} at s={} r={} theta={} t={}",
        w.rel, w.case.s, w.case.r, w.case.theta, w.case.t
    )
    .map_err(io_out)?;
    writeln!(out, "max_abs_deviation {:.3e}", report.worst_abs.abs).map_err(io_out)?;
    writeln!(out, "vacuum_closed_form_error {:.3e}", report.vacuum_error).map_err(io_out)?;
    writeln!(out, "ohmic_limit_error {:.3e}", report.ohmic_error).map_err(io_out)?;
    let ok = w.rel <= a.threshold;
    writeln!(
        out,
        "{} (threshold {:e})",
        if ok { "ok" } else { "FAIL" },
        a.threshold
    )
    .map_err(io_out)?;
    Ok(if ok { 0 } else { 2 })
}
