//! Parameter sweeps, figure data, output emitters and the `sqfi` command line.

pub mod cli;
pub mod config;
pub mod emit;
pub mod error;
pub mod params;
pub mod sweep;
pub mod verify;

pub use config::{Axis, MethodKind, Options, Quantity, SweepSpec};
pub use emit::{emit, Format};
pub use error::{HarnessError, Result};
pub use params::{ModelPoint, Param};
pub use sweep::{run_sweep, run_sweep_with_jobs, GridPoint, Metadata, SweepResult};
