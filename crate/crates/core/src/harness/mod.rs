//! Amplitude-sweep driver: configuration, parallel sweep, CSV/SVG output.

mod config;
mod output;
mod sweep;

pub use config::{parse_config, Algorithm, ConfigError, SweepConfig};
pub use output::{emit_csv, emit_svg, write_csv, CSV_HEADER};
pub use sweep::{amplitudes, run_sweep, SolverKind, SweepOutcome, SweepRecord};

/// Process exit codes of the sweep binary.
pub mod exit_code {
    pub const SUCCESS: i32 = 0;
    pub const UNCONVERGED: i32 = 1;
    pub const CONFIG: i32 = 2;
    pub const IO: i32 = 3;
}
