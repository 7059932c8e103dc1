//! Library side of the `fedsim` command: manifest parsing, the experiment
//! grid, report files and summary comparison.

pub mod compare;
pub mod error;
pub mod grid;
pub mod manifest;
pub mod report;
pub mod run;

pub use error::{CliError, EXIT_CONFIG, EXIT_RUNTIME};
pub use grid::{Cell, Grid};
pub use manifest::{Defaults, RunManifest};
pub use run::{execute, RunOutcome};
