//! Scenario files, presets, the parallel sweep engine and table output for
//! the `readout` command.

pub mod engine;
pub mod error;
pub mod oracle;
pub mod presets;
pub mod scenario;
pub mod table;

pub use engine::{run_scenario, RunOptions, TolProfile};
pub use error::{CliError, CliResult};
pub use scenario::Scenario;
pub use table::{Format, ResultTable};
