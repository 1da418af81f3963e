//! Command-line front end for `rayclass-core`: configuration, a scoped
//! thread pool for grid cells, and text/JSON reports.

pub mod config;
pub mod pool;
pub mod report;
pub mod runner;

pub use config::{Cli, Emit, Mode, ModulusInput, RunConfig};
pub use report::Report;
pub use runner::{run, Outcome};
