//! Configuration-driven front end for the cavityed engine: parse run
//! files, execute experiments, write CSV tables and a JSON manifest.

pub mod config;
pub mod output;
pub mod presets;
pub mod runner;

pub use config::RunConfig;
pub use runner::{run, RunStatus};
