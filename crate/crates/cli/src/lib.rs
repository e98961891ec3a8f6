//! Seeded experiment harness: instance generation, bound sweeps and
//! contour-integral verification with CSV/JSON reports.
pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;

pub use config::Format;
pub use error::{CliError, Result};
pub use output::{Cell, Report};
