//! Scenario files, reports and sweeps behind the `netform` binary.

pub mod commands;
pub mod error;
pub mod io;
pub mod scenario;
pub mod sweep;

pub use error::CliError;
pub use scenario::{Scenario, SpaceKind};
