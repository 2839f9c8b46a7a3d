//! File formats, configuration and drivers for the vcdsim simulator.
//! The simulation itself lives in `vcdsim-core`.

pub mod config;
pub mod error;
pub mod io;
pub mod report;
pub mod scenario;

pub use config::{RawConfig, ScenarioConfig};
pub use error::{Error, Result};
pub use report::Report;
