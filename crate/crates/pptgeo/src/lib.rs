//! Experiment harness for `pptgeo-core`: strict configuration, deterministic
//! CSV/JSON output with checksummed manifests, state files and SVG plots.

pub mod config;
pub mod error;
pub mod experiments;
pub mod manifest;
pub mod plot;
pub mod run;
pub mod state_io;
pub mod table;

pub use config::{ExperimentConfig, Format};
pub use error::{CliError, Result};
pub use manifest::RunManifest;
pub use run::{run, RunOutput};
