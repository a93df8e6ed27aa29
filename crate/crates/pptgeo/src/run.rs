use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::config::ExperimentConfig;
use crate::error::Result;
use crate::experiments::{execute, Document};
use crate::manifest::RunManifest;
use crate::table::{checksum, render_json, write_bytes};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Result of [`run`]: the manifest and the serialized data document.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub manifest: RunManifest,
    pub data: Vec<u8>,
}

/// `<out>.manifest.json` next to the data file.
pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_os_string();
    name.push(".manifest.json");
    PathBuf::from(name)
}

/// Executes the configured experiment. With an output path, the data file
/// and its manifest are written there once all computation is done;
/// otherwise nothing touches the filesystem and the caller decides where
/// the bytes go.
pub fn run(cfg: &ExperimentConfig) -> Result<RunOutput> {
    let start = Instant::now();
    let outcome = execute(cfg)?;
    let data = match &outcome.document {
        Document::Table(t) => t.render(cfg.format),
        Document::Json(v) => render_json(v),
    };
    let mut manifest = RunManifest {
        experiment: cfg.experiment.name().to_string(),
        config: cfg.echo().clone(),
        version: VERSION.to_string(),
        wall_clock_seconds: 0.0,
        convergence: outcome.convergence,
        outputs: Default::default(),
        tolerances: outcome.tolerances,
        invariants: outcome.invariants,
        summary: outcome.summary,
    };
    let key = match &cfg.out {
        Some(path) => {
            let sum = write_bytes(path, &data)?;
            manifest.outputs.insert(path.display().to_string(), sum);
            Some(path)
        }
        None => {
            manifest.outputs.insert("-".into(), checksum(&data));
            None
        }
    };
    manifest.wall_clock_seconds = start.elapsed().as_secs_f64();
    if let Some(path) = key {
        write_bytes(&manifest_path(path), &render_json(&manifest.to_json()))?;
    }
    Ok(RunOutput { manifest, data })
}
