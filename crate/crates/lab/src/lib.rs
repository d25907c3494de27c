//! Experiment driver for `cantor-zeros`: flat key-value configs, rayon
//! fan-out, CSV emitters and run manifests.
//!
//! Replicate `r` of a level-`n` experiment with master seed `s` draws its path
//! from the key `replicate_seed(derive(s, n), r)`, built from the SplitMix64
//! finalizer, so outputs do not depend on the worker count.

pub mod config;
pub mod error;
pub mod fanout;
pub mod manifest;
pub mod pipeline;
pub mod presets;
pub mod table;

use std::path::Path;
use std::time::Instant;

pub use config::{ExperimentConfig, Output};
pub use error::{ConfigError, LabError};
pub use manifest::RunManifest;
pub use pipeline::Run;

/// File name of the canonical config saved in each run directory.
pub const CONFIG_FILE: &str = "config.txt";
pub const MANIFEST_FILE: &str = "manifest.json";

/// What to run in a directory.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Task {
    All,
    Stage(Output),
    Report,
}

/// Runs `task` for `cfg` in `out`, saving the canonical config and manifest.
pub fn execute(cfg: ExperimentConfig, out: &Path, task: Task) -> Result<RunManifest, LabError> {
    let started = Instant::now();
    let mut run = Run::new(cfg, out)?;
    std::fs::write(out.join(CONFIG_FILE), run.cfg.canonical())?;
    match task {
        Task::All => run.run_all()?,
        Task::Stage(o) => run.stage(o)?,
        Task::Report => run.summary()?,
    }
    let mut m = run.manifest(started);
    let path = out.join(MANIFEST_FILE);
    if let Ok(prev) = RunManifest::read(&path) {
        m.merge_previous(prev);
    }
    m.write(&path)?;
    Ok(m)
}
