//! Run manifest written next to the CSV outputs.

use std::path::Path;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::error::LabError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageTiming {
    pub stage: String,
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BuildInfo {
    pub package: String,
    pub version: String,
    pub profile: String,
    pub target: String,
}

impl BuildInfo {
    pub fn current() -> Self {
        Self {
            package: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            profile: if cfg!(debug_assertions) {
                "debug"
            } else {
                "release"
            }
            .into(),
            target: format!("{}-{}", std::env::consts::ARCH, std::env::consts::OS),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub name: String,
    pub config_hash: String,
    pub seed: u64,
    pub workers: usize,
    pub build: BuildInfo,
    /// Unix time at start, seconds.
    pub started_at: u64,
    pub wall_clock_seconds: f64,
    pub stages: Vec<StageTiming>,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(
        cfg: &ExperimentConfig,
        started: Instant,
        stages: Vec<StageTiming>,
        outputs: Vec<String>,
    ) -> Self {
        let elapsed = started.elapsed();
        let now = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Self {
            name: cfg.name.clone(),
            config_hash: cfg.hash(),
            seed: cfg.seed,
            workers: cfg.workers,
            build: BuildInfo::current(),
            started_at: now.saturating_sub(elapsed.as_secs()),
            wall_clock_seconds: elapsed.as_secs_f64(),
            stages,
            outputs,
        }
    }

    /// Folds in stages and outputs of an earlier manifest for the same config.
    pub fn merge_previous(&mut self, prev: RunManifest) {
        if prev.config_hash != self.config_hash {
            return;
        }
        let mut stages = prev.stages;
        stages.retain(|s| !self.stages.iter().any(|n| n.stage == s.stage));
        stages.append(&mut self.stages);
        self.stages = stages;
        for o in prev.outputs {
            if !self.outputs.contains(&o) {
                self.outputs.push(o);
            }
        }
        self.outputs.sort();
    }

    pub fn read(path: &Path) -> Result<Self, LabError> {
        Ok(serde_json::from_slice(&std::fs::read(path)?)?)
    }

    pub fn write(&self, path: &Path) -> Result<(), LabError> {
        std::fs::write(path, serde_json::to_vec_pretty(self)?)?;
        Ok(())
    }
}
