use std::path::{Path, PathBuf};

use jmpt::datacube::SceneConfig;
use jmpt::detectors::{Method, PipelineConfig};
use serde::{Deserialize, Serialize};

/// Everything a run can be configured with. Each table is optional in the
/// file and falls back to the library defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub method: Method,
    pub pipeline: PipelineConfig,
    pub synth: SceneConfig,
    pub sweep: SweepRange,
    pub paths: Paths,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            method: Method::Jmpt,
            pipeline: PipelineConfig::default(),
            synth: SceneConfig::default(),
            sweep: SweepRange::default(),
            paths: Paths::default(),
        }
    }
}

/// Inclusive range of patch sizes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepRange {
    pub w_min: usize,
    pub w_max: usize,
}

impl Default for SweepRange {
    fn default() -> Self {
        Self {
            w_min: 3,
            w_max: 15,
        }
    }
}

/// Default file locations, used when the matching flag is absent.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Paths {
    pub out_dir: Option<PathBuf>,
    pub t1: Option<PathBuf>,
    pub t2: Option<PathBuf>,
    pub mask: Option<PathBuf>,
    pub scores: Option<PathBuf>,
    pub out: Option<PathBuf>,
}

pub fn load(path: Option<&Path>) -> Result<Config, String> {
    let Some(path) = path else {
        return Ok(Config::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    toml::from_str(&text).map_err(|e| {
        // toml errors span several lines; keep the first one
        let msg = e.to_string();
        format!(
            "invalid config {}: {}",
            path.display(),
            msg.lines().next().unwrap_or("")
        )
    })
}
