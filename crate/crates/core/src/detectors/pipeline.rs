use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{
    baseline_aad, baseline_ad, baseline_ed, fuse, morph_ad, neighborhood_detector, ChangeMap,
};
use crate::datacube::{BiTemporalPair, HyperCube};
use crate::error::{Error, Result};
use crate::morphology::{build_feature_stack, Connectivity, ThresholdBank};
use crate::pca::gray_from_cube;
use crate::tensor::{denoise_cube, AlsOptions};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FusionWeights {
    pub a: f64,
    pub b: f64,
}

impl Default for FusionWeights {
    fn default() -> Self {
        Self { a: 0.5, b: 0.5 }
    }
}

/// Settings shared by both branches of the detector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub patch_size: usize,
    pub connectivity: Connectivity,
    pub thresholds: ThresholdBank,
    pub fusion: FusionWeights,
    pub als: AlsOptions,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            patch_size: 3,
            connectivity: Connectivity::Four,
            thresholds: ThresholdBank::default(),
            fusion: FusionWeights::default(),
            als: AlsOptions::default(),
        }
    }
}

/// Morphology branch: PC1 → 8-bit → attribute profiles per date, then
/// summed absolute difference of the two stacks.
pub fn morphology_branch(pair: &BiTemporalPair, cfg: &PipelineConfig) -> Result<ChangeMap> {
    let stack = |cube: &HyperCube| {
        build_feature_stack(&gray_from_cube(cube)?, &cfg.thresholds, cfg.connectivity)
    };
    let (f1, f2) = rayon::join(|| stack(pair.t1()), || stack(pair.t2()));
    morph_ad(&f1?, &f2?)
}

/// Tensor branch: patch-tensor denoising per date, then the
/// neighbourhood detector.
pub fn tensor_branch(pair: &BiTemporalPair, cfg: &PipelineConfig) -> Result<ChangeMap> {
    let denoise = |cube: &HyperCube| denoise_cube(cube, cfg.patch_size, &cfg.als);
    let (d1, d2) = rayon::join(|| denoise(pair.t1()), || denoise(pair.t2()));
    neighborhood_detector(&d1?, &d2?)
}

/// Fused output of both branches.
pub fn jmpt_detect(pair: &BiTemporalPair, cfg: &PipelineConfig) -> Result<ChangeMap> {
    let (r1, r2) = rayon::join(|| morphology_branch(pair, cfg), || tensor_branch(pair, cfg));
    fuse(&r1?, &r2?, cfg.fusion.a, cfg.fusion.b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Jmpt,
    Morph,
    Tensor,
    Ad,
    Ed,
    Aad,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::Jmpt,
        Method::Morph,
        Method::Tensor,
        Method::Ad,
        Method::Ed,
        Method::Aad,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Jmpt => "jmpt",
            Method::Morph => "morph",
            Method::Tensor => "tensor",
            Method::Ad => "ad",
            Method::Ed => "ed",
            Method::Aad => "aad",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Parameter(format!("unknown method `{s}`")))
    }
}

pub fn run_method(
    method: Method,
    pair: &BiTemporalPair,
    cfg: &PipelineConfig,
) -> Result<ChangeMap> {
    match method {
        Method::Jmpt => jmpt_detect(pair, cfg),
        Method::Morph => morphology_branch(pair, cfg),
        Method::Tensor => tensor_branch(pair, cfg),
        Method::Ad => baseline_ad(pair.t1(), pair.t2()),
        Method::Ed => baseline_ed(pair.t1(), pair.t2()),
        Method::Aad => baseline_aad(pair.t1(), pair.t2()),
    }
}
