//! Change scoring.
//!
//! * [`morph_ad`]: summed absolute difference of two feature stacks.
//! * [`neighborhood_detector`]: norm of the summed squared-spectrum
//!   difference over the 8-neighbourhood, weighted by
//!   [`spectral_angle_weight`] of the centre pixel.
//! * [`fuse`]: weighted sum of two min-max normalized maps.
//! * [`baseline_ad`], [`baseline_ed`], [`baseline_aad`]: pixelwise
//!   spectral differences.
//! * [`jmpt_detect`]: the complete two-branch pipeline.

mod baseline;
mod neighborhood;
mod pipeline;

pub use baseline::{baseline_aad, baseline_ad, baseline_ed};
pub use neighborhood::{neighborhood_detector, spectral_angle_weight};
pub use pipeline::{
    jmpt_detect, morphology_branch, run_method, tensor_branch, FusionWeights, Method,
    PipelineConfig,
};

use crate::datacube::HyperCube;
use crate::error::{Error, Result};
use crate::morphology::FeatureStack;

/// Per-pixel nonnegative change scores, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ChangeMap {
    height: usize,
    width: usize,
    scores: Vec<f64>,
}

impl ChangeMap {
    pub fn new(height: usize, width: usize, scores: Vec<f64>) -> Result<Self> {
        if height == 0 || width == 0 || scores.len() != height * width {
            return Err(Error::Dimensions(format!(
                "{} scores for a {height}x{width} map",
                scores.len()
            )));
        }
        if let Some(i) = scores.iter().position(|s| !(s.is_finite() && *s >= 0.0)) {
            return Err(Error::Parameter(format!(
                "score {} at pixel {i} is not a finite nonnegative value",
                scores[i]
            )));
        }
        Ok(Self {
            height,
            width,
            scores,
        })
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.scores[row * self.width + col]
    }

    pub fn min_max(&self) -> (f64, f64) {
        self.scores
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            })
    }

    /// Min-max rescaled to `[0, 1]`; a constant map becomes all zeros.
    pub fn normalized(&self) -> ChangeMap {
        let (lo, hi) = self.min_max();
        let scores = if hi > lo {
            self.scores.iter().map(|&v| (v - lo) / (hi - lo)).collect()
        } else {
            vec![0.0; self.scores.len()]
        };
        ChangeMap {
            height: self.height,
            width: self.width,
            scores,
        }
    }

    /// Single-band cube for writing with [`save_cube`](crate::datacube::save_cube).
    pub fn to_cube(&self) -> HyperCube {
        HyperCube::new(self.height, self.width, 1, self.scores.clone()).expect("valid map")
    }

    pub fn from_cube(cube: &HyperCube) -> Result<Self> {
        if cube.bands() != 1 {
            return Err(Error::Dimensions(format!(
                "change map must have 1 band, found {}",
                cube.bands()
            )));
        }
        Self::new(cube.height(), cube.width(), cube.values().to_vec())
    }
}

/// `R1(p) = Σ_l |F1_l(p) − F2_l(p)|`.
pub fn morph_ad(f1: &FeatureStack, f2: &FeatureStack) -> Result<ChangeMap> {
    if (f1.height(), f1.width()) != (f2.height(), f2.width()) {
        return Err(Error::Mismatch(format!(
            "feature stacks are {}x{} and {}x{}",
            f1.height(),
            f1.width(),
            f2.height(),
            f2.width()
        )));
    }
    if f1.len() != f2.len() {
        return Err(Error::Mismatch(format!(
            "feature stacks have {} and {} bands",
            f1.len(),
            f2.len()
        )));
    }
    if f1.provenance() != f2.provenance() {
        return Err(Error::Mismatch("feature stack band order differs".into()));
    }
    let mut scores = vec![0.0; f1.height() * f1.width()];
    for (a, b) in f1.bands().iter().zip(f2.bands()) {
        for ((s, x), y) in scores.iter_mut().zip(a).zip(b) {
            *s += (x - y).abs();
        }
    }
    ChangeMap::new(f1.height(), f1.width(), scores)
}

/// `R = a·norm(R1) + b·norm(R2)` with min-max normalization of each input.
pub fn fuse(r1: &ChangeMap, r2: &ChangeMap, a: f64, b: f64) -> Result<ChangeMap> {
    if (r1.height, r1.width) != (r2.height, r2.width) {
        return Err(Error::Mismatch(format!(
            "maps are {}x{} and {}x{}",
            r1.height, r1.width, r2.height, r2.width
        )));
    }
    if !(a >= 0.0 && b >= 0.0 && a + b > 0.0 && (a + b).is_finite()) {
        return Err(Error::Parameter(format!(
            "fusion weights must be nonnegative with a positive sum, got a={a}, b={b}"
        )));
    }
    let (n1, n2) = (r1.normalized(), r2.normalized());
    let scores = n1
        .scores
        .iter()
        .zip(&n2.scores)
        .map(|(x, y)| a * x + b * y)
        .collect();
    ChangeMap::new(r1.height, r1.width, scores)
}

pub(crate) fn check_pair(y1: &HyperCube, y2: &HyperCube) -> Result<()> {
    if !y1.same_shape(y2) {
        return Err(Error::Mismatch(format!(
            "cubes are {:?} and {:?}",
            y1.dims(),
            y2.dims()
        )));
    }
    Ok(())
}
