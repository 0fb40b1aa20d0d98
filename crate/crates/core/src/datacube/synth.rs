//! Synthetic bi-temporal scenes with exact ground truth.
//!
//! The T1 scene is a Voronoi partition of the image into regions, each
//! filled with one of four smooth background endmember spectra. T2 copies
//! T1 and overwrites a number of non-overlapping rectangles with one of two
//! further endmembers scaled by `change_magnitude`. Independent Gaussian
//! noise is then added to each date.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::{BiTemporalPair, BinaryMask, HyperCube};
use crate::error::{Error, Result};

const BACKGROUND_ENDMEMBERS: usize = 4;
const CHANGE_ENDMEMBERS: usize = 2;
const VORONOI_SEEDS: usize = 8;
const PLACEMENT_ATTEMPTS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SceneConfig {
    pub height: usize,
    pub width: usize,
    pub bands: usize,
    pub num_change_regions: usize,
    /// Scale applied to the replacement spectrum inside change regions.
    pub change_magnitude: f64,
    /// Standard deviation of the additive Gaussian noise.
    pub noise_sigma: f64,
    pub seed: u64,
}

impl Default for SceneConfig {
    fn default() -> Self {
        Self {
            height: 64,
            width: 64,
            bands: 20,
            num_change_regions: 3,
            change_magnitude: 1.0,
            noise_sigma: 0.0,
            seed: 0,
        }
    }
}

impl SceneConfig {
    pub fn validate(&self) -> Result<()> {
        if self.height == 0 || self.width == 0 || self.bands == 0 {
            return Err(Error::Parameter("scene dimensions must be positive".into()));
        }
        if !(self.noise_sigma >= 0.0 && self.noise_sigma.is_finite()) {
            return Err(Error::Parameter(
                "noise_sigma must be finite and >= 0".into(),
            ));
        }
        if !(self.change_magnitude > 0.0 && self.change_magnitude.is_finite()) {
            return Err(Error::Parameter(
                "change_magnitude must be finite and > 0".into(),
            ));
        }
        Ok(())
    }
}

/// Axis-aligned rectangle `[row, row + height) × [col, col + width)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rect {
    pub row: usize,
    pub col: usize,
    pub height: usize,
    pub width: usize,
}

impl Rect {
    pub fn area(&self) -> usize {
        self.height * self.width
    }

    pub fn contains(&self, r: usize, c: usize) -> bool {
        r >= self.row && r < self.row + self.height && c >= self.col && c < self.col + self.width
    }

    fn overlaps(&self, other: &Rect) -> bool {
        self.row < other.row + other.height
            && other.row < self.row + self.height
            && self.col < other.col + other.width
            && other.col < self.col + self.width
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthScene {
    pub pair: BiTemporalPair,
    pub mask: BinaryMask,
    /// The planted change rectangles, in placement order.
    pub regions: Vec<Rect>,
}

/// Generates a scene and returns the pair with its ground truth.
pub fn synth_pair(config: &SceneConfig) -> Result<(BiTemporalPair, BinaryMask)> {
    let scene = synth_scene(config)?;
    Ok((scene.pair, scene.mask))
}

pub fn synth_scene(config: &SceneConfig) -> Result<SynthScene> {
    config.validate()?;
    let (h, w, d) = (config.height, config.width, config.bands);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let endmembers: Vec<Vec<f64>> = (0..BACKGROUND_ENDMEMBERS + CHANGE_ENDMEMBERS)
        .map(|_| smooth_spectrum(&mut rng, d))
        .collect();

    let seeds: Vec<(f64, f64, usize)> = (0..VORONOI_SEEDS)
        .map(|i| {
            (
                rng.random_range(0.0..h as f64),
                rng.random_range(0.0..w as f64),
                i % BACKGROUND_ENDMEMBERS,
            )
        })
        .collect();
    let class_of = |r: usize, c: usize| {
        let (r, c) = (r as f64 + 0.5, c as f64 + 0.5);
        seeds
            .iter()
            .map(|&(sr, sc, k)| ((sr - r).powi(2) + (sc - c).powi(2), k))
            .min_by(|a, b| a.0.total_cmp(&b.0))
            .map(|(_, k)| k)
            .unwrap()
    };

    let regions = place_regions(&mut rng, config)?;

    let mut t1 = Vec::with_capacity(h * w * d);
    let mut t2 = Vec::with_capacity(h * w * d);
    let mut labels = vec![BinaryMask::UNCHANGED; h * w];
    for r in 0..h {
        for c in 0..w {
            let bg = &endmembers[class_of(r, c)];
            t1.extend_from_slice(bg);
            match regions.iter().position(|rect| rect.contains(r, c)) {
                Some(i) => {
                    let em = &endmembers[BACKGROUND_ENDMEMBERS + i % CHANGE_ENDMEMBERS];
                    t2.extend(em.iter().map(|v| v * config.change_magnitude));
                    labels[r * w + c] = BinaryMask::CHANGED;
                }
                None => t2.extend_from_slice(bg),
            }
        }
    }

    if config.noise_sigma > 0.0 {
        let noise = Normal::new(0.0, config.noise_sigma).expect("validated sigma");
        for v in t1.iter_mut().chain(t2.iter_mut()) {
            *v += noise.sample(&mut rng);
        }
    }
    // keep values f32-representable so a saved scene reloads unchanged
    for v in t1.iter_mut().chain(t2.iter_mut()) {
        *v = *v as f32 as f64;
    }

    Ok(SynthScene {
        pair: BiTemporalPair::new(HyperCube::new(h, w, d, t1)?, HyperCube::new(h, w, d, t2)?)?,
        mask: BinaryMask::new(h, w, labels)?,
        regions,
    })
}

/// A positive spectrum built from a slow sinusoid plus a Gaussian bump.
fn smooth_spectrum(rng: &mut impl Rng, bands: usize) -> Vec<f64> {
    let base = rng.random_range(0.25..0.55);
    let amp = rng.random_range(0.05..0.2);
    let freq = rng.random_range(0.5..1.5);
    let phase = rng.random_range(0.0..std::f64::consts::TAU);
    let bump_at = rng.random_range(0.0..1.0);
    let bump_amp = rng.random_range(-0.2..0.3);
    (0..bands)
        .map(|b| {
            let x = if bands > 1 {
                b as f64 / (bands - 1) as f64
            } else {
                0.5
            };
            let bump = bump_amp * (-((x - bump_at) / 0.15).powi(2)).exp();
            (base + amp * (std::f64::consts::TAU * freq * x + phase).sin() + bump).max(0.02)
        })
        .collect()
}

fn place_regions(rng: &mut impl Rng, config: &SceneConfig) -> Result<Vec<Rect>> {
    let (h, w) = (config.height, config.width);
    let side_range = |n: usize| ((n / 10).max(1), (n / 5).max(1));
    let (hmin, hmax) = side_range(h);
    let (wmin, wmax) = side_range(w);
    let mut placed: Vec<Rect> = Vec::with_capacity(config.num_change_regions);
    for _ in 0..config.num_change_regions {
        let mut found = None;
        for _ in 0..PLACEMENT_ATTEMPTS {
            let rh = rng.random_range(hmin..=hmax);
            let rw = rng.random_range(wmin..=wmax);
            let rect = Rect {
                row: rng.random_range(0..=h - rh),
                col: rng.random_range(0..=w - rw),
                height: rh,
                width: rw,
            };
            if placed.iter().all(|p| !p.overlaps(&rect)) {
                found = Some(rect);
                break;
            }
        }
        match found {
            Some(rect) => placed.push(rect),
            None => {
                return Err(Error::Parameter(format!(
                    "cannot fit {} non-overlapping change regions in a {h}x{w} image",
                    config.num_change_regions
                )))
            }
        }
    }
    Ok(placed)
}
