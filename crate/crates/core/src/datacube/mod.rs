//! Hyperspectral cubes, ground-truth masks, raster I/O and synthetic scenes.
//!
//! A [`HyperCube`] stores `height × width × bands` reflectance values as
//! `f64`, pixel-interleaved in memory so that a pixel's spectrum is a
//! contiguous slice. On disk cubes use a band-sequential layout; see
//! [`io`].

pub mod io;
pub mod synth;

pub use io::{load_cube, load_mask, raster_paths, save_cube, save_mask, DType, RasterHeader};
pub use synth::{synth_pair, synth_scene, Rect, SceneConfig, SynthScene};

use crate::error::{Error, Result};

/// A `height × width × bands` real-valued raster.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperCube {
    height: usize,
    width: usize,
    bands: usize,
    // index (r * width + c) * bands + b
    values: Vec<f64>,
}

impl HyperCube {
    /// Builds a cube from pixel-interleaved values, `(r * width + c) * bands + b`.
    pub fn new(height: usize, width: usize, bands: usize, values: Vec<f64>) -> Result<Self> {
        if height == 0 || width == 0 || bands == 0 {
            return Err(Error::Dimensions(format!(
                "cube must be at least 1x1x1, got {height}x{width}x{bands}"
            )));
        }
        if values.len() != height * width * bands {
            return Err(Error::Dimensions(format!(
                "{} values for a {height}x{width}x{bands} cube",
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            let b = i % bands;
            let p = i / bands;
            return Err(Error::NonFinite {
                row: p / width,
                col: p % width,
                band: b,
            });
        }
        Ok(Self {
            height,
            width,
            bands,
            values,
        })
    }

    pub fn from_fn(
        height: usize,
        width: usize,
        bands: usize,
        mut f: impl FnMut(usize, usize, usize) -> f64,
    ) -> Result<Self> {
        let mut values = Vec::with_capacity(height * width * bands);
        for r in 0..height {
            for c in 0..width {
                for b in 0..bands {
                    values.push(f(r, c, b));
                }
            }
        }
        Self::new(height, width, bands, values)
    }

    pub fn zeros(height: usize, width: usize, bands: usize) -> Result<Self> {
        Self::new(height, width, bands, vec![0.0; height * width * bands])
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn bands(&self) -> usize {
        self.bands
    }

    /// `(height, width, bands)`.
    pub fn dims(&self) -> (usize, usize, usize) {
        (self.height, self.width, self.bands)
    }

    pub fn pixel_count(&self) -> usize {
        self.height * self.width
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize, band: usize) -> f64 {
        self.values[(row * self.width + col) * self.bands + band]
    }

    /// Spectrum of pixel `(row, col)`.
    #[inline]
    pub fn spectrum(&self, row: usize, col: usize) -> &[f64] {
        let start = (row * self.width + col) * self.bands;
        &self.values[start..start + self.bands]
    }

    /// Spectrum of the pixel with row-major index `p`.
    #[inline]
    pub fn pixel(&self, p: usize) -> &[f64] {
        &self.values[p * self.bands..(p + 1) * self.bands]
    }

    /// Pixel-interleaved values.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn same_shape(&self, other: &HyperCube) -> bool {
        self.dims() == other.dims()
    }
}

/// Two co-registered acquisitions of the same scene.
#[derive(Debug, Clone, PartialEq)]
pub struct BiTemporalPair {
    t1: HyperCube,
    t2: HyperCube,
}

impl BiTemporalPair {
    pub fn new(t1: HyperCube, t2: HyperCube) -> Result<Self> {
        if !t1.same_shape(&t2) {
            return Err(Error::Mismatch(format!(
                "t1 is {:?}, t2 is {:?}",
                t1.dims(),
                t2.dims()
            )));
        }
        Ok(Self { t1, t2 })
    }

    pub fn t1(&self) -> &HyperCube {
        &self.t1
    }

    pub fn t2(&self) -> &HyperCube {
        &self.t2
    }

    pub fn into_parts(self) -> (HyperCube, HyperCube) {
        (self.t1, self.t2)
    }
}

/// Ground-truth or thresholded change labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMask {
    height: usize,
    width: usize,
    labels: Vec<u8>,
}

impl BinaryMask {
    pub const UNCHANGED: u8 = 0;
    pub const CHANGED: u8 = 1;
    pub const IGNORE: u8 = 255;

    /// Row-major labels; only 0, 1 and 255 are accepted.
    pub fn new(height: usize, width: usize, labels: Vec<u8>) -> Result<Self> {
        if height == 0 || width == 0 {
            return Err(Error::Dimensions(format!(
                "mask must be at least 1x1, got {height}x{width}"
            )));
        }
        if labels.len() != height * width {
            return Err(Error::Dimensions(format!(
                "{} labels for a {height}x{width} mask",
                labels.len()
            )));
        }
        if let Some(i) = labels
            .iter()
            .position(|&l| !matches!(l, Self::UNCHANGED | Self::CHANGED | Self::IGNORE))
        {
            return Err(Error::InvalidLabel {
                label: labels[i],
                row: i / width,
                col: i % width,
            });
        }
        Ok(Self {
            height,
            width,
            labels,
        })
    }

    pub fn zeros(height: usize, width: usize) -> Result<Self> {
        Self::new(height, width, vec![0; height * width])
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.labels[row * self.width + col]
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn changed_count(&self) -> usize {
        self.count(Self::CHANGED)
    }

    pub fn unchanged_count(&self) -> usize {
        self.count(Self::UNCHANGED)
    }

    pub fn ignore_count(&self) -> usize {
        self.count(Self::IGNORE)
    }

    fn count(&self, label: u8) -> usize {
        self.labels.iter().filter(|&&l| l == label).count()
    }
}
