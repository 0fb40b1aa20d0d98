//! First principal component of a cube, and its 8-bit quantization.

use nalgebra::DMatrix;

use crate::datacube::HyperCube;
use crate::error::{Error, Result};
use crate::linalg::sym_eigen_desc;

/// A single-band image of integer levels in `0..=255`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GrayImage {
    height: usize,
    width: usize,
    levels: Vec<u8>,
}

impl GrayImage {
    pub fn new(height: usize, width: usize, levels: Vec<u8>) -> Result<Self> {
        if height == 0 || width == 0 || levels.len() != height * width {
            return Err(Error::Dimensions(format!(
                "{} levels for a {height}x{width} image",
                levels.len()
            )));
        }
        Ok(Self {
            height,
            width,
            levels,
        })
    }

    pub fn from_fn(
        height: usize,
        width: usize,
        mut f: impl FnMut(usize, usize) -> u8,
    ) -> Result<Self> {
        let mut levels = Vec::with_capacity(height * width);
        for r in 0..height {
            for c in 0..width {
                levels.push(f(r, c));
            }
        }
        Self::new(height, width, levels)
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.levels[row * self.width + col]
    }

    /// Row-major levels.
    pub fn levels(&self) -> &[u8] {
        &self.levels
    }

    /// `255 - level` at every pixel.
    pub fn inverted(&self) -> Self {
        Self {
            height: self.height,
            width: self.width,
            levels: self.levels.iter().map(|&l| 255 - l).collect(),
        }
    }
}

/// Real-valued single-band image, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct RealImage {
    pub height: usize,
    pub width: usize,
    pub values: Vec<f64>,
}

/// Projection of every pixel onto the leading eigenvector of the band
/// covariance matrix (population divisor).
///
/// The eigenvector's largest-magnitude loading is made positive. A cube
/// with zero variance yields the all-zeros image.
pub fn first_principal_component(cube: &HyperCube) -> Result<RealImage> {
    let (h, w, d) = cube.dims();
    let n = h * w;
    if n < 2 {
        return Err(Error::Dimensions("PCA needs at least 2 pixels".into()));
    }
    let first = cube.pixel(0);
    if (1..n).all(|p| cube.pixel(p) == first) {
        return Ok(RealImage {
            height: h,
            width: w,
            values: vec![0.0; n],
        });
    }
    let data = DMatrix::from_row_slice(n, d, cube.values());
    let mean = data.row_mean();
    let mut centered = data;
    for mut row in centered.row_iter_mut() {
        row -= &mean;
    }
    let cov = centered.transpose() * &centered / n as f64;
    let (vals, vecs) = sym_eigen_desc(cov);
    let values = if vals[0] <= 0.0 {
        vec![0.0; n]
    } else {
        (centered * vecs.column(0)).as_slice().to_vec()
    };
    Ok(RealImage {
        height: h,
        width: w,
        values,
    })
}

/// Min-max rescales to `[0, 255]` and rounds half to even. A constant input
/// maps to level 128.
pub fn quantize_to_gray(img: &RealImage) -> Result<GrayImage> {
    if let Some(v) = img.values.iter().find(|v| !v.is_finite()) {
        return Err(Error::Parameter(format!(
            "cannot quantize non-finite value {v}"
        )));
    }
    let (lo, hi) = img
        .values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    let levels = if hi > lo {
        img.values
            .iter()
            .map(|&v| {
                ((v - lo) / (hi - lo) * 255.0)
                    .round_ties_even()
                    .clamp(0.0, 255.0) as u8
            })
            .collect()
    } else {
        vec![128; img.values.len()]
    };
    GrayImage::new(img.height, img.width, levels)
}

/// PC1 followed by quantization.
pub fn gray_from_cube(cube: &HyperCube) -> Result<GrayImage> {
    quantize_to_gray(&first_principal_component(cube)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(values: Vec<f64>) -> RealImage {
        RealImage {
            height: 1,
            width: values.len(),
            values,
        }
    }

    #[test]
    fn quantize_cases() {
        assert_eq!(
            quantize_to_gray(&real(vec![2.5; 5])).unwrap().levels(),
            &[128; 5]
        );
        assert_eq!(
            quantize_to_gray(&real(vec![0.0, 1.0])).unwrap().levels(),
            &[0, 255]
        );
        assert_eq!(
            quantize_to_gray(&real(vec![0.0, 0.5, 1.0]))
                .unwrap()
                .levels(),
            &[0, 128, 255]
        );
        assert!(quantize_to_gray(&real(vec![0.0, f64::NAN])).is_err());
    }

    #[test]
    fn constant_spatial_image_gives_zero_pc1() {
        // band b holds b * constant everywhere
        let cube = HyperCube::from_fn(3, 4, 5, |_, _, b| b as f64 * 0.7).unwrap();
        let pc1 = first_principal_component(&cube).unwrap();
        assert!(pc1.values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn diagonal_two_band_cube() {
        let cube = HyperCube::new(2, 2, 2, vec![1., 1., 2., 2., 3., 3., 4., 4.]).unwrap();
        let pc1 = first_principal_component(&cube).unwrap();
        // centered (-1.5,-1.5)... projected on (1,1)/√2
        let s = std::f64::consts::SQRT_2;
        let want = [-1.5 * s, -0.5 * s, 0.5 * s, 1.5 * s];
        for (g, w) in pc1.values.iter().zip(want) {
            assert!((g - w).abs() < 1e-12, "{g} vs {w}");
        }
    }

    #[test]
    fn single_pixel_rejected() {
        let cube = HyperCube::zeros(1, 1, 3).unwrap();
        assert!(first_principal_component(&cube).is_err());
    }
}
