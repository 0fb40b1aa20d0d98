//! Non-overlapping patch partition of a cube and the patch tensor.
//!
//! A cube of `H × W × D` with patch size `w` is cut into an `m × n` grid of
//! `w × w × D` patches, `m = ⌊H/w⌋`, `n = ⌊W/w⌋`. Trailing rows and columns
//! that do not fill a whole patch stay outside the grid. Patch `k`
//! (row-major over the grid) becomes frontal slice `k` of a
//! `w² × D × mn` tensor, with rows enumerating the patch pixels row-major.

use serde::Serialize;

use super::tucker::{tucker_als, tucker_reconstruct, AlsOptions};
use super::Tensor3;
use crate::datacube::HyperCube;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PatchGeometry {
    pub height: usize,
    pub width: usize,
    pub bands: usize,
    pub patch_size: usize,
    /// Patch rows, `⌊height / patch_size⌋`.
    pub rows: usize,
    /// Patch columns, `⌊width / patch_size⌋`.
    pub cols: usize,
}

impl PatchGeometry {
    pub fn new(height: usize, width: usize, bands: usize, patch_size: usize) -> Result<Self> {
        if patch_size == 0 || patch_size > height.min(width) {
            return Err(Error::Parameter(format!(
                "patch size {patch_size} must be in 1..={} for a {height}x{width} image",
                height.min(width)
            )));
        }
        Ok(Self {
            height,
            width,
            bands,
            patch_size,
            rows: height / patch_size,
            cols: width / patch_size,
        })
    }

    pub fn patch_count(&self) -> usize {
        self.rows * self.cols
    }

    /// Dimensions of the patch tensor, `[w², D, mn]`.
    pub fn tensor_dims(&self) -> [usize; 3] {
        [
            self.patch_size * self.patch_size,
            self.bands,
            self.patch_count(),
        ]
    }

    /// Largest admissible Tucker rank, `min(w², D, mn)`.
    pub fn full_rank(&self) -> usize {
        *self.tensor_dims().iter().min().unwrap()
    }
}

/// The grid of patches, each stored pixel-interleaved `(row, col, band)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PatchGrid {
    pub geometry: PatchGeometry,
    pub patches: Vec<Vec<f64>>,
}

impl PatchGrid {
    pub fn patch(&self, i: usize, j: usize) -> &[f64] {
        &self.patches[i * self.geometry.cols + j]
    }
}

pub fn patchify(cube: &HyperCube, patch_size: usize) -> Result<PatchGrid> {
    let (h, w, d) = cube.dims();
    let geometry = PatchGeometry::new(h, w, d, patch_size)?;
    let s = patch_size;
    let mut patches = Vec::with_capacity(geometry.patch_count());
    for i in 0..geometry.rows {
        for j in 0..geometry.cols {
            let mut patch = Vec::with_capacity(s * s * d);
            for pr in 0..s {
                for pc in 0..s {
                    patch.extend_from_slice(cube.spectrum(i * s + pr, j * s + pc));
                }
            }
            patches.push(patch);
        }
    }
    Ok(PatchGrid { geometry, patches })
}

pub fn fold_to_tensor(grid: &PatchGrid) -> Tensor3 {
    let g = &grid.geometry;
    let [n1, n2, n3] = g.tensor_dims();
    let mut data = vec![0.0; n1 * n2 * n3];
    for (k, patch) in grid.patches.iter().enumerate() {
        for (p, spectrum) in patch.chunks_exact(n2).enumerate() {
            for (b, &v) in spectrum.iter().enumerate() {
                data[p + n1 * (b + n2 * k)] = v;
            }
        }
    }
    Tensor3::new([n1, n2, n3], data).expect("grid values are finite")
}

/// Inverse of [`fold_to_tensor`].
pub fn unfold_to_grid(x: &Tensor3, geometry: &PatchGeometry) -> Result<PatchGrid> {
    if x.dims() != geometry.tensor_dims() {
        return Err(Error::Mismatch(format!(
            "tensor dims {:?} do not match patch geometry {:?}",
            x.dims(),
            geometry.tensor_dims()
        )));
    }
    let [n1, n2, n3] = x.dims();
    let patches = (0..n3)
        .map(|k| {
            let mut patch = Vec::with_capacity(n1 * n2);
            for p in 0..n1 {
                for b in 0..n2 {
                    patch.push(x.get(p, b, k));
                }
            }
            patch
        })
        .collect();
    Ok(PatchGrid {
        geometry: *geometry,
        patches,
    })
}

/// Writes the patches of `x` back into a copy of `original`. Pixels outside
/// the grid keep their original values.
pub fn unpatchify(
    x: &Tensor3,
    geometry: &PatchGeometry,
    original: &HyperCube,
) -> Result<HyperCube> {
    let g = geometry;
    if original.dims() != (g.height, g.width, g.bands) {
        return Err(Error::Mismatch(format!(
            "original cube {:?} does not match patch geometry {}x{}x{}",
            original.dims(),
            g.height,
            g.width,
            g.bands
        )));
    }
    let grid = unfold_to_grid(x, g)?;
    let s = g.patch_size;
    let d = g.bands;
    let mut values = original.values().to_vec();
    for i in 0..g.rows {
        for j in 0..g.cols {
            let patch = grid.patch(i, j);
            for pr in 0..s {
                for pc in 0..s {
                    let dst = ((i * s + pr) * g.width + j * s + pc) * d;
                    let src = (pr * s + pc) * d;
                    values[dst..dst + d].copy_from_slice(&patch[src..src + d]);
                }
            }
        }
    }
    HyperCube::new(g.height, g.width, d, values)
}

/// Patch-tensor Tucker denoising with rank `min(w², D, mn)`.
pub fn denoise_cube(cube: &HyperCube, patch_size: usize, opts: &AlsOptions) -> Result<HyperCube> {
    let grid = patchify(cube, patch_size)?;
    let x = fold_to_tensor(&grid);
    let factors = tucker_als(&x, grid.geometry.full_rank(), opts)?;
    unpatchify(&tucker_reconstruct(&factors), &grid.geometry, cube)
}
