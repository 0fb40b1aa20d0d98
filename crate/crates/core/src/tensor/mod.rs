//! Dense third-order tensors, patch tensors and truncated Tucker
//! decomposition.

mod patch;
mod tucker;

pub use patch::{
    denoise_cube, fold_to_tensor, patchify, unfold_to_grid, unpatchify, PatchGeometry, PatchGrid,
};
pub use tucker::{hosvd, tucker_als, tucker_reconstruct, AlsOptions, TuckerFactors};

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// An `I1 × I2 × I3` real tensor. Storage is first-index-fastest, so
/// frontal slices `x[:, :, k]` are contiguous column-major matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor3 {
    dims: [usize; 3],
    data: Vec<f64>,
}

impl Tensor3 {
    pub fn new(dims: [usize; 3], data: Vec<f64>) -> Result<Self> {
        if dims.contains(&0) {
            return Err(Error::Dimensions(format!(
                "tensor dims {dims:?} must be positive"
            )));
        }
        if data.len() != dims.iter().product::<usize>() {
            return Err(Error::Dimensions(format!(
                "{} values for a tensor of dims {dims:?}",
                data.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::Parameter("tensor contains non-finite values".into()));
        }
        Ok(Self { dims, data })
    }

    pub fn zeros(dims: [usize; 3]) -> Result<Self> {
        Self::new(dims, vec![0.0; dims.iter().product()])
    }

    pub fn from_fn(
        dims: [usize; 3],
        mut f: impl FnMut(usize, usize, usize) -> f64,
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(dims.iter().product());
        for k in 0..dims[2] {
            for j in 0..dims[1] {
                for i in 0..dims[0] {
                    data.push(f(i, j, k));
                }
            }
        }
        Self::new(dims, data)
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    #[inline]
    fn offset(&self, i: usize, j: usize, k: usize) -> usize {
        i + self.dims[0] * (j + self.dims[1] * k)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.data[self.offset(i, j, k)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, v: f64) {
        let o = self.offset(i, j, k);
        self.data[o] = v;
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// `‖self − other‖_F`.
    pub fn distance(&self, other: &Tensor3) -> f64 {
        assert_eq!(self.dims, other.dims);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    /// Mode-`mode` unfolding (`mode` in `0..3`): rows index that mode.
    pub fn unfold(&self, mode: usize) -> DMatrix<f64> {
        let [n1, n2, n3] = self.dims;
        match mode {
            0 => DMatrix::from_column_slice(n1, n2 * n3, &self.data),
            1 => DMatrix::from_fn(n2, n1 * n3, |j, col| self.get(col % n1, j, col / n1)),
            2 => DMatrix::from_row_slice(n3, n1 * n2, &self.data),
            _ => panic!("mode {mode} out of range"),
        }
    }

    /// `self ×_mode m` for a `J × I_mode` matrix `m`.
    pub fn mode_product(&self, mode: usize, m: &DMatrix<f64>) -> Tensor3 {
        let [n1, n2, n3] = self.dims;
        assert_eq!(
            m.ncols(),
            self.dims[mode],
            "mode-{mode} product shape mismatch"
        );
        let j = m.nrows();
        match mode {
            0 => {
                let out = m * self.unfold(0);
                Tensor3 {
                    dims: [j, n2, n3],
                    data: out.as_slice().to_vec(),
                }
            }
            1 => {
                let mt = m.transpose();
                let mut data = Vec::with_capacity(n1 * j * n3);
                for k in 0..n3 {
                    let slice = nalgebra::DMatrixView::from_slice(
                        &self.data[k * n1 * n2..(k + 1) * n1 * n2],
                        n1,
                        n2,
                    );
                    data.extend_from_slice((slice * &mt).as_slice());
                }
                Tensor3 {
                    dims: [n1, j, n3],
                    data,
                }
            }
            2 => {
                let out = m * self.unfold(2);
                Tensor3 {
                    dims: [n1, n2, j],
                    data: out.transpose().as_slice().to_vec(),
                }
            }
            _ => panic!("mode {mode} out of range"),
        }
    }

    /// The leading `r1 × r2 × r3` block.
    pub fn truncated(&self, r: [usize; 3]) -> Tensor3 {
        assert!(r.iter().zip(self.dims).all(|(&a, b)| a <= b && a > 0));
        let mut data = Vec::with_capacity(r.iter().product());
        for k in 0..r[2] {
            for j in 0..r[1] {
                for i in 0..r[0] {
                    data.push(self.get(i, j, k));
                }
            }
        }
        Tensor3 { dims: r, data }
    }
}
