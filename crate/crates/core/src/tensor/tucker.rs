//! Truncated Tucker decomposition fitted by alternating least squares
//! (higher-order orthogonal iteration), initialized by truncated HOSVD.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::Tensor3;
use crate::error::{Error, Result};
use crate::linalg::{complete_basis, leading_left_singular};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AlsOptions {
    pub max_iters: usize,
    /// Stop once the fit error changes by less than `tol · ‖x‖_F`.
    pub tol: f64,
}

impl Default for AlsOptions {
    fn default() -> Self {
        Self {
            max_iters: 25,
            tol: 1e-6,
        }
    }
}

/// Core tensor and orthonormal factor matrices.
///
/// Factor `k` has `I_k` rows and at least `rank` columns; the core has at
/// least `rank` entries along each mode. Only the leading `rank` block
/// takes part in reconstruction.
#[derive(Debug, Clone, PartialEq)]
pub struct TuckerFactors {
    pub core: Tensor3,
    pub u: DMatrix<f64>,
    pub v: DMatrix<f64>,
    pub w: DMatrix<f64>,
    pub rank: usize,
    /// `‖x − x̃‖_F` after initialization and after each ALS sweep.
    pub fit_history: Vec<f64>,
}

impl TuckerFactors {
    pub fn factors(&self) -> [&DMatrix<f64>; 3] {
        [&self.u, &self.v, &self.w]
    }

    /// Largest entry-wise deviation of `FᵀF` from the identity over the
    /// three factors.
    pub fn orthonormality_error(&self) -> f64 {
        self.factors()
            .iter()
            .map(|f| {
                let g = f.transpose() * *f;
                (g - DMatrix::<f64>::identity(f.ncols(), f.ncols())).amax()
            })
            .fold(0.0, f64::max)
    }

    /// Extends each factor to a square orthonormal matrix and recomputes the
    /// full `I1 × I2 × I3` core of `x`. Reconstruction at `rank` is
    /// unchanged.
    pub fn complete(&self, x: &Tensor3) -> TuckerFactors {
        let u = complete_basis(&self.u);
        let v = complete_basis(&self.v);
        let w = complete_basis(&self.w);
        let core = project(x, &u, &v, &w);
        TuckerFactors {
            core,
            u,
            v,
            w,
            rank: self.rank,
            fit_history: self.fit_history.clone(),
        }
    }
}

/// `x ×₁ Uᵀ ×₂ Vᵀ ×₃ Wᵀ`.
fn project(x: &Tensor3, u: &DMatrix<f64>, v: &DMatrix<f64>, w: &DMatrix<f64>) -> Tensor3 {
    x.mode_product(0, &u.transpose())
        .mode_product(1, &v.transpose())
        .mode_product(2, &w.transpose())
}

fn check_rank(x: &Tensor3, rank: usize) -> Result<()> {
    let max = *x.dims().iter().min().unwrap();
    if rank == 0 || rank > max {
        return Err(Error::Parameter(format!(
            "Tucker rank {rank} outside 1..={max} for dims {:?}",
            x.dims()
        )));
    }
    if x.data().iter().any(|v| !v.is_finite()) {
        return Err(Error::Parameter("tensor contains non-finite values".into()));
    }
    Ok(())
}

/// Truncated HOSVD: each factor holds the leading `rank` left singular
/// vectors of the corresponding unfolding.
pub fn hosvd(x: &Tensor3, rank: usize) -> Result<TuckerFactors> {
    check_rank(x, rank)?;
    let u = leading_left_singular(&x.unfold(0), rank);
    let v = leading_left_singular(&x.unfold(1), rank);
    let w = leading_left_singular(&x.unfold(2), rank);
    let core = project(x, &u, &v, &w);
    let mut f = TuckerFactors {
        core,
        u,
        v,
        w,
        rank,
        fit_history: Vec::new(),
    };
    f.fit_history.push(x.distance(&tucker_reconstruct(&f)));
    Ok(f)
}

/// Rank-`(r, r, r)` Tucker approximation of `x`.
///
/// Starts from the truncated HOSVD, then updates one factor at a time with
/// the other two fixed: the new factor is the leading `r` eigenvectors of
/// the Gram matrix of `x` projected onto the other two factors.
pub fn tucker_als(x: &Tensor3, rank: usize, opts: &AlsOptions) -> Result<TuckerFactors> {
    if opts.tol.is_nan() || opts.tol < 0.0 {
        return Err(Error::Parameter(format!(
            "ALS tolerance {} must be >= 0",
            opts.tol
        )));
    }
    let mut f = hosvd(x, rank)?;
    let norm = x.frobenius_norm();
    if norm == 0.0 {
        return Ok(f);
    }
    for _ in 0..opts.max_iters {
        let y = x
            .mode_product(1, &f.v.transpose())
            .mode_product(2, &f.w.transpose());
        f.u = leading_left_singular(&y.unfold(0), rank);

        let y = x
            .mode_product(0, &f.u.transpose())
            .mode_product(2, &f.w.transpose());
        f.v = leading_left_singular(&y.unfold(1), rank);

        let y = x
            .mode_product(0, &f.u.transpose())
            .mode_product(1, &f.v.transpose());
        f.w = leading_left_singular(&y.unfold(2), rank);

        f.core = project(x, &f.u, &f.v, &f.w);
        let err = x.distance(&tucker_reconstruct(&f));
        let prev = *f.fit_history.last().unwrap();
        f.fit_history.push(err);
        if (prev - err).abs() < opts.tol * norm {
            break;
        }
    }
    Ok(f)
}

/// `core(1:r, 1:r, 1:r) ×₁ U(:, 1:r) ×₂ V(:, 1:r) ×₃ W(:, 1:r)`.
pub fn tucker_reconstruct(f: &TuckerFactors) -> Tensor3 {
    let r = f.rank;
    let core = if f.core.dims() == [r, r, r] {
        f.core.clone()
    } else {
        f.core.truncated([r, r, r])
    };
    core.mode_product(0, &f.u.columns(0, r).into_owned())
        .mode_product(1, &f.v.columns(0, r).into_owned())
        .mode_product(2, &f.w.columns(0, r).into_owned())
}
