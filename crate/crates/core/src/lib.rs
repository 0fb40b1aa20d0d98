//! Hyperspectral change detection by joint morphological attribute profiles
//! and patch-tensor Tucker denoising.
//!
//! The pipeline has two branches that are fused into one change map:
//!
//! * **Morphology**: each date is reduced to its first principal component,
//!   quantized to 8 bits, and decomposed into a max-tree and a min-tree.
//!   Both trees are filtered at a bank of thresholds for five attributes
//!   (area, height, volume, bounding-box diagonal, standard deviation) and
//!   reconstructed, giving a stack of feature images per date. The stacks
//!   are compared by summed absolute difference.
//! * **Tensor**: each date is cut into non-overlapping `w × w` patches,
//!   folded into a third-order tensor, denoised by a truncated Tucker
//!   decomposition fitted with alternating least squares, and reassembled.
//!   The denoised dates are compared with an 8-neighbourhood detector
//!   weighted by the spectral angle of the centre pixel.
//!
//! ```
//! use jmpt::datacube::{synth_scene, SceneConfig};
//! use jmpt::detectors::{jmpt_detect, PipelineConfig};
//! use jmpt::evaluation::{auc, roc_curve};
//!
//! let scene = synth_scene(&SceneConfig { height: 24, width: 24, bands: 8, ..Default::default() })?;
//! let map = jmpt_detect(&scene.pair, &PipelineConfig::default())?;
//! let area = auc(&roc_curve(&map, &scene.mask)?);
//! assert!(area > 0.9);
//! # Ok::<(), jmpt::Error>(())
//! ```
//!
//! The `book/` directory at the repository root walks through each stage
//! in more detail; its code blocks are compiled as doctests of this crate.

pub mod datacube;
pub mod detectors;
pub mod error;
pub mod evaluation;
mod linalg;
pub mod morphology;
pub mod pca;
pub mod tensor;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    struct Introduction;
    #[doc = include_str!("../../../book/src/raster-format.md")]
    struct RasterFormat;
    #[doc = include_str!("../../../book/src/principal-component.md")]
    struct PrincipalComponent;
    #[doc = include_str!("../../../book/src/component-trees.md")]
    struct ComponentTrees;
    #[doc = include_str!("../../../book/src/attribute-filtering.md")]
    struct AttributeFiltering;
    #[doc = include_str!("../../../book/src/patch-tensor.md")]
    struct PatchTensor;
    #[doc = include_str!("../../../book/src/detectors.md")]
    struct Detectors;
    #[doc = include_str!("../../../book/src/evaluation.md")]
    struct Evaluation;
    #[doc = include_str!("../../../book/src/cli.md")]
    struct Cli;
}
