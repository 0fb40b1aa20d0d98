use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::attributes::{compute_attributes, Attribute, AttributeTable};
use super::filter::{filter_tree, FilterRule};
use super::tree::{ComponentTree, Connectivity, TreeKind};
use crate::error::{Error, Result};
use crate::pca::GrayImage;

/// Filtering thresholds per attribute.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThresholdBank {
    pub area: Vec<f64>,
    pub height: Vec<f64>,
    pub volume: Vec<f64>,
    pub diag: Vec<f64>,
    pub std: Vec<f64>,
}

impl Default for ThresholdBank {
    /// Area steps by 5 from 10; the other attributes step by 3 from 10.
    fn default() -> Self {
        let steps = |step: f64| (0..10).map(|i| 10.0 + step * i as f64).collect::<Vec<_>>();
        Self {
            area: steps(5.0),
            height: steps(3.0),
            volume: steps(3.0),
            diag: steps(3.0),
            std: steps(3.0),
        }
    }
}

impl ThresholdBank {
    pub fn thresholds(&self, attribute: Attribute) -> &[f64] {
        match attribute {
            Attribute::Area => &self.area,
            Attribute::Height => &self.height,
            Attribute::Volume => &self.volume,
            Attribute::Diag => &self.diag,
            Attribute::Std => &self.std,
        }
    }

    pub fn len(&self) -> usize {
        Attribute::ALL
            .iter()
            .map(|&a| self.thresholds(a).len())
            .sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn validate(&self) -> Result<()> {
        if self.is_empty() {
            return Err(Error::Parameter("threshold bank is empty".into()));
        }
        for a in Attribute::ALL {
            if let Some(t) = self.thresholds(a).iter().find(|t| !t.is_finite()) {
                return Err(Error::Parameter(format!("non-finite {a} threshold {t}")));
            }
        }
        Ok(())
    }

    /// Every `(attribute, threshold)` pair in stacking order, thresholds
    /// ascending within each attribute.
    pub fn entries(&self) -> Vec<(Attribute, f64)> {
        Attribute::ALL
            .iter()
            .flat_map(|&a| {
                let mut ts = self.thresholds(a).to_vec();
                ts.sort_by(f64::total_cmp);
                ts.into_iter().map(move |t| (a, t))
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandProvenance {
    pub kind: TreeKind,
    pub attribute: Attribute,
    pub threshold: f64,
}

/// Filtered reconstructions of one image, in order max-tree then min-tree,
/// attributes as in [`Attribute::ALL`], thresholds ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureStack {
    height: usize,
    width: usize,
    bands: Vec<Vec<f64>>,
    provenance: Vec<BandProvenance>,
}

impl FeatureStack {
    pub fn new(
        height: usize,
        width: usize,
        bands: Vec<Vec<f64>>,
        provenance: Vec<BandProvenance>,
    ) -> Result<Self> {
        if bands.len() != provenance.len() {
            return Err(Error::Mismatch(format!(
                "{} bands but {} provenance records",
                bands.len(),
                provenance.len()
            )));
        }
        if bands.iter().any(|b| b.len() != height * width) {
            return Err(Error::Dimensions(format!(
                "every band must hold {height}x{width} values"
            )));
        }
        Ok(Self {
            height,
            width,
            bands,
            provenance,
        })
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.bands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bands.is_empty()
    }

    pub fn band(&self, i: usize) -> &[f64] {
        &self.bands[i]
    }

    pub fn bands(&self) -> &[Vec<f64>] {
        &self.bands
    }

    pub fn provenance(&self) -> &[BandProvenance] {
        &self.provenance
    }
}

pub fn build_feature_stack(
    img: &GrayImage,
    thresholds: &ThresholdBank,
    connectivity: Connectivity,
) -> Result<FeatureStack> {
    thresholds.validate()?;
    let entries = thresholds.entries();
    let trees: Vec<(ComponentTree, AttributeTable)> = [TreeKind::Max, TreeKind::Min]
        .par_iter()
        .map(|&kind| {
            let tree = ComponentTree::build(img, kind, connectivity);
            let attrs = compute_attributes(&tree);
            (tree, attrs)
        })
        .collect();

    let jobs: Vec<(usize, Attribute, f64)> = (0..trees.len())
        .flat_map(|t| entries.iter().map(move |&(a, th)| (t, a, th)))
        .collect();
    let (bands, provenance): (Vec<_>, Vec<_>) = jobs
        .par_iter()
        .map(|&(t, attribute, threshold)| {
            let (tree, attrs) = &trees[t];
            let rule = FilterRule::for_attribute(attribute);
            let image = filter_tree(tree, attrs, attribute, threshold, rule).reconstruct();
            let prov = BandProvenance {
                kind: tree.kind(),
                attribute,
                threshold,
            };
            (image.values, prov)
        })
        .unzip();
    FeatureStack::new(img.height(), img.width(), bands, provenance)
}
