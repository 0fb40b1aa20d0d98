use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::tree::{ComponentTree, TreeKind};
use crate::error::Error;

/// Node attributes used for filtering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Attribute {
    /// Pixel count of the region.
    Area,
    /// Gray-level range within the region.
    Height,
    /// `Σ (max g − g(p))` with `g = f` on max-trees and `g = −f` on min-trees.
    Volume,
    /// Diagonal of the region's bounding box.
    Diag,
    /// Standard deviation of gray levels in the region.
    Std,
}

impl Attribute {
    /// Filtering order used in feature stacks.
    pub const ALL: [Attribute; 5] = [
        Attribute::Area,
        Attribute::Height,
        Attribute::Volume,
        Attribute::Diag,
        Attribute::Std,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Attribute::Area => "area",
            Attribute::Height => "height",
            Attribute::Volume => "volume",
            Attribute::Diag => "diag",
            Attribute::Std => "std",
        }
    }

    /// Whether the attribute never decreases from a node to its parent.
    pub fn is_increasing(self) -> bool {
        !matches!(self, Attribute::Std)
    }
}

impl fmt::Display for Attribute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Attribute {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Attribute::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::UnknownAttribute(s.to_owned()))
    }
}

/// Per-node attribute values, each evaluated over the full pixel support of
/// the node's subtree.
#[derive(Debug, Clone, PartialEq)]
pub struct AttributeTable {
    pub area: Vec<f64>,
    pub height: Vec<f64>,
    pub volume: Vec<f64>,
    pub diag: Vec<f64>,
    pub std: Vec<f64>,
}

impl AttributeTable {
    pub fn values(&self, attribute: Attribute) -> &[f64] {
        match attribute {
            Attribute::Area => &self.area,
            Attribute::Height => &self.height,
            Attribute::Volume => &self.volume,
            Attribute::Diag => &self.diag,
            Attribute::Std => &self.std,
        }
    }

    pub fn len(&self) -> usize {
        self.area.len()
    }

    pub fn is_empty(&self) -> bool {
        self.area.is_empty()
    }
}

#[derive(Clone, Copy)]
struct Accum {
    area: u64,
    sum: u64,
    sum_sq: u64,
    max: u8,
    min: u8,
    row_min: usize,
    row_max: usize,
    col_min: usize,
    col_max: usize,
}

impl Accum {
    const EMPTY: Accum = Accum {
        area: 0,
        sum: 0,
        sum_sq: 0,
        max: 0,
        min: 255,
        row_min: usize::MAX,
        row_max: 0,
        col_min: usize::MAX,
        col_max: 0,
    };

    fn add_pixel(&mut self, level: u8, row: usize, col: usize) {
        let l = level as u64;
        self.area += 1;
        self.sum += l;
        self.sum_sq += l * l;
        self.max = self.max.max(level);
        self.min = self.min.min(level);
        self.row_min = self.row_min.min(row);
        self.row_max = self.row_max.max(row);
        self.col_min = self.col_min.min(col);
        self.col_max = self.col_max.max(col);
    }

    fn merge(&mut self, o: &Accum) {
        self.area += o.area;
        self.sum += o.sum;
        self.sum_sq += o.sum_sq;
        self.max = self.max.max(o.max);
        self.min = self.min.min(o.min);
        self.row_min = self.row_min.min(o.row_min);
        self.row_max = self.row_max.max(o.row_max);
        self.col_min = self.col_min.min(o.col_min);
        self.col_max = self.col_max.max(o.col_max);
    }
}

/// Evaluates all five attributes for every node in one bottom-up pass.
pub fn compute_attributes(tree: &ComponentTree) -> AttributeTable {
    let n = tree.len();
    let w = tree.width();
    let mut acc = vec![Accum::EMPTY; n];
    for (i, node) in tree.nodes().iter().enumerate() {
        for &p in &node.pixels {
            acc[i].add_pixel(node.level, p / w, p % w);
        }
    }
    // children come after parents
    for i in (1..n).rev() {
        let child = acc[i];
        acc[tree.parent(i)].merge(&child);
    }

    let mut table = AttributeTable {
        area: Vec::with_capacity(n),
        height: Vec::with_capacity(n),
        volume: Vec::with_capacity(n),
        diag: Vec::with_capacity(n),
        std: Vec::with_capacity(n),
    };
    for a in &acc {
        let area = a.area as f64;
        table.area.push(area);
        table.height.push((a.max - a.min) as f64);
        let volume = match tree.kind() {
            TreeKind::Max => a.area * a.max as u64 - a.sum,
            TreeKind::Min => a.sum - a.area * a.min as u64,
        };
        table.volume.push(volume as f64);
        let dr = (a.row_max - a.row_min) as f64;
        let dc = (a.col_max - a.col_min) as f64;
        table.diag.push((dr * dr + dc * dc).sqrt());
        // area·Σf² − (Σf)² is exact in integers
        let spread = (a.area as u128 * a.sum_sq as u128 - (a.sum as u128).pow(2)) as f64;
        table.std.push(spread.sqrt() / area);
    }
    table
}
