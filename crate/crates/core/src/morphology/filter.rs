use serde::{Deserialize, Serialize};

use super::attributes::{Attribute, AttributeTable};
use super::tree::ComponentTree;
use crate::pca::RealImage;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FilterRule {
    /// A failing node takes its whole subtree with it.
    Prune,
    /// Every node is judged on its own value.
    Direct,
}

impl FilterRule {
    /// Pruning for increasing attributes, the direct rule otherwise.
    pub fn for_attribute(attribute: Attribute) -> Self {
        if attribute.is_increasing() {
            FilterRule::Prune
        } else {
            FilterRule::Direct
        }
    }
}

/// A tree together with per-node removal flags from one filtering pass.
#[derive(Debug, Clone)]
pub struct FilteredTree<'a> {
    tree: &'a ComponentTree,
    removed: Vec<bool>,
}

impl<'a> FilteredTree<'a> {
    pub fn tree(&self) -> &'a ComponentTree {
        self.tree
    }

    pub fn removed(&self) -> &[bool] {
        &self.removed
    }

    pub fn removed_count(&self) -> usize {
        self.removed.iter().filter(|&&r| r).count()
    }

    /// Each pixel takes the level of its node's nearest preserved ancestor
    /// (the node itself when preserved).
    pub fn reconstruct(&self) -> RealImage {
        reconstruct(self)
    }
}

/// Removes every non-root node whose attribute value is below `threshold`.
pub fn filter_tree<'a>(
    tree: &'a ComponentTree,
    attributes: &AttributeTable,
    attribute: Attribute,
    threshold: f64,
    rule: FilterRule,
) -> FilteredTree<'a> {
    filter_by_values(tree, attributes.values(attribute), threshold, rule)
}

/// Filtering on arbitrary per-node values.
pub fn filter_by_values<'a>(
    tree: &'a ComponentTree,
    values: &[f64],
    threshold: f64,
    rule: FilterRule,
) -> FilteredTree<'a> {
    assert_eq!(values.len(), tree.len(), "one value per node");
    let mut removed = vec![false; tree.len()];
    for i in 1..tree.len() {
        let fails = values[i] < threshold;
        removed[i] = match rule {
            FilterRule::Prune => fails || removed[tree.parent(i)],
            FilterRule::Direct => fails,
        };
    }
    FilteredTree { tree, removed }
}

pub fn reconstruct(filtered: &FilteredTree<'_>) -> RealImage {
    let tree = filtered.tree;
    let mut out_level = vec![0u8; tree.len()];
    out_level[0] = tree.level(0);
    for i in 1..tree.len() {
        out_level[i] = if filtered.removed[i] {
            out_level[tree.parent(i)]
        } else {
            tree.level(i)
        };
    }
    RealImage {
        height: tree.height(),
        width: tree.width(),
        values: tree
            .pixel_to_node()
            .iter()
            .map(|&node| out_level[node] as f64)
            .collect(),
    }
}
