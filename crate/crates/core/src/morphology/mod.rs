//! Component trees, attribute filtering and attribute profiles.
//!
//! A [`ComponentTree`] over a [`GrayImage`](crate::pca::GrayImage) encodes
//! the connected components of every level set: a max-tree for upper level
//! sets `{p : f(p) ≥ t}`, a min-tree for lower level sets. Each node's
//! attributes are measured on its whole subtree. Filtering removes nodes
//! whose attribute is below a threshold, and reconstruction moves the
//! pixels of removed nodes to the level of their nearest surviving
//! ancestor.

mod attributes;
mod filter;
mod profile;
mod tree;

pub use attributes::{compute_attributes, Attribute, AttributeTable};
pub use filter::{filter_by_values, filter_tree, reconstruct, FilterRule, FilteredTree};
pub use profile::{build_feature_stack, BandProvenance, FeatureStack, ThresholdBank};
pub use tree::{build_max_tree, build_min_tree, ComponentTree, Connectivity, Node, TreeKind};
