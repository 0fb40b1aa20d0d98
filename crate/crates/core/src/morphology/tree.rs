use serde::{Deserialize, Serialize};

use crate::pca::GrayImage;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TreeKind {
    /// Nodes are components of upper level sets `{p : f(p) ≥ t}`.
    Max,
    /// Nodes are components of lower level sets `{p : f(p) ≤ t}`.
    Min,
}

impl TreeKind {
    pub fn name(self) -> &'static str {
        match self {
            TreeKind::Max => "max",
            TreeKind::Min => "min",
        }
    }

    /// Ordering key under which leaves have the largest value.
    #[inline]
    fn key(self, level: u8) -> u8 {
        match self {
            TreeKind::Max => level,
            TreeKind::Min => 255 - level,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Connectivity {
    #[default]
    #[serde(rename = "4")]
    Four,
    #[serde(rename = "8")]
    Eight,
}

impl Connectivity {
    pub fn from_count(n: u8) -> Option<Self> {
        match n {
            4 => Some(Connectivity::Four),
            8 => Some(Connectivity::Eight),
            _ => None,
        }
    }

    pub fn count(self) -> u8 {
        match self {
            Connectivity::Four => 4,
            Connectivity::Eight => 8,
        }
    }

    pub(crate) fn offsets(self) -> &'static [(isize, isize)] {
        const FOUR: [(isize, isize); 4] = [(-1, 0), (0, -1), (0, 1), (1, 0)];
        const EIGHT: [(isize, isize); 8] = [
            (-1, -1),
            (-1, 0),
            (-1, 1),
            (0, -1),
            (0, 1),
            (1, -1),
            (1, 0),
            (1, 1),
        ];
        match self {
            Connectivity::Four => &FOUR,
            Connectivity::Eight => &EIGHT,
        }
    }

    /// Row-major indices of the in-bounds neighbours of `p`.
    pub(crate) fn neighbors(
        self,
        p: usize,
        height: usize,
        width: usize,
    ) -> impl Iterator<Item = usize> {
        let (r, c) = ((p / width) as isize, (p % width) as isize);
        self.offsets().iter().filter_map(move |&(dr, dc)| {
            let (nr, nc) = (r + dr, c + dc);
            (nr >= 0 && nc >= 0 && (nr as usize) < height && (nc as usize) < width)
                .then(|| nr as usize * width + nc as usize)
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    /// Parent index; the root is its own parent.
    pub parent: usize,
    pub level: u8,
    /// Pixels (row-major indices) whose level places them at this node.
    pub pixels: Vec<usize>,
}

/// A max-tree or min-tree. Nodes are stored parent-before-child and node
/// 0 is the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentTree {
    kind: TreeKind,
    connectivity: Connectivity,
    height: usize,
    width: usize,
    nodes: Vec<Node>,
    pixel_to_node: Vec<usize>,
}

pub fn build_max_tree(img: &GrayImage, connectivity: Connectivity) -> ComponentTree {
    ComponentTree::build(img, TreeKind::Max, connectivity)
}

pub fn build_min_tree(img: &GrayImage, connectivity: Connectivity) -> ComponentTree {
    ComponentTree::build(img, TreeKind::Min, connectivity)
}

fn find_root(zpar: &mut [usize], mut p: usize) -> usize {
    let mut root = p;
    while zpar[root] != root {
        root = zpar[root];
    }
    while zpar[p] != root {
        let next = zpar[p];
        zpar[p] = root;
        p = next;
    }
    root
}

impl ComponentTree {
    /// Union-find construction. Pixels are visited from the leaf-most level
    /// towards the root level, ties in row-major order.
    pub fn build(img: &GrayImage, kind: TreeKind, connectivity: Connectivity) -> Self {
        let (h, w) = (img.height(), img.width());
        let n = h * w;
        let key: Vec<u8> = img.levels().iter().map(|&l| kind.key(l)).collect();

        // counting sort by key, stable in pixel index
        let mut counts = [0usize; 257];
        for &k in &key {
            counts[k as usize + 1] += 1;
        }
        for i in 1..257 {
            counts[i] += counts[i - 1];
        }
        let mut sorted = vec![0usize; n];
        for (p, &k) in key.iter().enumerate() {
            sorted[counts[k as usize]] = p;
            counts[k as usize] += 1;
        }

        const UNSEEN: usize = usize::MAX;
        let mut parent = vec![UNSEEN; n];
        let mut zpar = vec![UNSEEN; n];
        for &p in sorted.iter().rev() {
            parent[p] = p;
            zpar[p] = p;
            for q in connectivity.neighbors(p, h, w) {
                if zpar[q] == UNSEEN {
                    continue;
                }
                let r = find_root(&mut zpar, q);
                if r != p {
                    parent[r] = p;
                    zpar[r] = p;
                }
            }
        }

        // point every pixel at the canonical pixel of its level component
        for &p in &sorted {
            let q = parent[p];
            if key[parent[q]] == key[q] {
                parent[p] = parent[q];
            }
        }

        let root_pixel = sorted[0];
        let mut node_of = vec![UNSEEN; n];
        let mut nodes: Vec<Node> = Vec::new();
        for &p in &sorted {
            let canonical = p == root_pixel || key[parent[p]] != key[p];
            if canonical {
                let parent_node = if p == root_pixel {
                    0
                } else {
                    node_of[parent[p]]
                };
                node_of[p] = nodes.len();
                nodes.push(Node {
                    parent: parent_node,
                    level: img.levels()[p],
                    pixels: Vec::new(),
                });
            }
        }
        let mut pixel_to_node = vec![0usize; n];
        for p in 0..n {
            let canon = if node_of[p] != UNSEEN { p } else { parent[p] };
            let node = node_of[canon];
            pixel_to_node[p] = node;
            nodes[node].pixels.push(p);
        }

        Self {
            kind,
            connectivity,
            height: h,
            width: w,
            nodes,
            pixel_to_node,
        }
    }

    pub fn kind(&self) -> TreeKind {
        self.kind
    }

    pub fn connectivity(&self) -> Connectivity {
        self.connectivity
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn root(&self) -> usize {
        0
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn parent(&self, node: usize) -> usize {
        self.nodes[node].parent
    }

    pub fn level(&self, node: usize) -> u8 {
        self.nodes[node].level
    }

    pub fn pixel_to_node(&self) -> &[usize] {
        &self.pixel_to_node
    }

    /// Nodes without children.
    pub fn leaves(&self) -> Vec<usize> {
        let mut has_child = vec![false; self.nodes.len()];
        for node in self.nodes.iter().skip(1) {
            has_child[node.parent] = true;
        }
        (0..self.nodes.len()).filter(|&i| !has_child[i]).collect()
    }

    /// All pixels of the subtree rooted at `node`, sorted.
    pub fn subtree_pixels(&self, node: usize) -> Vec<usize> {
        let mut inside = vec![false; self.nodes.len()];
        inside[node] = true;
        // parents precede children, so one forward pass marks the subtree
        for i in node + 1..self.nodes.len() {
            inside[i] = inside[self.nodes[i].parent];
        }
        let mut pixels: Vec<usize> = (0..self.pixel_to_node.len())
            .filter(|&p| inside[self.pixel_to_node[p]])
            .collect();
        pixels.sort_unstable();
        pixels
    }

    /// Same tree with every level mapped through `ℓ → 255 − ℓ` and the
    /// kind swapped.
    pub fn relabeled(&self) -> Self {
        let mut out = self.clone();
        out.kind = match self.kind {
            TreeKind::Max => TreeKind::Min,
            TreeKind::Min => TreeKind::Max,
        };
        for node in &mut out.nodes {
            node.level = 255 - node.level;
        }
        out
    }
}
