//! Brute-force reference implementations used by the integration tests.
//! Nothing here calls into the algorithm it is checking.

#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::{BTreeSet, VecDeque};

use jmpt::datacube::HyperCube;
use jmpt::morphology::{ComponentTree, Connectivity, TreeKind};
use jmpt::pca::GrayImage;
use jmpt::tensor::Tensor3;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random image whose levels are drawn from a small palette.
pub fn random_gray(seed: u64, h: usize, w: usize, max_levels: usize) -> GrayImage {
    let mut r = rng(seed);
    let count = r.random_range(1..=max_levels);
    let palette: Vec<u8> = (0..count).map(|_| r.random()).collect();
    GrayImage::from_fn(h, w, |_, _| palette[r.random_range(0..count)]).unwrap()
}

pub fn random_cube(seed: u64, h: usize, w: usize, d: usize) -> HyperCube {
    let mut r = rng(seed);
    HyperCube::from_fn(h, w, d, |_, _, _| r.random_range(-1.0..1.0)).unwrap()
}

pub fn random_tensor(seed: u64, dims: [usize; 3]) -> Tensor3 {
    let mut r = rng(seed);
    Tensor3::from_fn(dims, |_, _, _| r.random_range(-1.0..1.0)).unwrap()
}

fn neighbor_offsets(conn: Connectivity) -> Vec<(isize, isize)> {
    let mut out = Vec::new();
    for dr in -1isize..=1 {
        for dc in -1isize..=1 {
            if (dr, dc) == (0, 0) {
                continue;
            }
            if conn == Connectivity::Four && dr != 0 && dc != 0 {
                continue;
            }
            out.push((dr, dc));
        }
    }
    out
}

/// Connected components of `{p : f(p) ≥ t}` (max) or `{p : f(p) ≤ t}`
/// (min) by breadth-first flooding.
pub fn level_set_components(
    img: &GrayImage,
    t: u8,
    kind: TreeKind,
    conn: Connectivity,
) -> BTreeSet<Vec<usize>> {
    let (h, w) = (img.height(), img.width());
    let inside = |p: usize| match kind {
        TreeKind::Max => img.levels()[p] >= t,
        TreeKind::Min => img.levels()[p] <= t,
    };
    let mut seen = vec![false; h * w];
    let mut out = BTreeSet::new();
    for start in 0..h * w {
        if seen[start] || !inside(start) {
            continue;
        }
        let mut comp = Vec::new();
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(p) = queue.pop_front() {
            comp.push(p);
            let (r, c) = ((p / w) as isize, (p % w) as isize);
            for (dr, dc) in neighbor_offsets(conn) {
                let (nr, nc) = (r + dr, c + dc);
                if nr < 0 || nc < 0 || nr >= h as isize || nc >= w as isize {
                    continue;
                }
                let q = nr as usize * w + nc as usize;
                if !seen[q] && inside(q) {
                    seen[q] = true;
                    queue.push_back(q);
                }
            }
        }
        comp.sort_unstable();
        out.insert(comp);
    }
    out
}

/// Pixels whose owning node has `node` as an ancestor (or is `node`),
/// found by walking parent links.
pub fn subtree_by_ancestry(tree: &ComponentTree, node: usize) -> Vec<usize> {
    let mut out = Vec::new();
    for (p, &owner) in tree.pixel_to_node().iter().enumerate() {
        let mut cur = owner;
        loop {
            if cur == node {
                out.push(p);
                break;
            }
            let parent = tree.parent(cur);
            if parent == cur {
                break;
            }
            cur = parent;
        }
    }
    out
}

/// Level-set components read off the tree: subtrees of nodes that pass
/// the threshold while their parent does not.
pub fn tree_components(tree: &ComponentTree, t: u8) -> BTreeSet<Vec<usize>> {
    let passes = |level: u8| match tree.kind() {
        TreeKind::Max => level >= t,
        TreeKind::Min => level <= t,
    };
    (0..tree.len())
        .filter(|&n| {
            passes(tree.level(n)) && (n == tree.parent(n) || !passes(tree.level(tree.parent(n))))
        })
        .map(|n| subtree_by_ancestry(tree, n))
        .collect()
}

/// Direct evaluation of the five attributes on an explicit pixel set.
pub struct OracleAttributes {
    pub area: f64,
    pub height: f64,
    pub volume: f64,
    pub diag: f64,
    pub std: f64,
}

pub fn attributes_of(img: &GrayImage, pixels: &[usize], kind: TreeKind) -> OracleAttributes {
    let w = img.width();
    let f: Vec<f64> = pixels.iter().map(|&p| img.levels()[p] as f64).collect();
    let n = f.len() as f64;
    let max = f.iter().cloned().fold(f64::MIN, f64::max);
    let min = f.iter().cloned().fold(f64::MAX, f64::min);
    let g: Vec<f64> = match kind {
        TreeKind::Max => f.clone(),
        TreeKind::Min => f.iter().map(|v| -v).collect(),
    };
    let gmax = g.iter().cloned().fold(f64::MIN, f64::max);
    let volume = g.iter().map(|v| gmax - v).sum();
    let rows: Vec<usize> = pixels.iter().map(|p| p / w).collect();
    let cols: Vec<usize> = pixels.iter().map(|p| p % w).collect();
    let dr = (rows.iter().max().unwrap() - rows.iter().min().unwrap()) as f64;
    let dc = (cols.iter().max().unwrap() - cols.iter().min().unwrap()) as f64;
    let mean = f.iter().sum::<f64>() / n;
    let var = f.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    OracleAttributes {
        area: n,
        height: max - min,
        volume,
        diag: (dr * dr + dc * dc).sqrt(),
        std: var.sqrt(),
    }
}

/// Literal loop over the eight neighbours with edge replication.
pub fn naive_neighborhood(t1: &HyperCube, t2: &HyperCube) -> Vec<f64> {
    let (h, w, d) = t1.dims();
    let mut out = Vec::with_capacity(h * w);
    for r in 0..h as isize {
        for c in 0..w as isize {
            let mut sum = vec![0.0; d];
            for dr in -1isize..=1 {
                for dc in -1isize..=1 {
                    if dr == 0 && dc == 0 {
                        continue;
                    }
                    let nr = (r + dr).max(0).min(h as isize - 1) as usize;
                    let nc = (c + dc).max(0).min(w as isize - 1) as usize;
                    for b in 0..d {
                        let y = t2.get(nr, nc, b);
                        let x = t1.get(nr, nc, b);
                        sum[b] += y.powi(2) - x.powi(2);
                    }
                }
            }
            let norm = sum.iter().map(|v| v * v).sum::<f64>().sqrt();
            let (r, c) = (r as usize, c as usize);
            let mut dot = 0.0;
            let mut nx = 0.0;
            let mut ny = 0.0;
            for b in 0..d {
                let (x, y) = (t1.get(r, c, b), t2.get(r, c, b));
                dot += x * y;
                nx += x * x;
                ny += y * y;
            }
            let weight = if nx == 0.0 || ny == 0.0 {
                0.0
            } else {
                (dot / (nx.sqrt() * ny.sqrt())).powi(2).atan()
            };
            out.push(norm * weight);
        }
    }
    out
}

/// `P(changed > unchanged) + ½ P(tie)` over all pairs.
pub fn pair_counting_auc(changed: &[f64], unchanged: &[f64]) -> f64 {
    let mut wins = 0.0;
    for &p in changed {
        for &n in unchanged {
            if p > n {
                wins += 1.0;
            } else if p == n {
                wins += 0.5;
            }
        }
    }
    wins / (changed.len() * unchanged.len()) as f64
}

/// `(fpr, tpr)` at every distinct score threshold, highest first, by
/// recounting the confusion matrix for each threshold.
pub fn exhaustive_roc(changed: &[f64], unchanged: &[f64]) -> Vec<(f64, f64)> {
    let mut ts: Vec<f64> = changed.iter().chain(unchanged).cloned().collect();
    ts.sort_by(|a, b| b.total_cmp(a));
    ts.dedup();
    let mut pts = vec![(0.0, 0.0)];
    for t in ts {
        let tp = changed.iter().filter(|&&s| s >= t).count() as f64;
        let fp = unchanged.iter().filter(|&&s| s >= t).count() as f64;
        pts.push((fp / unchanged.len() as f64, tp / changed.len() as f64));
    }
    pts
}

// ---- Tucker oracle on explicit loops and nalgebra's SVD ----

fn get(x: &Tensor3, idx: [usize; 3]) -> f64 {
    x.get(idx[0], idx[1], idx[2])
}

/// Mode-`mode` unfolding by explicit enumeration.
pub fn oracle_unfold(x: &Tensor3, mode: usize) -> DMatrix<f64> {
    let dims = x.dims();
    let others: Vec<usize> = (0..3).filter(|&m| m != mode).collect();
    let ncols = dims[others[0]] * dims[others[1]];
    let mut m = DMatrix::zeros(dims[mode], ncols);
    for a in 0..dims[mode] {
        for b in 0..dims[others[0]] {
            for c in 0..dims[others[1]] {
                let mut idx = [0; 3];
                idx[mode] = a;
                idx[others[0]] = b;
                idx[others[1]] = c;
                m[(a, b + dims[others[0]] * c)] = get(x, idx);
            }
        }
    }
    m
}

pub fn oracle_mode_product(x: &Tensor3, mode: usize, m: &DMatrix<f64>) -> Tensor3 {
    let mut dims = x.dims();
    let n = dims[mode];
    dims[mode] = m.nrows();
    Tensor3::from_fn(dims, |i, j, k| {
        let idx = [i, j, k];
        (0..n)
            .map(|s| {
                let mut src = idx;
                src[mode] = s;
                m[(idx[mode], s)] * get(x, src)
            })
            .sum()
    })
    .unwrap()
}

/// Leading `r` left singular vectors via a full SVD.
pub fn svd_leading(a: &DMatrix<f64>, r: usize) -> DMatrix<f64> {
    let svd = a.clone().svd(true, false);
    let u = svd.u.unwrap();
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&x, &y| svd.singular_values[y].total_cmp(&svd.singular_values[x]));
    DMatrix::from_columns(&order[..r].iter().map(|&i| u.column(i)).collect::<Vec<_>>())
}

fn oracle_reconstruction(x: &Tensor3, f: &[DMatrix<f64>; 3]) -> Tensor3 {
    let mut core = x.clone();
    for mode in 0..3 {
        core = oracle_mode_product(&core, mode, &f[mode].transpose());
    }
    for mode in 0..3 {
        core = oracle_mode_product(&core, mode, &f[mode]);
    }
    core
}

/// Error of truncated HOSVD and of HOSVD-initialized HOOI run to
/// convergence, both built from SVDs of explicit unfoldings.
pub fn oracle_tucker_errors(x: &Tensor3, r: usize) -> (f64, f64) {
    let mut f: [DMatrix<f64>; 3] =
        std::array::from_fn(|mode| svd_leading(&oracle_unfold(x, mode), r));
    let hosvd_err = x.distance(&oracle_reconstruction(x, &f));
    let mut err = hosvd_err;
    for _ in 0..2000 {
        for mode in 0..3 {
            let mut y = x.clone();
            for other in (0..3).filter(|&m| m != mode) {
                y = oracle_mode_product(&y, other, &f[other].transpose());
            }
            f[mode] = svd_leading(&oracle_unfold(&y, mode), r);
        }
        let next = x.distance(&oracle_reconstruction(x, &f));
        let done = (err - next).abs() < 1e-15 * x.frobenius_norm();
        err = next;
        if done {
            break;
        }
    }
    (hosvd_err, err)
}
