//! Small dense linear-algebra helpers on top of `nalgebra`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

/// Flips `v` so that its largest-magnitude entry is positive. Ties go to the
/// lowest index.
pub(crate) fn fix_sign(mut v: nalgebra::DVectorViewMut<'_, f64>) {
    let mut best = 0usize;
    for i in 1..v.len() {
        if v[i].abs() > v[best].abs() {
            best = i;
        }
    }
    if !v.is_empty() && v[best] < 0.0 {
        v.neg_mut();
    }
}

/// Eigen-decomposition of a symmetric matrix with eigenvalues in
/// descending order and sign-normalized eigenvector columns.
pub(crate) fn sym_eigen_desc(m: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = m.nrows();
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
        fix_sign(vectors.column_mut(dst));
    }
    (values, vectors)
}

/// The `k` leading left singular vectors of `a` (`m × n`), as an `m × k`
/// matrix with orthonormal columns.
///
/// Uses the eigenvectors of the smaller Gram matrix: `a aᵀ` when `m ≤ n`,
/// otherwise `aᵀ a` mapped back through `a`.
pub(crate) fn leading_left_singular(a: &DMatrix<f64>, k: usize) -> DMatrix<f64> {
    let (m, n) = a.shape();
    assert!(k <= m, "requested {k} singular vectors of a {m}-row matrix");
    if m <= n {
        let (_, vecs) = sym_eigen_desc(a * a.transpose());
        return vecs.columns(0, k).into_owned();
    }
    let (vals, vecs) = sym_eigen_desc(a.transpose() * a);
    let scale = vals.first().copied().unwrap_or(0.0).max(0.0);
    let mut cols: Vec<DVector<f64>> = Vec::with_capacity(k);
    for (j, &lambda) in vals.iter().enumerate().take(k.min(n)) {
        // directions with negligible singular value carry no information
        if lambda <= scale * 1e-24 || lambda <= 0.0 {
            break;
        }
        let mut u = a * vecs.column(j);
        u /= lambda.sqrt();
        cols.push(u);
    }
    let mut basis = orthonormalize(cols, m);
    complete_columns(&mut basis, m, k);
    let mut out = DMatrix::zeros(m, k);
    for (j, c) in basis.iter().enumerate() {
        out.set_column(j, c);
        fix_sign(out.column_mut(j));
    }
    out
}

/// Two-pass modified Gram-Schmidt; drops vectors that collapse.
fn orthonormalize(cols: Vec<DVector<f64>>, m: usize) -> Vec<DVector<f64>> {
    let mut basis: Vec<DVector<f64>> = Vec::with_capacity(cols.len());
    for mut v in cols {
        let before = v.norm();
        for _ in 0..2 {
            for q in &basis {
                let proj = q.dot(&v);
                v.axpy(-proj, q, 1.0);
            }
        }
        let norm = v.norm();
        if norm > 1e-10 * before.max(f64::MIN_POSITIVE) && norm > 0.0 {
            basis.push(v / norm);
        }
        if basis.len() == m {
            break;
        }
    }
    basis
}

/// Extends an orthonormal set to `k` columns with the canonical basis
/// vectors that have the largest residual.
fn complete_columns(basis: &mut Vec<DVector<f64>>, m: usize, k: usize) {
    while basis.len() < k {
        let mut best: Option<(f64, DVector<f64>)> = None;
        for i in 0..m {
            let mut e = DVector::zeros(m);
            e[i] = 1.0;
            for _ in 0..2 {
                for q in basis.iter() {
                    let proj = q.dot(&e);
                    e.axpy(-proj, q, 1.0);
                }
            }
            let norm = e.norm();
            if best.as_ref().is_none_or(|(n, _)| norm > *n) {
                best = Some((norm, e));
            }
        }
        let (norm, e) = best.expect("m > 0");
        basis.push(e / norm);
    }
}

/// Extends the orthonormal columns of `q` (`m × r`) to a full `m × m`
/// orthonormal matrix.
pub(crate) fn complete_basis(q: &DMatrix<f64>) -> DMatrix<f64> {
    let m = q.nrows();
    let mut basis: Vec<DVector<f64>> = q.column_iter().map(|c| c.into_owned()).collect();
    complete_columns(&mut basis, m, m);
    DMatrix::from_columns(&basis)
}
