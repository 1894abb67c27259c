//! Dense symmetric eigensolves, spectral functions, and operator norms.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

const EIGEN_MAX_ITER: usize = 10_000;

/// Eigen-decomposition with eigenvalues in ascending order.
#[derive(Clone, Debug)]
pub struct SortedEigen {
    pub values: DVector<f64>,
    pub vectors: DMatrix<f64>,
}

pub fn symmetric_defect(m: &DMatrix<f64>) -> f64 {
    (m - m.transpose()).amax()
}

/// Relative symmetry tolerance accepted by the spectral routines.
pub fn check_symmetric(m: &DMatrix<f64>) -> Result<()> {
    let defect = symmetric_defect(m);
    if defect > 1e-12 * m.amax().max(1.0) {
        return Err(Error::NotSymmetric(defect));
    }
    Ok(())
}

pub fn eigh(m: &DMatrix<f64>) -> Result<SortedEigen> {
    check_symmetric(m)?;
    let n = m.nrows();
    let sym = (m + m.transpose()) * 0.5;
    let eig = SymmetricEigen::try_new(sym, f64::EPSILON, EIGEN_MAX_ITER).ok_or(Error::Eigensolve(n))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = DVector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
    let vectors = eig.eigenvectors.select_columns(&order);
    Ok(SortedEigen { values, vectors })
}

/// Ascending eigenvalues without eigenvectors.
pub fn eigvalsh(m: &DMatrix<f64>) -> Result<Vec<f64>> {
    check_symmetric(m)?;
    let sym = (m + m.transpose()) * 0.5;
    let mut values: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Eigensolve(m.nrows()));
    }
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Index sets of the connected components of the nonzero pattern of `m`.
pub fn sparsity_components(m: &DMatrix<f64>) -> Vec<Vec<usize>> {
    let n = m.nrows();
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for j in 0..n {
        for i in 0..j {
            if m[(i, j)] != 0.0 || m[(j, i)] != 0.0 {
                let (a, b) = (root(&mut parent, i), root(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let r = root(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    groups.into_values().collect()
}

/// [`eigh`] applied per sparsity component. Identical up to rounding and the
/// choice of basis inside degenerate eigenspaces.
pub fn eigh_blocked(m: &DMatrix<f64>) -> Result<SortedEigen> {
    check_symmetric(m)?;
    let n = m.nrows();
    let mut pairs: Vec<(f64, usize, DVector<f64>)> = Vec::with_capacity(n);
    for comp in sparsity_components(m) {
        let eig = eigh(&principal_submatrix(m, &comp))?;
        for (j, &value) in eig.values.iter().enumerate() {
            pairs.push((value, comp[0], eig.vectors.column(j).into_owned()));
            let v = &mut pairs.last_mut().expect("just pushed").2;
            let mut full = DVector::zeros(n);
            for (k, &i) in comp.iter().enumerate() {
                full[i] = v[k];
            }
            *v = full;
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let values = DVector::from_iterator(n, pairs.iter().map(|p| p.0));
    let vectors = DMatrix::from_columns(&pairs.iter().map(|p| p.2.clone()).collect::<Vec<_>>());
    Ok(SortedEigen { values, vectors })
}

/// [`eigvalsh`] applied per sparsity component.
pub fn eigvalsh_blocked(m: &DMatrix<f64>) -> Result<Vec<f64>> {
    check_symmetric(m)?;
    let mut values = Vec::with_capacity(m.nrows());
    for comp in sparsity_components(m) {
        values.extend(eigvalsh(&principal_submatrix(m, &comp))?);
    }
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// `Q f(Λ) Qᵀ` for a symmetric `m = Q Λ Qᵀ`.
pub fn spectral_apply(m: &DMatrix<f64>, f: impl Fn(f64) -> f64) -> Result<DMatrix<f64>> {
    let eig = eigh(m)?;
    Ok(apply_to_eigen(&eig, f))
}

pub fn apply_to_eigen(eig: &SortedEigen, f: impl Fn(f64) -> f64) -> DMatrix<f64> {
    let mut scaled = eig.vectors.clone();
    for (j, &lambda) in eig.values.iter().enumerate() {
        let fl = f(lambda);
        scaled.column_mut(j).scale_mut(fl);
    }
    &scaled * eig.vectors.transpose()
}

/// Largest singular value.
pub fn operator_norm(m: &DMatrix<f64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.singular_values().max()
}

/// Largest singular value by power iteration on `mᵀm`, from a fixed start
/// vector. Independent of the SVD route in [`operator_norm`].
pub fn power_iteration_norm(m: &DMatrix<f64>, max_iter: usize, tol: f64) -> f64 {
    let n = m.ncols();
    if n == 0 {
        return 0.0;
    }
    let mut x = DVector::from_fn(n, |i, _| 1.0 + ((i * 7919) % 113) as f64 / 113.0);
    x.normalize_mut();
    let mut estimate = 0.0;
    for _ in 0..max_iter {
        let y = m * &x;
        let z = m.transpose() * &y;
        let norm_z = z.norm();
        if norm_z == 0.0 {
            return 0.0;
        }
        let next = y.norm();
        x = z / norm_z;
        if (next - estimate).abs() <= tol * next.max(f64::MIN_POSITIVE) {
            return next;
        }
        estimate = next;
    }
    estimate
}

pub fn principal_submatrix(m: &DMatrix<f64>, indices: &[usize]) -> DMatrix<f64> {
    m.select_rows(indices).select_columns(indices)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigh_sorts_and_reconstructs() {
        let m = DMatrix::from_row_slice(3, 3, &[2.0, 1.0, 0.0, 1.0, 2.0, 1.0, 0.0, 1.0, 2.0]);
        let eig = eigh(&m).unwrap();
        assert!(eig.values[0] < eig.values[1] && eig.values[1] < eig.values[2]);
        let back = apply_to_eigen(&eig, |x| x);
        let only = eigvalsh(&m).unwrap();
        assert!(only.iter().zip(eig.values.iter()).all(|(a, b)| (a - b).abs() < 1e-14));
        assert!((back - &m).amax() < 1e-14);
    }

    #[test]
    fn eigh_rejects_nonsymmetric() {
        let m = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(matches!(eigh(&m), Err(Error::NotSymmetric(_))));
    }

    #[test]
    fn blocked_matches_dense() {
        // Two blocks interleaved: {0, 2, 4} and {1, 3}.
        let mut m = DMatrix::zeros(5, 5);
        for (i, j, v) in [
            (0, 2, 1.0),
            (2, 4, -2.0),
            (1, 3, 0.5),
            (0, 0, 3.0),
            (3, 3, -1.0),
            (4, 4, 1.0),
        ] {
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
        assert_eq!(sparsity_components(&m), vec![vec![0, 2, 4], vec![1, 3]]);
        let dense = eigh(&m).unwrap();
        let blocked = eigh_blocked(&m).unwrap();
        assert!((&dense.values - &blocked.values).amax() < 1e-13);
        let back = apply_to_eigen(&blocked, |x| x);
        assert!((back - &m).amax() < 1e-13);
        let only = eigvalsh_blocked(&m).unwrap();
        assert!(only.iter().zip(dense.values.iter()).all(|(a, b)| (a - b).abs() < 1e-13));
    }

    #[test]
    fn norms_agree() {
        let m = DMatrix::from_row_slice(2, 3, &[1.0, 2.0, 0.5, -1.0, 0.0, 3.0]);
        let a = operator_norm(&m);
        let b = power_iteration_norm(&m, 10_000, 1e-14);
        assert!((a - b).abs() < 1e-10, "{a} vs {b}");
    }
}
