//! Thin wrappers over nalgebra's Hermitian eigensolver.

use nalgebra::SymmetricEigen;

use crate::repkit::operator::{CMatrix, CVector};

/// Eigenvalues of a Hermitian matrix, ascending, computed from `(A + A†)/2`.
/// A diagonal matrix returns its diagonal unchanged, bit for bit.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let mut v: Vec<f64> = if is_diagonal(m) {
        m.diagonal().iter().map(|z| z.re).collect()
    } else {
        symmetrize(m).symmetric_eigenvalues().iter().copied().collect()
    };
    v.sort_by(|a, b| a.total_cmp(b));
    v
}

/// Eigenpairs sorted by ascending eigenvalue.
pub fn hermitian_eigen(m: &CMatrix) -> Vec<(f64, CVector)> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let eig = SymmetricEigen::new(symmetrize(m));
    let mut pairs: Vec<(f64, CVector)> = eig
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(k, &lam)| (lam, eig.eigenvectors.column(k).into_owned()))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs
}

fn is_diagonal(m: &CMatrix) -> bool {
    m.column_iter()
        .enumerate()
        .all(|(c, col)| col.iter().enumerate().all(|(r, z)| r == c || (z.re == 0.0 && z.im == 0.0)))
}

fn symmetrize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}
