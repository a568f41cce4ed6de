//! Small helpers for Hermitian matrices with complex entries.

use nalgebra::DMatrix;

use crate::{Cx, Error, Result};

/// Cholesky factor `L` (lower triangular) of a Hermitian positive-definite
/// matrix, `G = L L^*`.
pub fn cholesky(g: &DMatrix<Cx>) -> Result<DMatrix<Cx>> {
    nalgebra::Cholesky::new(g.clone())
        .map(|c| c.l())
        .ok_or_else(|| {
            Error::CholeskyFailed(format!(
                "matrix of dimension {} is not positive definite",
                g.nrows()
            ))
        })
}

/// Inverse of a lower-triangular matrix by forward substitution.
pub fn invert_lower_triangular(l: &DMatrix<Cx>) -> DMatrix<Cx> {
    let n = l.nrows();
    let mut inv = DMatrix::<Cx>::zeros(n, n);
    for col in 0..n {
        let mut x = vec![Cx::new(0.0, 0.0); n];
        x[col] = Cx::new(1.0, 0.0);
        for row in col..n {
            let mut s = x[row];
            for j in col..row {
                s -= l[(row, j)] * x[j];
            }
            x[row] = s / l[(row, row)];
        }
        for row in 0..n {
            inv[(row, col)] = x[row];
        }
    }
    inv
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(h: &DMatrix<Cx>) -> Vec<f64> {
    let sym = nalgebra::SymmetricEigen::new(h.clone());
    let mut ev: Vec<f64> = sym.eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ev
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(h: &DMatrix<Cx>) -> f64 {
    hermitian_eigenvalues(h)[0]
}

/// Solve `H x = b` for Hermitian positive-definite `H`.
pub fn solve_hpd(h: &DMatrix<Cx>, b: &[Cx]) -> Result<Vec<Cx>> {
    let chol = nalgebra::Cholesky::new(h.clone()).ok_or_else(|| {
        Error::CholeskyFailed("Hermitian matrix is not positive definite".into())
    })?;
    let rhs = nalgebra::DVector::from_column_slice(b);
    Ok(chol.solve(&rhs).iter().copied().collect())
}

/// Max absolute entry of `A`.
pub fn max_abs(a: &DMatrix<Cx>) -> f64 {
    a.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

/// Hermitian part `(A + A^*)/2`.
pub fn hermitian_part(a: &DMatrix<Cx>) -> DMatrix<Cx> {
    (a + a.adjoint()) * Cx::new(0.5, 0.0)
}

/// Deviation from conjugate symmetry, `max |A - A^*|`.
pub fn hermitian_residual(a: &DMatrix<Cx>) -> f64 {
    max_abs(&(a - a.adjoint()))
}
