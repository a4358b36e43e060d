//! Small dense linear-algebra helpers shared by the comparator and game code.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

pub type Vector = DVector<f64>;
pub type Matrix = DMatrix<f64>;

/// Absolute tolerance used for symmetry checks.
pub const SYMMETRY_TOL: f64 = 1e-9;

pub fn is_symmetric(a: &Matrix) -> bool {
    if !a.is_square() {
        return false;
    }
    let n = a.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            if (a[(i, j)] - a[(j, i)]).abs() > SYMMETRY_TOL {
                return false;
            }
        }
    }
    true
}

pub fn require_symmetric(a: &Matrix) -> Result<()> {
    if is_symmetric(a) {
        Ok(())
    } else {
        Err(Error::InvalidParameter("matrix is not symmetric".into()))
    }
}

/// Eigenvalues of a symmetric matrix in ascending order.
pub fn sym_eigenvalues(a: &Matrix) -> Vec<f64> {
    let sym = (a + a.transpose()) * 0.5;
    let mut ev: Vec<f64> = SymmetricEigen::new(sym)
        .eigenvalues
        .iter()
        .copied()
        .collect();
    ev.sort_by(|x, y| x.total_cmp(y));
    ev
}

/// Largest singular value.
pub fn spectral_norm(a: &Matrix) -> f64 {
    if a.nrows() == 0 || a.ncols() == 0 {
        return 0.0;
    }
    a.clone()
        .singular_values()
        .iter()
        .fold(0.0_f64, |m, s| m.max(*s))
}

pub fn inverse(a: &Matrix) -> Result<Matrix> {
    a.clone()
        .try_inverse()
        .ok_or_else(|| Error::InvalidParameter("matrix is singular".into()))
}

pub fn check_dim(v: &Vector, expected: usize) -> Result<()> {
    if v.len() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            got: v.len(),
        });
    }
    Ok(())
}

pub fn check_finite(v: &Vector) -> Result<()> {
    if v.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}
