//! Dense factorizations (eigen, Schur, SVD) delegated to LAPACK.
//!
//! Only the contracts matter to callers: reconstruction residual and
//! unitarity of the unitary factors, both checked in tests. Matrices are
//! converted to column-major on the way in and back on the way out.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

// Links the system OpenBLAS that provides the LAPACK symbols.
extern crate openblas_src;

/// Which factorization a [`FactorizationResult`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorizationKind {
    Eigen,
    Schur,
    Svd,
}

/// A factorization `input = left_factor * core * right_factor` together with
/// its measured backward error `‖left*core*right − input‖_F`.
#[derive(Debug, Clone)]
pub struct FactorizationResult {
    pub kind: FactorizationKind,
    pub left_factor: ComplexMatrix,
    pub core: ComplexMatrix,
    pub right_factor: ComplexMatrix,
    pub backward_error: f64,
}

fn to_col_major(m: &ComplexMatrix) -> Vec<Complex64> {
    let (rows, cols) = (m.n_rows(), m.n_cols());
    let mut out = vec![Complex64::new(0.0, 0.0); rows * cols];
    for j in 0..cols {
        for i in 0..rows {
            out[j * rows + i] = m.get(i, j);
        }
    }
    out
}

fn from_col_major(rows: usize, cols: usize, data: &[Complex64]) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |i, j| data[j * rows + i])
}

fn require_square(m: &ComplexMatrix, what: &str) -> Result<usize> {
    if !m.is_square() {
        return Err(Error::dims(format!("{what} requires a square matrix")));
    }
    Ok(m.n_rows())
}

fn backward_error(
    left: &ComplexMatrix,
    core: &ComplexMatrix,
    right: &ComplexMatrix,
    input: &ComplexMatrix,
) -> f64 {
    (&(&(left * core) * right) - input).frobenius_norm()
}

/// Complex Schur decomposition `M = U T U*` with unitary `U` and upper
/// triangular `T`.
pub fn schur(m: &ComplexMatrix) -> Result<FactorizationResult> {
    let (u, t) = schur_decompose(m)?;
    let right = u.adjoint();
    let err = backward_error(&u, &t, &right, m);
    Ok(FactorizationResult {
        kind: FactorizationKind::Schur,
        left_factor: u,
        core: t,
        right_factor: right,
        backward_error: err,
    })
}

/// Raw Schur pair `(U, T)` via LAPACK `zgees`.
pub fn schur_decompose(m: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let n = require_square(m, "Schur decomposition")?;
    let ni = n as i32;
    let mut a = to_col_major(m);
    let mut w = vec![Complex64::new(0.0, 0.0); n];
    let mut vs = vec![Complex64::new(0.0, 0.0); n * n];
    let mut rwork = vec![0.0f64; n];
    let mut bwork = vec![0i32; n];
    let mut sdim = 0i32;
    let mut info = 0i32;

    let mut query = [Complex64::new(0.0, 0.0)];
    unsafe {
        lapack::zgees(
            b'V', b'N', None, ni, &mut a, ni, &mut sdim, &mut w, &mut vs, ni, &mut query, -1,
            &mut rwork, &mut bwork, &mut info,
        );
    }
    let lwork = query[0].re as i32;
    let mut work = vec![Complex64::new(0.0, 0.0); lwork.max(1) as usize];
    unsafe {
        lapack::zgees(
            b'V', b'N', None, ni, &mut a, ni, &mut sdim, &mut w, &mut vs, ni, &mut work, lwork,
            &mut rwork, &mut bwork, &mut info,
        );
    }
    if info != 0 {
        return Err(Error::Factorization {
            routine: "zgees",
            info,
        });
    }
    Ok((from_col_major(n, n, &vs), from_col_major(n, n, &a)))
}

/// Singular value decomposition `M = U Σ V*`; `core` is the rectangular
/// diagonal Σ.
pub fn svd(m: &ComplexMatrix) -> Result<FactorizationResult> {
    let (u, s, vt) = svd_decompose(m)?;
    let core = ComplexMatrix::from_fn(m.n_rows(), m.n_cols(), |i, j| {
        if i == j && i < s.len() {
            Complex64::new(s[i], 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let err = backward_error(&u, &core, &vt, m);
    Ok(FactorizationResult {
        kind: FactorizationKind::Svd,
        left_factor: u,
        core,
        right_factor: vt,
        backward_error: err,
    })
}

/// Raw SVD triple `(U, sigma, V*)` via LAPACK `zgesvd`.
pub fn svd_decompose(m: &ComplexMatrix) -> Result<(ComplexMatrix, Vec<f64>, ComplexMatrix)> {
    let (rows, cols) = (m.n_rows(), m.n_cols());
    let (ri, ci) = (rows as i32, cols as i32);
    let k = rows.min(cols);
    let mut a = to_col_major(m);
    let mut s = vec![0.0f64; k];
    let mut u = vec![Complex64::new(0.0, 0.0); rows * rows];
    let mut vt = vec![Complex64::new(0.0, 0.0); cols * cols];
    let mut rwork = vec![0.0f64; 5 * k];
    let mut info = 0i32;

    let mut query = [Complex64::new(0.0, 0.0)];
    unsafe {
        lapack::zgesvd(
            b'A', b'A', ri, ci, &mut a, ri, &mut s, &mut u, ri, &mut vt, ci, &mut query, -1,
            &mut rwork, &mut info,
        );
    }
    let lwork = query[0].re as i32;
    let mut work = vec![Complex64::new(0.0, 0.0); lwork.max(1) as usize];
    unsafe {
        lapack::zgesvd(
            b'A', b'A', ri, ci, &mut a, ri, &mut s, &mut u, ri, &mut vt, ci, &mut work, lwork,
            &mut rwork, &mut info,
        );
    }
    if info != 0 {
        return Err(Error::Factorization {
            routine: "zgesvd",
            info,
        });
    }
    Ok((
        from_col_major(rows, rows, &u),
        s,
        from_col_major(cols, cols, &vt),
    ))
}

/// Singular values in decreasing order (no vectors computed).
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    let (rows, cols) = (m.n_rows(), m.n_cols());
    let (ri, ci) = (rows as i32, cols as i32);
    let k = rows.min(cols);
    let mut a = to_col_major(m);
    let mut s = vec![0.0f64; k];
    let mut u = [Complex64::new(0.0, 0.0)];
    let mut vt = [Complex64::new(0.0, 0.0)];
    let mut rwork = vec![0.0f64; 5 * k];
    let mut info = 0i32;

    let mut query = [Complex64::new(0.0, 0.0)];
    unsafe {
        lapack::zgesvd(
            b'N', b'N', ri, ci, &mut a, ri, &mut s, &mut u, 1, &mut vt, 1, &mut query, -1,
            &mut rwork, &mut info,
        );
    }
    let lwork = query[0].re as i32;
    let mut work = vec![Complex64::new(0.0, 0.0); lwork.max(1) as usize];
    unsafe {
        lapack::zgesvd(
            b'N', b'N', ri, ci, &mut a, ri, &mut s, &mut u, 1, &mut vt, 1, &mut work, lwork,
            &mut rwork, &mut info,
        );
    }
    assert_eq!(info, 0, "zgesvd failed with info = {info}");
    s
}

/// Eigendecomposition `M = X Λ X⁻¹` with unit-norm eigenvector columns.
///
/// Fails with `NotDiagonalizable` when the eigenvector matrix is numerically
/// singular (condition number above 1e10).
pub fn eigen(m: &ComplexMatrix) -> Result<FactorizationResult> {
    let (w, x) = eigen_pairs(m)?;
    let kappa = x.condition_number().map_err(|_| Error::NotDiagonalizable)?;
    if kappa > 1e10 {
        return Err(Error::NotDiagonalizable);
    }
    let core = ComplexMatrix::diagonal(&w);
    let right = x.inverse()?;
    let err = backward_error(&x, &core, &right, m);
    Ok(FactorizationResult {
        kind: FactorizationKind::Eigen,
        left_factor: x,
        core,
        right_factor: right,
        backward_error: err,
    })
}

/// Raw eigenpairs `(eigenvalues, eigenvector matrix)` via LAPACK `zgeev`.
/// Eigenvector columns are normalized to unit Euclidean norm.
pub fn eigen_pairs(m: &ComplexMatrix) -> Result<(Vec<Complex64>, ComplexMatrix)> {
    let n = require_square(m, "eigendecomposition")?;
    let ni = n as i32;
    let mut a = to_col_major(m);
    let mut w = vec![Complex64::new(0.0, 0.0); n];
    let mut vl = [Complex64::new(0.0, 0.0)];
    let mut vr = vec![Complex64::new(0.0, 0.0); n * n];
    let mut rwork = vec![0.0f64; 2 * n];
    let mut info = 0i32;

    let mut query = [Complex64::new(0.0, 0.0)];
    unsafe {
        lapack::zgeev(
            b'N', b'V', ni, &mut a, ni, &mut w, &mut vl, 1, &mut vr, ni, &mut query, -1,
            &mut rwork, &mut info,
        );
    }
    let lwork = query[0].re as i32;
    let mut work = vec![Complex64::new(0.0, 0.0); lwork.max(1) as usize];
    unsafe {
        lapack::zgeev(
            b'N', b'V', ni, &mut a, ni, &mut w, &mut vl, 1, &mut vr, ni, &mut work, lwork,
            &mut rwork, &mut info,
        );
    }
    if info != 0 {
        return Err(Error::Factorization {
            routine: "zgeev",
            info,
        });
    }
    // normalize columns
    for j in 0..n {
        let norm: f64 = (0..n).map(|i| vr[j * n + i].norm_sqr()).sum::<f64>().sqrt();
        if norm > 0.0 {
            for i in 0..n {
                vr[j * n + i] /= norm;
            }
        }
    }
    Ok((w, from_col_major(n, n, &vr)))
}

/// Frobenius deviation of `U* U` from the identity.
pub fn unitarity_defect(u: &ComplexMatrix) -> f64 {
    let n = u.n_cols();
    (&(&u.adjoint() * u) - &ComplexMatrix::identity(n)).frobenius_norm()
}
