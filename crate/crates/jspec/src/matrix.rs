//! Dense complex matrices and the numerical primitives the rest of the crate
//! is built on: norms, traces, commutators, inverses.
//!
//! Matrices are immutable values after construction; every operation returns a
//! fresh matrix. Entries are stored row-major as `Complex64`.

use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::factor;

/// Relative singular-value threshold below which a matrix is treated as
/// singular: `sigma_min <= SINGULARITY_THRESHOLD * sigma_max`.
pub const SINGULARITY_THRESHOLD: f64 = 1e-12;

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    n_rows: usize,
    n_cols: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, validating shape and finiteness.
    pub fn new(n_rows: usize, n_cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if n_rows == 0 || n_cols == 0 {
            return Err(Error::dims("matrix dimensions must be positive"));
        }
        if entries.len() != n_rows * n_cols {
            return Err(Error::dims(format!(
                "expected {} entries for a {}x{} matrix, got {}",
                n_rows * n_cols,
                n_rows,
                n_cols,
                entries.len()
            )));
        }
        for (idx, z) in entries.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFiniteEntry {
                    row: idx / n_cols,
                    col: idx % n_cols,
                });
            }
        }
        Ok(Self {
            n_rows,
            n_cols,
            entries,
        })
    }

    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        Self {
            n_rows,
            n_cols,
            entries: vec![Complex64::new(0.0, 0.0); n_rows * n_cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix entry-wise from a closure. Intended for internal
    /// construction where finiteness is guaranteed by the caller.
    pub fn from_fn(
        n_rows: usize,
        n_cols: usize,
        mut f: impl FnMut(usize, usize) -> Complex64,
    ) -> Self {
        let mut entries = Vec::with_capacity(n_rows * n_cols);
        for i in 0..n_rows {
            for j in 0..n_cols {
                entries.push(f(i, j));
            }
        }
        Self {
            n_rows,
            n_cols,
            entries,
        }
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::dims("matrix must have at least one row"));
        }
        let n_cols = rows[0].len();
        if rows.iter().any(|r| r.len() != n_cols) {
            return Err(Error::dims("all rows must have equal length"));
        }
        Self::new(rows.len(), n_cols, rows.concat())
    }

    /// Real-entried convenience constructor, mostly for tests.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let complex: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&complex)
    }

    pub fn diagonal(entries: &[Complex64]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| {
            if i == j {
                entries[i]
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn is_square(&self) -> bool {
        self.n_rows == self.n_cols
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.n_cols + col]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub(crate) fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.entries[row * self.n_cols + col] = value;
    }

    pub fn column(&self, col: usize) -> Vec<Complex64> {
        (0..self.n_rows).map(|i| self.get(i, col)).collect()
    }

    pub fn diagonal_entries(&self) -> Vec<Complex64> {
        (0..self.n_rows.min(self.n_cols))
            .map(|i| self.get(i, i))
            .collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n_cols, self.n_rows, |i, j| self.get(j, i).conj())
    }

    pub fn trace(&self) -> Complex64 {
        self.diagonal_entries().iter().sum()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            entries: self.entries.iter().map(|z| z * c).collect(),
        }
    }

    /// Matrix-vector product.
    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.n_cols, "vector length mismatch");
        (0..self.n_rows)
            .map(|i| {
                (0..self.n_cols)
                    .map(|j| self.get(i, j) * x[j])
                    .sum::<Complex64>()
            })
            .collect()
    }

    /// Frobenius norm: sqrt of the sum of squared entry moduli.
    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Largest singular value, via the SVD factorization contract.
    pub fn operator_norm(&self) -> f64 {
        factor::singular_values(self)
            .first()
            .copied()
            .unwrap_or(0.0)
    }

    /// Condition number sigma_max / sigma_min.
    ///
    /// Fails with `SingularMatrix` when the relative singularity threshold is
    /// crossed.
    pub fn condition_number(&self) -> Result<f64> {
        if !self.is_square() {
            return Err(Error::dims("condition number requires a square matrix"));
        }
        let sv = factor::singular_values(self);
        let sigma_max = sv[0];
        let sigma_min = *sv.last().unwrap();
        if sigma_min <= SINGULARITY_THRESHOLD * sigma_max {
            return Err(Error::SingularMatrix {
                sigma_min,
                sigma_max,
            });
        }
        Ok(sigma_max / sigma_min)
    }

    /// Smallest singular value.
    pub fn smallest_singular_value(&self) -> f64 {
        factor::singular_values(self).last().copied().unwrap_or(0.0)
    }

    /// Inverse, guarded by the relative singular-value threshold.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::dims("inverse requires a square matrix"));
        }
        let sv = factor::singular_values(self);
        let (sigma_max, sigma_min) = (sv[0], *sv.last().unwrap());
        if sigma_min <= SINGULARITY_THRESHOLD * sigma_max {
            return Err(Error::SingularMatrix {
                sigma_min,
                sigma_max,
            });
        }
        self.solve(&Self::identity(self.n_rows))
    }

    /// Solves `self * X = rhs` by partial-pivoted LU.
    pub fn solve(&self, rhs: &ComplexMatrix) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::dims("solve requires a square matrix"));
        }
        if rhs.n_rows != self.n_rows {
            return Err(Error::dims("right-hand side row count mismatch"));
        }
        let n = self.n_rows;
        let mut lu = self.entries.clone();
        let mut piv: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let mut p = k;
            let mut best = lu[piv[k] * n + k].norm();
            for r in (k + 1)..n {
                let v = lu[piv[r] * n + k].norm();
                if v > best {
                    best = v;
                    p = r;
                }
            }
            if best == 0.0 {
                return Err(Error::SingularMatrix {
                    sigma_min: 0.0,
                    sigma_max: self.frobenius_norm(),
                });
            }
            piv.swap(k, p);
            let pivot = lu[piv[k] * n + k];
            for r in (k + 1)..n {
                let factor = lu[piv[r] * n + k] / pivot;
                lu[piv[r] * n + k] = factor;
                for c in (k + 1)..n {
                    let sub = factor * lu[piv[k] * n + c];
                    lu[piv[r] * n + c] -= sub;
                }
            }
        }
        // forward/backward substitution per column of rhs
        let n_cols = rhs.n_cols;
        let mut out = ComplexMatrix::zeros(n, n_cols);
        for col in 0..n_cols {
            let mut y = vec![Complex64::new(0.0, 0.0); n];
            for i in 0..n {
                let mut acc = rhs.get(piv[i], col);
                for j in 0..i {
                    acc -= lu[piv[i] * n + j] * y[j];
                }
                y[i] = acc;
            }
            for i in (0..n).rev() {
                let mut acc = y[i];
                for j in (i + 1)..n {
                    acc -= lu[piv[i] * n + j] * out.get(j, col);
                }
                out.set(i, col, acc / lu[piv[i] * n + i]);
            }
        }
        Ok(out)
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i * self.n_cols + j]
    }
}

impl fmt::Display for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n_rows {
            for j in 0..self.n_cols {
                let z = self.get(i, j);
                write!(f, "{:>12.5}{:+.5}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.n_rows, self.n_cols), (rhs.n_rows, rhs.n_cols));
        ComplexMatrix {
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.n_rows, self.n_cols), (rhs.n_rows, rhs.n_cols));
        ComplexMatrix {
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.n_cols, rhs.n_rows, "matrix product dimension mismatch");
        let mut out = ComplexMatrix::zeros(self.n_rows, rhs.n_cols);
        for i in 0..self.n_rows {
            for k in 0..self.n_cols {
                let a = self.get(i, k);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..rhs.n_cols {
                    let add = a * rhs.get(k, j);
                    out.entries[i * rhs.n_cols + j] += add;
                }
            }
        }
        out
    }
}

/// Frobenius norm of the commutator `AB - BA`.
pub fn commutator_norm(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    if !a.is_square() || !b.is_square() || a.n_rows() != b.n_rows() {
        return Err(Error::dims(
            "commutator requires square matrices of equal size",
        ));
    }
    Ok((&(a * b) - &(b * a)).frobenius_norm())
}

/// Frobenius norm of `M M* - M* M`; zero exactly for normal matrices.
pub fn normality_defect(m: &ComplexMatrix) -> Result<f64> {
    if !m.is_square() {
        return Err(Error::dims("normality defect requires a square matrix"));
    }
    let adj = m.adjoint();
    Ok((&(m * &adj) - &(&adj * m)).frobenius_norm())
}
