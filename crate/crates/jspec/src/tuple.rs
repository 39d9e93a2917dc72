//! Commuting matrix tuples and hypothesis diagnostics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{commutator_norm, normality_defect, ComplexMatrix, SINGULARITY_THRESHOLD};

/// Scale-relative tolerances used across hypothesis checks and
/// diagonalization. Defaults follow the library-wide conventions; every CLI
/// command exposes them as flags.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Tolerances {
    /// Commutation: max pairwise ‖[A_i, A_j]‖_F relative to
    /// max_k ‖A_k‖_F · max_l ‖A_l‖_F.
    pub commutation: f64,
    /// Normality: ‖M M* − M* M‖_F relative to ‖M‖_F².
    pub normality: f64,
    /// Diagonalization residual, relative to ‖A_k‖_F per member.
    pub diagonalization: f64,
    /// Bound verification slack factor: holds ⇔ lhs ≤ rhs + factor·(1 + rhs).
    pub verification: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            commutation: 1e-8,
            normality: 1e-8,
            diagonalization: 1e-7,
            verification: 1e-8,
        }
    }
}

/// An m-tuple of n×n complex matrices.
#[derive(Debug, Clone)]
pub struct MatrixTuple {
    n: usize,
    m: usize,
    matrices: Vec<ComplexMatrix>,
}

impl MatrixTuple {
    pub fn new(matrices: Vec<ComplexMatrix>) -> Result<Self> {
        if matrices.is_empty() {
            return Err(Error::dims("a tuple must contain at least one matrix"));
        }
        let n = matrices[0].n_rows();
        for m in &matrices {
            if !m.is_square() || m.n_rows() != n {
                return Err(Error::dims(
                    "all tuple members must be square matrices of equal size",
                ));
            }
        }
        Ok(Self {
            n,
            m: matrices.len(),
            matrices,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn member(&self, k: usize) -> &ComplexMatrix {
        &self.matrices[k]
    }

    pub fn members(&self) -> &[ComplexMatrix] {
        &self.matrices
    }

    /// max_k ‖A_k‖_F · max_l ‖A_l‖_F, the commutator scale.
    pub fn commutation_scale(&self) -> f64 {
        let max_norm = self
            .matrices
            .iter()
            .map(|m| m.frobenius_norm())
            .fold(0.0, f64::max);
        max_norm * max_norm
    }

    /// Largest pairwise commutator norm.
    pub fn max_commutator_norm(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.m {
            for j in (i + 1)..self.m {
                let c = commutator_norm(&self.matrices[i], &self.matrices[j])
                    .expect("members are square of equal size");
                worst = worst.max(c);
            }
        }
        worst
    }

    /// Errors with `NotCommuting` when the pairwise commutators exceed the
    /// scaled tolerance.
    pub fn require_commuting(&self, tol: &Tolerances) -> Result<()> {
        let defect = self.max_commutator_norm();
        let threshold = tol.commutation * self.commutation_scale();
        if defect > threshold {
            return Err(Error::NotCommuting { defect, threshold });
        }
        Ok(())
    }

    /// Errors with `NotNormal` naming the first offending member.
    pub fn require_normal(&self, tol: &Tolerances) -> Result<()> {
        for (k, m) in self.matrices.iter().enumerate() {
            let defect = normality_defect(m).expect("members are square");
            let threshold = tol.normality * m.frobenius_norm().powi(2);
            if defect > threshold {
                return Err(Error::NotNormal {
                    index: k,
                    defect,
                    threshold,
                });
            }
        }
        Ok(())
    }

    /// Errors with `SingularMatrix` when any member crosses the relative
    /// singularity threshold.
    pub fn require_nonsingular(&self) -> Result<()> {
        for m in &self.matrices {
            let sv = crate::factor::singular_values(m);
            let (sigma_max, sigma_min) = (sv[0], *sv.last().unwrap());
            if sigma_min <= SINGULARITY_THRESHOLD * sigma_max {
                return Err(Error::SingularMatrix {
                    sigma_min,
                    sigma_max,
                });
            }
        }
        Ok(())
    }
}

/// Diagnostic report from [`check_hypotheses`]. Never an error: every field
/// is measured, and pass/fail verdicts are evaluated only for the requested
/// hypotheses.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub max_commutator_norm: f64,
    pub commutation_threshold: f64,
    pub commuting: bool,
    pub max_normality_defect: f64,
    pub normal: bool,
    pub min_singular_value: f64,
    pub min_relative_singular_value: f64,
    pub nonsingular: bool,
    pub required_normal: bool,
    pub required_nonsingular: bool,
    pub pass: bool,
}

/// Measures commutation, normality and singularity diagnostics for a tuple.
pub fn check_hypotheses(
    tuple: &MatrixTuple,
    require_normal: bool,
    require_nonsingular: bool,
    tol: &Tolerances,
) -> HypothesisReport {
    let max_commutator_norm = tuple.max_commutator_norm();
    let commutation_threshold = tol.commutation * tuple.commutation_scale();
    let commuting = max_commutator_norm <= commutation_threshold;

    let mut max_normality_defect = 0.0f64;
    let mut normal = true;
    for m in tuple.members() {
        let defect = normality_defect(m).expect("members are square");
        max_normality_defect = max_normality_defect.max(defect);
        if defect > tol.normality * m.frobenius_norm().powi(2) {
            normal = false;
        }
    }

    let mut min_singular_value = f64::INFINITY;
    let mut min_relative = f64::INFINITY;
    let mut nonsingular = true;
    for m in tuple.members() {
        let sv = crate::factor::singular_values(m);
        let (sigma_max, sigma_min) = (sv[0], *sv.last().unwrap());
        min_singular_value = min_singular_value.min(sigma_min);
        let rel = if sigma_max > 0.0 {
            sigma_min / sigma_max
        } else {
            0.0
        };
        min_relative = min_relative.min(rel);
        if sigma_min <= SINGULARITY_THRESHOLD * sigma_max {
            nonsingular = false;
        }
    }

    let pass = commuting && (!require_normal || normal) && (!require_nonsingular || nonsingular);
    HypothesisReport {
        max_commutator_norm,
        commutation_threshold,
        commuting,
        max_normality_defect,
        normal,
        min_singular_value,
        min_relative_singular_value: min_relative,
        nonsingular,
        required_normal: require_normal,
        required_nonsingular: require_nonsingular,
        pass,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diagonal_tuple_passes_all() {
        let tuple = MatrixTuple::new(vec![
            ComplexMatrix::diagonal(&[c(1.0, 0.0), c(2.0, 0.0)]),
            ComplexMatrix::diagonal(&[c(3.0, 1.0), c(4.0, -1.0)]),
        ])
        .unwrap();
        let report = check_hypotheses(&tuple, true, true, &Tolerances::default());
        assert!(report.pass);
        assert!(report.commuting && report.normal && report.nonsingular);
        assert_eq!(report.max_commutator_norm, 0.0);
    }

    #[test]
    fn singular_member_fails_nonsingularity() {
        let tuple =
            MatrixTuple::new(vec![ComplexMatrix::diagonal(&[c(1.0, 0.0), c(0.0, 0.0)])]).unwrap();
        let report = check_hypotheses(&tuple, false, true, &Tolerances::default());
        assert!(!report.pass);
        assert!(!report.nonsingular);
        assert!(report.commuting);
    }

    #[test]
    fn nilpotent_shift_tuple_commutes_but_is_not_normal() {
        // scaled nilpotent shifts: commuting, non-normal
        let n = 4;
        let shift = |k: f64| {
            ComplexMatrix::from_fn(
                n,
                n,
                |i, j| {
                    if j == i + 1 {
                        c(k, 0.0)
                    } else {
                        c(0.0, 0.0)
                    }
                },
            )
        };
        let tuple = MatrixTuple::new(vec![shift(1.0), shift(2.0)]).unwrap();
        let report = check_hypotheses(&tuple, true, false, &Tolerances::default());
        assert!(report.commuting);
        assert!(!report.normal);
        assert!(!report.pass);
    }

    #[test]
    fn mixed_sizes_rejected() {
        let err = MatrixTuple::new(vec![ComplexMatrix::identity(2), ComplexMatrix::identity(3)]);
        assert!(err.is_err());
    }
}
