//! Relative-distance cost matrices, optimal eigenvalue matching, and the
//! certified perturbation-bound checks.
//!
//! Three bound kinds are supported: `normal` (both tuples commuting normal,
//! unperturbed tuple nonsingular), `remark` (normal nonsingular vs arbitrary
//! commuting, with the dimension factor n on the right-hand side), and
//! `diagonalizable` (both tuples commuting diagonalizable, with the squared
//! condition numbers of the two diagonalizing transforms).
//!
//! The matching objective is the sum of squared relative distances; the
//! minimizing permutation lower-bounds every existential choice, so
//! `lhs <= rhs` certifies a bound instance.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::assignment::optimal_matching;
use crate::error::{Error, Result};
use crate::matrix::{normality_defect, ComplexMatrix, SINGULARITY_THRESHOLD};
use crate::spectrum::{
    diagonalize_general, simultaneous_diagonalize, triangular_joint_eigenvalues, JointSpectrum,
};
use crate::tuple::{check_hypotheses, HypothesisReport, MatrixTuple, Tolerances};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Normal,
    Remark,
    Diagonalizable,
}

impl std::fmt::Display for BoundKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BoundKind::Normal => write!(f, "normal"),
            BoundKind::Remark => write!(f, "remark"),
            BoundKind::Diagonalizable => write!(f, "diagonalizable"),
        }
    }
}

/// Outcome of one bound verification: the minimizing permutation, both sides,
/// the slack, and the verdict, plus the hypothesis diagnostics of both tuples.
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub kind: BoundKind,
    /// Row j of the unperturbed spectrum is matched to row `permutation[j]` of
    /// the perturbed spectrum (0-indexed).
    pub permutation: Vec<usize>,
    /// Minimized Σ_j Σ_k |(α_j^(k) − β_{π(j)}^(k)) / α_j^(k)|².
    pub lhs: f64,
    /// sqrt(lhs), for readability.
    pub lhs_sqrt: f64,
    pub rhs: f64,
    pub slack: f64,
    pub holds: bool,
    pub hypothesis_a: HypothesisReport,
    pub hypothesis_b: HypothesisReport,
    pub seed: u64,
    pub tolerances: Tolerances,
}

/// Entry (j, l) is Σ_k |(α_j^(k) − β_l^(k)) / α_j^(k)|².
///
/// Fails with `ZeroEigenvalue` when some α_j^(k) falls below the relative
/// singularity threshold of its coordinate.
pub fn relative_cost_matrix(
    alpha: &[Vec<Complex64>],
    beta: &[Vec<Complex64>],
) -> Result<Vec<Vec<f64>>> {
    let n = alpha.len();
    if beta.len() != n {
        return Err(Error::dims("spectra must have equal length"));
    }
    let m = alpha.first().map_or(0, Vec::len);
    if alpha.iter().chain(beta).any(|row| row.len() != m) {
        return Err(Error::dims("spectra must have equal coordinate count"));
    }
    for k in 0..m {
        let scale = alpha.iter().map(|row| row[k].norm()).fold(0.0, f64::max);
        for (j, row) in alpha.iter().enumerate() {
            if row[k].norm() <= SINGULARITY_THRESHOLD * scale || row[k].norm() == 0.0 {
                return Err(Error::ZeroEigenvalue { row: j, coord: k });
            }
        }
    }
    Ok(alpha
        .iter()
        .map(|a_row| {
            beta.iter()
                .map(|b_row| {
                    a_row
                        .iter()
                        .zip(b_row)
                        .map(|(a, b)| ((a - b) / a).norm_sqr())
                        .sum()
                })
                .collect()
        })
        .collect())
}

/// Σ_k ‖A_k⁻¹ (B_k − A_k)‖_F².
pub fn normal_bound_rhs(a: &MatrixTuple, b: &MatrixTuple) -> Result<f64> {
    require_same_shape(a, b)?;
    let mut total = 0.0;
    for (ak, bk) in a.members().iter().zip(b.members()) {
        let inv = ak.inverse()?;
        total += (&inv * &(bk - ak)).frobenius_norm().powi(2);
    }
    Ok(total)
}

/// n · Σ_k ‖A_k⁻¹‖² ‖B_k − A_k‖_F², with the operator norm on the inverse.
pub fn remark_bound_rhs(a: &MatrixTuple, b: &MatrixTuple) -> Result<f64> {
    require_same_shape(a, b)?;
    let mut total = 0.0;
    for (ak, bk) in a.members().iter().zip(b.members()) {
        let sv = crate::factor::singular_values(ak);
        let (sigma_max, sigma_min) = (sv[0], *sv.last().unwrap());
        if sigma_min <= SINGULARITY_THRESHOLD * sigma_max {
            return Err(Error::SingularMatrix {
                sigma_min,
                sigma_max,
            });
        }
        total += (bk - ak).frobenius_norm().powi(2) / (sigma_min * sigma_min);
    }
    Ok(a.n() as f64 * total)
}

/// κ(P)² κ(Q)² Σ_k ‖A_k⁻¹ (B_k − A_k)‖_F².
pub fn diag_bound_rhs(
    a: &MatrixTuple,
    b: &MatrixTuple,
    p: &ComplexMatrix,
    q: &ComplexMatrix,
) -> Result<f64> {
    let kappa_p = p.condition_number()?;
    let kappa_q = q.condition_number()?;
    Ok(kappa_p.powi(2) * kappa_q.powi(2) * normal_bound_rhs(a, b)?)
}

fn require_same_shape(a: &MatrixTuple, b: &MatrixTuple) -> Result<()> {
    if a.n() != b.n() || a.m() != b.m() {
        return Err(Error::dims("tuples must share dimensions"));
    }
    Ok(())
}

/// Full pipeline for one bound instance: hypothesis checks, both joint
/// spectra, the cost matrix, the optimal matching, the right-hand side, and
/// the verdict. Deterministic given the seed.
pub fn verify_bound(
    a: &MatrixTuple,
    b: &MatrixTuple,
    kind: BoundKind,
    seed: u64,
    tol: &Tolerances,
) -> Result<BoundReport> {
    require_same_shape(a, b)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let (hypothesis_a, hypothesis_b) = match kind {
        BoundKind::Normal => (
            check_hypotheses(a, true, true, tol),
            check_hypotheses(b, true, false, tol),
        ),
        BoundKind::Remark => (
            check_hypotheses(a, true, true, tol),
            check_hypotheses(b, false, false, tol),
        ),
        BoundKind::Diagonalizable => (
            check_hypotheses(a, false, true, tol),
            check_hypotheses(b, false, false, tol),
        ),
    };

    let (alpha, beta, rhs) = match kind {
        BoundKind::Normal => {
            a.require_commuting(tol)?;
            a.require_normal(tol)?;
            a.require_nonsingular()?;
            b.require_commuting(tol)?;
            b.require_normal(tol)?;
            let spec_a = simultaneous_diagonalize(a, &mut rng, tol)?;
            let spec_b = simultaneous_diagonalize(b, &mut rng, tol)?;
            let rhs = normal_bound_rhs(a, b)?;
            (
                spec_a.eigenvalue_rows().to_vec(),
                spec_b.eigenvalue_rows().to_vec(),
                rhs,
            )
        }
        BoundKind::Remark => {
            a.require_commuting(tol)?;
            a.require_normal(tol)?;
            a.require_nonsingular()?;
            b.require_commuting(tol)?;
            let spec_a = simultaneous_diagonalize(a, &mut rng, tol)?;
            let beta = triangular_joint_eigenvalues(b, &mut rng, tol)?;
            let rhs = remark_bound_rhs(a, b)?;
            (spec_a.eigenvalue_rows().to_vec(), beta, rhs)
        }
        BoundKind::Diagonalizable => {
            a.require_commuting(tol)?;
            a.require_nonsingular()?;
            b.require_commuting(tol)?;
            let spec_a = diagonalize_general(a, &mut rng, tol)?;
            let spec_b = diagonalize_general(b, &mut rng, tol)?;
            let rhs = diag_bound_rhs(a, b, spec_a.transform(), spec_b.transform())?;
            (
                spec_a.eigenvalue_rows().to_vec(),
                spec_b.eigenvalue_rows().to_vec(),
                rhs,
            )
        }
    };

    let cost = relative_cost_matrix(&alpha, &beta)?;
    let (permutation, lhs) = optimal_matching(&cost);
    let verification_tolerance = tol.verification * (1.0 + rhs);
    let holds = lhs <= rhs + verification_tolerance;

    Ok(BoundReport {
        kind,
        permutation,
        lhs,
        lhs_sqrt: lhs.sqrt(),
        rhs,
        slack: rhs - lhs,
        holds,
        hypothesis_a,
        hypothesis_b,
        seed,
        tolerances: *tol,
    })
}

/// Both unitary-kind spectra of a normal bound instance, for callers that
/// need the proof machinery (overlap matrix, Birkhoff terms) alongside the
/// report.
pub fn normal_spectra(
    a: &MatrixTuple,
    b: &MatrixTuple,
    seed: u64,
    tol: &Tolerances,
) -> Result<(JointSpectrum, JointSpectrum)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spec_a = simultaneous_diagonalize(a, &mut rng, tol)?;
    let spec_b = simultaneous_diagonalize(b, &mut rng, tol)?;
    Ok((spec_a, spec_b))
}

/// Result of the sigma-lemma oracle check.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SigmaCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Evaluates ‖MΣN − Σ‖_F against σ_n ‖MN − I‖_F for normal M, N and an
/// ordered nonnegative diagonal Σ. `holds` reports lhs ≥ rhs − 1e-10; this is
/// an oracle that measures, not an identity that is assumed.
pub fn lemma_sigma_check(
    m: &ComplexMatrix,
    n: &ComplexMatrix,
    sigma: &[f64],
) -> Result<SigmaCheck> {
    let dim = m.n_rows();
    if !m.is_square() || !n.is_square() || n.n_rows() != dim || sigma.len() != dim {
        return Err(Error::dims(
            "sigma check requires square matrices and a matching diagonal",
        ));
    }
    if sigma.iter().any(|s| !s.is_finite()) {
        return Err(Error::InvalidArgument(
            "sigma entries must be finite".to_string(),
        ));
    }
    if sigma.windows(2).any(|w| w[0] < w[1]) || sigma.last().is_some_and(|&s| s < 0.0) {
        return Err(Error::NotOrdered);
    }
    let tol = Tolerances::default();
    for (label, matrix) in [(0usize, m), (1usize, n)] {
        let defect = normality_defect(matrix)?;
        let threshold = tol.normality * matrix.frobenius_norm().powi(2);
        if defect > threshold {
            return Err(Error::NotNormal {
                index: label,
                defect,
                threshold,
            });
        }
    }
    let sigma_matrix = ComplexMatrix::diagonal(
        &sigma
            .iter()
            .map(|&s| Complex64::new(s, 0.0))
            .collect::<Vec<_>>(),
    );
    let lhs = (&(&(m * &sigma_matrix) * n) - &sigma_matrix).frobenius_norm();
    let sigma_min = *sigma.last().unwrap();
    let rhs = sigma_min * (&(m * n) - &ComplexMatrix::identity(dim)).frobenius_norm();
    Ok(SigmaCheck {
        lhs,
        rhs,
        holds: lhs >= rhs - 1e-10,
    })
}
