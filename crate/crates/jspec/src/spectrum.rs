//! Joint spectra of commuting tuples: simultaneous (unitary) diagonalization
//! for normal tuples, general similarity diagonalization for diagonalizable
//! tuples, common triangularization for arbitrary commuting tuples, and the
//! spectral-projector overlap matrix.
//!
//! The diagonalizers follow the random-combination strategy: draw real
//! coefficients c_k uniform on [-1, 1], factor H = Σ c_k A^(k), and test that
//! the resulting basis handles every member of the tuple. Eigenvalue
//! collisions in H (clusters closer than 1e-8 relative) are refined
//! recursively with fresh combinations; 20 attempts total before giving up.

use std::cmp::Ordering;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::birkhoff::OverlapMatrix;
use crate::error::{Error, Result};
use crate::factor;
use crate::matrix::ComplexMatrix;
use crate::tuple::{MatrixTuple, Tolerances};

/// Relative threshold under which two eigenvalues of the combined matrix are
/// treated as one cluster.
pub const CLUSTER_THRESHOLD: f64 = 1e-8;

/// Total random-combination attempts before diagonalization gives up.
pub const MAX_DIAGONALIZATION_RETRIES: u32 = 20;

/// Condition-number ceiling above which an eigenvector matrix counts as
/// numerically defective.
pub const GENERAL_CONDITION_LIMIT: f64 = 1e10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransformKind {
    Unitary,
    General,
}

/// A computed joint spectrum: n joint eigenvalues in C^m, the diagonalizing
/// transform, and (for the unitary kind) the rank-one spectral projectors.
#[derive(Debug, Clone)]
pub struct JointSpectrum {
    n: usize,
    m: usize,
    eigenvalues: Vec<Vec<Complex64>>,
    transform: ComplexMatrix,
    kind: TransformKind,
    projectors: Option<Vec<ComplexMatrix>>,
    residual: f64,
}

impl JointSpectrum {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Joint eigenvalues, one row per eigenvalue, m coordinates each, in
    /// canonical (lexicographic by re, im per coordinate) order.
    pub fn eigenvalue_rows(&self) -> &[Vec<Complex64>] {
        &self.eigenvalues
    }

    pub fn transform(&self) -> &ComplexMatrix {
        &self.transform
    }

    pub fn kind(&self) -> TransformKind {
        self.kind
    }

    /// Rank-one spectral projectors u_j u_j*, unitary kind only.
    pub fn projectors(&self) -> Option<&[ComplexMatrix]> {
        self.projectors.as_deref()
    }

    pub fn residual(&self) -> f64 {
        self.residual
    }
}

/// Lexicographic order on joint eigenvalue rows: (re, im) of coordinate 1,
/// then coordinate 2, and so on.
fn canonical_order(rows: &[Vec<Complex64>]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..rows.len()).collect();
    idx.sort_by(|&a, &b| {
        for (za, zb) in rows[a].iter().zip(&rows[b]) {
            match za.re.partial_cmp(&zb.re).unwrap_or(Ordering::Equal) {
                Ordering::Equal => {}
                o => return o,
            }
            match za.im.partial_cmp(&zb.im).unwrap_or(Ordering::Equal) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        Ordering::Equal
    });
    idx
}

fn permute_columns(m: &ComplexMatrix, perm: &[usize]) -> ComplexMatrix {
    ComplexMatrix::from_fn(m.n_rows(), m.n_cols(), |i, j| m.get(i, perm[j]))
}

fn off_diagonal_norm(m: &ComplexMatrix) -> f64 {
    let n = m.n_rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += m.get(i, j).norm_sqr();
            }
        }
    }
    acc.sqrt()
}

fn strictly_lower_norm(m: &ComplexMatrix) -> f64 {
    let n = m.n_rows();
    let mut acc = 0.0;
    for i in 1..n {
        for j in 0..i {
            acc += m.get(i, j).norm_sqr();
        }
    }
    acc.sqrt()
}

fn random_combination(mats: &[ComplexMatrix], rng: &mut impl Rng) -> ComplexMatrix {
    let mut h = ComplexMatrix::zeros(mats[0].n_rows(), mats[0].n_cols());
    for m in mats {
        let c = Complex64::new(rng.gen_range(-1.0..1.0), 0.0);
        h = &h + &m.scale(c);
    }
    h
}

/// Groups indices whose values chain within `threshold` of each other.
/// Clusters come out sorted by their smallest member index.
fn cluster_indices(values: &[Complex64], threshold: f64) -> Vec<Vec<usize>> {
    let n = values.len();
    let mut component: Vec<usize> = (0..n).collect();
    fn root(component: &mut [usize], mut i: usize) -> usize {
        while component[i] != i {
            component[i] = component[component[i]];
            i = component[i];
        }
        i
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (values[i] - values[j]).norm() <= threshold {
                let (ri, rj) = (root(&mut component, i), root(&mut component, j));
                if ri != rj {
                    component[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    let mut slot_of_root = std::collections::BTreeMap::new();
    for i in 0..n {
        let r = root(&mut component, i);
        let slot = *slot_of_root.entry(r).or_insert_with(|| {
            clusters.push(Vec::new());
            clusters.len() - 1
        });
        clusters[slot].push(i);
    }
    clusters
}

/// True when every member is within `tol_k` of a scalar multiple of the
/// identity, in which case any orthonormal basis diagonalizes the block.
fn all_near_scalar(mats: &[ComplexMatrix], scales: &[f64]) -> bool {
    let d = mats[0].n_rows();
    mats.iter().zip(scales).all(|(m, &scale)| {
        let mean = m.trace() / Complex64::new(d as f64, 0.0);
        let dev = (m - &ComplexMatrix::diagonal(&vec![mean; d])).frobenius_norm();
        dev <= 1e-9 * scale.max(1e-300)
    })
}

/// Recursive unitary diagonalizer for a commuting normal family restricted to
/// the current block. `scales` carries the original full-matrix Frobenius
/// norms so tolerances stay anchored to the input scale.
fn refine_unitary(
    mats: &[ComplexMatrix],
    scales: &[f64],
    rng: &mut impl Rng,
    tol: &Tolerances,
    budget: &mut u32,
) -> Result<ComplexMatrix> {
    let d = mats[0].n_rows();
    if d == 1 || all_near_scalar(mats, scales) {
        return Ok(ComplexMatrix::identity(d));
    }
    loop {
        if *budget == 0 {
            return Err(Error::DiagonalizationFailed);
        }
        *budget -= 1;

        let h = random_combination(mats, rng);
        let (u0, t) = factor::schur_decompose(&h)?;
        let diag = t.diagonal_entries();
        let eig_scale = diag.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let clusters = cluster_indices(&diag, CLUSTER_THRESHOLD * eig_scale.max(1e-300));

        if clusters.len() == 1 && clusters[0].len() == d {
            // degenerate combination; a fresh one separates unless the block
            // is genuinely scalar, which was handled above
            continue;
        }

        let perm: Vec<usize> = clusters.iter().flatten().copied().collect();
        let mut u = permute_columns(&u0, &perm);

        let mut offset = 0;
        let mut refinement = ComplexMatrix::identity(d);
        let mut needs_refinement = false;
        let mut failed = false;
        for cluster in &clusters {
            let size = cluster.len();
            if size > 1 {
                needs_refinement = true;
                let w = ComplexMatrix::from_fn(d, size, |i, j| u.get(i, offset + j));
                let sub: Vec<ComplexMatrix> =
                    mats.iter().map(|a| &(&w.adjoint() * a) * &w).collect();
                match refine_unitary(&sub, scales, rng, tol, budget) {
                    Ok(v) => {
                        for i in 0..size {
                            for j in 0..size {
                                refinement.set(offset + i, offset + j, v.get(i, j));
                            }
                        }
                    }
                    Err(Error::DiagonalizationFailed) if *budget > 0 => {
                        failed = true;
                        break;
                    }
                    Err(e) => return Err(e),
                }
            }
            offset += size;
        }
        if failed {
            continue;
        }
        if needs_refinement {
            u = &u * &refinement;
        }

        let ok = mats.iter().zip(scales).all(|(a, &scale)| {
            off_diagonal_norm(&(&(&u.adjoint() * a) * &u)) <= tol.diagonalization * scale
        });
        if ok {
            return Ok(u);
        }
    }
}

fn spectrum_from_transform(
    tuple: &MatrixTuple,
    transform: ComplexMatrix,
    kind: TransformKind,
) -> Result<JointSpectrum> {
    let n = tuple.n();
    let m = tuple.m();
    let inverse_action: Vec<ComplexMatrix> = match kind {
        TransformKind::Unitary => {
            let adj = transform.adjoint();
            tuple
                .members()
                .iter()
                .map(|a| &(&adj * a) * &transform)
                .collect()
        }
        TransformKind::General => tuple
            .members()
            .iter()
            .map(|a| transform.solve(&(a * &transform)))
            .collect::<Result<_>>()?,
    };

    let mut rows: Vec<Vec<Complex64>> = (0..n)
        .map(|j| inverse_action.iter().map(|d| d.get(j, j)).collect())
        .collect();
    let residual = inverse_action
        .iter()
        .map(off_diagonal_norm)
        .fold(0.0, f64::max);

    let order = canonical_order(&rows);
    rows = order.iter().map(|&j| rows[j].clone()).collect();
    let transform = permute_columns(&transform, &order);

    let projectors = match kind {
        TransformKind::Unitary => Some(
            (0..n)
                .map(|j| {
                    let col = transform.column(j);
                    ComplexMatrix::from_fn(n, n, |r, c| col[r] * col[c].conj())
                })
                .collect(),
        ),
        TransformKind::General => None,
    };

    Ok(JointSpectrum {
        n,
        m,
        eigenvalues: rows,
        transform,
        kind,
        projectors,
        residual,
    })
}

/// Simultaneous unitary diagonalization of a commuting normal tuple.
///
/// Columns of the returned transform are joint eigenvectors; eigenvalue rows
/// come out in canonical order.
pub fn simultaneous_diagonalize(
    tuple: &MatrixTuple,
    rng: &mut impl Rng,
    tol: &Tolerances,
) -> Result<JointSpectrum> {
    tuple.require_commuting(tol)?;
    tuple.require_normal(tol)?;

    let scales: Vec<f64> = tuple.members().iter().map(|a| a.frobenius_norm()).collect();
    let mut budget = MAX_DIAGONALIZATION_RETRIES;
    let u = refine_unitary(tuple.members(), &scales, rng, tol, &mut budget)?;
    spectrum_from_transform(tuple, u, TransformKind::Unitary)
}

/// Similarity diagonalization of a commuting diagonalizable tuple. The
/// transform is generally non-unitary; its columns are normalized joint
/// eigenvectors and its condition number is finite (at most 1e10).
pub fn diagonalize_general(
    tuple: &MatrixTuple,
    rng: &mut impl Rng,
    tol: &Tolerances,
) -> Result<JointSpectrum> {
    tuple.require_commuting(tol)?;

    let n = tuple.n();
    let scales: Vec<f64> = tuple.members().iter().map(|a| a.frobenius_norm()).collect();

    for _ in 0..MAX_DIAGONALIZATION_RETRIES {
        let h = random_combination(tuple.members(), rng);
        let (eigs, mut x) = factor::eigen_pairs(&h)?;

        // Within eigenvalue clusters of H the computed eigenvectors may be
        // nearly parallel even for diagonalizable input; an orthonormal basis
        // of their span keeps the transform well-conditioned whenever the
        // span really is the joint eigenspace.
        let eig_scale = eigs.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let clusters = cluster_indices(&eigs, CLUSTER_THRESHOLD * eig_scale.max(1e-300));
        let mut degenerate = false;
        for cluster in &clusters {
            if cluster.len() > 1 {
                if let Some(basis) = orthonormal_span(&x, cluster) {
                    for (slot, col) in cluster.iter().zip(basis) {
                        for i in 0..n {
                            x.set(i, *slot, col[i]);
                        }
                    }
                } else {
                    degenerate = true;
                    break;
                }
            }
        }
        if degenerate {
            continue;
        }

        match x.condition_number() {
            Ok(kappa) if kappa <= GENERAL_CONDITION_LIMIT => {}
            _ => continue,
        }

        let ok = tuple.members().iter().zip(&scales).try_fold(
            true,
            |acc, (a, &scale)| -> Result<bool> {
                let d = x.solve(&(a * &x))?;
                Ok(acc && off_diagonal_norm(&d) <= tol.diagonalization * scale)
            },
        )?;
        if ok {
            return spectrum_from_transform(tuple, x, TransformKind::General);
        }
    }
    Err(Error::NotDiagonalizable)
}

/// Modified Gram-Schmidt basis of the span of the selected columns; `None`
/// when the columns are numerically rank-deficient.
fn orthonormal_span(x: &ComplexMatrix, columns: &[usize]) -> Option<Vec<Vec<Complex64>>> {
    let n = x.n_rows();
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(columns.len());
    for &c in columns {
        let mut v = x.column(c);
        for _ in 0..2 {
            for b in &basis {
                let proj: Complex64 = b.iter().zip(&v).map(|(bi, vi)| bi.conj() * vi).sum();
                for i in 0..n {
                    v[i] -= proj * b[i];
                }
            }
        }
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-8 {
            return None;
        }
        for z in &mut v {
            *z /= norm;
        }
        basis.push(v);
    }
    Some(basis)
}

/// Joint eigenvalues of an arbitrary commuting tuple read off the diagonal of
/// a common unitary triangularization, in canonical order. Used where
/// diagonalizability cannot be assumed (the tuple may be nilpotent).
pub fn triangular_joint_eigenvalues(
    tuple: &MatrixTuple,
    rng: &mut impl Rng,
    tol: &Tolerances,
) -> Result<Vec<Vec<Complex64>>> {
    tuple.require_commuting(tol)?;

    let n = tuple.n();
    let scales: Vec<f64> = tuple.members().iter().map(|a| a.frobenius_norm()).collect();

    for _ in 0..MAX_DIAGONALIZATION_RETRIES {
        let h = random_combination(tuple.members(), rng);
        let (u, _) = factor::schur_decompose(&h)?;
        let adj = u.adjoint();
        let triangular: Vec<ComplexMatrix> =
            tuple.members().iter().map(|a| &(&adj * a) * &u).collect();
        let ok = triangular
            .iter()
            .zip(&scales)
            .all(|(t, &scale)| strictly_lower_norm(t) <= tol.diagonalization * scale);
        if ok {
            let mut rows: Vec<Vec<Complex64>> = (0..n)
                .map(|j| triangular.iter().map(|t| t.get(j, j)).collect())
                .collect();
            let order = canonical_order(&rows);
            rows = order.iter().map(|&j| rows[j].clone()).collect();
            return Ok(rows);
        }
    }
    Err(Error::TriangularizationFailed)
}

/// The doubly stochastic overlap matrix w_ij = trace(P_i Q_j) = |⟨u_i, v_j⟩|²
/// between two unitary-kind spectra.
pub fn overlap_matrix(a: &JointSpectrum, b: &JointSpectrum) -> Result<OverlapMatrix> {
    if a.kind != TransformKind::Unitary || b.kind != TransformKind::Unitary {
        return Err(Error::KindMismatch);
    }
    if a.n != b.n {
        return Err(Error::dims("overlap requires spectra of equal dimension"));
    }
    let gram = &a.transform.adjoint() * &b.transform;
    let n = a.n;
    let entries: Vec<f64> = (0..n * n)
        .map(|idx| gram.get(idx / n, idx % n).norm_sqr())
        .collect();
    OverlapMatrix::new(n, entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn diagonal_tuple_spectrum() {
        let tuple = MatrixTuple::new(vec![
            ComplexMatrix::diagonal(&[c(1.0, 0.0), c(2.0, 0.0)]),
            ComplexMatrix::diagonal(&[c(3.0, 0.0), c(4.0, 0.0)]),
        ])
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let spec = simultaneous_diagonalize(&tuple, &mut rng, &tol()).unwrap();
        assert_eq!(spec.kind(), TransformKind::Unitary);
        let rows = spec.eigenvalue_rows();
        assert!((rows[0][0] - c(1.0, 0.0)).norm() < 1e-12);
        assert!((rows[0][1] - c(3.0, 0.0)).norm() < 1e-12);
        assert!((rows[1][0] - c(2.0, 0.0)).norm() < 1e-12);
        assert!((rows[1][1] - c(4.0, 0.0)).norm() < 1e-12);
        assert!(spec.residual() < 1e-12);
        // transform is identity up to permutation/phase
        let u = spec.transform();
        for j in 0..2 {
            let col = u.column(j);
            let mass: f64 = col.iter().map(|z| z.norm_sqr()).sum();
            assert!((mass - 1.0).abs() < 1e-12);
            assert!((col[j].norm() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn circulant_tuple_spectrum() {
        // A^(k) = k * C_3: joint eigenvalues (w^j, 2 w^j) for cube roots w^j
        let n = 3;
        let shift = |k: f64| {
            ComplexMatrix::from_fn(n, n, |i, j| {
                if j == (i + 1) % n {
                    c(k, 0.0)
                } else {
                    c(0.0, 0.0)
                }
            })
        };
        let tuple = MatrixTuple::new(vec![shift(1.0), shift(2.0)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let spec = simultaneous_diagonalize(&tuple, &mut rng, &tol()).unwrap();
        assert!(spec.residual() < 1e-10);

        let mut expected: Vec<Vec<Complex64>> = (0..3)
            .map(|j| {
                let omega = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / 3.0);
                vec![omega, omega * 2.0]
            })
            .collect();
        let order = canonical_order(&expected);
        expected = order.iter().map(|&j| expected[j].clone()).collect();
        for (row, want) in spec.eigenvalue_rows().iter().zip(&expected) {
            for (z, w) in row.iter().zip(want) {
                assert!((z - w).norm() < 1e-9, "{z} vs {w}");
            }
        }
    }

    #[test]
    fn non_normal_member_rejected() {
        let tuple = MatrixTuple::new(vec![ComplexMatrix::from_real_rows(&[
            vec![0.0, 1.0],
            vec![0.0, 0.0],
        ])
        .unwrap()])
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        assert!(matches!(
            simultaneous_diagonalize(&tuple, &mut rng, &tol()),
            Err(Error::NotNormal { .. })
        ));
    }

    #[test]
    fn repeated_joint_eigenvalues_terminate() {
        // scalar members: every combination is degenerate, identity basis works
        let tuple = MatrixTuple::new(vec![
            ComplexMatrix::identity(3),
            ComplexMatrix::identity(3).scale(c(2.0, 1.0)),
        ])
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let spec = simultaneous_diagonalize(&tuple, &mut rng, &tol()).unwrap();
        assert!(spec.residual() < 1e-12);
        for row in spec.eigenvalue_rows() {
            assert!((row[0] - c(1.0, 0.0)).norm() < 1e-12);
            assert!((row[1] - c(2.0, 1.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn partially_repeated_spectrum_refines() {
        // first member has a repeated eigenvalue; second separates it
        let u = {
            // fixed unitary from a Householder-free construction: rotation in 2 planes
            let t = 0.7f64;
            ComplexMatrix::from_rows(&[
                vec![c(t.cos(), 0.0), c(-t.sin(), 0.0), c(0.0, 0.0)],
                vec![c(t.sin(), 0.0), c(t.cos(), 0.0), c(0.0, 0.0)],
                vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
            ])
            .unwrap()
        };
        let conj = |d: &[Complex64]| &(&u * &ComplexMatrix::diagonal(d)) * &u.adjoint();
        let tuple = MatrixTuple::new(vec![
            conj(&[c(1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)]),
            conj(&[c(1.0, 0.0), c(5.0, 0.0), c(3.0, 0.0)]),
        ])
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let spec = simultaneous_diagonalize(&tuple, &mut rng, &tol()).unwrap();
        assert!(spec.residual() < 1e-9, "residual {}", spec.residual());
    }

    #[test]
    fn projectors_complete_and_idempotent() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 4;
        let g = ComplexMatrix::from_fn(n, n, |_, _| {
            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let basis = orthonormal_span(&g, &[0, 1, 2, 3]).unwrap();
        let u = ComplexMatrix::from_fn(n, n, |i, j| basis[j][i]);
        let d1: Vec<Complex64> = (0..n).map(|i| c(i as f64 + 1.0, -(i as f64))).collect();
        let tuple =
            MatrixTuple::new(vec![&(&u * &ComplexMatrix::diagonal(&d1)) * &u.adjoint()]).unwrap();
        let spec = simultaneous_diagonalize(&tuple, &mut rng, &tol()).unwrap();

        let projectors = spec.projectors().unwrap();
        let mut sum = ComplexMatrix::zeros(n, n);
        for p in projectors {
            sum = &sum + p;
            let idem = (&(p * p) - p).frobenius_norm();
            assert!(idem < 1e-10);
        }
        assert!((&sum - &ComplexMatrix::identity(n)).frobenius_norm() < 1e-10);
    }

    #[test]
    fn general_diagonalization_two_by_two() {
        // A = S diag(1,2) S^{-1}, S = [[1,1],[0,1]]
        let a = ComplexMatrix::from_real_rows(&[vec![1.0, 1.0], vec![0.0, 2.0]]).unwrap();
        let tuple = MatrixTuple::new(vec![a]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let spec = diagonalize_general(&tuple, &mut rng, &tol()).unwrap();
        assert_eq!(spec.kind(), TransformKind::General);
        let rows = spec.eigenvalue_rows();
        assert!((rows[0][0] - c(1.0, 0.0)).norm() < 1e-10);
        assert!((rows[1][0] - c(2.0, 0.0)).norm() < 1e-10);
        assert!(spec.transform().condition_number().unwrap() < 10.0);
    }

    #[test]
    fn jordan_block_not_diagonalizable() {
        let jordan = ComplexMatrix::from_real_rows(&[vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
        let tuple = MatrixTuple::new(vec![jordan]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        assert!(matches!(
            diagonalize_general(&tuple, &mut rng, &tol()),
            Err(Error::NotDiagonalizable)
        ));
    }

    #[test]
    fn general_agrees_with_unitary_on_normal_tuple() {
        let tuple = MatrixTuple::new(vec![
            ComplexMatrix::diagonal(&[c(1.0, 1.0), c(-2.0, 0.5), c(0.5, -3.0)]),
            ComplexMatrix::diagonal(&[c(2.0, 0.0), c(1.0, 1.0), c(-1.0, 2.0)]),
        ])
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let unitary = simultaneous_diagonalize(&tuple, &mut rng, &tol()).unwrap();
        let general = diagonalize_general(&tuple, &mut rng, &tol()).unwrap();
        for (a, b) in unitary
            .eigenvalue_rows()
            .iter()
            .zip(general.eigenvalue_rows())
        {
            for (x, y) in a.iter().zip(b) {
                assert!((x - y).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn triangular_eigenvalues_of_nilpotent_family() {
        let n = 3;
        let nilpotent = |k: f64| {
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
        let tuple = MatrixTuple::new(vec![nilpotent(1.0), nilpotent(2.0)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let rows = triangular_joint_eigenvalues(&tuple, &mut rng, &tol()).unwrap();
        for row in rows {
            for z in row {
                assert!(z.norm() < 1e-10);
            }
        }
    }

    #[test]
    fn overlap_identical_spectrum_is_identity() {
        let tuple = MatrixTuple::new(vec![ComplexMatrix::diagonal(&[
            c(1.0, 0.0),
            c(2.0, 0.0),
            c(3.0, 0.0),
        ])])
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let spec = simultaneous_diagonalize(&tuple, &mut rng, &tol()).unwrap();
        let w = overlap_matrix(&spec, &spec).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((w.get(i, j) - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn overlap_of_rotated_basis() {
        // v-basis rotated 45 degrees from u-basis: all overlaps are 1/2
        let a =
            MatrixTuple::new(vec![ComplexMatrix::diagonal(&[c(1.0, 0.0), c(2.0, 0.0)])]).unwrap();
        let r = std::f64::consts::FRAC_PI_4;
        let rot = ComplexMatrix::from_real_rows(&[vec![r.cos(), -r.sin()], vec![r.sin(), r.cos()]])
            .unwrap();
        let d = ComplexMatrix::diagonal(&[c(1.0, 0.0), c(2.0, 0.0)]);
        let b = MatrixTuple::new(vec![&(&rot * &d) * &rot.adjoint()]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let sa = simultaneous_diagonalize(&a, &mut rng, &tol()).unwrap();
        let sb = simultaneous_diagonalize(&b, &mut rng, &tol()).unwrap();
        let w = overlap_matrix(&sa, &sb).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((w.get(i, j) - 0.5).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn overlap_rejects_general_kind() {
        let a = ComplexMatrix::from_real_rows(&[vec![1.0, 1.0], vec![0.0, 2.0]]).unwrap();
        let tuple = MatrixTuple::new(vec![a]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let general = diagonalize_general(&tuple, &mut rng, &tol()).unwrap();
        let normal_tuple =
            MatrixTuple::new(vec![ComplexMatrix::diagonal(&[c(1.0, 0.0), c(2.0, 0.0)])]).unwrap();
        let unitary = simultaneous_diagonalize(&normal_tuple, &mut rng, &tol()).unwrap();
        assert!(matches!(
            overlap_matrix(&unitary, &general),
            Err(Error::KindMismatch)
        ));
    }
}
