//! Doubly stochastic overlap matrices and their Birkhoff decomposition into
//! convex combinations of permutation matrices.
//!
//! Decomposition is greedy: find a permutation supported on strictly positive
//! entries (perfect matching on the positivity graph), subtract the smallest
//! entry along it, repeat until the residue mass is negligible. A
//! Caratheodory pruning pass then eliminates affinely dependent terms so the
//! term count never exceeds (n-1)² + 1.

use crate::error::{Error, Result};
use crate::factor;
use crate::matrix::ComplexMatrix;
use num_complex::Complex64;

/// Row/column sums may deviate from 1 by at most this much.
pub const DS_TOLERANCE: f64 = 1e-8;

/// Entries below this are treated as zero in the matching graph.
pub const POSITIVITY_CUTOFF: f64 = 1e-10;

/// Terminal residue mass below which the greedy loop stops.
pub const RESIDUE_CUTOFF: f64 = 1e-8;

/// A doubly stochastic matrix, typically w_ij = trace(P_i Q_j).
#[derive(Debug, Clone)]
pub struct OverlapMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl OverlapMatrix {
    /// Validates double stochasticity: row and column sums within 1e-8 of 1,
    /// entries within [-1e-10, 1 + 1e-10].
    pub fn new(n: usize, entries: Vec<f64>) -> Result<Self> {
        if n == 0 || entries.len() != n * n {
            return Err(Error::dims("overlap matrix entries must be n*n"));
        }
        let mut deviation = 0.0f64;
        for e in &entries {
            if *e < -POSITIVITY_CUTOFF || *e > 1.0 + POSITIVITY_CUTOFF {
                return Err(Error::NotDoublyStochastic {
                    deviation: e.abs().max((e - 1.0).abs()),
                });
            }
        }
        for i in 0..n {
            let row: f64 = (0..n).map(|j| entries[i * n + j]).sum();
            let col: f64 = (0..n).map(|j| entries[j * n + i]).sum();
            deviation = deviation.max((row - 1.0).abs()).max((col - 1.0).abs());
        }
        if deviation > DS_TOLERANCE {
            return Err(Error::NotDoublyStochastic { deviation });
        }
        Ok(Self { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }
}

/// One term of a Birkhoff decomposition: a positive weight and a permutation
/// (row j is matched to column `permutation[j]`).
#[derive(Debug, Clone)]
pub struct BirkhoffTerm {
    pub weight: f64,
    pub permutation: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct BirkhoffDecomposition {
    n: usize,
    terms: Vec<BirkhoffTerm>,
}

impl BirkhoffDecomposition {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[BirkhoffTerm] {
        &self.terms
    }

    pub fn weight_sum(&self) -> f64 {
        self.terms.iter().map(|t| t.weight).sum()
    }

    /// Σ t_s P_{π_s} as a dense matrix.
    pub fn reconstruct(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.n * self.n];
        for term in &self.terms {
            for (row, &col) in term.permutation.iter().enumerate() {
                out[row * self.n + col] += term.weight;
            }
        }
        out
    }

    /// Max entrywise deviation of the reconstruction from `w`.
    pub fn reconstruction_error(&self, w: &OverlapMatrix) -> f64 {
        self.reconstruct()
            .iter()
            .zip(w.entries())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Kuhn's augmenting-path perfect matching on the bipartite positivity graph.
/// `adjacency[i]` lists the columns available to row i.
fn perfect_matching(adjacency: &[Vec<usize>]) -> Option<Vec<usize>> {
    let n = adjacency.len();
    let mut match_of_col = vec![usize::MAX; n];

    fn augment(
        row: usize,
        adjacency: &[Vec<usize>],
        visited: &mut [bool],
        match_of_col: &mut [usize],
    ) -> bool {
        for &col in &adjacency[row] {
            if visited[col] {
                continue;
            }
            visited[col] = true;
            if match_of_col[col] == usize::MAX
                || augment(match_of_col[col], adjacency, visited, match_of_col)
            {
                match_of_col[col] = row;
                return true;
            }
        }
        false
    }

    for row in 0..n {
        let mut visited = vec![false; n];
        if !augment(row, adjacency, &mut visited, &mut match_of_col) {
            return None;
        }
    }
    let mut match_of_row = vec![0usize; n];
    for (col, &row) in match_of_col.iter().enumerate() {
        match_of_row[row] = col;
    }
    Some(match_of_row)
}

/// Greedy Birkhoff decomposition with Caratheodory pruning.
pub fn birkhoff_decompose(w: &OverlapMatrix) -> Result<BirkhoffDecomposition> {
    let n = w.n();
    let mut residue = w.entries().to_vec();
    let mut remaining = 1.0f64;
    let mut terms: Vec<BirkhoffTerm> = Vec::new();
    let max_iterations = n * n + 2;

    while remaining > RESIDUE_CUTOFF {
        if terms.len() >= max_iterations {
            return Err(Error::MatchingNotFound);
        }
        let adjacency: Vec<Vec<usize>> = (0..n)
            .map(|i| {
                (0..n)
                    .filter(|&j| residue[i * n + j] > POSITIVITY_CUTOFF)
                    .collect()
            })
            .collect();
        let permutation = perfect_matching(&adjacency).ok_or(Error::MatchingNotFound)?;
        let weight = permutation
            .iter()
            .enumerate()
            .map(|(i, &j)| residue[i * n + j])
            .fold(f64::INFINITY, f64::min);
        for (i, &j) in permutation.iter().enumerate() {
            residue[i * n + j] -= weight;
        }
        remaining -= weight;
        terms.push(BirkhoffTerm {
            weight,
            permutation,
        });
    }

    let max_terms = (n - 1) * (n - 1) + 1;
    while terms.len() > max_terms {
        prune_one_term(n, &mut terms)?;
    }

    Ok(BirkhoffDecomposition { n, terms })
}

/// Removes at least one term by sliding along an affine dependence between
/// the permutation matrices. Such a dependence always exists once the term
/// count exceeds the affine dimension (n-1)² + 1 of the Birkhoff polytope.
fn prune_one_term(n: usize, terms: &mut Vec<BirkhoffTerm>) -> Result<()> {
    let count = terms.len();
    let rows = n * n + 1;
    // columns are [vec(P_s); 1]; a right null vector is an affine dependence
    let matrix = ComplexMatrix::from_fn(rows, count, |i, s| {
        if i < n * n {
            let (r, c) = (i / n, i % n);
            if terms[s].permutation[r] == c {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        } else {
            Complex64::new(1.0, 0.0)
        }
    });
    let (_, _, vt) = factor::svd_decompose(&matrix)?;
    let mut dependence: Vec<f64> = (0..count).map(|s| vt.get(count - 1, s).re).collect();
    let scale = dependence.iter().map(|x| x.abs()).fold(0.0, f64::max);
    if scale <= 0.0 {
        return Err(Error::MatchingNotFound);
    }
    for d in &mut dependence {
        *d /= scale;
    }
    if !dependence.iter().any(|&d| d > 0.0) {
        for d in &mut dependence {
            *d = -*d;
        }
    }
    let (drop_index, theta) = dependence
        .iter()
        .enumerate()
        .filter(|(_, &d)| d > 1e-14)
        .map(|(s, &d)| (s, terms[s].weight / d))
        .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        .ok_or(Error::MatchingNotFound)?;
    for (term, &d) in terms.iter_mut().zip(&dependence) {
        term.weight -= theta * d;
    }
    terms[drop_index].weight = 0.0;
    terms.retain(|t| t.weight > 1e-14);
    Ok(())
}
