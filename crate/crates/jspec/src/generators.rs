//! Deterministic, seeded constructors for commuting tuples, structured
//! perturbations, and the extremal shift pair.
//!
//! Randomness comes from ChaCha8 (`ChaCha8Rng::seed_from_u64(seed)`), with a
//! fixed stream id per operation so independent operations on the same seed
//! draw independent, reproducible sequences. All generation is pure Rust
//! arithmetic, so outputs are bit-identical across runs and platforms.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::tuple::MatrixTuple;

const STREAM_NORMAL_TUPLE: u64 = 1;
const STREAM_DIAGONALIZABLE_TUPLE: u64 = 2;
const STREAM_PERTURB_NORMAL: u64 = 3;
const STREAM_PERTURB_ARBITRARY: u64 = 4;

/// Configuration for the seeded generators.
#[derive(Debug, Clone, Copy)]
pub struct GeneratorConfig {
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    /// Eigenvalues are resampled until their modulus reaches this floor.
    pub eigenvalue_min_modulus: f64,
    /// Eigenvalues are drawn in the complex square [-box, box]².
    pub eigenvalue_box: f64,
    pub perturbation_scale: f64,
    /// Condition-number cap for the diagonalizable transform.
    pub max_condition: f64,
}

impl GeneratorConfig {
    pub fn new(n: usize, m: usize, seed: u64) -> Self {
        Self {
            n,
            m,
            seed,
            eigenvalue_min_modulus: 0.1,
            eigenvalue_box: 2.0,
            perturbation_scale: 0.0,
            max_condition: 1e3,
        }
    }

    // negated comparisons so NaN parameters fail validation
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.m == 0 {
            return Err(Error::InvalidArgument(
                "n and m must be positive".to_string(),
            ));
        }
        if !(self.eigenvalue_min_modulus > 0.0)
            || !(self.eigenvalue_box > self.eigenvalue_min_modulus)
        {
            return Err(Error::InvalidArgument(
                "eigenvalue_min_modulus must be positive and below eigenvalue_box".to_string(),
            ));
        }
        if !(self.perturbation_scale >= 0.0) || !(self.max_condition >= 1.0) {
            return Err(Error::InvalidArgument(
                "perturbation_scale must be nonnegative and max_condition at least 1".to_string(),
            ));
        }
        Ok(())
    }

    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }
}

/// Class of perturbation applied by [`perturb_within_class`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PerturbationClass {
    /// Rotate the carried eigenbasis by exp(scale·K) for random
    /// skew-Hermitian K of unit Frobenius norm, and shift the diagonals.
    Normal,
    /// Conjugate a commuting upper-triangular family to the carried basis:
    /// (I + scale·R)·(D + δ)·(I + scale·R)⁻¹ with R strictly upper. The
    /// result commutes exactly and is non-normal for positive scale.
    ArbitraryCommuting,
}

/// A generated tuple together with the basis and diagonals that produced it,
/// so structured perturbations can reuse the eigenstructure.
#[derive(Debug, Clone)]
pub struct GeneratedTuple {
    pub tuple: MatrixTuple,
    pub basis: ComplexMatrix,
    /// Row k holds the n diagonal eigenvalues of member k.
    pub diagonals: Vec<Vec<Complex64>>,
    pub basis_unitary: bool,
}

fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller keeps the generators free of external sampling crates
    loop {
        let u1: f64 = rng.gen_range(0.0..1.0);
        let u2: f64 = rng.gen_range(0.0..1.0);
        if u1 > 1e-300 {
            return (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos();
        }
    }
}

fn gaussian_complex_matrix(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let entries: Vec<Complex64> = (0..n * n)
        .map(|_| Complex64::new(standard_normal(rng), standard_normal(rng)))
        .collect();
    ComplexMatrix::new(n, n, entries).expect("gaussian entries are finite")
}

/// Orthonormalization of a random complex Gaussian matrix (modified
/// Gram-Schmidt with one re-orthogonalization pass).
pub fn random_unitary(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    loop {
        let g = gaussian_complex_matrix(n, rng);
        let mut columns: Vec<Vec<Complex64>> = (0..n).map(|j| g.column(j)).collect();
        let mut ok = true;
        for j in 0..n {
            for _ in 0..2 {
                for i in 0..j {
                    let proj: Complex64 = columns[i]
                        .iter()
                        .zip(&columns[j])
                        .map(|(b, v)| b.conj() * v)
                        .sum();
                    for r in 0..n {
                        let sub = proj * columns[i][r];
                        columns[j][r] -= sub;
                    }
                }
            }
            let norm: f64 = columns[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-8 {
                ok = false;
                break;
            }
            for z in &mut columns[j] {
                *z /= norm;
            }
        }
        if ok {
            return ComplexMatrix::from_fn(n, n, |i, j| columns[j][i]);
        }
    }
}

fn sample_eigenvalue(rng: &mut ChaCha8Rng, min_modulus: f64, bound: f64) -> Complex64 {
    loop {
        let z = Complex64::new(rng.gen_range(-bound..bound), rng.gen_range(-bound..bound));
        if z.norm() >= min_modulus {
            return z;
        }
    }
}

fn sample_diagonals(cfg: &GeneratorConfig, rng: &mut ChaCha8Rng) -> Vec<Vec<Complex64>> {
    (0..cfg.m)
        .map(|_| {
            (0..cfg.n)
                .map(|_| sample_eigenvalue(rng, cfg.eigenvalue_min_modulus, cfg.eigenvalue_box))
                .collect()
        })
        .collect()
}

fn assemble(
    basis: &ComplexMatrix,
    basis_inverse: &ComplexMatrix,
    diag: &[Complex64],
) -> ComplexMatrix {
    &(basis * &ComplexMatrix::diagonal(diag)) * basis_inverse
}

/// Random commuting normal tuple: A^(k) = U D^(k) U* for a shared random
/// unitary U and nonsingular random diagonals.
pub fn random_commuting_normal_tuple(cfg: &GeneratorConfig) -> Result<GeneratedTuple> {
    cfg.validate()?;
    let mut rng = cfg.rng(STREAM_NORMAL_TUPLE);
    let basis = random_unitary(cfg.n, &mut rng);
    let diagonals = sample_diagonals(cfg, &mut rng);
    let adjoint = basis.adjoint();
    let members: Vec<ComplexMatrix> = diagonals
        .iter()
        .map(|d| assemble(&basis, &adjoint, d))
        .collect();
    Ok(GeneratedTuple {
        tuple: MatrixTuple::new(members)?,
        basis,
        diagonals,
        basis_unitary: true,
    })
}

/// Random commuting diagonalizable tuple: A^(k) = S D^(k) S⁻¹ with
/// S = U₁ diag(σ) U₂* for random unitaries and σ drawn in [1, max_condition],
/// so cond(S) ≤ max_condition by construction. The transform is returned as
/// the carried basis.
pub fn random_commuting_diagonalizable_tuple(cfg: &GeneratorConfig) -> Result<GeneratedTuple> {
    cfg.validate()?;
    let mut rng = cfg.rng(STREAM_DIAGONALIZABLE_TUPLE);
    let u1 = random_unitary(cfg.n, &mut rng);
    let u2 = random_unitary(cfg.n, &mut rng);
    let sigmas: Vec<f64> = (0..cfg.n)
        .map(|_| rng.gen_range(1.0..cfg.max_condition.max(1.0 + f64::EPSILON)))
        .collect();
    let sigma: Vec<Complex64> = sigmas.iter().map(|&s| Complex64::new(s, 0.0)).collect();
    let sigma_inv: Vec<Complex64> = sigmas
        .iter()
        .map(|&s| Complex64::new(1.0 / s, 0.0))
        .collect();
    let basis = &(&u1 * &ComplexMatrix::diagonal(&sigma)) * &u2.adjoint();
    let basis_inverse = &(&u2 * &ComplexMatrix::diagonal(&sigma_inv)) * &u1.adjoint();

    let diagonals = sample_diagonals(cfg, &mut rng);
    let members: Vec<ComplexMatrix> = diagonals
        .iter()
        .map(|d| assemble(&basis, &basis_inverse, d))
        .collect();
    Ok(GeneratedTuple {
        tuple: MatrixTuple::new(members)?,
        basis,
        diagonals,
        basis_unitary: false,
    })
}

/// Matrix exponential by scaling-and-squaring with a Taylor tail. Intended
/// for the small-norm rotations used by the perturbation generator.
fn matrix_exponential(a: &ComplexMatrix) -> ComplexMatrix {
    let n = a.n_rows();
    let norm = a.frobenius_norm();
    let squarings = if norm > 0.25 {
        (norm / 0.25).log2().ceil().max(0.0) as u32
    } else {
        0
    };
    let scaled = a.scale(Complex64::new((0.5f64).powi(squarings as i32), 0.0));
    let mut result = ComplexMatrix::identity(n);
    let mut term = ComplexMatrix::identity(n);
    for k in 1..=40 {
        term = &term * &scaled;
        term = term.scale(Complex64::new(1.0 / k as f64, 0.0));
        result = &result + &term;
        if term.frobenius_norm() < 1e-18 * result.frobenius_norm().max(1.0) {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

fn diagonal_shift(cfg: &GeneratorConfig, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let half = cfg.perturbation_scale / 2f64.sqrt();
    (0..cfg.n)
        .map(|_| {
            if half == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(rng.gen_range(-half..half), rng.gen_range(-half..half))
            }
        })
        .collect()
}

/// Structured perturbation of a generated tuple. The result carries its own
/// basis and diagonals, so perturbations can be chained.
pub fn perturb_within_class(
    source: &GeneratedTuple,
    cfg: &GeneratorConfig,
    class: PerturbationClass,
) -> Result<GeneratedTuple> {
    cfg.validate()?;
    let n = source.tuple.n();
    if cfg.n != n || cfg.m != source.tuple.m() {
        return Err(Error::dims("config dimensions must match the source tuple"));
    }
    let scale = cfg.perturbation_scale;
    let stream = match class {
        PerturbationClass::Normal => STREAM_PERTURB_NORMAL,
        PerturbationClass::ArbitraryCommuting => STREAM_PERTURB_ARBITRARY,
    };
    let mut rng = cfg.rng(stream);

    let (basis, basis_inverse, unitary) = match class {
        PerturbationClass::Normal => {
            let g = gaussian_complex_matrix(n, &mut rng);
            let mut skew =
                &g.scale(Complex64::new(0.5, 0.0)) - &g.adjoint().scale(Complex64::new(0.5, 0.0));
            let norm = skew.frobenius_norm();
            if norm > 0.0 {
                skew = skew.scale(Complex64::new(1.0 / norm, 0.0));
            }
            let rotation = matrix_exponential(&skew.scale(Complex64::new(scale, 0.0)));
            let basis = &source.basis * &rotation;
            if source.basis_unitary {
                let inverse = basis.adjoint();
                (basis, inverse, true)
            } else {
                let inverse = basis.inverse()?;
                (basis, inverse, false)
            }
        }
        PerturbationClass::ArbitraryCommuting => {
            let g = gaussian_complex_matrix(n, &mut rng);
            let mut strict_upper = ComplexMatrix::from_fn(n, n, |i, j| {
                if j > i {
                    g.get(i, j)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            });
            let norm = strict_upper.frobenius_norm();
            if norm > 0.0 {
                strict_upper = strict_upper.scale(Complex64::new(scale / norm, 0.0));
            }
            let shear = &ComplexMatrix::identity(n) + &strict_upper;
            let basis = &source.basis * &shear;
            let inverse = basis.inverse()?;
            (basis, inverse, false)
        }
    };

    let diagonals: Vec<Vec<Complex64>> = source
        .diagonals
        .iter()
        .map(|d| {
            let shift = diagonal_shift(cfg, &mut rng);
            d.iter().zip(shift).map(|(z, s)| z + s).collect()
        })
        .collect();
    let members: Vec<ComplexMatrix> = diagonals
        .iter()
        .map(|d| assemble(&basis, &basis_inverse, d))
        .collect();
    Ok(GeneratedTuple {
        tuple: MatrixTuple::new(members)?,
        basis,
        diagonals,
        basis_unitary: unitary,
    })
}

/// The extremal pair attaining the dimension factor of the remark bound:
/// A^(k) = k·C_n (cyclic shift: superdiagonal ones plus a one at position
/// (n, 1)) and B^(k) = k·N_n (superdiagonal only), k = 1..m.
pub fn extremal_shift_example(n: usize, m: usize) -> Result<(MatrixTuple, MatrixTuple)> {
    if n < 2 {
        return Err(Error::InvalidArgument(
            "the extremal example requires n >= 2".to_string(),
        ));
    }
    if m == 0 {
        return Err(Error::InvalidArgument("m must be positive".to_string()));
    }
    let circulant = |k: f64| {
        ComplexMatrix::from_fn(n, n, |i, j| {
            if j == i + 1 || (i == n - 1 && j == 0) {
                Complex64::new(k, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    };
    let nilpotent = |k: f64| {
        ComplexMatrix::from_fn(n, n, |i, j| {
            if j == i + 1 {
                Complex64::new(k, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    };
    let a = MatrixTuple::new((1..=m).map(|k| circulant(k as f64)).collect())?;
    let b = MatrixTuple::new((1..=m).map(|k| nilpotent(k as f64)).collect())?;
    Ok((a, b))
}
