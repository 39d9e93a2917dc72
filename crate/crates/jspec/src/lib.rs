//! Joint spectra of commuting matrix tuples and certified relative
//! perturbation bounds.
//!
//! The library computes joint eigenvalues of commuting tuples of n×n complex
//! matrices (by simultaneous unitary diagonalization for normal tuples, by a
//! general similarity for diagonalizable ones, and by common unitary
//! triangularization for arbitrary commuting tuples), builds the Clifford
//! operator of a tuple on C^n ⊗ R_(m) together with its norm and trace
//! identities, and certifies three Hoffman-Wielandt-type relative bounds on
//! how much a perturbation can move the joint spectrum:
//!
//! - the normal bound Σ|((α−β)/α)|² ≤ Σ ‖A⁻¹E‖_F² for commuting normal
//!   tuples with nonsingular A,
//! - the dimension-factor bound n·Σ ‖A⁻¹‖²‖E‖_F² when the perturbed tuple is
//!   merely commuting, attained exactly by the extremal shift pair,
//! - the diagonalizable bound with the squared condition numbers of the two
//!   diagonalizing transforms.
//!
//! Supporting machinery: spectral-projector overlap matrices (doubly
//! stochastic), their Birkhoff decomposition into permutation matrices, an
//! O(n³) optimal assignment solver for the eigenvalue matching, and seeded
//! deterministic generators for test ensembles. The `jspec` binary exposes
//! the whole pipeline over JSON tuple files.

pub mod assignment;
pub mod birkhoff;
pub mod bounds;
pub mod clifford;
pub mod error;
pub mod factor;
pub mod generators;
pub mod io;
pub mod matrix;
pub mod spectrum;
pub mod tuple;

pub use bounds::{verify_bound, BoundKind, BoundReport};
pub use error::{Error, Result};
pub use matrix::ComplexMatrix;
pub use spectrum::{diagonalize_general, simultaneous_diagonalize, JointSpectrum, TransformKind};
pub use tuple::{check_hypotheses, HypothesisReport, MatrixTuple, Tolerances};
