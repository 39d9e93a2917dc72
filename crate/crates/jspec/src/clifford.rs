//! The real Clifford algebra on m anticommuting generators (e_i e_j = -e_j e_i
//! for i ≠ j, e_i² = -1), its 2^m basis blades, and operators/vectors on the
//! tensor space C^n ⊗ R_(m).
//!
//! Blades are bitmasks: generator j (1-based) corresponds to bit j-1, and the
//! empty mask is the unit e_φ. Products are XOR plus a popcount-based sign
//! from normal ordering. Operators and vectors store only nonzero blocks.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::tuple::MatrixTuple;

/// Default cap on the materialized dimension 2^m · n.
pub const DEFAULT_MATERIALIZE_LIMIT: usize = 4096;

const MAX_GENERATORS: u32 = 30;

/// A basis blade e_S, encoded as a bitmask over generator positions 1..m.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisBlade {
    mask: u64,
    m: u32,
}

impl BasisBlade {
    pub fn new(mask: u64, m: u32) -> Result<Self> {
        if m > MAX_GENERATORS || mask >= (1u64 << m) {
            return Err(Error::InvalidBlade { mask, m });
        }
        Ok(Self { mask, m })
    }

    /// The unit blade e_φ.
    pub fn empty(m: u32) -> Self {
        Self { mask: 0, m }
    }

    /// The singleton blade e_j for a 1-based generator index.
    pub fn generator(j: u32, m: u32) -> Result<Self> {
        if j == 0 || j > m {
            return Err(Error::InvalidBlade {
                mask: 1u64 << (j.max(1) - 1),
                m,
            });
        }
        Self::new(1u64 << (j - 1), m)
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn generator_count(&self) -> u32 {
        self.m
    }

    /// Number of generators in the blade, |S|.
    pub fn grade(&self) -> u32 {
        self.mask.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }
}

impl std::fmt::Display for BasisBlade {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.mask == 0 {
            return write!(f, "e_phi");
        }
        write!(f, "e_{{")?;
        for j in 0..self.m {
            if self.mask & (1 << j) != 0 {
                write!(f, "{}", j + 1)?;
            }
        }
        write!(f, "}}")
    }
}

/// Number of generator transpositions needed to interleave the sorted
/// generator sequences of `s` past those of `t`: |{(i, j) ∈ S×T : i > j}|.
fn swap_count(s: u64, t: u64) -> u32 {
    let mut shifted = s >> 1;
    let mut total = 0;
    while shifted != 0 {
        total += (shifted & t).count_ones();
        shifted >>= 1;
    }
    total
}

/// Product of two basis blades: `e_S e_T = sign · e_{S xor T}`.
///
/// The sign counts the transpositions that sort the concatenated generator
/// sequence, plus one factor -1 per repeated generator (e_i² = -1).
pub fn blade_product(s: BasisBlade, t: BasisBlade) -> Result<(i32, BasisBlade)> {
    if s.m != t.m {
        return Err(Error::GeneratorCountMismatch {
            left: s.m,
            right: t.m,
        });
    }
    let parity = swap_count(s.mask, t.mask) + (s.mask & t.mask).count_ones();
    let sign = if parity % 2 == 0 { 1 } else { -1 };
    Ok((
        sign,
        BasisBlade {
            mask: s.mask ^ t.mask,
            m: s.m,
        },
    ))
}

/// An element of the Clifford algebra: real coefficients over basis blades.
#[derive(Debug, Clone, PartialEq)]
pub struct CliffordElement {
    m: u32,
    coeffs: BTreeMap<u64, f64>,
}

impl CliffordElement {
    pub fn new(m: u32, coeffs: impl IntoIterator<Item = (BasisBlade, f64)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (blade, value) in coeffs {
            if blade.m != m {
                return Err(Error::GeneratorCountMismatch {
                    left: blade.m,
                    right: m,
                });
            }
            if value != 0.0 {
                *map.entry(blade.mask).or_insert(0.0) += value;
            }
        }
        Ok(Self { m, coeffs: map })
    }

    pub fn generator_count(&self) -> u32 {
        self.m
    }

    pub fn coefficient(&self, blade: BasisBlade) -> f64 {
        self.coeffs.get(&blade.mask).copied().unwrap_or(0.0)
    }
}

/// Σ_S α_S β_S over the shared orthonormal blade basis.
pub fn element_inner_product(a: &CliffordElement, b: &CliffordElement) -> Result<f64> {
    if a.m != b.m {
        return Err(Error::GeneratorCountMismatch {
            left: a.m,
            right: b.m,
        });
    }
    Ok(a.coeffs
        .iter()
        .filter_map(|(mask, &va)| b.coeffs.get(mask).map(|&vb| va * vb))
        .sum())
}

/// A vector in C^n ⊗ R_(m): complex n-vectors indexed by blades.
#[derive(Debug, Clone)]
pub struct CliffordVector {
    n: usize,
    m: u32,
    components: BTreeMap<u64, Vec<Complex64>>,
}

impl CliffordVector {
    pub fn new(
        n: usize,
        m: u32,
        components: impl IntoIterator<Item = (BasisBlade, Vec<Complex64>)>,
    ) -> Result<Self> {
        let mut map: BTreeMap<u64, Vec<Complex64>> = BTreeMap::new();
        for (blade, vector) in components {
            if blade.m != m {
                return Err(Error::GeneratorCountMismatch {
                    left: blade.m,
                    right: m,
                });
            }
            if vector.len() != n {
                return Err(Error::dims(format!(
                    "component at {blade} has length {}, expected {n}",
                    vector.len()
                )));
            }
            let slot = map
                .entry(blade.mask)
                .or_insert_with(|| vec![Complex64::new(0.0, 0.0); n]);
            for (dst, src) in slot.iter_mut().zip(&vector) {
                *dst += src;
            }
        }
        Ok(Self {
            n,
            m,
            components: map,
        })
    }

    pub fn zero(n: usize, m: u32) -> Self {
        Self {
            n,
            m,
            components: BTreeMap::new(),
        }
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn generator_count(&self) -> u32 {
        self.m
    }

    pub fn component(&self, blade: BasisBlade) -> Vec<Complex64> {
        self.components
            .get(&blade.mask)
            .cloned()
            .unwrap_or_else(|| vec![Complex64::new(0.0, 0.0); self.n])
    }

    /// ‖x‖ = sqrt(Σ_S ‖x_S‖²).
    pub fn norm(&self) -> f64 {
        self.components
            .values()
            .flat_map(|v| v.iter().map(|z| z.norm_sqr()))
            .sum::<f64>()
            .sqrt()
    }

    /// Flattens into the materialization basis: blade-major by increasing
    /// mask, n vector entries per blade.
    pub fn to_dense(&self) -> Vec<Complex64> {
        let blades = 1usize << self.m;
        let mut out = vec![Complex64::new(0.0, 0.0); blades * self.n];
        for (&mask, vector) in &self.components {
            let base = mask as usize * self.n;
            out[base..base + self.n].copy_from_slice(vector);
        }
        out
    }
}

/// An operator on C^n ⊗ R_(m): n×n blocks indexed by blades.
#[derive(Debug, Clone)]
pub struct CliffordOperator {
    n: usize,
    m: u32,
    blocks: BTreeMap<u64, ComplexMatrix>,
}

impl CliffordOperator {
    pub fn new(
        n: usize,
        m: u32,
        blocks: impl IntoIterator<Item = (BasisBlade, ComplexMatrix)>,
    ) -> Result<Self> {
        let mut map: BTreeMap<u64, ComplexMatrix> = BTreeMap::new();
        for (blade, block) in blocks {
            if blade.m != m {
                return Err(Error::GeneratorCountMismatch {
                    left: blade.m,
                    right: m,
                });
            }
            if block.n_rows() != n || block.n_cols() != n {
                return Err(Error::dims(format!(
                    "block at {blade} is {}x{}, expected {n}x{n}",
                    block.n_rows(),
                    block.n_cols()
                )));
            }
            match map.entry(blade.mask) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(block);
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    let sum = e.get() + &block;
                    e.insert(sum);
                }
            }
        }
        Ok(Self { n, m, blocks: map })
    }

    pub fn zero(n: usize, m: u32) -> Self {
        Self {
            n,
            m,
            blocks: BTreeMap::new(),
        }
    }

    /// Single-block operator `P ⊗ e_T`.
    pub fn single_block(blade: BasisBlade, block: ComplexMatrix) -> Result<Self> {
        let n = block.n_rows();
        Self::new(n, blade.m, [(blade, block)])
    }

    /// The Clifford operator of a matrix tuple: `i Σ_j A^(j) ⊗ e_j`, with one
    /// block per singleton blade.
    pub fn from_tuple(tuple: &MatrixTuple) -> Self {
        let n = tuple.n();
        let m = tuple.m() as u32;
        let i = Complex64::new(0.0, 1.0);
        let mut blocks = BTreeMap::new();
        for (k, a) in tuple.members().iter().enumerate() {
            let block = a.scale(i);
            if block.frobenius_norm() > 0.0 {
                blocks.insert(1u64 << k, block);
            }
        }
        Self { n, m, blocks }
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn generator_count(&self) -> u32 {
        self.m
    }

    pub fn block(&self, blade: BasisBlade) -> Option<&ComplexMatrix> {
        self.blocks.get(&blade.mask)
    }

    pub fn blocks(&self) -> impl Iterator<Item = (BasisBlade, &ComplexMatrix)> {
        self.blocks
            .iter()
            .map(|(&mask, block)| (BasisBlade { mask, m: self.m }, block))
    }

    /// Applies the operator: the component at blade R accumulates
    /// `sign(S, T) · A_S x_T` over all S, T with S xor T = R.
    pub fn apply(&self, x: &CliffordVector) -> Result<CliffordVector> {
        if self.m != x.m {
            return Err(Error::GeneratorCountMismatch {
                left: self.m,
                right: x.m,
            });
        }
        if self.n != x.n {
            return Err(Error::dims(format!(
                "operator dimension {} does not match vector dimension {}",
                self.n, x.n
            )));
        }
        let mut components: BTreeMap<u64, Vec<Complex64>> = BTreeMap::new();
        for (&s_mask, block) in &self.blocks {
            let s = BasisBlade {
                mask: s_mask,
                m: self.m,
            };
            for (&t_mask, vector) in &x.components {
                let t = BasisBlade {
                    mask: t_mask,
                    m: self.m,
                };
                let (sign, r) = blade_product(s, t).expect("same generator count");
                let image = block.apply(vector);
                let slot = components
                    .entry(r.mask)
                    .or_insert_with(|| vec![Complex64::new(0.0, 0.0); self.n]);
                let factor = Complex64::new(sign as f64, 0.0);
                for (dst, z) in slot.iter_mut().zip(image) {
                    *dst += factor * z;
                }
            }
        }
        Ok(CliffordVector {
            n: self.n,
            m: self.m,
            components,
        })
    }

    /// The (2^m·n)×(2^m·n) matrix of the operator in the orthonormal basis
    /// {standard basis of C^n} ⊗ {e_S in increasing mask order}, blade-major.
    pub fn materialize(&self, limit: usize) -> Result<ComplexMatrix> {
        let blades = 1usize << self.m;
        let size = blades * self.n;
        if size > limit {
            return Err(Error::CapacityExceeded {
                required: size,
                limit,
            });
        }
        let mut out = ComplexMatrix::zeros(size, size);
        for (&s_mask, block) in &self.blocks {
            let s = BasisBlade {
                mask: s_mask,
                m: self.m,
            };
            for t_mask in 0..blades as u64 {
                let t = BasisBlade {
                    mask: t_mask,
                    m: self.m,
                };
                let (sign, r) = blade_product(s, t).expect("same generator count");
                let row_base = r.mask as usize * self.n;
                let col_base = t_mask as usize * self.n;
                let factor = Complex64::new(sign as f64, 0.0);
                for i in 0..self.n {
                    for j in 0..self.n {
                        let v = factor * block.get(i, j);
                        if v != Complex64::new(0.0, 0.0) {
                            out.set(row_base + i, col_base + j, v);
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Frobenius norm through the materialized-matrix oracle.
    pub fn frobenius_norm_materialized(&self, limit: usize) -> Result<f64> {
        Ok(self.materialize(limit)?.frobenius_norm())
    }

    /// Frobenius norm through the structured identity
    /// `‖A‖_F² = 2^m Σ_S ‖A_S‖_F²`.
    pub fn frobenius_norm_structured(&self) -> f64 {
        let blades = (1u64 << self.m) as f64;
        (blades
            * self
                .blocks
                .values()
                .map(|b| b.frobenius_norm().powi(2))
                .sum::<f64>())
        .sqrt()
    }

    /// Trace through the structured identity: `2^m · trace(A_φ)`; blocks at
    /// non-empty blades contribute nothing.
    pub fn trace(&self) -> Complex64 {
        let blades = (1u64 << self.m) as f64;
        match self.blocks.get(&0) {
            Some(block) => block.trace() * Complex64::new(blades, 0.0),
            None => Complex64::new(0.0, 0.0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn blade(mask: u64, m: u32) -> BasisBlade {
        BasisBlade::new(mask, m).unwrap()
    }

    #[test]
    fn blade_product_examples() {
        let m = 2;
        let e1 = BasisBlade::generator(1, m).unwrap();
        let e2 = BasisBlade::generator(2, m).unwrap();

        let (sign, result) = blade_product(e1, e2).unwrap();
        assert_eq!((sign, result.mask()), (1, 0b11));

        let (sign, result) = blade_product(e1, e1).unwrap();
        assert_eq!((sign, result.mask()), (-1, 0));

        let (sign, result) = blade_product(e2, e1).unwrap();
        assert_eq!((sign, result.mask()), (-1, 0b11));

        let e1_m3 = BasisBlade::generator(1, 3).unwrap();
        assert!(blade_product(e1, e1_m3).is_err());
    }

    #[test]
    fn blade_product_associative_exhaustive() {
        for m in 1..=6u32 {
            let blades = 1u64 << m;
            for s in 0..blades {
                for t in 0..blades {
                    for r in 0..blades {
                        let (sign_st, st) = blade_product(blade(s, m), blade(t, m)).unwrap();
                        let (sign_left, left) = blade_product(st, blade(r, m)).unwrap();
                        let (sign_tr, tr) = blade_product(blade(t, m), blade(r, m)).unwrap();
                        let (sign_right, right) = blade_product(blade(s, m), tr).unwrap();
                        assert_eq!(left, right);
                        assert_eq!(sign_st * sign_left, sign_tr * sign_right);
                    }
                }
            }
        }
    }

    #[test]
    fn blade_square_sign_involution() {
        for m in 1..=6u32 {
            for s in 0..(1u64 << m) {
                let b = blade(s, m);
                let (sign, result) = blade_product(b, b).unwrap();
                let k = b.grade();
                let expected = if (k * (k + 1) / 2) % 2 == 0 { 1 } else { -1 };
                assert_eq!(sign, expected, "mask {s:#b}, m {m}");
                assert!(result.is_empty());
            }
        }
    }

    #[test]
    fn element_inner_product_examples() {
        let m = 2;
        let e1 = CliffordElement::new(m, [(BasisBlade::generator(1, m).unwrap(), 1.0)]).unwrap();
        let e2 = CliffordElement::new(m, [(BasisBlade::generator(2, m).unwrap(), 1.0)]).unwrap();
        assert_eq!(element_inner_product(&e1, &e1).unwrap(), 1.0);
        assert_eq!(element_inner_product(&e1, &e2).unwrap(), 0.0);

        let a =
            CliffordElement::new(m, [(BasisBlade::empty(m), 2.0), (blade(0b11, m), 3.0)]).unwrap();
        let b =
            CliffordElement::new(m, [(BasisBlade::empty(m), 1.0), (blade(0b11, m), -1.0)]).unwrap();
        assert_eq!(element_inner_product(&a, &b).unwrap(), -1.0);
    }

    #[test]
    fn operator_apply_examples() {
        let n = 2;
        let m = 2;
        let identity_op =
            CliffordOperator::single_block(BasisBlade::empty(m), ComplexMatrix::identity(n))
                .unwrap();
        let x = CliffordVector::new(
            n,
            m,
            [
                (
                    BasisBlade::generator(1, m).unwrap(),
                    vec![c(1.0, 2.0), c(0.5, 0.0)],
                ),
                (BasisBlade::empty(m), vec![c(-1.0, 0.0), c(0.0, 1.0)]),
            ],
        )
        .unwrap();
        let y = identity_op.apply(&x).unwrap();
        assert_eq!(
            y.component(BasisBlade::empty(m)),
            x.component(BasisBlade::empty(m))
        );

        // (A ⊗ e_1)(x ⊗ e_1) = -A x ⊗ e_φ
        let a = ComplexMatrix::from_real_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let op = CliffordOperator::single_block(BasisBlade::generator(1, m).unwrap(), a.clone())
            .unwrap();
        let v = vec![c(1.0, 0.0), c(0.0, 1.0)];
        let x1 =
            CliffordVector::new(n, m, [(BasisBlade::generator(1, m).unwrap(), v.clone())]).unwrap();
        let y1 = op.apply(&x1).unwrap();
        let expected: Vec<Complex64> = a.apply(&v).iter().map(|z| -z).collect();
        assert_eq!(y1.component(BasisBlade::empty(m)), expected);

        // (A ⊗ e_1)(x ⊗ e_2) = A x ⊗ e_{12}
        let x2 =
            CliffordVector::new(n, m, [(BasisBlade::generator(2, m).unwrap(), v.clone())]).unwrap();
        let y2 = op.apply(&x2).unwrap();
        assert_eq!(y2.component(blade(0b11, m)), a.apply(&v));
    }

    #[test]
    fn from_tuple_block_layout() {
        let tuple = MatrixTuple::new(vec![
            ComplexMatrix::diagonal(&[c(1.0, 0.0), c(2.0, 0.0)]),
            ComplexMatrix::diagonal(&[c(3.0, 0.0), c(4.0, 0.0)]),
        ])
        .unwrap();
        let op = CliffordOperator::from_tuple(&tuple);
        let b1 = op.block(BasisBlade::generator(1, 2).unwrap()).unwrap();
        assert_eq!(b1.get(0, 0), c(0.0, 1.0));
        assert_eq!(b1.get(1, 1), c(0.0, 2.0));
        let b2 = op.block(BasisBlade::generator(2, 2).unwrap()).unwrap();
        assert_eq!(b2.get(0, 0), c(0.0, 3.0));
        assert!(op.block(BasisBlade::empty(2)).is_none());

        let zero_tuple =
            MatrixTuple::new(vec![ComplexMatrix::zeros(2, 2), ComplexMatrix::zeros(2, 2)]).unwrap();
        let zero_op = CliffordOperator::from_tuple(&zero_tuple);
        assert_eq!(zero_op.blocks.len(), 0);
    }

    #[test]
    fn materialize_identity_and_cliff() {
        let m = 1u32;
        let identity_op =
            CliffordOperator::single_block(BasisBlade::empty(m), ComplexMatrix::identity(3))
                .unwrap();
        let mat = identity_op.materialize(DEFAULT_MATERIALIZE_LIMIT).unwrap();
        assert_eq!((&mat - &ComplexMatrix::identity(6)).frobenius_norm(), 0.0);

        // cliff((I_2)) materializes to [[0, -i I], [i I, 0]]
        let tuple = MatrixTuple::new(vec![ComplexMatrix::identity(2)]).unwrap();
        let op = CliffordOperator::from_tuple(&tuple);
        let mat = op.materialize(DEFAULT_MATERIALIZE_LIMIT).unwrap();
        let i = c(0.0, 1.0);
        let mut expected = ComplexMatrix::zeros(4, 4);
        expected.set(0, 2, -i);
        expected.set(1, 3, -i);
        expected.set(2, 0, i);
        expected.set(3, 1, i);
        assert!((&mat - &expected).frobenius_norm() < 1e-15);

        let zero = CliffordOperator::zero(2, 2);
        assert_eq!(
            zero.materialize(DEFAULT_MATERIALIZE_LIMIT)
                .unwrap()
                .frobenius_norm(),
            0.0
        );
    }

    #[test]
    fn materialize_capacity() {
        let op = CliffordOperator::zero(16, 10);
        assert!(matches!(
            op.materialize(DEFAULT_MATERIALIZE_LIMIT),
            Err(Error::CapacityExceeded {
                required: 16384,
                ..
            })
        ));
    }

    #[test]
    fn apply_agrees_with_materialized_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..50 {
            let n = rng.gen_range(1..=4);
            let m = rng.gen_range(1..=4u32);
            let blades = 1u64 << m;
            let block_count = rng.gen_range(1..=blades);
            let op = CliffordOperator::new(
                n,
                m,
                (0..block_count).map(|_| {
                    let mask = rng.gen_range(0..blades);
                    let block = ComplexMatrix::from_fn(n, n, |_, _| {
                        c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                    });
                    (blade(mask, m), block)
                }),
            )
            .unwrap();
            let x = CliffordVector::new(
                n,
                m,
                (0..blades).map(|mask| {
                    let v: Vec<Complex64> = (0..n)
                        .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                        .collect();
                    (blade(mask, m), v)
                }),
            )
            .unwrap();

            let structured = op.apply(&x).unwrap().to_dense();
            let dense = op.materialize(DEFAULT_MATERIALIZE_LIMIT).unwrap();
            let flat = dense.apply(&x.to_dense());
            let diff: f64 = structured
                .iter()
                .zip(&flat)
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(diff < 1e-12, "structured vs materialized diff {diff}");
        }
    }

    #[test]
    fn tuple_norm_identity_holds_without_hypotheses() {
        // arbitrary (non-commuting, non-normal) tuples
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for _ in 0..100 {
            let n = rng.gen_range(1..=4);
            let m = rng.gen_range(1..=4);
            let tuple = MatrixTuple::new(
                (0..m)
                    .map(|_| {
                        ComplexMatrix::from_fn(n, n, |_, _| {
                            c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))
                        })
                    })
                    .collect(),
            )
            .unwrap();
            let op = CliffordOperator::from_tuple(&tuple);
            let oracle = op
                .frobenius_norm_materialized(DEFAULT_MATERIALIZE_LIMIT)
                .unwrap();
            let formula = ((1u64 << m) as f64
                * tuple
                    .members()
                    .iter()
                    .map(|a| a.frobenius_norm().powi(2))
                    .sum::<f64>())
            .sqrt();
            assert!(
                (oracle - formula).abs() <= 1e-10 * formula.max(1e-300),
                "oracle {oracle} vs formula {formula}"
            );
            assert!(
                (op.frobenius_norm_structured() - formula).abs() <= 1e-12 * formula.max(1e-300)
            );
        }
    }

    #[test]
    fn clifford_norm_examples() {
        let tuple = MatrixTuple::new(vec![ComplexMatrix::identity(2)]).unwrap();
        let op = CliffordOperator::from_tuple(&tuple);
        assert!((op.frobenius_norm_structured() - 2.0).abs() < 1e-15);
        assert!(
            (op.frobenius_norm_materialized(DEFAULT_MATERIALIZE_LIMIT)
                .unwrap()
                - 2.0)
                .abs()
                < 1e-12
        );

        let zero = CliffordOperator::from_tuple(
            &MatrixTuple::new(vec![ComplexMatrix::zeros(3, 3); 4]).unwrap(),
        );
        assert_eq!(zero.frobenius_norm_structured(), 0.0);

        let diag =
            MatrixTuple::new(vec![ComplexMatrix::diagonal(&[c(3.0, 0.0), c(4.0, 0.0)])]).unwrap();
        let op = CliffordOperator::from_tuple(&diag);
        assert!((op.frobenius_norm_structured() - 50f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn trace_law_exhaustive() {
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        for m in 1..=5u32 {
            let n = rng.gen_range(1..=4);
            let p = ComplexMatrix::from_fn(n, n, |_, _| {
                c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            });
            for mask in 0..(1u64 << m) {
                let op = CliffordOperator::single_block(blade(mask, m), p.clone()).unwrap();
                let structured = op.trace();
                let dense_trace = op.materialize(DEFAULT_MATERIALIZE_LIMIT).unwrap().trace();
                if mask == 0 {
                    let expected = p.trace() * c((1u64 << m) as f64, 0.0);
                    assert!((structured - expected).norm() < 1e-12);
                } else {
                    assert_eq!(structured, c(0.0, 0.0));
                }
                assert!(
                    (structured - dense_trace).norm() <= 1e-10,
                    "m={m} mask={mask:#b}"
                );
            }
        }
    }

    #[test]
    fn cliff_trace_is_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(55);
        let tuple = MatrixTuple::new(
            (0..3)
                .map(|_| {
                    ComplexMatrix::from_fn(3, 3, |_, _| {
                        c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                    })
                })
                .collect(),
        )
        .unwrap();
        let op = CliffordOperator::from_tuple(&tuple);
        assert_eq!(op.trace(), c(0.0, 0.0));
    }
}
