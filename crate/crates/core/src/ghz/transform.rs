//! Partial transposes restricted to the span of the GHZ basis.
//!
//! Each `T_X` maps the diagonal span `{|ψ_i><ψ_i|}` to itself. In that basis
//! it splits into two 4×4 blocks on coupled quadruples of indices, each equal
//! to
//!
//! ```text
//!       [ 1  1  1 -1]
//! 1/2 · [ 1  1 -1  1]
//!       [ 1 -1  1  1]
//!       [-1  1  1  1]
//! ```
//!
//! in the quadruple's own ordering.

use std::sync::OnceLock;

use num_traits::Zero;

use super::{Bipartition, DiagOperator};
use crate::exact::{GaussianRational, Matrix, Rational};

const BLOCK: [[i8; 4]; 4] = [[1, 1, 1, -1], [1, 1, -1, 1], [1, -1, 1, 1], [-1, 1, 1, 1]];

/// The two coupled quadruples for each cut, in the block's ordering.
pub fn quadruples(cut: Bipartition) -> [[usize; 4]; 2] {
    match cut {
        Bipartition::A => [[0, 7, 3, 4], [1, 6, 2, 5]],
        Bipartition::B => [[0, 7, 2, 5], [3, 4, 1, 6]],
        Bipartition::C => [[0, 7, 1, 6], [2, 5, 3, 4]],
    }
}

/// `T_X` on the GHZ span, stored as twice its entries (so every entry is
/// `0` or `±1`). Column `i` holds the coefficients of `T_X(ψ_i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PtTransform {
    cut: Bipartition,
    doubled: [[i8; 8]; 8],
}

impl PtTransform {
    fn build(cut: Bipartition) -> Self {
        let mut doubled = [[0i8; 8]; 8];
        for quad in quadruples(cut) {
            for (a, &row) in quad.iter().enumerate() {
                for (b, &col) in quad.iter().enumerate() {
                    doubled[row][col] = BLOCK[a][b];
                }
            }
        }
        Self { cut, doubled }
    }

    /// A transform with arbitrary doubled entries. Used to inject faults
    /// into oracle checks; no invariants are enforced.
    pub fn from_doubled(cut: Bipartition, doubled: [[i8; 8]; 8]) -> Self {
        Self { cut, doubled }
    }

    pub fn cut(&self) -> Bipartition {
        self.cut
    }

    pub fn doubled(&self) -> &[[i8; 8]; 8] {
        &self.doubled
    }

    pub fn entry(&self, row: usize, col: usize) -> Rational {
        Rational::new(self.doubled[row][col] as i64, 2)
    }

    pub fn matrix(&self) -> Matrix {
        Matrix::from_fn(8, 8, |r, c| GaussianRational::real(self.entry(r, c)))
    }

    /// Nonzero entries of one row as `(column, sign)`; each has magnitude 1/2.
    pub fn row_support(&self, row: usize) -> impl Iterator<Item = (usize, i8)> + '_ {
        self.doubled[row].iter().enumerate().filter(|(_, &s)| s != 0).map(|(c, &s)| (c, s))
    }

    /// `T_X` applied along every level of a diagonal operator.
    pub fn apply(&self, op: &DiagOperator) -> DiagOperator {
        let levels = op.levels();
        let mut coeffs = op.coeffs().to_vec();
        let half = Rational::new(1, 2);
        for level in 0..levels {
            let stride = 8usize.pow((levels - 1 - level) as u32);
            let block = stride * 8;
            let mut next = vec![Rational::zero(); coeffs.len()];
            for base in (0..coeffs.len()).step_by(block) {
                for off in 0..stride {
                    for (row, slot) in (0..8).map(|r| (r, base + off + r * stride)) {
                        let mut acc = Rational::zero();
                        for (col, s) in self.row_support(row) {
                            let x = &coeffs[base + off + col * stride];
                            if s > 0 {
                                acc += x;
                            } else {
                                acc -= x;
                            }
                        }
                        next[slot] = acc * &half;
                    }
                }
            }
            coeffs = next;
        }
        DiagOperator::new(levels, coeffs).expect("length preserved")
    }
}

static TABLE: OnceLock<[PtTransform; 3]> = OnceLock::new();

/// The three transforms in cut order `A|BC, B|CA, C|AB`.
pub fn pt_transform_table() -> &'static [PtTransform; 3] {
    TABLE.get_or_init(|| Bipartition::ALL.map(PtTransform::build))
}

pub fn pt_transform(cut: Bipartition) -> &'static PtTransform {
    &pt_transform_table()[cut.party()]
}

/// `(T_X)^{⊗t}` applied to the coefficient vector of `op`.
pub fn apply_pt_diag(op: &DiagOperator, cut: Bipartition) -> DiagOperator {
    pt_transform(cut).apply(op)
}

/// Sparse rows of `(T_X)^{⊗t}`. Every nonzero entry is `±2^{-t}`, and every
/// row has exactly `4^t` of them.
#[derive(Debug, Clone)]
pub struct PtPower {
    cut: Bipartition,
    levels: usize,
    rows: Vec<Vec<(u32, i8)>>,
}

/// Largest `t` for which [`PtPower`] is materialized.
pub const MAX_PT_POWER_LEVELS: usize = 4;

impl PtPower {
    /// Panics if `levels` is zero or above [`MAX_PT_POWER_LEVELS`].
    pub fn new(cut: Bipartition, levels: usize) -> Self {
        assert!(
            (1..=MAX_PT_POWER_LEVELS).contains(&levels),
            "PtPower supports 1..={MAX_PT_POWER_LEVELS} levels, got {levels}"
        );
        let base = pt_transform(cut);
        let mut rows: Vec<Vec<(u32, i8)>> = vec![vec![(0, 1)]];
        for _ in 0..levels {
            let mut next = Vec::with_capacity(rows.len() * 8);
            for prefix in &rows {
                for r in 0..8 {
                    let mut row = Vec::with_capacity(prefix.len() * 4);
                    for &(pc, ps) in prefix {
                        for (c, s) in base.row_support(r) {
                            row.push((pc * 8 + c as u32, ps * s));
                        }
                    }
                    row.sort_unstable_by_key(|&(c, _)| c);
                    next.push(row);
                }
            }
            rows = next;
        }
        Self { cut, levels, rows }
    }

    pub fn cut(&self) -> Bipartition {
        self.cut
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    /// `2^{-t}`, the magnitude of every nonzero entry.
    pub fn scale(&self) -> Rational {
        Rational::new(1, 1 << self.levels)
    }

    pub fn row(&self, i: usize) -> &[(u32, i8)] {
        &self.rows[i]
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ghz::{
        expand_in_ghz_basis, ghz_density, partial_transpose_dense, GhzIndex, LatticeIndex,
    };
    use num_traits::One;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn column_for_psi4_under_a() {
        let t = pt_transform(Bipartition::A);
        let col: Vec<Rational> = (0..8).map(|row| t.entry(row, 4)).collect();
        let z = Rational::zero();
        assert_eq!(col, vec![r(-1, 2), z.clone(), z.clone(), r(1, 2), r(1, 2), z.clone(), z, r(1, 2)]);
    }

    #[test]
    fn involution_and_trace_preservation() {
        for t in pt_transform_table() {
            let m = t.matrix();
            assert_eq!(m.mul(&m), Matrix::identity(8), "{}", t.cut());
            for col in 0..8 {
                let sum: Rational = (0..8).map(|row| t.entry(row, col)).sum();
                assert_eq!(sum, Rational::one());
            }
        }
    }

    #[test]
    fn matches_dense_partial_transpose_on_all_basis_states() {
        for cut in Bipartition::ALL {
            for i in GhzIndex::ALL {
                let dense = partial_transpose_dense(&ghz_density(i), cut);
                let (diag, exact) = expand_in_ghz_basis(&dense);
                assert!(exact, "{cut} {i}");
                let predicted = apply_pt_diag(&DiagOperator::basis(&LatticeIndex::single(i)), cut);
                assert_eq!(diag, predicted, "{cut} {i}");
            }
        }
    }

    #[test]
    fn identity_is_fixed() {
        for cut in Bipartition::ALL {
            assert_eq!(apply_pt_diag(&DiagOperator::identity(2), cut), DiagOperator::identity(2));
        }
    }

    #[test]
    fn two_level_image_is_outer_product() {
        let e0 = DiagOperator::basis(&LatticeIndex::from_values(&[0]).unwrap());
        let one = apply_pt_diag(&e0, Bipartition::A);
        let e00 = DiagOperator::basis(&LatticeIndex::from_values(&[0, 0]).unwrap());
        assert_eq!(apply_pt_diag(&e00, Bipartition::A), one.tensor(&one));
    }

    #[test]
    fn power_rows_agree_with_levelwise_application() {
        for cut in Bipartition::ALL {
            let p = PtPower::new(cut, 2);
            let scale = p.scale();
            for col in [0usize, 9, 37, 63] {
                let e = DiagOperator::basis(&LatticeIndex::from_flat(2, col));
                let image = apply_pt_diag(&e, cut);
                for i in 0..64 {
                    let entry = p
                        .row(i)
                        .iter()
                        .find(|(c, _)| *c as usize == col)
                        .map_or(Rational::zero(), |&(_, s)| &scale * Rational::from_integer(s as i64));
                    assert_eq!(image.coeffs()[i], entry);
                }
            }
            assert!((0..64).all(|i| p.row(i).len() == 16));
        }
    }
}
