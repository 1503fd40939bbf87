//! Dense operators in the computational product basis.
//!
//! This is the brute-force path used to cross-check the diagonal machinery:
//! partial transposes by index swapping, the Pauli twirl, and basis changes
//! into the lattice basis. Row index bits are `a1 b1 c1 a2 b2 c2 …` with the
//! first level most significant.

use num_traits::Zero;

use super::pauli::{Phase, PauliString, STABILIZER_SET};
use super::{lattice_dim, Bipartition, DiagOperator, GhzError, GhzIndex, LatticeIndex};
use crate::exact::{GaussianRational, LinalgError, Matrix, Rational};

/// Largest level count for which a dense operator is materialized.
pub const MAX_DENSE_LEVELS: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseOperator {
    levels: usize,
    matrix: Matrix,
}

fn check_levels(levels: usize) -> Result<(), GhzError> {
    if levels == 0 {
        return Err(GhzError::EmptyLattice);
    }
    if levels > MAX_DENSE_LEVELS {
        return Err(GhzError::TooLarge { levels, max: MAX_DENSE_LEVELS });
    }
    Ok(())
}

impl DenseOperator {
    pub fn new(levels: usize, matrix: Matrix) -> Result<Self, GhzError> {
        check_levels(levels)?;
        let expected = lattice_dim(levels);
        if matrix.rows() != expected || matrix.cols() != expected {
            return Err(GhzError::BadLength { expected, found: matrix.rows().max(matrix.cols()) });
        }
        Ok(Self { levels, matrix })
    }

    pub fn zero(levels: usize) -> Result<Self, GhzError> {
        check_levels(levels)?;
        let n = lattice_dim(levels);
        Ok(Self { levels, matrix: Matrix::zeros(n, n) })
    }

    pub fn identity(levels: usize) -> Result<Self, GhzError> {
        check_levels(levels)?;
        Ok(Self { levels, matrix: Matrix::identity(lattice_dim(levels)) })
    }

    /// `Σ_v c_v |Ψ_v><Ψ_v|` as a dense matrix.
    pub fn from_diag(op: &DiagOperator) -> Result<Self, GhzError> {
        let levels = op.levels();
        let mut out = Self::zero(levels)?;
        let norm = Rational::new(1, 1 << levels);
        for (v, c) in op.terms() {
            let amps = lattice_amplitudes(&v);
            let w = c * &norm;
            for &(r, sr) in &amps {
                for &(col, sc) in &amps {
                    let entry = if sr == sc { w.clone() } else { -&w };
                    out.matrix[(r, col)].re += &entry;
                }
            }
        }
        Ok(out)
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix {
        self.matrix
    }

    pub fn trace(&self) -> GaussianRational {
        self.matrix.trace()
    }

    pub fn is_psd(&self) -> Result<bool, LinalgError> {
        self.matrix.is_psd()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.levels, other.levels, "level mismatch in add");
        Self { levels: self.levels, matrix: self.matrix.add(&other.matrix) }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.levels, other.levels, "level mismatch in sub");
        Self { levels: self.levels, matrix: self.matrix.sub(&other.matrix) }
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self { levels: self.levels, matrix: self.matrix.scale(k) }
    }

    /// `self ⊗ other` with `self` on the leading levels.
    pub fn tensor(&self, other: &Self) -> Result<Self, GhzError> {
        let levels = self.levels + other.levels;
        check_levels(levels)?;
        Ok(Self { levels, matrix: self.matrix.kron(&other.matrix) })
    }
}

/// Unnormalized amplitudes of `Ψ_v`: `2^t` basis strings with signs `±1`.
/// The normalization is `2^{-t/2}`.
pub fn lattice_amplitudes(v: &LatticeIndex) -> Vec<(usize, i8)> {
    let mut out = vec![(0usize, 1i8)];
    for g in v.levels() {
        let amps = g.amplitudes();
        let mut next = Vec::with_capacity(out.len() * 2);
        for &(idx, s) in &out {
            for &(b, a) in &amps {
                next.push(((idx << 3) | b, s * a));
            }
        }
        out = next;
    }
    out
}

/// `|ψ_i><ψ_i|` as an 8×8 matrix with entries in `{0, ±1/2}`.
pub fn ghz_density(i: GhzIndex) -> DenseOperator {
    lattice_density(&LatticeIndex::single(i)).expect("one level is always dense")
}

/// `|Ψ_v><Ψ_v|`, the Kronecker product of the level projectors.
pub fn lattice_density(v: &LatticeIndex) -> Result<DenseOperator, GhzError> {
    DenseOperator::from_diag(&DiagOperator::basis(v))
}

/// Bit mask of all of party `cut`'s qubits across `levels` levels.
fn party_mask(levels: usize, cut: Bipartition) -> usize {
    (0..levels).fold(0, |m, l| m | (cut.level_mask() << (3 * l)))
}

/// Transposes all of the lone party's indices jointly.
pub fn partial_transpose_dense(rho: &DenseOperator, cut: Bipartition) -> DenseOperator {
    let mask = party_mask(rho.levels, cut);
    let n = rho.dim();
    let matrix = Matrix::from_fn(n, n, |r, c| {
        let r2 = (r & !mask) | (c & mask);
        let c2 = (c & !mask) | (r & mask);
        rho.matrix[(r2, c2)].clone()
    });
    DenseOperator { levels: rho.levels, matrix }
}

/// Applies `U` to the three qubits of one level of a full index.
fn act_on_level(u: &PauliString, levels: usize, level: usize, idx: usize) -> (usize, Phase) {
    let shift = 3 * (levels - 1 - level);
    let (y, ph) = u.act((idx >> shift) & 7);
    ((idx & !(7 << shift)) | (y << shift), ph)
}

/// `Δ` on one level: the average of `UρU†` over the stabilizer set.
fn twirl_level(rho: &Matrix, levels: usize, level: usize) -> Matrix {
    let n = rho.rows();
    let mut out = Matrix::zeros(n, n);
    for u in &STABILIZER_SET {
        let images: Vec<(usize, Phase)> = (0..n).map(|x| act_on_level(u, levels, level, x)).collect();
        for r in 0..n {
            let (r2, pr) = images[r];
            for c in 0..n {
                let z = &rho[(r, c)];
                if z.is_zero() {
                    continue;
                }
                let (c2, pc) = images[c];
                out[(r2, c2)] += &pr.mul(pc.conj()).apply(z);
            }
        }
    }
    out.scale(&Rational::new(1, STABILIZER_SET.len() as i64))
}

/// `Λ = Δ^{⊗t}`, computed as the stabilizer twirl applied level by level.
pub fn dephase(rho: &DenseOperator) -> DenseOperator {
    let mut m = rho.matrix.clone();
    for level in 0..rho.levels {
        m = twirl_level(&m, rho.levels, level);
    }
    DenseOperator { levels: rho.levels, matrix: m }
}

/// `Σ_v |Ψ_v><Ψ_v| ρ |Ψ_v><Ψ_v|`, the projective form of the same channel.
///
/// Only the real part of each diagonal coefficient survives; for hermitian
/// input the diagonal is real anyway.
pub fn dephase_by_projection(rho: &DenseOperator) -> DenseOperator {
    let diag = ghz_diagonal(rho).0;
    DenseOperator::from_diag(&diag).expect("levels already validated")
}

/// Diagonal coefficients `<Ψ_v|ρ|Ψ_v>`; the flag is false if any of them
/// has a nonzero imaginary part.
fn ghz_diagonal(rho: &DenseOperator) -> (DiagOperator, bool) {
    let levels = rho.levels;
    let norm = Rational::new(1, 1 << levels);
    let mut real = true;
    let coeffs = (0..lattice_dim(levels))
        .map(|flat| {
            let amps = lattice_amplitudes(&LatticeIndex::from_flat(levels, flat));
            let mut acc = GaussianRational::zero();
            for &(r, sr) in &amps {
                for &(c, sc) in &amps {
                    let z = &rho.matrix[(r, c)];
                    if sr == sc {
                        acc += z;
                    } else {
                        acc -= z;
                    }
                }
            }
            real &= acc.im.is_zero();
            acc.re * &norm
        })
        .collect();
    (DiagOperator::new(levels, coeffs).expect("length is 8^t"), real)
}

/// Diagonal of `ρ` in the lattice basis, and whether `ρ` is exactly equal to
/// that diagonal part (no cross terms `<Ψ_u|ρ|Ψ_v>`, `u ≠ v`).
pub fn expand_in_ghz_basis(rho: &DenseOperator) -> (DiagOperator, bool) {
    let (diag, real) = ghz_diagonal(rho);
    if !real {
        return (diag, false);
    }
    let rebuilt = DenseOperator::from_diag(&diag).expect("levels already validated");
    let exact = rebuilt.matrix == rho.matrix;
    (diag, exact)
}

impl DenseOperator {
    /// `U ρ U†` with `U` acting on the qubits of one level.
    pub fn conjugate_level(&self, u: &PauliString, level: usize) -> Self {
        let n = self.dim();
        let mut out = Matrix::zeros(n, n);
        let images: Vec<(usize, Phase)> = (0..n).map(|x| act_on_level(u, self.levels, level, x)).collect();
        for r in 0..n {
            for c in 0..n {
                let z = &self.matrix[(r, c)];
                if z.is_zero() {
                    continue;
                }
                let ((r2, pr), (c2, pc)) = (images[r], images[c]);
                out[(r2, c2)] = pr.mul(pc.conj()).apply(z);
            }
        }
        Self { levels: self.levels, matrix: out }
    }
}
