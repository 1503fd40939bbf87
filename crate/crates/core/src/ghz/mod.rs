//! The three-qubit GHZ basis, its tensor-power lattices, and the operator
//! algebra needed to turn PPT discrimination into linear programs.
//!
//! Basis states are stored in ascending index order `ψ0..ψ7`:
//!
//! ```text
//! ψ0 = |000>+|111>   ψ7 = |000>-|111>
//! ψ1 = |001>+|110>   ψ6 = |001>-|110>
//! ψ2 = |010>+|101>   ψ5 = |010>-|101>
//! ψ3 = |011>+|100>   ψ4 = |011>-|100>     (all over √2)
//! ```
//!
//! Lattice states `Ψ_v = ψ_{v1} ⊗ … ⊗ ψ_{vt}` are indexed by `v ∈ {0..7}^t`
//! with level 1 most significant. Operators diagonal in that basis are held
//! as [`DiagOperator`]; everything else goes through the dense oracle path in
//! [`dense`], which is only materialized for `t ≤ 3`.

pub mod dense;
pub mod pauli;
pub mod transform;

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::exact::Rational;

pub use dense::{
    dephase, dephase_by_projection, expand_in_ghz_basis, ghz_density, lattice_density,
    partial_transpose_dense, DenseOperator, MAX_DENSE_LEVELS,
};
pub use pauli::{Pauli, PauliString, STABILIZER_SET};
pub use transform::{apply_pt_diag, pt_transform, pt_transform_table, PtPower, PtTransform};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GhzError {
    #[error("GHZ index {0} out of range 0..=7")]
    IndexOutOfRange(u8),
    #[error("lattice index must have at least one level")]
    EmptyLattice,
    #[error("dense operators are limited to t <= {max} levels (requested {levels})")]
    TooLarge { levels: usize, max: usize },
    #[error("level mismatch: expected t = {expected}, found t = {found}")]
    LevelMismatch { expected: usize, found: usize },
    #[error("coefficient vector has length {found}, expected 8^t = {expected}")]
    BadLength { expected: usize, found: usize },
    #[error("unknown bipartition {0:?} (expected A|BC, B|CA or C|AB)")]
    UnknownBipartition(String),
}

/// Label of one of the eight three-qubit GHZ basis states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct GhzIndex(u8);

impl GhzIndex {
    pub const ALL: [GhzIndex; 8] = [
        GhzIndex(0),
        GhzIndex(1),
        GhzIndex(2),
        GhzIndex(3),
        GhzIndex(4),
        GhzIndex(5),
        GhzIndex(6),
        GhzIndex(7),
    ];

    pub fn new(value: u8) -> Result<Self, GhzError> {
        if value < 8 {
            Ok(GhzIndex(value))
        } else {
            Err(GhzError::IndexOutOfRange(value))
        }
    }

    pub fn value(self) -> u8 {
        self.0
    }

    pub fn as_usize(self) -> usize {
        self.0 as usize
    }

    /// The computational basis string `b` with `ψ = (|b> ± |b̄>)/√2`,
    /// chosen as the one in `000..011`, together with the relative sign.
    pub fn support(self) -> (usize, i8) {
        if self.0 < 4 {
            (self.0 as usize, 1)
        } else {
            (7 - self.0 as usize, -1)
        }
    }

    /// Unnormalized amplitudes: `±1` on the two supporting basis strings.
    pub fn amplitudes(self) -> [(usize, i8); 2] {
        let (b, sign) = self.support();
        [(b, 1), (7 - b, sign)]
    }

    /// The state differing only in the relative sign (`ψi ↔ ψ(7-i)`).
    pub fn phase_partner(self) -> GhzIndex {
        GhzIndex(7 - self.0)
    }
}

impl TryFrom<u8> for GhzIndex {
    type Error = GhzError;
    fn try_from(v: u8) -> Result<Self, GhzError> {
        GhzIndex::new(v)
    }
}

impl From<GhzIndex> for u8 {
    fn from(g: GhzIndex) -> u8 {
        g.0
    }
}

impl fmt::Display for GhzIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ψ{}", self.0)
    }
}

/// Index `v = (v1, …, vt)` of the lattice state `ψ_{v1} ⊗ … ⊗ ψ_{vt}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u8>", into = "Vec<u8>")]
pub struct LatticeIndex(Vec<GhzIndex>);

impl TryFrom<Vec<u8>> for LatticeIndex {
    type Error = GhzError;
    fn try_from(values: Vec<u8>) -> Result<Self, GhzError> {
        Self::from_values(&values)
    }
}

impl From<LatticeIndex> for Vec<u8> {
    fn from(v: LatticeIndex) -> Vec<u8> {
        v.values()
    }
}

impl LatticeIndex {
    pub fn new(levels: Vec<GhzIndex>) -> Result<Self, GhzError> {
        if levels.is_empty() {
            return Err(GhzError::EmptyLattice);
        }
        Ok(LatticeIndex(levels))
    }

    pub fn from_values(values: &[u8]) -> Result<Self, GhzError> {
        let levels = values.iter().map(|&v| GhzIndex::new(v)).collect::<Result<Vec<_>, _>>()?;
        Self::new(levels)
    }

    pub fn single(i: GhzIndex) -> Self {
        LatticeIndex(vec![i])
    }

    pub fn levels(&self) -> &[GhzIndex] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> Vec<u8> {
        self.0.iter().map(|g| g.0).collect()
    }

    /// Position in ascending lexicographic order over `{0..7}^t`.
    pub fn flat(&self) -> usize {
        self.0.iter().fold(0, |acc, g| acc * 8 + g.as_usize())
    }

    pub fn from_flat(levels: usize, mut flat: usize) -> Self {
        let mut v = vec![GhzIndex(0); levels];
        for slot in v.iter_mut().rev() {
            *slot = GhzIndex((flat % 8) as u8);
            flat /= 8;
        }
        LatticeIndex(v)
    }

    /// `self ⊗ other`.
    pub fn tensor(&self, other: &LatticeIndex) -> LatticeIndex {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        LatticeIndex(v)
    }
}

impl fmt::Display for LatticeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join("⊗"))
    }
}

/// One of the three ways to split parties `A`, `B`, `C` into one versus two.
///
/// The named party is the one standing alone; it is also the party whose
/// indices the associated partial transpose acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Bipartition {
    /// `A|BC`
    A,
    /// `B|CA`
    B,
    /// `C|AB`
    C,
}

impl Bipartition {
    pub const ALL: [Bipartition; 3] = [Bipartition::A, Bipartition::B, Bipartition::C];

    /// 0 for A, 1 for B, 2 for C.
    pub fn party(self) -> usize {
        self as usize
    }

    pub fn label(self) -> &'static str {
        match self {
            Bipartition::A => "A|BC",
            Bipartition::B => "B|CA",
            Bipartition::C => "C|AB",
        }
    }

    /// Bit mask of the lone party's qubit within one three-bit level
    /// (A is the most significant bit).
    pub fn level_mask(self) -> usize {
        1 << (2 - self.party())
    }
}

impl fmt::Display for Bipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Bipartition {
    type Err = GhzError;
    fn from_str(s: &str) -> Result<Self, GhzError> {
        match s.trim() {
            "A|BC" | "A" | "a" | "A|CB" => Ok(Bipartition::A),
            "B|CA" | "B" | "b" | "B|AC" => Ok(Bipartition::B),
            "C|AB" | "C" | "c" | "C|BA" => Ok(Bipartition::C),
            other => Err(GhzError::UnknownBipartition(other.to_string())),
        }
    }
}

impl Serialize for Bipartition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.label())
    }
}

impl<'de> Deserialize<'de> for Bipartition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `8^t`, the dimension of the `t`-level lattice span.
pub fn lattice_dim(levels: usize) -> usize {
    8usize.pow(levels as u32)
}

/// An operator diagonal in the lattice basis: `Σ_v c_v |Ψ_v><Ψ_v|`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DiagOperator {
    levels: usize,
    coeffs: Vec<Rational>,
}

impl DiagOperator {
    pub fn new(levels: usize, coeffs: Vec<Rational>) -> Result<Self, GhzError> {
        if levels == 0 {
            return Err(GhzError::EmptyLattice);
        }
        let expected = lattice_dim(levels);
        if coeffs.len() != expected {
            return Err(GhzError::BadLength { expected, found: coeffs.len() });
        }
        Ok(Self { levels, coeffs })
    }

    pub fn zero(levels: usize) -> Self {
        Self { levels, coeffs: vec![Rational::zero(); lattice_dim(levels)] }
    }

    pub fn identity(levels: usize) -> Self {
        Self { levels, coeffs: vec![Rational::one(); lattice_dim(levels)] }
    }

    /// The projector `|Ψ_v><Ψ_v|`.
    pub fn basis(v: &LatticeIndex) -> Self {
        let mut op = Self::zero(v.len());
        op.coeffs[v.flat()] = Rational::one();
        op
    }

    /// Builds an operator from `(coefficient, index)` terms; repeated
    /// indices accumulate.
    pub fn from_terms<'a>(
        levels: usize,
        terms: impl IntoIterator<Item = (Rational, &'a LatticeIndex)>,
    ) -> Result<Self, GhzError> {
        let mut op = Self::zero(levels);
        for (c, v) in terms {
            if v.len() != levels {
                return Err(GhzError::LevelMismatch { expected: levels, found: v.len() });
            }
            op.coeffs[v.flat()] += c;
        }
        Ok(op)
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, v: &LatticeIndex) -> &Rational {
        &self.coeffs[v.flat()]
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    pub fn trace(&self) -> Rational {
        self.coeffs.iter().sum()
    }

    pub fn is_psd(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.levels, other.levels, "level mismatch in add");
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Self { levels: self.levels, coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.levels, other.levels, "level mismatch in sub");
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Self { levels: self.levels, coeffs }
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self { levels: self.levels, coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    /// `self ⊗ other`, with `self` on the leading levels.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() * other.coeffs.len());
        for a in &self.coeffs {
            for b in &other.coeffs {
                coeffs.push(a * b);
            }
        }
        Self { levels: self.levels + other.levels, coeffs }
    }

    /// Nonzero terms in ascending index order.
    pub fn terms(&self) -> impl Iterator<Item = (LatticeIndex, &Rational)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (LatticeIndex::from_flat(self.levels, i), c))
    }
}

impl fmt::Display for DiagOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self.terms().map(|(v, c)| format!("{c}·{v}")).collect();
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_index_round_trips() {
        let v = LatticeIndex::from_values(&[3, 0, 7]).unwrap();
        assert_eq!(v.flat(), 3 * 64 + 7);
        assert_eq!(LatticeIndex::from_flat(3, v.flat()), v);
        assert!(LatticeIndex::from_values(&[8]).is_err());
        assert!(LatticeIndex::from_values(&[]).is_err());
    }

    #[test]
    fn bipartition_parsing() {
        assert_eq!("B|CA".parse::<Bipartition>().unwrap(), Bipartition::B);
        assert_eq!("c".parse::<Bipartition>().unwrap(), Bipartition::C);
        assert!("AB|C".parse::<Bipartition>().is_err());
        assert_eq!(Bipartition::A.to_string(), "A|BC");
    }

    #[test]
    fn diag_tensor_matches_flat_order() {
        let a = DiagOperator::basis(&LatticeIndex::from_values(&[1]).unwrap());
        let b = DiagOperator::basis(&LatticeIndex::from_values(&[7]).unwrap());
        let ab = a.tensor(&b);
        assert_eq!(ab, DiagOperator::basis(&LatticeIndex::from_values(&[1, 7]).unwrap()));
        assert_eq!(DiagOperator::identity(2).trace(), Rational::from_integer(64));
    }
}
