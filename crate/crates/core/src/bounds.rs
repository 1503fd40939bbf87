//! The cardinality bound for sets of GHZ-like states.
//!
//! A GHZ-like state of weight `w` in `C^d ⊗ C^d ⊗ C^d` is
//! `(1/√w) Σ_m e^{iθ_m} |i_m j_m k_m>` with the `w` levels pairwise distinct
//! in each coordinate. Any PPT measurement element that detects such a state
//! with certainty has trace at least `w`, so `s` orthogonal states of equal
//! weight with `s > d³/w` cannot be perfectly discriminated by PPT
//! measurements across any cut. The check below is pure counting; no
//! matrices are built.

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::exact::{GaussianRational, Rational};
use crate::ghz::LatticeIndex;

/// Tolerance for inner products when some phase is given as an angle.
pub const FLOAT_ORTHOGONALITY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BoundsError {
    #[error("weight {w} is outside 1..={d}")]
    WeightOutOfRange { d: usize, w: usize },
    #[error("state has {terms} terms but {phases} phases")]
    PhaseCount { terms: usize, phases: usize },
    #[error("level {level} is outside 0..{d}")]
    LevelOutOfRange { d: usize, level: usize },
    #[error("coordinate {coordinate} repeats level {level}")]
    RepeatedLevel { coordinate: usize, level: usize },
    #[error("state {index} has dimension {found}, expected {expected}")]
    DimensionMismatch { index: usize, expected: usize, found: usize },
    #[error("state {index} has weight {found}, expected {expected}")]
    WeightMismatch { index: usize, expected: usize, found: usize },
    #[error("states {a} and {b} are not orthogonal")]
    NotOrthogonal { a: usize, b: usize },
    #[error("set is empty")]
    Empty,
    #[error("unrecognized phase {0:?}; use \"+1\", \"-1\", \"+i\", \"-i\" or an angle in radians")]
    BadPhase(String),
}

/// A unit phase: one of the fourth roots of unity, kept exact, or an
/// arbitrary angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TermPhase {
    /// `i^k` for `k` in `0..4`.
    Root(u8),
    Angle(f64),
}

impl TermPhase {
    pub const PLUS: TermPhase = TermPhase::Root(0);
    pub const MINUS: TermPhase = TermPhase::Root(2);

    fn exact(self) -> Option<GaussianRational> {
        match self {
            TermPhase::Root(k) => Some(match k % 4 {
                0 => GaussianRational::from_int(1),
                1 => GaussianRational::i(),
                2 => GaussianRational::from_int(-1),
                _ => GaussianRational::new(Rational::zero(), Rational::from_integer(-1)),
            }),
            TermPhase::Angle(_) => None,
        }
    }

    fn angle(self) -> f64 {
        match self {
            TermPhase::Root(k) => f64::from(k % 4) * std::f64::consts::FRAC_PI_2,
            TermPhase::Angle(a) => a,
        }
    }
}

impl fmt::Display for TermPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TermPhase::Root(k) => f.write_str(["+1", "+i", "-1", "-i"][(*k % 4) as usize]),
            TermPhase::Angle(a) => write!(f, "{a}"),
        }
    }
}

impl std::str::FromStr for TermPhase {
    type Err = BoundsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "+1" | "1" => Ok(TermPhase::Root(0)),
            "+i" | "i" => Ok(TermPhase::Root(1)),
            "-1" => Ok(TermPhase::Root(2)),
            "-i" => Ok(TermPhase::Root(3)),
            other => other.parse::<f64>().map(TermPhase::Angle).map_err(|_| BoundsError::BadPhase(s.to_string())),
        }
    }
}

impl Serialize for TermPhase {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        match self {
            TermPhase::Root(_) => ser.serialize_str(&self.to_string()),
            TermPhase::Angle(a) => ser.serialize_f64(*a),
        }
    }
}

impl<'de> Deserialize<'de> for TermPhase {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Angle(f64),
        }
        match Repr::deserialize(de)? {
            Repr::Text(s) => s.parse().map_err(serde::de::Error::custom),
            Repr::Angle(a) => Ok(TermPhase::Angle(a)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GhzLikeState {
    d: usize,
    terms: Vec<[usize; 3]>,
    phases: Vec<TermPhase>,
}

#[derive(Deserialize)]
struct RawState {
    d: usize,
    terms: Vec<[usize; 3]>,
    phases: Vec<TermPhase>,
}

impl<'de> Deserialize<'de> for GhzLikeState {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let raw = RawState::deserialize(de)?;
        GhzLikeState::new(raw.d, raw.terms, raw.phases).map_err(serde::de::Error::custom)
    }
}

impl GhzLikeState {
    pub fn new(d: usize, terms: Vec<[usize; 3]>, phases: Vec<TermPhase>) -> Result<Self, BoundsError> {
        let w = terms.len();
        if w == 0 || w > d {
            return Err(BoundsError::WeightOutOfRange { d, w });
        }
        if phases.len() != w {
            return Err(BoundsError::PhaseCount { terms: w, phases: phases.len() });
        }
        for coordinate in 0..3 {
            let mut seen = vec![false; d];
            for t in &terms {
                let level = t[coordinate];
                if level >= d {
                    return Err(BoundsError::LevelOutOfRange { d, level });
                }
                if std::mem::replace(&mut seen[level], true) {
                    return Err(BoundsError::RepeatedLevel { coordinate, level });
                }
            }
        }
        Ok(Self { d, terms, phases })
    }

    /// A lattice state `ψ_{v_1} ⊗ … ⊗ ψ_{v_t}` viewed in `d = 2^t`, with
    /// each party's `t` qubits read as one level (level 1 most significant).
    /// It has full weight `2^t`.
    pub fn from_lattice(v: &LatticeIndex) -> Self {
        let t = v.len();
        let mut terms = vec![[0usize; 3]];
        let mut signs = vec![1i8];
        for g in v.levels() {
            let mut next_terms = Vec::with_capacity(terms.len() * 2);
            let mut next_signs = Vec::with_capacity(terms.len() * 2);
            for (term, sign) in terms.iter().zip(&signs) {
                for (basis, amp) in g.amplitudes() {
                    let bits = [(basis >> 2) & 1, (basis >> 1) & 1, basis & 1];
                    next_terms.push([0, 1, 2].map(|p| term[p] * 2 + bits[p]));
                    next_signs.push(sign * amp);
                }
            }
            terms = next_terms;
            signs = next_signs;
        }
        let phases = signs.iter().map(|&s| if s > 0 { TermPhase::PLUS } else { TermPhase::MINUS }).collect();
        Self::new(1 << t, terms, phases).expect("lattice states are GHZ-like")
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn weight(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> &[[usize; 3]] {
        &self.terms
    }

    pub fn phases(&self) -> &[TermPhase] {
        &self.phases
    }

    fn is_exact(&self) -> bool {
        self.phases.iter().all(|p| matches!(p, TermPhase::Root(_)))
    }
}

/// Whether two states are orthogonal: exactly when both carry only
/// fourth-root phases, otherwise within [`FLOAT_ORTHOGONALITY_TOLERANCE`].
/// Normalization does not affect the answer and is skipped.
pub fn are_orthogonal(a: &GhzLikeState, b: &GhzLikeState) -> bool {
    let pairs = a.terms.iter().zip(&a.phases).filter_map(|(t, pa)| {
        b.terms.iter().position(|u| u == t).map(|k| (*pa, b.phases[k]))
    });
    if a.is_exact() && b.is_exact() {
        let mut acc = GaussianRational::from_int(0);
        for (pa, pb) in pairs {
            acc = acc + pa.exact().expect("exact").conj() * pb.exact().expect("exact");
        }
        acc.norm_sqr().is_zero()
    } else {
        let (mut re, mut im) = (0.0f64, 0.0f64);
        for (pa, pb) in pairs {
            let theta = pb.angle() - pa.angle();
            re += theta.cos();
            im += theta.sin();
        }
        let w = (a.weight() * b.weight()) as f64;
        (re * re + im * im).sqrt() / w.sqrt() <= FLOAT_ORTHOGONALITY_TOLERANCE
    }
}

/// Orthogonal GHZ-like states sharing a dimension and a weight.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GhzLikeSet {
    d: usize,
    states: Vec<GhzLikeState>,
}

#[derive(Deserialize)]
struct RawSet {
    d: usize,
    states: Vec<GhzLikeState>,
}

impl<'de> Deserialize<'de> for GhzLikeSet {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let raw = RawSet::deserialize(de)?;
        GhzLikeSet::new(raw.d, raw.states).map_err(serde::de::Error::custom)
    }
}

impl GhzLikeSet {
    /// Checks dimensions and equal weights. Orthogonality is checked
    /// separately by [`orthogonality_check`].
    pub fn new(d: usize, states: Vec<GhzLikeState>) -> Result<Self, BoundsError> {
        let w = states.first().ok_or(BoundsError::Empty)?.weight();
        for (index, st) in states.iter().enumerate() {
            if st.d != d {
                return Err(BoundsError::DimensionMismatch { index, expected: d, found: st.d });
            }
            if st.weight() != w {
                return Err(BoundsError::WeightMismatch { index, expected: w, found: st.weight() });
            }
        }
        Ok(Self { d, states })
    }

    /// Lattice states as full-weight states in `d = 2^t`.
    pub fn from_lattice(states: &[LatticeIndex]) -> Result<Self, BoundsError> {
        let converted: Vec<GhzLikeState> = states.iter().map(GhzLikeState::from_lattice).collect();
        let d = converted.first().ok_or(BoundsError::Empty)?.d;
        Self::new(d, converted)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn weight(&self) -> usize {
        self.states[0].weight()
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[GhzLikeState] {
        &self.states
    }

    /// The states at the given positions, in that order.
    pub fn subset(&self, positions: &[usize]) -> Result<Self, BoundsError> {
        Self::new(self.d, positions.iter().map(|&p| self.states[p].clone()).collect())
    }
}

/// First non-orthogonal pair `(a, b)` with `a < b`, if any.
pub fn first_non_orthogonal_pair(set: &GhzLikeSet) -> Option<(usize, usize)> {
    let n = set.len();
    (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .find(|&(a, b)| !are_orthogonal(&set.states[a], &set.states[b]))
}

pub fn orthogonality_check(set: &GhzLikeSet) -> bool {
    first_non_orthogonal_pair(set).is_none()
}

/// `d³ / w`.
pub fn cardinality_bound(d: usize, w: usize) -> Result<Rational, BoundsError> {
    if w == 0 || w > d {
        return Err(BoundsError::WeightOutOfRange { d, w });
    }
    Ok(Rational::new((d * d * d) as i64, w as i64))
}

/// True iff `s > d³/w`, which certifies genuine nonlocality. False means
/// only that the bound is inconclusive.
pub fn certify_by_bound(set: &GhzLikeSet) -> Result<bool, BoundsError> {
    if let Some((a, b)) = first_non_orthogonal_pair(set) {
        return Err(BoundsError::NotOrthogonal { a, b });
    }
    let bound = cardinality_bound(set.d, set.weight())?;
    Ok(Rational::from_integer(set.len() as i64) > bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ghz::GhzIndex;

    fn pm(d: usize, a: [usize; 3], b: [usize; 3], sign: TermPhase) -> GhzLikeState {
        GhzLikeState::new(d, vec![a, b], vec![TermPhase::PLUS, sign]).unwrap()
    }

    #[test]
    fn bound_values() {
        assert_eq!(cardinality_bound(3, 2).unwrap(), Rational::new(27, 2));
        assert_eq!(cardinality_bound(2, 2).unwrap(), Rational::from_integer(4));
        assert_eq!(cardinality_bound(4, 4).unwrap(), Rational::from_integer(16));
        assert!(cardinality_bound(3, 4).is_err());
        assert!(cardinality_bound(3, 0).is_err());
    }

    #[test]
    fn full_weight_threshold_is_d_squared() {
        for d in 1..8 {
            assert_eq!(cardinality_bound(d, d).unwrap(), Rational::from_integer((d * d) as i64));
        }
    }

    #[test]
    fn state_invariants() {
        assert!(matches!(
            GhzLikeState::new(2, vec![[0, 0, 0], [0, 1, 1]], vec![TermPhase::PLUS; 2]),
            Err(BoundsError::RepeatedLevel { coordinate: 0, level: 0 })
        ));
        assert!(GhzLikeState::new(2, vec![[0, 0, 0], [1, 1, 2]], vec![TermPhase::PLUS; 2]).is_err());
        assert!(GhzLikeState::new(2, vec![[0, 0, 0]], vec![]).is_err());
    }

    #[test]
    fn sign_flip_pair_is_orthogonal() {
        let a = pm(2, [0, 0, 0], [1, 1, 1], TermPhase::PLUS);
        let b = pm(2, [0, 0, 0], [1, 1, 1], TermPhase::MINUS);
        assert!(are_orthogonal(&a, &b));
        assert!(!are_orthogonal(&a, &a));
        let set = GhzLikeSet::new(2, vec![a.clone(), a]).unwrap();
        assert!(!orthogonality_check(&set));
        assert_eq!(certify_by_bound(&set), Err(BoundsError::NotOrthogonal { a: 0, b: 1 }));
    }

    #[test]
    fn angle_phases_use_tolerance() {
        let a = pm(2, [0, 0, 0], [1, 1, 1], TermPhase::Angle(0.3));
        let b = pm(2, [0, 0, 0], [1, 1, 1], TermPhase::Angle(0.3 + std::f64::consts::PI));
        assert!(are_orthogonal(&a, &b));
        let c = pm(2, [0, 0, 0], [1, 1, 1], TermPhase::Angle(0.3 + std::f64::consts::PI - 1e-6));
        assert!(!are_orthogonal(&a, &c));
    }

    #[test]
    fn lattice_conversion_matches_basis_amplitudes() {
        let s = GhzLikeState::from_lattice(&LatticeIndex::single(GhzIndex::new(5).unwrap()));
        assert_eq!(s.d(), 2);
        assert_eq!(s.terms(), &[[0, 1, 0], [1, 0, 1]]);
        assert_eq!(s.phases(), &[TermPhase::PLUS, TermPhase::MINUS]);
        let all: Vec<LatticeIndex> = (0..64).map(|f| LatticeIndex::from_flat(2, f)).collect();
        let set = GhzLikeSet::from_lattice(&all).unwrap();
        assert_eq!((set.d(), set.weight()), (4, 4));
        assert!(orthogonality_check(&set));
    }

    #[test]
    fn json_round_trip() {
        let s = pm(3, [0, 1, 2], [2, 0, 1], TermPhase::Root(3));
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(text, r#"{"d":3,"terms":[[0,1,2],[2,0,1]],"phases":["+1","-i"]}"#);
        assert_eq!(serde_json::from_str::<GhzLikeState>(&text).unwrap(), s);
        assert!(serde_json::from_str::<GhzLikeState>(r#"{"d":1,"terms":[[0,0,0],[0,0,0]],"phases":["+1","+1"]}"#).is_err());
    }
}
