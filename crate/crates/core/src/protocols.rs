//! Explicit LOCC protocols built from parity measurements.
//!
//! Across cut `X`, the two joined parties measure whether their qubits at
//! one level agree (`P1 = |00><00| + |11><11|`) or differ
//! (`P2 = |01><01| + |10><10|`). On the GHZ basis this splits the eight
//! states into the two Bell-equivalent quadruples of `X` without disturbing
//! them. Two orthogonal states are always locally distinguishable, so a
//! level whose candidates shrink to at most two values can then be read out
//! exactly. Three states of one quadruple are not, and such a branch is
//! marked failed.
//!
//! A successful protocol is an LOCC measurement, hence PPT, so it forces
//! `β_X = 1`. A failed one proves nothing.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::certifier::StateSet;
use crate::ghz::{Bipartition, GhzIndex, LatticeIndex};

/// A parity measurement by the two parties joined against `cut`'s single
/// party, on the qubits of one level (0-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ParityMeasurement {
    pub cut: Bipartition,
    pub level: usize,
}

/// Outcome `P1` (joined qubits agree) or `P2` (they differ).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Parity {
    #[serde(rename = "P1")]
    Even,
    #[serde(rename = "P2")]
    Odd,
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "P1",
            Parity::Odd => "P2",
        })
    }
}

/// Which parity projector supports `ψ_i` for the parties joined against
/// `cut`.
pub fn parity_of(i: GhzIndex, cut: Bipartition) -> Parity {
    let (b, _) = i.support();
    let bits = [(b >> 2) & 1, (b >> 1) & 1, b & 1];
    let joined: Vec<usize> = (0..3).filter(|&p| p != cut.party()).map(|p| bits[p]).collect();
    if joined[0] == joined[1] {
        Parity::Even
    } else {
        Parity::Odd
    }
}

/// Splits `states` by parity outcome: `(P1 part, P2 part)`, each in input
/// order.
pub fn reduce_by_parity(states: &[GhzIndex], cut: Bipartition) -> (Vec<GhzIndex>, Vec<GhzIndex>) {
    states.iter().partition(|&&i| parity_of(i, cut) == Parity::Even)
}

/// Why a branch ends.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "rule")]
pub enum Leaf {
    /// At most two states remain; they are orthogonal, hence locally
    /// distinguishable.
    TwoStateRule,
    /// At least three candidate values remain at `level` inside one
    /// Bell-equivalent quadruple; the protocol does not continue.
    Failed { level: usize, candidates: Vec<u8> },
}

/// Transcript tree. Every state of the parent appears in exactly one child.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "node")]
pub enum Transcript {
    Leaf {
        states: Vec<LatticeIndex>,
        leaf: Leaf,
    },
    Parity {
        measurement: ParityMeasurement,
        branches: Vec<(Parity, Transcript)>,
    },
    /// At most two candidates remain at `level`; the two-state rule applied
    /// to that level's share identifies the value.
    ReadLevel {
        level: usize,
        branches: Vec<(u8, Transcript)>,
    },
}

impl Transcript {
    pub fn succeeded(&self) -> bool {
        match self {
            Transcript::Leaf { leaf, .. } => *leaf == Leaf::TwoStateRule,
            Transcript::Parity { branches, .. } => branches.iter().all(|(_, t)| t.succeeded()),
            Transcript::ReadLevel { branches, .. } => branches.iter().all(|(_, t)| t.succeeded()),
        }
    }

    /// All leaf state lists, left to right.
    pub fn leaves(&self) -> Vec<&[LatticeIndex]> {
        match self {
            Transcript::Leaf { states, .. } => vec![states.as_slice()],
            Transcript::Parity { branches, .. } => branches.iter().flat_map(|(_, t)| t.leaves()).collect(),
            Transcript::ReadLevel { branches, .. } => branches.iter().flat_map(|(_, t)| t.leaves()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProtocolOutcome {
    pub cut: Bipartition,
    pub distinguishable: bool,
    pub transcript: Transcript,
}

fn run(states: Vec<LatticeIndex>, cut: Bipartition, level: usize) -> Transcript {
    if states.len() <= 2 {
        return Transcript::Leaf { states, leaf: Leaf::TwoStateRule };
    }
    let t = states[0].len();
    if level >= t {
        // Distinct states cannot agree on every level.
        unreachable!("more than two states share every level");
    }
    let value = |v: &LatticeIndex| v.levels()[level];
    let mut branches = Vec::new();
    for parity in [Parity::Even, Parity::Odd] {
        let part: Vec<LatticeIndex> =
            states.iter().filter(|v| parity_of(value(v), cut) == parity).cloned().collect();
        if part.is_empty() {
            continue;
        }
        let candidates: BTreeSet<u8> = part.iter().map(|v| value(v).value()).collect();
        let child = if part.len() <= 2 {
            Transcript::Leaf { states: part, leaf: Leaf::TwoStateRule }
        } else if candidates.len() > 2 {
            Transcript::Leaf {
                states: part,
                leaf: Leaf::Failed { level, candidates: candidates.into_iter().collect() },
            }
        } else {
            let reads = candidates
                .iter()
                .map(|&g| {
                    let sub = part.iter().filter(|v| value(v).value() == g).cloned().collect();
                    (g, run(sub, cut, level + 1))
                })
                .collect();
            Transcript::ReadLevel { level, branches: reads }
        };
        branches.push((parity, child));
    }
    Transcript::Parity { measurement: ParityMeasurement { cut, level }, branches }
}

/// The level-by-level parity protocol across one cut.
pub fn lattice_protocol_at(set: &StateSet, cut: Bipartition) -> ProtocolOutcome {
    let transcript = run(set.states().to_vec(), cut, 0);
    ProtocolOutcome { cut, distinguishable: transcript.succeeded(), transcript }
}

/// First cut (in order `A|BC, B|CA, C|AB`) at which the parity protocol
/// succeeds.
pub fn lattice_protocol(set: &StateSet) -> Option<ProtocolOutcome> {
    Bipartition::ALL.iter().map(|&cut| lattice_protocol_at(set, cut)).find(|o| o.distinguishable)
}

/// Every cut at which the parity protocol succeeds.
pub fn successful_cuts(set: &StateSet) -> Vec<Bipartition> {
    Bipartition::ALL.iter().copied().filter(|&cut| lattice_protocol_at(set, cut).distinguishable).collect()
}

/// Single-level version: a cut succeeds iff both parity classes hold at
/// most two of the states.
pub fn find_distinguishing_bipartition(states: &[GhzIndex]) -> Option<(Bipartition, ProtocolOutcome)> {
    let lattice: Vec<LatticeIndex> = states.iter().map(|&i| LatticeIndex::single(i)).collect();
    let set = StateSet::new(lattice).ok()?;
    lattice_protocol(&set).map(|o| (o.cut, o))
}

/// Position of a four-subset of the GHZ basis in the tetrahedron whose
/// vertices are the phase pairs `{ψ_i, ψ_{7-i}}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TetrahedronShape {
    /// One state from each of the four pairs.
    Vertices,
    /// Both states of one pair plus one from each of two others.
    Face,
    /// Both states of two pairs.
    Edge,
}

impl TetrahedronShape {
    /// Number of cuts at which the parity protocol succeeds.
    pub fn expected_cuts(self) -> usize {
        match self {
            TetrahedronShape::Vertices => 3,
            TetrahedronShape::Face => 1,
            TetrahedronShape::Edge => 2,
        }
    }
}

/// Shape of a four-subset, or `None` if it is not one.
pub fn tetrahedron_shape(states: &[GhzIndex]) -> Option<TetrahedronShape> {
    let distinct: BTreeSet<u8> = states.iter().map(|i| i.value()).collect();
    if distinct.len() != 4 || states.len() != 4 {
        return None;
    }
    let mut counts = [0usize; 4];
    for i in states {
        counts[i.support().0] += 1;
    }
    let full = counts.iter().filter(|&&c| c == 2).count();
    Some(match full {
        0 => TetrahedronShape::Vertices,
        1 => TetrahedronShape::Face,
        _ => TetrahedronShape::Edge,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ghz::transform::quadruples;

    fn g(values: &[u8]) -> Vec<GhzIndex> {
        values.iter().map(|&v| GhzIndex::new(v).unwrap()).collect()
    }

    fn values(v: &[GhzIndex]) -> Vec<u8> {
        v.iter().map(|i| i.value()).collect()
    }

    #[test]
    fn full_basis_split_at_a() {
        let (p1, p2) = reduce_by_parity(&GhzIndex::ALL, Bipartition::A);
        assert_eq!(values(&p1), vec![0, 3, 4, 7]);
        assert_eq!(values(&p2), vec![1, 2, 5, 6]);
    }

    #[test]
    fn parity_classes_are_the_transform_quadruples() {
        for cut in Bipartition::ALL {
            let (p1, p2) = reduce_by_parity(&GhzIndex::ALL, cut);
            let [q1, q2] = quadruples(cut);
            let sorted = |q: [usize; 4]| {
                let mut v: Vec<u8> = q.iter().map(|&x| x as u8).collect();
                v.sort_unstable();
                v
            };
            assert_eq!(values(&p1), sorted(q1), "{cut}");
            assert_eq!(values(&p2), sorted(q2), "{cut}");
        }
    }

    #[test]
    fn single_state_goes_to_one_side() {
        for cut in Bipartition::ALL {
            let (p1, p2) = reduce_by_parity(&g(&[0]), cut);
            assert_eq!((p1.len(), p2.len()), (1, 0));
        }
    }

    #[test]
    fn quadruple_0734_needs_b() {
        let (cut, outcome) = find_distinguishing_bipartition(&g(&[0, 7, 3, 4])).unwrap();
        assert_eq!(cut, Bipartition::B);
        assert!(outcome.distinguishable);
        let set = StateSet::from_values(&[vec![0], vec![7], vec![3], vec![4]]).unwrap();
        assert!(!lattice_protocol_at(&set, Bipartition::A).distinguishable);
    }

    #[test]
    fn only_a_for_0712() {
        let set = StateSet::from_values(&[vec![0], vec![7], vec![1], vec![2]]).unwrap();
        assert_eq!(successful_cuts(&set), vec![Bipartition::A]);
    }

    #[test]
    fn five_subsets_fail_everywhere() {
        let all: Vec<u8> = (0..8).collect();
        for mask in 0u32..256 {
            if mask.count_ones() != 5 {
                continue;
            }
            let pick: Vec<u8> = all.iter().copied().filter(|&i| mask >> i & 1 == 1).collect();
            assert!(find_distinguishing_bipartition(&g(&pick)).is_none(), "{pick:?}");
        }
    }

    #[test]
    fn leaves_partition_the_input() {
        let set = StateSet::from_values(&[vec![0, 1], vec![7, 2], vec![3, 3], vec![4, 0], vec![1, 1]]).unwrap();
        for cut in Bipartition::ALL {
            let out = lattice_protocol_at(&set, cut);
            let mut seen: Vec<LatticeIndex> = out.transcript.leaves().into_iter().flatten().cloned().collect();
            seen.sort();
            let mut input = set.states().to_vec();
            input.sort();
            assert_eq!(seen, input);
        }
    }

    #[test]
    fn l16_on_0734_succeeds_at_b() {
        let q = [0u8, 7, 3, 4];
        let vals: Vec<Vec<u8>> = q.iter().flat_map(|&a| q.iter().map(move |&b| vec![a, b])).collect();
        let set = StateSet::from_values(&vals).unwrap();
        let out = lattice_protocol(&set).unwrap();
        assert_eq!(out.cut, Bipartition::B);
    }

    #[test]
    fn transcript_serializes() {
        let set = StateSet::from_values(&[vec![0], vec![7], vec![3], vec![4]]).unwrap();
        let out = lattice_protocol_at(&set, Bipartition::A);
        let json = serde_json::to_value(&out).unwrap();
        assert_eq!(json["distinguishable"], false);
        assert_eq!(json["transcript"]["node"], "parity");
    }
}
