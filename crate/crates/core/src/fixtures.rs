//! Bundled state sets and dual certificates.
//!
//! Everything here is built in code. The JSON files under `fixtures/` at
//! the workspace root are generated from these builders; the fixture test
//! compares them byte for byte and rewrites them when `NONLOC_BLESS=1`.

use std::path::{Path, PathBuf};

use crate::bounds::{GhzLikeSet, GhzLikeState, TermPhase};
use crate::certifier::{Certificate, StateSet};
use crate::exact::Rational;
use crate::ghz::{Bipartition, DiagOperator, LatticeIndex};
use crate::io::{self, IoError};

/// Set `NONLOC_BLESS=1` to regenerate the fixture files.
pub const BLESS_VAR: &str = "NONLOC_BLESS";

/// `fixtures/` at the workspace root.
pub fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn lattice(values: &[&[u8]]) -> StateSet {
    let owned: Vec<Vec<u8>> = values.iter().map(|v| v.to_vec()).collect();
    StateSet::from_values(&owned).expect("fixture states are valid")
}

/// All eight GHZ basis states.
pub fn ghz_basis() -> StateSet {
    StateSet::full_basis(1)
}

/// `{ψ1, ..., ψ5}`.
pub fn s5() -> StateSet {
    lattice(&[&[1], &[2], &[3], &[4], &[5]])
}

/// `S5 ⊗ ψ0` followed by `S5 ⊗ ψ7`.
pub fn s10() -> StateSet {
    s5().lift()
}

/// The eight-element subset of [`s10`] that stays certified.
pub fn s8() -> StateSet {
    lattice(&[&[1, 0], &[2, 0], &[3, 0], &[1, 7], &[2, 7], &[3, 7], &[4, 7], &[5, 7]])
}

/// `S8 ⊗ ψ0` followed by `S8 ⊗ ψ7`, at three levels.
pub fn s16() -> StateSet {
    s8().lift()
}

/// `{ψa, ψb, ψc, ψd}^⊗t`, in lexicographic order.
pub fn product_set(quadruple: [u8; 4], levels: usize) -> StateSet {
    let mut states: Vec<Vec<u8>> = vec![Vec::new()];
    for _ in 0..levels {
        states = states
            .into_iter()
            .flat_map(|prefix| {
                quadruple.iter().map(move |&g| {
                    let mut v = prefix.clone();
                    v.push(g);
                    v
                })
            })
            .collect();
    }
    StateSet::from_values(&states).expect("distinct quadruple gives distinct states")
}

/// The 16 two-level states over the quadruple `{0, 7, 3, 4}`.
pub fn l16() -> StateSet {
    product_set([0, 7, 3, 4], 2)
}

/// `{ψ0, ψ7, ψ3, ψ4}`.
pub fn ghz_basis_4subset_0734() -> StateSet {
    lattice(&[&[0], &[7], &[3], &[4]])
}

/// 26 weight-2 GHZ-like states in `C^3 ⊗ C^3 ⊗ C^3`, four families of
/// `|x⟩ ± |y⟩` plus `|000⟩ ± |222⟩`. The shifts `i ⊕ 1` are taken mod 3.
pub fn n26() -> GhzLikeSet {
    let up = |x: usize| (x + 1) % 3;
    let mut pairs: Vec<([usize; 3], [usize; 3])> = Vec::new();
    for i in 0..2 {
        for j in 0..2 {
            pairs.push(([0, i, up(j)], [2, up(i), j]));
        }
    }
    for i in 0..2 {
        for j in 0..2 {
            pairs.push(([up(i), 0, j], [i, 2, up(j)]));
        }
    }
    for i in 0..2 {
        for j in 0..2 {
            pairs.push(([i, up(j), 0], [up(i), j, 2]));
        }
    }
    pairs.push(([0, 0, 0], [2, 2, 2]));
    let states = pairs
        .into_iter()
        .flat_map(|(x, y)| {
            [TermPhase::PLUS, TermPhase::MINUS].map(|sign| {
                GhzLikeState::new(3, vec![x, y], vec![TermPhase::PLUS, sign]).expect("valid weight-2 state")
            })
        })
        .collect();
    GhzLikeSet::new(3, states).expect("the 26 states are orthogonal")
}

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn op(levels: usize, terms: &[(Rational, &[u8])]) -> DiagOperator {
    let indices: Vec<LatticeIndex> = terms.iter().map(|(_, v)| LatticeIndex::from_values(v).expect("valid")).collect();
    DiagOperator::from_terms(levels, terms.iter().map(|(c, _)| c.clone()).zip(indices.iter()))
        .expect("levels agree")
}

fn psi(g: u8) -> DiagOperator {
    op(1, &[(r(1, 1), &[g])])
}

/// `ψ_g ⊗ (ψ0 + ψ7)`.
fn psi_tail(g: u8) -> DiagOperator {
    op(2, &[(r(1, 1), &[g, 0]), (r(1, 1), &[g, 7])])
}

/// Optimal dual solutions for [`s5`] with values `4/5, 4/5, 3/5`.
pub fn s5_certificate(cut: Bipartition) -> Certificate {
    let h = || r(1, 2);
    let one = || r(1, 1);
    let zero = || DiagOperator::zero(1);
    let (y, qs, value) = match cut {
        Bipartition::A => (
            op(1, &[(h(), &[1]), (h(), &[2]), (one(), &[3]), (one(), &[4]), (h(), &[5]), (h(), &[6])]),
            vec![psi(5), psi(6), zero(), zero(), psi(1)],
            r(4, 5),
        ),
        Bipartition::B => (
            op(1, &[(h(), &[1]), (one(), &[2]), (h(), &[3]), (h(), &[4]), (one(), &[5]), (h(), &[6])]),
            vec![psi(4), zero(), psi(6), psi(1), zero()],
            r(4, 5),
        ),
        Bipartition::C => (
            op(1, &[(one(), &[1]), (h(), &[2]), (h(), &[3]), (h(), &[4]), (h(), &[5])]),
            vec![psi(2), psi(4), psi(5), psi(2), psi(3)],
            r(3, 5),
        ),
    };
    Certificate { cut, y, qs, claimed_value: value }
}

/// The [`s5`] certificates tensored with `ψ0 + ψ7`, for [`s10`].
pub fn s10_certificate(cut: Bipartition) -> Certificate {
    s5_certificate(cut).lift()
}

/// Optimal dual solutions for [`s8`] with values `7/8, 7/8, 3/4`.
pub fn s8_certificate(cut: Bipartition) -> Certificate {
    // (coefficient numerator over 2, level-one index, whether ψ_g ⊗ ψ0 is present)
    let (y_terms, q_heads, value): (&[(i64, u8, bool)], [Option<u8>; 8], Rational) = match cut {
        Bipartition::A => (
            &[(1, 1, true), (1, 2, true), (2, 3, true), (2, 4, false), (1, 5, true), (1, 6, true)],
            [Some(5), Some(6), None, Some(5), Some(6), None, None, Some(1)],
            r(7, 8),
        ),
        Bipartition::B => (
            &[(1, 1, true), (2, 2, true), (1, 3, true), (1, 4, true), (2, 5, false), (1, 6, true)],
            [Some(4), None, Some(6), Some(4), None, Some(6), Some(1), None],
            r(7, 8),
        ),
        Bipartition::C => (
            &[(2, 1, true), (1, 2, true), (1, 3, true), (1, 4, true), (1, 5, true)],
            [None, Some(4), Some(5), Some(2), Some(4), Some(5), Some(2), Some(3)],
            r(3, 4),
        ),
    };
    let mut terms: Vec<(Rational, Vec<u8>)> = Vec::new();
    for &(halves, g, with_zero) in y_terms {
        if with_zero {
            terms.push((r(halves, 2), vec![g, 0]));
        }
        terms.push((r(halves, 2), vec![g, 7]));
    }
    let borrowed: Vec<(Rational, &[u8])> = terms.iter().map(|(c, v)| (c.clone(), v.as_slice())).collect();
    let y = op(2, &borrowed);
    let qs = q_heads.iter().map(|h| h.map_or_else(|| DiagOperator::zero(2), psi_tail)).collect();
    Certificate { cut, y, qs, claimed_value: value }
}

/// A named fixture file and its canonical contents.
pub struct FixtureFile {
    pub name: String,
    pub contents: String,
}

fn cut_tag(cut: Bipartition) -> &'static str {
    match cut {
        Bipartition::A => "a",
        Bipartition::B => "b",
        Bipartition::C => "c",
    }
}

/// Every bundled fixture file.
pub fn all_files() -> Vec<FixtureFile> {
    let set = |name: &str, s: StateSet| FixtureFile { name: format!("{name}.json"), contents: io::state_set_json(&s) };
    let mut files = vec![
        set("ghz_basis", ghz_basis()),
        set("ghz_basis_4subset_0734", ghz_basis_4subset_0734()),
        set("s5", s5()),
        set("s8", s8()),
        set("s10", s10()),
        set("s16", s16()),
        set("l16", l16()),
        set("product_0123_t2", product_set([0, 1, 2, 3], 2)),
        FixtureFile { name: "n26.json".to_string(), contents: io::ghz_like_set_json(&n26()) },
    ];
    let builders: [(&str, fn(Bipartition) -> Certificate); 3] =
        [("s5", s5_certificate), ("s10", s10_certificate), ("s8", s8_certificate)];
    for (name, build) in builders {
        for cut in Bipartition::ALL {
            files.push(FixtureFile {
                name: format!("{name}_cert_{}.json", cut_tag(cut)),
                contents: io::certificate_json(&build(cut)),
            });
        }
    }
    files
}

/// Writes every fixture into `dir`.
pub fn write_all(dir: &Path) -> Result<(), IoError> {
    std::fs::create_dir_all(dir).map_err(|source| IoError::File { path: dir.display().to_string(), source })?;
    for f in all_files() {
        io::write_text(&dir.join(&f.name), &f.contents)?;
    }
    Ok(())
}
