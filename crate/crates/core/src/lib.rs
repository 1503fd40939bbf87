//! Certification of distinguishability-based genuine nonlocality for sets of
//! GHZ-lattice states.
//!
//! A set of orthogonal tripartite states is genuinely nonlocal when it cannot
//! be perfectly discriminated by LOCC across any of the three bipartitions
//! `A|BC`, `B|CA`, `C|AB`. This crate decides the stronger, computable
//! sufficient condition: PPT-indistinguishability across every cut. For
//! tensor products of the three-qubit GHZ basis the PPT discrimination
//! semidefinite programs collapse to linear programs over diagonal operators,
//! which are solved here exactly over the rationals.
//!
//! Layout:
//!
//! - [`exact`]: rationals, Gaussian rationals, dense matrices, LDL* PSD test.
//! - [`ghz`]: the GHZ basis, lattice states, partial transposes, dephasing.
//! - [`lp`]: exact two-phase simplex with dual multipliers.
//! - [`certifier`]: discrimination LPs, verdicts, certificate checking.
//! - [`bounds`]: the cardinality/weight bound for general GHZ-like sets.
//! - [`protocols`]: explicit LOCC parity protocols.
//! - [`search`]: small certified subsets of a candidate set.
//! - [`io`] and [`fixtures`]: file formats and the bundled state sets.
//! - [`suite`]: the end-to-end reproduction checks.

#![forbid(unsafe_code)]

pub mod bounds;
pub mod certifier;
pub mod exact;
pub mod fixtures;
pub mod ghz;
pub mod io;
pub mod lp;
pub mod protocols;
pub mod search;
pub mod suite;

pub use certifier::{Certificate, Classification, StateSet, Verdict};
pub use exact::{GaussianRational, Matrix, Rational};
pub use ghz::{Bipartition, DenseOperator, DiagOperator, GhzIndex, LatticeIndex};
pub use lp::{LpInstance, LpResult, LpStatus};
