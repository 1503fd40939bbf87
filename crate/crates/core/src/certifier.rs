//! PPT-discrimination linear programs for sets of GHZ-lattice states.
//!
//! For a cut `X` and states `Ψ_{v(1)}, …, Ψ_{v(s)}` the dual program is
//!
//! ```text
//! β_X = min (1/s) Σ_i y_i
//!       s.t. y_i - [(T_X)^{⊗t} q_k]_i >= δ_{i, v(k)}   for every i, k
//!            q_k >= 0,  y free
//! ```
//!
//! and the primal maximizes the average success probability
//! `(1/s) Σ_k p_k[v(k)]` over diagonal POVMs `Σ_k p_k = 1` whose partial
//! transposes stay nonnegative. `β_X < 1` for all three cuts certifies that
//! the set cannot be perfectly discriminated by PPT measurements, hence not
//! by LOCC, across any bipartition. `β_X = 1` says nothing about LOCC.

use std::collections::HashSet;
use std::fmt;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::exact::{LinalgError, Rational};
use crate::ghz::transform::MAX_PT_POWER_LEVELS;
use crate::ghz::{
    apply_pt_diag, lattice_dim, partial_transpose_dense, Bipartition, DenseOperator, DiagOperator, GhzError,
    GhzIndex, LatticeIndex, PtPower,
};
use crate::lp::{self, LpInstance, LpResult, LpStatus, Relation, Sense};

/// Largest level count for which the certifier builds LPs. Dense
/// cross-checks of certificates additionally require `t <= 2`.
pub const MAX_CERTIFY_LEVELS: usize = MAX_PT_POWER_LEVELS;
pub const MAX_DENSE_CHECK_LEVELS: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CertifierError {
    #[error("state set is empty")]
    EmptySet,
    #[error("state {0} appears more than once")]
    Duplicate(LatticeIndex),
    #[error("state {index} has {found} levels, expected {expected}")]
    LevelMismatch { index: usize, expected: usize, found: usize },
    #[error("t = {levels} exceeds the supported maximum of {max}")]
    TooManyLevels { levels: usize, max: usize },
    #[error("certificate has {found} q-vectors for {expected} states")]
    WrongQCount { expected: usize, found: usize },
    #[error("certificate operators have {found} levels, state set has {expected}")]
    CertificateLevels { expected: usize, found: usize },
    #[error("LP for cut {cut} ended {status}")]
    Solver { cut: Bipartition, status: LpStatus },
    #[error("duality gap at cut {cut}: primal {primal}, dual {dual}")]
    DualityGap { cut: Bipartition, primal: Rational, dual: Rational },
    #[error("diagonal and dense certificate checks disagree at cut {0}")]
    CheckDisagreement(Bipartition),
    #[error("lifted {what} fails verification at cut {cut}")]
    LiftRejected { cut: Bipartition, what: &'static str },
    #[error(transparent)]
    Ghz(#[from] GhzError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// An ordered list of distinct lattice states with a common level count.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StateSet {
    levels: usize,
    states: Vec<LatticeIndex>,
}

impl StateSet {
    pub fn new(states: Vec<LatticeIndex>) -> Result<Self, CertifierError> {
        let first = states.first().ok_or(CertifierError::EmptySet)?;
        let levels = first.len();
        let mut seen = HashSet::with_capacity(states.len());
        for (index, v) in states.iter().enumerate() {
            if v.len() != levels {
                return Err(CertifierError::LevelMismatch { index, expected: levels, found: v.len() });
            }
            if !seen.insert(v) {
                return Err(CertifierError::Duplicate(v.clone()));
            }
        }
        Ok(Self { levels, states })
    }

    /// Convenience constructor from raw index vectors.
    pub fn from_values(values: &[Vec<u8>]) -> Result<Self, CertifierError> {
        let states = values.iter().map(|v| LatticeIndex::from_values(v)).collect::<Result<Vec<_>, _>>()?;
        Self::new(states)
    }

    /// All `8^t` lattice states in ascending order.
    pub fn full_basis(levels: usize) -> Self {
        let states = (0..lattice_dim(levels)).map(|f| LatticeIndex::from_flat(levels, f)).collect();
        Self { levels, states }
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[LatticeIndex] {
        &self.states
    }

    /// The states at the given positions, in that order.
    pub fn subset(&self, positions: &[usize]) -> Result<Self, CertifierError> {
        Self::new(positions.iter().map(|&p| self.states[p].clone()).collect())
    }

    /// `{v ⊗ ψ0 : v ∈ S} ∪ {v ⊗ ψ7 : v ∈ S}`, in that order.
    pub fn lift(&self) -> Self {
        let tail = |g: u8| LatticeIndex::single(GhzIndex::new(g).expect("0 and 7 are valid"));
        let states = [0u8, 7]
            .iter()
            .flat_map(|&g| self.states.iter().map(move |v| v.tensor(&tail(g))))
            .collect();
        Self { levels: self.levels + 1, states }
    }

    /// The set whose [`lift`](Self::lift) this is, if any.
    pub fn unlift(&self) -> Option<Self> {
        if self.levels < 2 || self.len() % 2 != 0 {
            return None;
        }
        let half = self.len() / 2;
        let base: Vec<LatticeIndex> = self.states[..half]
            .iter()
            .map(|v| {
                let (head, last) = v.levels().split_at(self.levels - 1);
                (last[0].value() == 0).then(|| LatticeIndex::new(head.to_vec()).expect("nonempty prefix"))
            })
            .collect::<Option<_>>()?;
        let base = Self::new(base).ok()?;
        (base.lift() == *self).then_some(base)
    }

    fn check_supported(&self) -> Result<(), CertifierError> {
        if self.levels > MAX_CERTIFY_LEVELS {
            return Err(CertifierError::TooManyLevels { levels: self.levels, max: MAX_CERTIFY_LEVELS });
        }
        Ok(())
    }
}

impl fmt::Display for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.states.iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// A dual feasible point `(Y, Q_1..Q_s)` for one cut, with diagonal
/// operators given by their lattice-basis coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub cut: Bipartition,
    pub y: DiagOperator,
    pub qs: Vec<DiagOperator>,
    pub claimed_value: Rational,
}

impl Certificate {
    /// `y = 1`, `q_k = 0`: always feasible, value `8^t / s`.
    pub fn trivial(set: &StateSet, cut: Bipartition) -> Self {
        let y = DiagOperator::identity(set.levels());
        let claimed_value = Rational::new(lattice_dim(set.levels()) as i64, set.len() as i64);
        Self { cut, y, qs: vec![DiagOperator::zero(set.levels()); set.len()], claimed_value }
    }

    /// Certificate for [`StateSet::lift`] of the original set:
    /// `Y ⊗ (ψ0 + ψ7)`, with each `Q_k ⊗ (ψ0 + ψ7)` used for both lifted
    /// copies of state `k`. Its value equals the original one.
    pub fn lift(&self) -> Self {
        let mut tail = DiagOperator::zero(1);
        let tail_terms = [LatticeIndex::from_values(&[0]).unwrap(), LatticeIndex::from_values(&[7]).unwrap()];
        for v in &tail_terms {
            tail = tail.add(&DiagOperator::basis(v));
        }
        let y = self.y.tensor(&tail);
        let lifted: Vec<DiagOperator> = self.qs.iter().map(|q| q.tensor(&tail)).collect();
        let qs = lifted.iter().chain(lifted.iter()).cloned().collect();
        Self { cut: self.cut, y, qs, claimed_value: self.claimed_value.clone() }
    }
}

/// A primal feasible point for one cut: diagonal POVM elements `p_k`, one
/// per state, with `Σ_k p_k = 1` and `T_X(p_k) >= 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Measurement {
    pub cut: Bipartition,
    pub elements: Vec<DiagOperator>,
}

impl Measurement {
    /// Measurement for [`StateSet::lift`]: the last level is read out by the
    /// product measurement `{ψ0..ψ3, ψ4..ψ7}`, which separates `ψ0` from
    /// `ψ7`, and the rest by the original measurement. Its success
    /// probability equals the original one.
    pub fn lift(&self) -> Self {
        let half = |range: std::ops::Range<u8>| {
            range.fold(DiagOperator::zero(1), |acc, g| {
                acc.add(&DiagOperator::basis(&LatticeIndex::from_values(&[g]).expect("valid index")))
            })
        };
        let (even, odd) = (half(0..4), half(4..8));
        let elements = [even, odd]
            .iter()
            .flat_map(|tail| self.elements.iter().map(move |p| p.tensor(tail)))
            .collect();
        Self { cut: self.cut, elements }
    }
}

/// Outcome of checking a measurement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasurementCheck {
    pub feasible: bool,
    /// `(1/s) Σ_k p_k[v(k)]`.
    pub value: Rational,
}

/// Checks `p_k >= 0`, `Σ_k p_k = 1` and `T_X(p_k) >= 0` exactly.
pub fn verify_measurement(set: &StateSet, m: &Measurement) -> Result<MeasurementCheck, CertifierError> {
    if m.elements.len() != set.len() {
        return Err(CertifierError::WrongQCount { expected: set.len(), found: m.elements.len() });
    }
    set.check_supported()?;
    let t = set.levels();
    if let Some(op) = m.elements.iter().find(|op| op.levels() != t) {
        return Err(CertifierError::CertificateLevels { expected: t, found: op.levels() });
    }
    let nonneg = |op: &DiagOperator| op.coeffs().iter().all(|c| !c.is_negative());
    let total = m.elements.iter().fold(DiagOperator::zero(t), |acc, p| acc.add(p));
    let feasible = total == DiagOperator::identity(t)
        && m.elements.iter().all(|p| nonneg(p) && nonneg(&apply_pt_diag(p, m.cut)));
    let hits: Rational = m.elements.iter().zip(set.states()).map(|(p, v)| p.coeff(v).clone()).sum();
    Ok(MeasurementCheck { feasible, value: hits / Rational::from_integer(set.len() as i64) })
}

/// Outcome of checking a certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateCheck {
    pub feasible: bool,
    /// `(1/s) · tr Y`.
    pub value: Rational,
    pub value_matches_claim: bool,
    /// Whether the dense re-check ran (only for `t <= 2`).
    pub dense_checked: bool,
    /// First violated constraint, if any. State numbers are 1-based.
    pub violation: Option<Violation>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NegativeQ { state: usize, index: LatticeIndex },
    Constraint { state: usize, index: LatticeIndex },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NegativeQ { state, index } => write!(f, "q_{state} is negative at {index}"),
            Violation::Constraint { state, index } => {
                write!(f, "Y - Φ_{state} - T(Q_{state}) is negative at {index}")
            }
        }
    }
}

/// Per-cut result of [`certify`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "cuts")]
pub enum Classification {
    CertifiedGenuinelyNonlocal,
    /// `β_X = 1` at the listed cuts: the PPT criterion cannot certify there.
    /// This does not mean the set is LOCC-distinguishable.
    PptDistinguishableAt(Vec<Bipartition>),
    /// Only produced by floating-point screening.
    Inconclusive,
}

impl Classification {
    pub fn is_certified(&self) -> bool {
        matches!(self, Classification::CertifiedGenuinelyNonlocal)
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::CertifiedGenuinelyNonlocal => f.write_str("certified genuinely nonlocal"),
            Classification::PptDistinguishableAt(cuts) => {
                let labels: Vec<&str> = cuts.iter().map(|c| c.label()).collect();
                write!(f, "PPT-distinguishable at {}", labels.join(", "))
            }
            Classification::Inconclusive => f.write_str("inconclusive"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    /// `β` for `A|BC`, `B|CA`, `C|AB`.
    pub betas: [Rational; 3],
    pub classification: Classification,
}

impl Verdict {
    pub fn from_betas(betas: [Rational; 3]) -> Self {
        let one = Rational::one();
        let open: Vec<Bipartition> =
            Bipartition::ALL.iter().copied().filter(|c| betas[c.party()] >= one).collect();
        let classification = if open.is_empty() {
            Classification::CertifiedGenuinelyNonlocal
        } else {
            Classification::PptDistinguishableAt(open)
        };
        Self { betas, classification }
    }

    pub fn beta(&self, cut: Bipartition) -> &Rational {
        &self.betas[cut.party()]
    }
}

fn dual_var_q(n: usize, k: usize, l: usize) -> usize {
    n + k * n + l
}

/// The dual LP. Variables: `y` at `0..n`, then `q_k` at `n + k·n ..`; rows
/// are ordered by state, then lattice index.
pub fn build_dual_lp(set: &StateSet, cut: Bipartition) -> Result<LpInstance, CertifierError> {
    set.check_supported()?;
    let n = lattice_dim(set.levels());
    let s = set.len();
    let power = PtPower::new(cut, set.levels());
    let scale = power.scale();
    let neg_scale = -&scale;
    let weight = Rational::new(1, s as i64);

    let mut lp = LpInstance::new(Sense::Min, n * (s + 1));
    for i in 0..n {
        lp.set_free(i);
        lp.set_objective(i, weight.clone());
    }
    for (k, v) in set.states().iter().enumerate() {
        let target = v.flat();
        for i in 0..n {
            let mut coeffs = Vec::with_capacity(1 + power.row(i).len());
            coeffs.push((i, Rational::one()));
            for &(l, sign) in power.row(i) {
                let c = if sign > 0 { neg_scale.clone() } else { scale.clone() };
                coeffs.push((dual_var_q(n, k, l as usize), c));
            }
            let rhs = if i == target { Rational::one() } else { Rational::zero() };
            lp.add_constraint(coeffs, Relation::Ge, rhs).expect("indices in range");
        }
    }
    Ok(lp)
}

/// The primal LP. Variables: `p_k` at `k·n ..`; the first `n` rows are the
/// completeness equalities, then `(T_X)^{⊗t} p_k >= 0` by state and index.
pub fn build_primal_lp(set: &StateSet, cut: Bipartition) -> Result<LpInstance, CertifierError> {
    set.check_supported()?;
    let n = lattice_dim(set.levels());
    let s = set.len();
    let power = PtPower::new(cut, set.levels());
    let scale = power.scale();
    let neg_scale = -&scale;
    let weight = Rational::new(1, s as i64);

    let mut lp = LpInstance::new(Sense::Max, n * s);
    for (k, v) in set.states().iter().enumerate() {
        lp.set_objective(k * n + v.flat(), weight.clone());
    }
    for i in 0..n {
        let coeffs = (0..s).map(|k| (k * n + i, Rational::one())).collect();
        lp.add_constraint(coeffs, Relation::Eq, Rational::one()).expect("indices in range");
    }
    for k in 0..s {
        for i in 0..n {
            let coeffs = power
                .row(i)
                .iter()
                .map(|&(l, sign)| (k * n + l as usize, if sign > 0 { scale.clone() } else { neg_scale.clone() }))
                .collect();
            lp.add_constraint(coeffs, Relation::Ge, Rational::zero()).expect("indices in range");
        }
    }
    Ok(lp)
}

/// Both LP solutions for one cut.
#[derive(Debug, Clone)]
pub struct CutSolution {
    pub cut: Bipartition,
    pub beta: Rational,
    pub dual: LpResult,
    pub primal: LpResult,
}

impl CutSolution {
    /// The optimal dual point as a certificate.
    pub fn certificate(&self, set: &StateSet) -> Certificate {
        let n = lattice_dim(set.levels());
        let x = &self.dual.primal;
        let diag = |range: std::ops::Range<usize>| {
            DiagOperator::new(set.levels(), x[range].to_vec()).expect("block has length 8^t")
        };
        let y = diag(0..n);
        let qs = (0..set.len()).map(|k| diag(dual_var_q(n, k, 0)..dual_var_q(n, k + 1, 0))).collect();
        Certificate { cut: self.cut, y, qs, claimed_value: self.beta.clone() }
    }

    /// The optimal primal point: one diagonal POVM element per state.
    pub fn measurement(&self, set: &StateSet) -> Measurement {
        let n = lattice_dim(set.levels());
        let elements = (0..set.len())
            .map(|k| {
                DiagOperator::new(set.levels(), self.primal.primal[k * n..(k + 1) * n].to_vec())
                    .expect("block has length 8^t")
            })
            .collect();
        Measurement { cut: self.cut, elements }
    }
}

/// `y = 1, q = 0`: always dual feasible. Solving the dual in coordinates
/// centred there starts from a feasible slack basis.
fn dual_start(set: &StateSet) -> Vec<Rational> {
    let n = lattice_dim(set.levels());
    let mut x = vec![Rational::zero(); n * (set.len() + 1)];
    for v in &mut x[..n] {
        *v = Rational::one();
    }
    x
}

fn solve_dual(set: &StateSet, cut: Bipartition) -> Result<LpResult, CertifierError> {
    let lp = build_dual_lp(set, cut)?;
    Ok(lp::solve_shifted(&lp, &dual_start(set)).expect("only free variables are shifted"))
}

/// Solves primal and dual for one cut and checks that their optima agree.
pub fn solve_cut(set: &StateSet, cut: Bipartition) -> Result<CutSolution, CertifierError> {
    let dual = solve_dual(set, cut)?;
    if dual.status != LpStatus::Optimal {
        return Err(CertifierError::Solver { cut, status: dual.status });
    }
    let primal = lp::solve(&build_primal_lp(set, cut)?);
    if primal.status != LpStatus::Optimal {
        return Err(CertifierError::Solver { cut, status: primal.status });
    }
    if primal.value != dual.value {
        return Err(CertifierError::DualityGap { cut, primal: primal.value, dual: dual.value });
    }
    Ok(CutSolution { cut, beta: dual.value.clone(), dual, primal })
}

/// `β_X`, with strong duality checked exactly.
pub fn beta(set: &StateSet, cut: Bipartition) -> Result<Rational, CertifierError> {
    solve_cut(set, cut).map(|s| s.beta)
}

/// Floating-point `β_X`, computed as the primal optimum (equal by strong
/// duality). The primal is far less degenerate than the dual at `t >= 3`.
/// Screening only.
pub fn beta_float(set: &StateSet, cut: Bipartition) -> Result<f64, CertifierError> {
    let res = lp::solve_float(&build_primal_lp(set, cut)?);
    if res.status != LpStatus::Optimal {
        return Err(CertifierError::Solver { cut, status: res.status });
    }
    Ok(res.value)
}

/// All three cuts, solved concurrently.
pub fn solve_all_cuts(set: &StateSet) -> Result<[CutSolution; 3], CertifierError> {
    let sols: Vec<CutSolution> =
        Bipartition::ALL.par_iter().map(|&cut| solve_cut(set, cut)).collect::<Result<_, _>>()?;
    let [a, b, c]: [CutSolution; 3] = sols.try_into().expect("three cuts");
    Ok([a, b, c])
}

/// Exact verdict over all three cuts.
pub fn certify(set: &StateSet) -> Result<Verdict, CertifierError> {
    let sols = solve_all_cuts(set)?;
    Ok(Verdict::from_betas(sols.map(|s| s.beta)))
}

/// Exact `β` values of `base.lift()` without solving its LPs: the optimal
/// dual and primal points of `base` are lifted and both are verified
/// exactly on the lifted set. Matching values pin `β` down on both sides.
pub fn certify_lift(base: &StateSet) -> Result<Verdict, CertifierError> {
    let lifted = base.lift();
    lifted.check_supported()?;
    let sols = solve_all_cuts(base)?;
    let mut betas = Vec::with_capacity(3);
    for sol in &sols {
        let cert = sol.certificate(base).lift();
        let dual = verify_certificate(&lifted, &cert)?;
        if !dual.feasible || dual.value != sol.beta {
            return Err(CertifierError::LiftRejected { cut: sol.cut, what: "certificate" });
        }
        let primal = verify_measurement(&lifted, &sol.measurement(base).lift())?;
        if !primal.feasible || primal.value != sol.beta {
            return Err(CertifierError::LiftRejected { cut: sol.cut, what: "measurement" });
        }
        betas.push(sol.beta.clone());
    }
    let betas: [Rational; 3] = betas.try_into().expect("three cuts");
    Ok(Verdict::from_betas(betas))
}

/// Exact verdict. When the set is a lift of a smaller one, the smaller
/// set is solved and its optimal points are lifted and checked
/// ([`certify_lift`]); otherwise the LPs are solved directly.
pub fn certify_exact(set: &StateSet) -> Result<Verdict, CertifierError> {
    match set.unlift() {
        Some(base) => certify_lift(&base).or_else(|_| certify(set)),
        None => certify(set),
    }
}

fn check_shapes(set: &StateSet, cert: &Certificate) -> Result<(), CertifierError> {
    if cert.qs.len() != set.len() {
        return Err(CertifierError::WrongQCount { expected: set.len(), found: cert.qs.len() });
    }
    let t = set.levels();
    for op in std::iter::once(&cert.y).chain(&cert.qs) {
        if op.levels() != t {
            return Err(CertifierError::CertificateLevels { expected: t, found: op.levels() });
        }
    }
    Ok(())
}

fn diagonal_violation(set: &StateSet, cert: &Certificate) -> Option<Violation> {
    for (k, q) in cert.qs.iter().enumerate() {
        if let Some((index, _)) = q.terms().find(|(_, c)| c.is_negative()) {
            return Some(Violation::NegativeQ { state: k + 1, index });
        }
    }
    for (k, (q, v)) in cert.qs.iter().zip(set.states()).enumerate() {
        let slack = cert.y.sub(&DiagOperator::basis(v)).sub(&apply_pt_diag(q, cert.cut));
        let negative = slack.terms().find(|(_, c)| c.is_negative()).map(|(index, _)| index);
        if let Some(index) = negative {
            return Some(Violation::Constraint { state: k + 1, index });
        }
    }
    None
}

/// Dense form of the same constraints, with partial transposes computed by
/// index swapping rather than through the transform matrices.
fn dense_feasible(set: &StateSet, cert: &Certificate) -> Result<bool, CertifierError> {
    let y = DenseOperator::from_diag(&cert.y)?;
    for (q, v) in cert.qs.iter().zip(set.states()) {
        let qd = DenseOperator::from_diag(q)?;
        if !qd.is_psd()? {
            return Ok(false);
        }
        let phi = DenseOperator::from_diag(&DiagOperator::basis(v))?;
        let slack = y.sub(&phi).sub(&partial_transpose_dense(&qd, cert.cut));
        if !slack.is_psd()? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks `q_k >= 0` and `y - T_X(q_k) - e_{v(k)} >= 0` for every `k`, and
/// for `t <= 2` repeats the check on dense matrices with an exact PSD test.
pub fn verify_certificate(set: &StateSet, cert: &Certificate) -> Result<CertificateCheck, CertifierError> {
    check_shapes(set, cert)?;
    set.check_supported()?;
    let violation = diagonal_violation(set, cert);
    let feasible = violation.is_none();
    let dense_checked = set.levels() <= MAX_DENSE_CHECK_LEVELS;
    if dense_checked && dense_feasible(set, cert)? != feasible {
        return Err(CertifierError::CheckDisagreement(cert.cut));
    }
    let value = cert.y.trace() / Rational::from_integer(set.len() as i64);
    let value_matches_claim = value == cert.claimed_value;
    Ok(CertificateCheck { feasible, value, value_matches_claim, dense_checked, violation })
}

/// A dual point given as arbitrary dense operators (not necessarily
/// diagonal in the lattice basis).
#[derive(Debug, Clone)]
pub struct DenseCertificate {
    pub cut: Bipartition,
    pub y: DenseOperator,
    pub qs: Vec<DenseOperator>,
}

/// Feasibility and value `(1/s) tr Y` of a dense dual point.
pub fn verify_dense_certificate(
    set: &StateSet,
    cert: &DenseCertificate,
) -> Result<(bool, Rational), CertifierError> {
    if cert.qs.len() != set.len() {
        return Err(CertifierError::WrongQCount { expected: set.len(), found: cert.qs.len() });
    }
    let value = cert.y.trace().re / Rational::from_integer(set.len() as i64);
    for (q, v) in cert.qs.iter().zip(set.states()) {
        if !q.is_psd()? {
            return Ok((false, value));
        }
        let phi = DenseOperator::from_diag(&DiagOperator::basis(v))?;
        let slack = cert.y.sub(&phi).sub(&partial_transpose_dense(q, cert.cut));
        if !slack.is_psd()? {
            return Ok((false, value));
        }
    }
    Ok((true, value))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(values: &[&[u8]]) -> StateSet {
        StateSet::from_values(&values.iter().map(|v| v.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn rejects_duplicates_and_empty() {
        assert_eq!(StateSet::new(vec![]), Err(CertifierError::EmptySet));
        assert!(matches!(StateSet::from_values(&[vec![1], vec![1]]), Err(CertifierError::Duplicate(_))));
        assert!(matches!(
            StateSet::from_values(&[vec![1], vec![1, 0]]),
            Err(CertifierError::LevelMismatch { .. })
        ));
    }

    #[test]
    fn lp_shapes() {
        let s = set(&[&[1, 0], &[2, 7], &[3, 3]]);
        let lp = build_dual_lp(&s, Bipartition::A).unwrap();
        assert_eq!(lp.num_vars(), 64 * 4);
        assert_eq!(lp.num_constraints(), 64 * 3);
        let p = build_primal_lp(&s, Bipartition::A).unwrap();
        assert_eq!(p.num_vars(), 64 * 3);
    }

    #[test]
    fn single_state_has_beta_one() {
        let s = set(&[&[0]]);
        for cut in Bipartition::ALL {
            assert_eq!(beta(&s, cut).unwrap(), Rational::one());
        }
        let v = certify(&s).unwrap();
        assert_eq!(v.classification, Classification::PptDistinguishableAt(Bipartition::ALL.to_vec()));
    }

    #[test]
    fn five_states_values() {
        let s = set(&[&[1], &[2], &[3], &[4], &[5]]);
        let v = certify(&s).unwrap();
        assert_eq!(v.betas, [Rational::new(4, 5), Rational::new(4, 5), Rational::new(3, 5)]);
        assert!(v.classification.is_certified());
    }

    #[test]
    fn lp_solutions_are_certified_optimal() {
        let s = set(&[&[0], &[3], &[5], &[6], &[7]]);
        for cut in Bipartition::ALL {
            let sol = solve_cut(&s, cut).unwrap();
            assert!(lp::certify_optimality(&build_dual_lp(&s, cut).unwrap(), &sol.dual));
            assert!(lp::certify_optimality(&build_primal_lp(&s, cut).unwrap(), &sol.primal));
            let cert = sol.certificate(&s);
            let check = verify_certificate(&s, &cert).unwrap();
            assert!(check.feasible && check.value_matches_claim && check.dense_checked);
        }
    }

    #[test]
    fn trivial_certificate_is_feasible() {
        let s = set(&[&[1, 0], &[2, 0], &[3, 7]]);
        let cert = Certificate::trivial(&s, Bipartition::B);
        let check = verify_certificate(&s, &cert).unwrap();
        assert!(check.feasible);
        assert_eq!(check.value, Rational::new(64, 3));
    }

    #[test]
    fn negative_q_is_reported() {
        let s = set(&[&[1], &[2]]);
        let mut cert = Certificate::trivial(&s, Bipartition::C);
        let mut coeffs = cert.qs[1].coeffs().to_vec();
        coeffs[4] = Rational::new(-1, 8);
        cert.qs[1] = DiagOperator::new(1, coeffs).unwrap();
        let check = verify_certificate(&s, &cert).unwrap();
        assert!(!check.feasible);
        assert!(matches!(check.violation, Some(Violation::NegativeQ { state: 2, .. })));
    }

    #[test]
    fn lifted_points_verify_at_the_base_value() {
        let base = set(&[&[1], &[2], &[3], &[4], &[5]]);
        let lifted = base.lift();
        for cut in Bipartition::ALL {
            let sol = solve_cut(&base, cut).unwrap();
            let m = sol.measurement(&base);
            let check = verify_measurement(&base, &m).unwrap();
            assert!(check.feasible);
            assert_eq!(check.value, sol.beta);
            let lifted_check = verify_measurement(&lifted, &m.lift()).unwrap();
            assert!(lifted_check.feasible);
            assert_eq!(lifted_check.value, sol.beta);
        }
        let v = certify_lift(&base).unwrap();
        assert_eq!(v, certify(&lifted).unwrap());
    }

    #[test]
    fn measurement_check_rejects_incomplete_povm() {
        let s = set(&[&[0], &[7]]);
        let mut m = Measurement {
            cut: Bipartition::A,
            elements: vec![DiagOperator::identity(1), DiagOperator::zero(1)],
        };
        let check = verify_measurement(&s, &m).unwrap();
        assert!(check.feasible);
        assert_eq!(check.value, Rational::new(1, 2));
        m.elements[1] = DiagOperator::basis(&LatticeIndex::from_values(&[7]).unwrap());
        assert!(!verify_measurement(&s, &m).unwrap().feasible);
    }

    #[test]
    fn unlift_inverts_lift() {
        let s5 = StateSet::from_values(&[vec![1], vec![2], vec![3], vec![4], vec![5]]).unwrap();
        assert_eq!(s5.lift().unlift(), Some(s5.clone()));
        assert_eq!(s5.unlift(), None);
        let reordered = StateSet::new(s5.lift().states().iter().rev().cloned().collect()).unwrap();
        assert_eq!(reordered.unlift(), None);
    }
}
