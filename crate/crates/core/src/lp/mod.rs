//! Exact linear programming.
//!
//! [`solve`] runs a two-phase dense-tableau simplex over [`Rational`]. The
//! pricing rule is Dantzig's (most negative reduced cost, lowest index on
//! ties) until `3·(rows + cols)` consecutive degenerate pivots have been
//! made, after which Bland's rule takes over for the rest of the phase.
//!
//! Instances are first split into independent blocks (connected components
//! of the variable/constraint incidence graph), each solved on its own.
//! The discrimination LPs are block diagonal, so this keeps tableaux small.
//!
//! Dual multipliers follow the usual sign conventions: for a minimization,
//! `≥` rows have `y ≥ 0`, `≤` rows `y ≤ 0`, and reduced costs
//! `c_j - Σ_r y_r a_rj` are `≥ 0` on nonnegative variables and `= 0` on free
//! ones. For a maximization every inequality flips. In both cases the optimal
//! value equals `Σ_r y_r b_r`.

mod scalar;
mod simplex;

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::exact::Rational;
pub use scalar::{Scalar, FLOAT_TOLERANCE};
use simplex::{solve_dense, RawSolution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Min,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = ">=")]
    Ge,
}

/// Lower bound of a variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Bound {
    Zero,
    Free,
}

/// One row `Σ coeffs · x  (rel)  rhs`, stored sparsely with strictly
/// increasing variable indices and no zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constraint {
    pub coeffs: Vec<(usize, Rational)>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn new(mut coeffs: Vec<(usize, Rational)>, relation: Relation, rhs: Rational) -> Self {
        coeffs.sort_by_key(|(j, _)| *j);
        let mut merged: Vec<(usize, Rational)> = Vec::with_capacity(coeffs.len());
        for (j, c) in coeffs {
            match merged.last_mut() {
                Some((k, acc)) if *k == j => *acc += c,
                _ => merged.push((j, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        Self { coeffs: merged, relation, rhs }
    }

    pub fn activity(&self, x: &[Rational]) -> Rational {
        self.coeffs.iter().map(|(j, c)| c * &x[*j]).sum()
    }

    pub fn is_satisfied(&self, x: &[Rational]) -> bool {
        let lhs = self.activity(x);
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Eq => lhs == self.rhs,
            Relation::Ge => lhs >= self.rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LpError {
    #[error("variable index {index} out of range for {vars} variables")]
    VariableOutOfRange { index: usize, vars: usize },
    #[error("shift has {got} entries for {vars} variables")]
    ShiftLength { got: usize, vars: usize },
    #[error("variable {0} is bounded and cannot be shifted")]
    ShiftOnBounded(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LpInstance {
    pub sense: Sense,
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
    pub bounds: Vec<Bound>,
}

impl LpInstance {
    /// `vars` nonnegative variables, zero objective, no constraints.
    pub fn new(sense: Sense, vars: usize) -> Self {
        Self {
            sense,
            objective: vec![Rational::zero(); vars],
            constraints: Vec::new(),
            bounds: vec![Bound::Zero; vars],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn set_free(&mut self, j: usize) {
        self.bounds[j] = Bound::Free;
    }

    pub fn set_objective(&mut self, j: usize, c: Rational) {
        self.objective[j] = c;
    }

    pub fn add_constraint(
        &mut self,
        coeffs: Vec<(usize, Rational)>,
        relation: Relation,
        rhs: Rational,
    ) -> Result<usize, LpError> {
        let vars = self.num_vars();
        if let Some(&(index, _)) = coeffs.iter().find(|(j, _)| *j >= vars) {
            return Err(LpError::VariableOutOfRange { index, vars });
        }
        self.constraints.push(Constraint::new(coeffs, relation, rhs));
        Ok(self.constraints.len() - 1)
    }

    /// Row `i` expanded to a dense coefficient vector.
    pub fn dense_row(&self, i: usize) -> Vec<Rational> {
        let mut row = vec![Rational::zero(); self.num_vars()];
        for (j, c) in &self.constraints[i].coeffs {
            row[*j] = c.clone();
        }
        row
    }

    pub fn objective_value(&self, x: &[Rational]) -> Rational {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// The instance in variables `x' = x - shift`. Only free variables may
    /// be shifted. The objective constant `c·shift` is dropped; see
    /// [`solve_shifted`].
    pub fn shifted(&self, shift: &[Rational]) -> Result<LpInstance, LpError> {
        if shift.len() != self.num_vars() {
            return Err(LpError::ShiftLength { got: shift.len(), vars: self.num_vars() });
        }
        if let Some(j) = (0..shift.len()).find(|&j| !shift[j].is_zero() && self.bounds[j] != Bound::Free) {
            return Err(LpError::ShiftOnBounded(j));
        }
        let mut out = self.clone();
        for con in &mut out.constraints {
            let moved = con.activity(shift);
            con.rhs -= moved;
        }
        Ok(out)
    }

    /// Every row satisfied and every bound respected.
    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        x.len() == self.num_vars()
            && self.bounds.iter().zip(x).all(|(b, v)| *b == Bound::Free || !v.is_negative())
            && self.constraints.iter().all(|c| c.is_satisfied(x))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

impl fmt::Display for LpStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LpStatus::Optimal => "optimal",
            LpStatus::Infeasible => "infeasible",
            LpStatus::Unbounded => "unbounded",
        })
    }
}

/// Result of an exact solve. `primal` and `duals` are empty unless the
/// status is optimal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LpResult {
    pub status: LpStatus,
    pub value: Rational,
    pub primal: Vec<Rational>,
    pub duals: Vec<Rational>,
}

/// Result of a floating-point solve. Never used to decide a verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct FloatLpResult {
    pub status: LpStatus,
    pub value: f64,
    pub primal: Vec<f64>,
    pub duals: Vec<f64>,
}

/// Groups variables and constraints into independent blocks. Returns, per
/// block, the variable list and the constraint list (both ascending).
/// Constraints without variables and variables without constraints are
/// returned separately.
struct Blocks {
    blocks: Vec<(Vec<usize>, Vec<usize>)>,
    empty_rows: Vec<usize>,
    loose_vars: Vec<usize>,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn split_blocks(lp: &LpInstance) -> Blocks {
    let n = lp.num_vars();
    let mut parent: Vec<usize> = (0..n).collect();
    let mut touched = vec![false; n];
    for con in &lp.constraints {
        let mut it = con.coeffs.iter().map(|(j, _)| *j);
        if let Some(first) = it.next() {
            touched[first] = true;
            let root = find(&mut parent, first);
            for j in it {
                touched[j] = true;
                let rj = find(&mut parent, j);
                if rj != root {
                    let (lo, hi) = if rj < root { (rj, root) } else { (root, rj) };
                    parent[hi] = lo;
                }
            }
        }
    }
    let mut block_of_root = vec![usize::MAX; n];
    let mut blocks: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    let mut loose_vars = Vec::new();
    for j in 0..n {
        if !touched[j] {
            loose_vars.push(j);
            continue;
        }
        let root = find(&mut parent, j);
        if block_of_root[root] == usize::MAX {
            block_of_root[root] = blocks.len();
            blocks.push((Vec::new(), Vec::new()));
        }
        blocks[block_of_root[root]].0.push(j);
    }
    let mut empty_rows = Vec::new();
    for (i, con) in lp.constraints.iter().enumerate() {
        match con.coeffs.first() {
            None => empty_rows.push(i),
            Some((j, _)) => {
                let root = find(&mut parent, *j);
                blocks[block_of_root[root]].1.push(i);
            }
        }
    }
    Blocks { blocks, empty_rows, loose_vars }
}

fn sub_instance(lp: &LpInstance, vars: &[usize], rows: &[usize]) -> LpInstance {
    let mut local = vec![usize::MAX; lp.num_vars()];
    for (k, &j) in vars.iter().enumerate() {
        local[j] = k;
    }
    LpInstance {
        sense: lp.sense,
        objective: vars.iter().map(|&j| lp.objective[j].clone()).collect(),
        bounds: vars.iter().map(|&j| lp.bounds[j]).collect(),
        constraints: rows
            .iter()
            .map(|&i| {
                let con = &lp.constraints[i];
                Constraint {
                    coeffs: con.coeffs.iter().map(|(j, c)| (local[*j], c.clone())).collect(),
                    relation: con.relation,
                    rhs: con.rhs.clone(),
                }
            })
            .collect(),
    }
}

fn solve_blocks<F: Scalar>(lp: &LpInstance) -> RawSolution<F> {
    let failed = |status| RawSolution {
        status,
        value: F::nil(),
        primal: Vec::new(),
        duals: Vec::new(),
        pivots: 0,
    };
    let Blocks { blocks, empty_rows, loose_vars } = split_blocks(lp);

    for &i in &empty_rows {
        let con = &lp.constraints[i];
        let zero = Rational::zero();
        let ok = match con.relation {
            Relation::Le => zero <= con.rhs,
            Relation::Eq => zero == con.rhs,
            Relation::Ge => zero >= con.rhs,
        };
        if !ok {
            return failed(LpStatus::Infeasible);
        }
    }

    let mut primal = vec![F::nil(); lp.num_vars()];
    let mut duals = vec![F::nil(); lp.num_constraints()];
    let mut value = F::nil();
    let mut pivots = 0;
    let mut unbounded = false;

    for &j in &loose_vars {
        let c = &lp.objective[j];
        let improving = match lp.sense {
            Sense::Min => c.is_negative(),
            Sense::Max => c.is_positive(),
        };
        if (lp.bounds[j] == Bound::Free && !c.is_zero()) || improving {
            unbounded = true;
        }
    }

    for (vars, rows) in &blocks {
        let sub = sub_instance(lp, vars, rows);
        let raw = solve_dense::<F>(&sub);
        pivots += raw.pivots;
        match raw.status {
            LpStatus::Infeasible => return failed(LpStatus::Infeasible),
            LpStatus::Unbounded => unbounded = true,
            LpStatus::Optimal => {
                for (k, &j) in vars.iter().enumerate() {
                    primal[j] = raw.primal[k].clone();
                }
                for (k, &i) in rows.iter().enumerate() {
                    duals[i] = raw.duals[k].clone();
                }
                value = value.add(&raw.value);
            }
        }
    }
    if unbounded {
        return failed(LpStatus::Unbounded);
    }
    RawSolution { status: LpStatus::Optimal, value, primal, duals, pivots }
}

/// Exact optimum of `lp`.
pub fn solve(lp: &LpInstance) -> LpResult {
    let raw = solve_blocks::<Rational>(lp);
    LpResult { status: raw.status, value: raw.value, primal: raw.primal, duals: raw.duals }
}

/// Exact optimum of `lp`, solved in coordinates translated by `shift`.
/// When `shift` is feasible the translated problem starts from a feasible
/// slack basis on its inequality rows, which can avoid a long first phase.
/// The result is expressed in the original variables.
pub fn solve_shifted(lp: &LpInstance, shift: &[Rational]) -> Result<LpResult, LpError> {
    let raw = solve_blocks::<Rational>(&lp.shifted(shift)?);
    if raw.status != LpStatus::Optimal {
        return Ok(LpResult { status: raw.status, value: raw.value, primal: raw.primal, duals: raw.duals });
    }
    let primal: Vec<Rational> = raw.primal.iter().zip(shift).map(|(x, s)| x + s).collect();
    let value = raw.value + lp.objective_value(shift);
    Ok(LpResult { status: raw.status, value, primal, duals: raw.duals })
}

/// Floating-point counterpart of [`solve_shifted`].
pub fn solve_float_shifted(lp: &LpInstance, shift: &[Rational]) -> Result<FloatLpResult, LpError> {
    let raw = solve_blocks::<f64>(&lp.shifted(shift)?);
    if raw.status != LpStatus::Optimal {
        return Ok(FloatLpResult { status: raw.status, value: raw.value, primal: raw.primal, duals: raw.duals });
    }
    let primal = raw.primal.iter().zip(shift).map(|(x, s)| x + s.to_f64()).collect();
    let value = raw.value + lp.objective_value(shift).to_f64();
    Ok(FloatLpResult { status: raw.status, value, primal, duals: raw.duals })
}

/// Exact optimum without block decomposition. Slower; kept as an oracle for
/// the decomposition and for benchmarks.
pub fn solve_undecomposed(lp: &LpInstance) -> LpResult {
    let raw = solve_dense::<Rational>(lp);
    LpResult { status: raw.status, value: raw.value, primal: raw.primal, duals: raw.duals }
}

/// Floating-point solve with tolerance [`FLOAT_TOLERANCE`].
pub fn solve_float(lp: &LpInstance) -> FloatLpResult {
    let raw = solve_blocks::<f64>(lp);
    FloatLpResult { status: raw.status, value: raw.value, primal: raw.primal, duals: raw.duals }
}

/// Exact proof of optimality: the primal point is feasible, the multipliers
/// are dual feasible, and both objectives equal `res.value`.
pub fn certify_optimality(lp: &LpInstance, res: &LpResult) -> bool {
    if res.status != LpStatus::Optimal
        || res.primal.len() != lp.num_vars()
        || res.duals.len() != lp.num_constraints()
    {
        return false;
    }
    if !lp.is_feasible(&res.primal) {
        return false;
    }
    // Sign of y for which the row's dual constraint is respected, expressed
    // for a minimization; maximization flips it.
    let flip = lp.sense == Sense::Max;
    for (con, y) in lp.constraints.iter().zip(&res.duals) {
        let y = if flip { -y } else { y.clone() };
        let ok = match con.relation {
            Relation::Ge => !y.is_negative(),
            Relation::Le => !y.is_positive(),
            Relation::Eq => true,
        };
        if !ok {
            return false;
        }
    }
    let mut reduced = lp.objective.clone();
    for (con, y) in lp.constraints.iter().zip(&res.duals) {
        if y.is_zero() {
            continue;
        }
        for (j, a) in &con.coeffs {
            reduced[*j] -= a * y;
        }
    }
    for (r, b) in reduced.iter().zip(&lp.bounds) {
        let r = if flip { -r } else { r.clone() };
        let ok = match b {
            Bound::Zero => !r.is_negative(),
            Bound::Free => r.is_zero(),
        };
        if !ok {
            return false;
        }
    }
    let dual_value: Rational = lp.constraints.iter().zip(&res.duals).map(|(c, y)| &c.rhs * y).sum();
    lp.objective_value(&res.primal) == res.value && dual_value == res.value
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    #[test]
    fn max_single_bound() {
        let mut lp = LpInstance::new(Sense::Max, 1);
        lp.set_objective(0, q(1));
        lp.add_constraint(vec![(0, q(1))], Relation::Le, q(3)).unwrap();
        let res = solve(&lp);
        assert_eq!(res.status, LpStatus::Optimal);
        assert_eq!(res.value, q(3));
        assert!(certify_optimality(&lp, &res));
    }

    #[test]
    fn contradictory_rows_are_infeasible() {
        let mut lp = LpInstance::new(Sense::Min, 1);
        lp.add_constraint(vec![(0, q(1))], Relation::Eq, q(1)).unwrap();
        lp.add_constraint(vec![(0, q(1))], Relation::Ge, q(2)).unwrap();
        assert_eq!(solve(&lp).status, LpStatus::Infeasible);
    }

    #[test]
    fn unbounded_detected() {
        let mut lp = LpInstance::new(Sense::Max, 2);
        lp.set_objective(0, q(1));
        lp.add_constraint(vec![(0, q(1)), (1, q(-1))], Relation::Le, q(1)).unwrap();
        assert_eq!(solve(&lp).status, LpStatus::Unbounded);
        let mut loose = LpInstance::new(Sense::Min, 1);
        loose.set_free(0);
        loose.set_objective(0, q(1));
        assert_eq!(solve(&loose).status, LpStatus::Unbounded);
    }

    #[test]
    fn free_variables_and_equalities() {
        // min x + y  s.t.  x - y = -3, x >= -10 with x free, y >= 0
        let mut lp = LpInstance::new(Sense::Min, 2);
        lp.set_free(0);
        lp.set_objective(0, q(1));
        lp.set_objective(1, q(1));
        lp.add_constraint(vec![(0, q(1)), (1, q(-1))], Relation::Eq, q(-3)).unwrap();
        lp.add_constraint(vec![(0, q(1))], Relation::Ge, q(-10)).unwrap();
        let res = solve(&lp);
        assert_eq!(res.value, q(-3));
        assert_eq!(res.primal, vec![q(-3), q(0)]);
        assert!(certify_optimality(&lp, &res));
    }

    #[test]
    fn perturbed_primal_fails_certification() {
        let mut lp = LpInstance::new(Sense::Max, 2);
        lp.set_objective(0, q(3));
        lp.set_objective(1, q(2));
        lp.add_constraint(vec![(0, q(1)), (1, q(1))], Relation::Le, q(4)).unwrap();
        lp.add_constraint(vec![(0, q(1)), (1, q(3))], Relation::Le, q(6)).unwrap();
        lp.add_constraint(vec![(0, q(1))], Relation::Le, q(3)).unwrap();
        let res = solve(&lp);
        assert_eq!(res.value, q(11));
        assert!(certify_optimality(&lp, &res));
        for j in 0..2 {
            let mut bad = res.clone();
            bad.primal[j] += Rational::new(1, 1000);
            assert!(!certify_optimality(&lp, &bad));
        }
    }

    #[test]
    fn degenerate_cycling_example_terminates() {
        // Beale's example, which cycles under textbook Dantzig pricing.
        let mut lp = LpInstance::new(Sense::Min, 4);
        for (j, c) in [(0, Rational::new(-3, 4)), (1, q(150)), (2, Rational::new(-1, 50)), (3, q(6))] {
            lp.set_objective(j, c);
        }
        lp.add_constraint(
            vec![(0, Rational::new(1, 4)), (1, q(-60)), (2, Rational::new(-1, 25)), (3, q(9))],
            Relation::Le,
            q(0),
        )
        .unwrap();
        lp.add_constraint(
            vec![(0, Rational::new(1, 2)), (1, q(-90)), (2, Rational::new(-1, 50)), (3, q(3))],
            Relation::Le,
            q(0),
        )
        .unwrap();
        lp.add_constraint(vec![(2, q(1))], Relation::Le, q(1)).unwrap();
        let res = solve(&lp);
        assert_eq!(res.value, Rational::new(-1, 20));
        assert!(certify_optimality(&lp, &res));
    }

    #[test]
    fn decomposition_matches_monolithic_solve() {
        let mut lp = LpInstance::new(Sense::Min, 4);
        for j in 0..4 {
            lp.set_objective(j, q(j as i64 + 1));
        }
        lp.add_constraint(vec![(0, q(1)), (2, q(1))], Relation::Ge, q(2)).unwrap();
        lp.add_constraint(vec![(1, q(2)), (3, q(1))], Relation::Ge, q(3)).unwrap();
        lp.add_constraint(vec![(0, q(1))], Relation::Le, q(1)).unwrap();
        let a = solve(&lp);
        let b = solve_undecomposed(&lp);
        assert_eq!(a.value, b.value);
        assert!(certify_optimality(&lp, &a));
        assert!(certify_optimality(&lp, &b));
    }

    #[test]
    fn float_path_agrees() {
        let mut lp = LpInstance::new(Sense::Max, 2);
        lp.set_objective(0, q(1));
        lp.set_objective(1, q(1));
        lp.add_constraint(vec![(0, q(3)), (1, q(1))], Relation::Le, q(4)).unwrap();
        lp.add_constraint(vec![(0, q(1)), (1, q(3))], Relation::Le, q(4)).unwrap();
        let exact = solve(&lp);
        let float = solve_float(&lp);
        assert_eq!(exact.value, q(2));
        assert!((float.value - 2.0).abs() < 1e-9);
    }

    fn arb_lp() -> impl Strategy<Value = LpInstance> {
        let coef = -4i64..=4;
        (1usize..=4, 1usize..=4).prop_flat_map(move |(n, m)| {
            (
                prop::collection::vec(coef.clone(), n),
                prop::collection::vec((prop::collection::vec(coef.clone(), n), 0u8..3, -5i64..=8), m),
                any::<bool>(),
            )
                .prop_map(move |(c, rows, max)| {
                    let mut lp = LpInstance::new(if max { Sense::Max } else { Sense::Min }, n);
                    for (j, v) in c.into_iter().enumerate() {
                        lp.set_objective(j, q(v));
                    }
                    for (coeffs, rel, rhs) in rows {
                        let rel = [Relation::Le, Relation::Eq, Relation::Ge][rel as usize];
                        let coeffs = coeffs.into_iter().enumerate().map(|(j, v)| (j, q(v))).collect();
                        lp.add_constraint(coeffs, rel, q(rhs)).unwrap();
                    }
                    // Keep the instance bounded.
                    let all = (0..n).map(|j| (j, q(1))).collect();
                    lp.add_constraint(all, Relation::Le, q(20)).unwrap();
                    lp
                })
        })
    }

    proptest! {
        #[test]
        fn optimal_results_certify(lp in arb_lp()) {
            let res = solve(&lp);
            if res.status == LpStatus::Optimal {
                prop_assert!(certify_optimality(&lp, &res));
                let mono = solve_undecomposed(&lp);
                prop_assert_eq!(mono.value, res.value.clone());
            } else {
                prop_assert_eq!(res.status, LpStatus::Infeasible);
                prop_assert_eq!(solve_undecomposed(&lp).status, LpStatus::Infeasible);
            }
        }

        #[test]
        fn positive_objective_scaling(lp in arb_lp(), k in 1i64..7) {
            let res = solve(&lp);
            let mut scaled = lp.clone();
            for c in &mut scaled.objective {
                *c *= q(k);
            }
            let res2 = solve(&scaled);
            prop_assert_eq!(res.status, res2.status);
            if res.status == LpStatus::Optimal {
                prop_assert_eq!(res2.value, &res.value * q(k));
            }
        }

        #[test]
        fn solving_is_deterministic(lp in arb_lp()) {
            prop_assert_eq!(solve(&lp), solve(&lp));
        }
    }
}
