//! Dense-tableau two-phase simplex, generic over the scalar field.

use std::cmp::Ordering;

use num_traits::Zero;

use super::scalar::Scalar;
use super::{Bound, LpInstance, LpStatus, Relation, Sense};

/// Solution of one instance in the instance's own variables and rows.
#[derive(Debug, Clone)]
pub(crate) struct RawSolution<F> {
    pub status: LpStatus,
    pub value: F,
    pub primal: Vec<F>,
    pub duals: Vec<F>,
    pub pivots: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Rule {
    Dantzig,
    Bland,
}

struct Tableau<F> {
    a: Vec<Vec<F>>,
    b: Vec<F>,
    basis: Vec<usize>,
    in_basis: Vec<bool>,
    /// Columns that formed the starting identity basis, by row.
    origin: Vec<usize>,
    /// Current phase objective, in the tableau's column signs.
    cost: Vec<F>,
    /// Reduced costs of the current phase objective.
    d: Vec<F>,
    /// Current phase objective value.
    z: F,
    /// Columns of free variables: they may enter in either direction and
    /// never leave the basis.
    free: Vec<bool>,
    /// Free columns whose sign has been flipped so they could enter.
    negated: Vec<bool>,
    rule: Rule,
    stall: usize,
    stall_limit: usize,
    pivots: usize,
    /// Sparse rows of the starting tableau, kept when the arithmetic is
    /// inexact so the current one can be rebuilt from the basis.
    original: Option<(Vec<Vec<(usize, F)>>, Vec<F>)>,
    since_refactor: usize,
}

/// Pivots between rebuilds of an inexact tableau.
const REFACTOR_INTERVAL: usize = 100;

enum Outcome {
    Optimal,
    Unbounded,
}

impl<F: Scalar> Tableau<F> {
    fn pivot(&mut self, r: usize, e: usize) {
        let inv = F::unit().div(&self.a[r][e]);
        let mut support = Vec::new();
        for (j, x) in self.a[r].iter_mut().enumerate() {
            if !x.vanishes() {
                *x = x.mul(&inv);
                support.push(j);
            } else {
                *x = F::nil();
            }
        }
        self.a[r][e] = F::unit();
        self.b[r] = self.b[r].mul(&inv);

        let (before, rest) = self.a.split_at_mut(r);
        let (pivot_row, after) = rest.split_first_mut().expect("pivot row exists");
        for (i, row) in before.iter_mut().enumerate().chain(after.iter_mut().enumerate().map(|(k, row)| (r + 1 + k, row))) {
            let f = row[e].clone();
            if f.vanishes() {
                continue;
            }
            for &j in &support {
                row[j] = row[j].sub(&f.mul(&pivot_row[j]));
            }
            row[e] = F::nil();
            self.b[i] = self.b[i].sub(&f.mul(&self.b[r]));
        }
        let f = self.d[e].clone();
        if !f.vanishes() {
            for &j in &support {
                self.d[j] = self.d[j].sub(&f.mul(&pivot_row[j]));
            }
            self.d[e] = F::nil();
            self.z = self.z.add(&f.mul(&self.b[r]));
        }
        self.in_basis[self.basis[r]] = false;
        self.in_basis[e] = true;
        self.basis[r] = e;
        self.pivots += 1;
        self.since_refactor += 1;
    }

    /// Entering column and whether it must be negated first (a free
    /// column with positive reduced cost).
    fn entering(&self, allowed: &[bool]) -> Option<(usize, bool)> {
        let mut best: Option<(usize, F)> = None;
        for (j, dj) in self.d.iter().enumerate() {
            if !allowed[j] {
                continue;
            }
            let score = if dj.below_zero() {
                dj.clone()
            } else if self.free[j] && dj.exceeds_zero() && !self.basis_has(j) {
                dj.neg()
            } else {
                continue;
            };
            match self.rule {
                Rule::Bland => return Some((j, dj.exceeds_zero())),
                Rule::Dantzig => {
                    if best.as_ref().map_or(true, |(_, b)| score.compare(b) == Ordering::Less) {
                        best = Some((j, score));
                    }
                }
            }
        }
        best.map(|(j, _)| (j, self.d[j].exceeds_zero()))
    }

    fn basis_has(&self, j: usize) -> bool {
        self.in_basis[j]
    }

    fn negate_column(&mut self, j: usize) {
        for row in &mut self.a {
            if !row[j].vanishes() {
                row[j] = row[j].neg();
            }
        }
        self.d[j] = self.d[j].neg();
        self.cost[j] = self.cost[j].neg();
        self.negated[j] = !self.negated[j];
    }

    /// Minimum-ratio row. Negative right-hand sides left by rounding count
    /// as zero. Ties are broken by the lexicographic rule on the rows of
    /// the basis inverse (read off the columns that started as the
    /// identity), which rules out cycling; under Bland's rule they go to the
    /// smallest basic variable index instead.
    fn leaving(&self, e: usize) -> Option<usize> {
        if let Some(tol) = F::harris_tolerance() {
            if self.rule == Rule::Dantzig {
                return self.leaving_harris(e, &tol);
            }
        }
        let mut best: Option<(usize, F)> = None;
        for (r, row) in self.a.iter().enumerate() {
            if !row[e].exceeds_zero() || self.free[self.basis[r]] {
                continue;
            }
            let ratio = if self.b[r].exceeds_zero() { self.b[r].div(&row[e]) } else { F::nil() };
            let better = match &best {
                None => true,
                Some((k, q)) => match ratio.compare(q) {
                    Ordering::Less => true,
                    Ordering::Equal => match self.rule {
                        Rule::Bland => self.basis[r] < self.basis[*k],
                        Rule::Dantzig => self.lex_less(r, *k, e),
                    },
                    Ordering::Greater => false,
                },
            };
            if better {
                best = Some((r, ratio));
            }
        }
        best.map(|(r, _)| r)
    }

    /// Two-pass ratio test for inexact arithmetic: the bound is relaxed by
    /// `tol`, and among rows within it the largest pivot element wins.
    fn leaving_harris(&self, e: usize, tol: &F) -> Option<usize> {
        let mut bound: Option<F> = None;
        for (r, row) in self.a.iter().enumerate() {
            if !row[e].exceeds_zero() || self.free[self.basis[r]] {
                continue;
            }
            let relaxed = self.b[r].add(tol).div(&row[e]);
            if bound.as_ref().map_or(true, |b| relaxed.compare(b) == Ordering::Less) {
                bound = Some(relaxed);
            }
        }
        let bound = bound?;
        let mut best: Option<usize> = None;
        for (r, row) in self.a.iter().enumerate() {
            if !row[e].exceeds_zero() || self.free[self.basis[r]] {
                continue;
            }
            let ratio = if self.b[r].exceeds_zero() { self.b[r].div(&row[e]) } else { F::nil() };
            if ratio.compare(&bound) == Ordering::Greater {
                continue;
            }
            if best.map_or(true, |k| row[e].compare(&self.a[k][e]) == Ordering::Greater) {
                best = Some(r);
            }
        }
        best
    }

    /// Whether row `r` of `B^{-1}`, scaled by `1/a[r][e]`, is
    /// lexicographically smaller than row `k` scaled by `1/a[k][e]`.
    fn lex_less(&self, r: usize, k: usize, e: usize) -> bool {
        let (pr, pk) = (&self.a[r][e], &self.a[k][e]);
        for &c in &self.origin {
            let (x, y) = (&self.a[r][c], &self.a[k][c]);
            if x.vanishes() && y.vanishes() {
                continue;
            }
            match x.mul(pk).compare(&y.mul(pr)) {
                Ordering::Less => return true,
                Ordering::Greater => return false,
                Ordering::Equal => {}
            }
        }
        false
    }

    fn run(&mut self, allowed: &[bool]) -> Outcome {
        loop {
            if self.since_refactor >= REFACTOR_INTERVAL {
                self.refactor();
            }
            let Some((e, flip)) = self.entering(allowed) else {
                if self.since_refactor > 0 && self.refactor() {
                    continue;
                }
                return Outcome::Optimal;
            };
            if flip {
                self.negate_column(e);
            }
            let Some(r) = self.leaving(e) else {
                if self.since_refactor > 0 && self.refactor() {
                    continue;
                }
                return Outcome::Unbounded;
            };
            let before = self.z.clone();
            self.pivot(r, e);
            if self.z.compare(&before) == Ordering::Equal {
                self.stall += 1;
                if self.stall >= self.stall_limit {
                    self.rule = Rule::Bland;
                }
            } else {
                self.stall = 0;
            }
        }
    }

    /// Rebuilds the tableau as `B^{-1} [A | I]` from the starting rows, with
    /// `B^{-1}` computed by Gauss-Jordan elimination with partial pivoting.
    /// Returns false (leaving the tableau untouched) when there is nothing
    /// stored to rebuild from or the basis matrix is numerically singular.
    fn refactor(&mut self) -> bool {
        self.since_refactor = 0;
        let Some((rows, rhs)) = &self.original else {
            return false;
        };
        let m = self.basis.len();
        let ncols = self.d.len();
        let sign = |j: usize, v: &F| if self.negated[j] { v.neg() } else { v.clone() };
        // Augmented [B | I] with B[i][r] = column basis[r] of row i.
        let mut aug = vec![vec![F::nil(); 2 * m]; m];
        let mut pos = vec![usize::MAX; ncols];
        for (r, &bv) in self.basis.iter().enumerate() {
            pos[bv] = r;
        }
        for (i, row) in rows.iter().enumerate() {
            for (j, v) in row {
                if pos[*j] != usize::MAX {
                    aug[i][pos[*j]] = sign(*j, v);
                }
            }
            aug[i][m + i] = F::unit();
        }
        for col in 0..m {
            let Some(p) = (col..m).max_by(|&x, &y| {
                aug[x][col].magnitude().partial_cmp(&aug[y][col].magnitude()).unwrap_or(Ordering::Equal)
            }) else {
                return false;
            };
            if aug[p][col].magnitude() < 1e-11 {
                return false;
            }
            aug.swap(col, p);
            let inv = F::unit().div(&aug[col][col]);
            for x in aug[col].iter_mut() {
                *x = x.mul(&inv);
            }
            let pivot_row = aug[col].clone();
            for (i, row) in aug.iter_mut().enumerate() {
                if i == col || row[col].vanishes() {
                    continue;
                }
                let f = row[col].clone();
                for (x, pv) in row.iter_mut().zip(&pivot_row) {
                    if !pv.vanishes() {
                        *x = x.sub(&f.mul(pv));
                    }
                }
            }
        }
        // Row `col` of the reduced system is row `col` of B^{-1}, i.e. the
        // tableau row whose basic variable is basis[col].
        let mut a = vec![vec![F::nil(); ncols]; m];
        let mut b = vec![F::nil(); m];
        for r in 0..m {
            let inv_row = &aug[r][m..];
            for (i, coef) in inv_row.iter().enumerate() {
                if coef.vanishes() {
                    continue;
                }
                for (j, v) in &rows[i] {
                    a[r][*j] = a[r][*j].add(&coef.mul(&sign(*j, v)));
                }
                b[r] = b[r].add(&coef.mul(&rhs[i]));
            }
            for x in a[r].iter_mut() {
                if x.vanishes() {
                    *x = F::nil();
                }
            }
            a[r][self.basis[r]] = F::unit();
        }
        self.a = a;
        self.b = b;
        let cost = self.cost.clone();
        self.set_objective(&cost);
        true
    }

    fn set_objective(&mut self, c: &[F]) {
        self.cost = c.to_vec();
        self.d = c.to_vec();
        self.z = F::nil();
        for (r, &bv) in self.basis.iter().enumerate() {
            let cb = &c[bv];
            if cb.vanishes() {
                continue;
            }
            for (dj, arj) in self.d.iter_mut().zip(&self.a[r]) {
                if !arj.vanishes() {
                    *dj = dj.sub(&cb.mul(arj));
                }
            }
            self.z = self.z.add(&cb.mul(&self.b[r]));
        }
    }
}

/// Solves `lp` directly (no decomposition).
pub(crate) fn solve_dense<F: Scalar>(lp: &LpInstance) -> RawSolution<F> {
    let n_orig = lp.num_vars();
    let m = lp.constraints.len();

    // Structural columns come first, one per variable.
    let n_struct = n_orig;
    let mut ncols = n_struct;

    // Normalize rows so rhs >= 0; ≥ rows with zero rhs become ≤ rows.
    let mut row_sign = vec![1i8; m];
    let mut relations = Vec::with_capacity(m);
    for (r, con) in lp.constraints.iter().enumerate() {
        let mut rel = con.relation;
        if con.rhs.is_negative() || (rel == Relation::Ge && con.rhs.is_zero()) {
            row_sign[r] = -1;
            rel = match rel {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
        }
        relations.push(rel);
    }

    let mut unit_col = vec![0usize; m];
    let mut surplus_col = vec![None; m];
    let mut artificial = Vec::new();
    for r in 0..m {
        match relations[r] {
            Relation::Le => {
                unit_col[r] = ncols;
                ncols += 1;
            }
            Relation::Ge => {
                surplus_col[r] = Some(ncols);
                ncols += 1;
                unit_col[r] = ncols;
                artificial.push(ncols);
                ncols += 1;
            }
            Relation::Eq => {
                unit_col[r] = ncols;
                artificial.push(ncols);
                ncols += 1;
            }
        }
    }

    let mut a = vec![vec![F::nil(); ncols]; m];
    let mut b = Vec::with_capacity(m);
    for (r, con) in lp.constraints.iter().enumerate() {
        let s = row_sign[r] as i64;
        for (j, coef) in &con.coeffs {
            let v = F::from_rational(coef);
            a[r][*j] = if s < 0 { v.neg() } else { v };
        }
        if let Some(sc) = surplus_col[r] {
            a[r][sc] = F::unit().neg();
        }
        a[r][unit_col[r]] = F::unit();
        let rhs = F::from_rational(&con.rhs);
        b.push(if s < 0 { rhs.neg() } else { rhs });
    }
    let mut is_art = vec![false; ncols];
    for &c in &artificial {
        is_art[c] = true;
    }

    let mut free = vec![false; ncols];
    for (j, bound) in lp.bounds.iter().enumerate() {
        free[j] = *bound == Bound::Free;
    }
    let mut in_basis = vec![false; ncols];
    for &c in &unit_col {
        in_basis[c] = true;
    }
    let mut t = Tableau {
        a,
        b,
        basis: unit_col.clone(),
        in_basis,
        origin: unit_col.clone(),
        free,
        negated: vec![false; ncols],
        cost: Vec::new(),
        d: Vec::new(),
        z: F::nil(),
        rule: Rule::Dantzig,
        stall: 0,
        stall_limit: 3 * (m + ncols),
        pivots: 0,
        original: None,
        since_refactor: 0,
    };
    if F::harris_tolerance().is_some() {
        let rows = t
            .a
            .iter()
            .map(|row| row.iter().enumerate().filter(|(_, v)| !v.vanishes()).map(|(j, v)| (j, v.clone())).collect())
            .collect();
        t.original = Some((rows, t.b.clone()));
    }

    if !artificial.is_empty() {
        let c1: Vec<F> = (0..ncols).map(|j| if is_art[j] { F::unit() } else { F::nil() }).collect();
        t.set_objective(&c1);
        let allowed = vec![true; ncols];
        t.run(&allowed);
        if t.z.exceeds_zero() {
            return RawSolution {
                status: LpStatus::Infeasible,
                value: F::nil(),
                primal: Vec::new(),
                duals: Vec::new(),
                pivots: t.pivots,
            };
        }
        // Drive zero-valued artificials out of the basis where possible.
        for r in 0..m {
            if !is_art[t.basis[r]] {
                continue;
            }
            if let Some(j) = (0..ncols).find(|&j| !is_art[j] && !t.a[r][j].vanishes()) {
                t.pivot(r, j);
            }
        }
    }

    let flip = lp.sense == Sense::Max;
    let mut c = vec![F::nil(); ncols];
    for (j, cj) in lp.objective.iter().enumerate() {
        let v = F::from_rational(cj);
        let v = if flip { v.neg() } else { v };
        c[j] = if t.negated[j] { v.neg() } else { v };
    }
    t.set_objective(&c);
    let allowed: Vec<bool> = (0..ncols).map(|j| !is_art[j]).collect();
    t.rule = Rule::Dantzig;
    t.stall = 0;
    if let Outcome::Unbounded = t.run(&allowed) {
        return RawSolution {
            status: LpStatus::Unbounded,
            value: F::nil(),
            primal: Vec::new(),
            duals: Vec::new(),
            pivots: t.pivots,
        };
    }

    let mut primal = vec![F::nil(); n_struct];
    for (r, &bv) in t.basis.iter().enumerate() {
        if bv < n_struct {
            primal[bv] = if t.negated[bv] { t.b[r].neg() } else { t.b[r].clone() };
        }
    }
    let duals = (0..m)
        .map(|r| {
            let y = t.d[unit_col[r]].neg();
            let y = if row_sign[r] < 0 { y.neg() } else { y };
            if flip {
                y.neg()
            } else {
                y
            }
        })
        .collect();
    let value = if flip { t.z.neg() } else { t.z.clone() };
    RawSolution { status: LpStatus::Optimal, value, primal, duals, pivots: t.pivots }
}
