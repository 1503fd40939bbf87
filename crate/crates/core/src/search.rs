//! Search for small certified subsets of a candidate lattice set.
//!
//! Exhaustive mode walks subsets by increasing size, lexicographically
//! within a size, and skips any subset containing an already certified one
//! (certification is inherited by supersets). Greedy mode starts from the
//! whole set and repeatedly drops the state whose removal keeps the largest
//! `β` over the three cuts smallest.
//!
//! Work is metered in `β` evaluations: one cut of one subset, i.e. one
//! primal/dual pair of LP solves (or one floating-point solve in prefilter
//! mode). Every subset that is reported has been certified in exact
//! arithmetic. Minimality is relative to what was searched within budget,
//! never proven.

use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::certifier::{beta, beta_float, certify, CertifierError, StateSet};
use crate::exact::Rational;
use crate::ghz::{Bipartition, LatticeIndex};

/// Default budget in `β` evaluations.
pub const DEFAULT_BUDGET: u64 = 100_000;

/// Floating-point `β` values at or above `1 - PREFILTER_MARGIN` are taken as
/// `β = 1` by the prefilter.
pub const PREFILTER_MARGIN: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Exhaustive,
    Greedy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Exact,
    FloatPrefilter,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub strategy: Strategy,
    /// Exhaustive: examine only this size. Greedy: stop at this size.
    pub target_size: Option<usize>,
    pub mode: Mode,
    pub budget: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self { strategy: Strategy::Exhaustive, target_size: None, mode: Mode::Exact, budget: DEFAULT_BUDGET }
    }
}

/// Resume point for an exhaustive search: the rank of the next subset in
/// enumeration order, and the certified subsets found before it.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchCursor {
    pub next_rank: u64,
    pub found: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoundSubset {
    /// Positions in the candidate list, ascending.
    pub positions: Vec<usize>,
    pub states: Vec<LatticeIndex>,
    /// Exact `β` for `A|BC`, `B|CA`, `C|AB`.
    pub betas: [Rational; 3],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub candidates: Vec<LatticeIndex>,
    pub config: SearchConfig,
    pub found: Vec<FoundSubset>,
    /// Subsets whose certification was attempted.
    pub explored: u64,
    pub evaluations: u64,
    pub complete: bool,
    /// Where to resume if incomplete (exhaustive only).
    pub cursor: Option<SearchCursor>,
    pub note: String,
}

impl SearchReport {
    pub fn min_size(&self) -> Option<usize> {
        self.found.iter().map(|f| f.positions.len()).min()
    }

    pub fn contains(&self, states: &[LatticeIndex]) -> bool {
        let mut want = states.to_vec();
        want.sort();
        self.found.iter().any(|f| {
            let mut have = f.states.clone();
            have.sort();
            have == want
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SearchError {
    #[error(transparent)]
    Certifier(#[from] CertifierError),
    #[error("target size {target} exceeds the {available} candidates")]
    TargetTooLarge { target: usize, available: usize },
    #[error("cursor lists a subset with position {position} beyond {available} candidates")]
    BadCursor { position: usize, available: usize },
}

/// Progress notifications, for streaming to a terminal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Progress {
    SizeStarted { size: usize, subsets: u64 },
    Certified { positions: Vec<usize> },
    BudgetExhausted { evaluations: u64 },
}

struct Evaluation {
    betas: Option<[Rational; 3]>,
    evaluations: u64,
}

fn evaluate(set: &StateSet, mode: Mode) -> Result<Evaluation, CertifierError> {
    let one = Rational::one();
    let mut evaluations = 0;
    match mode {
        Mode::Exact => {
            let mut betas = Vec::with_capacity(3);
            for cut in Bipartition::ALL {
                let b = beta(set, cut)?;
                evaluations += 1;
                if b >= one {
                    return Ok(Evaluation { betas: None, evaluations });
                }
                betas.push(b);
            }
            Ok(Evaluation { betas: Some(betas.try_into().expect("three cuts")), evaluations })
        }
        Mode::FloatPrefilter => {
            for cut in Bipartition::ALL {
                let b = beta_float(set, cut)?;
                evaluations += 1;
                if b >= 1.0 - PREFILTER_MARGIN {
                    return Ok(Evaluation { betas: None, evaluations });
                }
            }
            let verdict = certify(set)?;
            evaluations += 3;
            let betas = verdict.classification.is_certified().then_some(verdict.betas);
            Ok(Evaluation { betas, evaluations })
        }
    }
}

/// Lexicographic `k`-combinations of `0..n`.
fn combinations(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut current: Option<Vec<usize>> = (k <= n).then(|| (0..k).collect());
    std::iter::from_fn(move || {
        let out = current.clone()?;
        let mut next = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                current = None;
                break;
            }
            i -= 1;
            if next[i] < n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                current = Some(next);
                break;
            }
        }
        Some(out)
    })
}

fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc.saturating_mul((n - i) as u64) / (i as u64 + 1))
}

fn is_superset(sorted: &[usize], sub: &[usize]) -> bool {
    let mut it = sorted.iter();
    sub.iter().all(|x| it.any(|y| y == x))
}

/// Runs a search with default progress handling (none).
pub fn search_min_subsets(candidates: &StateSet, config: &SearchConfig) -> Result<SearchReport, SearchError> {
    run_search(candidates, config, None, &|_| {})
}

/// Runs a search, optionally resuming an exhaustive one from `cursor`.
pub fn run_search(
    candidates: &StateSet,
    config: &SearchConfig,
    cursor: Option<SearchCursor>,
    progress: &(dyn Fn(Progress) + Sync),
) -> Result<SearchReport, SearchError> {
    let n = candidates.len();
    if let Some(target) = config.target_size {
        if target > n {
            return Err(SearchError::TargetTooLarge { target, available: n });
        }
    }
    match config.strategy {
        Strategy::Exhaustive => exhaustive(candidates, config, cursor.unwrap_or_default(), progress),
        Strategy::Greedy => greedy(candidates, config, progress),
    }
}

/// Subsets evaluated together; the budget is checked between batches.
const BATCH: usize = 64;

fn exhaustive(
    candidates: &StateSet,
    config: &SearchConfig,
    cursor: SearchCursor,
    progress: &(dyn Fn(Progress) + Sync),
) -> Result<SearchReport, SearchError> {
    let n = candidates.len();
    if let Some(bad) = cursor.found.iter().flatten().find(|&&p| p >= n) {
        return Err(SearchError::BadCursor { position: *bad, available: n });
    }
    let sizes: Vec<usize> = match config.target_size {
        Some(k) => vec![k],
        None => (1..=n).collect(),
    };
    let mut found_positions = cursor.found.clone();
    let mut found: Vec<FoundSubset> = Vec::new();
    for positions in &cursor.found {
        // Subsets carried over from an earlier run are re-certified.
        let set = candidates.subset(positions)?;
        let verdict = certify(&set)?;
        if verdict.classification.is_certified() {
            found.push(FoundSubset { positions: positions.clone(), states: set.states().to_vec(), betas: verdict.betas });
        }
    }
    let mut rank: u64 = 0;
    let mut explored = 0u64;
    let mut evaluations = 0u64;

    for &size in &sizes {
        let total = binomial(n, size);
        if rank + total <= cursor.next_rank {
            rank += total;
            continue;
        }
        progress(Progress::SizeStarted { size, subsets: total });
        let mut iter = combinations(n, size).peekable();
        loop {
            // Collect a batch of unpruned subsets with their ranks.
            let mut batch: Vec<(u64, Vec<usize>)> = Vec::new();
            let mut reserved = 0u64;
            while batch.len() < BATCH {
                let Some(pos) = iter.peek() else { break };
                if rank < cursor.next_rank || found_positions.iter().any(|f| is_superset(pos, f)) {
                    rank += 1;
                    iter.next();
                    continue;
                }
                let worst = match config.mode {
                    Mode::Exact => 3,
                    Mode::FloatPrefilter => 6,
                };
                if evaluations + reserved + worst > config.budget {
                    break;
                }
                reserved += worst;
                batch.push((rank, iter.next().expect("peeked")));
                rank += 1;
            }
            if batch.is_empty() {
                if iter.peek().is_some() {
                    progress(Progress::BudgetExhausted { evaluations });
                    let next_rank = rank;
                    return Ok(report(candidates, config, found, explored, evaluations, false, Some(SearchCursor {
                        next_rank,
                        found: found_positions,
                    })));
                }
                break;
            }
            let results: Vec<Result<(Vec<usize>, StateSet, Evaluation), CertifierError>> = batch
                .par_iter()
                .map(|(_, pos)| {
                    let set = candidates.subset(pos)?;
                    let ev = evaluate(&set, config.mode)?;
                    Ok((pos.clone(), set, ev))
                })
                .collect();
            for r in results {
                let (pos, set, ev) = r?;
                explored += 1;
                evaluations += ev.evaluations;
                if let Some(betas) = ev.betas {
                    progress(Progress::Certified { positions: pos.clone() });
                    found_positions.push(pos.clone());
                    found.push(FoundSubset { positions: pos, states: set.states().to_vec(), betas });
                }
            }
        }
    }
    Ok(report(candidates, config, found, explored, evaluations, true, None))
}

fn greedy(
    candidates: &StateSet,
    config: &SearchConfig,
    progress: &(dyn Fn(Progress) + Sync),
) -> Result<SearchReport, SearchError> {
    let n = candidates.len();
    let floor = config.target_size.unwrap_or(1).max(1);
    let mut evaluations = 0u64;
    let mut explored = 0u64;

    let full_betas = |set: &StateSet| -> Result<(Option<[Rational; 3]>, u64), CertifierError> {
        let ev = evaluate(set, Mode::Exact)?;
        Ok((ev.betas, ev.evaluations))
    };

    let mut current: Vec<usize> = (0..n).collect();
    if config.budget < 3 {
        progress(Progress::BudgetExhausted { evaluations });
        return Ok(report(candidates, config, Vec::new(), 0, 0, false, None));
    }
    let (start, used) = full_betas(candidates)?;
    evaluations += used;
    explored += 1;
    let Some(mut current_betas) = start else {
        return Ok(report(candidates, config, Vec::new(), explored, evaluations, true, None));
    };
    let mut complete = true;
    while current.len() > floor {
        let needed = 3 * current.len() as u64;
        if evaluations + needed > config.budget {
            progress(Progress::BudgetExhausted { evaluations });
            complete = false;
            break;
        }
        let trials: Vec<Result<(usize, Option<[Rational; 3]>, u64), CertifierError>> = (0..current.len())
            .into_par_iter()
            .map(|drop| {
                let pos: Vec<usize> = current.iter().enumerate().filter(|(i, _)| *i != drop).map(|(_, &p)| p).collect();
                let set = candidates.subset(&pos)?;
                let (betas, used) = full_betas(&set)?;
                Ok((drop, betas, used))
            })
            .collect();
        let mut best: Option<(usize, [Rational; 3])> = None;
        for t in trials {
            let (drop, betas, used) = t?;
            evaluations += used;
            explored += 1;
            let Some(betas) = betas else { continue };
            let worst = |b: &[Rational; 3]| b.iter().max().expect("three").clone();
            if best.as_ref().map_or(true, |(_, b)| worst(&betas) < worst(b)) {
                best = Some((drop, betas));
            }
        }
        let Some((drop, betas)) = best else { break };
        current.remove(drop);
        current_betas = betas;
        progress(Progress::Certified { positions: current.clone() });
    }
    let set = candidates.subset(&current)?;
    let found = vec![FoundSubset { positions: current, states: set.states().to_vec(), betas: current_betas }];
    Ok(report(candidates, config, found, explored, evaluations, complete, None))
}

fn report(
    candidates: &StateSet,
    config: &SearchConfig,
    found: Vec<FoundSubset>,
    explored: u64,
    evaluations: u64,
    complete: bool,
    cursor: Option<SearchCursor>,
) -> SearchReport {
    let scope = match (config.strategy, config.target_size) {
        (Strategy::Exhaustive, Some(k)) => format!("all subsets of size {k} were examined"),
        (Strategy::Exhaustive, None) => "subsets were examined by increasing size; supersets of certified subsets were skipped".to_string(),
        (Strategy::Greedy, _) => "greedy removal; the result need not be minimal".to_string(),
    };
    let coverage = if complete { "the search finished within budget" } else { "the budget ran out before the search finished" };
    let note = format!(
        "{scope}; {coverage}. Sizes are minimal only among the subsets examined, not in general."
    );
    SearchReport {
        candidates: candidates.states().to_vec(),
        config: config.clone(),
        found,
        explored,
        evaluations,
        complete,
        cursor,
        note,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combinations_are_lexicographic_and_counted() {
        let all: Vec<Vec<usize>> = combinations(5, 3).collect();
        assert_eq!(all.len() as u64, binomial(5, 3));
        assert_eq!(all[0], vec![0, 1, 2]);
        assert_eq!(all[1], vec![0, 1, 3]);
        assert_eq!(all.last().unwrap(), &vec![2, 3, 4]);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(combinations(3, 0).count(), 1);
        assert_eq!(combinations(3, 4).count(), 0);
    }

    #[test]
    fn superset_test() {
        assert!(is_superset(&[0, 2, 3, 5], &[2, 5]));
        assert!(!is_superset(&[0, 2, 3, 5], &[1]));
        assert!(is_superset(&[1], &[]));
    }

    #[test]
    fn ghz_basis_minimal_size_is_five() {
        let report = search_min_subsets(&StateSet::full_basis(1), &SearchConfig::default()).unwrap();
        assert!(report.complete);
        assert_eq!(report.min_size(), Some(5));
        assert_eq!(report.found.len(), 56);
        assert!(report.found.iter().all(|f| f.positions.len() == 5));
    }

    #[test]
    fn single_state_has_nothing() {
        let set = StateSet::from_values(&[vec![3]]).unwrap();
        let report = search_min_subsets(&set, &SearchConfig::default()).unwrap();
        assert!(report.complete && report.found.is_empty());
    }

    #[test]
    fn zero_budget_is_incomplete() {
        let config = SearchConfig { budget: 0, ..SearchConfig::default() };
        let report = search_min_subsets(&StateSet::full_basis(1), &config).unwrap();
        assert!(!report.complete);
        assert_eq!(report.cursor.as_ref().unwrap().next_rank, 0);
    }

    #[test]
    fn resuming_matches_a_single_run() {
        let basis = StateSet::full_basis(1);
        let whole = search_min_subsets(&basis, &SearchConfig::default()).unwrap();
        let small = SearchConfig { budget: 300, ..SearchConfig::default() };
        let first = search_min_subsets(&basis, &small).unwrap();
        assert!(!first.complete);
        let rest = run_search(&basis, &SearchConfig::default(), first.cursor.clone(), &|_| {}).unwrap();
        assert!(rest.complete);
        let mut a: Vec<Vec<usize>> = whole.found.iter().map(|f| f.positions.clone()).collect();
        let mut b: Vec<Vec<usize>> = rest.found.iter().map(|f| f.positions.clone()).collect();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }

    #[test]
    fn prefilter_agrees_with_exact_at_t1() {
        let basis = StateSet::full_basis(1);
        let config = SearchConfig { mode: Mode::FloatPrefilter, target_size: Some(5), ..SearchConfig::default() };
        let report = search_min_subsets(&basis, &config).unwrap();
        assert_eq!(report.found.len(), 56);
    }

    #[test]
    fn greedy_from_basis_stays_certified() {
        let config = SearchConfig { strategy: Strategy::Greedy, ..SearchConfig::default() };
        let report = search_min_subsets(&StateSet::full_basis(1), &config).unwrap();
        assert_eq!(report.found.len(), 1);
        let f = &report.found[0];
        assert_eq!(f.positions.len(), 5);
        assert!(certify(&StateSet::new(f.states.clone()).unwrap()).unwrap().classification.is_certified());
    }
}
