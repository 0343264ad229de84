//! Exact extremal sizes of d-simplex-free families at small ground sizes.
//!
//! The universe is every subset of size at most the cap. All d-simplices
//! inside it are materialized, and a family is simplex-free iff its
//! complement in the universe hits every simplex. Maximizing the family is
//! therefore a minimum hitting-set problem, solved exactly by
//! branch-and-bound. The star construction seeds the search: its complement
//! is feasible, and the loop keeps asking for one deletion fewer until the
//! answer is no.

use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::family::{canonical_form, FamilyError, GroundSet, SetFamily, SubsetMask, MAX_CANONICAL_GROUND};
use crate::formulas::{build_star_family, star_value, FormulaError};
use crate::hitting::{self, Counters, Exhausted, Hypergraph, Limits, Mode};
use crate::simplex::{enumerate_simplex_indices, find_simplex, SimplexError, DEFAULT_TUPLE_BUDGET};

pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;
pub const DEFAULT_ENUMERATION_LIMIT: usize = 1_000_000;
/// Largest `n_max` accepted by [`verify_conjecture`].
pub const MAX_CONJECTURE_N: u32 = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("inconsistent search problem: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Simplex(#[from] SimplexError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error("search inconclusive: {what} budget exhausted after {nodes} nodes")]
    BudgetExceeded { what: &'static str, nodes: u64 },
}

impl SearchError {
    /// True for outcomes that ran out of budget rather than failing.
    pub fn is_inconclusive(&self) -> bool {
        matches!(
            self,
            SearchError::BudgetExceeded { .. } | SearchError::Simplex(SimplexError::BudgetExceeded { .. })
        )
    }
}

/// One extremal question: the largest d-simplex-free family of subsets of
/// `{0, …, n−1}` with members of size at most `size_cap`, optionally
/// required to contain a member of size exactly `size_cap`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchProblem {
    pub n: u32,
    pub d: u32,
    pub size_cap: Option<u32>,
    pub require_max: bool,
    /// Decision mode: only ask whether a family of this size exists.
    pub target: Option<u64>,
}

impl SearchProblem {
    /// `f(n, d)`.
    pub fn f(n: u32, d: u32) -> Self {
        SearchProblem {
            n,
            d,
            size_cap: None,
            require_max: false,
            target: None,
        }
    }

    /// `f(n, d, k)`: members of size at most `n − k`.
    pub fn f_capped(n: u32, d: u32, k: u32) -> Self {
        SearchProblem {
            size_cap: Some(n.saturating_sub(k)),
            ..Self::f(n, d)
        }
    }

    /// `g(n, d, k)`: as `f(n, d, k)` with some member of size exactly `n − k`.
    pub fn g(n: u32, d: u32, k: u32) -> Self {
        SearchProblem {
            require_max: true,
            ..Self::f_capped(n, d, k)
        }
    }

    pub fn with_target(mut self, target: u64) -> Self {
        self.target = Some(target);
        self
    }

    pub fn cap(&self) -> u32 {
        self.size_cap.unwrap_or(self.n)
    }

    fn validate(&self) -> Result<GroundSet, SearchError> {
        let ground = GroundSet::new(self.n)?;
        ground.check_enumerable()?;
        if self.d == 0 {
            return Err(SearchError::Inconsistent("d must be at least 1".into()));
        }
        if self.cap() > self.n {
            return Err(SearchError::Inconsistent(format!(
                "size cap {} exceeds n = {}",
                self.cap(),
                self.n
            )));
        }
        if let Some(t) = self.target {
            if t > 1u64 << self.n {
                return Err(SearchError::Inconsistent(format!(
                    "target {t} exceeds the power set size 2^{}",
                    self.n
                )));
            }
        }
        Ok(ground)
    }
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub node_budget: u64,
    pub tuple_budget: u128,
    pub time_limit: Option<Duration>,
    /// Worker threads; `None` uses the ambient rayon pool.
    pub threads: Option<usize>,
    pub enumeration_limit: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            node_budget: DEFAULT_NODE_BUDGET,
            tuple_budget: DEFAULT_TUPLE_BUDGET,
            time_limit: None,
            threads: None,
            enumeration_limit: DEFAULT_ENUMERATION_LIMIT,
        }
    }
}

impl SearchConfig {
    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = Some(threads);
        self
    }

    fn install<R: Send>(&self, op: impl FnOnce() -> R + Send) -> Result<R, SearchError> {
        match self.threads {
            Some(t) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(t.max(1))
                    .build()
                    .map_err(|e| SearchError::Inconsistent(format!("thread pool: {e}")))?;
                Ok(pool.install(op))
            }
            None => Ok(op()),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SearchStats {
    pub universe: u64,
    pub simplices: u64,
    pub decision_runs: u32,
    pub nodes: u64,
    pub prunes: u64,
    pub wall_time_secs: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// `optimum` is the exact maximum.
    Optimal,
    /// Decision mode: a family of at least the target size exists.
    TargetReached,
    /// Decision mode: no family reaches the target; `optimum` is the best
    /// size known (the seed construction).
    TargetUnreachable,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchOutcome {
    pub verdict: Verdict,
    /// Size of `witness`.
    pub optimum: u64,
    pub witness: SetFamily,
    pub optimal_count: Option<u64>,
    pub optimal_orbit_count: Option<u64>,
    pub stats: SearchStats,
}

/// All optimal families of a problem together with the optimum search that
/// produced them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Enumeration {
    pub outcome: SearchOutcome,
    pub families: Vec<SetFamily>,
    /// Orbit representatives under relabeling, when `n ≤ 8`.
    pub canonical_forms: Option<Vec<SetFamily>>,
}

/// A prepared instance: the capped universe, its simplex hypergraph, and the
/// mandatory member for g-type problems.
struct Instance {
    ground: GroundSet,
    d: u32,
    cap: u32,
    universe: SetFamily,
    graph: Hypergraph,
    mandatory: Option<SubsetMask>,
}

impl Instance {
    fn build(prob: &SearchProblem, cfg: &SearchConfig) -> Result<Self, SearchError> {
        let ground = prob.validate()?;
        let cap = prob.cap();
        let universe = SetFamily::all_up_to_size(ground, cap)?;
        let simplices = enumerate_simplex_indices(&universe, prob.d, cfg.tuple_budget)?;
        let graph = Hypergraph::new(universe.len(), simplices);
        // One representative mandatory member suffices: relabeling carries
        // any family with a size-cap member to one containing {0, …, cap−1}.
        let mandatory = prob
            .require_max
            .then(|| SubsetMask::from_elements(0..cap));
        Ok(Instance {
            ground,
            d: prob.d,
            cap,
            universe,
            graph,
            mandatory,
        })
    }

    fn index_of(&self, mask: SubsetMask) -> u32 {
        self.universe
            .members()
            .binary_search(&mask)
            .expect("mask is in the universe") as u32
    }

    fn complement(&self, deleted: &[u32]) -> SetFamily {
        let mut drop = vec![false; self.universe.len()];
        for &v in deleted {
            drop[v as usize] = true;
        }
        self.universe.filter({
            let mut i = 0;
            move |_| {
                let keep = !drop[i];
                i += 1;
                keep
            }
        })
    }

    fn is_feasible(&self, fam: &SetFamily) -> bool {
        fam.is_subfamily_of(&self.universe)
            && self.mandatory.is_none_or(|y| fam.contains(y))
            && find_simplex(fam, self.d).is_none()
    }

    /// The star construction restricted to the cap; falls back to `{∅, Y}`
    /// should it ever fail to be feasible.
    fn seed(&self) -> Result<SetFamily, SearchError> {
        let n = self.ground.n();
        let k = n - self.cap;
        if k < n {
            let star = build_star_family(n, 0, self.d, k)?;
            let capped = star.filter(|a| a.len() <= self.cap);
            if self.is_feasible(&capped) {
                return Ok(capped);
            }
        }
        let y = self.mandatory.unwrap_or(SubsetMask::EMPTY);
        Ok(SetFamily::new(self.ground, [SubsetMask::EMPTY, y])?)
    }

    fn limits(&self, cfg: &SearchConfig, started: Instant) -> Limits {
        Limits {
            node_budget: cfg.node_budget,
            deadline: cfg.time_limit.map(|t| started + t),
            solution_limit: cfg.enumeration_limit,
            threads: cfg.threads.unwrap_or_else(rayon::current_num_threads),
        }
    }

    fn forced_keep(&self, mandatory: Option<SubsetMask>) -> Vec<u32> {
        mandatory.map(|y| vec![self.index_of(y)]).unwrap_or_default()
    }
}

fn exhausted(why: Exhausted, counters: Counters) -> SearchError {
    let what = match why {
        Exhausted::Nodes => "node",
        Exhausted::Time => "time",
        Exhausted::Solutions => "enumeration",
    };
    SearchError::BudgetExceeded {
        what,
        nodes: counters.nodes,
    }
}

fn solve(inst: &Instance, target: Option<u64>, cfg: &SearchConfig, started: Instant) -> Result<SearchOutcome, SearchError> {
    let mut stats = SearchStats {
        universe: inst.universe.len() as u64,
        simplices: inst.graph.edge_count() as u64,
        ..SearchStats::default()
    };
    let limits = inst.limits(cfg, started);
    let keep = inst.forced_keep(inst.mandatory);
    let size = inst.universe.len();

    let decide = |budget: usize, stats: &mut SearchStats| -> Result<Option<Vec<u32>>, SearchError> {
        stats.decision_runs += 1;
        let run = hitting::run(&inst.graph, budget, &keep, Mode::Decide, limits.clone());
        let run = run.map_err(|(why, c)| exhausted(why, c))?;
        stats.nodes += run.counters.nodes;
        stats.prunes += run.counters.prunes;
        Ok(run.solutions.into_iter().next())
    };

    let seed = inst.seed()?;
    let (verdict, witness) = match target {
        Some(t) if (seed.len() as u64) >= t => (Verdict::TargetReached, seed),
        Some(t) if t > size as u64 => (Verdict::TargetUnreachable, seed),
        Some(t) => match decide(size - t as usize, &mut stats)? {
            Some(h) => (Verdict::TargetReached, inst.complement(&h)),
            None => (Verdict::TargetUnreachable, seed),
        },
        None => {
            let mut best = seed;
            while best.len() < size {
                match decide(size - best.len() - 1, &mut stats)? {
                    Some(h) => best = inst.complement(&h),
                    None => break,
                }
            }
            (Verdict::Optimal, best)
        }
    };
    if !inst.is_feasible(&witness) {
        return Err(SearchError::Inconsistent(
            "internal error: witness violates the problem constraints".into(),
        ));
    }
    stats.wall_time_secs = started.elapsed().as_secs_f64();
    Ok(SearchOutcome {
        verdict,
        optimum: witness.len() as u64,
        witness,
        optimal_count: None,
        optimal_orbit_count: None,
        stats,
    })
}

/// The exact maximum size of a d-simplex-free family under the problem's
/// constraints, with a witness. In decision mode (`target` set) only
/// answers whether the target is reachable.
pub fn max_simplex_free(prob: &SearchProblem, cfg: &SearchConfig) -> Result<SearchOutcome, SearchError> {
    let started = Instant::now();
    cfg.install(|| {
        let inst = Instance::build(prob, cfg)?;
        solve(&inst, prob.target, cfg, started)
    })?
}

fn sort_families(families: &mut Vec<SetFamily>) {
    families.sort_by(|a, b| a.members().cmp(b.members()));
    families.dedup();
}

/// Orbit representatives of `families` under relabeling, sorted; `None`
/// above the canonical-form size limit.
pub fn orbit_representatives(families: &[SetFamily]) -> Option<Vec<SetFamily>> {
    let n = families.first()?.n();
    if n > MAX_CANONICAL_GROUND {
        return None;
    }
    let mut reps: Vec<SetFamily> = families
        .iter()
        .map(|f| canonical_form(f).expect("n checked above"))
        .collect();
    sort_families(&mut reps);
    Some(reps)
}

/// Every family attaining the optimum of `prob`, each checked simplex-free,
/// plus their orbit representatives. `target` is ignored.
pub fn enumerate_optimal(prob: &SearchProblem, cfg: &SearchConfig) -> Result<Enumeration, SearchError> {
    let started = Instant::now();
    cfg.install(|| {
        let inst = Instance::build(prob, cfg)?;
        let mut outcome = solve(&inst, None, cfg, started)?;
        let budget = inst.universe.len() - outcome.optimum as usize;
        let limits = inst.limits(cfg, started);

        // g-type problems: every member of the cap size may be the mandatory one.
        let mandatory: Vec<Option<SubsetMask>> = match inst.mandatory {
            None => vec![None],
            Some(_) => inst
                .universe
                .iter()
                .filter(|a| a.len() == inst.cap)
                .map(Some)
                .collect(),
        };
        let mut families = Vec::new();
        for y in mandatory {
            let run = hitting::run(&inst.graph, budget, &inst.forced_keep(y), Mode::Enumerate, limits.clone())
                .map_err(|(why, c)| exhausted(why, c))?;
            outcome.stats.nodes += run.counters.nodes;
            outcome.stats.prunes += run.counters.prunes;
            families.extend(run.solutions.iter().map(|h| inst.complement(h)));
            if families.len() > cfg.enumeration_limit {
                return Err(exhausted(Exhausted::Solutions, run.counters));
            }
        }
        sort_families(&mut families);
        for f in &families {
            if !inst.is_subfamily_feasible(f) {
                return Err(SearchError::Inconsistent(
                    "internal error: enumerated family contains a simplex".into(),
                ));
            }
        }
        let canonical_forms = orbit_representatives(&families);
        outcome.optimal_count = Some(families.len() as u64);
        outcome.optimal_orbit_count = canonical_forms.as_ref().map(|c| c.len() as u64);
        outcome.stats.wall_time_secs = started.elapsed().as_secs_f64();
        Ok(Enumeration {
            outcome,
            families,
            canonical_forms,
        })
    })?
}

impl Instance {
    fn is_subfamily_feasible(&self, fam: &SetFamily) -> bool {
        fam.is_subfamily_of(&self.universe)
            && find_simplex(fam, self.d).is_none()
            && (self.mandatory.is_none() || fam.iter().any(|a| a.len() == self.cap))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjectureRow {
    pub n: u32,
    pub k: u32,
    pub exact: u64,
    pub conjectured: u128,
    pub matches: bool,
    /// The optimal families are exactly the `n` star families.
    pub unique: bool,
    pub optimal_count: u64,
    pub orbit_count: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjectureReport {
    pub d: u32,
    pub n_max: u32,
    pub rows: Vec<ConjectureRow>,
    /// False when a budget ran out before the sweep finished.
    pub complete: bool,
    pub inconclusive: Option<String>,
}

impl ConjectureReport {
    pub fn all_match(&self) -> bool {
        self.complete && self.rows.iter().all(|r| r.matches)
    }
}

/// Compares exact `f(n, d, k)` with the star value for every
/// `1 ≤ k ≤ n − d − 1`, `n ≤ n_max`, and checks that the optimal families
/// are exactly the star families. Reports only what was checked.
pub fn verify_conjecture(n_max: u32, d: u32, cfg: &SearchConfig) -> Result<ConjectureReport, SearchError> {
    if n_max > MAX_CONJECTURE_N {
        return Err(SearchError::Inconsistent(format!(
            "n_max = {n_max} above the supported {MAX_CONJECTURE_N}"
        )));
    }
    if d == 0 {
        return Err(SearchError::Inconsistent("d must be at least 1".into()));
    }
    let mut report = ConjectureReport {
        d,
        n_max,
        rows: Vec::new(),
        complete: true,
        inconclusive: None,
    };
    for n in d + 2..=n_max {
        for k in 1..=n - d - 1 {
            let prob = SearchProblem::f_capped(n, d, k);
            let en = match enumerate_optimal(&prob, cfg) {
                Ok(en) => en,
                Err(e) if e.is_inconclusive() => {
                    report.complete = false;
                    report.inconclusive = Some(format!("n={n} k={k}: {e}"));
                    return Ok(report);
                }
                Err(e) => return Err(e),
            };
            let conjectured = star_value(n, d, k)?.value;
            let mut stars = (0..n)
                .map(|x| build_star_family(n, x, d, k))
                .collect::<Result<Vec<_>, _>>()?;
            sort_families(&mut stars);
            report.rows.push(ConjectureRow {
                n,
                k,
                exact: en.outcome.optimum,
                conjectured,
                matches: en.outcome.optimum as u128 == conjectured,
                unique: en.families == stars,
                optimal_count: en.families.len() as u64,
                orbit_count: en.outcome.optimal_orbit_count,
            });
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn optimum(prob: SearchProblem) -> u64 {
        let out = max_simplex_free(&prob, &SearchConfig::default()).unwrap();
        assert_eq!(out.verdict, Verdict::Optimal);
        out.optimum
    }

    #[test]
    fn small_known_values() {
        assert_eq!(optimum(SearchProblem::f(4, 3)), 15);
        assert_eq!(optimum(SearchProblem::f(3, 2)), 7);
        assert_eq!(optimum(SearchProblem::f(4, 1)), 9);
        assert_eq!(optimum(SearchProblem::f(1, 1)), 2);
        assert_eq!(optimum(SearchProblem::f(2, 1)), 3);
    }

    #[test]
    fn capped_triangle_free_on_four() {
        let v = optimum(SearchProblem::f_capped(4, 2, 2));
        assert!((8..=9).contains(&v));
    }

    #[test]
    fn g_instances_contain_a_top_member() {
        for k in 0..=4 {
            let out = max_simplex_free(&SearchProblem::g(4, 2, k), &SearchConfig::default()).unwrap();
            assert!(out.witness.iter().any(|a| a.len() == 4 - k));
            assert!(out.witness.iter().all(|a| a.len() <= 4 - k));
        }
        assert_eq!(optimum(SearchProblem::g(4, 2, 4)), 1);
    }

    #[test]
    fn decision_mode() {
        let cfg = SearchConfig::default();
        let reach = max_simplex_free(&SearchProblem::f(5, 3).with_target(27), &cfg).unwrap();
        assert_eq!(reach.verdict, Verdict::TargetReached);
        assert!(reach.optimum >= 27);
        let miss = max_simplex_free(&SearchProblem::f(5, 3).with_target(28), &cfg).unwrap();
        assert_eq!(miss.verdict, Verdict::TargetUnreachable);
        let miss = max_simplex_free(&SearchProblem::f(4, 3).with_target(16), &cfg).unwrap();
        assert_eq!(miss.verdict, Verdict::TargetUnreachable);
        assert!(max_simplex_free(&SearchProblem::f(3, 3).with_target(9), &cfg).is_err());
    }

    #[test]
    fn inconsistent_problems_rejected() {
        let cfg = SearchConfig::default();
        let mut p = SearchProblem::f(4, 2);
        p.size_cap = Some(5);
        assert!(matches!(max_simplex_free(&p, &cfg), Err(SearchError::Inconsistent(_))));
        assert!(max_simplex_free(&SearchProblem::f(17, 2), &cfg).is_err());
        assert!(max_simplex_free(&SearchProblem::f(4, 0), &cfg).is_err());
    }

    #[test]
    fn node_budget_is_inconclusive() {
        let cfg = SearchConfig {
            node_budget: 5,
            ..SearchConfig::default()
        };
        let err = max_simplex_free(&SearchProblem::f(5, 2), &cfg).unwrap_err();
        assert!(err.is_inconclusive(), "{err}");
    }

    #[test]
    fn tuple_budget_is_inconclusive() {
        let cfg = SearchConfig {
            tuple_budget: 10,
            ..SearchConfig::default()
        };
        let err = max_simplex_free(&SearchProblem::f(4, 3), &cfg).unwrap_err();
        assert!(err.is_inconclusive());
    }

    #[test]
    fn enumerate_small_cases() {
        let cfg = SearchConfig::default();
        let e = enumerate_optimal(&SearchProblem::f(4, 3), &cfg).unwrap();
        assert_eq!(e.families.len(), 4);
        assert_eq!(e.outcome.optimal_orbit_count, Some(1));
        let e = enumerate_optimal(&SearchProblem::f(3, 2), &cfg).unwrap();
        assert_eq!(e.families.len(), 3);
        let e = enumerate_optimal(&SearchProblem::f(3, 3), &cfg).unwrap();
        assert_eq!(e.families.len(), 1);
    }

    #[test]
    fn enumerate_g_unions_over_mandatory_members() {
        let cfg = SearchConfig::default();
        let g = enumerate_optimal(&SearchProblem::g(4, 2, 1), &cfg).unwrap();
        assert!(g.families.iter().all(|f| f.iter().any(|a| a.len() == 3)));
        // every optimal family of the uncapped-member problem with a 3-set appears
        let f = enumerate_optimal(&SearchProblem::f_capped(4, 2, 1), &cfg).unwrap();
        if f.outcome.optimum == g.outcome.optimum {
            for fam in &f.families {
                if fam.iter().any(|a| a.len() == 3) {
                    assert!(g.families.contains(fam));
                }
            }
        }
    }

    #[test]
    fn conjecture_empty_range() {
        let r = verify_conjecture(4, 4, &SearchConfig::default()).unwrap();
        assert!(r.rows.is_empty());
        assert!(r.complete);
        assert!(verify_conjecture(7, 2, &SearchConfig::default()).is_err());
    }
}
