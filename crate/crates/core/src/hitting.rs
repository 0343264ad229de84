//! Exact bounded hitting-set search over a hypergraph.
//!
//! A hitting set of size at most `budget` is searched depth-first: pick the
//! unhit edge with the fewest undecided vertices, branch on deleting each of
//! them in ascending order, and mark earlier branch vertices as kept in later
//! branches so every hitting set is reached along exactly one path. A greedy
//! packing of vertex-disjoint unhit edges bounds the deletions still needed.
//!
//! Work is split into an ordered frontier of subtrees explored in parallel;
//! results are merged by frontier index so outputs match the sequential
//! depth-first order regardless of scheduling.

use std::ops::ControlFlow;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::time::Instant;

use rayon::prelude::*;

pub(crate) struct Hypergraph {
    vertices: usize,
    edges: Vec<Box<[u32]>>,
    incidence: Vec<Vec<u32>>,
}

impl Hypergraph {
    pub(crate) fn new(vertices: usize, edges: Vec<Vec<usize>>) -> Self {
        let mut incidence = vec![Vec::new(); vertices];
        let edges: Vec<Box<[u32]>> = edges
            .into_iter()
            .map(|e| e.into_iter().map(|v| v as u32).collect())
            .collect();
        for (i, e) in edges.iter().enumerate() {
            for &v in e.iter() {
                incidence[v as usize].push(i as u32);
            }
        }
        Hypergraph {
            vertices,
            edges,
            incidence,
        }
    }

    pub(crate) fn edge_count(&self) -> usize {
        self.edges.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Mode {
    /// Stop at the first hitting set in depth-first order.
    Decide,
    /// Collect every hitting set within the budget.
    Enumerate,
}

#[derive(Debug, Clone)]
pub(crate) struct Limits {
    pub node_budget: u64,
    pub deadline: Option<Instant>,
    pub solution_limit: usize,
    pub threads: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Exhausted {
    Nodes,
    Time,
    Solutions,
}

#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct Counters {
    pub nodes: u64,
    pub prunes: u64,
}

pub(crate) struct RunResult {
    /// Hitting sets as ascending vertex lists, in depth-first order.
    pub solutions: Vec<Vec<u32>>,
    pub counters: Counters,
}

struct Shared {
    nodes: AtomicU64,
    solutions: AtomicUsize,
    limits: Limits,
    exhausted: AtomicBool,
    reason: AtomicUsize,
    first_found: AtomicUsize,
}

impl Shared {
    fn fail(&self, why: Exhausted) {
        self.reason.store(why as usize, Ordering::Relaxed);
        self.exhausted.store(true, Ordering::Relaxed);
    }

    fn reason(&self) -> Exhausted {
        match self.reason.load(Ordering::Relaxed) {
            0 => Exhausted::Nodes,
            1 => Exhausted::Time,
            _ => Exhausted::Solutions,
        }
    }
}

enum FrontierItem {
    Solution(Vec<u32>),
    Subtree { deleted: Vec<u32>, kept: Vec<u32> },
}

enum Stop {
    /// Decision mode found a hitting set.
    Found,
    /// A budget ran out or a lower-indexed subtree already answered.
    Abort,
}

const FLUSH_EVERY: u64 = 1024;

struct Dfs<'a> {
    h: &'a Hypergraph,
    budget: usize,
    mode: Mode,
    shared: &'a Shared,
    item: usize,
    hit: Vec<u16>,
    kept: Vec<bool>,
    kept_stack: Vec<u32>,
    deleted: Vec<u32>,
    used_stamp: Vec<u32>,
    stamp: u32,
    pending_nodes: u64,
    counters: Counters,
    solutions: Vec<Vec<u32>>,
    split_depth: Option<usize>,
    frontier: Vec<FrontierItem>,
}

impl<'a> Dfs<'a> {
    fn new(h: &'a Hypergraph, budget: usize, mode: Mode, shared: &'a Shared, item: usize) -> Self {
        Dfs {
            h,
            budget,
            mode,
            shared,
            item,
            hit: vec![0; h.edges.len()],
            kept: vec![false; h.vertices],
            kept_stack: Vec::new(),
            deleted: Vec::new(),
            used_stamp: vec![0; h.vertices],
            stamp: 0,
            pending_nodes: 0,
            counters: Counters::default(),
            solutions: Vec::new(),
            split_depth: None,
            frontier: Vec::new(),
        }
    }

    fn delete(&mut self, v: u32) {
        self.deleted.push(v);
        for &e in &self.h.incidence[v as usize] {
            self.hit[e as usize] += 1;
        }
    }

    fn undelete(&mut self) {
        let v = self.deleted.pop().expect("undelete without delete");
        for &e in &self.h.incidence[v as usize] {
            self.hit[e as usize] -= 1;
        }
    }

    fn keep(&mut self, v: u32) {
        self.kept[v as usize] = true;
        self.kept_stack.push(v);
    }

    fn unkeep_to(&mut self, len: usize) {
        while self.kept_stack.len() > len {
            let v = self.kept_stack.pop().unwrap();
            self.kept[v as usize] = false;
        }
    }

    fn tick(&mut self) -> ControlFlow<Stop> {
        self.counters.nodes += 1;
        self.pending_nodes += 1;
        if self.pending_nodes < FLUSH_EVERY {
            return ControlFlow::Continue(());
        }
        self.flush()
    }

    fn flush(&mut self) -> ControlFlow<Stop> {
        let total = self.shared.nodes.fetch_add(self.pending_nodes, Ordering::Relaxed) + self.pending_nodes;
        self.pending_nodes = 0;
        let limits = &self.shared.limits;
        if total > limits.node_budget {
            self.shared.fail(Exhausted::Nodes);
        } else if limits.deadline.is_some_and(|d| Instant::now() > d) {
            self.shared.fail(Exhausted::Time);
        }
        if self.shared.exhausted.load(Ordering::Relaxed)
            || self.shared.first_found.load(Ordering::Relaxed) < self.item
        {
            return ControlFlow::Break(Stop::Abort);
        }
        ControlFlow::Continue(())
    }

    fn record(&mut self) -> ControlFlow<Stop> {
        let mut sol = self.deleted.clone();
        sol.sort_unstable();
        if self.split_depth.is_some() {
            self.frontier.push(FrontierItem::Solution(sol));
            return ControlFlow::Continue(());
        }
        match self.mode {
            Mode::Decide => {
                self.solutions.push(sol);
                self.shared.first_found.fetch_min(self.item, Ordering::Relaxed);
                ControlFlow::Break(Stop::Found)
            }
            Mode::Enumerate => {
                self.solutions.push(sol);
                let seen = self.shared.solutions.fetch_add(1, Ordering::Relaxed) + 1;
                if seen > self.shared.limits.solution_limit {
                    self.shared.fail(Exhausted::Solutions);
                    return ControlFlow::Break(Stop::Abort);
                }
                ControlFlow::Continue(())
            }
        }
    }

    /// One pass over the edges: greedy disjoint packing of unhit edges on
    /// undecided vertices, plus the first unhit edge with the fewest
    /// undecided vertices. `None` when some unhit edge has no undecided
    /// vertex left.
    fn scan(&mut self) -> Option<(usize, Option<usize>)> {
        self.stamp = self.stamp.wrapping_add(1);
        if self.stamp == 0 {
            self.used_stamp.fill(0);
            self.stamp = 1;
        }
        let mut packing = 0;
        let mut best: Option<(usize, usize)> = None;
        for (i, e) in self.h.edges.iter().enumerate() {
            if self.hit[i] != 0 {
                continue;
            }
            let mut free = 0;
            let mut clash = false;
            for &v in e.iter() {
                if !self.kept[v as usize] {
                    free += 1;
                    clash |= self.used_stamp[v as usize] == self.stamp;
                }
            }
            if free == 0 {
                return None;
            }
            if !clash {
                packing += 1;
                for &v in e.iter() {
                    if !self.kept[v as usize] {
                        self.used_stamp[v as usize] = self.stamp;
                    }
                }
            }
            if best.is_none_or(|(_, c)| free < c) {
                best = Some((i, free));
            }
        }
        Some((packing, best.map(|(i, _)| i)))
    }

    fn search(&mut self) -> ControlFlow<Stop> {
        self.tick()?;
        let Some((packing, branch_edge)) = self.scan() else {
            self.counters.prunes += 1;
            return ControlFlow::Continue(());
        };
        let Some(edge) = branch_edge else {
            return self.record();
        };
        if self.deleted.len() + packing > self.budget {
            self.counters.prunes += 1;
            return ControlFlow::Continue(());
        }
        if self.split_depth == Some(self.deleted.len()) {
            self.frontier.push(FrontierItem::Subtree {
                deleted: self.deleted.clone(),
                kept: self.kept_stack.clone(),
            });
            return ControlFlow::Continue(());
        }
        let choices: Vec<u32> = self.h.edges[edge]
            .iter()
            .copied()
            .filter(|&v| !self.kept[v as usize])
            .collect();
        let mark = self.kept_stack.len();
        let mut flow = ControlFlow::Continue(());
        for v in choices {
            self.delete(v);
            flow = self.search();
            self.undelete();
            if flow.is_break() {
                break;
            }
            self.keep(v);
        }
        self.unkeep_to(mark);
        flow
    }
}

/// Searches for hitting sets of size at most `budget`. Vertices listed in
/// `forced_keep` may never be deleted.
pub(crate) fn run(
    h: &Hypergraph,
    budget: usize,
    forced_keep: &[u32],
    mode: Mode,
    limits: Limits,
) -> Result<RunResult, (Exhausted, Counters)> {
    let shared = Shared {
        nodes: AtomicU64::new(0),
        solutions: AtomicUsize::new(0),
        limits,
        exhausted: AtomicBool::new(false),
        reason: AtomicUsize::new(0),
        first_found: AtomicUsize::new(usize::MAX),
    };

    // Expand the tree breadth-limited until the frontier is wide enough to
    // keep every worker busy.
    let want = shared.limits.threads.max(1) * 16;
    let mut counters = Counters::default();
    let mut depth = 0;
    let frontier = loop {
        let mut dfs = Dfs::new(h, budget, mode, &shared, 0);
        for &v in forced_keep {
            dfs.keep(v);
        }
        dfs.split_depth = Some(depth);
        let flow = dfs.search();
        let _ = dfs.flush();
        counters.nodes += dfs.counters.nodes;
        counters.prunes += dfs.counters.prunes;
        if shared.exhausted.load(Ordering::Relaxed) {
            return Err((shared.reason(), counters));
        }
        debug_assert!(flow.is_continue());
        let subtrees = dfs
            .frontier
            .iter()
            .filter(|f| matches!(f, FrontierItem::Subtree { .. }))
            .count();
        if subtrees == 0 || dfs.frontier.len() >= want || depth >= budget.min(6) {
            break dfs.frontier;
        }
        depth += 1;
    };

    let results: Vec<(Vec<Vec<u32>>, Counters)> = frontier
        .par_iter()
        .enumerate()
        .map(|(item, node)| match node {
            FrontierItem::Solution(sol) => {
                if mode == Mode::Decide {
                    shared.first_found.fetch_min(item, Ordering::Relaxed);
                } else {
                    let seen = shared.solutions.fetch_add(1, Ordering::Relaxed) + 1;
                    if seen > shared.limits.solution_limit {
                        shared.fail(Exhausted::Solutions);
                    }
                }
                (vec![sol.clone()], Counters::default())
            }
            FrontierItem::Subtree { deleted, kept } => {
                if shared.first_found.load(Ordering::Relaxed) < item {
                    return (Vec::new(), Counters::default());
                }
                let mut dfs = Dfs::new(h, budget, mode, &shared, item);
                for &v in kept {
                    dfs.keep(v);
                }
                for &v in deleted {
                    dfs.delete(v);
                }
                let _ = dfs.search();
                let _ = dfs.flush();
                (dfs.solutions, dfs.counters)
            }
        })
        .collect();

    for (_, c) in &results {
        counters.nodes += c.nodes;
        counters.prunes += c.prunes;
    }
    if shared.exhausted.load(Ordering::Relaxed) {
        return Err((shared.reason(), counters));
    }
    let solutions = match mode {
        Mode::Decide => results
            .into_iter()
            .find_map(|(sols, _)| sols.into_iter().next())
            .into_iter()
            .collect(),
        Mode::Enumerate => results.into_iter().flat_map(|(sols, _)| sols).collect(),
    };
    Ok(RunResult {
        solutions,
        counters,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn limits(threads: usize) -> Limits {
        Limits {
            node_budget: u64::MAX,
            deadline: None,
            solution_limit: usize::MAX,
            threads,
        }
    }

    /// Every subset of vertices of size ≤ budget that hits all edges, by
    /// brute force, in ascending-list order.
    fn brute(vertices: usize, edges: &[Vec<usize>], budget: usize) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        for set in 0u32..(1 << vertices) {
            if set.count_ones() as usize > budget {
                continue;
            }
            if edges.iter().all(|e| e.iter().any(|&v| set >> v & 1 == 1)) {
                out.push((0..vertices as u32).filter(|v| set >> v & 1 == 1).collect());
            }
        }
        out
    }

    fn minimal_only(all: Vec<Vec<u32>>) -> Vec<Vec<u32>> {
        let min = all.iter().map(Vec::len).min().unwrap_or(0);
        let mut v: Vec<_> = all.into_iter().filter(|s| s.len() == min).collect();
        v.sort();
        v
    }

    fn cycle(n: usize) -> Vec<Vec<usize>> {
        (0..n).map(|i| vec![i, (i + 1) % n]).map(|mut e| {
            e.sort();
            e
        }).collect()
    }

    #[test]
    fn odd_cycle_cover() {
        let edges = cycle(7);
        let h = Hypergraph::new(7, edges.clone());
        assert!(run(&h, 3, &[], Mode::Decide, limits(1)).unwrap().solutions.is_empty());
        let r = run(&h, 4, &[], Mode::Decide, limits(1)).unwrap();
        assert_eq!(r.solutions.len(), 1);
        let mut all = run(&h, 4, &[], Mode::Enumerate, limits(2)).unwrap().solutions;
        all.sort();
        assert_eq!(all, minimal_only(brute(7, &edges, 4)));
    }

    #[test]
    fn matches_brute_force_on_random_hypergraphs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..200 {
            let vertices = rng.gen_range(3..12);
            let edge_count = rng.gen_range(1..15);
            let edges: Vec<Vec<usize>> = (0..edge_count)
                .map(|_| {
                    let size = rng.gen_range(1..4.min(vertices));
                    let mut e: Vec<usize> = (0..vertices).collect();
                    for i in 0..size {
                        let j = rng.gen_range(i..vertices);
                        e.swap(i, j);
                    }
                    e.truncate(size);
                    e.sort();
                    e
                })
                .collect();
            let h = Hypergraph::new(vertices, edges.clone());
            let all = brute(vertices, &edges, vertices);
            let min = all.iter().map(Vec::len).min().unwrap();
            let expected = minimal_only(all);
            assert!(run(&h, min - 1, &[], Mode::Decide, limits(3)).unwrap().solutions.is_empty() || min == 0);
            let found = run(&h, min, &[], Mode::Decide, limits(3)).unwrap().solutions;
            assert_eq!(found.len(), 1);
            assert!(expected.contains(&found[0]));
            // first in depth-first order does not depend on thread count
            let seq = run(&h, min, &[], Mode::Decide, limits(1)).unwrap().solutions;
            assert_eq!(seq, found);
            let mut enumerated = run(&h, min, &[], Mode::Enumerate, limits(4)).unwrap().solutions;
            enumerated.sort();
            assert_eq!(enumerated, expected);
        }
    }

    #[test]
    fn forced_keep_is_respected() {
        let edges = vec![vec![0, 1], vec![1, 2]];
        let h = Hypergraph::new(3, edges);
        let r = run(&h, 2, &[1], Mode::Enumerate, limits(1)).unwrap();
        assert_eq!(r.solutions, vec![vec![0, 2]]);
    }

    #[test]
    fn node_budget_reports_exhaustion() {
        let h = Hypergraph::new(15, cycle(15));
        let mut l = limits(1);
        l.node_budget = 0;
        assert!(matches!(run(&h, 7, &[], Mode::Decide, l), Err((Exhausted::Nodes, _))));
    }

    #[test]
    fn solution_limit_reports_exhaustion() {
        let h = Hypergraph::new(8, cycle(8));
        let mut l = limits(2);
        l.solution_limit = 1;
        assert!(matches!(run(&h, 4, &[], Mode::Enumerate, l), Err((Exhausted::Solutions, _))));
    }
}
