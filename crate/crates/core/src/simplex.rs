//! Detection and enumeration of d-simplices: `d+1` distinct sets whose
//! common intersection is empty while every `d` of them still intersect.

use std::ops::ControlFlow;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::family::{FamilyError, GroundSet, SetFamily, SubsetMask};

/// Default cap on the number of `(d+1)`-tuples `enumerate_simplices` may
/// consider.
pub const DEFAULT_TUPLE_BUDGET: u128 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimplexError {
    #[error("a {d}-simplex has {expected} sets, got {got}", expected = d + 1)]
    WrongArity { d: u32, got: usize },
    #[error("simplex dimension must be at least 1")]
    ZeroDimension,
    #[error(transparent)]
    Ground(#[from] FamilyError),
    #[error("enumeration needs {tuples} tuples, budget is {budget}")]
    BudgetExceeded { tuples: u128, budget: u128 },
}

/// A certified d-simplex: `d+1` distinct sets sorted by mask value.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SimplexWitness {
    d: u32,
    sets: Vec<SubsetMask>,
}

impl SimplexWitness {
    /// Validates and sorts `sets`; `None` unless they form a d-simplex.
    pub fn new(ground: GroundSet, d: u32, mut sets: Vec<SubsetMask>) -> Option<Self> {
        if !is_simplex(ground, &sets, d).ok()? {
            return None;
        }
        sets.sort_unstable();
        Some(SimplexWitness { d, sets })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn sets(&self) -> &[SubsetMask] {
        &self.sets
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("witness serialization is infallible")
    }
}

/// True iff `sets` are pairwise distinct, have empty common intersection,
/// and every drop-one intersection is nonempty. Order-insensitive.
pub fn is_simplex(ground: GroundSet, sets: &[SubsetMask], d: u32) -> Result<bool, SimplexError> {
    if d == 0 {
        return Err(SimplexError::ZeroDimension);
    }
    if sets.len() != d as usize + 1 {
        return Err(SimplexError::WrongArity { d, got: sets.len() });
    }
    for &s in sets {
        ground.check(s)?;
    }
    for (i, a) in sets.iter().enumerate() {
        if sets[i + 1..].contains(a) {
            return Ok(false);
        }
    }
    // prefix[i] = AND of sets[..i], suffix[i] = AND of sets[i..]
    let full = ground.full();
    let mut prefix = vec![full; sets.len() + 1];
    let mut suffix = vec![full; sets.len() + 1];
    for i in 0..sets.len() {
        prefix[i + 1] = prefix[i] & sets[i];
    }
    for i in (0..sets.len()).rev() {
        suffix[i] = suffix[i + 1] & sets[i];
    }
    if !prefix[sets.len()].is_empty() {
        return Ok(false);
    }
    Ok((0..sets.len()).all(|j| !(prefix[j] & suffix[j + 1]).is_empty()))
}

/// Depth-first walk over increasing index tuples of `cands` that form a
/// simplex of `k = d+1` sets, in lexicographic order. Calls `visit` with the
/// chosen indices of each complete simplex.
///
/// Prunes: a prefix with an empty running intersection before `k` members
/// can never complete (every later drop-one intersection contains it), and
/// a prefix whose own drop-one intersections are empty stays dead because
/// intersections only shrink.
struct TupleWalk<'a> {
    cands: &'a [u64],
    k: usize,
    chosen: Vec<usize>,
    // drop-one intersections per depth, flattened: level `l` occupies
    // drops[l*k .. l*k + l]
    drops: Vec<u64>,
}

impl<'a> TupleWalk<'a> {
    fn new(cands: &'a [u64], k: usize) -> Self {
        TupleWalk {
            cands,
            k,
            chosen: Vec::with_capacity(k),
            drops: vec![0; k * (k + 1)],
        }
    }

    fn run<F>(&mut self, first: std::ops::Range<usize>, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        self.step(first, u64::MAX, visit)
    }

    fn step<F>(&mut self, range: std::ops::Range<usize>, total: u64, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        let depth = self.chosen.len();
        let remaining_after = self.k - depth - 1;
        let end = range.end.min(self.cands.len().saturating_sub(remaining_after));
        for i in range.start..end {
            let s = self.cands[i];
            let new_total = total & s;
            let last = remaining_after == 0;
            if last != (new_total == 0) {
                continue;
            }
            let (cur, next) = self.drops.split_at_mut((depth + 1) * self.k);
            let cur = &cur[depth * self.k..depth * self.k + depth];
            let mut alive = total != 0;
            for (slot, &dr) in next.iter_mut().zip(cur) {
                let v = dr & s;
                alive &= v != 0;
                *slot = v;
            }
            if !alive {
                continue;
            }
            next[depth] = total;
            self.chosen.push(i);
            let flow = if last {
                visit(&self.chosen)
            } else {
                self.step(i + 1..self.cands.len(), new_total, visit)
            };
            self.chosen.pop();
            flow?;
        }
        ControlFlow::Continue(())
    }
}

/// Members that can take part in a simplex: neither ∅ nor X ever can.
fn candidates(fam: &SetFamily) -> (Vec<u64>, Vec<SubsetMask>) {
    let full = fam.ground().full();
    let masks: Vec<SubsetMask> = fam
        .iter()
        .filter(|&m| !m.is_empty() && m != full)
        .collect();
    (masks.iter().map(|m| m.bits()).collect(), masks)
}

/// The lexicographically least d-simplex among the members of `fam`, or
/// `None` if the family is d-simplex-free. `d = 0` never yields a witness.
pub fn find_simplex(fam: &SetFamily, d: u32) -> Option<SimplexWitness> {
    if d == 0 {
        return None;
    }
    let k = d as usize + 1;
    let (cands, masks) = candidates(fam);
    if cands.len() < k {
        return None;
    }
    let mut found = None;
    let _ = TupleWalk::new(&cands, k).run(0..cands.len(), &mut |idx| {
        found = Some(idx.iter().map(|&i| masks[i]).collect::<Vec<_>>());
        ControlFlow::Break(())
    });
    found.map(|sets| SimplexWitness { d, sets })
}

pub fn is_simplex_free(fam: &SetFamily, d: u32) -> bool {
    find_simplex(fam, d).is_none()
}

/// `C(n, r)` saturating at `u128::MAX`.
pub(crate) fn binomial_saturating(n: u128, r: u128) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = match acc.checked_mul(n - i) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Every d-simplex whose members lie in `universe`, sorted, using the
/// default tuple budget.
pub fn enumerate_simplices(universe: &SetFamily, d: u32) -> Result<Vec<SimplexWitness>, SimplexError> {
    enumerate_simplices_with_budget(universe, d, DEFAULT_TUPLE_BUDGET)
}

pub fn enumerate_simplices_with_budget(
    universe: &SetFamily,
    d: u32,
    budget: u128,
) -> Result<Vec<SimplexWitness>, SimplexError> {
    Ok(enumerate_simplex_indices(universe, d, budget)?
        .into_iter()
        .map(|idx| SimplexWitness {
            d,
            sets: idx.iter().map(|&i| universe.members()[i]).collect(),
        })
        .collect())
}

/// Like [`enumerate_simplices_with_budget`] but returns each simplex as
/// ascending indices into `universe.members()`.
pub fn enumerate_simplex_indices(
    universe: &SetFamily,
    d: u32,
    budget: u128,
) -> Result<Vec<Vec<usize>>, SimplexError> {
    if d == 0 {
        return Err(SimplexError::ZeroDimension);
    }
    let k = d as usize + 1;
    let tuples = binomial_saturating(universe.len() as u128, k as u128);
    if tuples > budget {
        return Err(SimplexError::BudgetExceeded { tuples, budget });
    }
    let (cands, masks) = candidates(universe);
    // candidate position -> universe index
    let positions: Vec<usize> = masks
        .iter()
        .map(|m| universe.members().binary_search(m).expect("candidate is a member"))
        .collect();
    let per_first: Vec<Vec<Vec<usize>>> = (0..cands.len())
        .into_par_iter()
        .map(|first| {
            let mut out = Vec::new();
            let _ = TupleWalk::new(&cands, k).run(first..first + 1, &mut |idx| {
                out.push(idx.iter().map(|&i| positions[i]).collect());
                ControlFlow::Continue(())
            });
            out
        })
        .collect();
    Ok(per_first.into_iter().flatten().collect())
}
