//! Test-only oracles, written straight from the definitions and kept
//! independent of the library's search paths.

#![allow(dead_code)]

use rand::Rng;
use simplexfree::{GroundSet, SetFamily, SubsetMask};

/// d+1 distinct sets, empty total intersection, every d of them meet.
pub fn naive_is_simplex(sets: &[u64]) -> bool {
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            if sets[i] == sets[j] {
                return false;
            }
        }
    }
    if sets.iter().fold(u64::MAX, |a, &s| a & s) != 0 {
        return false;
    }
    (0..sets.len()).all(|skip| {
        sets.iter()
            .enumerate()
            .filter(|&(i, _)| i != skip)
            .fold(u64::MAX, |a, (_, &s)| a & s)
            != 0
    })
}

/// All `r`-subsets of `0..len` as index vectors, lexicographic.
pub fn combinations(len: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(r);
    fn go(start: usize, len: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..len {
            if len - i < r - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, len, r, cur, out);
            cur.pop();
        }
    }
    go(0, len, r, &mut cur, &mut out);
    out
}

/// Every d-simplex among the subsets of an `n`-set, as a bitmask over the
/// `2^n` subsets (bit `m` stands for subset mask `m`). Requires `n ≤ 6`.
pub fn naive_simplex_masks(n: u32, d: u32) -> Vec<u64> {
    let subsets = 1usize << n;
    combinations(subsets, d as usize + 1)
        .into_iter()
        .filter(|c| {
            let sets: Vec<u64> = c.iter().map(|&i| i as u64).collect();
            naive_is_simplex(&sets)
        })
        .map(|c| c.iter().fold(0u64, |acc, &i| acc | 1 << i))
        .collect()
}

/// Largest simplex-free family by trying all `2^(2^n)` families. `n ≤ 4`.
pub fn naive_f(n: u32, d: u32) -> u32 {
    assert!(n <= 4);
    let simplices = naive_simplex_masks(n, d);
    let families: u64 = 1 << (1u64 << n);
    (0..families)
        .filter(|&fam| simplices.iter().all(|&s| s & fam != s))
        .map(|fam| fam.count_ones())
        .max()
        .unwrap()
}

pub fn random_family<R: Rng>(rng: &mut R, n: u32, max_members: usize) -> SetFamily {
    let ground = GroundSet::new(n).unwrap();
    let count = rng.gen_range(0..=max_members);
    let full = ground.full().bits();
    SetFamily::new(ground, (0..count).map(|_| SubsetMask(rng.gen::<u64>() & full))).unwrap()
}

pub fn random_permutation<R: Rng>(rng: &mut R, n: u32) -> Vec<u32> {
    let mut p: Vec<u32> = (0..n).collect();
    for i in (1..p.len()).rev() {
        let j = rng.gen_range(0..=i);
        p.swap(i, j);
    }
    p
}

/// The family on `n` whose members are the subsets `m` with bit `m` set in
/// `bits`.
pub fn family_from_bits(n: u32, bits: u64) -> SetFamily {
    let ground = GroundSet::new(n).unwrap();
    SetFamily::new(
        ground,
        (0..1u64 << n).filter(|m| bits >> m & 1 == 1).map(SubsetMask),
    )
    .unwrap()
}
