mod common;

use simplexfree::formulas::{lemma_bound, proven_oracle};
use simplexfree::{
    build_star_family, enumerate_optimal, find_simplex, max_simplex_free, star_value, GroundSet, SearchConfig,
    SearchProblem, SetFamily,
};

/// Brute force over every family of subsets of size at most `cap`,
/// optionally required to contain a member of size exactly `cap`.
/// Returns the optimum and the number of families attaining it.
fn naive_capped(n: u32, d: u32, cap: u32, require_max: bool) -> Option<(u32, u64)> {
    let simplices = common::naive_simplex_masks(n, d);
    let allowed: u64 = (0..1u64 << n).filter(|m| m.count_ones() <= cap).fold(0, |a, m| a | 1 << m);
    let top: u64 = (0..1u64 << n).filter(|m| m.count_ones() == cap).fold(0, |a, m| a | 1 << m);
    let mut best: Option<(u32, u64)> = None;
    let mut sub = allowed;
    loop {
        let ok = (!require_max || sub & top != 0) && simplices.iter().all(|&s| s & sub != s);
        if ok {
            let size = sub.count_ones();
            best = match best {
                Some((b, c)) if b == size => Some((b, c + 1)),
                Some((b, _)) if b > size => best,
                _ => Some((size, 1)),
            };
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & allowed;
    }
    best
}

#[test]
fn searches_agree_with_brute_force() {
    let cfg = SearchConfig::default();
    for n in 1..=4 {
        for d in 1..=3 {
            for k in 0..n {
                let cap = n - k;
                for require_max in [false, true] {
                    let prob = SearchProblem { require_max, ..SearchProblem::f_capped(n, d, k) };
                    let (opt, count) = naive_capped(n, d, cap, require_max).unwrap();
                    let en = enumerate_optimal(&prob, &cfg).unwrap();
                    assert_eq!(en.outcome.optimum, opt as u64, "n={n} d={d} k={k} g={require_max}");
                    assert_eq!(en.families.len() as u64, count, "n={n} d={d} k={k} g={require_max}");
                    for fam in &en.families {
                        assert!(find_simplex(fam, d).is_none());
                        assert!(fam.max_member_size().unwrap_or(0) <= cap);
                    }
                }
            }
        }
    }
}

#[test]
fn star_family_size_matches_closed_form() {
    for n in 1..=12 {
        for d in 1..=n {
            for k in 0..n {
                let fam = build_star_family(n, n / 2, d, k).unwrap();
                assert_eq!(fam.len() as u128, star_value(n, d, k).unwrap().value, "n={n} d={d} k={k}");
            }
        }
    }
}

#[test]
fn star_family_is_simplex_free() {
    for n in 1..=6 {
        for d in 1..=4 {
            for k in 0..=2.min(n - 1) {
                for x in 0..n {
                    let fam = build_star_family(n, x, d, k).unwrap();
                    assert!(find_simplex(&fam, d).is_none(), "n={n} x={x} d={d} k={k}");
                }
            }
        }
    }
}

#[test]
fn intersecting_families_gain_nothing_from_a_maximal_member() {
    let cfg = SearchConfig::default();
    for n in 2..=6 {
        for k in 1..n {
            let f = max_simplex_free(&SearchProblem::f_capped(n, 1, k), &cfg).unwrap().optimum;
            let g = max_simplex_free(&SearchProblem::g(n, 1, k), &cfg).unwrap().optimum;
            assert_eq!(f, g, "n={n} k={k}");
        }
    }
}

#[test]
fn star_is_a_lower_bound_and_link_bound_an_upper_bound() {
    let cfg = SearchConfig::default();
    for n in 2..=6 {
        for d in 2..=3 {
            for k in 1..n {
                if d - 1 > n - k {
                    continue;
                }
                let f = max_simplex_free(&SearchProblem::f_capped(n, d, k), &cfg).unwrap().optimum;
                assert!(star_value(n, d, k).unwrap().value <= f as u128, "n={n} d={d} k={k}");
                let g = max_simplex_free(&SearchProblem::g(n, d, k), &cfg).unwrap().optimum;
                assert!(g <= f);
                if let Ok(lb) = lemma_bound(n, d, k, &proven_oracle) {
                    assert!(g as u128 <= lb.bound.value, "n={n} d={d} k={k}: {g} > {}", lb.bound);
                }
            }
        }
    }
}

#[test]
fn decision_mode_brackets_the_optimum() {
    let cfg = SearchConfig::default();
    let opt = max_simplex_free(&SearchProblem::f(5, 2), &cfg).unwrap().optimum;
    let reach = max_simplex_free(&SearchProblem::f(5, 2).with_target(opt), &cfg).unwrap();
    assert_eq!(reach.verdict, simplexfree::search::Verdict::TargetReached);
    assert!(reach.witness.len() as u64 >= opt);
    let miss = max_simplex_free(&SearchProblem::f(5, 2).with_target(opt + 1), &cfg).unwrap();
    assert_eq!(miss.verdict, simplexfree::search::Verdict::TargetUnreachable);
}

#[test]
fn ground_sizes_outside_one_to_sixty_four_are_rejected() {
    assert!(GroundSet::new(0).is_err());
    assert!(GroundSet::new(65).is_err());
    let power = SetFamily::power_set(GroundSet::new(1).unwrap()).unwrap();
    assert_eq!(power.len(), 2);
    assert!(find_simplex(&power, 1).is_none());
}
