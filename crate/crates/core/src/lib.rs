//! Exact tools for d-simplex-free set families: representation and
//! canonical forms, simplex detection, the closed-form values and bounds,
//! and an exact branch-and-bound search that measures extremal sizes and
//! enumerates every optimal family at small ground sizes.

pub mod family;
pub mod formulas;
mod hitting;
pub mod search;
pub mod simplex;

pub use family::{
    apply_permutation, canonical_form, decompose_by_outside, parse_family, serialize_family,
    FamilyError, GroundSet, LinkDecomposition, ParsedFamily, Permutation, SetFamily, SubsetMask,
};
pub use formulas::{
    build_star_family, d4_gap, f_d1, lemma_bound, lemma_bound_d2, milner_bounds, star_value,
    BoundValue, FormulaError, Status,
};
pub use search::{
    enumerate_optimal, max_simplex_free, verify_conjecture, SearchConfig, SearchError,
    SearchOutcome, SearchProblem,
};
pub use simplex::{enumerate_simplices, find_simplex, is_simplex, SimplexError, SimplexWitness};
