//! Ground sets, subset masks, set families and the operations on them:
//! JSON I/O, relabeling by permutations, canonical forms and the link
//! decomposition of a family by the trace of its members outside a pivot.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{BitAnd, BitOr, Not, Sub};

use serde::ser::{SerializeSeq, SerializeStruct};
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

/// Largest ground set supported by membership and detection operations.
pub const MAX_GROUND: u32 = 64;
/// Largest ground set for operations that enumerate the whole power set.
pub const MAX_ENUMERABLE_GROUND: u32 = 16;
/// Largest ground set for `canonical_form` (n! relabelings).
pub const MAX_CANONICAL_GROUND: u32 = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("malformed family: {0}")]
    Syntax(String),
    #[error("element out of range: {element} is not below n = {n}")]
    ElementOutOfRange { element: u64, n: u32 },
    #[error("ground size out of range: n = {n} (supported 1..={max})")]
    GroundSizeOutOfRange { n: u64, max: u32 },
    #[error("elements of a set must be strictly increasing, got {0:?}")]
    UnsortedElements(Vec<u64>),
    #[error("mask {mask:#x} has bits outside the ground set of size {n}")]
    InvalidMask { mask: u64, n: u32 },
    #[error("not a permutation of 0..{n}: {images:?}")]
    NotAPermutation { n: u32, images: Vec<u32> },
    #[error("ground sets differ: {left} vs {right}")]
    GroundMismatch { left: u32, right: u32 },
}

/// The ground set `{0, …, n−1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundSet {
    n: u32,
}

impl GroundSet {
    pub fn new(n: u32) -> Result<Self, FamilyError> {
        if n == 0 || n > MAX_GROUND {
            return Err(FamilyError::GroundSizeOutOfRange {
                n: n as u64,
                max: MAX_GROUND,
            });
        }
        Ok(GroundSet { n })
    }

    pub fn n(self) -> u32 {
        self.n
    }

    /// The full set X.
    pub fn full(self) -> SubsetMask {
        if self.n == 64 {
            SubsetMask(u64::MAX)
        } else {
            SubsetMask((1u64 << self.n) - 1)
        }
    }

    pub fn contains(self, mask: SubsetMask) -> bool {
        mask.0 & !self.full().0 == 0
    }

    pub fn check(self, mask: SubsetMask) -> Result<SubsetMask, FamilyError> {
        if self.contains(mask) {
            Ok(mask)
        } else {
            Err(FamilyError::InvalidMask {
                mask: mask.0,
                n: self.n,
            })
        }
    }

    pub fn check_enumerable(self) -> Result<(), FamilyError> {
        if self.n > MAX_ENUMERABLE_GROUND {
            return Err(FamilyError::GroundSizeOutOfRange {
                n: self.n as u64,
                max: MAX_ENUMERABLE_GROUND,
            });
        }
        Ok(())
    }

    /// All subsets in ascending mask order. Only meaningful for n ≤ 16.
    pub fn subsets(self) -> impl Iterator<Item = SubsetMask> {
        (0..=self.full().0).map(SubsetMask)
    }
}

impl fmt::Display for GroundSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.n)
    }
}

/// A subset of the ground set as a characteristic bit vector: element `i`
/// is present iff bit `i` is set. Ordering is by integer value.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SubsetMask(pub u64);

impl SubsetMask {
    pub const EMPTY: SubsetMask = SubsetMask(0);

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn singleton(i: u32) -> Self {
        SubsetMask(1u64 << i)
    }

    pub fn from_elements<I: IntoIterator<Item = u32>>(elements: I) -> Self {
        SubsetMask(elements.into_iter().fold(0, |acc, i| acc | (1u64 << i)))
    }

    /// Elements in ascending order.
    pub fn elements(self) -> impl Iterator<Item = u32> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let i = rest.trailing_zeros();
                rest &= rest - 1;
                Some(i)
            }
        })
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: u32) -> bool {
        i < 64 && self.0 >> i & 1 == 1
    }

    pub fn is_subset_of(self, other: SubsetMask) -> bool {
        self.0 & !other.0 == 0
    }

    /// Order-preserving compression of `self ∩ pivot` onto `0..|pivot|`.
    pub fn compress(self, pivot: SubsetMask) -> SubsetMask {
        let mut out = 0u64;
        for (pos, e) in pivot.elements().enumerate() {
            if self.contains(e) {
                out |= 1 << pos;
            }
        }
        SubsetMask(out)
    }
}

impl BitAnd for SubsetMask {
    type Output = SubsetMask;
    fn bitand(self, rhs: SubsetMask) -> SubsetMask {
        SubsetMask(self.0 & rhs.0)
    }
}

impl BitOr for SubsetMask {
    type Output = SubsetMask;
    fn bitor(self, rhs: SubsetMask) -> SubsetMask {
        SubsetMask(self.0 | rhs.0)
    }
}

impl Sub for SubsetMask {
    type Output = SubsetMask;
    fn sub(self, rhs: SubsetMask) -> SubsetMask {
        SubsetMask(self.0 & !rhs.0)
    }
}

impl Not for SubsetMask {
    type Output = SubsetMask;
    fn not(self) -> SubsetMask {
        SubsetMask(!self.0)
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.elements()).finish()
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Serialize for SubsetMask {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.len() as usize))?;
        for e in self.elements() {
            seq.serialize_element(&e)?;
        }
        seq.end()
    }
}

/// A duplicate-free family of subsets of a ground set, kept in ascending
/// mask order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SetFamily {
    ground: GroundSet,
    members: Vec<SubsetMask>,
}

impl SetFamily {
    /// Builds a family, silently dropping duplicates. Fails on any mask
    /// outside the ground set.
    pub fn new<I>(ground: GroundSet, masks: I) -> Result<Self, FamilyError>
    where
        I: IntoIterator<Item = SubsetMask>,
    {
        Ok(Self::with_duplicate_count(ground, masks)?.0)
    }

    fn with_duplicate_count<I>(ground: GroundSet, masks: I) -> Result<(Self, usize), FamilyError>
    where
        I: IntoIterator<Item = SubsetMask>,
    {
        let mut members = masks
            .into_iter()
            .map(|m| ground.check(m))
            .collect::<Result<Vec<_>, _>>()?;
        members.sort_unstable();
        let before = members.len();
        members.dedup();
        let dropped = before - members.len();
        Ok((SetFamily { ground, members }, dropped))
    }

    /// Internal constructor for masks already known to be sorted, unique
    /// and valid.
    pub(crate) fn from_sorted_unchecked(ground: GroundSet, members: Vec<SubsetMask>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(members.iter().all(|&m| ground.contains(m)));
        SetFamily { ground, members }
    }

    pub fn empty(ground: GroundSet) -> Self {
        SetFamily {
            ground,
            members: Vec::new(),
        }
    }

    /// Every subset of the ground set. Requires n ≤ 16.
    pub fn power_set(ground: GroundSet) -> Result<Self, FamilyError> {
        ground.check_enumerable()?;
        Ok(SetFamily {
            ground,
            members: ground.subsets().collect(),
        })
    }

    /// All subsets of size at most `cap`. Requires n ≤ 16.
    pub fn all_up_to_size(ground: GroundSet, cap: u32) -> Result<Self, FamilyError> {
        ground.check_enumerable()?;
        Ok(SetFamily {
            ground,
            members: ground.subsets().filter(|m| m.len() <= cap).collect(),
        })
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn n(&self) -> u32 {
        self.ground.n
    }

    pub fn members(&self) -> &[SubsetMask] {
        &self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = SubsetMask> + '_ {
        self.members.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, mask: SubsetMask) -> bool {
        self.members.binary_search(&mask).is_ok()
    }

    pub fn is_subfamily_of(&self, other: &SetFamily) -> bool {
        self.ground == other.ground && self.iter().all(|m| other.contains(m))
    }

    pub fn max_member_size(&self) -> Option<u32> {
        self.iter().map(SubsetMask::len).max()
    }

    pub fn filter<P: FnMut(SubsetMask) -> bool>(&self, mut keep: P) -> SetFamily {
        SetFamily {
            ground: self.ground,
            members: self.iter().filter(|&m| keep(m)).collect(),
        }
    }

    /// Multiset of member sizes, as counts indexed by size.
    pub fn size_profile(&self) -> Vec<usize> {
        let mut profile = vec![0; self.n() as usize + 1];
        for m in self.iter() {
            profile[m.len() as usize] += 1;
        }
        profile
    }
}

impl fmt::Debug for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SetFamily(n={}, ", self.n())?;
        f.debug_list().entries(self.members.iter()).finish()?;
        write!(f, ")")
    }
}

struct MemberList<'a>(&'a [SubsetMask]);

impl Serialize for MemberList<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.0.len()))?;
        for m in self.0 {
            seq.serialize_element(m)?;
        }
        seq.end()
    }
}

impl Serialize for SetFamily {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("SetFamily", 2)?;
        st.serialize_field("n", &self.n())?;
        st.serialize_field("sets", &MemberList(&self.members))?;
        st.end()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFamily {
    n: u64,
    sets: Vec<Vec<u64>>,
}

/// Result of [`parse_family`]: the family plus the number of repeated
/// input sets that were dropped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedFamily {
    pub family: SetFamily,
    pub duplicates_dropped: usize,
}

/// Reads the JSON family format `{"n": <int>, "sets": [[...], ...]}`.
pub fn parse_family(text: &str) -> Result<ParsedFamily, FamilyError> {
    let raw: RawFamily =
        serde_json::from_str(text).map_err(|e| FamilyError::Syntax(e.to_string()))?;
    if raw.n == 0 || raw.n > MAX_GROUND as u64 {
        return Err(FamilyError::GroundSizeOutOfRange {
            n: raw.n,
            max: MAX_GROUND,
        });
    }
    let ground = GroundSet::new(raw.n as u32)?;
    let mut masks = Vec::with_capacity(raw.sets.len());
    for set in raw.sets {
        let mut mask = 0u64;
        for (i, &e) in set.iter().enumerate() {
            if e >= raw.n {
                return Err(FamilyError::ElementOutOfRange {
                    element: e,
                    n: ground.n,
                });
            }
            if i > 0 && set[i - 1] >= e {
                return Err(FamilyError::UnsortedElements(set));
            }
            mask |= 1 << e;
        }
        masks.push(SubsetMask(mask));
    }
    let (family, duplicates_dropped) = SetFamily::with_duplicate_count(ground, masks)?;
    Ok(ParsedFamily {
        family,
        duplicates_dropped,
    })
}

/// Writes the canonical JSON form: members in ascending mask order,
/// elements ascending, no whitespace, one trailing newline.
pub fn serialize_family(fam: &SetFamily) -> String {
    let mut out = serde_json::to_string(fam).expect("family serialization is infallible");
    out.push('\n');
    out
}

/// A bijection on `0..n`, stored as the image of each element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn new(images: Vec<u32>) -> Result<Self, FamilyError> {
        let n = images.len() as u32;
        let mut seen = 0u128;
        let valid = n <= MAX_GROUND
            && images.iter().all(|&x| {
                let fresh = x < n && seen >> x & 1 == 0;
                seen |= 1 << x.min(127);
                fresh
            });
        if !valid {
            return Err(FamilyError::NotAPermutation { n, images });
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: u32) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    /// The transposition exchanging `a` and `b`.
    pub fn swap(n: u32, a: u32, b: u32) -> Result<Self, FamilyError> {
        let mut images: Vec<u32> = (0..n).collect();
        if a >= n || b >= n {
            images.push(a.max(b));
            return Err(FamilyError::NotAPermutation { n, images });
        }
        images.swap(a as usize, b as usize);
        Ok(Permutation { images })
    }

    pub fn len(&self) -> u32 {
        self.images.len() as u32
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    pub fn apply(&self, mask: SubsetMask) -> SubsetMask {
        SubsetMask::from_elements(mask.elements().map(|e| self.images[e as usize]))
    }
}

/// Relabels every member of `fam` elementwise by `perm`.
pub fn apply_permutation(fam: &SetFamily, perm: &Permutation) -> Result<SetFamily, FamilyError> {
    if perm.len() != fam.n() {
        return Err(FamilyError::GroundMismatch {
            left: fam.n(),
            right: perm.len(),
        });
    }
    SetFamily::new(fam.ground(), fam.iter().map(|m| perm.apply(m)))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("canonical form needs n <= {max}, got n = {n}")]
pub struct CanonicalTooLarge {
    pub n: u32,
    pub max: u32,
}

/// Characteristic vector of a family over a ground set of at most 8
/// elements. Bit `m` is set iff mask `m` is a member.
type FamilyBits = [u64; 4];

fn family_bits(members: &[u8]) -> FamilyBits {
    let mut bits = [0u64; 4];
    for &m in members {
        bits[(m >> 6) as usize] |= 1 << (m & 63);
    }
    bits
}

/// For two families of equal size, the sorted member sequence of `a` is
/// lexicographically smaller iff the least mask in the symmetric difference
/// belongs to `a`.
fn sorted_sequence_less(a: &FamilyBits, b: &FamilyBits) -> bool {
    for w in 0..4 {
        let diff = a[w] ^ b[w];
        if diff != 0 {
            return a[w] & (diff & diff.wrapping_neg()) != 0;
        }
    }
    false
}

#[inline]
fn swap_bits(m: u8, u: u32, v: u32) -> u8 {
    let bu = (m >> u) & 1;
    let bv = (m >> v) & 1;
    if bu == bv {
        m
    } else {
        m ^ ((1 << u) | (1 << v))
    }
}

/// The lexicographically least image of `fam` over all `n!` relabelings,
/// comparing ascending mask sequences.
pub fn canonical_form(fam: &SetFamily) -> Result<SetFamily, CanonicalTooLarge> {
    let n = fam.n();
    if n > MAX_CANONICAL_GROUND {
        return Err(CanonicalTooLarge {
            n,
            max: MAX_CANONICAL_GROUND,
        });
    }
    let mut images: Vec<u8> = fam.iter().map(|m| m.0 as u8).collect();
    let mut best = family_bits(&images);

    // Heap's algorithm; each step swaps two entries of `perm`, which acts on
    // the current images as the transposition of the two swapped values.
    let n = n as usize;
    let mut perm: Vec<u32> = (0..n as u32).collect();
    let mut counters = vec![0usize; n];
    let mut i = 1;
    while i < n {
        if counters[i] < i {
            let j = if i % 2 == 0 { 0 } else { counters[i] };
            let (u, v) = (perm[j], perm[i]);
            perm.swap(j, i);
            for m in images.iter_mut() {
                *m = swap_bits(*m, u, v);
            }
            let candidate = family_bits(&images);
            if sorted_sequence_less(&candidate, &best) {
                best = candidate;
            }
            counters[i] += 1;
            i = 1;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }

    let mut members = Vec::with_capacity(fam.len());
    for (w, &word) in best.iter().enumerate() {
        let mut rest = word;
        while rest != 0 {
            let b = rest.trailing_zeros() as u64;
            members.push(SubsetMask(w as u64 * 64 + b));
            rest &= rest - 1;
        }
    }
    Ok(SetFamily::from_sorted_unchecked(fam.ground(), members))
}

/// The partition of a family by trace outside a pivot set `Y`: for each
/// `W ⊆ Z = X∖Y` that occurs, `parts[W] = {A ∩ Y : A ∈ F, A ∩ Z = W}`.
///
/// Parts keep the original ground set; their members are subsets of `Y`.
/// Use [`LinkDecomposition::part_on_pivot`] for a part relabeled onto
/// `0..|Y|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkDecomposition {
    pub pivot: SubsetMask,
    pub ground: GroundSet,
    pub parts: BTreeMap<SubsetMask, SetFamily>,
}

impl LinkDecomposition {
    pub fn outside(&self) -> SubsetMask {
        self.ground.full() - self.pivot
    }

    pub fn total_size(&self) -> usize {
        self.parts.values().map(SetFamily::len).sum()
    }

    pub fn part(&self, trace: SubsetMask) -> Option<&SetFamily> {
        self.parts.get(&trace)
    }

    /// The part at `trace` relabeled order-preservingly onto the ground set
    /// `0..|Y|`. `None` if the part is absent or the pivot is empty.
    pub fn part_on_pivot(&self, trace: SubsetMask) -> Option<SetFamily> {
        let part = self.parts.get(&trace)?;
        let ground = GroundSet::new(self.pivot.len()).ok()?;
        let members = part.iter().map(|m| m.compress(self.pivot));
        Some(SetFamily::new(ground, members).expect("compressed masks fit the pivot"))
    }
}

pub fn decompose_by_outside(
    fam: &SetFamily,
    pivot: SubsetMask,
) -> Result<LinkDecomposition, FamilyError> {
    let ground = fam.ground();
    ground.check(pivot)?;
    let outside = ground.full() - pivot;
    let mut buckets: BTreeMap<SubsetMask, Vec<SubsetMask>> = BTreeMap::new();
    for a in fam.iter() {
        buckets.entry(a & outside).or_default().push(a & pivot);
    }
    let parts = buckets
        .into_iter()
        .map(|(w, masks)| {
            let part = SetFamily::new(ground, masks).expect("traces lie inside the ground set");
            (w, part)
        })
        .collect();
    Ok(LinkDecomposition {
        pivot,
        ground,
        parts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(n: u32, sets: &[&[u32]]) -> SetFamily {
        SetFamily::new(
            GroundSet::new(n).unwrap(),
            sets.iter().map(|s| SubsetMask::from_elements(s.iter().copied())),
        )
        .unwrap()
    }

    #[test]
    fn parse_reads_back_members() {
        let parsed = parse_family(r#"{"n":3,"sets":[[0],[0,1],[]]}"#).unwrap();
        assert_eq!(parsed.family.len(), 3);
        assert_eq!(parsed.family.n(), 3);
        assert_eq!(parsed.duplicates_dropped, 0);
        assert_eq!(parsed.family, fam(3, &[&[], &[0], &[0, 1]]));
    }

    #[test]
    fn parse_drops_duplicates() {
        let parsed = parse_family(r#"{"n":2,"sets":[[0],[0]]}"#).unwrap();
        assert_eq!(parsed.family.len(), 1);
        assert_eq!(parsed.duplicates_dropped, 1);
    }

    #[test]
    fn parse_errors_are_distinct() {
        assert_eq!(
            parse_family(r#"{"n":2,"sets":[[5]]}"#).unwrap_err(),
            FamilyError::ElementOutOfRange { element: 5, n: 2 }
        );
        assert!(matches!(
            parse_family(r#"{"n":0,"sets":[]}"#).unwrap_err(),
            FamilyError::GroundSizeOutOfRange { n: 0, .. }
        ));
        assert!(matches!(
            parse_family(r#"{"n":65,"sets":[]}"#).unwrap_err(),
            FamilyError::GroundSizeOutOfRange { n: 65, .. }
        ));
        assert!(matches!(
            parse_family(r#"{"n":2,"sets":[[0]"#).unwrap_err(),
            FamilyError::Syntax(_)
        ));
        assert!(matches!(
            parse_family(r#"{"n":2,"sets":[],"extra":1}"#).unwrap_err(),
            FamilyError::Syntax(_)
        ));
        assert!(matches!(
            parse_family(r#"{"n":3,"sets":[[1,0]]}"#).unwrap_err(),
            FamilyError::UnsortedElements(_)
        ));
    }

    #[test]
    fn serialize_is_canonical() {
        assert_eq!(serialize_family(&fam(2, &[&[0], &[]])), "{\"n\":2,\"sets\":[[],[0]]}\n");
        let parsed = parse_family(r#"{"n":3,"sets":[[0,2],[1],[0]]}"#).unwrap();
        assert_eq!(
            serialize_family(&parsed.family),
            "{\"n\":3,\"sets\":[[0],[1],[0,2]]}\n"
        );
    }

    #[test]
    fn n_64_masks() {
        let g = GroundSet::new(64).unwrap();
        assert_eq!(g.full().len(), 64);
        let f = SetFamily::new(g, [g.full(), SubsetMask::EMPTY]).unwrap();
        let back = parse_family(&serialize_family(&f)).unwrap().family;
        assert_eq!(back, f);
    }

    #[test]
    fn permutation_examples() {
        let f = fam(2, &[&[0], &[0, 1]]);
        let swap = Permutation::swap(2, 0, 1).unwrap();
        assert_eq!(apply_permutation(&f, &swap).unwrap(), fam(2, &[&[1], &[0, 1]]));
        assert_eq!(apply_permutation(&f, &Permutation::identity(2)).unwrap(), f);

        let p = Permutation::new(vec![2, 0, 3, 1]).unwrap();
        let g = fam(4, &[&[0, 1], &[2], &[1, 2, 3]]);
        let there = apply_permutation(&g, &p).unwrap();
        assert_eq!(apply_permutation(&there, &p.inverse()).unwrap(), g);
    }

    #[test]
    fn bad_permutations_rejected() {
        assert!(Permutation::new(vec![0, 0]).is_err());
        assert!(Permutation::new(vec![0, 2]).is_err());
        assert!(Permutation::swap(2, 0, 2).is_err());
        let f = fam(3, &[&[0]]);
        assert!(apply_permutation(&f, &Permutation::identity(2)).is_err());
    }

    #[test]
    fn canonical_swaps_to_least() {
        let f = fam(2, &[&[1], &[0, 1]]);
        assert_eq!(canonical_form(&f).unwrap(), fam(2, &[&[0], &[0, 1]]));
    }

    #[test]
    fn canonical_is_idempotent_and_capped() {
        let f = fam(5, &[&[1, 3], &[4], &[0, 2, 4], &[]]);
        let c = canonical_form(&f).unwrap();
        assert_eq!(canonical_form(&c).unwrap(), c);
        assert!(canonical_form(&SetFamily::empty(GroundSet::new(9).unwrap())).is_err());
    }

    #[test]
    fn canonical_matches_brute_force_minimum() {
        // Brute force over an explicit permutation list, independent of the
        // incremental Heap's walk.
        fn all_perms(n: u32) -> Vec<Vec<u32>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in all_perms(n - 1) {
                for pos in 0..=p.len() {
                    let mut q = p.clone();
                    q.insert(pos, n - 1);
                    out.push(q);
                }
            }
            out
        }
        let f = fam(4, &[&[0, 3], &[1], &[1, 2, 3], &[2, 3]]);
        let least = all_perms(4)
            .into_iter()
            .map(|p| {
                let img = apply_permutation(&f, &Permutation::new(p).unwrap()).unwrap();
                img.members().to_vec()
            })
            .min()
            .unwrap();
        assert_eq!(canonical_form(&f).unwrap().members(), &least[..]);
    }

    #[test]
    fn decompose_power_set() {
        let g = GroundSet::new(3).unwrap();
        let p = SetFamily::power_set(g).unwrap();
        let pivot = SubsetMask::from_elements([0, 1]);
        let dec = decompose_by_outside(&p, pivot).unwrap();
        let power01 = fam(3, &[&[], &[0], &[1], &[0, 1]]);
        assert_eq!(dec.parts.len(), 2);
        assert_eq!(dec.part(SubsetMask::EMPTY), Some(&power01));
        assert_eq!(dec.part(SubsetMask::singleton(2)), Some(&power01));
        assert_eq!(dec.total_size(), 8);
        assert_eq!(dec.outside(), SubsetMask::singleton(2));
    }

    #[test]
    fn decompose_by_full_set_is_single_part() {
        let f = fam(3, &[&[0], &[1, 2], &[]]);
        let dec = decompose_by_outside(&f, f.ground().full()).unwrap();
        assert_eq!(dec.parts.len(), 1);
        assert_eq!(dec.part(SubsetMask::EMPTY), Some(&f));
    }

    #[test]
    fn decompose_rejects_bad_pivot() {
        let f = fam(2, &[&[0]]);
        assert!(decompose_by_outside(&f, SubsetMask::singleton(3)).is_err());
    }

    #[test]
    fn part_on_pivot_compresses() {
        let f = fam(4, &[&[1, 3], &[0, 3], &[3]]);
        let pivot = SubsetMask::from_elements([1, 3]);
        let dec = decompose_by_outside(&f, pivot).unwrap();
        let p = dec.part_on_pivot(SubsetMask::EMPTY).unwrap();
        assert_eq!(p, fam(2, &[&[0, 1], &[1]]));
        let q = dec.part_on_pivot(SubsetMask::singleton(0)).unwrap();
        assert_eq!(q, fam(2, &[&[1]]));
    }
}
