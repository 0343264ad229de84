//! Closed forms, recursive bounds and the star construction for
//! d-simplex-free families, each value tagged with how it is known.
//!
//! Notation used in names: `f(n, d, k)` is the largest d-simplex-free family
//! on an n-set whose members have size at most `n − k`; `f(n, d)` is
//! `f(n, d, 0)`; `g(n, d, k)` additionally requires a member of size exactly
//! `n − k`.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::family::{FamilyError, GroundSet, SetFamily, SubsetMask};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("integer overflow evaluating {0}")]
    Overflow(&'static str),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("oracle has no value for f({n}, {d}, {k})")]
    MissingOracleValue { n: u32, d: u32, k: u32 },
    #[error(transparent)]
    Family(#[from] FamilyError),
}

/// How a value is known.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Proven,
    ExactBySearch,
    UpperBound,
    LowerBound,
    Conjectured,
}

impl Status {
    fn rank(self) -> u8 {
        match self {
            Status::Proven => 0,
            Status::ExactBySearch => 1,
            Status::UpperBound | Status::LowerBound => 2,
            Status::Conjectured => 3,
        }
    }

    /// The weaker of two statuses. Mixing an upper and a lower bound gives
    /// a number that bounds nothing, reported as conjectured.
    pub fn weakest(self, other: Status) -> Status {
        if self == other {
            return self;
        }
        if self.rank() == 2 && other.rank() == 2 {
            return Status::Conjectured;
        }
        if self.rank() >= other.rank() {
            self
        } else {
            other
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Proven => "proven",
            Status::ExactBySearch => "exact-by-search",
            Status::UpperBound => "upper-bound",
            Status::LowerBound => "lower-bound",
            Status::Conjectured => "conjectured",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundValue {
    pub value: u128,
    pub status: Status,
    pub provenance: String,
}

impl BoundValue {
    pub fn new(value: u128, status: Status, provenance: impl Into<String>) -> Self {
        BoundValue {
            value,
            status,
            provenance: provenance.into(),
        }
    }

    pub fn proven(value: u128, provenance: impl Into<String>) -> Self {
        Self::new(value, Status::Proven, provenance)
    }

    pub fn checked_add(&self, other: &BoundValue, provenance: &str) -> Result<BoundValue, FormulaError> {
        let value = self
            .value
            .checked_add(other.value)
            .ok_or(FormulaError::Overflow("bound sum"))?;
        Ok(BoundValue::new(value, self.status.weakest(other.status), provenance))
    }

    pub fn checked_scale(&self, factor: u128) -> Result<BoundValue, FormulaError> {
        let value = self
            .value
            .checked_mul(factor)
            .ok_or(FormulaError::Overflow("bound scale"))?;
        Ok(BoundValue::new(value, self.status, self.provenance.clone()))
    }
}

impl fmt::Display for BoundValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.status {
            Status::UpperBound => "<= ",
            Status::LowerBound => ">= ",
            _ => "",
        };
        write!(f, "{prefix}{} ({}, {})", self.value, self.status, self.provenance)
    }
}

pub mod provenance {
    pub const DISJOINT_PAIRS: &str = "disjoint-pair bound";
    pub const D1_CAPPED: &str = "d=1 size-capped closed form";
    pub const MILNER: &str = "Milner triangle-free bound";
    pub const MILNER_CAPPED: &str = "triangle-free size-capped bound";
    pub const THREE_SIMPLEX: &str = "3-simplex-free theorem";
    pub const STAR_CONJECTURE: &str = "star conjecture";
    pub const STAR_CONJECTURE_LARGE_N: &str = "star conjecture; Keevash-Mubayi for large n";
    pub const LINK_BOUND: &str = "link decomposition bound";
    pub const EMPTY_CAP: &str = "empty size cap";
}

/// `C(n, r)`, zero whenever `r < 0`, `r > n` or `n < 0`.
pub fn binomial(n: i64, r: i64) -> Result<u128, FormulaError> {
    if n < 0 || r < 0 || r > n {
        return Ok(0);
    }
    let r = r.min(n - r) as u128;
    let n = n as u128;
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc
            .checked_mul(n - i)
            .ok_or(FormulaError::Overflow("binomial"))?
            / (i + 1);
    }
    Ok(acc)
}

pub fn pow2(e: u32) -> Result<u128, FormulaError> {
    1u128.checked_shl(e).ok_or(FormulaError::Overflow("power of two"))
}

/// `Σ_{i=lo}^{hi} C(n, i)`; empty when `hi < lo`.
fn binomial_sum(n: i64, lo: i64, hi: i64) -> Result<u128, FormulaError> {
    let mut acc: u128 = 0;
    for i in lo..=hi {
        acc = acc
            .checked_add(binomial(n, i)?)
            .ok_or(FormulaError::Overflow("binomial sum"))?;
    }
    Ok(acc)
}

/// Size of the star family: `2^{n−1} + Σ_{i<d} C(n−1, i) − Σ_{i<k} C(n−1, i)`.
/// With `k = 0` this is the extremal value of `f(n, d)`.
pub fn star_value(n: u32, d: u32, k: u32) -> Result<BoundValue, FormulaError> {
    if n == 0 || d == 0 || k > n {
        return Err(FormulaError::OutOfRange(format!(
            "star value needs n >= 1, d >= 1, 0 <= k <= n; got n={n}, d={d}, k={k}"
        )));
    }
    let m = n as i64 - 1;
    let plus = pow2(n - 1)?
        .checked_add(binomial_sum(m, 0, d as i64 - 1)?)
        .ok_or(FormulaError::Overflow("star value"))?;
    // Σ_{i<k} C(n−1, i) ≤ 2^{n−1}, so this never underflows
    let value = plus - binomial_sum(m, 0, k as i64 - 1)?;
    let (status, tag) = match (d, k) {
        (1, 0) => (Status::Proven, provenance::DISJOINT_PAIRS),
        (1, _) => (Status::Proven, provenance::D1_CAPPED),
        (2, 0 | 1) => (Status::Proven, provenance::MILNER),
        (3, 0 | 1) => (Status::Proven, provenance::THREE_SIMPLEX),
        (_, 0) if d >= 4 => (Status::Conjectured, provenance::STAR_CONJECTURE_LARGE_N),
        _ => (Status::Conjectured, provenance::STAR_CONJECTURE),
    };
    Ok(BoundValue::new(value, status, tag))
}

/// `f(n, 1, k) = g(n, 1, k) = 2^{n−1} − Σ_{j=1}^{k−1} C(n−1, j)` for `n ≥ k ≥ 1`.
pub fn f_d1(n: u32, k: u32) -> Result<BoundValue, FormulaError> {
    if k == 0 || k > n {
        return Err(FormulaError::OutOfRange(format!(
            "f(n,1,k) needs n >= k >= 1; got n={n}, k={k}"
        )));
    }
    let value = pow2(n - 1)? - binomial_sum(n as i64 - 1, 1, k as i64 - 1)?;
    Ok(BoundValue::proven(value, provenance::D1_CAPPED))
}

/// One of the three triangle-free size-capped values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MilnerEntry {
    pub k: u32,
    pub bound: BoundValue,
    /// `false` when `k > n`, where the size cap is vacuous.
    pub in_range: bool,
}

/// `f(n,2,1) = 2^{n−1} + (n−1)`, `f(n,2,2) ≤ 2^{n−1} + 1`, `f(n,2,3) ≤ 2^{n−1}`.
pub fn milner_bounds(n: u32) -> Result<[MilnerEntry; 3], FormulaError> {
    if n == 0 {
        return Err(FormulaError::OutOfRange("milner bounds need n >= 1".into()));
    }
    let half = pow2(n - 1)?;
    let entry = |k: u32, value: u128, status| MilnerEntry {
        k,
        bound: BoundValue::new(value, status, provenance::MILNER_CAPPED),
        in_range: k <= n,
    };
    Ok([
        entry(1, half + (n as u128 - 1), Status::Proven),
        entry(2, half + 1, Status::UpperBound),
        entry(3, half, Status::UpperBound),
    ])
}

/// Source of `f(n, d, k)` values for [`lemma_bound`].
pub trait FOracle {
    fn f(&self, n: u32, d: u32, k: u32) -> Option<BoundValue>;
}

impl<F: Fn(u32, u32, u32) -> Option<BoundValue>> FOracle for F {
    fn f(&self, n: u32, d: u32, k: u32) -> Option<BoundValue> {
        self(n, d, k)
    }
}

/// Oracle answering with the star value everywhere it is defined.
pub fn star_oracle(n: u32, d: u32, k: u32) -> Option<BoundValue> {
    star_value(n, d, k).ok()
}

/// Oracle answering only with proven values and upper bounds: the d = 1
/// closed forms, the triangle-free values and bounds, and the d = 3 values
/// at `k ≤ 1`.
pub fn proven_oracle(n: u32, d: u32, k: u32) -> Option<BoundValue> {
    if n == 0 || k > n {
        return None;
    }
    match (d, k) {
        (1, 0) | (2, 0 | 1) | (3, 0 | 1) => star_value(n, d, k).ok(),
        (1, _) => f_d1(n, k).ok(),
        (2, _) => {
            // f(n,2,k) is non-increasing in k, so the k = 3 bound covers k > 3
            let idx = k.min(3) as usize - 1;
            milner_bounds(n).ok().map(|b| b[idx].bound.clone())
        }
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaTerm {
    pub coefficient: u128,
    pub n: u32,
    pub d: u32,
    pub k: u32,
    pub value: BoundValue,
}

/// The right-hand side of the link decomposition bound together with the
/// oracle values it was composed from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaBound {
    pub bound: BoundValue,
    pub terms: Vec<LemmaTerm>,
}

/// `g(n,d,k) ≤ f(n−k, d) + Σ_{i=1}^{k} C(k, i) · f(n−k, d−1, i)`.
///
/// Values at ground size 0 (`f(0, d) = 1`) and with an empty size cap
/// (`f(m, d−1, i) = 0` for `i > m`) are supplied here; everything else comes
/// from `oracle`.
pub fn lemma_bound(n: u32, d: u32, k: u32, oracle: &dyn FOracle) -> Result<LemmaBound, FormulaError> {
    if k == 0 || k > n || d < 2 {
        return Err(FormulaError::OutOfRange(format!(
            "link bound needs n >= k >= 1 and d >= 2; got n={n}, d={d}, k={k}"
        )));
    }
    let m = n - k;
    let lookup = |d: u32, i: u32| -> Result<BoundValue, FormulaError> {
        if i > m {
            return Ok(BoundValue::proven(0, provenance::EMPTY_CAP));
        }
        if m == 0 {
            // only ∅ is available
            return Ok(BoundValue::proven(1, provenance::EMPTY_CAP));
        }
        oracle
            .f(m, d, i)
            .ok_or(FormulaError::MissingOracleValue { n: m, d, k: i })
    };

    let mut terms = Vec::with_capacity(k as usize + 1);
    terms.push(LemmaTerm {
        coefficient: 1,
        n: m,
        d,
        k: 0,
        value: lookup(d, 0)?,
    });
    for i in 1..=k {
        terms.push(LemmaTerm {
            coefficient: binomial(k as i64, i as i64)?,
            n: m,
            d: d - 1,
            k: i,
            value: lookup(d - 1, i)?,
        });
    }
    let mut total = BoundValue::new(0, Status::UpperBound, provenance::LINK_BOUND);
    for t in &terms {
        total = total.checked_add(&t.value.checked_scale(t.coefficient)?, provenance::LINK_BOUND)?;
    }
    Ok(LemmaBound { bound: total, terms })
}

/// Closed form of the triangle-free chain bound on `g(n, 2, k)`:
/// `2^{n−1} + C(n−k−1, 0) + C(n−k−1, 1)·(1 − C(k, 2))`. Can be negative.
pub fn lemma_bound_d2(n: u32, k: u32) -> Result<i128, FormulaError> {
    if n == 0 || k == 0 || k > n {
        return Err(FormulaError::OutOfRange(format!(
            "chain bound needs n >= k >= 1; got n={n}, k={k}"
        )));
    }
    let rest = n as i64 - k as i64 - 1;
    let as_i = |v: u128| i128::try_from(v).map_err(|_| FormulaError::Overflow("chain bound"));
    let half = as_i(pow2(n - 1)?)?;
    let c0 = as_i(binomial(rest, 0)?)?;
    let c1 = as_i(binomial(rest, 1)?)?;
    let pairs = as_i(binomial(k as i64, 2)?)?;
    half.checked_add(c0)
        .and_then(|v| v.checked_add(c1.checked_mul(1 - pairs)?))
        .ok_or(FormulaError::Overflow("chain bound"))
}

/// The two sides of the d = 4 slackness comparison:
/// `(2^{n−1} + C(n−1,2) + C(n−1,3) + C(n−3,2), 2^{n−1} + C(n−1,1) + C(n−1,2) + C(n−1,3))`.
/// The first exceeds the second exactly when `n ≥ 8`.
pub fn d4_gap(n: u32) -> Result<(u128, u128), FormulaError> {
    if n < 4 {
        return Err(FormulaError::OutOfRange(format!("d4 gap needs n >= 4; got n={n}")));
    }
    let n = n as i64;
    let half = pow2(n as u32 - 1)?;
    let sum = |terms: [(i64, i64); 3]| -> Result<u128, FormulaError> {
        terms.iter().try_fold(half, |acc, &(a, b)| {
            acc.checked_add(binomial(a, b)?)
                .ok_or(FormulaError::Overflow("d4 gap"))
        })
    };
    let link = sum([(n - 1, 2), (n - 1, 3), (n - 3, 2)])?;
    let star = sum([(n - 1, 1), (n - 1, 2), (n - 1, 3)])?;
    Ok((link, star))
}

/// Sets containing `x` of size at most `n − k`, plus every subset of
/// `X ∖ {x}` of size at most `d − 1`.
pub fn build_star_family(n: u32, x: u32, d: u32, k: u32) -> Result<SetFamily, FormulaError> {
    let ground = GroundSet::new(n)?;
    ground.check_enumerable()?;
    if x >= n || d == 0 || k >= n {
        return Err(FormulaError::OutOfRange(format!(
            "star family needs 0 <= x < n, d >= 1, 0 <= k <= n-1; got n={n}, x={x}, d={d}, k={k}"
        )));
    }
    let centre = SubsetMask::singleton(x);
    let cap = n - k;
    Ok(SetFamily::power_set(ground)?.filter(|a| {
        if centre.is_subset_of(a) {
            a.len() <= cap
        } else {
            a.len() < d
        }
    }))
}
