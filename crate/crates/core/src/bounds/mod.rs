//! Exact evaluation of the component-count and sign-condition bound
//! formulas over arbitrary-precision integers.
//!
//! A [`Profile`] is the combinatorial shadow of a polynomial system: the
//! ambient dimension `k`, the degree sequence `d_1..d_ell`, and the
//! dimension sequence `k_0..k_ell` of the intermediate varieties. Every
//! bound here is reported as the explicit structural sum of its defining
//! formula, plus a separate asymptotic value `c^k * sum` with a
//! user-configurable rational base `c` (default 1): asserting against an
//! unspecified multiplicative constant is untestable, so tests compare the
//! structural sums only.
//!
//! Hypothesis violations (the degree ladder, the max-degree gap in the
//! sign-condition bound) never abort a computation; the value is computed
//! anyway and the report carries a flag.

pub mod combin;

use combin::{binomial, multinomial};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundsError {
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error("dimension sequence must be non-increasing")]
    DimsNotMonotone,
    #[error("tuple is not admissible: {0}")]
    Inadmissible(String),
    #[error("degree ladder hypothesis violated; the ratio bound only holds under it")]
    LadderViolated,
    #[error("degrees must be sorted in non-decreasing order")]
    UnsortedDegrees,
}

/// Degree/dimension ladder of a polynomial system.
///
/// `dims` lists `k_0..k_ell` (so `dims.len() == degs.len() + 1`) with
/// `dims[0] == k` and non-increasing entries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Profile {
    pub k: usize,
    pub degs: Vec<u64>,
    pub dims: Vec<usize>,
}

impl Profile {
    pub fn new(k: usize, degs: Vec<u64>, dims: Vec<usize>) -> Result<Self, BoundsError> {
        let p = Profile { k, degs, dims };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), BoundsError> {
        if self.dims.len() != self.degs.len() + 1 {
            return Err(BoundsError::InvalidProfile(format!(
                "dims has {} entries, expected degs + 1 = {}",
                self.dims.len(),
                self.degs.len() + 1
            )));
        }
        if self.dims.first() != Some(&self.k) {
            return Err(BoundsError::InvalidProfile("dims[0] must equal k".into()));
        }
        if self.dims.windows(2).any(|w| w[0] < w[1]) {
            return Err(BoundsError::DimsNotMonotone);
        }
        if self.dims.iter().any(|&d| d > self.k) {
            return Err(BoundsError::InvalidProfile("dims entries must be <= k".into()));
        }
        if self.degs.contains(&0) {
            return Err(BoundsError::InvalidProfile("degrees must be >= 1".into()));
        }
        Ok(())
    }

    pub fn ell(&self) -> usize {
        self.degs.len()
    }

    /// Intermediate dimensions `k_1..k_ell`.
    pub fn inner_dims(&self) -> &[usize] {
        &self.dims[1..]
    }

    /// Degree-ladder hypothesis: `2 <= d_1 <= d_2` and thereafter each
    /// degree grows by at least a factor of `k + 1`.
    pub fn ladder_ok(&self) -> bool {
        let l = self.ell();
        if l == 0 {
            return true;
        }
        if self.degs[0] < 2 {
            return false;
        }
        if l >= 2 && self.degs[0] > self.degs[1] {
            return false;
        }
        for i in 2..l {
            let lhs = (self.k as u128 + 1) * self.degs[i - 1] as u128;
            if lhs > self.degs[i] as u128 {
                return false;
            }
        }
        true
    }
}

/// Non-increasing tuple `tau_1..tau_j` with `tau_1 <= k` and `tau_i <= k_i`
/// for `i < j` (the last entry is capped too when requested).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct AdmissibleTuple {
    entries: Vec<usize>,
}

impl AdmissibleTuple {
    pub fn new(
        entries: Vec<usize>,
        k: usize,
        dims: &[usize],
        cap_last: bool,
    ) -> Result<Self, BoundsError> {
        let j = entries.len();
        if dims.len() < j {
            return Err(BoundsError::Inadmissible("dimension list too short".into()));
        }
        let mut prev = k;
        for (i, &t) in entries.iter().enumerate() {
            if t > prev {
                return Err(BoundsError::Inadmissible(format!("entry {i} increases")));
            }
            let capped = i + 1 < j || cap_last;
            if capped && t > dims[i] {
                return Err(BoundsError::Inadmissible(format!(
                    "entry {i} exceeds dimension cap {}",
                    dims[i]
                )));
            }
            prev = t;
        }
        Ok(AdmissibleTuple { entries })
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The tuple with `tau_0 = k` prepended.
    pub fn prepend_k(&self, k: usize) -> Vec<usize> {
        let mut v = Vec::with_capacity(self.entries.len() + 1);
        v.push(k);
        v.extend_from_slice(&self.entries);
        v
    }
}

/// All admissible tuples of length `j`, in lexicographically decreasing
/// order. `dims` supplies the caps `k_1..k_j`; the last entry is capped by
/// `k_j` only when `cap_last` is set.
pub fn enumerate_admissible(
    j: usize,
    k: usize,
    dims: &[usize],
    cap_last: bool,
) -> Result<Vec<AdmissibleTuple>, BoundsError> {
    if dims.len() < j {
        return Err(BoundsError::Inadmissible("dimension list too short".into()));
    }
    if dims.windows(2).any(|w| w[0] < w[1]) || dims.iter().any(|&d| d > k) {
        return Err(BoundsError::DimsNotMonotone);
    }
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(j);
    descend(j, k, dims, cap_last, &mut current, &mut out);
    Ok(out)
}

fn descend(
    j: usize,
    k: usize,
    dims: &[usize],
    cap_last: bool,
    current: &mut Vec<usize>,
    out: &mut Vec<AdmissibleTuple>,
) {
    if current.len() == j {
        out.push(AdmissibleTuple { entries: current.clone() });
        return;
    }
    let i = current.len();
    let prev = current.last().copied().unwrap_or(k);
    let mut cap = prev;
    if i + 1 < j || cap_last {
        cap = cap.min(dims[i]);
    }
    for t in (0..=cap).rev() {
        current.push(t);
        descend(j, k, dims, cap_last, current, out);
        current.pop();
    }
}

/// The combinatorial factor attached to a full tuple `(tau_0 = k, ...,
/// tau_last)`: `(k - tau_last + 1)` times the multinomial of `k - tau_last`
/// over the consecutive differences. This same expression bounds the
/// number of approximating-tuple indices produced for the tuple.
pub fn combinatorial_factor(k: usize, tau_full: &[usize]) -> BigInt {
    assert!(!tau_full.is_empty() && tau_full[0] == k, "tuple must start at k");
    assert!(tau_full.windows(2).all(|w| w[0] >= w[1]), "tuple must be non-increasing");
    let last = *tau_full.last().unwrap();
    let parts: Vec<u64> = tau_full.windows(2).map(|w| (w[0] - w[1]) as u64).collect();
    let n = (k - last) as u64;
    BigInt::from(k - last + 1) * multinomial(n, &parts)
}

/// Upper bound on the number of branch indices generated for one tuple by
/// the approximating-variety recursion; numerically identical to
/// [`combinatorial_factor`] on the same full tuple.
pub fn index_family_bound(k: usize, tau_full: &[usize]) -> BigInt {
    combinatorial_factor(k, tau_full)
}

/// One row of a structural sum: the tuple (with `tau_0` prepended), its
/// combinatorial factor, the bare degree product, and the full term.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TauTerm {
    pub tau: Vec<usize>,
    #[serde(with = "crate::formats::bigint_string")]
    pub factor: BigInt,
    #[serde(with = "crate::formats::bigint_string")]
    pub degree_part: BigInt,
    #[serde(with = "crate::formats::bigint_string")]
    pub term: BigInt,
}

/// Exact evaluation of the component-count bound for a profile.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub profile: Profile,
    pub per_tau_terms: Vec<TauTerm>,
    #[serde(with = "crate::formats::bigint_string")]
    pub structural_sum: BigInt,
    /// Degree product of the dominant tuple `(k, k_1, ..., k_{ell-1})`,
    /// without the combinatorial factor.
    #[serde(with = "crate::formats::bigint_string")]
    pub witness_term: BigInt,
    #[serde(with = "crate::formats::bigrational_string")]
    pub constant_base: BigRational,
    #[serde(with = "crate::formats::bigrational_string")]
    pub asymptotic_value: BigRational,
    pub hypothesis_violated: bool,
    pub degenerate: bool,
}

/// Degree product of one full tuple `(tau_0 = k, ..., tau_{ell-1})`:
/// `d_ell^{tau_{ell-1}} * prod_{i < ell} ((k - tau_{i-1} + 1) d_i)^{tau_{i-1} - tau_i}`.
fn tau_degree_part(p: &Profile, tau_full: &[usize]) -> BigInt {
    let ell = p.ell();
    debug_assert_eq!(tau_full.len(), ell);
    let k = p.k;
    let last = *tau_full.last().unwrap();
    let mut acc = BigInt::from(p.degs[ell - 1]).pow(last as u32);
    for i in 1..ell {
        let base = BigInt::from((k - tau_full[i - 1] + 1) as u64 * p.degs[i - 1]);
        acc *= base.pow((tau_full[i - 1] - tau_full[i]) as u32);
    }
    acc
}

/// Structural component-count bound: the sum over admissible tuples of the
/// combinatorial factor times the degree product. For an empty profile the
/// convention is 1 (the ambient space has one component), flagged
/// degenerate. The ladder hypothesis is checked but never aborts.
pub fn structural_bound(p: &Profile, c: &BigRational) -> Result<BoundReport, BoundsError> {
    p.validate()?;
    let ell = p.ell();
    let hypothesis_violated = !p.ladder_ok();
    if ell == 0 {
        let one = BigInt::one();
        return Ok(BoundReport {
            profile: p.clone(),
            per_tau_terms: vec![],
            structural_sum: one.clone(),
            witness_term: one.clone(),
            constant_base: c.clone(),
            asymptotic_value: rational_pow(c, p.k as u32),
            hypothesis_violated,
            degenerate: true,
        });
    }
    // tuples (tau_1..tau_{ell-1}), every entry capped by its k_i
    let tails = enumerate_admissible(ell - 1, p.k, &p.dims[1..ell], true)?;
    let mut per_tau_terms = Vec::with_capacity(tails.len());
    let mut structural_sum = BigInt::zero();
    for tail in &tails {
        let full = tail.prepend_k(p.k);
        let factor = combinatorial_factor(p.k, &full);
        let degree_part = tau_degree_part(p, &full);
        let term = &factor * &degree_part;
        structural_sum += &term;
        per_tau_terms.push(TauTerm { tau: full, factor, degree_part, term });
    }
    let mut witness_full = vec![p.k];
    witness_full.extend_from_slice(&p.dims[1..ell]);
    let witness_term = tau_degree_part(p, &witness_full);
    let asymptotic_value =
        rational_pow(c, p.k as u32) * BigRational::from_integer(structural_sum.clone());
    Ok(BoundReport {
        profile: p.clone(),
        per_tau_terms,
        structural_sum,
        witness_term,
        constant_base: c.clone(),
        asymptotic_value,
        hypothesis_violated,
        degenerate: false,
    })
}

/// Exact evaluation of the sign-condition census bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusBoundReport {
    pub profile: Profile,
    pub family_size: u64,
    pub family_degree: u64,
    pub per_tau_terms: Vec<TauTerm>,
    /// Sum over tuples `(tau_0..tau_ell)` of factor times degree product.
    #[serde(with = "crate::formats::bigint_string")]
    pub delta: BigInt,
    /// `sum_{j=0}^{k_ell} 4^j C(s, j)`.
    #[serde(with = "crate::formats::bigint_string")]
    pub envelope: BigInt,
    #[serde(with = "crate::formats::bigint_string")]
    pub structural_total: BigInt,
    #[serde(with = "crate::formats::bigrational_string")]
    pub constant_base: BigRational,
    #[serde(with = "crate::formats::bigrational_string")]
    pub asymptotic_value: BigRational,
    pub ladder_violated: bool,
    /// Set when `d_ell > d / (k + 1)`.
    pub degree_gap_violated: bool,
}

/// Census bound for a size-`s`, degree-`d` family restricted to the
/// profile's variety: the degree-product sum `delta` runs over tuples with
/// one more entry than the component bound, and the family enters through
/// the envelope `sum 4^j C(s, j)` over `j <= k_ell`.
pub fn sign_census_bound(
    p: &Profile,
    s: u64,
    d: u64,
    c: &BigRational,
) -> Result<CensusBoundReport, BoundsError> {
    p.validate()?;
    let ell = p.ell();
    let k = p.k;
    let ladder_violated = !p.ladder_ok();
    let degree_gap_violated = if ell == 0 {
        false
    } else {
        (k as u128 + 1) * p.degs[ell - 1] as u128 > d as u128
    };
    // tuples (tau_1..tau_ell), all entries capped
    let tails = enumerate_admissible(ell, k, p.inner_dims(), true)?;
    let mut per_tau_terms = Vec::with_capacity(tails.len());
    let mut delta = BigInt::zero();
    for tail in &tails {
        let full = tail.prepend_k(k);
        let factor = combinatorial_factor(k, &full);
        let last = *full.last().unwrap();
        let mut degree_part = BigInt::from(d).pow(last as u32);
        for i in 1..=ell {
            let base = BigInt::from((k - full[i - 1] + 1) as u64 * p.degs[i - 1]);
            degree_part *= base.pow((full[i - 1] - full[i]) as u32);
        }
        let term = &factor * &degree_part;
        delta += &term;
        per_tau_terms.push(TauTerm { tau: full, factor, degree_part, term });
    }
    let k_ell = *p.dims.last().unwrap();
    let mut envelope = BigInt::zero();
    for j in 0..=(k_ell as u64) {
        envelope += BigInt::from(4u32).pow(j as u32) * binomial(s, j);
    }
    let structural_total = &envelope * &delta;
    let asymptotic_value =
        rational_pow(c, k as u32) * BigRational::from_integer(structural_total.clone());
    Ok(CensusBoundReport {
        profile: p.clone(),
        family_size: s,
        family_degree: d,
        per_tau_terms,
        delta,
        envelope,
        structural_total,
        constant_base: c.clone(),
        asymptotic_value,
        ladder_violated,
        degree_gap_violated,
    })
}

/// Degree envelope of a subset of the inequality family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsetDegreeBound {
    #[serde(with = "crate::formats::bigrational_string")]
    pub value: BigRational,
    /// Set when the subset is larger than `k_ell` (the intersection is
    /// then empty and the exponent in the formula goes negative).
    pub over_cardinality: bool,
    /// Set for the empty subset, where the max-degree factor is undefined
    /// and taken as 1.
    pub degenerate: bool,
}

impl SubsetDegreeBound {
    /// The value as an integer; panics when it is not integral (which only
    /// happens in the flagged over-cardinality regime).
    pub fn to_integer(&self) -> BigInt {
        assert!(self.value.is_integer(), "subset degree bound is not integral");
        self.value.to_integer()
    }
}

/// Per-subset degree factor `(k+1)^{C(m,2) + (k_ell - m)(m - 1)} * prod d_P
/// * (max d_P)^{k_ell - m}` for a subset of cardinality `m = degs_i.len()`.
pub fn subset_degree_bound(k: usize, k_ell: usize, degs_i: &[u64]) -> SubsetDegreeBound {
    let m = degs_i.len();
    if m == 0 {
        return SubsetDegreeBound {
            value: BigRational::one(),
            over_cardinality: false,
            degenerate: true,
        };
    }
    let over_cardinality = m > k_ell;
    // exponent C(m,2) + (k_ell - m)(m - 1), which can be negative when the
    // subset is over-large
    let exp = binomial(m as u64, 2)
        + (BigInt::from(k_ell as i64) - BigInt::from(m as i64)) * BigInt::from(m as i64 - 1);
    let base = BigRational::from_integer(BigInt::from(k + 1));
    let mut value = signed_pow(&base, &exp);
    for &d in degs_i {
        value *= BigRational::from_integer(BigInt::from(d));
    }
    let dmax = *degs_i.iter().max().unwrap();
    let tail_exp = BigInt::from(k_ell as i64) - BigInt::from(m as i64);
    value *= signed_pow(&BigRational::from_integer(BigInt::from(dmax)), &tail_exp);
    SubsetDegreeBound { value, over_cardinality, degenerate: false }
}

/// Component bound for a non-singular complete intersection cut out by `m`
/// polynomials of sorted degrees in `k` variables:
/// `C(k+1, m+1) d_1 ... d_{m-1} d_m^{k-m+1} + 2(k - m + 1)`.
pub fn complete_intersection_bound(k: usize, degs: &[u64]) -> Result<BigInt, BoundsError> {
    let m = degs.len();
    if m == 0 || m > k {
        return Err(BoundsError::InvalidProfile(format!(
            "need 1 <= m <= k, got m = {m}, k = {k}"
        )));
    }
    if degs.windows(2).any(|w| w[0] > w[1]) {
        return Err(BoundsError::UnsortedDegrees);
    }
    let mut prod = binomial((k + 1) as u64, (m + 1) as u64);
    for &d in &degs[..m - 1] {
        prod *= BigInt::from(d);
    }
    prod *= BigInt::from(degs[m - 1]).pow((k - m + 1) as u32);
    Ok(prod + BigInt::from(2 * (k - m + 1) as u64))
}

/// Exact ratio of a tuple's degree product to the dominant witness term
/// `(k, k_1, ..., k_{ell-1})`. Only meaningful under the degree ladder,
/// so a violated ladder is an error here.
pub fn tau_term_ratio(p: &Profile, tail: &AdmissibleTuple) -> Result<BigRational, BoundsError> {
    p.validate()?;
    if !p.ladder_ok() {
        return Err(BoundsError::LadderViolated);
    }
    let ell = p.ell();
    if tail.len() + 1 != ell {
        return Err(BoundsError::Inadmissible(format!(
            "tuple must have ell - 1 = {} entries",
            ell - 1
        )));
    }
    let full = tail.prepend_k(p.k);
    let numer = tau_degree_part(p, &full);
    let mut witness_full = vec![p.k];
    witness_full.extend_from_slice(&p.dims[1..ell]);
    let denom = tau_degree_part(p, &witness_full);
    Ok(BigRational::new(numer, denom))
}

fn rational_pow(r: &BigRational, e: u32) -> BigRational {
    if e == 0 {
        return BigRational::one();
    }
    BigRational::new_raw(r.numer().pow(e), r.denom().pow(e))
}

/// `base^exp` for a possibly negative big-integer exponent.
fn signed_pow(base: &BigRational, exp: &BigInt) -> BigRational {
    let mag: u32 = exp.abs().try_into().ok().and_then(|v: u64| v.try_into().ok()).unwrap_or(0);
    let p = rational_pow(base, mag);
    if exp.is_negative() {
        p.recip()
    } else {
        p
    }
}
