//! Deformation of polynomial systems to general position, and the
//! recursive construction of approximating tuples with structural audits.
//!
//! Formal infinitesimals are realized as one concrete strictly ordered
//! rational schedule ([`InfSchedule`]): the largest value goes to the
//! last-level `delta`, then down the chain to the first-level `delta`,
//! then `zeta_1, eta_1, ..., zeta_ell, eta_ell`. The schedule is a
//! parameter so sensitivity can be tested.
//!
//! Genericity of the positive perturbation polynomials is not certified;
//! strict positivity holds by construction (a sum of squares plus one) and
//! the remaining generic properties are spot-checked by the audits.

use crate::bounds::{AdmissibleTuple, Profile};
use crate::certify::{jacobian_det_at, krawczyk_certify, Certificate};
use crate::polyring::jacobian::jac;
use crate::polyring::{Interval, PolyError, Polynomial};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DeformError {
    #[error("schedule ordering violated: values must be strictly decreasing in (0, 1)")]
    ScheduleOrdering,
    #[error("schedule has {got} levels, need {need}")]
    ScheduleTooShort { need: usize, got: usize },
    #[error("deformation parameter must lie in [0, 1]")]
    BadParameter,
    #[error("the positive polynomial may only use variables of index >= {q}")]
    VariableBelowCutoff { q: usize },
    #[error("generic positive polynomials need an even degree, got {0}")]
    OddDegree(u64),
    #[error("no variables left for a positive polynomial of positive degree")]
    NoVariables,
    #[error("tuple is not admissible for the profile: {0}")]
    Inadmissible(String),
    #[error("system synthesis failed to reach the target degrees")]
    SynthesisFailed,
    #[error("square system expected: {got} equations in {vars} variables")]
    NotSquare { got: usize, vars: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Rational stand-ins for the ordered infinitesimals of an `ell`-level
/// construction. `delta`, `zeta`, `eta` are indexed by level (1-based via
/// the accessors). The strict order along the chain
/// `delta_ell > ... > delta_1 > zeta_1 > eta_1 > ... > zeta_ell > eta_ell`
/// is validated, all values in (0, 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfSchedule {
    delta: Vec<BigRational>,
    zeta: Vec<BigRational>,
    eta: Vec<BigRational>,
}

impl InfSchedule {
    /// Geometric schedule: consecutive chain entries shrink by `base`.
    pub fn geometric(ell: usize, base: &BigRational) -> Result<Self, DeformError> {
        if !base.is_positive() || base >= &BigRational::one() {
            return Err(DeformError::ScheduleOrdering);
        }
        let mut value = base.clone();
        let mut chain = Vec::with_capacity(3 * ell);
        for _ in 0..3 * ell {
            chain.push(value.clone());
            value *= base;
        }
        // chain[0] is the largest: delta_ell, ..., delta_1, zeta_1, eta_1, ...
        let delta: Vec<BigRational> = chain[..ell].iter().rev().cloned().collect();
        let mut zeta = Vec::with_capacity(ell);
        let mut eta = Vec::with_capacity(ell);
        for j in 0..ell {
            zeta.push(chain[ell + 2 * j].clone());
            eta.push(chain[ell + 2 * j + 1].clone());
        }
        let s = InfSchedule { delta, zeta, eta };
        s.validate()?;
        Ok(s)
    }

    /// Default: geometric with ratio 2^-20.
    pub fn default_for(ell: usize) -> Self {
        let base = BigRational::new(BigInt::one(), BigInt::from(1u64 << 20));
        InfSchedule::geometric(ell, &base).expect("default base is valid")
    }

    pub fn from_parts(
        delta: Vec<BigRational>,
        zeta: Vec<BigRational>,
        eta: Vec<BigRational>,
    ) -> Result<Self, DeformError> {
        if delta.len() != zeta.len() || zeta.len() != eta.len() {
            return Err(DeformError::ScheduleOrdering);
        }
        let s = InfSchedule { delta, zeta, eta };
        s.validate()?;
        Ok(s)
    }

    pub fn levels(&self) -> usize {
        self.delta.len()
    }

    pub fn delta(&self, level: usize) -> &BigRational {
        &self.delta[level - 1]
    }

    pub fn zeta(&self, level: usize) -> &BigRational {
        &self.zeta[level - 1]
    }

    pub fn eta(&self, level: usize) -> &BigRational {
        &self.eta[level - 1]
    }

    /// The chain in decreasing order.
    pub fn chain(&self) -> Vec<BigRational> {
        let ell = self.levels();
        let mut out = Vec::with_capacity(3 * ell);
        for j in (1..=ell).rev() {
            out.push(self.delta(j).clone());
        }
        for j in 1..=ell {
            out.push(self.zeta(j).clone());
            out.push(self.eta(j).clone());
        }
        out
    }

    pub fn validate(&self) -> Result<(), DeformError> {
        let chain = self.chain();
        let one = BigRational::one();
        for v in &chain {
            if !v.is_positive() || v >= &one {
                return Err(DeformError::ScheduleOrdering);
            }
        }
        if chain.windows(2).any(|w| w[0] <= w[1]) {
            return Err(DeformError::ScheduleOrdering);
        }
        Ok(())
    }
}

/// The convex deformation `(1 - zeta) Q - zeta H`. `H` may only involve
/// variables of index `>= q` and `zeta` must lie in [0, 1].
pub fn def_poly(
    q_poly: &Polynomial,
    zeta: &BigRational,
    q: usize,
    h: &Polynomial,
) -> Result<Polynomial, DeformError> {
    if zeta.is_negative() || zeta > &BigRational::one() {
        return Err(DeformError::BadParameter);
    }
    for v in 0..q.min(h.nvars()) {
        if h.uses_var(v) {
            return Err(DeformError::VariableBelowCutoff { q });
        }
    }
    let one_minus = BigRational::one() - zeta;
    Ok(q_poly.scale(&one_minus).sub(&h.scale(zeta)))
}

/// Componentwise deformation of a tuple with one parameter.
pub fn def_tuple(
    polys: &[Polynomial],
    zeta: &BigRational,
    q: usize,
    hs: &[Polynomial],
) -> Result<Vec<Polynomial>, DeformError> {
    assert_eq!(polys.len(), hs.len(), "tuple lengths differ");
    polys
        .iter()
        .zip(hs)
        .map(|(p, h)| def_poly(p, zeta, q, h))
        .collect()
}

/// Seeded pseudorandom polynomial in the variables `q..k`, strictly
/// positive everywhere, of exact even degree: a sum of squares of random
/// polynomials of half the degree, plus one. Degree 0 yields the constant
/// 1. Deterministic per seed.
pub fn generic_positive(
    q: usize,
    k: usize,
    degree: u64,
    seed: u64,
) -> Result<Polynomial, DeformError> {
    if degree == 0 {
        return Ok(Polynomial::constant_int(k, 1));
    }
    if !degree.is_multiple_of(2) {
        return Err(DeformError::OddDegree(degree));
    }
    if q >= k {
        return Err(DeformError::NoVariables);
    }
    let half = (degree / 2) as u32;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut acc = Polynomial::constant_int(k, 1);
    for round in 0..2 {
        let mut g = Polynomial::zero(k);
        for exps in monomials_up_to(q, k, half) {
            if rng.gen_ratio(1, 2) {
                let c = rng.gen_range(-3..=3i64);
                if c != 0 {
                    g = g.add(&Polynomial::monomial(exps, rat_int(c)));
                }
            }
        }
        // the first square carries the exact leading degree
        if round == 0 && g.degree().unwrap_or_zero() < half {
            let mut lead = vec![0u32; k];
            lead[k - 1] = half;
            g = g.add(&Polynomial::monomial(lead, rat_int(1)));
        }
        acc = acc.add(&g.mul(&g));
    }
    Ok(acc)
}

fn monomials_up_to(q: usize, k: usize, max_deg: u32) -> Vec<Vec<u32>> {
    let nfree = k - q;
    let mut out = Vec::new();
    let mut current = vec![0u32; nfree];
    fn rec(
        pos: usize,
        budget: u32,
        current: &mut Vec<u32>,
        q: usize,
        k: usize,
        out: &mut Vec<Vec<u32>>,
    ) {
        if pos == current.len() {
            let mut exps = vec![0u32; k];
            for (i, &e) in current.iter().enumerate() {
                exps[q + i] = e;
            }
            out.push(exps);
            return;
        }
        for e in 0..=budget {
            current[pos] = e;
            rec(pos + 1, budget - e, current, q, k, out);
        }
        current[pos] = 0;
    }
    rec(0, max_deg, &mut current, q, k, &mut out);
    out
}

fn rat_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn even_up(d: u64) -> (u64, bool) {
    if d.is_multiple_of(2) {
        (d, false)
    } else {
        (d + 1, true)
    }
}

/// Predicate for membership in the critical set cut out by an augmented
/// system: a zero of every equation where the selected minor stays
/// nonzero.
#[derive(Debug, Clone)]
pub struct CriticalPredicate {
    pub system: Vec<Polynomial>,
    pub selected_minor: Polynomial,
}

impl CriticalPredicate {
    pub fn holds_at(&self, point: &[BigRational]) -> Result<bool, PolyError> {
        for p in &self.system {
            if !p.eval(point)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(!self.selected_minor.eval(point)?.is_zero())
    }
}

/// Augments a tuple of `k - p` polynomials with the Jacobian minors that
/// select the critical points of the last-coordinate projection: for each
/// row index `i` outside `j_rows`, append the minor on rows
/// `j_rows + {i} - {k-1}`. `j_rows` must have `k - p` entries inside
/// `q..k` and contain the last variable.
pub fn augment_with_minors(
    f: &[Polynomial],
    p: usize,
    q: usize,
    j_rows: &[usize],
) -> Result<(Vec<Polynomial>, CriticalPredicate), DeformError> {
    let k = f.first().map(|g| g.nvars()).unwrap_or(0);
    if j_rows.len() != k - p || !j_rows.contains(&(k - 1)) {
        return Err(DeformError::Inadmissible(format!(
            "row set must have k - p = {} entries and contain the last variable",
            k - p
        )));
    }
    let jm = jac(f, p, q)?;
    let selected_minor = jm.minor(j_rows)?;
    let mut out = f.to_vec();
    for i in q..k {
        if j_rows.contains(&i) {
            continue;
        }
        let mut rows: Vec<usize> = j_rows
            .iter()
            .copied()
            .filter(|&r| r != k - 1)
            .chain(std::iter::once(i))
            .collect();
        rows.sort_unstable();
        out.push(jm.minor(&rows)?);
    }
    let pred = CriticalPredicate { system: f.to_vec(), selected_minor };
    Ok((out, pred))
}

/// Branch index of an approximating tuple: the base marker followed by one
/// step per level, either the dimension-preserving marker or the chosen
/// row subset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IndexStep {
    Same,
    Rows(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TupleIndex(pub Vec<IndexStep>);

impl fmt::Display for TupleIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut acc = String::from("-1");
        for step in &self.0 {
            acc = match step {
                IndexStep::Same => format!("({acc},-1)"),
                IndexStep::Rows(rows) => {
                    let names: Vec<String> =
                        rows.iter().map(|r| (r + 1).to_string()).collect();
                    format!("({acc},{{{}}})", names.join(","))
                }
            };
        }
        write!(f, "{acc}")
    }
}

/// One approximating tuple: the equation tuple, the optional inequality
/// polynomial, and its branch index.
#[derive(Debug, Clone)]
pub struct ApproxTuple {
    pub tau: Vec<usize>,
    pub index: TupleIndex,
    pub p_tuple: Vec<Polynomial>,
    pub q_tuple: Option<Polynomial>,
    /// Some requested perturbation degree was odd and rounded up to even.
    pub rounded_degrees: bool,
}

/// Seeded system with exact degrees `profile.degs`, optionally squared
/// (which doubles every effective degree).
pub fn synthesize_system(
    profile: &Profile,
    seed: u64,
    square: bool,
) -> Result<Vec<Polynomial>, DeformError> {
    let k = profile.k;
    let mut out = Vec::with_capacity(profile.ell());
    for (i, &d) in profile.degs.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(mix(seed, &[0xA0, i as u64, d]));
        let mut q = Polynomial::zero(k);
        for exps in monomials_up_to(0, k, d as u32) {
            if rng.gen_ratio(1, 3) {
                let c = rng.gen_range(-4..=4i64);
                if c != 0 {
                    q = q.add(&Polynomial::monomial(exps, rat_int(c)));
                }
            }
        }
        if q.degree().unwrap_or_zero() < d as u32 {
            let mut lead = vec![0u32; k];
            lead[i % k] = d as u32;
            q = q.add(&Polynomial::monomial(lead, rat_int(1)));
        }
        if q.degree() != crate::polyring::Degree::Finite(d as u32) {
            return Err(DeformError::SynthesisFailed);
        }
        out.push(if square { q.mul(&q) } else { q });
    }
    Ok(out)
}

fn mix(seed: u64, parts: &[u64]) -> u64 {
    // FNV-1a over the little-endian words; stable across platforms
    let mut h: u64 = 0xcbf29ce484222325;
    let mut eat = |v: u64| {
        for b in v.to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
    };
    eat(seed);
    for &p in parts {
        eat(p);
    }
    h
}

fn path_code(idx: &TupleIndex) -> u64 {
    let mut h: u64 = 0x9e3779b97f4a7c15;
    for step in &idx.0 {
        h = match step {
            IndexStep::Same => mix(h, &[0xFF]),
            IndexStep::Rows(rows) => {
                let mut g = mix(h, &[0xFE]);
                for &r in rows {
                    g = mix(g, &[r as u64]);
                }
                g
            }
        };
    }
    h
}

/// Builds the approximating tuples for one admissible tuple, synthesizing
/// the underlying system from the seed.
pub fn approximating_tuples(
    profile: &Profile,
    tau: &AdmissibleTuple,
    sched: &InfSchedule,
    seed: u64,
) -> Result<Vec<ApproxTuple>, DeformError> {
    let system = synthesize_system(profile, seed, false)?;
    approximating_tuples_for_system(profile, &system, tau, sched, seed)
}

/// Same construction over an explicit system (the profile supplies the
/// degree/dimension ladder; the system supplies the polynomials that the
/// level deformations start from).
pub fn approximating_tuples_for_system(
    profile: &Profile,
    system: &[Polynomial],
    tau: &AdmissibleTuple,
    sched: &InfSchedule,
    seed: u64,
) -> Result<Vec<ApproxTuple>, DeformError> {
    sched.validate()?;
    let k = profile.k;
    let level = tau.len();
    if level > profile.ell() || system.len() < level {
        return Err(DeformError::Inadmissible("tuple longer than the system".into()));
    }
    if sched.levels() < level {
        return Err(DeformError::ScheduleTooShort { need: level, got: sched.levels() });
    }
    // admissibility per the construction: non-increasing from k, with the
    // intermediate caps (the last entry is unconstrained here)
    let entries = tau.entries();
    let mut prev = k;
    for (i, &t) in entries.iter().enumerate() {
        if t > prev {
            return Err(DeformError::Inadmissible(format!("entry {i} increases")));
        }
        if i + 1 < entries.len() && t > profile.dims[i + 1] {
            return Err(DeformError::Inadmissible(format!("entry {i} exceeds its cap")));
        }
        prev = t;
    }

    // base: one tuple with no equations (the zero equation cuts nothing)
    let mut current = vec![ApproxTuple {
        tau: vec![],
        index: TupleIndex::default(),
        p_tuple: vec![],
        q_tuple: None,
        rounded_degrees: false,
    }];

    for j in 1..=level {
        let p = if j == 1 { k } else { entries[j - 2] };
        let q = entries[j - 1];
        // level polynomial: the j-th equation plus the first few earlier
        // ones, deformed downward by delta_j against a positive H
        let mut p_bar = system[j - 1].clone();
        let extra = (k - p).min(j - 1);
        for item in system.iter().take(extra) {
            p_bar = p_bar.add(item);
        }
        let (h_deg, level_rounded) = even_up(p_bar.degree().unwrap_or_zero() as u64);
        let h_deg = if q >= k { 0 } else { h_deg };
        let h = generic_positive(q, k, h_deg, mix(seed, &[1, j as u64, q as u64]))?;
        let p_tilde = def_poly(&p_bar, sched.delta(j), q, &h)?;

        let mut next = Vec::new();
        for at in &current {
            if p == q {
                // dimension holds: keep the equations, replace the
                // inequality with the level polynomial
                let mut index = at.index.clone();
                index.0.push(IndexStep::Same);
                next.push(ApproxTuple {
                    tau: entries[..j].to_vec(),
                    index,
                    p_tuple: at.p_tuple.clone(),
                    q_tuple: Some(p_tilde.clone()),
                    rounded_degrees: at.rounded_degrees || level_rounded,
                });
                continue;
            }
            debug_assert_eq!(at.p_tuple.len(), k - p);
            let alpha = path_code(&at.index);
            // eta-deformation of the carried equations
            let mut hs = Vec::with_capacity(at.p_tuple.len());
            let mut eta_rounded = false;
            for (pos, poly) in at.p_tuple.iter().enumerate() {
                let (dg, r) = even_up(poly.degree().unwrap_or_zero() as u64);
                eta_rounded |= r;
                hs.push(generic_positive(
                    q,
                    k,
                    dg,
                    mix(seed, &[2, j as u64, alpha, pos as u64]),
                )?);
            }
            let mut f_tuple = def_tuple(&at.p_tuple, sched.eta(j), q, &hs)?;
            f_tuple.push(p_tilde.clone());

            // degree recipe for the zeta-perturbation partners: the carried
            // degrees, then the level degree, then (k - p + 1) d_j for each
            // appended minor
            let dj = profile.degs[j - 1];
            let d_prime = (k - p + 1) as u64 * dj;
            let mut h_degs: Vec<u64> =
                at.p_tuple.iter().map(|g| g.degree().unwrap_or_zero() as u64).collect();
            h_degs.push(dj);
            for _ in 0..p - q - 1 {
                h_degs.push(d_prime);
            }

            for j_rows in row_subsets(q, k, k - p + 1) {
                let (augmented, _) = augment_with_minors(&f_tuple, p - 1, q, &j_rows)?;
                debug_assert_eq!(augmented.len(), k - q);
                let beta = mix(alpha, &j_rows.iter().map(|&r| r as u64).collect::<Vec<_>>());
                let mut zeta_rounded = false;
                let mut new_p = Vec::with_capacity(k - q);
                for (pos, (g, &dg_raw)) in augmented.iter().zip(&h_degs).enumerate() {
                    let (dg, r) = even_up(dg_raw);
                    zeta_rounded |= r;
                    let hp = generic_positive(
                        q,
                        k,
                        dg,
                        mix(seed, &[3, j as u64, beta, pos as u64]),
                    )?;
                    new_p.push(def_poly(g, sched.zeta(j), q, &hp)?);
                }
                let mut index = at.index.clone();
                index.0.push(IndexStep::Rows(j_rows.clone()));
                next.push(ApproxTuple {
                    tau: entries[..j].to_vec(),
                    index,
                    p_tuple: new_p,
                    q_tuple: at.q_tuple.clone(),
                    rounded_degrees: at.rounded_degrees
                        || level_rounded
                        || eta_rounded
                        || zeta_rounded,
                });
            }
        }
        current = next;
    }
    Ok(current)
}

/// All `size`-subsets of the variable range `q..k` that contain the last
/// variable, in lexicographic order.
fn row_subsets(q: usize, k: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if size == 0 || size > k - q {
        return out;
    }
    let pool: Vec<usize> = (q..k - 1).collect();
    let choose = size - 1;
    if choose > pool.len() {
        return out;
    }
    fn rec(
        pool: &[usize],
        start: usize,
        need: usize,
        current: &mut Vec<usize>,
        k: usize,
        out: &mut Vec<Vec<usize>>,
    ) {
        if need == 0 {
            let mut rows = current.clone();
            rows.push(k - 1);
            out.push(rows);
            return;
        }
        for i in start..=pool.len() - need {
            current.push(pool[i]);
            rec(pool, i + 1, need - 1, current, k, out);
            current.pop();
        }
    }
    rec(&pool, 0, choose, &mut Vec::new(), k, &mut out);
    out
}

/// Structural audit of one tuple against its profile: equation count,
/// per-block degree thresholds, and the inequality degree (strict and
/// doubled thresholds both reported).
///
/// Odd degrees in a profile force the positive perturbation partners up
/// to the next even degree, so a block may exceed its raw threshold by
/// exactly that rounding; `ok_with_rounding` accepts the even-rounded
/// threshold and only counts for the overall verdict when the tuple
/// carries the rounding flag.
#[derive(Debug, Clone)]
pub struct BlockAudit {
    pub block: usize,
    pub size: usize,
    pub max_degree: u32,
    pub threshold: u64,
    pub ok: bool,
    pub ok_with_rounding: bool,
}

#[derive(Debug, Clone)]
pub struct TupleAudit {
    pub index: String,
    pub expected_equations: usize,
    pub cardinality_ok: bool,
    pub blocks: Vec<BlockAudit>,
    pub q_degree: Option<u32>,
    pub q_threshold: u64,
    pub q_strict_ok: bool,
    pub q_loose_ok: bool,
    pub pass: bool,
}

pub fn audit_structure(profile: &Profile, tuple: &ApproxTuple) -> TupleAudit {
    let k = profile.k;
    let tau = &tuple.tau;
    let level = tau.len();
    let expected = k - *tau.last().unwrap_or(&k);
    let cardinality_ok = tuple.p_tuple.len() == expected && tuple.q_tuple.iter().len() <= 1;

    let mut blocks = Vec::new();
    let mut offset = 0usize;
    let mut prev = k;
    for (i, &t) in tau.iter().enumerate() {
        let size = prev - t;
        let threshold = (k - prev + 1) as u64 * profile.degs[i];
        if size > 0 {
            let slice = &tuple.p_tuple[offset.min(tuple.p_tuple.len())
                ..(offset + size).min(tuple.p_tuple.len())];
            let max_degree =
                slice.iter().map(|p| p.degree().unwrap_or_zero()).max().unwrap_or(0);
            blocks.push(BlockAudit {
                block: i + 1,
                size,
                max_degree,
                threshold,
                ok: (max_degree as u64) <= threshold,
                ok_with_rounding: (max_degree as u64) <= even_up(threshold).0,
            });
        }
        offset += size;
        prev = t;
    }

    let q_threshold = if level > 0 { profile.degs[level - 1] } else { 1 };
    let q_degree = tuple.q_tuple.as_ref().map(|p| p.degree().unwrap_or_zero());
    let q_strict_ok = q_degree.is_none_or(|d| d as u64 <= q_threshold);
    let q_loose_ok = q_degree.is_none_or(|d| d as u64 <= 2 * q_threshold);
    let blocks_ok = blocks.iter().all(|b| b.ok)
        || (tuple.rounded_degrees && blocks.iter().all(|b| b.ok_with_rounding));
    let pass = cardinality_ok && blocks_ok && q_loose_ok;
    TupleAudit {
        index: tuple.index.to_string(),
        expected_equations: expected,
        cardinality_ok,
        blocks,
        q_degree,
        q_threshold,
        q_strict_ok,
        q_loose_ok,
        pass,
    }
}

#[derive(Debug, Clone)]
pub struct FamilyAudit {
    pub tau: Vec<usize>,
    pub tuples: usize,
    pub family_bound: BigInt,
    pub count_ok: bool,
    pub per_tuple: Vec<TupleAudit>,
    pub pass: bool,
}

pub fn audit_family(
    profile: &Profile,
    tau: &AdmissibleTuple,
    tuples: &[ApproxTuple],
) -> FamilyAudit {
    let full = tau.prepend_k(profile.k);
    let family_bound = crate::bounds::index_family_bound(profile.k, &full);
    let per_tuple: Vec<TupleAudit> =
        tuples.iter().map(|t| audit_structure(profile, t)).collect();
    let count_ok = BigInt::from(tuples.len()) <= family_bound;
    let pass = count_ok && per_tuple.iter().all(|t| t.pass);
    FamilyAudit { tau: tau.entries().to_vec(), tuples: tuples.len(), family_bound, count_ok, per_tuple, pass }
}

/// Certifies that the deformed system `(1 - zeta) F - zeta H` keeps a zero
/// within `radius` of an approximate simple zero of `F`. The verdict is
/// one-sided: `Certified` is a proof, `NotCertified` is only inconclusive.
pub fn certify_perturbed_zero(
    f: &[Polynomial],
    h: &[Polynomial],
    zeta: &BigRational,
    x: &[BigRational],
    radius: &BigRational,
) -> Result<Certificate, DeformError> {
    let n = x.len();
    if f.len() != n {
        return Err(DeformError::NotSquare { got: f.len(), vars: n });
    }
    if h.len() != n {
        return Err(DeformError::NotSquare { got: h.len(), vars: n });
    }
    let det = jacobian_det_at(f, x)?;
    if det.is_zero() {
        return Ok(Certificate::NotCertified {
            reason: "Jacobian is singular at the approximate zero".into(),
        });
    }
    let deformed = def_tuple(f, zeta, 0, h)?;
    let bx: Vec<Interval> = x
        .iter()
        .map(|c| Interval::new(c - radius, c + radius).expect("radius >= 0"))
        .collect();
    Ok(krawczyk_certify(&deformed, &bx)?)
}
