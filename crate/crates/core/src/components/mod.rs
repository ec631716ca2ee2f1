//! Certified counting of connected components and sign-condition
//! realizations on a box, by exact-rational interval subdivision.
//!
//! The counter maintains, per refinement round, the set of candidate cells
//! (every equation enclosure contains zero). Candidate cells cluster under
//! facet adjacency and the cluster count is the reported upper count. The
//! certified lower count comes from one of two routes: the exactly solved
//! finite zero set of a validated structured system, or Krawczyk
//! certificates on cluster boxes of square systems. A count is exact only
//! when the two meet.

pub mod structure;
mod unionfind;

use crate::certify::krawczyk_certify;
use crate::polyring::{Interval, PolyError, Polynomial};
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use structure::{solve_pinned_system, ExactZeroSet, StructureError, SystemStructure};
use thiserror::Error;
use unionfind::UnionFind;

#[derive(Debug, Error)]
pub enum ComponentsError {
    #[error("the equation tuple is empty")]
    EmptyEquations,
    #[error("box has {got} axes, system lives in {expected} variables")]
    ArityMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("perturbation magnitudes and gammas must be positive")]
    NonPositiveShift,
    #[error("subset pick references polynomial {0}, family has {1}")]
    BadSubsetIndex(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Adjacency {
    /// Cells sharing a full facet (default; can only split clusters, never
    /// spuriously merge them).
    Facet,
    /// Cells sharing any vertex.
    Vertex,
}

#[derive(Debug, Clone)]
pub struct CountOptions {
    pub max_depth: u32,
    pub adjacency: Adjacency,
    pub structure: Option<SystemStructure>,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions { max_depth: 12, adjacency: Adjacency::Facet, structure: None }
    }
}

impl CountOptions {
    pub fn with_depth(max_depth: u32) -> Self {
        CountOptions { max_depth, ..Default::default() }
    }

    pub fn with_structure(max_depth: u32, structure: SystemStructure) -> Self {
        CountOptions { max_depth, adjacency: Adjacency::Facet, structure: Some(structure) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellStatus {
    Candidate,
    Excluded,
}

#[derive(Debug, Clone)]
pub struct Cell {
    pub coords: Vec<u64>,
    pub status: CellStatus,
}

/// The final refinement round: all cells share one depth; excluded cells
/// are the just-pruned siblings of the candidates.
#[derive(Debug, Clone)]
pub struct CellComplex {
    pub root: Vec<Interval>,
    pub depth: u32,
    pub cells: Vec<Cell>,
    /// Candidate-cell count after each completed round.
    pub candidate_history: Vec<usize>,
}

impl CellComplex {
    pub fn cell_box(&self, coords: &[u64]) -> Vec<Interval> {
        cell_box(&self.root, self.depth, coords)
    }

    pub fn candidates(&self) -> impl Iterator<Item = &Cell> {
        self.cells.iter().filter(|c| c.status == CellStatus::Candidate)
    }

    pub fn excluded(&self) -> impl Iterator<Item = &Cell> {
        self.cells.iter().filter(|c| c.status == CellStatus::Excluded)
    }

    /// Growth exponent of the candidate count over the last two rounds:
    /// roughly the cell dimension of the candidate set.
    pub fn growth_dimension(&self) -> Option<f64> {
        let n = self.candidate_history.len();
        if n < 2 || self.candidate_history[n - 2] == 0 {
            return None;
        }
        let ratio = self.candidate_history[n - 1] as f64 / self.candidate_history[n - 2] as f64;
        Some(ratio.log2())
    }
}

fn cell_box(root: &[Interval], depth: u32, coords: &[u64]) -> Vec<Interval> {
    let scale = BigRational::from_integer(num_bigint::BigInt::from(1u64) << depth.min(63));
    root.iter()
        .zip(coords)
        .map(|(axis, &i)| {
            let w = axis.width() / &scale;
            let lo = axis.lo() + &w * BigRational::from_integer(i.into());
            let hi = &lo + &w;
            Interval::new(lo, hi).expect("ordered endpoints")
        })
        .collect()
}

fn point_in_box(point: &[BigRational], bx: &[Interval]) -> bool {
    point.iter().zip(bx).all(|(x, iv)| iv.contains(x))
}

/// Certified component count on a box.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountResult {
    /// Certified distinct components (isolated zeros in disjoint clusters).
    pub lower: u64,
    /// Candidate clusters under the chosen adjacency.
    pub upper: u64,
    /// Set when the certified and cluster counts meet.
    pub exact: Option<u64>,
    pub depth_used: u32,
    pub max_depth_exhausted: bool,
    /// The exact finite-zero-set route was available and validated.
    pub structured: bool,
}

impl fmt::Display for CountResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exact {
            Some(n) => write!(f, "exact {n} (depth {})", self.depth_used),
            None => write!(
                f,
                "inexact: certified {} <= count <= clusters {} (depth {})",
                self.lower, self.upper, self.depth_used
            ),
        }
    }
}

struct Engine<'a> {
    system: &'a [Polynomial],
    structure: Option<&'a SystemStructure>,
}

impl Engine<'_> {
    fn enclosure(&self, index: usize, bx: &[Interval]) -> Interval {
        match self.structure {
            Some(st) => st.enclosure(self.system, index, bx),
            None => self.system[index].eval_interval(bx).expect("arity checked"),
        }
    }

    fn is_candidate(&self, bx: &[Interval]) -> bool {
        (0..self.system.len()).all(|i| self.enclosure(i, bx).contains_zero())
    }
}

fn cluster_candidates(
    candidates: &[Vec<u64>],
    adjacency: Adjacency,
) -> (UnionFind, BTreeMap<Vec<u64>, usize>) {
    let index: BTreeMap<Vec<u64>, usize> =
        candidates.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
    let mut uf = UnionFind::new(candidates.len());
    let k = candidates.first().map(|c| c.len()).unwrap_or(0);
    for (i, coords) in candidates.iter().enumerate() {
        match adjacency {
            Adjacency::Facet => {
                for axis in 0..k {
                    let mut n = coords.clone();
                    n[axis] += 1;
                    if let Some(&j) = index.get(&n) {
                        uf.union(i, j);
                    }
                }
            }
            Adjacency::Vertex => {
                let mut offsets = vec![0i64; k];
                loop {
                    if offsets.iter().any(|&o| o != 0) {
                        let neighbor: Option<Vec<u64>> = coords
                            .iter()
                            .zip(&offsets)
                            .map(|(&c, &o)| c.checked_add_signed(o))
                            .collect();
                        if let Some(n) = neighbor {
                            if let Some(&j) = index.get(&n) {
                                uf.union(i, j);
                            }
                        }
                    }
                    // next offset vector in {-1,0,1}^k
                    let mut pos = 0;
                    loop {
                        if pos == k {
                            break;
                        }
                        offsets[pos] += 1;
                        if offsets[pos] <= 1 {
                            break;
                        }
                        offsets[pos] = -1;
                        pos += 1;
                    }
                    if pos == k {
                        break;
                    }
                }
            }
        }
    }
    (uf, index)
}

struct RoundState {
    candidates: Vec<Vec<u64>>,
    excluded: Vec<Vec<u64>>,
    depth: u32,
}

fn classify_round(
    engine: &Engine<'_>,
    root: &[Interval],
    depth: u32,
    cells: impl IntoIterator<Item = Vec<u64>>,
) -> RoundState {
    let mut candidates = Vec::new();
    let mut excluded = Vec::new();
    for coords in cells {
        let bx = cell_box(root, depth, &coords);
        if engine.is_candidate(&bx) {
            candidates.push(coords);
        } else {
            excluded.push(coords);
        }
    }
    RoundState { candidates, excluded, depth }
}

fn children(coords: &[u64]) -> Vec<Vec<u64>> {
    let k = coords.len();
    let mut out = Vec::with_capacity(1 << k);
    for mask in 0..(1u64 << k) {
        let child: Vec<u64> =
            coords.iter().enumerate().map(|(i, &c)| 2 * c + ((mask >> i) & 1)).collect();
        out.push(child);
    }
    out
}

/// Places each zero in the cluster of a candidate cell containing it and
/// returns (distinct clusters hit, whether no two zeros share a cluster).
/// Soundness of the enclosures guarantees every true zero lies in some
/// candidate cell.
fn place_zeros(
    zeros: &[Vec<BigRational>],
    root: &[Interval],
    depth: u32,
    uf: &mut UnionFind,
    index: &BTreeMap<Vec<u64>, usize>,
) -> (u64, bool) {
    let mut seen = std::collections::BTreeSet::new();
    let mut separated = true;
    for z in zeros {
        let mut home: Option<usize> = None;
        for (coords, &i) in index {
            let bx = cell_box(root, depth, coords);
            if point_in_box(z, &bx) {
                home = Some(uf.find(i));
                break;
            }
        }
        let home = home.expect("a true zero must lie in a candidate cell");
        if !seen.insert(home) {
            separated = false;
        }
    }
    (seen.len() as u64, separated)
}

/// Krawczyk certificates on cluster bounding boxes of a square system;
/// returns the number of certified clusters with pairwise-disjoint boxes.
fn certify_clusters_square(
    system: &[Polynomial],
    root: &[Interval],
    depth: u32,
    uf: &mut UnionFind,
    index: &BTreeMap<Vec<u64>, usize>,
) -> u64 {
    let k = root.len();
    if system.len() != k {
        return 0;
    }
    // cluster bounding boxes
    let mut boxes: BTreeMap<usize, Vec<Interval>> = BTreeMap::new();
    for (coords, &i) in index {
        let r = uf.find(i);
        let bx = cell_box(root, depth, coords);
        boxes
            .entry(r)
            .and_modify(|acc| {
                for (a, b) in acc.iter_mut().zip(&bx) {
                    *a = a.hull(b);
                }
            })
            .or_insert(bx);
    }
    let entries: Vec<(usize, Vec<Interval>)> = boxes.into_iter().collect();
    let mut certified = Vec::new();
    for (root_id, bx) in &entries {
        if let Ok(cert) = krawczyk_certify(system, bx) {
            if cert.is_certified() {
                certified.push((*root_id, bx.clone()));
            }
        }
    }
    // discard any certified boxes that overlap another certified box
    let disjoint = |a: &[Interval], b: &[Interval]| {
        a.iter().zip(b).any(|(x, y)| x.intersect(y).is_none())
    };
    let mut count = 0u64;
    for (i, (_, bi)) in certified.iter().enumerate() {
        let ok = certified
            .iter()
            .enumerate()
            .all(|(j, (_, bj))| i == j || disjoint(bi, bj));
        if ok {
            count += 1;
        }
    }
    count
}

fn validate_inputs(
    equations: &[Polynomial],
    root: &[Interval],
    opts: &CountOptions,
) -> Result<(), ComponentsError> {
    if equations.is_empty() {
        return Err(ComponentsError::EmptyEquations);
    }
    let k = equations[0].nvars();
    if root.len() != k || equations.iter().any(|p| p.nvars() != k) {
        return Err(ComponentsError::ArityMismatch { expected: k, got: root.len() });
    }
    if let Some(st) = &opts.structure {
        st.validate(equations)?;
    }
    Ok(())
}

/// Subdivides until the certified and cluster counts meet or the depth
/// budget runs out. Never throws on an inexact outcome; the result says
/// what was and was not established.
pub fn count_components(
    equations: &[Polynomial],
    root: &[Interval],
    opts: &CountOptions,
) -> Result<CountResult, ComponentsError> {
    count_components_detailed(equations, root, opts).map(|(r, _)| r)
}

pub fn count_components_detailed(
    equations: &[Polynomial],
    root: &[Interval],
    opts: &CountOptions,
) -> Result<(CountResult, CellComplex), ComponentsError> {
    validate_inputs(equations, root, opts)?;
    let engine = Engine { system: equations, structure: opts.structure.as_ref() };
    // the exact route: a validated structured system with every variable
    // pinned has an exactly known zero set
    let exact_zeros: Option<ExactZeroSet> = match &opts.structure {
        Some(st) => match solve_pinned_system(equations, st) {
            Ok(mut z) => {
                z.points.retain(|p| point_in_box(p, root));
                Some(z)
            }
            Err(StructureError::Unstructured { .. })
            | Err(StructureError::UnpinnedVariable { .. }) => None,
            Err(e) => return Err(e.into()),
        },
        None => None,
    };

    let k = root.len();
    let mut state = classify_round(&engine, root, 0, vec![vec![0u64; k]]);
    let mut history = vec![state.candidates.len()];
    loop {
        let (mut uf, index) = cluster_candidates(&state.candidates, opts.adjacency);
        let upper = if state.candidates.is_empty() { 0 } else { uf.count_roots() as u64 };
        let (lower, met) = match &exact_zeros {
            Some(z) => {
                if state.candidates.is_empty() {
                    (0, z.points.is_empty())
                } else {
                    let (distinct, separated) =
                        place_zeros(&z.points, root, state.depth, &mut uf, &index);
                    (distinct, separated && distinct == upper)
                }
            }
            None => {
                let lower = if state.candidates.is_empty() {
                    0
                } else {
                    certify_clusters_square(equations, root, state.depth, &mut uf, &index)
                };
                (lower, lower == upper)
            }
        };
        let exhausted = state.depth >= opts.max_depth;
        if met || exhausted {
            let result = CountResult {
                lower,
                upper,
                exact: if met { Some(upper) } else { None },
                depth_used: state.depth,
                max_depth_exhausted: exhausted && !met,
                structured: exact_zeros.is_some(),
            };
            let cells = state
                .candidates
                .iter()
                .map(|c| Cell { coords: c.clone(), status: CellStatus::Candidate })
                .chain(
                    state
                        .excluded
                        .iter()
                        .map(|c| Cell { coords: c.clone(), status: CellStatus::Excluded }),
                )
                .collect();
            let complex = CellComplex {
                root: root.to_vec(),
                depth: state.depth,
                cells,
                candidate_history: history,
            };
            return Ok((result, complex));
        }
        let next_cells: Vec<Vec<u64>> =
            state.candidates.iter().flat_map(|c| children(c)).collect();
        state = classify_round(&engine, root, state.depth + 1, next_cells);
        history.push(state.candidates.len());
    }
}

/// Sign vector over a polynomial family, entries in {-1, 0, +1}.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SignConditionKey(pub Vec<i8>);

impl fmt::Display for SignConditionKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            match s {
                1 => write!(f, "+1")?,
                0 => write!(f, "0")?,
                _ => write!(f, "-1")?,
            }
        }
        write!(f, ")")
    }
}

/// Census of sign-condition realizations on the zero set.
#[derive(Debug, Clone)]
pub struct CensusResult {
    pub per_sigma: BTreeMap<SignConditionKey, CountResult>,
    pub total_upper: u64,
    pub total_lower: u64,
    /// Candidate cells whose sign stayed ambiguous at the final depth;
    /// such cells are counted in every compatible bucket.
    pub ambiguous_cells: u64,
    pub all_exact: bool,
    pub depth_used: u32,
}

fn exact_sign(v: &BigRational) -> i8 {
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

fn interval_signs(iv: &Interval) -> Vec<i8> {
    if iv.strictly_positive() {
        vec![1]
    } else if iv.strictly_negative() {
        vec![-1]
    } else if iv.lo().is_zero() && iv.hi().is_zero() {
        vec![0]
    } else {
        let mut s = Vec::new();
        if iv.lo().is_negative() {
            s.push(-1);
        }
        s.push(0);
        if iv.hi().is_positive() {
            s.push(1);
        }
        s
    }
}

/// Classifies the candidate cells of the zero-set subdivision by the signs
/// of a polynomial family, refining until every cell's signs are
/// determined and the component count is exact (or the depth budget runs
/// out). Ambiguous cells at the final depth are conservatively counted in
/// every compatible bucket and flag their buckets inexact.
pub fn sign_census(
    p_family: &[Polynomial],
    equations: &[Polynomial],
    root: &[Interval],
    opts: &CountOptions,
) -> Result<CensusResult, ComponentsError> {
    validate_inputs(equations, root, opts)?;
    let k = root.len();
    if p_family.iter().any(|p| p.nvars() != k) {
        return Err(ComponentsError::ArityMismatch { expected: k, got: root.len() });
    }
    let engine = Engine { system: equations, structure: opts.structure.as_ref() };
    let exact_zeros: Option<ExactZeroSet> = match &opts.structure {
        Some(st) => match solve_pinned_system(equations, st) {
            Ok(mut z) => {
                z.points.retain(|p| point_in_box(p, root));
                Some(z)
            }
            Err(StructureError::Unstructured { .. })
            | Err(StructureError::UnpinnedVariable { .. }) => None,
            Err(e) => return Err(e.into()),
        },
        None => None,
    };

    let mut state = classify_round(&engine, root, 0, vec![vec![0u64; k]]);
    loop {
        // per-cell possible signs for every family polynomial
        let mut cell_signs: Vec<Vec<Vec<i8>>> = Vec::with_capacity(state.candidates.len());
        for coords in &state.candidates {
            let bx = cell_box(root, state.depth, coords);
            cell_signs.push(p_family.iter().map(|p| {
                interval_signs(&p.eval_interval(&bx).expect("arity checked"))
            }).collect());
        }
        let ambiguous_cells =
            cell_signs.iter().filter(|signs| signs.iter().any(|s| s.len() > 1)).count() as u64;

        // cluster candidates once; a sigma bucket takes the sub-clusters of
        // its compatible cells
        let all_determined = ambiguous_cells == 0;
        let exhausted = state.depth >= opts.max_depth;

        // tentative per-sigma clustering to decide whether to stop
        if all_determined || exhausted {
            let mut per_sigma: BTreeMap<SignConditionKey, CountResult> = BTreeMap::new();
            // realized sigma set: all sign vectors compatible with some cell
            let mut sigmas = std::collections::BTreeSet::new();
            for signs in &cell_signs {
                let mut acc: Vec<Vec<i8>> = vec![vec![]];
                for options in signs {
                    let mut next = Vec::new();
                    for prefix in &acc {
                        for &o in options {
                            let mut v = prefix.clone();
                            v.push(o);
                            next.push(v);
                        }
                    }
                    acc = next;
                }
                for v in acc {
                    sigmas.insert(SignConditionKey(v));
                }
            }
            // zero partition by exact signs
            let zero_sigma: Option<Vec<(Vec<BigRational>, SignConditionKey)>> =
                exact_zeros.as_ref().map(|z| {
                    z.points
                        .iter()
                        .map(|pt| {
                            let key = SignConditionKey(
                                p_family
                                    .iter()
                                    .map(|p| exact_sign(&p.eval(pt).expect("arity")))
                                    .collect(),
                            );
                            (pt.clone(), key)
                        })
                        .collect()
                });

            let mut total_upper = 0u64;
            let mut total_lower = 0u64;
            let mut all_exact = true;
            for sigma in sigmas {
                // compatible cells
                let compatible: Vec<Vec<u64>> = state
                    .candidates
                    .iter()
                    .zip(&cell_signs)
                    .filter(|(_, signs)| {
                        signs.iter().zip(&sigma.0).all(|(opts_s, s)| opts_s.contains(s))
                    })
                    .map(|(c, _)| c.clone())
                    .collect();
                let had_ambiguous = state
                    .candidates
                    .iter()
                    .zip(&cell_signs)
                    .any(|(_, signs)| {
                        signs.iter().any(|s| s.len() > 1)
                            && signs.iter().zip(&sigma.0).all(|(o, s)| o.contains(s))
                    });
                let (mut uf, index) = cluster_candidates(&compatible, opts.adjacency);
                let upper = if compatible.is_empty() { 0 } else { uf.count_roots() as u64 };
                let (lower, met) = match &zero_sigma {
                    Some(zs) => {
                        let pts: Vec<Vec<BigRational>> = zs
                            .iter()
                            .filter(|(_, key)| *key == sigma)
                            .map(|(p, _)| p.clone())
                            .collect();
                        if compatible.is_empty() {
                            (0, pts.is_empty())
                        } else {
                            let (distinct, separated) =
                                place_zeros(&pts, root, state.depth, &mut uf, &index);
                            (distinct, separated && distinct == upper)
                        }
                    }
                    None => (0, false),
                };
                let exact = met && !had_ambiguous;
                if !exact {
                    all_exact = false;
                }
                total_upper += upper;
                total_lower += lower;
                per_sigma.insert(
                    sigma,
                    CountResult {
                        lower,
                        upper,
                        exact: if exact { Some(upper) } else { None },
                        depth_used: state.depth,
                        max_depth_exhausted: exhausted,
                        structured: exact_zeros.is_some(),
                    },
                );
            }
            if all_exact || exhausted {
                return Ok(CensusResult {
                    per_sigma,
                    total_upper,
                    total_lower,
                    ambiguous_cells,
                    all_exact,
                    depth_used: state.depth,
                });
            }
        }
        let next_cells: Vec<Vec<u64>> =
            state.candidates.iter().flat_map(|c| children(c)).collect();
        state = classify_round(&engine, root, state.depth + 1, next_cells);
    }
}

/// Which of the two shift magnitudes a subset pick uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shift {
    Eps,
    Delta,
}

/// The four constant shifts of every family polynomial:
/// `P_i + e g_i, P_i - e g_i, P_i + d g_i, P_i - d g_i` in that order.
pub fn perturbation_family(
    p_family: &[Polynomial],
    eps: &BigRational,
    delta: &BigRational,
    gammas: &[BigRational],
) -> Result<Vec<Polynomial>, ComponentsError> {
    if !eps.is_positive() || !delta.is_positive() || gammas.iter().any(|g| !g.is_positive()) {
        return Err(ComponentsError::NonPositiveShift);
    }
    assert_eq!(p_family.len(), gammas.len(), "one gamma per polynomial");
    let mut out = Vec::with_capacity(4 * p_family.len());
    for (p, g) in p_family.iter().zip(gammas) {
        let nvars = p.nvars();
        for mag in [eps, delta] {
            let shift = Polynomial::constant(nvars, mag * g);
            out.push(p.add(&shift));
            out.push(p.sub(&shift));
        }
    }
    Ok(out)
}

/// Extracts the subset selected by `(sign, which magnitude, index)` picks.
pub fn perturbation_subset(
    p_family: &[Polynomial],
    picks: &[(i8, Shift, usize)],
    eps: &BigRational,
    delta: &BigRational,
    gammas: &[BigRational],
) -> Result<Vec<Polynomial>, ComponentsError> {
    if !eps.is_positive() || !delta.is_positive() || gammas.iter().any(|g| !g.is_positive()) {
        return Err(ComponentsError::NonPositiveShift);
    }
    let mut out = Vec::with_capacity(picks.len());
    for &(sign, which, idx) in picks {
        if idx >= p_family.len() {
            return Err(ComponentsError::BadSubsetIndex(idx, p_family.len()));
        }
        let mag = match which {
            Shift::Eps => eps,
            Shift::Delta => delta,
        };
        let nvars = p_family[idx].nvars();
        let shift = Polynomial::constant(nvars, mag * &gammas[idx]);
        out.push(if sign >= 0 {
            p_family[idx].add(&shift)
        } else {
            p_family[idx].sub(&shift)
        });
    }
    Ok(out)
}
