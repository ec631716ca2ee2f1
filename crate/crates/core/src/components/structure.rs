//! Structured descriptions of sum-of-squares systems, used as verifiable
//! certificates by the component counter.
//!
//! An equation can be declared as a sum of squares of univariate products
//! `sum_b (prod_h (X_{v_b} - r_{b,h}))^2`. The declaration is never
//! trusted: [`SystemStructure::validate`] expands it and demands exact
//! polynomial equality with the system it describes. Once validated, the
//! real zero set of such an equation is exactly the set where every block
//! product vanishes, which pins each block variable to its finite root
//! list — so a fully pinned system has an exactly known, finite zero set.

use crate::polyring::{Interval, Polynomial};
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error("structure describes {got} equations, system has {expected}")]
    WrongLength { expected: usize, got: usize },
    #[error("equation {index}: expansion of the declared structure does not match")]
    ExpansionMismatch { index: usize },
    #[error("equation {index}: block variable {var} out of range")]
    BadVariable { index: usize, var: usize },
    #[error("equation {index} is neither declared nor affine in one variable")]
    Unstructured { index: usize },
    #[error("variable {var} is not pinned to finitely many values")]
    UnpinnedVariable { var: usize },
}

/// One squared block: the product of `(X_var - r)` over the listed roots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnivariateBlock {
    pub var: usize,
    pub roots: Vec<BigRational>,
}

impl UnivariateBlock {
    /// The product polynomial (not squared), in `nvars` variables.
    pub fn product(&self, nvars: usize) -> Polynomial {
        let mut p = Polynomial::constant_int(nvars, 1);
        for r in &self.roots {
            let lin = Polynomial::var(nvars, self.var)
                .sub(&Polynomial::constant(nvars, r.clone()));
            p = p.mul(&lin);
        }
        p
    }

    /// Tight enclosure of `(prod (x - r))^2` over one axis interval,
    /// evaluated in factored form.
    pub fn enclosure(&self, axis: &Interval) -> Interval {
        let mut prod = Interval::point(BigRational::one());
        for r in &self.roots {
            let shifted = axis.sub(&Interval::point(r.clone()));
            prod = prod.mul(&shifted);
        }
        prod.pow(2)
    }
}

/// Declared shape of one equation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EquationShape {
    /// `sum_b block_b^2` over the listed blocks.
    SumOfSquares { blocks: Vec<UnivariateBlock> },
}

/// Structure declarations for a system; entries are `None` for equations
/// left to syntactic analysis (affine-univariate detection).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SystemStructure {
    pub shapes: Vec<Option<EquationShape>>,
}

impl SystemStructure {
    pub fn unstructured(n: usize) -> Self {
        SystemStructure { shapes: vec![None; n] }
    }

    /// Checks that each declared shape expands to exactly the
    /// corresponding system polynomial.
    pub fn validate(&self, system: &[Polynomial]) -> Result<(), StructureError> {
        if self.shapes.len() != system.len() {
            return Err(StructureError::WrongLength {
                expected: system.len(),
                got: self.shapes.len(),
            });
        }
        for (index, (shape, eq)) in self.shapes.iter().zip(system).enumerate() {
            let Some(EquationShape::SumOfSquares { blocks }) = shape else {
                continue;
            };
            let nvars = eq.nvars();
            let mut expansion = Polynomial::zero(nvars);
            for b in blocks {
                if b.var >= nvars {
                    return Err(StructureError::BadVariable { index, var: b.var });
                }
                let prod = b.product(nvars);
                expansion = expansion.add(&prod.mul(&prod));
            }
            if &expansion != eq {
                return Err(StructureError::ExpansionMismatch { index });
            }
        }
        Ok(())
    }

    /// Sound enclosure of one equation over a box: factored evaluation for
    /// declared shapes, plain interval evaluation otherwise.
    pub fn enclosure(
        &self,
        system: &[Polynomial],
        index: usize,
        bx: &[Interval],
    ) -> Interval {
        match &self.shapes[index] {
            Some(EquationShape::SumOfSquares { blocks }) => {
                let mut total = Interval::point(BigRational::zero());
                for b in blocks {
                    total = total.add(&b.enclosure(&bx[b.var]));
                }
                total
            }
            None => system[index]
                .eval_interval(bx)
                .expect("box arity matches system"),
        }
    }
}

/// Detects `a*X_v + c` with `a != 0` and returns `(v, -c/a)`.
pub fn affine_univariate_root(p: &Polynomial) -> Option<(usize, BigRational)> {
    let mut var_and_slope: Option<(usize, BigRational)> = None;
    let mut constant = BigRational::zero();
    for (exps, coef) in p.terms() {
        let total: u32 = exps.iter().sum();
        match total {
            0 => constant = coef.clone(),
            1 => {
                let v = exps.iter().position(|&e| e == 1).unwrap();
                if var_and_slope.is_some() {
                    return None;
                }
                var_and_slope = Some((v, coef.clone()));
            }
            _ => return None,
        }
    }
    let (v, a) = var_and_slope?;
    Some((v, -constant / a))
}

/// The exactly known finite zero set of a fully pinned system, with the
/// per-variable value sets that produced it.
#[derive(Debug, Clone)]
pub struct ExactZeroSet {
    pub points: Vec<Vec<BigRational>>,
}

/// Derives the exact finite zero set of a system whose every variable is
/// pinned by validated sum-of-squares blocks or affine-univariate
/// equations. The candidate grid is a superset of the true zero set by
/// construction; exact evaluation of every equation then filters it down
/// to exactly the zero set.
pub fn solve_pinned_system(
    system: &[Polynomial],
    structure: &SystemStructure,
) -> Result<ExactZeroSet, StructureError> {
    structure.validate(system)?;
    let nvars = system.first().map(|p| p.nvars()).unwrap_or(0);
    let mut pins: BTreeMap<usize, Vec<BigRational>> = BTreeMap::new();
    let mut intersect = |var: usize, values: Vec<BigRational>| match pins.entry(var) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(values);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            o.get_mut().retain(|x| values.contains(x));
        }
    };
    for (index, eq) in system.iter().enumerate() {
        match &structure.shapes[index] {
            Some(EquationShape::SumOfSquares { blocks }) => {
                for b in blocks {
                    let mut roots = b.roots.clone();
                    roots.sort();
                    roots.dedup();
                    intersect(b.var, roots);
                }
            }
            None => {
                if eq.is_zero() {
                    continue;
                }
                if eq.num_terms() == 1 && eq.degree() == crate::polyring::Degree::Finite(0) {
                    // nonzero constant: empty zero set
                    return Ok(ExactZeroSet { points: vec![] });
                }
                let (var, root) = affine_univariate_root(eq)
                    .ok_or(StructureError::Unstructured { index })?;
                intersect(var, vec![root]);
            }
        }
    }
    for var in 0..nvars {
        if !pins.contains_key(&var) {
            return Err(StructureError::UnpinnedVariable { var });
        }
    }
    // product grid, then exact-evaluation filter
    let mut points: Vec<Vec<BigRational>> = vec![vec![]];
    for var in 0..nvars {
        let values = &pins[&var];
        let mut next = Vec::with_capacity(points.len() * values.len());
        for p in &points {
            for v in values {
                let mut q = p.clone();
                q.push(v.clone());
                next.push(q);
            }
        }
        points = next;
    }
    points.retain(|pt| {
        system
            .iter()
            .all(|eq| eq.eval(pt).map(|v| v.is_zero()).unwrap_or(false))
    });
    Ok(ExactZeroSet { points })
}

/// Minimum pairwise distance squared between listed points (rational, so
/// squared distance is exact); `None` for fewer than two points.
pub fn min_pairwise_distance_sq(points: &[Vec<BigRational>]) -> Option<BigRational> {
    let mut best: Option<BigRational> = None;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let d2: BigRational = points[i]
                .iter()
                .zip(&points[j])
                .map(|(a, b)| {
                    let d = a - b;
                    &d * &d
                })
                .sum();
            best = Some(match best {
                Some(b) if b <= d2 => b,
                _ => d2,
            });
        }
    }
    best
}
