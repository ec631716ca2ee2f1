//! Sparse multivariate polynomial arithmetic over exact rationals.
//!
//! A [`Polynomial`] is a finite map from exponent vectors to nonzero
//! rational coefficients. Terms iterate in lexicographic exponent order,
//! so every derived output (text serialization, degree scans, audits) is
//! reproducible. Variables are indexed `0..nvars`.

mod interval;
pub mod jacobian;
mod matrix;

pub use interval::Interval;
pub use jacobian::{jac, JacMatrix};
pub use matrix::RatMatrix;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("dimension mismatch: polynomial has {expected} variables, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("variable index {index} out of range for {nvars} variables")]
    IndexOutOfRange { index: usize, nvars: usize },
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("extracted submatrix is not square: {rows} rows, {cols} cols")]
    NonSquareExtraction { rows: usize, cols: usize },
    #[error("row set not contained in the Jacobian row range")]
    BadRowSet,
    #[error("interval endpoints out of order")]
    BadInterval,
}

/// Total degree with a distinguished marker for the zero polynomial,
/// ordered below every finite degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Degree {
    NegInfinity,
    Finite(u32),
}

impl Degree {
    pub fn finite(self) -> Option<u32> {
        match self {
            Degree::NegInfinity => None,
            Degree::Finite(d) => Some(d),
        }
    }

    /// Finite value, with the zero polynomial collapsed to 0.
    pub fn unwrap_or_zero(self) -> u32 {
        self.finite().unwrap_or(0)
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Invariants: no stored coefficient is zero and every exponent vector has
/// length exactly `nvars`. Values are immutable after construction; all
/// operations are pure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = Polynomial::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn constant_int(nvars: usize, c: i64) -> Self {
        Polynomial::constant(nvars, BigRational::from(BigInt::from(c)))
    }

    /// The monomial `X_var` (0-based variable index).
    pub fn var(nvars: usize, var: usize) -> Self {
        assert!(var < nvars, "variable index out of range");
        let mut exps = vec![0; nvars];
        exps[var] = 1;
        Polynomial::monomial(exps, BigRational::one())
    }

    pub fn monomial(exps: Vec<u32>, coef: BigRational) -> Self {
        let nvars = exps.len();
        let mut p = Polynomial::zero(nvars);
        if !coef.is_zero() {
            p.terms.insert(exps, coef);
        }
        p
    }

    pub fn from_terms(
        nvars: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, BigRational)>,
    ) -> Self {
        let mut p = Polynomial::zero(nvars);
        for (exps, coef) in terms {
            assert_eq!(exps.len(), nvars, "exponent vector length mismatch");
            p.add_term(exps, coef);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &BigRational)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn coefficient(&self, exps: &[u32]) -> BigRational {
        self.terms.get(exps).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn degree(&self) -> Degree {
        self.terms
            .keys()
            .map(|e| {
                let total: u64 = e.iter().map(|&x| x as u64).sum();
                u32::try_from(total).expect("total degree fits u32")
            })
            .max()
            .map_or(Degree::NegInfinity, Degree::Finite)
    }

    /// Highest exponent of one variable across all terms.
    pub fn degree_in(&self, var: usize) -> Degree {
        self.terms
            .keys()
            .map(|e| e[var])
            .max()
            .map_or(Degree::NegInfinity, Degree::Finite)
    }

    /// True if some term has a positive exponent on `var`.
    pub fn uses_var(&self, var: usize) -> bool {
        self.terms.keys().any(|e| e[var] > 0)
    }

    fn add_term(&mut self, exps: Vec<u32>, coef: BigRational) {
        if coef.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coef);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &coef;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, s: &BigRational) -> Polynomial {
        if s.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let mut out = Polynomial::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(exps, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, mut n: u32) -> Polynomial {
        let mut acc = Polynomial::constant_int(self.nvars, 1);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Exact value at a rational point.
    pub fn eval(&self, point: &[BigRational]) -> Result<BigRational, PolyError> {
        if point.len() != self.nvars {
            return Err(PolyError::DimensionMismatch { expected: self.nvars, got: point.len() });
        }
        let mut total = BigRational::zero();
        for (exps, coef) in &self.terms {
            let mut term = coef.clone();
            for (x, &e) in point.iter().zip(exps) {
                if e > 0 {
                    term *= rat_pow(x, e);
                }
            }
            total += term;
        }
        Ok(total)
    }

    /// Interval enclosure of the range over a box, by monomial accumulation
    /// with a power-aware rule for even exponents. The result contains
    /// every pointwise value of the polynomial on the box.
    pub fn eval_interval(&self, bx: &[Interval]) -> Result<Interval, PolyError> {
        if bx.len() != self.nvars {
            return Err(PolyError::DimensionMismatch { expected: self.nvars, got: bx.len() });
        }
        let mut total = Interval::point(BigRational::zero());
        for (exps, coef) in &self.terms {
            let mut term = Interval::point(coef.clone());
            for (iv, &e) in bx.iter().zip(exps) {
                if e > 0 {
                    term = term.mul(&iv.pow(e));
                }
            }
            total = total.add(&term);
        }
        Ok(total)
    }

    /// Partial derivative with respect to one variable.
    pub fn partial(&self, var: usize) -> Polynomial {
        assert!(var < self.nvars, "variable index out of range");
        let mut out = Polynomial::zero(self.nvars);
        for (exps, coef) in &self.terms {
            let e = exps[var];
            if e == 0 {
                continue;
            }
            let mut nexps = exps.clone();
            nexps[var] = e - 1;
            out.add_term(nexps, coef * BigRational::from(BigInt::from(e)));
        }
        out
    }

    /// Homogenization: appends one variable (index `nvars`) and pads every
    /// term up to the total degree. Substituting 1 for the new variable
    /// recovers the original polynomial.
    pub fn homogenize(&self) -> Polynomial {
        let d = self.degree().unwrap_or_zero();
        let mut out = Polynomial::zero(self.nvars + 1);
        for (exps, coef) in &self.terms {
            let total: u32 = exps.iter().sum();
            let mut nexps = exps.clone();
            nexps.push(d - total);
            out.add_term(nexps, coef.clone());
        }
        out
    }

    /// Substitutes 1 for the last variable and drops it.
    pub fn dehomogenize(&self) -> Polynomial {
        assert!(self.nvars > 0, "no variable to dehomogenize");
        let mut out = Polynomial::zero(self.nvars - 1);
        for (exps, coef) in &self.terms {
            out.add_term(exps[..self.nvars - 1].to_vec(), coef.clone());
        }
        out
    }

    /// Exact composition with an invertible linear change of variables:
    /// the result is `p(M x)`.
    pub fn linear_change(&self, m: &RatMatrix) -> Result<Polynomial, PolyError> {
        if m.rows() != self.nvars || m.cols() != self.nvars {
            return Err(PolyError::DimensionMismatch { expected: self.nvars, got: m.rows() });
        }
        if !m.is_invertible() {
            return Err(PolyError::SingularMatrix);
        }
        // image of X_i under the substitution
        let forms: Vec<Polynomial> = (0..self.nvars)
            .map(|i| {
                let mut f = Polynomial::zero(self.nvars);
                for j in 0..self.nvars {
                    f = f.add(&Polynomial::var(self.nvars, j).scale(m.get(i, j)));
                }
                f
            })
            .collect();
        let mut out = Polynomial::zero(self.nvars);
        let mut pow_cache: BTreeMap<(usize, u32), Polynomial> = BTreeMap::new();
        for (exps, coef) in &self.terms {
            let mut term = Polynomial::constant(self.nvars, coef.clone());
            for (i, &e) in exps.iter().enumerate() {
                if e > 0 {
                    let p = pow_cache
                        .entry((i, e))
                        .or_insert_with(|| forms[i].pow(e))
                        .clone();
                    term = term.mul(&p);
                }
            }
            out = out.add(&term);
        }
        Ok(out)
    }
}

/// `r^e` for a non-negative exponent; numerator and denominator stay reduced.
pub fn rat_pow(r: &BigRational, e: u32) -> BigRational {
    if e == 0 {
        return BigRational::one();
    }
    BigRational::new_raw(r.numer().pow(e), r.denom().pow(e))
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (exps, coef) in &self.terms {
            let neg = coef.is_negative();
            let abs = coef.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let is_const = exps.iter().all(|&e| e == 0);
            if !abs.is_one() || is_const {
                write!(f, "{abs}")?;
                if !is_const {
                    write!(f, "*")?;
                }
            }
            let mut sep = "";
            for (i, &e) in exps.iter().enumerate() {
                if e > 0 {
                    write!(f, "{sep}x{}", i + 1)?;
                    if e > 1 {
                        write!(f, "^{e}")?;
                    }
                    sep = "*";
                }
            }
        }
        Ok(())
    }
}
