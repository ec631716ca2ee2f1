//! Intervals with exact rational endpoints.
//!
//! No directed rounding is needed: endpoint arithmetic is exact, so
//! inclusion isotonicity holds with equality-tight endpoints for the
//! primitive operations.

use super::PolyError;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Closed interval `[lo, hi]` with `lo <= hi`, both exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    lo: BigRational,
    hi: BigRational,
}

impl Interval {
    pub fn new(lo: BigRational, hi: BigRational) -> Result<Self, PolyError> {
        if lo > hi {
            return Err(PolyError::BadInterval);
        }
        Ok(Interval { lo, hi })
    }

    pub fn point(v: BigRational) -> Self {
        Interval { lo: v.clone(), hi: v }
    }

    pub fn from_ints(lo: i64, hi: i64) -> Self {
        Interval::new(BigRational::from_integer(lo.into()), BigRational::from_integer(hi.into()))
            .expect("ordered endpoints")
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(2.into())
    }

    pub fn contains(&self, v: &BigRational) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Strict containment in the interior, componentwise.
    pub fn contains_in_interior(&self, other: &Interval) -> bool {
        self.lo < other.lo && other.hi < self.hi
    }

    pub fn strictly_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn strictly_negative(&self) -> bool {
        self.hi.is_negative()
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval { lo: &self.lo + &other.lo, hi: &self.hi + &other.hi }
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        Interval { lo: &self.lo - &other.hi, hi: &self.hi - &other.lo }
    }

    pub fn neg(&self) -> Interval {
        Interval { lo: -self.hi.clone(), hi: -self.lo.clone() }
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        let cands = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let mut lo = cands[0].clone();
        let mut hi = cands[0].clone();
        for c in &cands[1..] {
            if c < &lo {
                lo = c.clone();
            }
            if c > &hi {
                hi = c.clone();
            }
        }
        Interval { lo, hi }
    }

    pub fn scale(&self, s: &BigRational) -> Interval {
        if s.is_negative() {
            Interval { lo: &self.hi * s, hi: &self.lo * s }
        } else {
            Interval { lo: &self.lo * s, hi: &self.hi * s }
        }
    }

    /// Power-aware `self^e`: even powers of a zero-straddling interval
    /// produce `[0, max(|lo|,|hi|)^e]`, which is tighter than repeated
    /// multiplication.
    pub fn pow(&self, e: u32) -> Interval {
        if e == 0 {
            return Interval::point(BigRational::one());
        }
        let lp = super::rat_pow(&self.lo, e);
        let hp = super::rat_pow(&self.hi, e);
        if e % 2 == 1 {
            return Interval { lo: lp, hi: hp };
        }
        if !self.lo.is_negative() {
            Interval { lo: lp, hi: hp }
        } else if !self.hi.is_positive() {
            Interval { lo: hp, hi: lp }
        } else {
            let m = if lp > hp { lp } else { hp };
            Interval { lo: BigRational::zero(), hi: m }
        }
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: if self.lo < other.lo { self.lo.clone() } else { other.lo.clone() },
            hi: if self.hi > other.hi { self.hi.clone() } else { other.hi.clone() },
        }
    }

    /// Intersection, or `None` when disjoint.
    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = if self.lo > other.lo { self.lo.clone() } else { other.lo.clone() };
        let hi = if self.hi < other.hi { self.hi.clone() } else { other.hi.clone() };
        if lo <= hi {
            Some(Interval { lo, hi })
        } else {
            None
        }
    }

    /// Splits into equal halves.
    pub fn bisect(&self) -> (Interval, Interval) {
        let m = self.midpoint();
        (
            Interval { lo: self.lo.clone(), hi: m.clone() },
            Interval { lo: m, hi: self.hi.clone() },
        )
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}
