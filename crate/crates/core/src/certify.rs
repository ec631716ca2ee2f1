//! Existence/uniqueness certificates for zeros of square systems via the
//! Krawczyk operator, carried out entirely in exact rational interval
//! arithmetic (no rounding, so a "certified" verdict is a proof).

use crate::polyring::{Interval, PolyError, Polynomial, RatMatrix};
use num_rational::BigRational;
use num_traits::Zero;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// The operator image landed strictly inside the box: the system has
    /// exactly one zero there.
    Certified { image: Vec<Interval> },
    NotCertified { reason: String },
}

impl Certificate {
    pub fn is_certified(&self) -> bool {
        matches!(self, Certificate::Certified { .. })
    }
}

/// One Krawczyk step for the square system `f` on `bx`:
/// `K = m - Y f(m) + (I - Y J(bx)) (bx - m)` with `m` the midpoint and `Y`
/// the exact inverse of the midpoint Jacobian. `K` strictly inside the box
/// certifies a unique zero; any failure (non-square system, singular
/// midpoint Jacobian, image escaping) is reported, never guessed.
pub fn krawczyk_certify(f: &[Polynomial], bx: &[Interval]) -> Result<Certificate, PolyError> {
    let n = bx.len();
    if f.len() != n || f.iter().any(|p| p.nvars() != n) {
        return Err(PolyError::DimensionMismatch { expected: n, got: f.len() });
    }
    let mid: Vec<BigRational> = bx.iter().map(|iv| iv.midpoint()).collect();

    let mut jac_mid = RatMatrix::zeros(n, n);
    let mut partials: Vec<Vec<Polynomial>> = Vec::with_capacity(n);
    for (i, p) in f.iter().enumerate() {
        let row: Vec<Polynomial> = (0..n).map(|v| p.partial(v)).collect();
        for (v, d) in row.iter().enumerate() {
            jac_mid.set(i, v, d.eval(&mid)?);
        }
        partials.push(row);
    }
    let y = match jac_mid.inverse() {
        Ok(inv) => inv,
        Err(_) => {
            return Ok(Certificate::NotCertified {
                reason: "midpoint Jacobian is singular".into(),
            })
        }
    };

    // residual: -Y f(m)
    let fm: Vec<BigRational> = f
        .iter()
        .map(|p| p.eval(&mid))
        .collect::<Result<_, _>>()?;
    let correction = y.mul_vec(&fm);

    // interval Jacobian over the whole box, evaluated once
    let jac_box: Vec<Vec<Interval>> = partials
        .iter()
        .map(|row| row.iter().map(|d| d.eval_interval(bx)).collect::<Result<_, _>>())
        .collect::<Result<_, _>>()?;

    // R = I - Y * J(bx), as an interval matrix
    let r: Vec<Vec<Interval>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut acc = Interval::point(if i == j {
                        BigRational::from_integer(1.into())
                    } else {
                        BigRational::zero()
                    });
                    for (l, jac_row) in jac_box.iter().enumerate() {
                        acc = acc.sub(&jac_row[j].scale(y.get(i, l)));
                    }
                    acc
                })
                .collect()
        })
        .collect();

    // K = m - Y f(m) + R (bx - m)
    let offsets: Vec<Interval> = bx
        .iter()
        .zip(&mid)
        .map(|(iv, m)| iv.sub(&Interval::point(m.clone())))
        .collect();
    let mut image = Vec::with_capacity(n);
    for i in 0..n {
        let mut acc = Interval::point(&mid[i] - &correction[i]);
        for j in 0..n {
            acc = acc.add(&r[i][j].mul(&offsets[j]));
        }
        image.push(acc);
    }

    let inside = image
        .iter()
        .zip(bx)
        .all(|(img, b)| b.contains_in_interior(img));
    if inside {
        Ok(Certificate::Certified { image })
    } else {
        Ok(Certificate::NotCertified { reason: "operator image escapes the box".into() })
    }
}

/// Exact determinant of the Jacobian of a square system at a point; used
/// as the simple-zero precondition check.
pub fn jacobian_det_at(f: &[Polynomial], point: &[BigRational]) -> Result<BigRational, PolyError> {
    let n = point.len();
    if f.len() != n {
        return Err(PolyError::DimensionMismatch { expected: n, got: f.len() });
    }
    let mut m = RatMatrix::zeros(n, n);
    for (i, p) in f.iter().enumerate() {
        for v in 0..n {
            m.set(i, v, p.partial(v).eval(point)?);
        }
    }
    Ok(det(&m))
}

fn det(m: &RatMatrix) -> BigRational {
    let n = m.rows();
    let mut a = m.clone();
    let mut result = BigRational::from_integer(1.into());
    for col in 0..n {
        let pivot = match (col..n).find(|&r| !a.get(r, col).is_zero()) {
            Some(p) => p,
            None => return BigRational::zero(),
        };
        if pivot != col {
            for j in 0..n {
                let tmp = a.get(pivot, j).clone();
                a.set(pivot, j, a.get(col, j).clone());
                a.set(col, j, tmp);
            }
            result = -result;
        }
        let p = a.get(col, col).clone();
        result *= p.clone();
        for r in col + 1..n {
            if a.get(r, col).is_zero() {
                continue;
            }
            let factor = a.get(r, col) / &p;
            for j in col..n {
                let v = a.get(r, j) - &factor * a.get(col, j);
                a.set(r, j, v);
            }
        }
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn int(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn certifies_a_clean_univariate_root() {
        // x^2 - 2 on [1.3, 1.6]
        let f = [Polynomial::var(1, 0).pow(2).sub(&Polynomial::constant_int(1, 2))];
        let bx = [Interval::new(rat(13, 10), rat(16, 10)).unwrap()];
        let c = krawczyk_certify(&f, &bx).unwrap();
        assert!(c.is_certified(), "{c:?}");
    }

    #[test]
    fn rejects_a_rootless_box() {
        let f = [Polynomial::var(1, 0).pow(2).sub(&Polynomial::constant_int(1, 2))];
        let bx = [Interval::new(rat(19, 10), rat(22, 10)).unwrap()];
        let c = krawczyk_certify(&f, &bx).unwrap();
        assert!(!c.is_certified());
    }

    #[test]
    fn certifies_circle_line_intersection() {
        let circle = Polynomial::var(2, 0)
            .pow(2)
            .add(&Polynomial::var(2, 1).pow(2))
            .sub(&Polynomial::constant_int(2, 1));
        let line = Polynomial::var(2, 0).sub(&Polynomial::var(2, 1));
        // box around (sqrt(2)/2, sqrt(2)/2)
        let lo = rat(6, 10);
        let hi = rat(8, 10);
        let bx = [Interval::new(lo.clone(), hi.clone()).unwrap(), Interval::new(lo, hi).unwrap()];
        let c = krawczyk_certify(&[circle, line], &bx).unwrap();
        assert!(c.is_certified(), "{c:?}");
    }

    #[test]
    fn singular_midpoint_jacobian_is_not_certified() {
        // double root at 0: derivative vanishes at the midpoint
        let f = [Polynomial::var(1, 0).pow(2)];
        let bx = [Interval::new(rat(-1, 10), rat(1, 10)).unwrap()];
        let c = krawczyk_certify(&f, &bx).unwrap();
        assert!(matches!(c, Certificate::NotCertified { .. }));
    }

    #[test]
    fn jacobian_determinant_matches_hand_value() {
        let circle = Polynomial::var(2, 0)
            .pow(2)
            .add(&Polynomial::var(2, 1).pow(2))
            .sub(&Polynomial::constant_int(2, 1));
        let line = Polynomial::var(2, 0).sub(&Polynomial::var(2, 1));
        // J = [[2x, 2y], [1, -1]], det = -2x - 2y
        let d = jacobian_det_at(&[circle, line], &[int(1), int(2)]).unwrap();
        assert_eq!(d, int(-6));
    }
}
