//! Jacobian matrices of polynomial tuples and their minors.
//!
//! Variable indices are 0-based throughout: for a tuple of `k - p`
//! polynomials in `k` variables and a cutoff `q <= p`, the matrix rows are
//! indexed by the variables `q..k` and the columns by the polynomials in
//! order. Entry `(i, j)` is the partial derivative of the `j`-th
//! polynomial with respect to variable `i`.

use super::{PolyError, Polynomial};

#[derive(Debug, Clone)]
pub struct JacMatrix {
    k: usize,
    p: usize,
    q: usize,
    /// entries[r][c] = d F_c / d X_{q+r}
    entries: Vec<Vec<Polynomial>>,
}

impl JacMatrix {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// Row variable indices, `q..k`.
    pub fn row_vars(&self) -> std::ops::Range<usize> {
        self.q..self.k
    }

    pub fn num_cols(&self) -> usize {
        self.k - self.p
    }

    pub fn entry(&self, var: usize, col: usize) -> &Polynomial {
        assert!(var >= self.q && var < self.k, "row variable out of range");
        &self.entries[var - self.q][col]
    }

    /// Extracts the square submatrix on the given row variables and returns
    /// its exact determinant. `rows` must be `k - p` distinct variable
    /// indices inside `q..k`.
    pub fn minor(&self, rows: &[usize]) -> Result<Polynomial, PolyError> {
        let m = self.num_cols();
        if rows.len() != m {
            return Err(PolyError::NonSquareExtraction { rows: rows.len(), cols: m });
        }
        let mut seen = std::collections::BTreeSet::new();
        for &r in rows {
            if r < self.q || r >= self.k || !seen.insert(r) {
                return Err(PolyError::BadRowSet);
            }
        }
        let sub: Vec<&[Polynomial]> =
            rows.iter().map(|&r| self.entries[r - self.q].as_slice()).collect();
        Ok(det(&sub, &(0..m).collect::<Vec<_>>()))
    }
}

/// Jacobian of the tuple `f` (with `k - p` entries, all in `k` variables)
/// with rows restricted to the variables `q..k`.
pub fn jac(f: &[Polynomial], p: usize, q: usize) -> Result<JacMatrix, PolyError> {
    let k = f.first().map(|g| g.nvars()).unwrap_or(0);
    if f.iter().any(|g| g.nvars() != k) {
        return Err(PolyError::DimensionMismatch { expected: k, got: 0 });
    }
    if f.len() + p != k || q > p || p > k {
        return Err(PolyError::IndexOutOfRange { index: p, nvars: k });
    }
    let entries = (q..k)
        .map(|var| f.iter().map(|g| g.partial(var)).collect())
        .collect();
    Ok(JacMatrix { k, p, q, entries })
}

/// Laplace expansion along the first remaining row; fine for the small
/// matrices that occur here.
fn det(rows: &[&[Polynomial]], cols: &[usize]) -> Polynomial {
    let nvars = rows[0][0].nvars();
    if cols.len() == 1 {
        return rows[0][cols[0]].clone();
    }
    let mut acc = Polynomial::zero(nvars);
    for (i, &c) in cols.iter().enumerate() {
        let entry = &rows[0][c];
        if entry.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let cofactor = det(&rows[1..], &rest);
        let term = entry.mul(&cofactor);
        acc = if i % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}
