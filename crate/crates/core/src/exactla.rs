//! Dense exact linear algebra over the rationals.
//!
//! Ranks and determinants run fraction-free (Bareiss) on a
//! denominator-cleared integer copy, which keeps intermediate entries small;
//! kernels come from a rational Gauss-Jordan reduction. All results are
//! exact, and none of them depends on the pivoting order.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational number; always stored in lowest terms with a
/// positive denominator (guaranteed by `num-rational`).
pub type Rational = BigRational;

/// Shorthand for building a rational from machine integers.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinAlgError {
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("expected a symmetric matrix, asymmetric at ({row},{col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("dimension mismatch: {left_rows}x{left_cols} vs {right_rows}x{right_cols}")]
    DimensionMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },
    #[error("row {row} has {got} entries, expected {expected}")]
    RaggedRows { row: usize, got: usize, expected: usize },
}

/// Outcome of Sylvester's criterion on a symmetric matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Definiteness {
    PositiveDefinite,
    NegativeDefinite,
    Indefinite,
    Degenerate,
}

/// Dense row-major matrix of rationals. Immutable in spirit: every operation
/// returns a fresh matrix, so values can be shared freely across threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        RationalMatrix { rows, cols, entries }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, LinAlgError> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != ncols {
                return Err(LinAlgError::RaggedRows {
                    row: i,
                    got: r.len(),
                    expected: ncols,
                });
            }
        }
        Ok(RationalMatrix {
            rows: nrows,
            cols: ncols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn neg(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |r, c| -self.get(r, c).clone())
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::from_fn(self.rows, self.cols, |r, c| self.get(r, c) * s)
    }

    pub fn add(&self, other: &Self) -> Result<Self, LinAlgError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(self.mismatch(other));
        }
        Ok(Self::from_fn(self.rows, self.cols, |r, c| {
            self.get(r, c) + other.get(r, c)
        }))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, LinAlgError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(self.mismatch(other));
        }
        Ok(Self::from_fn(self.rows, self.cols, |r, c| {
            self.get(r, c) - other.get(r, c)
        }))
    }

    pub fn mul(&self, other: &Self) -> Result<Self, LinAlgError> {
        if self.cols != other.rows {
            return Err(self.mismatch(other));
        }
        Ok(Self::from_fn(self.rows, other.cols, |r, c| {
            let mut acc = Rational::zero();
            for k in 0..self.cols {
                let a = self.get(r, k);
                if !a.is_zero() {
                    acc += a * other.get(k, c);
                }
            }
            acc
        }))
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>, LinAlgError> {
        if v.len() != self.cols {
            return Err(LinAlgError::DimensionMismatch {
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: v.len(),
                right_cols: 1,
            });
        }
        Ok((0..self.rows)
            .map(|r| {
                let mut acc = Rational::zero();
                for c in 0..self.cols {
                    let a = self.get(r, c);
                    if !a.is_zero() {
                        acc += a * &v[c];
                    }
                }
                acc
            })
            .collect())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetry_defect().is_none()
    }

    fn symmetry_defect(&self) -> Option<(usize, usize)> {
        if self.rows != self.cols {
            return Some((0, 0));
        }
        for r in 0..self.rows {
            for c in (r + 1)..self.cols {
                if self.get(r, c) != self.get(c, r) {
                    return Some((r, c));
                }
            }
        }
        None
    }

    fn mismatch(&self, other: &Self) -> LinAlgError {
        LinAlgError::DimensionMismatch {
            left_rows: self.rows,
            left_cols: self.cols,
            right_rows: other.rows,
            right_cols: other.cols,
        }
    }

    /// Clears denominators row by row, returning an integer matrix with the
    /// same rank and kernel, together with the per-row scaling factors.
    fn to_integer_rows(&self) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
        let mut out = Vec::with_capacity(self.rows);
        let mut factors = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            let mut lcm = BigInt::one();
            for c in 0..self.cols {
                lcm = lcm.lcm(self.get(r, c).denom());
            }
            let row = (0..self.cols)
                .map(|c| {
                    let e = self.get(r, c);
                    e.numer() * (&lcm / e.denom())
                })
                .collect();
            out.push(row);
            factors.push(lcm);
        }
        (out, factors)
    }

    /// Rank over the rationals, via fraction-free (Bareiss) elimination.
    pub fn rank(&self) -> usize {
        let (mut m, _) = self.to_integer_rows();
        bareiss_rank(&mut m, self.cols)
    }

    /// Exact determinant. Errors on non-square input.
    pub fn determinant(&self) -> Result<Rational, LinAlgError> {
        if self.rows != self.cols {
            return Err(LinAlgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        if self.rows == 0 {
            return Ok(Rational::one());
        }
        let (mut m, factors) = self.to_integer_rows();
        let n = self.rows;
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&p| !m[p][k].is_zero()) {
                    Some(p) => {
                        m.swap(k, p);
                        sign = -sign;
                    }
                    None => return Ok(Rational::zero()),
                }
            }
            for i in (k + 1)..n {
                for j in (k + 1)..n {
                    let num = &m[k][k] * &m[i][j] - &m[i][k] * &m[k][j];
                    m[i][j] = num / &prev;
                }
                m[i][k] = BigInt::zero();
            }
            prev = m[k][k].clone();
        }
        let mut denom = BigInt::one();
        for f in factors {
            denom *= f;
        }
        Ok(Rational::new(sign * m[n - 1][n - 1].clone(), denom))
    }

    /// Basis of the right kernel: exactly `cols - rank` vectors `v` with
    /// `self * v = 0`, from the reduced row echelon form (free variables set
    /// to 1 one at a time, in column order).
    pub fn kernel_basis(&self) -> Vec<Vec<Rational>> {
        let mut m: Vec<Vec<Rational>> = (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c).clone()).collect())
            .collect();
        let mut pivots: Vec<usize> = Vec::new();
        let mut row = 0usize;
        for col in 0..self.cols {
            let Some(p) = (row..self.rows).find(|&p| !m[p][col].is_zero()) else {
                continue;
            };
            m.swap(row, p);
            let inv = m[row][col].recip();
            for c in col..self.cols {
                let v = &m[row][c] * &inv;
                m[row][c] = v;
            }
            for r in 0..self.rows {
                if r != row && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    for c in col..self.cols {
                        let v = &m[r][c] - &f * &m[row][c];
                        m[r][c] = v;
                    }
                }
            }
            pivots.push(col);
            row += 1;
            if row == self.rows {
                break;
            }
        }
        let mut basis = Vec::new();
        let mut piv_iter = pivots.iter().copied().peekable();
        let free: Vec<usize> = (0..self.cols)
            .filter(|c| {
                if piv_iter.peek() == Some(c) {
                    piv_iter.next();
                    false
                } else {
                    true
                }
            })
            .collect();
        for f in free {
            let mut v = vec![Rational::zero(); self.cols];
            v[f] = Rational::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m[r][f].clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Sylvester's criterion on an exactly symmetric matrix, classifying the
    /// quadratic form by its leading principal minors.
    pub fn is_definite(&self) -> Result<Definiteness, LinAlgError> {
        if self.rows != self.cols {
            return Err(LinAlgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        if let Some((r, c)) = self.symmetry_defect() {
            return Err(LinAlgError::NotSymmetric { row: r, col: c });
        }
        let n = self.rows;
        let minors: Vec<Rational> = (1..=n)
            .map(|k| {
                Self::from_fn(k, k, |r, c| self.get(r, c).clone())
                    .determinant()
                    .expect("square by construction")
            })
            .collect();
        if let Some(last) = minors.last() {
            if last.is_zero() {
                return Ok(Definiteness::Degenerate);
            }
        }
        if minors.iter().all(Signed::is_positive) {
            return Ok(Definiteness::PositiveDefinite);
        }
        let alternating = minors
            .iter()
            .enumerate()
            .all(|(i, d)| if i % 2 == 0 { d.is_negative() } else { d.is_positive() });
        if alternating {
            return Ok(Definiteness::NegativeDefinite);
        }
        Ok(Definiteness::Indefinite)
    }
}

fn bareiss_rank(m: &mut [Vec<BigInt>], cols: usize) -> usize {
    let rows = m.len();
    let mut r = 0usize;
    let mut prev = BigInt::one();
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&p| !m[p][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in (r + 1)..rows {
            for j in (c + 1)..cols {
                let num = &m[r][c] * &m[i][j] - &m[i][c] * &m[r][j];
                m[i][j] = num / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        r += 1;
    }
    r
}
