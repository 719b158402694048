//! Exact arithmetic over prime fields GF(p) and the dense linear algebra
//! (rank, solve) the code constructions and verifiers are built on.
//!
//! The modulus travels with every element so that codes over different
//! primes can coexist in one process. All arithmetic is exact; there is no
//! floating point anywhere in this module.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("mismatched moduli: {0} vs {1}")]
    MismatchedModulus(u64, u64),
    #[error("division by zero in GF({0})")]
    DivisionByZero(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("matrix is singular over GF({0})")]
    SingularMatrix(u64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// Trial-division primality test. Moduli in this crate are small, so this
/// is plenty.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p.is_multiple_of(2) {
        return p == 2;
    }
    let mut d = 3u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Bare modular arithmetic for a fixed prime. Values are kept in `[0, p)`.
///
/// The modulus is capped at `2^31` so products always fit in `u64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        assert!(p < (1 << 31), "modulus too large for exact u64 arithmetic");
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn reduce(&self, a: u64) -> u64 {
        a % self.p
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        (a * b) % self.p
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via Fermat's little theorem.
    pub fn inv(&self, a: u64) -> Result<u64, FieldError> {
        if a.is_multiple_of(self.p) {
            return Err(FieldError::DivisionByZero(self.p));
        }
        Ok(self.pow(a, self.p - 2))
    }

    pub fn div(&self, a: u64, b: u64) -> Result<u64, FieldError> {
        Ok(self.mul(a % self.p, self.inv(b)?))
    }
}

/// A single field element together with its modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldElement {
    value: u64,
    modulus: u64,
}

/// The four scalar operations exposed on [`FieldElement`] pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl FieldElement {
    pub fn new(value: u64, modulus: u64) -> Result<Self, FieldError> {
        let field = PrimeField::new(modulus)?;
        Ok(FieldElement {
            value: field.reduce(value),
            modulus,
        })
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    fn field(&self) -> PrimeField {
        PrimeField { p: self.modulus }
    }

    pub fn apply(self, other: FieldElement, op: FieldOp) -> Result<FieldElement, FieldError> {
        if self.modulus != other.modulus {
            return Err(FieldError::MismatchedModulus(self.modulus, other.modulus));
        }
        let f = self.field();
        let value = match op {
            FieldOp::Add => f.add(self.value, other.value),
            FieldOp::Sub => f.sub(self.value, other.value),
            FieldOp::Mul => f.mul(self.value, other.value),
            FieldOp::Div => f.div(self.value, other.value)?,
        };
        Ok(FieldElement {
            value,
            modulus: self.modulus,
        })
    }

    pub fn inv(self) -> Result<FieldElement, FieldError> {
        Ok(FieldElement {
            value: self.field().inv(self.value)?,
            modulus: self.modulus,
        })
    }
}

/// Scalar field operation on two elements sharing a modulus.
pub fn field_ops(
    a: FieldElement,
    b: FieldElement,
    op: FieldOp,
) -> Result<FieldElement, FieldError> {
    a.apply(b, op)
}

/// Dense row-major matrix over GF(p).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    modulus: u64,
    entries: Vec<u64>,
}

impl Matrix {
    pub fn new(
        rows: usize,
        cols: usize,
        modulus: u64,
        entries: Vec<u64>,
    ) -> Result<Self, FieldError> {
        let field = PrimeField::new(modulus)?;
        if entries.len() != rows * cols {
            return Err(FieldError::DimensionMismatch(format!(
                "expected {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        let entries = entries.into_iter().map(|e| field.reduce(e)).collect();
        Ok(Matrix {
            rows,
            cols,
            modulus,
            entries,
        })
    }

    pub fn from_rows(modulus: u64, rows: &[Vec<u64>]) -> Result<Self, FieldError> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(FieldError::DimensionMismatch("ragged rows".into()));
        }
        Matrix::new(nrows, ncols, modulus, rows.concat())
    }

    pub fn zero(rows: usize, cols: usize, modulus: u64) -> Result<Self, FieldError> {
        Matrix::new(rows, cols, modulus, vec![0; rows * cols])
    }

    pub fn identity(n: usize, modulus: u64) -> Result<Self, FieldError> {
        let mut m = Matrix::zero(n, n, modulus)?;
        for i in 0..n {
            m.set(i, i, 1);
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.entries[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.entries[r * self.cols + c] = v % self.modulus;
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zero(self.cols, self.rows, self.modulus).expect("valid modulus");
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    /// Matrix built from a subset of this matrix's columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let mut out = Matrix::zero(self.rows, cols.len(), self.modulus).expect("valid modulus");
        for (j, &c) in cols.iter().enumerate() {
            for r in 0..self.rows {
                out.set(r, j, self.get(r, c));
            }
        }
        out
    }

    /// Row-vector times matrix: `v * self`, where `v` has `rows` entries.
    pub fn left_mul_vec(&self, v: &[u64]) -> Result<Vec<u64>, FieldError> {
        if v.len() != self.rows {
            return Err(FieldError::DimensionMismatch(format!(
                "vector length {} vs {} rows",
                v.len(),
                self.rows
            )));
        }
        let f = PrimeField { p: self.modulus };
        let mut out = vec![0u64; self.cols];
        for (i, &vi) in v.iter().enumerate() {
            if vi == 0 {
                continue;
            }
            let row = self.row(i);
            for (o, &e) in out.iter_mut().zip(row.iter()) {
                *o = f.add(*o, f.mul(vi, e));
            }
        }
        Ok(out)
    }

    /// Rank over GF(p) by Gaussian elimination.
    pub fn rank(&self) -> usize {
        let f = PrimeField { p: self.modulus };
        let mut m = self.entries.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut rank = 0usize;
        for col in 0..cols {
            // find a pivot at or below `rank`
            let pivot = (rank..rows).find(|&r| m[r * cols + col] != 0);
            let Some(pr) = pivot else { continue };
            m.swap_chunks(pr, rank, cols);
            let inv = f.inv(m[rank * cols + col]).expect("pivot nonzero");
            for c in col..cols {
                m[rank * cols + c] = f.mul(m[rank * cols + c], inv);
            }
            for r in 0..rows {
                if r != rank && m[r * cols + col] != 0 {
                    let factor = m[r * cols + col];
                    for c in col..cols {
                        let sub = f.mul(factor, m[rank * cols + c]);
                        m[r * cols + c] = f.sub(m[r * cols + c], sub);
                    }
                }
            }
            rank += 1;
            if rank == rows {
                break;
            }
        }
        rank
    }

    /// Solve `self * x = b` for square full-rank `self`.
    pub fn solve(&self, b: &[u64]) -> Result<Vec<u64>, FieldError> {
        if self.rows != self.cols {
            return Err(FieldError::DimensionMismatch(format!(
                "solve needs a square matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        if b.len() != self.rows {
            return Err(FieldError::DimensionMismatch(format!(
                "rhs length {} vs {} rows",
                b.len(),
                self.rows
            )));
        }
        let f = PrimeField { p: self.modulus };
        let n = self.rows;
        let w = n + 1;
        let mut m = vec![0u64; n * w];
        for r in 0..n {
            m[r * w..r * w + n].copy_from_slice(self.row(r));
            m[r * w + n] = b[r] % self.modulus;
        }
        for col in 0..n {
            let pivot = (col..n).find(|&r| m[r * w + col] != 0);
            let Some(pr) = pivot else {
                return Err(FieldError::SingularMatrix(self.modulus));
            };
            m.swap_chunks(pr, col, w);
            let inv = f.inv(m[col * w + col]).expect("pivot nonzero");
            for c in col..w {
                m[col * w + c] = f.mul(m[col * w + c], inv);
            }
            for r in 0..n {
                if r != col && m[r * w + col] != 0 {
                    let factor = m[r * w + col];
                    for c in col..w {
                        let sub = f.mul(factor, m[col * w + c]);
                        m[r * w + c] = f.sub(m[r * w + c], sub);
                    }
                }
            }
        }
        Ok((0..n).map(|r| m[r * w + n]).collect())
    }

    /// For a general (possibly rectangular, possibly rank-deficient) system,
    /// find one solution of `self * x = b` for each right-hand side, or
    /// `None` where the system is inconsistent. Free variables are set to
    /// zero. One elimination pass serves all right-hand sides.
    pub fn solve_columns(&self, rhs: &[Vec<u64>]) -> Vec<Option<Vec<u64>>> {
        let f = PrimeField { p: self.modulus };
        let (nrows, ncols) = (self.rows, self.cols);
        let k = rhs.len();
        let w = ncols + k;
        let mut m = vec![0u64; nrows * w];
        for r in 0..nrows {
            m[r * w..r * w + ncols].copy_from_slice(self.row(r));
            for (j, b) in rhs.iter().enumerate() {
                assert_eq!(b.len(), nrows, "rhs length must match row count");
                m[r * w + ncols + j] = b[r] % self.modulus;
            }
        }
        let mut pivot_col_of_row = Vec::new();
        let mut rank = 0usize;
        for col in 0..ncols {
            let Some(pr) = (rank..nrows).find(|&r| m[r * w + col] != 0) else {
                continue;
            };
            m.swap_chunks(pr, rank, w);
            let inv = f.inv(m[rank * w + col]).expect("pivot nonzero");
            for c in col..w {
                m[rank * w + c] = f.mul(m[rank * w + c], inv);
            }
            for r in 0..nrows {
                if r != rank && m[r * w + col] != 0 {
                    let factor = m[r * w + col];
                    for c in col..w {
                        let sub = f.mul(factor, m[rank * w + c]);
                        m[r * w + c] = f.sub(m[r * w + c], sub);
                    }
                }
            }
            pivot_col_of_row.push(col);
            rank += 1;
            if rank == nrows {
                break;
            }
        }
        (0..k)
            .map(|j| {
                // inconsistent if a zero row has a nonzero entry
                for r in rank..nrows {
                    if m[r * w + ncols + j] != 0 {
                        return None;
                    }
                }
                let mut x = vec![0u64; ncols];
                for (r, &col) in pivot_col_of_row.iter().enumerate() {
                    x[col] = m[r * w + ncols + j];
                }
                Some(x)
            })
            .collect()
    }
}

/// Rank of an ad-hoc set of rows over GF(p), without building a `Matrix`.
pub fn rank_of_rows(p: u64, rows: &[Vec<u64>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    Matrix::from_rows(p, rows).expect("consistent rows").rank()
}

trait SwapChunks {
    fn swap_chunks(&mut self, a: usize, b: usize, width: usize);
}

impl SwapChunks for Vec<u64> {
    fn swap_chunks(&mut self, a: usize, b: usize, width: usize) {
        if a == b {
            return;
        }
        let (lo, hi) = (a.min(b), a.max(b));
        let (left, right) = self.split_at_mut(hi * width);
        left[lo * width..(lo + 1) * width].swap_with_slice(&mut right[..width]);
    }
}
