//! Dense exact-rational matrices, just large enough for the symmetric-space
//! computations (2n x 2n with n <= 2 at desk scale, but nothing here
//! assumes a bound).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::qring::LaurentPolyQ;
use crate::{Error, Result};

/// A square or rectangular matrix over the exact rationals, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MatQ {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl MatQ {
    pub fn new(rows: usize, cols: usize, data: Vec<BigRational>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Domain(format!(
                "matrix data length {} does not match {rows}x{cols}",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_i64(rows: usize, cols: usize, data: &[i64]) -> Result<Self> {
        Self::new(
            rows,
            cols,
            data.iter()
                .map(|&v| BigRational::from_integer(BigInt::from(v)))
                .collect(),
        )
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigRational::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Domain("matrix dimension mismatch".into()));
        }
        let mut out = Self::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let prod = &self[(i, k)] * &rhs[(k, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        Ok(out)
    }

    /// Gaussian elimination with exact pivoting.
    pub fn det(&self) -> Result<BigRational> {
        if !self.is_square() {
            return Err(Error::Domain("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut det = BigRational::one();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !m[(r, col)].is_zero());
            let Some(pr) = pivot else {
                return Ok(BigRational::zero());
            };
            if pr != col {
                for j in 0..n {
                    let tmp = m[(pr, j)].clone();
                    m[(pr, j)] = m[(col, j)].clone();
                    m[(col, j)] = tmp;
                }
                det = -det;
            }
            let p = m[(col, col)].clone();
            det *= &p;
            for r in (col + 1)..n {
                if m[(r, col)].is_zero() {
                    continue;
                }
                let factor = &m[(r, col)] / &p;
                for j in col..n {
                    let sub = &factor * &m[(col, j)];
                    m[(r, j)] -= sub;
                }
            }
        }
        Ok(det)
    }

    /// Exact inverse; singular matrices are a domain error.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Domain("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !m[(r, col)].is_zero());
            let Some(pr) = pivot else {
                return Err(Error::Domain("singular matrix".into()));
            };
            if pr != col {
                for j in 0..n {
                    let tmp = m[(pr, j)].clone();
                    m[(pr, j)] = m[(col, j)].clone();
                    m[(col, j)] = tmp;
                    let tmp = inv[(pr, j)].clone();
                    inv[(pr, j)] = inv[(col, j)].clone();
                    inv[(col, j)] = tmp;
                }
            }
            let p = m[(col, col)].clone().recip();
            for j in 0..n {
                m[(col, j)] *= &p;
                inv[(col, j)] *= &p;
            }
            for r in 0..n {
                if r == col || m[(r, col)].is_zero() {
                    continue;
                }
                let factor = m[(r, col)].clone();
                for j in 0..n {
                    let a = &factor * &m[(col, j)];
                    m[(r, j)] -= a;
                    let b = &factor * &inv[(col, j)];
                    inv[(r, j)] -= b;
                }
            }
        }
        Ok(inv)
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut rank = 0;
        for col in 0..cols {
            if rank == rows {
                break;
            }
            let pivot = (rank..rows).find(|&r| !m[(r, col)].is_zero());
            let Some(pr) = pivot else { continue };
            if pr != rank {
                for j in 0..cols {
                    let tmp = m[(pr, j)].clone();
                    m[(pr, j)] = m[(rank, j)].clone();
                    m[(rank, j)] = tmp;
                }
            }
            let p = m[(rank, col)].clone();
            for r in (rank + 1)..rows {
                if m[(r, col)].is_zero() {
                    continue;
                }
                let factor = &m[(r, col)] / &p;
                for j in col..cols {
                    let sub = &factor * &m[(rank, j)];
                    m[(r, j)] -= sub;
                }
            }
            rank += 1;
        }
        rank
    }

    /// Extracts the block with the given row/column ranges.
    pub fn block(&self, row0: usize, col0: usize, rows: usize, cols: usize) -> Self {
        let mut out = Self::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out[(i, j)] = self[(row0 + i, col0 + j)].clone();
            }
        }
        out
    }

    /// Assembles `diag(a, d)` from two square blocks.
    pub fn block_diag(a: &Self, d: &Self) -> Self {
        let n = a.rows + d.rows;
        let mut out = Self::zero(n, n);
        for i in 0..a.rows {
            for j in 0..a.cols {
                out[(i, j)] = a[(i, j)].clone();
            }
        }
        for i in 0..d.rows {
            for j in 0..d.cols {
                out[(a.rows + i, a.cols + j)] = d[(i, j)].clone();
            }
        }
        out
    }

    /// Characteristic polynomial `det(tI - M)` by the Faddeev–LeVerrier
    /// recurrence; returned as a polynomial in the crate's single formal
    /// variable (standing in for `t`), monic of degree `n`.
    pub fn charpoly(&self) -> Result<LaurentPolyQ> {
        if !self.is_square() {
            return Err(Error::Domain("characteristic polynomial needs a square matrix".into()));
        }
        let n = self.rows;
        let mut coeffs = vec![BigRational::zero(); n + 1];
        coeffs[n] = BigRational::one();
        let mut m = Self::zero(n, n);
        for k in 1..=n {
            // M_k = A * (M_{k-1} + c_{n-k+1} I)
            let mut shifted = m.clone();
            for i in 0..n {
                shifted[(i, i)] += &coeffs[n - k + 1];
            }
            m = self.mul(&shifted)?;
            let trace = (0..n).fold(BigRational::zero(), |acc, i| acc + &m[(i, i)]);
            coeffs[n - k] = -(trace / BigRational::from_integer(BigInt::from(k as i64)));
        }
        let mut out = LaurentPolyQ::zero();
        for (e, c) in coeffs.into_iter().enumerate() {
            out = &out + &LaurentPolyQ::monomial(e as i64, c);
        }
        Ok(out)
    }
}

impl std::ops::Index<(usize, usize)> for MatQ {
    type Output = BigRational;
    fn index(&self, (i, j): (usize, usize)) -> &BigRational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for MatQ {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigRational {
        &mut self.data[i * self.cols + j]
    }
}
