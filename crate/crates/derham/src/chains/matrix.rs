//! Dense matrices over the exact rationals.
//!
//! Rank is computed by fraction-free Bareiss elimination on a row-wise
//! integerized copy (row scaling by the coefficient denominators' lcm does
//! not change rank, and the Bareiss recurrence keeps every intermediate an
//! exact integer).  Kernels, solving and echelon forms use a rational
//! Gauss–Jordan with deterministic pivoting: the first nonzero entry in
//! column order, so identical inputs always produce identical bases.
//!
//! Zero-dimensional shapes (`0×n`, `n×0`) are first-class citizens: cochain
//! complexes routinely start or end at the zero space.

use crate::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::fmt;

/// A `rows × cols` matrix of exact rationals, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

/// Reduced row-echelon form together with its pivot columns.
#[derive(Debug, Clone)]
pub struct Rref {
    pub matrix: RationalMatrix,
    pub pivots: Vec<usize>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        RationalMatrix { rows, cols, data }
    }

    /// Builds from row vectors; all rows must share one length.  An empty
    /// row list gives a `0×0` matrix (callers with a known width should use
    /// [`RationalMatrix::zeros`]).
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Option<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return None;
        }
        Some(RationalMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Integer-entry convenience constructor, row-major.
    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count mismatch");
        Self::from_fn(rows, cols, |i, j| {
            Rational::from_integer(BigInt::from(entries[i * cols + j]))
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Matrix product; panics on a shape mismatch (shapes are an internal
    /// invariant — user-supplied shapes are validated at construction).
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(
            self.cols, other.rows,
            "shape mismatch: {}×{} · {}×{}",
            self.rows, self.cols, other.rows, other.cols
        );
        Self::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = Rational::zero();
            for k in 0..self.cols {
                if !self[(i, k)].is_zero() && !other[(k, j)].is_zero() {
                    acc += &self[(i, k)] * &other[(k, j)];
                }
            }
            acc
        })
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] + &other[(i, j)])
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] - &other[(i, j)])
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] * c)
    }

    pub fn neg(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| -self[(i, j)].clone())
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "row count mismatch in hstack");
        Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        })
    }

    /// Block-diagonal assembly: `self` top-left, `other` bottom-right,
    /// zeros elsewhere.
    pub fn block_diag(&self, other: &Self) -> Self {
        Self::from_fn(self.rows + other.rows, self.cols + other.cols, |i, j| {
            if i < self.rows && j < self.cols {
                self[(i, j)].clone()
            } else if i >= self.rows && j >= self.cols {
                other[(i - self.rows, j - self.cols)].clone()
            } else {
                Rational::zero()
            }
        })
    }

    /// Vertical concatenation.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "column count mismatch in vstack");
        Self::from_fn(self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows {
                self[(i, j)].clone()
            } else {
                other[(i - self.rows, j)].clone()
            }
        })
    }

    /// Columns `range` as a new matrix.
    pub fn columns(&self, range: std::ops::Range<usize>) -> Self {
        Self::from_fn(self.rows, range.len(), |i, j| {
            self[(i, range.start + j)].clone()
        })
    }

    /// Rank by fraction-free Bareiss elimination.
    pub fn rank(&self) -> usize {
        // Row-wise integerization: multiply each row by the lcm of its
        // coefficient denominators.
        let mut m: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|i| {
                let mut l = BigInt::one();
                for j in 0..self.cols {
                    l = l.lcm(self[(i, j)].denom());
                }
                (0..self.cols)
                    .map(|j| {
                        let v = &self[(i, j)];
                        v.numer() * (&l / v.denom())
                    })
                    .collect()
            })
            .collect();

        let mut rank = 0usize;
        let mut prev = BigInt::one();
        for c in 0..self.cols {
            if rank == self.rows {
                break;
            }
            // Deterministic pivoting: first nonzero entry down the column.
            let Some(p) = (rank..self.rows).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(rank, p);
            for i in rank + 1..self.rows {
                for j in c + 1..self.cols {
                    // Sylvester's identity guarantees exact divisibility.
                    let t = &m[rank][c] * &m[i][j] - &m[i][c] * &m[rank][j];
                    m[i][j] = t / &prev;
                }
                m[i][c] = BigInt::zero();
            }
            prev = m[rank][c].clone();
            rank += 1;
        }
        rank
    }

    /// Reduced row-echelon form with deterministic pivoting.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = {
                let piv = m[(r, c)].clone();
                piv.recip()
            };
            for j in c..m.cols {
                let v = m[(r, j)].clone() * &inv;
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let factor = m[(i, c)].clone();
                for j in c..m.cols {
                    let v = m[(i, j)].clone() - &factor * &m[(r, j)];
                    m[(i, j)] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { matrix: m, pivots }
    }

    /// Basis of the right kernel as matrix columns, one per free column of
    /// the echelon form, in ascending free-column order.
    pub fn kernel_basis(&self) -> RationalMatrix {
        let Rref { matrix: r, pivots } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = RationalMatrix::zeros(self.cols, free.len());
        for (k, &f) in free.iter().enumerate() {
            out[(f, k)] = Rational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                out[(pc, k)] = -r.matrix_entry(row, f);
            }
        }
        out
    }

    fn matrix_entry(&self, i: usize, j: usize) -> Rational {
        self[(i, j)].clone()
    }

    /// Any particular solution `X` of `self · X = rhs` (free variables set
    /// to zero), or `None` when the system is inconsistent.
    pub fn solve(&self, rhs: &RationalMatrix) -> Option<RationalMatrix> {
        assert_eq!(self.rows, rhs.rows, "right-hand side height mismatch");
        let aug = self.hstack(rhs);
        // Pivot only within the coefficient block.
        let mut m = aug;
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for c in 0..self.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].clone().recip();
            for j in c..m.cols {
                let v = m[(r, j)].clone() * &inv;
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let factor = m[(i, c)].clone();
                for j in c..m.cols {
                    let v = m[(i, j)].clone() - &factor * &m[(r, j)];
                    m[(i, j)] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        // Rows with no pivot must have vanished entirely.
        for i in r..m.rows {
            for j in self.cols..m.cols {
                if !m[(i, j)].is_zero() {
                    return None;
                }
            }
        }
        let mut x = RationalMatrix::zeros(self.cols, rhs.cols);
        for (row, &pc) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x[(pc, j)] = m[(row, self.cols + j)].clone();
            }
        }
        Some(x)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Entries as `f64` (for the numerical-rank bridge in `periods`).
    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| crate::expr::rational_to_f64(&self[(i, j)]))
                    .collect()
            })
            .collect()
    }
}

impl std::ops::Index<(usize, usize)> for RationalMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        debug_assert!(i < self.rows && j < self.cols, "index out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RationalMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        debug_assert!(i < self.rows && j < self.cols, "index out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rows == 0 || self.cols == 0 {
            return write!(f, "[{}×{}]", self.rows, self.cols);
        }
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}
