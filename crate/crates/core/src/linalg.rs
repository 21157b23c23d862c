//! Dense matrices over exact rationals and fraction-free rank computation.
//!
//! Rank is computed by clearing denominators row by row (rank preserving) and
//! then running integer-preserving Gaussian elimination in the style of
//! Bareiss: every elimination step divides by the previous pivot, which is an
//! exact integer division, so intermediate entries stay minors of the input
//! instead of exploding. Pivots are chosen as the first nonzero entry in the
//! current column, scanning down.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::ratio::Rat;

/// Row-major dense matrix over `Rat`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    /// Builds from row vectors. Panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Builds from column vectors. Panics if the columns are ragged.
    pub fn from_cols(cols: &[Vec<Rat>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        assert!(cols.iter().all(|col| col.len() == r), "ragged columns");
        let mut m = Matrix::zero(r, c);
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rat {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rat) {
        self.data[r * self.cols + c] = v;
    }

    pub fn column(&self, c: usize) -> Vec<Rat> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    /// Horizontal concatenation. Panics on mismatched row counts.
    pub fn hstack(parts: &[&Matrix]) -> Matrix {
        let rows = parts.first().map_or(0, |m| m.rows);
        assert!(parts.iter().all(|m| m.rows == rows), "row count mismatch");
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = Matrix::zero(rows, cols);
        let mut off = 0;
        for part in parts {
            for r in 0..rows {
                for c in 0..part.cols {
                    out.set(r, off + c, part.get(r, c).clone());
                }
            }
            off += part.cols;
        }
        out
    }

    /// Left-multiplies by `diag(scale)`, i.e. scales row `r` by `scale[r]`.
    #[allow(clippy::needless_range_loop)]
    pub fn scale_rows(&self, scale: &[Rat]) -> Matrix {
        assert_eq!(scale.len(), self.rows, "diagonal length mismatch");
        let mut out = self.clone();
        for r in 0..self.rows {
            for c in 0..self.cols {
                let v = out.get(r, c) * &scale[r];
                out.set(r, c, v);
            }
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "inner dimension mismatch");
        let mut out = Matrix::zero(self.rows, rhs.cols);
        for r in 0..self.rows {
            for c in 0..rhs.cols {
                let mut acc = Rat::zero();
                for k in 0..self.cols {
                    acc += self.get(r, k) * rhs.get(k, c);
                }
                out.set(r, c, acc);
            }
        }
        out
    }
}

/// Exact rank by fraction-free elimination. No tolerances anywhere.
pub fn rank_exact(m: &Matrix) -> usize {
    if m.rows == 0 || m.cols == 0 {
        return 0;
    }
    let cleared: Vec<Vec<BigInt>> = (0..m.rows)
        .map(|r| {
            let lcm = (0..m.cols).fold(BigInt::one(), |acc, c| acc.lcm(m.get(r, c).denom()));
            (0..m.cols)
                .map(|c| {
                    let e = m.get(r, c);
                    e.numer() * (&lcm / e.denom())
                })
                .collect()
        })
        .collect();
    rank_int(cleared)
}

fn rank_int(mut a: Vec<Vec<BigInt>>) -> usize {
    let rows = a.len();
    let cols = a[0].len();
    let mut prev = BigInt::one();
    let mut pivot_row = 0usize;
    for col in 0..cols {
        if pivot_row == rows {
            break;
        }
        let Some(r) = (pivot_row..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(pivot_row, r);
        for i in pivot_row + 1..rows {
            for j in col + 1..cols {
                let num = &a[i][j] * &a[pivot_row][col] - &a[i][col] * &a[pivot_row][j];
                debug_assert!(num.mod_floor(&prev.abs()).is_zero(), "inexact division");
                a[i][j] = num / &prev;
            }
            a[i][col] = BigInt::zero();
        }
        prev = a[pivot_row][col].clone();
        pivot_row += 1;
    }
    pivot_row
}

/// Dimension of the intersection of the two column spaces,
/// `rank(U) + rank(W) - rank([U W])`.
pub fn dim_intersection(u: &Matrix, w: &Matrix) -> usize {
    assert_eq!(u.rows(), w.rows(), "row count mismatch");
    rank_exact(u) + rank_exact(w) - rank_exact(&Matrix::hstack(&[u, w]))
}
