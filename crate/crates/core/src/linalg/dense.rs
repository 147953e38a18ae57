//! Small dense matrices for per-element computations.
//!
//! Element-local systems are at most 3x3 (barycentric bases on a triangle),
//! so a plain row-major store with partial-pivot LU covers everything the
//! local kernels and diagnostics need.

use crate::error::{Error, Result};

/// Row-major dense matrix of `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    nrows: usize,
    ncols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    /// Zero matrix of the given shape.
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        DenseMatrix { nrows, ncols, data: vec![0.0; nrows * ncols] }
    }

    /// Identity matrix of order `n`.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Build from a slice of rows; every row must have the same length.
    pub fn from_rows(rows: &[&[f64]]) -> Self {
        let nrows = rows.len();
        let ncols = if nrows == 0 { 0 } else { rows[0].len() };
        let mut data = Vec::with_capacity(nrows * ncols);
        for row in rows {
            assert_eq!(row.len(), ncols, "ragged rows");
            data.extend_from_slice(row);
        }
        DenseMatrix { nrows, ncols, data }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Flat row-major data.
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    /// `self * other`.
    pub fn matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.ncols, other.nrows, "shape mismatch in matmul");
        let mut out = DenseMatrix::zeros(self.nrows, other.ncols);
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.ncols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    /// `self * x` for a vector `x`.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(self.ncols, x.len(), "shape mismatch in matvec");
        let mut out = vec![0.0; self.nrows];
        for i in 0..self.nrows {
            let mut s = 0.0;
            for j in 0..self.ncols {
                s += self[(i, j)] * x[j];
            }
            out[i] = s;
        }
        out
    }

    /// Transposed copy.
    pub fn transpose(&self) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.ncols, self.nrows);
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    /// `self + alpha * other`, elementwise.
    pub fn add_scaled(&self, alpha: f64, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let mut out = self.clone();
        for (o, v) in out.data.iter_mut().zip(other.data.iter()) {
            *o += alpha * v;
        }
        out
    }

    /// Multiply every entry by `alpha` in place.
    pub fn scale(&mut self, alpha: f64) {
        for v in &mut self.data {
            *v *= alpha;
        }
    }

    /// Replace by the symmetric part `(M + M^T)/2`; only meaningful for
    /// square matrices that are symmetric up to roundoff.
    pub fn symmetrize(&mut self) {
        assert_eq!(self.nrows, self.ncols);
        for i in 0..self.nrows {
            for j in (i + 1)..self.ncols {
                let avg = 0.5 * (self[(i, j)] + self[(j, i)]);
                self[(i, j)] = avg;
                self[(j, i)] = avg;
            }
        }
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Solve `self * X = B` for the (multi-column) right-hand side `B`,
    /// using LU with partial pivoting.  `self` must be square.
    pub fn solve(&self, rhs: &DenseMatrix) -> Result<DenseMatrix> {
        assert_eq!(self.nrows, self.ncols, "solve needs a square matrix");
        assert_eq!(self.nrows, rhs.nrows, "rhs row count mismatch");
        let n = self.nrows;
        let mut lu = self.clone();
        let mut x = rhs.clone();
        let scale = self.max_abs().max(1.0);
        for col in 0..n {
            let mut pivot_row = col;
            let mut pivot_val = lu[(col, col)].abs();
            for r in (col + 1)..n {
                let v = lu[(r, col)].abs();
                if v > pivot_val {
                    pivot_val = v;
                    pivot_row = r;
                }
            }
            if pivot_val <= 1e-14 * scale {
                return Err(Error::Singular { row: col });
            }
            if pivot_row != col {
                for j in 0..n {
                    lu.data.swap(col * n + j, pivot_row * n + j);
                }
                for j in 0..x.ncols {
                    x.data.swap(col * x.ncols + j, pivot_row * x.ncols + j);
                }
            }
            let inv_p = 1.0 / lu[(col, col)];
            for r in (col + 1)..n {
                let factor = lu[(r, col)] * inv_p;
                if factor == 0.0 {
                    continue;
                }
                lu[(r, col)] = 0.0;
                for j in (col + 1)..n {
                    let v = lu[(col, j)];
                    lu[(r, j)] -= factor * v;
                }
                for j in 0..x.ncols {
                    let v = x[(col, j)];
                    x[(r, j)] -= factor * v;
                }
            }
        }
        for col in (0..n).rev() {
            let inv_p = 1.0 / lu[(col, col)];
            for j in 0..x.ncols {
                let mut s = x[(col, j)];
                for k in (col + 1)..n {
                    s -= lu[(col, k)] * x[(k, j)];
                }
                x[(col, j)] = s * inv_p;
            }
        }
        Ok(x)
    }

    /// Solve for a single right-hand-side vector.
    pub fn solve_vec(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let b = DenseMatrix { nrows: rhs.len(), ncols: 1, data: rhs.to_vec() };
        Ok(self.solve(&b)?.data)
    }
}

impl std::ops::Index<(usize, usize)> for DenseMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.nrows && j < self.ncols);
        &self.data[i * self.ncols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.nrows && j < self.ncols);
        &mut self.data[i * self.ncols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn solve_recovers_known_solution() {
        let a = DenseMatrix::from_rows(&[&[4.0, 1.0, 0.0], &[1.0, 3.0, 1.0], &[0.0, 1.0, 2.0]]);
        let x_true = vec![1.0, -2.0, 3.0];
        let b = a.matvec(&x_true);
        let x = a.solve_vec(&b).unwrap();
        for (xi, ti) in x.iter().zip(&x_true) {
            assert_relative_eq!(xi, ti, max_relative = 1e-13);
        }
    }

    #[test]
    fn solve_needs_pivoting() {
        // Zero leading diagonal forces a row swap.
        let a = DenseMatrix::from_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let x = a.solve_vec(&[2.0, 5.0]).unwrap();
        assert_relative_eq!(x[0], 5.0, max_relative = 1e-15);
        assert_relative_eq!(x[1], 2.0, max_relative = 1e-15);
    }

    #[test]
    fn singular_matrix_reports_row() {
        let a = DenseMatrix::from_rows(&[&[1.0, 2.0], &[2.0, 4.0]]);
        match a.solve_vec(&[1.0, 2.0]) {
            Err(Error::Singular { row }) => assert_eq!(row, 1),
            other => panic!("expected singular error, got {other:?}"),
        }
    }

    #[test]
    fn matmul_transpose_consistency() {
        let a = DenseMatrix::from_rows(&[&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]]);
        let ata = a.transpose().matmul(&a);
        assert_eq!(ata.nrows(), 3);
        assert_eq!(ata.ncols(), 3);
        // A^T A is symmetric.
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(ata[(i, j)], ata[(j, i)]);
            }
        }
        assert_relative_eq!(ata[(0, 0)], 17.0);
        assert_relative_eq!(ata[(2, 2)], 45.0);
    }
}
