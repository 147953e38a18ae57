//! Compressed sparse row matrices and the kernels the solver needs.

use crate::error::{Error, Result};
use crate::linalg::dense::DenseMatrix;

/// Sparse matrix in CSR format.  Column indices within each row are sorted
/// and unique; explicit zeros are allowed (they keep assembly deterministic).
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    nrows: usize,
    ncols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    /// Build from triplets, summing duplicates.  Triplet order does not
    /// affect the result beyond floating-point addition order, which is made
    /// deterministic by sorting on (row, col) with a stable sort first.
    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        triplets: &[(usize, usize, f64)],
    ) -> Result<Self> {
        for &(r, c, _) in triplets {
            if r >= nrows || c >= ncols {
                return Err(Error::invalid(format!(
                    "triplet ({r}, {c}) outside {nrows}x{ncols} matrix"
                )));
            }
        }
        let mut order: Vec<usize> = (0..triplets.len()).collect();
        order.sort_by_key(|&k| (triplets[k].0, triplets[k].1));
        let mut row_counts = vec![0usize; nrows + 1];
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        let mut prev: Option<(usize, usize)> = None;
        for &k in &order {
            let (r, c, v) = triplets[k];
            if prev == Some((r, c)) {
                *values.last_mut().unwrap() += v;
            } else {
                col_idx.push(c);
                values.push(v);
                row_counts[r + 1] += 1;
                prev = Some((r, c));
            }
        }
        for r in 0..nrows {
            row_counts[r + 1] += row_counts[r];
        }
        let m = CsrMatrix { nrows, ncols, row_ptr: row_counts, col_idx, values };
        debug_assert!(m.check_invariants().is_ok());
        Ok(m)
    }

    /// Zero matrix with no stored entries.
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        CsrMatrix { nrows, ncols, row_ptr: vec![0; nrows + 1], col_idx: Vec::new(), values: Vec::new() }
    }

    /// Identity of order `n`.
    pub fn identity(n: usize) -> Self {
        CsrMatrix {
            nrows: n,
            ncols: n,
            row_ptr: (0..=n).collect(),
            col_idx: (0..n).collect(),
            values: vec![1.0; n],
        }
    }

    /// Check the structural invariants (monotone row pointers, sorted unique
    /// in-range columns).  Cheap enough to run in tests and debug builds.
    pub fn check_invariants(&self) -> Result<()> {
        if self.row_ptr.len() != self.nrows + 1 || self.row_ptr[0] != 0 {
            return Err(Error::invalid("malformed row pointers"));
        }
        if *self.row_ptr.last().unwrap() != self.col_idx.len()
            || self.col_idx.len() != self.values.len()
        {
            return Err(Error::invalid("row pointer end does not match storage length"));
        }
        for r in 0..self.nrows {
            let (lo, hi) = (self.row_ptr[r], self.row_ptr[r + 1]);
            if hi < lo {
                return Err(Error::invalid("decreasing row pointers"));
            }
            for k in lo..hi {
                if self.col_idx[k] >= self.ncols {
                    return Err(Error::invalid("column index out of range"));
                }
                if k > lo && self.col_idx[k] <= self.col_idx[k - 1] {
                    return Err(Error::invalid("columns not sorted strictly"));
                }
            }
        }
        Ok(())
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Number of stored entries.
    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Column indices and values of row `r`.
    pub fn row(&self, r: usize) -> (&[usize], &[f64]) {
        let (lo, hi) = (self.row_ptr[r], self.row_ptr[r + 1]);
        (&self.col_idx[lo..hi], &self.values[lo..hi])
    }

    /// Entry (r, c), zero if not stored.
    pub fn get(&self, r: usize, c: usize) -> f64 {
        let (cols, vals) = self.row(r);
        match cols.binary_search(&c) {
            Ok(k) => vals[k],
            Err(_) => 0.0,
        }
    }

    /// Iterate all stored entries as (row, col, value) in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.nrows).flat_map(move |r| {
            let (cols, vals) = self.row(r);
            cols.iter().zip(vals.iter()).map(move |(&c, &v)| (r, c, v))
        })
    }

    /// y = M x.
    pub fn spmv(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.ncols, "spmv dimension mismatch");
        let mut y = vec![0.0; self.nrows];
        for r in 0..self.nrows {
            let (cols, vals) = self.row(r);
            let mut s = 0.0;
            for (&c, &v) in cols.iter().zip(vals) {
                s += v * x[c];
            }
            y[r] = s;
        }
        y
    }

    /// y = M^T x without materializing the transpose.
    pub fn transpose_apply(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.nrows, "transpose_apply dimension mismatch");
        let mut y = vec![0.0; self.ncols];
        for r in 0..self.nrows {
            let xr = x[r];
            if xr == 0.0 {
                continue;
            }
            let (cols, vals) = self.row(r);
            for (&c, &v) in cols.iter().zip(vals) {
                y[c] += v * xr;
            }
        }
        y
    }

    /// Materialized transpose.
    pub fn transpose(&self) -> CsrMatrix {
        let mut counts = vec![0usize; self.ncols + 1];
        for &c in &self.col_idx {
            counts[c + 1] += 1;
        }
        for c in 0..self.ncols {
            counts[c + 1] += counts[c];
        }
        let mut col_idx = vec![0usize; self.nnz()];
        let mut values = vec![0.0; self.nnz()];
        let mut next = counts.clone();
        for r in 0..self.nrows {
            let (cols, vals) = self.row(r);
            for (&c, &v) in cols.iter().zip(vals) {
                let k = next[c];
                col_idx[k] = r;
                values[k] = v;
                next[c] += 1;
            }
        }
        CsrMatrix { nrows: self.ncols, ncols: self.nrows, row_ptr: counts, col_idx, values }
    }

    /// self + alpha * other, matching shapes required.
    pub fn add_scaled(&self, alpha: f64, other: &CsrMatrix) -> CsrMatrix {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols), "add_scaled shape mismatch");
        let mut row_ptr = vec![0usize; self.nrows + 1];
        let mut col_idx = Vec::with_capacity(self.nnz() + other.nnz());
        let mut values = Vec::with_capacity(self.nnz() + other.nnz());
        for r in 0..self.nrows {
            let (ca, va) = self.row(r);
            let (cb, vb) = other.row(r);
            let (mut i, mut j) = (0, 0);
            while i < ca.len() || j < cb.len() {
                let next_a = if i < ca.len() { ca[i] } else { usize::MAX };
                let next_b = if j < cb.len() { cb[j] } else { usize::MAX };
                if next_a < next_b {
                    col_idx.push(next_a);
                    values.push(va[i]);
                    i += 1;
                } else if next_b < next_a {
                    col_idx.push(next_b);
                    values.push(alpha * vb[j]);
                    j += 1;
                } else {
                    col_idx.push(next_a);
                    values.push(va[i] + alpha * vb[j]);
                    i += 1;
                    j += 1;
                }
            }
            row_ptr[r + 1] = col_idx.len();
        }
        CsrMatrix { nrows: self.nrows, ncols: self.ncols, row_ptr, col_idx, values }
    }

    /// Copy with every entry multiplied by `alpha`.
    pub fn scaled(&self, alpha: f64) -> CsrMatrix {
        let mut m = self.clone();
        for v in &mut m.values {
            *v *= alpha;
        }
        m
    }

    /// Infinity norm (max absolute row sum).
    pub fn inf_norm(&self) -> f64 {
        (0..self.nrows)
            .map(|r| self.row(r).1.iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// True when the matrix equals its transpose entrywise to within `tol`
    /// (use `tol = 0.0` for exact structural + value symmetry).
    pub fn is_symmetric(&self, tol: f64) -> bool {
        if self.nrows != self.ncols {
            return false;
        }
        let t = self.transpose();
        if self.nnz() != t.nnz() {
            // Patterns can still match values through explicit zeros; fall
            // back to the entrywise comparison below only on equal nnz.
            return self.max_symmetry_defect() <= tol;
        }
        for r in 0..self.nrows {
            let (ca, va) = self.row(r);
            let (cb, vb) = t.row(r);
            if ca != cb {
                return self.max_symmetry_defect() <= tol;
            }
            for (x, y) in va.iter().zip(vb) {
                if (x - y).abs() > tol {
                    return false;
                }
            }
        }
        true
    }

    /// max |M - M^T| over all positions.
    pub fn max_symmetry_defect(&self) -> f64 {
        let mut worst = 0.0_f64;
        for (r, c, v) in self.iter() {
            worst = worst.max((v - self.get(c, r)).abs());
        }
        worst
    }

    /// Dense copy, for small diagnostics and tests.
    pub fn to_dense(&self) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.nrows, self.ncols);
        for (r, c, v) in self.iter() {
            out[(r, c)] += v;
        }
        out
    }

    /// Diagonal entries as a vector (zero where absent).
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.nrows.min(self.ncols)).map(|i| self.get(i, i)).collect()
    }
}

/// z = x + alpha * y, elementwise over equal-length slices.
pub fn add_scaled_vec(x: &[f64], alpha: f64, y: &[f64]) -> Vec<f64> {
    assert_eq!(x.len(), y.len());
    x.iter().zip(y).map(|(a, b)| a + alpha * b).collect()
}

/// Euclidean inner product.
pub fn dot(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len());
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// Max-norm of a vector.
pub fn inf_norm_vec(x: &[f64]) -> f64 {
    x.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}
