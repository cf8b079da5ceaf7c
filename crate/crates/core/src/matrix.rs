//! Minimal dense matrix/vector kernels.
//!
//! Row-major storage, complex (`CMat`) and real (`RMat`) variants. These are
//! deliberately small: the rest of the crate only needs matrix-vector
//! products, column selection, Gram products, and Frobenius-type norms, all
//! on problem sizes where a straightforward loop is fast enough.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};
use num_complex::Complex64;

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    pub rows: usize,
    pub cols: usize,
    /// Row-major entries, `data[i * cols + j]`.
    pub data: Vec<Complex64>,
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat { rows, cols, data: vec![Complex64::ZERO; rows * cols] }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = CMat::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m[(r, c)] = f(r, c);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [Complex64] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// `A x` (length `rows`).
    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        debug_assert_eq!(x.len(), self.cols);
        let mut y = vec![Complex64::ZERO; self.rows];
        for (r, out) in y.iter_mut().enumerate() {
            let row = self.row(r);
            let mut acc = Complex64::ZERO;
            for (a, xv) in row.iter().zip(x) {
                acc += a * xv;
            }
            *out = acc;
        }
        y
    }

    /// `A^H y` (length `cols`), streaming over rows for cache friendliness.
    pub fn herm_matvec(&self, y: &[Complex64]) -> Vec<Complex64> {
        debug_assert_eq!(y.len(), self.rows);
        let mut out = vec![Complex64::ZERO; self.cols];
        for (r, yv) in y.iter().enumerate() {
            let row = self.row(r);
            for (o, a) in out.iter_mut().zip(row) {
                *o += a.conj() * yv;
            }
        }
        out
    }

    /// Copy of the columns listed in `support`, in order (`rows x support.len()`).
    pub fn select_cols(&self, support: &[usize]) -> CMat {
        let mut s = CMat::zeros(self.rows, support.len());
        for r in 0..self.rows {
            let row = self.row(r);
            let dst = s.row_mut(r);
            for (j, &k) in support.iter().enumerate() {
                dst[j] = row[k];
            }
        }
        s
    }

    /// Gram matrix `A^H A` (`cols x cols`).
    pub fn gram(&self) -> CMat {
        let n = self.cols;
        let mut g = CMat::zeros(n, n);
        for r in 0..self.rows {
            let row = self.row(r);
            for i in 0..n {
                let ai = row[i].conj();
                let gi = g.row_mut(i);
                for (j, aj) in row.iter().enumerate() {
                    gi[j] += ai * aj;
                }
            }
        }
        g
    }

    /// Squared Euclidean norm of column `k`.
    pub fn col_energy(&self, k: usize) -> f64 {
        (0..self.rows).map(|r| self[(r, k)].norm_sqr()).sum()
    }

    pub fn scale_col(&mut self, k: usize, s: f64) {
        for r in 0..self.rows {
            self[(r, k)] *= s;
        }
    }
}

impl Index<(usize, usize)> for CMat {
    type Output = Complex64;
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.cols + c]
    }
}

/// Dense row-major real matrix (used by the Bayesian solver).
#[derive(Debug, Clone, PartialEq)]
pub struct RMat {
    pub rows: usize,
    pub cols: usize,
    /// Row-major entries, `data[i * cols + j]`.
    pub data: Vec<f64>,
}

impl RMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RMat { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [f64] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.cols);
        let mut y = vec![0.0; self.rows];
        for (r, out) in y.iter_mut().enumerate() {
            *out = self.row(r).iter().zip(x).map(|(a, b)| a * b).sum();
        }
        y
    }

    pub fn t_matvec(&self, y: &[f64]) -> Vec<f64> {
        debug_assert_eq!(y.len(), self.rows);
        let mut out = vec![0.0; self.cols];
        for (r, yv) in y.iter().enumerate() {
            for (o, a) in out.iter_mut().zip(self.row(r)) {
                *o += a * yv;
            }
        }
        out
    }

    /// `A^T A` (`cols x cols`).
    pub fn gram(&self) -> RMat {
        let n = self.cols;
        let mut g = RMat::zeros(n, n);
        for r in 0..self.rows {
            let row = self.row(r);
            for i in 0..n {
                let ai = row[i];
                if ai == 0.0 {
                    continue;
                }
                let gi = g.row_mut(i);
                for (j, aj) in row.iter().enumerate() {
                    gi[j] += ai * aj;
                }
            }
        }
        g
    }

    /// Copy of the columns listed in `keep`, in order.
    pub fn select_cols(&self, keep: &[usize]) -> RMat {
        let mut s = RMat::zeros(self.rows, keep.len());
        for r in 0..self.rows {
            let row = self.row(r);
            let dst = s.row_mut(r);
            for (j, &k) in keep.iter().enumerate() {
                dst[j] = row[k];
            }
        }
        s
    }
}

impl Index<(usize, usize)> for RMat {
    type Output = f64;
    fn index(&self, (r, c): (usize, usize)) -> &f64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for RMat {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut f64 {
        &mut self.data[r * self.cols + c]
    }
}

// ---------------------------------------------------------------------------
// Slice helpers shared across modules.
// ---------------------------------------------------------------------------

/// Squared Euclidean norm of a complex vector.
pub fn energy(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum()
}

/// Elementwise `a - b`.
pub fn sub(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn herm_matvec_matches_definition() {
        let a = CMat::from_fn(2, 3, |r, k| c(r as f64 + 1.0, k as f64));
        let y = [c(1.0, -1.0), c(0.5, 2.0)];
        let got = a.herm_matvec(&y);
        for k in 0..3 {
            let want = a[(0, k)].conj() * y[0] + a[(1, k)].conj() * y[1];
            assert!((got[k] - want).norm() < 1e-14);
        }
    }

    #[test]
    fn gram_is_hermitian_and_matches_column_dots() {
        let a = CMat::from_fn(4, 3, |r, k| c((r * k) as f64 * 0.3 - 1.0, r as f64 - k as f64));
        let g = a.gram();
        for i in 0..3 {
            for j in 0..3 {
                let mut want = Complex64::ZERO;
                for r in 0..4 {
                    want += a[(r, i)].conj() * a[(r, j)];
                }
                assert!((g[(i, j)] - want).norm() < 1e-13);
                assert!((g[(i, j)] - g[(j, i)].conj()).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn select_cols_preserves_order() {
        let a = CMat::from_fn(2, 4, |r, k| c(k as f64, r as f64));
        let s = a.select_cols(&[3, 1]);
        assert_eq!(s[(0, 0)], c(3.0, 0.0));
        assert_eq!(s[(1, 1)], c(1.0, 1.0));
    }

    #[test]
    fn real_gram_matches_matvec_composition() {
        let mut a = RMat::zeros(3, 2);
        for r in 0..3 {
            for k in 0..2 {
                a[(r, k)] = (r + 2 * k) as f64 * 0.7 - 1.0;
            }
        }
        let g = a.gram();
        let x = [1.25, -0.5];
        let via_gram = g.matvec(&x);
        let direct = a.t_matvec(&a.matvec(&x));
        for (u, v) in via_gram.iter().zip(&direct) {
            assert!((u - v).abs() < 1e-12);
        }
    }
}
