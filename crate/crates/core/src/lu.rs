//! Real LU decomposition with partial pivoting.
//!
//! Used by the Bayesian solver, whose per-iteration system
//! `G/sigma^2 + diag(d)` is symmetric but not guaranteed positive definite
//! (the precision surrogates `d_i` may be negative mid-iteration), so a
//! pivoted LU is the robust choice over Cholesky.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::matrix::RMat;

pub(crate) struct Lu {
    lu: RMat,
    piv: Vec<usize>,
}

/// Factor a square matrix; fails on exact singularity.
pub(crate) fn lu_factor(a: &RMat) -> Result<Lu, Error> {
    let n = a.rows();
    debug_assert_eq!(n, a.cols());
    let mut lu = a.clone();
    let mut piv: Vec<usize> = (0..n).collect();

    for j in 0..n {
        let mut p = j;
        let mut pmax = lu[(j, j)].abs();
        for r in (j + 1)..n {
            let v = lu[(r, j)].abs();
            if v > pmax {
                pmax = v;
                p = r;
            }
        }
        if pmax == 0.0 || !pmax.is_finite() {
            return Err(Error::SingularCovariance);
        }
        if p != j {
            for c in 0..n {
                let t = lu[(j, c)];
                lu[(j, c)] = lu[(p, c)];
                lu[(p, c)] = t;
            }
            piv.swap(j, p);
        }
        let d = lu[(j, j)];
        for r in (j + 1)..n {
            let f = lu[(r, j)] / d;
            lu[(r, j)] = f;
            if f != 0.0 {
                for c in (j + 1)..n {
                    let s = lu[(j, c)];
                    lu[(r, c)] -= f * s;
                }
            }
        }
    }
    Ok(Lu { lu, piv })
}

impl Lu {
    pub(crate) fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.lu.rows();
        debug_assert_eq!(b.len(), n);
        let mut x: Vec<f64> = (0..n).map(|i| b[self.piv[i]]).collect();
        for j in 0..n {
            let xj = x[j];
            if xj != 0.0 {
                for r in (j + 1)..n {
                    x[r] -= self.lu[(r, j)] * xj;
                }
            }
        }
        for j in (0..n).rev() {
            let mut acc = x[j];
            for c in (j + 1)..n {
                acc -= self.lu[(j, c)] * x[c];
            }
            x[j] = acc / self.lu[(j, j)];
        }
        x
    }

    /// Diagonal of the inverse, one solve per unit vector.
    pub(crate) fn inverse_diag(&self) -> Vec<f64> {
        let n = self.lu.rows();
        let mut diag = vec![0.0; n];
        let mut e = vec![0.0; n];
        for i in 0..n {
            e[i] = 1.0;
            let col = self.solve(&e);
            diag[i] = col[i];
            e[i] = 0.0;
        }
        diag
    }
}
