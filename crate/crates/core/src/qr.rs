//! Complex Householder QR with column pivoting.
//!
//! This is the least-squares backbone for reconstruction on a candidate
//! support and for the tight-frame construction. Reflectors are chosen
//! phase-aligned (`u = x + e^{i·arg(x_0)}‖x‖ e_1`), which keeps the scalar
//! `tau` real and every `H = I − tau·u·uᴴ` Hermitian and unitary. Pivoting
//! selects the remaining column of largest norm at each step, so the
//! magnitudes of the R diagonal are non-increasing and their ratio serves as
//! a cheap condition estimate.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::matrix::CMat;

pub(crate) struct ColPivQr {
    /// Packed factor: R on and above the diagonal, reflector tails below.
    packed: CMat,
    /// First element of each (unnormalized) reflector.
    u0: Vec<Complex64>,
    /// Real Householder scalars; 0 marks an identity step.
    tau: Vec<f64>,
    /// `perm[j]` = original column factored at step `j`.
    perm: Vec<usize>,
    steps: usize,
}

/// Factor `a` (rows >= cols) as `A·Pi = Q·R` with column pivoting.
pub(crate) fn qr_col_piv(a: &CMat) -> ColPivQr {
    let (m, n) = (a.rows(), a.cols());
    debug_assert!(m >= n, "QR expects a tall matrix");
    let mut w = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut u0 = vec![Complex64::ZERO; n];
    let mut tau = vec![0.0; n];

    for j in 0..n {
        // Pivot: bring the remaining column of largest norm to position j.
        let mut best = j;
        let mut best_norm = -1.0;
        for c in j..n {
            let norm: f64 = (j..m).map(|r| w[(r, c)].norm_sqr()).sum();
            if norm > best_norm {
                best_norm = norm;
                best = c;
            }
        }
        if best != j {
            for r in 0..m {
                let t = w[(r, j)];
                w[(r, j)] = w[(r, best)];
                w[(r, best)] = t;
            }
            perm.swap(j, best);
        }

        let norm = best_norm.max(0.0).sqrt();
        if norm == 0.0 {
            tau[j] = 0.0;
            continue;
        }
        let alpha = w[(j, j)];
        let aa = alpha.norm();
        let phase = if aa == 0.0 { Complex64::ONE } else { alpha / aa };
        let beta = -phase * norm;
        // u = x - beta*e1 on rows j..m; u[0] has magnitude |alpha| + norm.
        let u_first = alpha - beta;
        let t = 1.0 / (norm * norm + norm * aa);
        u0[j] = u_first;
        tau[j] = t;
        w[(j, j)] = beta;

        // Apply H to the trailing columns: c -= tau * u * (u^H c).
        for c in (j + 1)..n {
            let mut dot = u_first.conj() * w[(j, c)];
            for r in (j + 1)..m {
                dot += w[(r, j)].conj() * w[(r, c)];
            }
            let s = t * dot;
            w[(j, c)] -= s * u_first;
            for r in (j + 1)..m {
                let uj = w[(r, j)];
                w[(r, c)] -= s * uj;
            }
        }
    }

    ColPivQr { packed: w, u0, tau, perm, steps: n }
}

impl ColPivQr {
    fn rows(&self) -> usize {
        self.packed.rows()
    }

    /// `max |R_jj| / min |R_jj|`; `f64::INFINITY` when the smallest pivot is 0.
    pub(crate) fn cond_estimate(&self) -> f64 {
        let mut hi = 0.0_f64;
        let mut lo = f64::INFINITY;
        for j in 0..self.steps {
            let d = self.packed[(j, j)].norm();
            hi = hi.max(d);
            lo = lo.min(d);
        }
        if lo == 0.0 {
            f64::INFINITY
        } else {
            hi / lo
        }
    }

    /// Apply `Q^H` to a copy of `y` (in place over all rows).
    fn apply_qh(&self, y: &mut [Complex64]) {
        let m = self.rows();
        for j in 0..self.steps {
            if self.tau[j] == 0.0 {
                continue;
            }
            let mut dot = self.u0[j].conj() * y[j];
            for r in (j + 1)..m {
                dot += self.packed[(r, j)].conj() * y[r];
            }
            let s = self.tau[j] * dot;
            y[j] -= s * self.u0[j];
            for r in (j + 1)..m {
                y[r] -= s * self.packed[(r, j)];
            }
        }
    }

    /// Column `i` of `Q` (length `rows`), i.e. `Q e_i`.
    pub(crate) fn q_column(&self, i: usize) -> Vec<Complex64> {
        let m = self.rows();
        let mut v = vec![Complex64::ZERO; m];
        v[i] = Complex64::ONE;
        // Q = H_0 H_1 ... H_{s-1}; apply right-to-left. Each H is Hermitian,
        // so applying H_j is the same operation as in apply_qh.
        for j in (0..self.steps).rev() {
            if self.tau[j] == 0.0 {
                continue;
            }
            let mut dot = self.u0[j].conj() * v[j];
            for r in (j + 1)..m {
                dot += self.packed[(r, j)].conj() * v[r];
            }
            let s = self.tau[j] * dot;
            v[j] -= s * self.u0[j];
            for r in (j + 1)..m {
                v[r] -= s * self.packed[(r, j)];
            }
        }
        v
    }

    /// Least-squares solution of `A x = y` (minimum over the factored columns).
    pub(crate) fn solve_lstsq(&self, y: &[Complex64]) -> Vec<Complex64> {
        let k = self.steps;
        let mut qy: Vec<Complex64> = y.to_vec();
        self.apply_qh(&mut qy);
        // Back-substitute R z = (Q^H y)[..k].
        let mut z = vec![Complex64::ZERO; k];
        for j in (0..k).rev() {
            let mut acc = qy[j];
            for c in (j + 1)..k {
                acc -= self.packed[(j, c)] * z[c];
            }
            let d = self.packed[(j, j)];
            z[j] = if d.norm() == 0.0 { Complex64::ZERO } else { acc / d };
        }
        // Undo the pivoting.
        let mut x = vec![Complex64::ZERO; k];
        for j in 0..k {
            x[self.perm[j]] = z[j];
        }
        x
    }
}
