//! Sparse reconstruction from (possibly quantized) measurements.
//!
//! Three algorithms share a least-squares-on-support backbone:
//!
//! * greedy matching pursuit ([`reconstruct_omp`]) — grow the support one
//!   position at a time by the largest back-projected residual correlation,
//!   re-solving in full after each pick;
//! * iterative hard thresholding ([`reconstruct_iht`]) — gradient steps on
//!   `||y - A X||^2` followed by keep-the-K-largest truncation;
//! * Bayesian relevance pruning ([`reconstruct_bayesian`]) — per-coefficient
//!   precisions learned by evidence iteration, discarding coefficients whose
//!   precision diverges.
//!
//! All solvers are deterministic: ties in magnitude comparisons resolve to
//! the lowest column index.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::Error;
use crate::lu::lu_factor;
use crate::matrix::{energy, sub, RMat};
use crate::qr::qr_col_piv;
use crate::sensing::SensingMatrix;
use crate::signal::sparse_truncation;

/// Condition-estimate ceiling for the on-support solver; beyond it the
/// selected columns are reported as rank deficient instead of producing
/// meaningless coefficients.
pub const CONDITION_LIMIT: f64 = 1e12;

/// Which solver produced a reconstruction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Omp,
    Iht,
    Bayesian,
}

impl Algorithm {
    pub fn label(&self) -> &'static str {
        match self {
            Algorithm::Omp => "omp",
            Algorithm::Iht => "iht",
            Algorithm::Bayesian => "bayesian",
        }
    }

    pub fn parse(s: &str) -> Result<Self, Error> {
        Ok(match s {
            "omp" => Algorithm::Omp,
            "iht" => Algorithm::Iht,
            "bayes" | "bayesian" => Algorithm::Bayesian,
            other => {
                return Err(Error::invalid(alloc::format!(
                    "unknown algorithm '{other}' (expected omp, iht, or bayes)"
                )))
            }
        })
    }
}

/// Tunable parameters shared by the reconstruction algorithms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlgoConfig {
    /// Assumed sparsity.
    pub k: usize,
    /// Extra greedy iterations as a fraction of `k`, engaged for `k >= 20`
    /// where a single missed position otherwise ends the recovery; the
    /// final answer is truncated back to `k` terms.
    pub overshoot_fraction: f64,
    /// Hard-thresholding iteration budget.
    pub iht_iterations: usize,
    /// Hard-thresholding step size; `(0, 2)` keeps the on-support map a
    /// contraction for unit-energy columns.
    pub iht_tau: f64,
    /// Precision magnitude beyond which a coefficient is pruned.
    pub bayes_threshold: f64,
    /// Evidence-iteration budget.
    pub bayes_max_iterations: usize,
}

impl AlgoConfig {
    /// Defaults for an expected sparsity `k`: 5% overshoot (engaged from
    /// `k = 20`), 100 thresholding iterations at step 1, pruning threshold
    /// 100, and 1000 evidence iterations.
    pub fn for_sparsity(k: usize) -> Self {
        AlgoConfig {
            k,
            overshoot_fraction: 0.05,
            iht_iterations: 100,
            iht_tau: 1.0,
            bayes_threshold: 100.0,
            bayes_max_iterations: 1000,
        }
    }

    fn validate(&self) -> Result<(), Error> {
        if self.k == 0 {
            return Err(Error::invalid("sparsity budget must be at least 1"));
        }
        if !(self.overshoot_fraction >= 0.0) {
            return Err(Error::invalid("overshoot fraction must be non-negative"));
        }
        if self.iht_iterations == 0 || self.bayes_max_iterations == 0 {
            return Err(Error::invalid("iteration budgets must be at least 1"));
        }
        if !(self.iht_tau > 0.0 && self.iht_tau < 2.0) {
            return Err(Error::invalid("step size must lie in (0, 2)"));
        }
        if !(self.bayes_threshold > 0.0) {
            return Err(Error::invalid("pruning threshold must be positive"));
        }
        Ok(())
    }

    /// Greedy iteration budget: `ceil(k * (1 + overshoot))`, overshoot
    /// engaged only for `k >= 20`.
    fn omp_budget(&self) -> usize {
        if self.k >= 20 {
            (self.k as f64 * (1.0 + self.overshoot_fraction)).ceil() as usize
        } else {
            self.k
        }
    }
}

/// A reconstructed spectral vector and how it was obtained.
#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructionOutput {
    /// Length-`N` coefficient vector, zero outside `support`.
    pub coefficients: Vec<Complex64>,
    /// Ordered (ascending) positions of the recovered coefficients.
    pub support: Vec<usize>,
    /// `||y - A x||_2` for the returned coefficients.
    pub residual_norm: f64,
    pub algorithm: Algorithm,
    pub iterations_used: usize,
    /// False when an iterative solver exhausted its budget without meeting
    /// its stability test.
    pub converged: bool,
}

impl ReconstructionOutput {
    /// Error energy `||x - truth||^2` against a reference vector of the
    /// same length (usually the sparse truncation of the original signal).
    pub fn error_energy_vs(&self, truth: &[Complex64]) -> f64 {
        debug_assert_eq!(self.coefficients.len(), truth.len());
        self.coefficients
            .iter()
            .zip(truth)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum()
    }
}

// ---------------------------------------------------------------------------
// Least squares on a fixed support

fn validate_support(support: &[usize], m: usize, n: usize) -> Result<(), Error> {
    if support.len() > m {
        return Err(Error::invalid(alloc::format!(
            "support of size {} exceeds the {} measurements",
            support.len(),
            m
        )));
    }
    for (i, &s) in support.iter().enumerate() {
        if s >= n {
            return Err(Error::invalid(alloc::format!(
                "support index {s} out of range for N={n}"
            )));
        }
        if support[..i].contains(&s) {
            return Err(Error::invalid(alloc::format!("support index {s} repeated")));
        }
    }
    Ok(())
}

/// Least-squares coefficients of `y` on the selected columns — the
/// pseudo-inverse solution `(A_K^H A_K)^-1 A_K^H y`, returned in the order
/// of `support`. Ill-conditioned column sets (condition estimate above
/// [`CONDITION_LIMIT`]) are rejected.
pub fn solve_on_support(
    a: &SensingMatrix,
    y: &[Complex64],
    support: &[usize],
) -> Result<Vec<Complex64>, Error> {
    if y.len() != a.m {
        return Err(Error::DimensionMismatch { expected: a.m, got: y.len() });
    }
    validate_support(support, a.m, a.n)?;
    if support.is_empty() {
        return Ok(Vec::new());
    }
    let cols = a.matrix.select_cols(support);
    let qr = qr_col_piv(&cols);
    let cond = qr.cond_estimate();
    if !(cond < CONDITION_LIMIT) {
        return Err(Error::RankDeficient { cond });
    }
    Ok(qr.solve_lstsq(y))
}

/// `y - A_S c` for coefficients `c` on columns `S`.
fn residual_on(
    a: &SensingMatrix,
    y: &[Complex64],
    support: &[usize],
    coeffs: &[Complex64],
) -> Vec<Complex64> {
    let mut r = y.to_vec();
    for (&j, &c) in support.iter().zip(coeffs) {
        for i in 0..a.m {
            r[i] -= a.matrix[(i, j)] * c;
        }
    }
    r
}

fn scatter(n: usize, support: &[usize], coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut x = vec![Complex64::ZERO; n];
    for (&j, &c) in support.iter().zip(coeffs) {
        x[j] = c;
    }
    x
}

// ---------------------------------------------------------------------------
// Greedy matching pursuit

/// Greedy loop returning the output plus the residual-norm history (one
/// entry per completed iteration), used by the monotonicity tests.
fn omp_run(
    a: &SensingMatrix,
    y: &[Complex64],
    cfg: &AlgoConfig,
) -> Result<(ReconstructionOutput, Vec<f64>), Error> {
    cfg.validate()?;
    if y.len() != a.m {
        return Err(Error::DimensionMismatch { expected: a.m, got: y.len() });
    }
    let budget = cfg.omp_budget();
    if budget > a.m {
        return Err(Error::invalid(alloc::format!(
            "greedy budget {budget} (K plus overshoot) exceeds M={}",
            a.m
        )));
    }

    let y_norm = energy(y).sqrt();
    let stop = 1e-13 * y_norm.max(1.0);
    let mut selected: Vec<usize> = Vec::with_capacity(budget);
    let mut picked = vec![false; a.n];
    let mut coeffs: Vec<Complex64> = Vec::new();
    let mut residual = y.to_vec();
    let mut history = Vec::with_capacity(budget);
    let mut iterations = 0usize;

    for _ in 0..budget {
        let rnorm = energy(&residual).sqrt();
        if rnorm <= stop {
            break;
        }
        let corr = a.matrix.herm_matvec(&residual);
        let mut best = usize::MAX;
        let mut best_val = -1.0;
        for (j, c) in corr.iter().enumerate() {
            if picked[j] {
                continue;
            }
            let v = c.norm_sqr();
            if v > best_val {
                best_val = v;
                best = j;
            }
        }
        if best == usize::MAX {
            break; // every column already selected
        }
        picked[best] = true;
        selected.push(best);
        coeffs = solve_on_support(a, y, &selected)?;
        residual = residual_on(a, y, &selected, &coeffs);
        history.push(energy(&residual).sqrt());
        iterations += 1;
    }

    // Overshoot cleanup: keep the K strongest recovered coefficients
    // (ties to the lower column index) and re-solve on that support.
    if selected.len() > cfg.k {
        let full = scatter(a.n, &selected, &coeffs);
        let (kept, _) = sparse_truncation(&full, cfg.k)?;
        selected = kept.support;
        coeffs = solve_on_support(a, y, &selected)?;
        residual = residual_on(a, y, &selected, &coeffs);
    }

    let mut order: Vec<usize> = (0..selected.len()).collect();
    order.sort_by_key(|&i| selected[i]);
    let support: Vec<usize> = order.iter().map(|&i| selected[i]).collect();
    let sorted_coeffs: Vec<Complex64> = order.iter().map(|&i| coeffs[i]).collect();

    let out = ReconstructionOutput {
        coefficients: scatter(a.n, &support, &sorted_coeffs),
        support,
        residual_norm: energy(&residual).sqrt(),
        algorithm: Algorithm::Omp,
        iterations_used: iterations,
        converged: true,
    };
    Ok((out, history))
}

/// Greedy matching-pursuit reconstruction: per iteration, select the column
/// with the largest back-projected residual magnitude, then least-squares
/// re-solve on everything selected so far. Runs `k` iterations (plus the
/// configured overshoot for large `k`, truncated back to `k` at the end) or
/// until the residual vanishes.
pub fn reconstruct_omp(
    a: &SensingMatrix,
    y: &[Complex64],
    cfg: &AlgoConfig,
) -> Result<ReconstructionOutput, Error> {
    omp_run(a, y, cfg).map(|(out, _)| out)
}

// ---------------------------------------------------------------------------
// Iterative hard thresholding

/// Gradient descent on `||y - A X||^2` with a keep-the-K-largest truncation
/// after every step, starting from zero. Stops early once the support has
/// been stable for 10 iterations and the residual norm has stopped moving;
/// a runaway iterate (step size too large for the matrix) aborts with
/// [`Error::Diverged`].
pub fn reconstruct_iht(
    a: &SensingMatrix,
    y: &[Complex64],
    cfg: &AlgoConfig,
) -> Result<ReconstructionOutput, Error> {
    cfg.validate()?;
    if y.len() != a.m {
        return Err(Error::DimensionMismatch { expected: a.m, got: y.len() });
    }
    let n = a.n;
    let tau = Complex64::new(cfg.iht_tau, 0.0);
    let reference = energy(&a.matrix.herm_matvec(y)).max(1e-300);
    let divergence_ceiling = 1e6 * reference;

    let mut x = vec![Complex64::ZERO; n];
    let mut support: Vec<usize> = Vec::new();
    let mut stable_for = 0usize;
    let mut prev_residual = f64::INFINITY;
    let mut iterations = 0usize;
    let mut converged = false;

    for _ in 0..cfg.iht_iterations {
        iterations += 1;
        let ax = a.matrix.matvec(&x);
        let r = sub(y, &ax);
        let residual_norm = energy(&r).sqrt();
        let g = a.matrix.herm_matvec(&r);
        for i in 0..n {
            x[i] += tau * g[i];
        }
        let iterate_energy = energy(&x);
        if !iterate_energy.is_finite() || iterate_energy > divergence_ceiling {
            return Err(Error::Diverged { energy: iterate_energy });
        }
        let (truncated, _) = sparse_truncation(&x, cfg.k)?;
        x = truncated.coefficients;

        if truncated.support == support {
            stable_for += 1;
        } else {
            stable_for = 0;
            support = truncated.support;
        }
        let residual_moved = (prev_residual - residual_norm).abs()
            > 1e-12 * residual_norm.max(1.0);
        prev_residual = residual_norm;
        if stable_for >= 10 && !residual_moved {
            converged = true;
            break;
        }
    }

    // Refresh the residual for the returned iterate.
    let ax = a.matrix.matvec(&x);
    let residual_norm = energy(&sub(y, &ax)).sqrt();

    Ok(ReconstructionOutput {
        coefficients: x,
        support,
        residual_norm,
        algorithm: Algorithm::Iht,
        iterations_used: iterations,
        converged,
    })
}

// ---------------------------------------------------------------------------
// Bayesian relevance pruning

struct BayesBranch {
    /// Surviving column indices (into the original 0..N).
    positions: Vec<usize>,
    /// Posterior mean at the surviving positions.
    values: Vec<f64>,
    iterations: usize,
    converged: bool,
}

/// Evidence iteration on a real system `y = A x`.
///
/// Per-coefficient precisions `d_i` start at 1 with noise variance 1; each
/// round computes the posterior covariance `S = (A^T A / s^2 + D)^-1` and
/// mean `v = S A^T y / s^2`, the well-determinedness factors
/// `g_i = 1 - d_i S_ii`, the precision update `d_i = g_i / v_i^2`, and the
/// noise re-estimate `s^2 = ||y - A v||^2 / (rows - sum g)`; coefficients
/// whose precision magnitude passes the threshold (or turns non-finite) are
/// pruned.
///
/// The precision update divides by the squared posterior mean. Dividing by
/// the mean itself (an easy misreading, since a precision has units of
/// 1/value^2) leaves shrunk-but-nonzero means everywhere and no pruning
/// pressure — observed to stall with the full column set surviving — so the
/// squared form is used. Precisions can still take unusual values mid-run,
/// so the system is factored by partially pivoted LU rather than a
/// definiteness-assuming method.
fn bayes_real(a: &RMat, y: &[f64], cfg: &AlgoConfig) -> Result<BayesBranch, Error> {
    let rows = a.rows as f64;
    if y.iter().all(|v| *v == 0.0) {
        return Ok(BayesBranch {
            positions: Vec::new(),
            values: Vec::new(),
            iterations: 0,
            converged: true,
        });
    }

    let mut positions: Vec<usize> = (0..a.cols).collect();
    let mut d = vec![1.0f64; a.cols];
    let mut sigma_sq = 1.0f64;
    let mut converged = false;
    let mut iterations = 0usize;

    let mut cols = a.clone();
    let mut values: Vec<f64> = Vec::new();

    while iterations < cfg.bayes_max_iterations {
        iterations += 1;
        let s = positions.len();
        if s == 0 {
            converged = true;
            values.clear();
            break;
        }
        // S_inv = A^T A / sigma^2 + diag(d)
        let mut s_inv = cols.gram();
        let inv_sig = 1.0 / sigma_sq;
        for i in 0..s {
            for j in 0..s {
                s_inv[(i, j)] *= inv_sig;
            }
            s_inv[(i, i)] += d[i];
        }
        let lu = lu_factor(&s_inv)?;
        let aty: Vec<f64> = cols.t_matvec(y).iter().map(|v| v * inv_sig).collect();
        let v = lu.solve(&aty);
        let s_diag = lu.inverse_diag();

        let mut gamma_sum = 0.0;
        let mut d_new = vec![0.0f64; s];
        for i in 0..s {
            let gamma = 1.0 - d[i] * s_diag[i];
            gamma_sum += gamma;
            d_new[i] = gamma / (v[i] * v[i]);
        }
        let av = cols.matvec(&v);
        let res_sq: f64 = y.iter().zip(&av).map(|(yi, ai)| (yi - ai) * (yi - ai)).sum();
        sigma_sq = (res_sq / (rows - gamma_sum).max(1e-9)).clamp(1e-30, 1e30);

        // Prune confidently-zero coefficients.
        let mut keep: Vec<usize> = Vec::with_capacity(s);
        for i in 0..s {
            if d_new[i].is_finite() && d_new[i].abs() <= cfg.bayes_threshold {
                keep.push(i);
            }
        }
        let pruned_any = keep.len() != s;
        let mut max_rel_change = 0.0f64;
        if !pruned_any {
            for i in 0..s {
                let rel = (d_new[i] - d[i]).abs() / d[i].abs().max(1e-300);
                max_rel_change = max_rel_change.max(rel);
            }
        }

        positions = keep.iter().map(|&i| positions[i]).collect();
        d = keep.iter().map(|&i| d_new[i]).collect();
        values = keep.iter().map(|&i| v[i]).collect();
        if pruned_any {
            cols = a.select_cols(&positions);
        } else if max_rel_change < 1e-6 {
            converged = true;
            break;
        }
    }

    Ok(BayesBranch { positions, values, iterations, converged })
}

fn real_part_matrix(a: &SensingMatrix) -> RMat {
    let mut r = RMat::zeros(a.m, a.n);
    for i in 0..a.m {
        for j in 0..a.n {
            r[(i, j)] = a.matrix[(i, j)].re;
        }
    }
    r
}

/// Stacked real form of a complex system:
/// `[Re y; Im y] = [[Re A, -Im A], [Im A, Re A]] [Re x; Im x]`.
fn composite_matrix(a: &SensingMatrix) -> RMat {
    let (m, n) = (a.m, a.n);
    let mut c = RMat::zeros(2 * m, 2 * n);
    for i in 0..m {
        for j in 0..n {
            let v = a.matrix[(i, j)];
            c[(i, j)] = v.re;
            c[(i, j + n)] = -v.im;
            c[(i + m, j)] = v.im;
            c[(i + m, j + n)] = v.re;
        }
    }
    c
}

/// Bayesian reconstruction with per-coefficient relevance pruning.
///
/// The evidence iteration is a real-arithmetic procedure. Complex data runs
/// on the stacked real form of the system; when the matrix itself is real
/// that form is block diagonal, so the real and imaginary parts are solved
/// as two independent half-size systems (their noise estimates decouple
/// too, which only affects the shared noise scalar).
///
/// The survivors of pruning are truncated to the `k` strongest and re-fit
/// by least squares on that support, so the returned estimate honors the
/// sparsity budget and carries no shrinkage bias.
pub fn reconstruct_bayesian(
    a: &SensingMatrix,
    y: &[Complex64],
    cfg: &AlgoConfig,
) -> Result<ReconstructionOutput, Error> {
    cfg.validate()?;
    if y.len() != a.m {
        return Err(Error::DimensionMismatch { expected: a.m, got: y.len() });
    }
    let n = a.n;
    let mut x = vec![Complex64::ZERO; n];
    let (iterations, converged);

    if a.real_entries {
        let ar = real_part_matrix(a);
        let yr: Vec<f64> = y.iter().map(|v| v.re).collect();
        let yi: Vec<f64> = y.iter().map(|v| v.im).collect();
        let re = bayes_real(&ar, &yr, cfg)?;
        let im = bayes_real(&ar, &yi, cfg)?;
        for (&p, &v) in re.positions.iter().zip(&re.values) {
            x[p].re = v;
        }
        for (&p, &v) in im.positions.iter().zip(&im.values) {
            x[p].im = v;
        }
        iterations = re.iterations.max(im.iterations);
        converged = re.converged && im.converged;
    } else {
        let ac = composite_matrix(a);
        let mut yc = vec![0.0f64; 2 * a.m];
        for i in 0..a.m {
            yc[i] = y[i].re;
            yc[i + a.m] = y[i].im;
        }
        let branch = bayes_real(&ac, &yc, cfg)?;
        for (&p, &v) in branch.positions.iter().zip(&branch.values) {
            if p < n {
                x[p].re = v;
            } else {
                x[p - n].im = v;
            }
        }
        iterations = branch.iterations;
        converged = branch.converged;
    }

    let mut support: Vec<usize> = (0..n).filter(|&i| x[i] != Complex64::ZERO).collect();

    // Relevance pruning alone can leave low-level spurious survivors whose
    // summed energy floors the reconstruction error well above the register
    // noise. Truncate to the `k` strongest survivors and re-fit those by
    // least squares on the original system (the usual debiasing step, which
    // also removes the prior's shrinkage from the kept coefficients).
    if support.len() > cfg.k {
        support.sort_by(|&p, &q| {
            x[q].norm_sqr()
                .partial_cmp(&x[p].norm_sqr())
                .unwrap_or(core::cmp::Ordering::Equal)
        });
        support.truncate(cfg.k);
        support.sort_unstable();
    }
    if !support.is_empty() && support.len() <= a.m {
        let refit = solve_on_support(a, y, &support)?;
        x = vec![Complex64::ZERO; n];
        for (&p, &v) in support.iter().zip(&refit) {
            x[p] = v;
        }
    }

    let ax = a.matrix.matvec(&x);
    let residual = sub(y, &ax);
    Ok(ReconstructionOutput {
        coefficients: x,
        support,
        residual_norm: energy(&residual).sqrt(),
        algorithm: Algorithm::Bayesian,
        iterations_used: iterations,
        converged,
    })
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::CMat;
    use crate::sensing::{build_matrix, initial_estimate, measure, MatrixFamily};
    use crate::signal::{generate_sparse, PhaseMode, SignalSpec};

    fn sparse_instance(
        family: MatrixFamily,
        m: usize,
        n: usize,
        k: usize,
        seed: u64,
    ) -> (SensingMatrix, crate::signal::SpectralVector, Vec<Complex64>) {
        let a = build_matrix(family, m, n, seed).unwrap();
        let spec = SignalSpec::sparse(n, k, m, 0.4, seed ^ 0x5eed).unwrap();
        let x = generate_sparse(&spec).unwrap();
        let y = measure(&a, &x.coefficients).unwrap();
        (a, x, y)
    }

    #[test]
    fn support_solve_recovers_exact_coefficients() {
        let (a, x, y) = sparse_instance(MatrixFamily::PartialDft, 16, 32, 4, 1);
        let coeffs = solve_on_support(&a, &y, &x.support).unwrap();
        for (&j, c) in x.support.iter().zip(&coeffs) {
            assert!((c - x.coefficients[j]).norm() < 1e-11);
        }
        let r = residual_on(&a, &y, &x.support, &coeffs);
        assert!(energy(&r).sqrt() < 1e-10);
    }

    #[test]
    fn full_support_interpolates() {
        let (a, _, _) = sparse_instance(MatrixFamily::PartialDft, 8, 16, 2, 3);
        let mut y = vec![Complex64::ZERO; 8];
        for (i, v) in y.iter_mut().enumerate() {
            *v = Complex64::new(0.3 * i as f64 - 1.0, 0.1 * i as f64);
        }
        let support: Vec<usize> = (0..8).collect();
        let coeffs = solve_on_support(&a, &y, &support).unwrap();
        let r = residual_on(&a, &y, &support, &coeffs);
        assert!(energy(&r).sqrt() < 1e-9);
    }

    #[test]
    fn duplicate_columns_are_rank_deficient() {
        let mut raw = CMat::zeros(4, 6);
        for i in 0..4 {
            raw[(i, 0)] = Complex64::new(1.0 + i as f64, 0.0);
            raw[(i, 1)] = Complex64::new(1.0 + i as f64, 0.0); // same direction
            raw[(i, 2)] = Complex64::new(if i % 2 == 0 { 1.0 } else { -1.0 }, 0.0);
            raw[(i, 3)] = Complex64::new(0.0, 1.0);
            raw[(i, 4)] = Complex64::new(1.0, 1.0);
            raw[(i, 5)] = Complex64::new(i as f64 - 1.5, 0.5);
        }
        let a = SensingMatrix::from_raw(raw, MatrixFamily::Custom).unwrap();
        let y = vec![Complex64::ONE; 4];
        match solve_on_support(&a, &y, &[0, 1]) {
            Err(Error::RankDeficient { cond }) => assert!(cond > CONDITION_LIMIT),
            other => panic!("expected rank deficiency, got {other:?}"),
        }
        assert!(solve_on_support(&a, &y, &[0, 0]).is_err());
        assert!(solve_on_support(&a, &y, &[0, 9]).is_err());
    }

    #[test]
    fn greedy_recovers_exact_sparse_signals() {
        let (a, x, y) = sparse_instance(MatrixFamily::PartialDft, 64, 128, 3, 7);
        let out = reconstruct_omp(&a, &y, &AlgoConfig::for_sparsity(3)).unwrap();
        assert_eq!(out.support, x.support);
        assert!(out.residual_norm < 1e-10);
        let rel = out.error_energy_vs(&x.coefficients) / x.energy();
        assert!(rel.sqrt() < 1e-10, "relative error {}", rel.sqrt());
        assert_eq!(out.algorithm, Algorithm::Omp);
    }

    #[test]
    fn greedy_residuals_shrink_monotonically() {
        let (a, _, y) = sparse_instance(MatrixFamily::PartialDft, 64, 128, 6, 11);
        // Add register noise so the residual never hits zero early.
        let q = crate::quantize::quantize_fixed(
            &y,
            &crate::quantize::QuantizerSpec::fixed(4, true).unwrap(),
        );
        let (out, history) = omp_run(&a, &q.values, &AlgoConfig::for_sparsity(6)).unwrap();
        assert_eq!(history.len(), 6);
        for w in history.windows(2) {
            assert!(w[1] <= w[0] + 1e-12, "residuals {:?}", history);
        }
        // On-support orthogonality of the final residual.
        let r = residual_on(
            &a,
            &q.values,
            &out.support,
            &out.support.iter().map(|&j| out.coefficients[j]).collect::<Vec<_>>(),
        );
        let back = initial_estimate(&a, &r).unwrap();
        for &j in &out.support {
            assert!(back[j].norm() < 1e-10, "column {j} correlation {}", back[j].norm());
        }
    }

    #[test]
    fn greedy_overshoot_truncates_back_to_budget() {
        let (a, x, y) = sparse_instance(MatrixFamily::PartialDft, 96, 128, 20, 23);
        let cfg = AlgoConfig::for_sparsity(20);
        assert_eq!(cfg.omp_budget(), 21);
        let out = reconstruct_omp(&a, &y, &cfg).unwrap();
        assert!(out.support.len() <= 20);
        assert_eq!(out.support, x.support);
        assert!(out.residual_norm < 1e-9);
    }

    #[test]
    fn greedy_handles_zero_measurements() {
        let (a, _, _) = sparse_instance(MatrixFamily::PartialDft, 16, 32, 2, 5);
        let y = vec![Complex64::ZERO; 16];
        let out = reconstruct_omp(&a, &y, &AlgoConfig::for_sparsity(2)).unwrap();
        assert!(out.support.is_empty());
        assert!(out.coefficients.iter().all(|c| *c == Complex64::ZERO));
        assert_eq!(out.residual_norm, 0.0);
    }

    #[test]
    fn greedy_budget_cannot_exceed_measurements() {
        let (a, _, y) = sparse_instance(MatrixFamily::PartialDft, 16, 32, 2, 6);
        assert!(reconstruct_omp(&a, &y, &AlgoConfig::for_sparsity(17)).is_err());
    }

    #[test]
    fn thresholding_is_immediate_for_orthonormal_rows() {
        // M = N partial DFT contains every DFT row, so A^H A = I and one
        // gradient step lands exactly on the signal.
        let a = build_matrix(MatrixFamily::PartialDft, 32, 32, 9).unwrap();
        let spec = SignalSpec::sparse(32, 4, 32, 0.3, 21).unwrap();
        let x = generate_sparse(&spec).unwrap();
        let y = measure(&a, &x.coefficients).unwrap();
        let out = reconstruct_iht(&a, &y, &AlgoConfig::for_sparsity(4)).unwrap();
        assert!(out.converged);
        assert_eq!(out.support, x.support);
        let err = out.error_energy_vs(&x.coefficients);
        assert!(err < 1e-20, "error energy {err}");
    }

    #[test]
    fn thresholding_settles_on_the_least_squares_fixed_point() {
        let (a, x, y) = sparse_instance(MatrixFamily::PartialDft, 64, 128, 4, 31);
        let out = reconstruct_iht(&a, &y, &AlgoConfig::for_sparsity(4)).unwrap();
        assert!(out.converged, "no convergence in {} iterations", out.iterations_used);
        assert_eq!(out.support, x.support);
        // A fixed point of the thresholded gradient map zeroes the
        // on-support gradient, i.e. solves least squares on its support.
        let ls = solve_on_support(&a, &y, &out.support).unwrap();
        for (&j, c) in out.support.iter().zip(&ls) {
            assert!((out.coefficients[j] - c).norm() < 1e-8);
        }
    }

    #[test]
    fn thresholding_reports_divergence_for_oversized_steps() {
        // Tall column spread (N/M = 4) puts the operator norm well above 1,
        // so a near-2 step size explodes.
        let (a, _, y) = sparse_instance(MatrixFamily::Gaussian, 16, 64, 8, 13);
        let mut cfg = AlgoConfig::for_sparsity(8);
        cfg.iht_tau = 1.9;
        match reconstruct_iht(&a, &y, &cfg) {
            Err(Error::Diverged { .. }) => {}
            other => panic!("expected divergence, got {other:?}"),
        }
    }

    #[test]
    fn bayesian_agrees_with_greedy_on_clean_real_data() {
        let a = build_matrix(MatrixFamily::Gaussian, 64, 128, 41).unwrap();
        let spec = SignalSpec::sparse(128, 5, 64, 0.2, 43)
            .unwrap()
            .with_phase(PhaseMode::Real);
        let x = generate_sparse(&spec).unwrap();
        let y = measure(&a, &x.coefficients).unwrap();
        let cfg = AlgoConfig::for_sparsity(5);
        let omp = reconstruct_omp(&a, &y, &cfg).unwrap();
        let bayes = reconstruct_bayesian(&a, &y, &cfg).unwrap();
        assert_eq!(bayes.support, omp.support);
        assert_eq!(bayes.support, x.support);
        let err = bayes.error_energy_vs(&x.coefficients) / x.energy();
        assert!(err.sqrt() < 1e-5, "relative error {}", err.sqrt());
        assert!(bayes.converged);
    }

    #[test]
    fn bayesian_handles_complex_systems_via_the_stacked_form() {
        let (a, x, y) = sparse_instance(MatrixFamily::PartialDft, 32, 64, 3, 17);
        let out = reconstruct_bayesian(&a, &y, &AlgoConfig::for_sparsity(3)).unwrap();
        assert_eq!(out.support, x.support);
        assert!(out.converged);
        let err = out.error_energy_vs(&x.coefficients) / x.energy();
        assert!(err.sqrt() < 1e-5, "relative error {}", err.sqrt());
    }

    #[test]
    fn bayesian_prunes_everything_for_zero_measurements() {
        let a = build_matrix(MatrixFamily::Gaussian, 16, 32, 3).unwrap();
        let y = vec![Complex64::ZERO; 16];
        let out = reconstruct_bayesian(&a, &y, &AlgoConfig::for_sparsity(4)).unwrap();
        assert!(out.support.is_empty());
        assert_eq!(out.residual_norm, 0.0);
        assert!(out.converged);
    }

    #[test]
    fn invalid_configurations_are_rejected() {
        let (a, _, y) = sparse_instance(MatrixFamily::PartialDft, 16, 32, 2, 2);
        let mut cfg = AlgoConfig::for_sparsity(0);
        assert!(reconstruct_omp(&a, &y, &cfg).is_err());
        cfg = AlgoConfig::for_sparsity(2);
        cfg.iht_tau = 2.5;
        assert!(reconstruct_iht(&a, &y, &cfg).is_err());
        cfg = AlgoConfig::for_sparsity(2);
        cfg.bayes_threshold = 0.0;
        assert!(reconstruct_bayesian(&a, &y, &cfg).is_err());
    }
}
