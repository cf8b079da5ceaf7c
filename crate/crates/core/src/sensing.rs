//! Sensing-matrix families and the measurement operator.
//!
//! Every family yields an `M x N` matrix with unit-energy columns, so the
//! measurement `y = A x` of a spectral vector `x` keeps per-coefficient
//! energy intact and the initial estimate `A^H y` has unbiased diagonal.
//! Deterministic-modulus families (partial DFT variants, the equiangular
//! tight frame, sign matrices) are unit-energy by construction; families
//! with continuous random entries are normalized column by column.
//!
//! Construction is bit-exact per seed; the equiangular tight frame is fully
//! deterministic and ignores the seed.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::Error;
use crate::matrix::CMat;
use crate::qr::qr_col_piv;
use crate::rng::rng_from_seed;

/// Available sensing-matrix constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MatrixFamily {
    /// `M` distinct rows of the `N x N` DFT matrix, scaled by `1/sqrt(M)`.
    PartialDft,
    /// DFT-style rows at `M` continuous random frequencies in `[0, N)`.
    RandomPartialDft,
    /// Complex equiangular tight frame with `N = 2M`, `M` a power of two:
    /// every pair of columns meets the Welch coherence bound with equality.
    Etf,
    /// Real i.i.d. Gaussian entries, variance `1/M`, columns normalized.
    Gaussian,
    /// Real i.i.d. uniform zero-mean entries, variance `1/M`, columns
    /// normalized.
    Uniform,
    /// Real random-sign entries `±1/sqrt(M)`.
    Bernoulli,
    /// Matrix supplied from outside (file import); columns normalized.
    Custom,
}

impl MatrixFamily {
    pub fn label(&self) -> &'static str {
        match self {
            MatrixFamily::PartialDft => "partial-dft",
            MatrixFamily::RandomPartialDft => "random-partial-dft",
            MatrixFamily::Etf => "etf",
            MatrixFamily::Gaussian => "gaussian",
            MatrixFamily::Uniform => "uniform",
            MatrixFamily::Bernoulli => "bernoulli",
            MatrixFamily::Custom => "custom",
        }
    }

    /// Parse the label format produced by [`MatrixFamily::label`].
    pub fn parse(s: &str) -> Result<Self, Error> {
        Ok(match s {
            "partial-dft" => MatrixFamily::PartialDft,
            "random-partial-dft" => MatrixFamily::RandomPartialDft,
            "etf" => MatrixFamily::Etf,
            "gaussian" => MatrixFamily::Gaussian,
            "uniform" => MatrixFamily::Uniform,
            "bernoulli" => MatrixFamily::Bernoulli,
            "custom" => MatrixFamily::Custom,
            other => {
                return Err(Error::invalid(alloc::format!(
                    "unknown matrix family '{other}'"
                )))
            }
        })
    }

    /// True when every entry is real, enabling real-arithmetic fast paths.
    pub fn is_real(&self) -> bool {
        matches!(
            self,
            MatrixFamily::Gaussian | MatrixFamily::Uniform | MatrixFamily::Bernoulli
        )
    }
}

/// A unit-energy-column measurement matrix together with its provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct SensingMatrix {
    /// The `M x N` matrix itself.
    pub matrix: CMat,
    pub family: MatrixFamily,
    /// Measurement count (rows).
    pub m: usize,
    /// Signal length (columns).
    pub n: usize,
    /// Seed the entries were drawn from (0 for deterministic families).
    pub seed: u64,
    /// All entries have zero imaginary part.
    pub real_entries: bool,
}

/// Coherence summary of a sensing matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherenceReport {
    /// Largest `|<a_i, a_j>|` over distinct column pairs.
    pub max_coherence: f64,
    /// Mean of `|<a_i, a_j>|^2` over distinct column pairs.
    pub mean_sq_coherence: f64,
    /// Welch lower bound `sqrt((N-M)/(M(N-1)))` for the maximum coherence.
    pub welch_bound: f64,
    /// Largest sparsity with guaranteed unique recovery, from the maximum
    /// coherence (`K < (1 + 1/mu)/2`).
    pub unique_recovery_limit: usize,
}

// ---------------------------------------------------------------------------
// Construction

fn check_dims(m: usize, n: usize) -> Result<(), Error> {
    if m == 0 || n == 0 || m > n {
        return Err(Error::invalid(alloc::format!(
            "matrix dimensions must satisfy 1 <= M <= N, got M={m}, N={n}"
        )));
    }
    Ok(())
}

/// DFT-style rows at the given (possibly fractional) frequencies.
fn dft_rows(freqs: &[f64], m: usize, n: usize) -> CMat {
    let scale = 1.0 / (m as f64).sqrt();
    let mut a = CMat::zeros(m, n);
    for (i, &t) in freqs.iter().enumerate() {
        let base = -2.0 * core::f64::consts::PI * t / n as f64;
        for j in 0..n {
            a[(i, j)] = Complex64::from_polar(scale, base * j as f64);
        }
    }
    a
}

fn build_partial_dft(m: usize, n: usize, seed: u64) -> CMat {
    let mut rng = rng_from_seed(seed);
    let mut rows = rand::seq::index::sample(&mut rng, n, m).into_vec();
    rows.sort_unstable();
    let freqs: Vec<f64> = rows.iter().map(|&r| r as f64).collect();
    dft_rows(&freqs, m, n)
}

fn build_random_partial_dft(m: usize, n: usize, seed: u64) -> CMat {
    let mut rng = rng_from_seed(seed);
    let freqs: Vec<f64> = (0..m).map(|_| rng.random::<f64>() * n as f64).collect();
    dft_rows(&freqs, m, n)
}

fn build_gaussian(m: usize, n: usize, seed: u64) -> CMat {
    let mut rng = rng_from_seed(seed);
    let sigma = 1.0 / (m as f64).sqrt();
    let mut a = CMat::zeros(m, n);
    for i in 0..m {
        for j in 0..n {
            let g: f64 = StandardNormal.sample(&mut rng);
            a[(i, j)] = Complex64::new(sigma * g, 0.0);
        }
    }
    a
}

fn build_uniform(m: usize, n: usize, seed: u64) -> CMat {
    let mut rng = rng_from_seed(seed);
    // Half-width sqrt(3/M) gives variance 1/M.
    let half = (3.0 / m as f64).sqrt();
    let mut a = CMat::zeros(m, n);
    for i in 0..m {
        for j in 0..n {
            let u = 2.0 * rng.random::<f64>() - 1.0;
            a[(i, j)] = Complex64::new(half * u, 0.0);
        }
    }
    a
}

fn build_bernoulli(m: usize, n: usize, seed: u64) -> CMat {
    let mut rng = rng_from_seed(seed);
    let scale = 1.0 / (m as f64).sqrt();
    let mut a = CMat::zeros(m, n);
    for i in 0..m {
        for j in 0..n {
            let s = if rng.random::<bool>() { scale } else { -scale };
            a[(i, j)] = Complex64::new(s, 0.0);
        }
    }
    a
}

/// Skew Hadamard matrix of order `n` (a power of two >= 2): satisfies
/// `H H^T = n I` and `H + H^T = 2I`, built by doubling from order 2.
fn skew_hadamard(n: usize) -> Vec<Vec<f64>> {
    let mut h = vec![vec![1.0, 1.0], vec![-1.0, 1.0]];
    while h.len() < n {
        let s = h.len();
        let mut next = vec![vec![0.0; 2 * s]; 2 * s];
        for i in 0..s {
            for j in 0..s {
                next[i][j] = h[i][j];
                next[i][j + s] = h[i][j];
                next[i + s][j] = -h[j][i];
                next[i + s][j + s] = h[j][i];
            }
        }
        h = next;
    }
    h
}

/// Equiangular tight frame of `N = 2M` unit vectors in `C^M`.
///
/// A skew Hadamard matrix `H` of order `N` yields a skew conference matrix
/// `C = H - I` with `C C^T = (N-1) I`, so `S = iC` is Hermitian with
/// `S^2 = (N-1) I`. The Hermitian matrix `G = I + S/sqrt(N-1)` then has unit
/// diagonal, off-diagonal modulus exactly `1/sqrt(N-1)` (the Welch bound for
/// `N = 2M`), and eigenvalues {0, 2} with rank `M` — precisely the Gram
/// matrix of an equiangular tight frame. Writing `G = 2 Q Q^H` with `Q` an
/// orthonormal basis of its range (from a pivoted QR) gives the frame as
/// `A = sqrt(2) Q^H`.
fn build_etf(m: usize, n: usize) -> Result<CMat, Error> {
    if n != 2 * m || !m.is_power_of_two() || m < 2 {
        return Err(Error::UnsupportedMatrix {
            family: "equiangular tight frame (needs N = 2M, M a power of two >= 2)",
            m,
            n,
        });
    }
    let h = skew_hadamard(n);
    let inv_root = 1.0 / ((n - 1) as f64).sqrt();
    // P = G/2 with G = I + i(H - I)/sqrt(N-1): a rank-M projector.
    let mut p = CMat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let c = if i == j { 0.0 } else { h[i][j] };
            let g = Complex64::new(if i == j { 1.0 } else { 0.0 }, c * inv_root);
            p[(i, j)] = 0.5 * g;
        }
    }
    let qr = qr_col_piv(&p);
    let root2 = core::f64::consts::SQRT_2;
    let mut a = CMat::zeros(m, n);
    for i in 0..m {
        let q = qr.q_column(i);
        for j in 0..n {
            a[(i, j)] = root2 * q[j].conj();
        }
    }
    Ok(a)
}

/// Scale every column to exactly unit energy.
fn normalize_columns(a: &mut CMat) -> Result<(), Error> {
    for j in 0..a.cols {
        let e = a.col_energy(j);
        if !(e > 0.0) || !e.is_finite() {
            return Err(Error::invalid("matrix has a zero or non-finite column"));
        }
        a.scale_col(j, 1.0 / e.sqrt());
    }
    Ok(())
}

fn entries_are_real(a: &CMat) -> bool {
    a.data.iter().all(|v| v.im == 0.0)
}

/// Build an `M x N` sensing matrix of the requested family.
pub fn build_matrix(
    family: MatrixFamily,
    m: usize,
    n: usize,
    seed: u64,
) -> Result<SensingMatrix, Error> {
    check_dims(m, n)?;
    let mut matrix = match family {
        MatrixFamily::PartialDft => build_partial_dft(m, n, seed),
        MatrixFamily::RandomPartialDft => build_random_partial_dft(m, n, seed),
        MatrixFamily::Etf => build_etf(m, n)?,
        MatrixFamily::Gaussian => build_gaussian(m, n, seed),
        MatrixFamily::Uniform => build_uniform(m, n, seed),
        MatrixFamily::Bernoulli => build_bernoulli(m, n, seed),
        MatrixFamily::Custom => {
            return Err(Error::invalid(
                "custom matrices come from imported data, not a generator",
            ))
        }
    };
    // Continuous-entry families (and the numerically built frame) get their
    // columns normalized; the remaining families are unit-energy exactly.
    if matches!(
        family,
        MatrixFamily::Gaussian | MatrixFamily::Uniform | MatrixFamily::Etf
    ) {
        normalize_columns(&mut matrix)?;
    }
    let real_entries = family.is_real();
    Ok(SensingMatrix { matrix, family, m, n, seed, real_entries })
}

impl SensingMatrix {
    /// Wrap an externally supplied matrix, normalizing its columns.
    pub fn from_raw(mut matrix: CMat, family: MatrixFamily) -> Result<Self, Error> {
        check_dims(matrix.rows, matrix.cols)?;
        normalize_columns(&mut matrix)?;
        let real_entries = entries_are_real(&matrix);
        let (m, n) = (matrix.rows, matrix.cols);
        Ok(SensingMatrix { matrix, family, m, n, seed: 0, real_entries })
    }

    /// Human-readable identity, e.g. `partial-dft 128x256`.
    pub fn describe(&self) -> String {
        alloc::format!("{} {}x{}", self.family.label(), self.m, self.n)
    }
}

// ---------------------------------------------------------------------------
// Operators

/// Measure `y = A x`.
pub fn measure(a: &SensingMatrix, x: &[Complex64]) -> Result<Vec<Complex64>, Error> {
    if x.len() != a.n {
        return Err(Error::DimensionMismatch { expected: a.n, got: x.len() });
    }
    Ok(a.matrix.matvec(x))
}

/// Initial spectral estimate `A^H y`: per-coefficient energy estimates are
/// unbiased because the columns have unit energy.
pub fn initial_estimate(a: &SensingMatrix, y: &[Complex64]) -> Result<Vec<Complex64>, Error> {
    if y.len() != a.m {
        return Err(Error::DimensionMismatch { expected: a.m, got: y.len() });
    }
    Ok(a.matrix.herm_matvec(y))
}

/// Measure the matrix's coherence structure (cost `O(M N^2)`).
pub fn coherence_report(a: &SensingMatrix) -> CoherenceReport {
    let g = a.matrix.gram();
    let n = a.n;
    let mut max_c = 0.0f64;
    let mut sum_sq = 0.0f64;
    let mut pairs = 0usize;
    for i in 0..n {
        for j in (i + 1)..n {
            let c = g[(i, j)].norm();
            max_c = max_c.max(c);
            sum_sq += c * c;
            pairs += 1;
        }
    }
    let mean_sq = if pairs > 0 { sum_sq / pairs as f64 } else { 0.0 };
    let welch = if n > a.m && n > 1 {
        (((n - a.m) as f64) / ((a.m * (n - 1)) as f64)).sqrt()
    } else {
        0.0
    };
    CoherenceReport {
        max_coherence: max_c,
        mean_sq_coherence: mean_sq,
        welch_bound: welch,
        unique_recovery_limit: crate::theory::uniqueness_bound(max_c),
    }
}

// ---------------------------------------------------------------------------
