//! Closed-form error and recovery predictions.
//!
//! For a `K`-sparse signal measured by an `M x N` unit-energy-column matrix
//! and stored in B-bit registers, the expected reconstruction error on the
//! dominant support decomposes into three additive parts:
//!
//! * quantization — `K * sigma_e^2` (fixed point) or
//!   `(K^2/M) * sigma_X^2 * sigma_e^2` (floating point),
//! * nonsparsity — `K * sigma_mu^2 * ||X - X_K||^2`,
//! * folding — `(K/M) * sigma_z^2`, where `sigma_z^2` is the total energy
//!   injected into the dominant coefficients by an earlier noisy stage.
//!
//! `sigma_e^2` is the register-noise variance per sample (`step^2/12` real,
//! `step^2/6` complex) and `sigma_mu^2` the family's mean-square column
//! coherence. The module also carries the coherence-based uniqueness bounds
//! with and without register effects, the sparsity-versus-bits logarithmic
//! error form, and the sign-matrix small-`K` error correction.

use crate::error::Error;
use crate::quantize::ArithmeticMode;
use crate::sensing::MatrixFamily;
#[allow(unused_imports)]
use num_traits::Float;

/// Register-noise variance per stored sample: `step^2 / 12` for real
/// samples, `step^2 / 6` for complex samples (two registers each),
/// `step = 2^-B`.
pub fn sigma_e_sq(bits: u32, complex: bool) -> f64 {
    let step = (-(bits as f64)).exp2();
    let base = step * step / 12.0;
    if complex {
        2.0 * base
    } else {
        base
    }
}

/// Mean-square column coherence of a matrix family.
///
/// Deterministic-frequency partial DFT matrices and equiangular tight
/// frames give `(N - M) / (M (N - 1))`; every random-entry family (and the
/// continuous-frequency DFT) gives `1/M`. Matrices supplied from outside
/// have no formula — measure them instead.
pub fn sigma_mu_sq(family: MatrixFamily, m: usize, n: usize) -> Result<f64, Error> {
    if m == 0 || n < 2 || m > n {
        return Err(Error::invalid("coherence formulas need 1 <= M <= N, N >= 2"));
    }
    Ok(match family {
        MatrixFamily::PartialDft | MatrixFamily::Etf => {
            (n - m) as f64 / ((m * (n - 1)) as f64)
        }
        MatrixFamily::RandomPartialDft
        | MatrixFamily::Gaussian
        | MatrixFamily::Uniform
        | MatrixFamily::Bernoulli => 1.0 / m as f64,
        MatrixFamily::Custom => {
            return Err(Error::UnsupportedMatrix {
                family: "custom (no closed-form coherence; measure it)",
                m,
                n,
            })
        }
    })
}

/// Largest sparsity `K` with guaranteed unique recovery: `K < (1 + 1/mu)/2`.
///
/// Bounds within `1e-9` of an integer are treated as exactly integral so
/// that rational coherences (like `mu = 1/9`) resolve the strict inequality
/// correctly. A coherence of zero (orthogonal columns) saturates to
/// `usize::MAX`.
pub fn uniqueness_bound(mu: f64) -> usize {
    bound_to_count(0.5 * (1.0 + 1.0 / mu))
}

/// Uniqueness bound with register effects: worst-case row-sum `sqrt(M)`
/// register noise shrinks the detection margin, giving
/// `K < (1 + 1/mu - sqrt(M) * step / mu) / 2`, `step = 2^-B`.
pub fn uniqueness_bound_quantized(mu: f64, m: usize, bits: u32) -> usize {
    let step = (-(bits as f64)).exp2();
    bound_to_count(0.5 * (1.0 + 1.0 / mu - (m as f64).sqrt() * step / mu))
}

/// Largest integer strictly below `bound`, clamped at zero.
fn bound_to_count(bound: f64) -> usize {
    if !bound.is_finite() {
        return usize::MAX;
    }
    let snapped = bound.round();
    let b = if (bound - snapped).abs() < 1e-9 * bound.abs().max(1.0) {
        snapped
    } else {
        bound
    };
    let k = if b.fract() == 0.0 { b - 1.0 } else { b.floor() };
    if k <= 0.0 {
        0
    } else {
        k as usize
    }
}

/// Expected reconstruction error in decibels for a `K`-sparse complex
/// signal, `10 log10(K * 2^-2B / 6)` — the familiar
/// `3.01 log2 K - 6.02 B - 7.78` in its exact form.
pub fn log_error_db(k: usize, bits: u32) -> f64 {
    let step_sq = (-2.0 * bits as f64).exp2();
    10.0 * (k as f64 * step_sq / 6.0).log10()
}

/// Sparsity beyond which sign-matrix register errors decorrelate across
/// measurements and the standard `K * sigma_e^2` prediction applies.
pub const SIGN_MATRIX_DECORRELATION_SPARSITY: usize = 14;

/// Error correction for sign matrices (`±1/sqrt(M)` entries) at small `K`,
/// returned as a multiplier on `K * sigma_e^2`.
///
/// With few active coefficients a measurement takes one of only `2^K`
/// values, so rows whose sign patterns agree up to a global flip (pairwise
/// probability `2^(1-K)`) produce identical — perfectly correlated —
/// register errors instead of independent ones:
///
/// * `K = 1`: every row pair aligns; the error is `(M/2) * sigma_e^2` in
///   the complex-sample convention (`M * step^2/12` for the real
///   measurements a sign matrix produces).
/// * `2 <= K < 14`: multiplier `1 + (M - 1) * 2^(1-K)` from the alignment
///   probability.
/// * `K >= 14`: alignment is negligible (below 2.5% even at `M = 192`) and
///   the multiplier is 1.
pub fn bernoulli_small_k_correction(k: usize, m: usize) -> f64 {
    if k == 1 {
        m as f64 / 2.0
    } else if k < SIGN_MATRIX_DECORRELATION_SPARSITY {
        1.0 + (m as f64 - 1.0) * (1.0 - k as f64).exp2()
    } else {
        1.0
    }
}

// ---------------------------------------------------------------------------
// Scenario prediction

/// Everything the closed-form error prediction needs to know about one
/// measurement-and-reconstruction setup.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioSpec {
    /// Signal length.
    pub n: usize,
    /// Measurement count.
    pub m: usize,
    /// Dominant-coefficient count.
    pub k: usize,
    /// Measurement-matrix family (selects the coherence formula).
    pub family: MatrixFamily,
    /// Register width in bits.
    pub bits: u32,
    /// Complex measurements (two registers per sample) versus real.
    pub complex_signal: bool,
    /// Energy outside the dominant support, `||X - X_K||^2`.
    pub tail_energy: f64,
    /// Total energy injected into the dominant coefficients by an earlier
    /// noisy processing stage (0 when the coefficients are exact).
    pub sigma_z_sq: f64,
    /// Energy of the dominant part, `||X_K||^2`.
    pub signal_energy_k: f64,
    /// Register arithmetic of the measurement stage.
    pub mode: ArithmeticMode,
    /// Per-coefficient signal variance (floating-point model only).
    pub sigma_x_sq: f64,
}

impl ScenarioSpec {
    /// Strictly sparse fixed-point scenario; extend with the builder
    /// methods for tails, folding, or floating-point registers.
    pub fn sparse_fixed(
        n: usize,
        m: usize,
        k: usize,
        family: MatrixFamily,
        bits: u32,
        complex_signal: bool,
        signal_energy_k: f64,
    ) -> Self {
        ScenarioSpec {
            n,
            m,
            k,
            family,
            bits,
            complex_signal,
            tail_energy: 0.0,
            sigma_z_sq: 0.0,
            signal_energy_k,
            mode: ArithmeticMode::Fixed,
            sigma_x_sq: 0.0,
        }
    }

    /// Add off-support energy `||X - X_K||^2`.
    pub fn with_tail_energy(mut self, tail_energy: f64) -> Self {
        self.tail_energy = tail_energy;
        self
    }

    /// Add folded noise with total injected energy `sigma_z_sq`.
    pub fn with_folded_noise(mut self, sigma_z_sq: f64) -> Self {
        self.sigma_z_sq = sigma_z_sq;
        self
    }

    /// Switch the measurement registers to the floating-point model with
    /// per-coefficient signal variance `sigma_x_sq`.
    pub fn with_floating_point(mut self, sigma_x_sq: f64) -> Self {
        self.mode = ArithmeticMode::Floating;
        self.sigma_x_sq = sigma_x_sq;
        self
    }

    fn validate(&self) -> Result<(), Error> {
        if self.k == 0 || self.k > self.m || self.m > self.n {
            return Err(Error::invalid("scenario needs 1 <= K <= M <= N"));
        }
        if !(self.tail_energy >= 0.0)
            || !(self.sigma_z_sq >= 0.0)
            || !(self.sigma_x_sq >= 0.0)
        {
            return Err(Error::invalid("scenario energies must be non-negative"));
        }
        if !(self.signal_energy_k > 0.0) {
            return Err(Error::invalid(
                "scenario needs positive dominant-signal energy for a defined SNR",
            ));
        }
        Ok(())
    }
}

/// One additive part of the expected reconstruction error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorTerm {
    Quantization,
    Nonsparsity,
    Folding,
}

impl ErrorTerm {
    pub fn label(&self) -> &'static str {
        match self {
            ErrorTerm::Quantization => "quantization",
            ErrorTerm::Nonsparsity => "nonsparsity",
            ErrorTerm::Folding => "folding",
        }
    }
}

/// Closed-form expected reconstruction error and SNR for a scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct TheoryPrediction {
    /// Expected `||X_R - X_K||^2` on the dominant support.
    pub expected_error_energy: f64,
    /// `10 log10(||X_K||^2 / expected_error_energy)`.
    pub snr_th_db: f64,
    /// The largest of the three components (first in enum order on ties).
    pub dominant_term: ErrorTerm,
    /// Per-term breakdown; sums exactly to the total.
    pub components: [(ErrorTerm, f64); 3],
}

impl TheoryPrediction {
    pub fn component(&self, term: ErrorTerm) -> f64 {
        self.components
            .iter()
            .find(|(t, _)| *t == term)
            .map(|(_, v)| *v)
            .unwrap_or(0.0)
    }
}

/// Signal-to-noise ratio in decibels.
pub fn snr_db(signal_energy: f64, error_energy: f64) -> f64 {
    10.0 * (signal_energy / error_energy).log10()
}

/// Evaluate the closed-form expected error for `spec`.
///
/// Fixed point: `K*sigma_e^2 + K*sigma_mu^2*||X-X_K||^2 + (K/M)*sigma_z^2`,
/// with the sign-matrix small-`K` correction applied to the register term
/// (that correction follows the complex-sample convention `step^2/6`).
/// Floating point replaces the register term by
/// `(K^2/M) * sigma_X^2 * sigma_e^2`.
pub fn predict(spec: &ScenarioSpec) -> Result<TheoryPrediction, Error> {
    spec.validate()?;
    let se = sigma_e_sq(spec.bits, spec.complex_signal);
    let k = spec.k as f64;
    let m = spec.m as f64;

    let quantization = match spec.mode {
        ArithmeticMode::Fixed => {
            let base = k * se;
            if spec.family == MatrixFamily::Bernoulli {
                bernoulli_small_k_correction(spec.k, spec.m) * base
            } else {
                base
            }
        }
        ArithmeticMode::Floating => k * k / m * spec.sigma_x_sq * se,
    };

    let nonsparsity = if spec.tail_energy > 0.0 {
        k * sigma_mu_sq(spec.family, spec.m, spec.n)? * spec.tail_energy
    } else {
        0.0
    };

    let folding = k / m * spec.sigma_z_sq;

    let components = [
        (ErrorTerm::Quantization, quantization),
        (ErrorTerm::Nonsparsity, nonsparsity),
        (ErrorTerm::Folding, folding),
    ];
    let expected_error_energy = quantization + nonsparsity + folding;
    if !(expected_error_energy > 0.0) {
        return Err(Error::invalid(
            "scenario predicts zero error energy; SNR undefined",
        ));
    }
    let mut dominant_term = ErrorTerm::Quantization;
    let mut best = quantization;
    for (t, v) in components.iter().skip(1) {
        if *v > best {
            best = *v;
            dominant_term = *t;
        }
    }
    Ok(TheoryPrediction {
        expected_error_energy,
        snr_th_db: snr_db(spec.signal_energy_k, expected_error_energy),
        dominant_term,
        components,
    })
}

/// Gaussian approximations of the initial estimate: at a dominant position
/// the normalized amplitude behaves as `N(1, (K-1)sigma_mu^2 + sigma_e^2)`;
/// elsewhere as `N(0, K sigma_mu^2 + sigma_e^2)`. Diagnostic only — not a
/// recovery guarantee.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionDiagnostics {
    pub on_support_mean: f64,
    pub on_support_var: f64,
    pub off_support_var: f64,
}

pub fn detection_diagnostics(
    k: usize,
    sigma_mu_sq: f64,
    sigma_e_sq: f64,
) -> DetectionDiagnostics {
    DetectionDiagnostics {
        on_support_mean: 1.0,
        on_support_var: (k.saturating_sub(1)) as f64 * sigma_mu_sq + sigma_e_sq,
        off_support_var: k as f64 * sigma_mu_sq + sigma_e_sq,
    }
}

// ---------------------------------------------------------------------------
