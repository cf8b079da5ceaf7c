//! Compressive sensing with finite-precision registers.
//!
//! This crate models the full acquisition/recovery chain for sparse spectral
//! signals measured through an `M x N` sensing matrix and stored in B-bit
//! fixed-point (or floating-point) registers:
//!
//! * [`signal`] — sparse and nearly-sparse test-signal generators with
//!   reproducible seeding and exact energy bookkeeping,
//! * [`sensing`] — measurement-matrix families (partial DFT, random partial
//!   DFT, equiangular tight frames, Gaussian, uniform, Bernoulli) with
//!   coherence reporting,
//! * [`quantize`] — register models: mid-tread fixed-point quantization with
//!   saturation accounting, multiplicative floating-point error, and noise
//!   folding into the signal coefficients,
//! * [`recon`] — recovery algorithms (orthogonal matching pursuit, iterative
//!   hard thresholding, and a Bayesian relevance-pruning solver) built on an
//!   internal pivoted-QR least-squares kernel,
//! * [`theory`] — closed-form predictions for the reconstruction error
//!   energy and SNR of every scenario the other modules can produce.
//!
//! The crate is `no_std`-compatible (requires `alloc`); the companion CLI
//! crate carries all file formats and experiment orchestration.
//!
//! # Example
//!
//! Measure a 10-sparse signal with a partial-DFT matrix, quantize to 6-bit
//! registers, reconstruct, and compare against the theoretical error energy:
//!
//! ```
//! use qcs_core::prelude::*;
//!
//! let spec = SignalSpec::sparse(256, 10, 128, 0.4, 7)?;
//! let x = generate_sparse(&spec)?;
//! let a = build_matrix(MatrixFamily::PartialDft, 128, 256, 99)?;
//! let y = measure(&a, &x.coefficients)?;
//! let q = quantize_fixed(&y, &QuantizerSpec::fixed(6, true)?);
//! let cfg = AlgoConfig::for_sparsity(10);
//! let out = reconstruct_omp(&a, &q.values, &cfg)?;
//! assert_eq!(out.support, x.support);
//!
//! let sigma_e_sq = sigma_e_sq(6, true);
//! let err = out.error_energy_vs(&x.coefficients);
//! assert!((err / (10.0 * sigma_e_sq)).ln().abs() < 1.0_f64.ln() + 1.5);
//! # Ok::<(), qcs_core::Error>(())
//! ```

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod error;
pub mod rng;

mod lu;
mod matrix;
mod qr;

pub mod quantize;
pub mod recon;
pub mod sensing;
pub mod signal;
pub mod theory;

pub use error::Error;
pub use matrix::{CMat, RMat};

/// Convenience re-export of the main types and operations.
pub mod prelude {
    pub use crate::error::Error;
    pub use crate::quantize::{
        fold_coefficients, quantize, quantize_fixed, quantize_floating, ArithmeticMode,
        FoldOutput, FoldingSpec, QuantizeOutput, QuantizerSpec,
    };
    pub use crate::recon::{
        reconstruct_bayesian, reconstruct_iht, reconstruct_omp, solve_on_support, AlgoConfig,
        Algorithm, ReconstructionOutput,
    };
    pub use crate::sensing::{
        build_matrix, coherence_report, initial_estimate, measure, CoherenceReport, MatrixFamily,
        SensingMatrix,
    };
    pub use crate::signal::{
        exponential_tail_energy, generate_nonsparse, generate_sparse, sparse_truncation,
        PhaseMode, SignalSpec, SpectralVector, Tail,
    };
    pub use crate::theory::{
        bernoulli_small_k_correction, detection_diagnostics, log_error_db, predict, sigma_e_sq,
        sigma_mu_sq, uniqueness_bound, uniqueness_bound_quantized, DetectionDiagnostics,
        ErrorTerm, ScenarioSpec, TheoryPrediction,
    };
}
