//! Experiment configuration: a flat TOML document.
//!
//! Grammar: one table of `key = value` pairs, no nesting. Integer lists use
//! TOML array syntax. Unknown keys are rejected so typos fail loudly.
//!
//! ```toml
//! # Required
//! n = 256                       # signal length
//! m_list = [128, 170, 192]      # measurement counts to sweep
//! k_list = [5, 10, 15]          # sparsity levels to sweep
//! b_list = [4, 6, 8, 10, 12]    # register widths to sweep
//! family = "partial-dft"        # partial-dft | random-partial-dft | etf |
//!                               # gaussian | uniform | bernoulli
//! scenario = "sparse"           # sparse | nonsparse | folded
//! algorithm = "omp"             # omp | iht | bayesian
//! trials = 100
//! seed = 1
//!
//! # Optional (defaults shown)
//! amplitude_jitter_max = 0.4    # dominant amplitudes sqrt(M)/K * (1 - nu), nu ~ U(0, this)
//! tail_decay_scale = 1.0        # nonsparse tail exp(-p / (this * K))
//! fold_sigma = 0.0001           # folded scenario: noise std per coefficient register
//! fold_bits = 0                 # folded coefficient register width; 0 tracks b_list
//! phase = "random"              # random | real
//! matrix_mode = "fresh"         # fresh (new matrix per trial) | fixed (one per point)
//! snr_averaging = "energy"      # energy (average energies, then log) | db (mean of per-trial dB)
//! quantize_measurements = true  # false reproduces the unquantized baseline
//! arithmetic = "fixed"          # fixed | floating
//! output_path = "results.csv"   # optional; --out overrides
//! ```
//!
//! The environment variable `QCS_SEED` overrides `seed` when set, so a whole
//! script of runs can be re-seeded without editing configs.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use qcs_core::prelude::*;
use qcs_core::quantize::ArithmeticMode;

use crate::errors::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyChoice {
    PartialDft,
    RandomPartialDft,
    Etf,
    Gaussian,
    Uniform,
    Bernoulli,
}

impl From<FamilyChoice> for MatrixFamily {
    fn from(c: FamilyChoice) -> Self {
        match c {
            FamilyChoice::PartialDft => MatrixFamily::PartialDft,
            FamilyChoice::RandomPartialDft => MatrixFamily::RandomPartialDft,
            FamilyChoice::Etf => MatrixFamily::Etf,
            FamilyChoice::Gaussian => MatrixFamily::Gaussian,
            FamilyChoice::Uniform => MatrixFamily::Uniform,
            FamilyChoice::Bernoulli => MatrixFamily::Bernoulli,
        }
    }
}

/// Signal-and-noise shape of a run: strictly sparse signals, approximately
/// sparse signals (exponential tail), or approximately sparse signals whose
/// coefficients additionally passed through noisy finite-precision registers
/// before measurement (noise folding).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scenario {
    Sparse,
    Nonsparse,
    Folded,
}

impl Scenario {
    pub fn label(&self) -> &'static str {
        match self {
            Scenario::Sparse => "sparse",
            Scenario::Nonsparse => "nonsparse",
            Scenario::Folded => "folded",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgorithmChoice {
    Omp,
    Iht,
    Bayesian,
}

impl From<AlgorithmChoice> for Algorithm {
    fn from(c: AlgorithmChoice) -> Self {
        match c {
            AlgorithmChoice::Omp => Algorithm::Omp,
            AlgorithmChoice::Iht => Algorithm::Iht,
            AlgorithmChoice::Bayesian => Algorithm::Bayesian,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum PhaseChoice {
    #[default]
    Random,
    Real,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum MatrixMode {
    /// A fresh matrix realization per trial.
    #[default]
    Fresh,
    /// One matrix realization shared by all trials of a sweep point.
    Fixed,
}

impl MatrixMode {
    pub fn label(&self) -> &'static str {
        match self {
            MatrixMode::Fresh => "fresh",
            MatrixMode::Fixed => "fixed",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum SnrAveraging {
    /// Average signal and error energies across trials, then take one log.
    #[default]
    Energy,
    /// Mean of the per-trial SNRs in dB (sensitivity-check alternative).
    Db,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ArithmeticChoice {
    #[default]
    Fixed,
    Floating,
}

impl From<ArithmeticChoice> for ArithmeticMode {
    fn from(c: ArithmeticChoice) -> Self {
        match c {
            ArithmeticChoice::Fixed => ArithmeticMode::Fixed,
            ArithmeticChoice::Floating => ArithmeticMode::Floating,
        }
    }
}

fn default_jitter() -> f64 {
    0.4
}
fn default_decay() -> f64 {
    1.0
}
fn default_fold_sigma() -> f64 {
    1e-4
}
fn default_true() -> bool {
    true
}

/// One Monte Carlo sweep: the cartesian product of `m_list`, `k_list`, and
/// `b_list` for a single (family, scenario, algorithm) triple.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n: usize,
    pub m_list: Vec<usize>,
    pub k_list: Vec<usize>,
    pub b_list: Vec<u32>,
    pub family: FamilyChoice,
    pub scenario: Scenario,
    pub algorithm: AlgorithmChoice,
    pub trials: usize,
    pub seed: u64,
    #[serde(default = "default_jitter")]
    pub amplitude_jitter_max: f64,
    #[serde(default = "default_decay")]
    pub tail_decay_scale: f64,
    #[serde(default = "default_fold_sigma")]
    pub fold_sigma: f64,
    #[serde(default)]
    pub fold_bits: u32,
    #[serde(default)]
    pub phase: PhaseChoice,
    #[serde(default)]
    pub matrix_mode: MatrixMode,
    #[serde(default)]
    pub snr_averaging: SnrAveraging,
    #[serde(default = "default_true")]
    pub quantize_measurements: bool,
    #[serde(default)]
    pub arithmetic: ArithmeticChoice,
    #[serde(default)]
    pub output_path: Option<PathBuf>,
}

impl ExperimentConfig {
    /// Parse a TOML config file, apply the `QCS_SEED` override, validate.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)?;
        let mut cfg: ExperimentConfig = toml::from_str(&text)
            .map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
        cfg.apply_seed_override()?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Replace `seed` with the value of `QCS_SEED` when the variable is set.
    pub fn apply_seed_override(&mut self) -> Result<(), CliError> {
        if let Ok(v) = std::env::var("QCS_SEED") {
            self.seed = v
                .trim()
                .parse::<u64>()
                .map_err(|_| CliError::config(format!("QCS_SEED must be a u64, got {v:?}")))?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let fail = |msg: String| Err(CliError::Config(msg));
        if self.n < 2 {
            return fail(format!("n = {} is too small", self.n));
        }
        if self.m_list.is_empty() || self.k_list.is_empty() || self.b_list.is_empty() {
            return fail("m_list, k_list, and b_list must be non-empty".into());
        }
        if self.trials < 1 {
            return fail("trials must be at least 1".into());
        }
        for &m in &self.m_list {
            if m < 1 || m > self.n {
                return fail(format!("m = {m} must satisfy 1 <= m <= n = {}", self.n));
            }
            if self.family == FamilyChoice::Etf && (self.n != 2 * m || !m.is_power_of_two()) {
                return fail(format!(
                    "the equiangular tight frame needs n = 2m with m a power of two; got m = {m}, n = {}",
                    self.n
                ));
            }
            for &k in &self.k_list {
                if k > m {
                    return fail(format!("k = {k} exceeds m = {m}; no point can reconstruct"));
                }
            }
        }
        for &k in &self.k_list {
            if k < 1 || k >= self.n {
                return fail(format!("k = {k} must satisfy 1 <= k < n = {}", self.n));
            }
        }
        for &b in &self.b_list {
            if !(1..=52).contains(&b) {
                return fail(format!("b = {b} must lie in 1..=52"));
            }
        }
        if !(0.0..1.0).contains(&self.amplitude_jitter_max) {
            return fail("amplitude_jitter_max must lie in [0, 1)".into());
        }
        if !(self.tail_decay_scale > 0.0) {
            return fail("tail_decay_scale must be positive".into());
        }
        if !(self.fold_sigma >= 0.0) {
            return fail("fold_sigma must be non-negative".into());
        }
        if self.fold_bits > 52 {
            return fail("fold_bits must lie in 0..=52 (0 tracks the measurement width)".into());
        }
        if self.scenario == Scenario::Folded && self.fold_bits == 0 && !self.quantize_measurements
        {
            return fail(
                "folded scenario with fold_bits = 0 tracks the measurement width; \
                 set fold_bits explicitly when quantize_measurements = false"
                    .into(),
            );
        }
        Ok(())
    }

    /// Register width for the folded coefficient registers at measurement
    /// width `b`: `fold_bits`, or `b` itself when tracking.
    pub fn fold_register_bits(&self, b: u32) -> u32 {
        if self.fold_bits == 0 {
            b
        } else {
            self.fold_bits
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base_toml() -> String {
        r#"
            n = 256
            m_list = [128]
            k_list = [10]
            b_list = [6]
            family = "partial-dft"
            scenario = "sparse"
            algorithm = "omp"
            trials = 3
            seed = 7
        "#
        .to_string()
    }

    #[test]
    fn minimal_config_parses_with_defaults() {
        let cfg: ExperimentConfig = toml::from_str(&base_toml()).unwrap();
        cfg.validate().unwrap();
        assert_eq!(cfg.amplitude_jitter_max, 0.4);
        assert_eq!(cfg.tail_decay_scale, 1.0);
        assert_eq!(cfg.fold_sigma, 1e-4);
        assert_eq!(cfg.fold_bits, 0);
        assert_eq!(cfg.phase, PhaseChoice::Random);
        assert_eq!(cfg.matrix_mode, MatrixMode::Fresh);
        assert_eq!(cfg.snr_averaging, SnrAveraging::Energy);
        assert!(cfg.quantize_measurements);
        assert_eq!(cfg.arithmetic, ArithmeticChoice::Fixed);
        assert!(cfg.output_path.is_none());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = base_toml() + "\nnot_a_key = 1\n";
        assert!(toml::from_str::<ExperimentConfig>(&text).is_err());
    }

    #[test]
    fn unsupported_tight_frame_shape_is_rejected() {
        let text = base_toml().replace("\"partial-dft\"", "\"etf\"").replace("[128]", "[100]");
        let cfg: ExperimentConfig = toml::from_str(&text).unwrap();
        assert!(matches!(cfg.validate(), Err(CliError::Config(_))));
    }

    #[test]
    fn sparsity_above_measurement_count_is_rejected() {
        let text = base_toml().replace("k_list = [10]", "k_list = [200]");
        let cfg: ExperimentConfig = toml::from_str(&text).unwrap();
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn fold_register_width_tracks_or_pins() {
        let mut cfg: ExperimentConfig = toml::from_str(&base_toml()).unwrap();
        assert_eq!(cfg.fold_register_bits(12), 12);
        cfg.fold_bits = 8;
        assert_eq!(cfg.fold_register_bits(12), 8);
    }
}
