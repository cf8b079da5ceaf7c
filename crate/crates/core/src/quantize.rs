//! Finite-precision register models.
//!
//! Fixed-point: a B-bit register stores values on the mid-tread grid
//! `step * round(v / step)` with `step = 2^-B`, clamped to the representable
//! range `[-1, 1 - step]`; clamping events are counted as saturations.
//! Rounding breaks ties away from zero. Complex samples use one register per
//! real component, so the additive register noise has variance `step^2 / 12`
//! per real component (`step^2 / 6` per complex sample).
//!
//! Floating-point: each real component is stored as `v * (1 + e)` with `e`
//! uniform on `[-step/2, step/2]` — a B-bit mantissa's relative rounding
//! error. Floating registers do not saturate.
//!
//! Folding: spectral coefficients that were themselves produced by an earlier
//! finite-precision stage carry independent noise plus their own register
//! error; [`fold_coefficients`] applies both to the dominant coefficients.

use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::Error;
use crate::rng::rng_from_seed;

/// Whether registers hold fixed-point or floating-point words.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ArithmeticMode {
    #[default]
    Fixed,
    Floating,
}

/// Register width and sample layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuantizerSpec {
    /// Register width in bits; the grid step is `2^-bits`.
    pub bits: u32,
    /// Complex samples (two registers each) versus purely real samples.
    pub complex: bool,
    /// Fixed- or floating-point storage.
    pub mode: ArithmeticMode,
}

impl QuantizerSpec {
    /// B-bit fixed-point registers.
    pub fn fixed(bits: u32, complex: bool) -> Result<Self, Error> {
        Self::validate_bits(bits)?;
        Ok(QuantizerSpec { bits, complex, mode: ArithmeticMode::Fixed })
    }

    /// B-bit-mantissa floating-point registers.
    pub fn floating(bits: u32, complex: bool) -> Result<Self, Error> {
        Self::validate_bits(bits)?;
        Ok(QuantizerSpec { bits, complex, mode: ArithmeticMode::Floating })
    }

    fn validate_bits(bits: u32) -> Result<(), Error> {
        if !(1..=52).contains(&bits) {
            return Err(Error::invalid("register width must lie in 1..=52 bits"));
        }
        Ok(())
    }

    /// Grid step `2^-bits`.
    pub fn step(&self) -> f64 {
        (-(self.bits as f64)).exp2()
    }
}

/// Stored values plus the noise the registers introduced.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantizeOutput {
    /// Register contents.
    pub values: Vec<Complex64>,
    /// Additive register noise per sample, oriented so that
    /// `stored + error = exact` (the stored word plus the noise recovers the
    /// exact value).
    pub errors: Vec<Complex64>,
    /// Number of real components that hit the register bounds.
    pub saturations: usize,
}

impl QuantizeOutput {
    /// Total noise energy `sum |exact - stored|^2`.
    pub fn error_energy(&self) -> f64 {
        crate::matrix::energy(&self.errors)
    }
}

/// Round one real component to the register grid, clamping to
/// `[-1, 1 - step]`; increments `saturations` when the clamp engages.
fn store_fixed(v: f64, step: f64, saturations: &mut usize) -> f64 {
    let q = (v / step).round() * step;
    let top = 1.0 - step;
    if q > top {
        *saturations += 1;
        top
    } else if q < -1.0 {
        *saturations += 1;
        -1.0
    } else {
        q
    }
}

/// Store `values` in B-bit fixed-point registers.
///
/// In real mode (`spec.complex == false`) only the real parts pass through
/// registers; imaginary parts are carried along untouched and are expected
/// to be zero.
pub fn quantize_fixed(values: &[Complex64], spec: &QuantizerSpec) -> QuantizeOutput {
    let step = spec.step();
    let mut saturations = 0usize;
    let mut stored = Vec::with_capacity(values.len());
    let mut errors = Vec::with_capacity(values.len());
    for &v in values {
        let re = store_fixed(v.re, step, &mut saturations);
        let im = if spec.complex { store_fixed(v.im, step, &mut saturations) } else { v.im };
        let q = Complex64::new(re, im);
        stored.push(q);
        errors.push(v - q);
    }
    QuantizeOutput { values: stored, errors, saturations }
}

/// Store `values` in floating-point registers with a B-bit mantissa: each
/// real component becomes `v * (1 + e)`, `e` uniform on `[-step/2, step/2]`,
/// drawn from the stream seeded by `seed`.
pub fn quantize_floating(
    values: &[Complex64],
    spec: &QuantizerSpec,
    seed: u64,
) -> QuantizeOutput {
    let mut rng = rng_from_seed(seed);
    let half = 0.5 * spec.step();
    let mut rel = |v: f64| {
        let e = (2.0 * rng.random::<f64>() - 1.0) * half;
        v * (1.0 + e)
    };
    let mut stored = Vec::with_capacity(values.len());
    let mut errors = Vec::with_capacity(values.len());
    for &v in values {
        let re = rel(v.re);
        let im = if spec.complex { rel(v.im) } else { v.im };
        let q = Complex64::new(re, im);
        stored.push(q);
        errors.push(v - q);
    }
    QuantizeOutput { values: stored, errors, saturations: 0 }
}

/// Store `values` according to `spec.mode`; `seed` feeds the floating model
/// and is ignored for fixed-point registers.
pub fn quantize(values: &[Complex64], spec: &QuantizerSpec, seed: u64) -> QuantizeOutput {
    match spec.mode {
        ArithmeticMode::Fixed => quantize_fixed(values, spec),
        ArithmeticMode::Floating => quantize_floating(values, spec, seed),
    }
}

// ---------------------------------------------------------------------------

/// Noise-plus-register model for spectral coefficients that arrive from an
/// earlier finite-precision processing stage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FoldingSpec {
    /// Variance of the circular complex noise added per dominant coefficient.
    pub sigma_z_sq: f64,
    /// Width of the registers holding the folded coefficients.
    pub bits: u32,
    /// Seed for the injected noise.
    pub seed: u64,
}

impl FoldingSpec {
    pub fn new(sigma_z_sq: f64, bits: u32, seed: u64) -> Result<Self, Error> {
        if !(sigma_z_sq >= 0.0) {
            return Err(Error::invalid("injected noise variance must be non-negative"));
        }
        QuantizerSpec::validate_bits(bits)?;
        Ok(FoldingSpec { sigma_z_sq, bits, seed })
    }

    /// Expected total energy injected across `k` dominant coefficients:
    /// `k * (sigma_z_sq + step^2 / 6)`.
    pub fn expected_injected_energy(&self, k: usize) -> f64 {
        let step = (-(self.bits as f64)).exp2();
        k as f64 * (self.sigma_z_sq + step * step / 6.0)
    }
}

/// Result of folding register noise into the dominant coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct FoldOutput {
    /// Full-length coefficient vector with the dominant entries replaced by
    /// their noisy, re-quantized versions.
    pub coefficients: Vec<Complex64>,
    /// Energy actually injected, `sum over support |folded - exact|^2`.
    pub injected_energy: f64,
    /// Real components of folded coefficients that hit the register bounds.
    pub saturations: usize,
}

/// Pass the dominant coefficients of `x` through an earlier noisy stage:
/// add circular complex noise of variance `sigma_z_sq`, then store the sum
/// in B-bit fixed-point registers. Off-support coefficients are untouched.
///
/// The coefficients themselves must fit the register range (`|Re|`, `|Im|`
/// at most 1), otherwise the scenario is misconfigured and
/// [`Error::RangeViolation`] is returned — generate the signal with a
/// unit-range amplitude cap.
pub fn fold_coefficients(
    x: &[Complex64],
    support: &[usize],
    spec: &FoldingSpec,
) -> Result<FoldOutput, Error> {
    let mut max_abs = 0.0f64;
    for &i in support {
        if i >= x.len() {
            return Err(Error::invalid("support index out of range"));
        }
        max_abs = max_abs.max(x[i].re.abs()).max(x[i].im.abs());
    }
    if max_abs > 1.0 {
        return Err(Error::RangeViolation { max_abs, bound: 1.0 });
    }

    let mut rng = rng_from_seed(spec.seed);
    let per_component = Normal::new(0.0, (0.5 * spec.sigma_z_sq).sqrt())
        .map_err(|_| Error::invalid("injected noise variance must be finite"))?;
    let register = QuantizerSpec::fixed(spec.bits, true)?;
    let step = register.step();

    let mut out = x.to_vec();
    let mut injected_energy = 0.0;
    let mut saturations = 0usize;
    for &i in support {
        let z = Complex64::new(per_component.sample(&mut rng), per_component.sample(&mut rng));
        let noisy = x[i] + z;
        let folded = Complex64::new(
            store_fixed(noisy.re, step, &mut saturations),
            store_fixed(noisy.im, step, &mut saturations),
        );
        injected_energy += (folded - x[i]).norm_sqr();
        out[i] = folded;
    }
    Ok(FoldOutput { coefficients: out, injected_energy, saturations })
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn two_bit_register_rounds_to_the_quarter_grid() {
        let spec = QuantizerSpec::fixed(2, false).unwrap();
        let out = quantize_fixed(&[c(0.7)], &spec);
        assert_eq!(out.values[0], c(0.75));
        assert!((out.errors[0].re + 0.05).abs() < 1e-15);
        assert_eq!(out.saturations, 0);

        // Ties round away from zero.
        let out = quantize_fixed(&[c(-0.125)], &spec);
        assert_eq!(out.values[0], c(-0.25));
    }

    #[test]
    fn register_bounds_clamp_and_count() {
        let spec = QuantizerSpec::fixed(2, false).unwrap();
        let out = quantize_fixed(&[c(0.99), c(-1.2), c(0.5)], &spec);
        assert_eq!(out.values[0], c(0.75)); // top of range is 1 - 2^-2
        assert_eq!(out.values[1], c(-1.0));
        assert_eq!(out.values[2], c(0.5));
        assert_eq!(out.saturations, 2);
    }

    #[test]
    fn complex_mode_quantizes_both_components() {
        let spec = QuantizerSpec::fixed(3, true).unwrap();
        let v = Complex64::new(0.3, -0.86);
        let out = quantize_fixed(&[v], &spec);
        // step = 0.125: 0.3 -> 0.25 (2.4 rounds to 2), -0.86 -> -0.875.
        assert_eq!(out.values[0], Complex64::new(0.25, -0.875));
        assert!((out.errors[0] - (v - out.values[0])).norm() == 0.0);
    }

    #[test]
    fn quantization_is_idempotent_and_error_bounded() {
        let spec = QuantizerSpec::fixed(5, true).unwrap();
        let mut rng = rng_from_seed(42);
        let vals: Vec<Complex64> = (0..512)
            .map(|_| {
                Complex64::new(1.9 * rng.random::<f64>() - 0.95, 1.9 * rng.random::<f64>() - 0.95)
            })
            .collect();
        let once = quantize_fixed(&vals, &spec);
        let twice = quantize_fixed(&once.values, &spec);
        assert_eq!(once.values, twice.values);
        assert_eq!(twice.saturations, 0);
        let half = 0.5 * spec.step();
        for e in &once.errors {
            assert!(e.re.abs() <= half + 1e-15 && e.im.abs() <= half + 1e-15);
        }
    }

    #[test]
    fn register_noise_statistics_match_the_uniform_model() {
        // Uniform inputs spanning many grid cells: noise per real component
        // should be zero-mean with variance step^2 / 12.
        let spec = QuantizerSpec::fixed(8, false).unwrap();
        let mut rng = rng_from_seed(7);
        let vals: Vec<Complex64> =
            (0..200_000).map(|_| c(1.8 * rng.random::<f64>() - 0.9)).collect();
        let out = quantize_fixed(&vals, &spec);
        let n = vals.len() as f64;
        let mean: f64 = out.errors.iter().map(|e| e.re).sum::<f64>() / n;
        let var: f64 = out.errors.iter().map(|e| e.re * e.re).sum::<f64>() / n;
        let step = spec.step();
        let sigma_sq = step * step / 12.0;
        assert!(mean.abs() < 2e-3 * step, "mean {mean}");
        assert!((var - sigma_sq).abs() < 0.05 * sigma_sq, "var {var} vs {sigma_sq}");
    }

    #[test]
    fn floating_registers_scale_relative_error_with_magnitude() {
        let spec = QuantizerSpec::floating(10, false).unwrap();
        let vals = vec![c(1.0); 20_000];
        let out = quantize_floating(&vals, &spec, 99);
        assert_eq!(out.saturations, 0);
        let half = 0.5 * spec.step();
        for (q, e) in out.values.iter().zip(&out.errors) {
            assert!((q.re - 1.0).abs() <= half + 1e-15);
            assert!((e.re - (1.0 - q.re)).abs() < 1e-15);
        }
        // Mean-square relative error approaches step^2 / 12.
        let msq: f64 =
            out.errors.iter().map(|e| e.norm_sqr()).sum::<f64>() / vals.len() as f64;
        let sigma_sq = spec.step() * spec.step() / 12.0;
        assert!((msq - sigma_sq).abs() < 0.05 * sigma_sq);

        // Ten-fold smaller values carry hundred-fold smaller error energy.
        let small = vec![c(0.1); 20_000];
        let out_small = quantize_floating(&small, &spec, 99);
        let msq_small: f64 =
            out_small.errors.iter().map(|e| e.norm_sqr()).sum::<f64>() / small.len() as f64;
        assert!((msq_small / msq - 0.01).abs() < 0.002);
    }

    #[test]
    fn folding_injects_noise_plus_register_error_on_the_support() {
        let n = 64;
        let support = vec![3usize, 17, 40, 59];
        let mut x = vec![Complex64::ZERO; n];
        for &i in &support {
            x[i] = Complex64::new(0.4, -0.2);
        }
        let spec = FoldingSpec::new(1e-4, 12, 5).unwrap();
        let out = fold_coefficients(&x, &support, &spec).unwrap();
        assert_eq!(out.saturations, 0);
        for i in 0..n {
            if support.contains(&i) {
                assert_ne!(out.coefficients[i], x[i]);
            } else {
                assert_eq!(out.coefficients[i], Complex64::ZERO);
            }
        }
        let direct: f64 = support
            .iter()
            .map(|&i| (out.coefficients[i] - x[i]).norm_sqr())
            .sum();
        assert!((direct - out.injected_energy).abs() <= 1e-15);

        // Across many draws the injected energy matches its expectation.
        let mut total = 0.0;
        let trials = 400;
        for t in 0..trials {
            let spec = FoldingSpec::new(1e-4, 12, 1000 + t).unwrap();
            total += fold_coefficients(&x, &support, &spec).unwrap().injected_energy;
        }
        let mean = total / trials as f64;
        let expected = spec.expected_injected_energy(support.len());
        assert!(
            (mean - expected).abs() < 0.1 * expected,
            "mean {mean} vs expected {expected}"
        );
    }

    #[test]
    fn folding_rejects_coefficients_outside_the_register_range() {
        let x = vec![Complex64::new(1.2, 0.0)];
        let spec = FoldingSpec::new(0.0, 8, 1).unwrap();
        assert!(matches!(
            fold_coefficients(&x, &[0], &spec),
            Err(Error::RangeViolation { .. })
        ));
    }

    #[test]
    fn invalid_register_specs_are_rejected() {
        assert!(QuantizerSpec::fixed(0, true).is_err());
        assert!(QuantizerSpec::fixed(53, true).is_err());
        assert!(FoldingSpec::new(-1.0, 8, 0).is_err());
    }
}
