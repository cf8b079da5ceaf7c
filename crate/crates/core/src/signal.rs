//! Sparse and nearly-sparse spectral test signals.
//!
//! A signal is a length-`N` complex coefficient vector with `K` dominant
//! entries. Dominant magnitudes are `scale * (1 - nu)` with `nu` drawn
//! uniformly from `[0, amplitude_jitter_max]` and `scale = sqrt(M)/K` (the
//! normalization that keeps unit-modulus measurement rows inside the
//! `[-1, 1)` register range); optionally the scale is capped at 1 for
//! matrix families that only bound the measurement magnitude in the mean.
//! A nearly-sparse signal adds an exponentially decaying tail
//! `scale * exp(-p/(decay_scale * K))` at the `N - K` remaining positions,
//! `p = K+1..N`.
//!
//! Generation is bit-exact per seed. Draw order (stable contract): support
//! positions first, then one `(nu, phase)` pair per dominant coefficient in
//! ascending support order, then one phase per tail position in ascending
//! index order.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;

use crate::error::Error;
use crate::matrix::energy;
use crate::rng::rng_from_seed;

/// How complex phases are assigned to generated coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PhaseMode {
    /// Uniformly random phase in `[0, 2*pi)` per coefficient.
    #[default]
    RandomPhase,
    /// Real positive coefficients (phase 0).
    Real,
}

/// Decay model for the non-dominant coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tail {
    /// Strictly sparse: all non-dominant coefficients are exactly zero.
    None,
    /// Amplitude `scale * exp(-p / (decay_scale * K))` at tail ordinal `p`.
    Exponential { decay_scale: f64 },
}

/// Parameters of a generated signal.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalSpec {
    /// Signal length.
    pub n: usize,
    /// Number of dominant coefficients.
    pub k: usize,
    /// Number of measurements the amplitude scale is normalized for.
    pub m: usize,
    /// Largest relative amplitude jitter (`nu` upper bound), in `[0, 1)`.
    pub amplitude_jitter_max: f64,
    /// Tail model for the non-dominant coefficients.
    pub tail: Tail,
    /// Phase assignment.
    pub phase: PhaseMode,
    /// Cap the amplitude scale at 1 (`min(sqrt(M)/K, 1)`); required whenever
    /// the coefficients themselves must fit fixed-point registers, and for
    /// matrix families with unbounded entries.
    pub cap_unit_range: bool,
    /// Seed for the signal's random stream.
    pub rng_seed: u64,
}

/// A spectral coefficient vector with its dominant support.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralVector {
    /// Length-`n` coefficient vector.
    pub coefficients: Vec<Complex64>,
    /// Ordered (ascending) positions of the `k` dominant coefficients.
    pub support: Vec<usize>,
    /// Signal length.
    pub n: usize,
    /// Dominant-coefficient count.
    pub k: usize,
}

impl SpectralVector {
    /// Total energy `||x||^2`.
    pub fn energy(&self) -> f64 {
        energy(&self.coefficients)
    }

    /// Energy restricted to the dominant support.
    pub fn support_energy(&self) -> f64 {
        self.support.iter().map(|&i| self.coefficients[i].norm_sqr()).sum()
    }
}

impl SignalSpec {
    /// Strictly sparse spec with random phases and `sqrt(M)/K` amplitude scaling.
    pub fn sparse(
        n: usize,
        k: usize,
        m: usize,
        amplitude_jitter_max: f64,
        rng_seed: u64,
    ) -> Result<Self, Error> {
        let spec = SignalSpec {
            n,
            k,
            m,
            amplitude_jitter_max,
            tail: Tail::None,
            phase: PhaseMode::RandomPhase,
            cap_unit_range: false,
            rng_seed,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Same dominant model plus an exponential tail.
    pub fn nonsparse(
        n: usize,
        k: usize,
        m: usize,
        amplitude_jitter_max: f64,
        decay_scale: f64,
        rng_seed: u64,
    ) -> Result<Self, Error> {
        let mut spec = Self::sparse(n, k, m, amplitude_jitter_max, rng_seed)?;
        spec.tail = Tail::Exponential { decay_scale };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_phase(mut self, phase: PhaseMode) -> Self {
        self.phase = phase;
        self
    }

    pub fn with_unit_range_cap(mut self) -> Self {
        self.cap_unit_range = true;
        self
    }

    /// Amplitude scale actually applied: `sqrt(M)/K`, capped at 1 on request.
    pub fn amplitude_scale(&self) -> f64 {
        let s = (self.m as f64).sqrt() / self.k as f64;
        if self.cap_unit_range {
            s.min(1.0)
        } else {
            s
        }
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.k == 0 {
            return Err(Error::invalid("signal needs at least one dominant coefficient"));
        }
        if self.k >= self.n {
            return Err(Error::invalid(alloc::format!(
                "dominant count K={} must be smaller than the length N={}",
                self.k, self.n
            )));
        }
        if self.m == 0 {
            return Err(Error::invalid("measurement count M must be positive"));
        }
        if !(0.0..1.0).contains(&self.amplitude_jitter_max) {
            return Err(Error::invalid("amplitude jitter must lie in [0, 1)"));
        }
        if let Tail::Exponential { decay_scale } = self.tail {
            if !(decay_scale > 0.0) {
                return Err(Error::invalid("tail decay scale must be positive"));
            }
        }
        Ok(())
    }
}

fn phase_factor(mode: PhaseMode, u: f64) -> Complex64 {
    match mode {
        PhaseMode::RandomPhase => Complex64::from_polar(1.0, 2.0 * core::f64::consts::PI * u),
        PhaseMode::Real => Complex64::ONE,
    }
}

fn generate(spec: &SignalSpec) -> Result<SpectralVector, Error> {
    spec.validate()?;
    let mut rng = rng_from_seed(spec.rng_seed);
    let scale = spec.amplitude_scale();

    let mut support = rand::seq::index::sample(&mut rng, spec.n, spec.k).into_vec();
    support.sort_unstable();

    let mut coefficients = vec![Complex64::ZERO; spec.n];
    for &pos in &support {
        let nu = rng.random::<f64>() * spec.amplitude_jitter_max;
        let u_phase = rng.random::<f64>();
        coefficients[pos] = phase_factor(spec.phase, u_phase) * (scale * (1.0 - nu));
    }

    if let Tail::Exponential { decay_scale } = spec.tail {
        let rate = 1.0 / (decay_scale * spec.k as f64);
        let mut in_support = vec![false; spec.n];
        for &pos in &support {
            in_support[pos] = true;
        }
        let mut p = spec.k;
        for (pos, flag) in in_support.iter().enumerate() {
            if *flag {
                continue;
            }
            p += 1;
            let amplitude = scale * (-(p as f64) * rate).exp();
            let u_phase = rng.random::<f64>();
            coefficients[pos] = phase_factor(spec.phase, u_phase) * amplitude;
        }
    }

    Ok(SpectralVector { coefficients, support, n: spec.n, k: spec.k })
}

/// Generate a strictly `K`-sparse signal from `spec` (its tail is ignored).
pub fn generate_sparse(spec: &SignalSpec) -> Result<SpectralVector, Error> {
    let mut s = spec.clone();
    s.tail = Tail::None;
    generate(&s)
}

/// Generate a nearly-sparse signal: dominant coefficients plus the spec's
/// exponential tail at every remaining position.
pub fn generate_nonsparse(spec: &SignalSpec) -> Result<SpectralVector, Error> {
    if !matches!(spec.tail, Tail::Exponential { .. }) {
        return Err(Error::invalid("nonsparse generation requires an exponential tail"));
    }
    generate(spec)
}

/// Keep the `k` largest-magnitude coefficients of `x` (ties broken toward
/// the lower index); returns the truncated vector together with the energy
/// of everything that was dropped.
pub fn sparse_truncation(x: &[Complex64], k: usize) -> Result<(SpectralVector, f64), Error> {
    let n = x.len();
    if k == 0 || k > n {
        return Err(Error::invalid("truncation order must satisfy 1 <= K <= N"));
    }
    let mut order: Vec<usize> = (0..n).collect();
    // Sort by descending magnitude; equal magnitudes keep ascending index.
    order.sort_by(|&a, &b| {
        x[b].norm_sqr()
            .partial_cmp(&x[a].norm_sqr())
            .unwrap_or(core::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    let mut support: Vec<usize> = order[..k].to_vec();
    support.sort_unstable();

    let mut kept = vec![Complex64::ZERO; n];
    for &i in &support {
        kept[i] = x[i];
    }
    let residual_energy: f64 = order[k..].iter().map(|&i| x[i].norm_sqr()).sum();
    Ok((SpectralVector { coefficients: kept, support, n, k }, residual_energy))
}

/// Closed-form tail energy of the exponential model: the energy of the
/// `N - K` coefficients `scale * exp(-p/(decay_scale*K))`, `p = K+1..N`.
pub fn exponential_tail_energy(
    n: usize,
    k: usize,
    scale: f64,
    decay_scale: f64,
) -> f64 {
    let q = (-2.0 / (decay_scale * k as f64)).exp();
    let first = q.powi(k as i32 + 1);
    scale * scale * first * (1.0 - q.powi((n - k) as i32)) / (1.0 - q)
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;

    const SQRT_128: f64 = 11.313708498984761;

    #[test]
    fn sparse_magnitudes_follow_the_jitter_window() {
        let spec = SignalSpec::sparse(256, 10, 128, 0.4, 7).unwrap();
        let x = generate_sparse(&spec).unwrap();
        assert_eq!(x.support.len(), 10);
        let nonzeros: Vec<usize> =
            (0..256).filter(|&i| x.coefficients[i] != Complex64::ZERO).collect();
        assert_eq!(nonzeros, x.support);
        assert!(x.support.windows(2).all(|w| w[0] < w[1]));

        let scale = SQRT_128 / 10.0;
        for &i in &x.support {
            let mag = x.coefficients[i].norm();
            assert!(mag <= scale + 1e-12, "magnitude {mag} above scale {scale}");
            assert!(mag >= 0.6 * scale - 1e-12, "magnitude {mag} below jitter floor");
        }
    }

    #[test]
    fn generation_is_bit_identical_per_seed() {
        let spec = SignalSpec::nonsparse(256, 10, 128, 0.4, 1.0, 12345).unwrap();
        let a = generate_nonsparse(&spec).unwrap();
        let b = generate_nonsparse(&spec).unwrap();
        assert_eq!(a, b);
        let other = generate_nonsparse(
            &SignalSpec::nonsparse(256, 10, 128, 0.4, 1.0, 12346).unwrap(),
        )
        .unwrap();
        assert_ne!(a.coefficients, other.coefficients);
    }

    #[test]
    fn first_tail_amplitude_matches_the_decay_model() {
        // K=10, M=128, decay_scale=1: tail ordinal p=11 has amplitude
        // (sqrt(128)/10) * exp(-11/10) = 0.37660 ...
        let spec = SignalSpec::nonsparse(256, 10, 128, 0.0, 1.0, 3).unwrap();
        let x = generate_nonsparse(&spec).unwrap();
        let first_tail_pos = (0..256).find(|i| !x.support.contains(i)).unwrap();
        let got = x.coefficients[first_tail_pos].norm();
        let exact = (SQRT_128 / 10.0) * (-11.0_f64 / 10.0).exp();
        assert!((got - exact).abs() < 1e-12);
        assert!((got - 0.3766).abs() < 5e-5);
    }

    #[test]
    fn truncation_residual_matches_geometric_series() {
        let spec = SignalSpec::nonsparse(256, 10, 128, 0.3, 1.0, 11).unwrap();
        let x = generate_nonsparse(&spec).unwrap();
        let (xk, residual) = sparse_truncation(&x.coefficients, 10).unwrap();
        assert_eq!(xk.support, x.support, "dominant coefficients must survive truncation");

        let oracle = exponential_tail_energy(256, 10, SQRT_128 / 10.0, 1.0);
        assert!(
            (residual - oracle).abs() < 1e-12 * oracle,
            "residual {residual} vs closed form {oracle}"
        );
        // Frozen value of the closed form for this configuration.
        assert!((oracle - 0.782_414).abs() < 5e-6, "got {oracle}");
    }

    #[test]
    fn energy_splits_between_kept_and_residual() {
        let spec = SignalSpec::nonsparse(200, 8, 100, 0.2, 0.5, 21).unwrap();
        let x = generate_nonsparse(&spec).unwrap();
        let total = x.energy();
        let (xk, residual) = sparse_truncation(&x.coefficients, 8).unwrap();
        let split = xk.energy() + residual;
        assert!((total - split).abs() <= 1e-12 * total);
    }

    #[test]
    fn truncation_keeps_the_largest_against_a_sort_oracle() {
        // Hand-built vector with known ordering and a magnitude tie.
        let mut x = vec![Complex64::ZERO; 6];
        x[0] = Complex64::new(0.3, 0.4); // |.| = 0.5
        x[1] = Complex64::new(-0.5, 0.0); // |.| = 0.5 (tie with index 0)
        x[2] = Complex64::new(0.0, 2.0);
        x[4] = Complex64::new(1.0, 0.0);
        let (xk, residual) = sparse_truncation(&x, 3).unwrap();
        // Largest two are clear; the tie at 0.5 resolves to index 0.
        assert_eq!(xk.support, vec![0, 2, 4]);
        assert!((residual - 0.25).abs() < 1e-15);
    }

    #[test]
    fn real_phase_mode_yields_positive_reals() {
        let spec = SignalSpec::sparse(64, 5, 64, 0.2, 9)
            .unwrap()
            .with_phase(PhaseMode::Real);
        let x = generate_sparse(&spec).unwrap();
        for &i in &x.support {
            assert!(x.coefficients[i].im == 0.0 && x.coefficients[i].re > 0.0);
        }
    }

    #[test]
    fn unit_range_cap_bounds_the_scale() {
        // sqrt(128)/10 > 1, so the cap must clamp magnitudes below 1.
        let spec = SignalSpec::sparse(256, 10, 128, 0.4, 5).unwrap().with_unit_range_cap();
        assert_eq!(spec.amplitude_scale(), 1.0);
        let x = generate_sparse(&spec).unwrap();
        for &i in &x.support {
            assert!(x.coefficients[i].norm() <= 1.0);
        }
        // sqrt(128)/30 < 1: cap leaves the scale untouched.
        let spec = SignalSpec::sparse(256, 30, 128, 0.4, 5).unwrap().with_unit_range_cap();
        assert!((spec.amplitude_scale() - SQRT_128 / 30.0).abs() < 1e-15);
    }

    #[test]
    fn invalid_specs_are_rejected() {
        assert!(SignalSpec::sparse(16, 16, 8, 0.2, 1).is_err());
        assert!(SignalSpec::sparse(16, 0, 8, 0.2, 1).is_err());
        assert!(SignalSpec::sparse(16, 4, 8, 1.0, 1).is_err());
        assert!(SignalSpec::nonsparse(16, 4, 8, 0.2, 0.0, 1).is_err());
        assert!(sparse_truncation(&[Complex64::ONE; 4], 0).is_err());
        assert!(sparse_truncation(&[Complex64::ONE; 4], 5).is_err());
    }
}
