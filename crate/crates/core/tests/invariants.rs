//! Property-based invariants of the register model, the energy bookkeeping,
//! and the greedy solver, exercised through the public API only.

use num_complex::Complex64;
use proptest::prelude::*;
use qcs_core::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    /// Re-quantizing stored values changes nothing.
    #[test]
    fn fixed_registers_are_idempotent(
        values in prop::collection::vec(-1.0f64..1.0, 1..48),
        bits in 1u32..16,
    ) {
        let spec = QuantizerSpec::fixed(bits, false).unwrap();
        let vals: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let once = quantize_fixed(&vals, &spec);
        let twice = quantize_fixed(&once.values, &spec);
        prop_assert_eq!(once.values, twice.values);
        prop_assert_eq!(twice.saturations, 0);
    }

    /// Values that stay clear of the saturation edge carry at most half a
    /// step of register noise.
    #[test]
    fn in_range_register_noise_is_bounded_by_half_a_step(
        values in prop::collection::vec(-1.0f64..1.0, 1..48),
        bits in 1u32..16,
    ) {
        let spec = QuantizerSpec::fixed(bits, false).unwrap();
        let half = 0.5 * spec.step();
        let vals: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let out = quantize_fixed(&vals, &spec);
        for (v, e) in values.iter().zip(&out.errors) {
            if *v <= 1.0 - half {
                prop_assert!(e.re.abs() <= half + 1e-15, "value {v}, error {}", e.re);
            }
        }
    }

    /// The register map never reorders values.
    #[test]
    fn fixed_registers_are_monotone(
        a in -1.0f64..1.0,
        b in -1.0f64..1.0,
        bits in 1u32..16,
    ) {
        let spec = QuantizerSpec::fixed(bits, false).unwrap();
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let out = quantize_fixed(
            &[Complex64::new(lo, 0.0), Complex64::new(hi, 0.0)],
            &spec,
        );
        prop_assert!(out.values[0].re <= out.values[1].re);
    }

    /// Dominant-plus-tail energies always add back up to the whole.
    #[test]
    fn truncation_preserves_total_energy(
        parts in prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 2..64),
        k_frac in 0.01f64..0.99,
    ) {
        let x: Vec<Complex64> =
            parts.iter().map(|&(re, im)| Complex64::new(re, im)).collect();
        let k = ((x.len() as f64 * k_frac) as usize).max(1).min(x.len() - 1);
        let total: f64 = x.iter().map(|c| c.norm_sqr()).sum();
        let (x_k, residual) = sparse_truncation(&x, k).unwrap();
        let split = x_k.energy() + residual;
        prop_assert!((split - total).abs() <= 1e-12 * total.max(1.0));
        // The kept part is never smaller than any dropped coefficient.
        let min_kept = x_k
            .support
            .iter()
            .map(|&i| x_k.coefficients[i].norm_sqr())
            .fold(f64::INFINITY, f64::min);
        for (i, c) in x.iter().enumerate() {
            if !x_k.support.contains(&i) {
                prop_assert!(c.norm_sqr() <= min_kept + 1e-12);
            }
        }
    }

    /// Signal generation is a pure function of its spec.
    #[test]
    fn signal_generation_is_deterministic(seed in any::<u64>()) {
        let spec = SignalSpec::sparse(64, 5, 32, 0.4, seed).unwrap();
        let a = generate_sparse(&spec).unwrap();
        let b = generate_sparse(&spec).unwrap();
        prop_assert_eq!(a.coefficients, b.coefficients);
        prop_assert_eq!(a.support, b.support);
    }
}

proptest! {
    // The greedy-solver property runs a full reconstruction per case, so use
    // fewer cases than the cheap register properties.
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// After the greedy solve, the residual carries no component along any
    /// selected column (the least-squares normal equations), and the
    /// reported residual norm matches a direct recomputation.
    #[test]
    fn greedy_residual_is_orthogonal_to_the_chosen_columns(
        seed in 0u64..5000,
        k in 2usize..8,
        bits in 4u32..12,
    ) {
        let (m, n) = (48usize, 96usize);
        let signal = SignalSpec::sparse(n, k, m, 0.4, seed).unwrap();
        let x = generate_sparse(&signal).unwrap();
        let a = build_matrix(MatrixFamily::PartialDft, m, n, seed ^ 0xabcd).unwrap();
        let y = measure(&a, &x.coefficients).unwrap();
        let q = quantize_fixed(&y, &QuantizerSpec::fixed(bits, true).unwrap());
        let out = reconstruct_omp(&a, &q.values, &AlgoConfig::for_sparsity(k)).unwrap();

        let ax = measure(&a, &out.coefficients).unwrap();
        let residual: Vec<Complex64> =
            q.values.iter().zip(&ax).map(|(yi, ai)| yi - ai).collect();
        let direct_norm: f64 =
            residual.iter().map(|r| r.norm_sqr()).sum::<f64>().sqrt();
        prop_assert!((direct_norm - out.residual_norm).abs() <= 1e-9 * direct_norm.max(1.0));

        let correlations = initial_estimate(&a, &residual).unwrap();
        let scale = direct_norm.max(1.0);
        for &i in &out.support {
            prop_assert!(
                correlations[i].norm() <= 1e-10 * scale,
                "column {i} correlation {:.3e}",
                correlations[i].norm()
            );
        }
    }
}
