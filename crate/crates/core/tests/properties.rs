use ising_fidelity::analysis::{collapse_residuals, numeric_scaling, sweep, Axis, GMode, SweepParams};
use ising_fidelity::chain::{log_fidelity, log_fidelity_per_site_integral, ChainSpec};
use ising_fidelity::ed::ed_oracle_fidelity;
use ising_fidelity::scaling::{scaling_a, scaling_a_value, Regime, PINCH_VALUE};
use proptest::prelude::*;

fn ln_f(n: usize, g: f64, d: f64) -> f64 {
    log_fidelity(&ChainSpec::new(n, g, d).unwrap()).log_f
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn even_in_delta(half in 1usize..5000, g in -3.0f64..3.0, d in 1e-6f64..0.5) {
        let n = 2 * half;
        prop_assert_eq!(ln_f(n, g, d).to_bits(), ln_f(n, g, -d).to_bits());
    }

    #[test]
    fn fidelity_is_bounded(half in 1usize..5000, g in -3.0f64..3.0, d in -0.5f64..0.5) {
        let v = log_fidelity(&ChainSpec::new(2 * half, g, d).unwrap());
        prop_assert!(v.log_f <= 0.0);
        prop_assert!((0.0..=1.0).contains(&v.f));
    }

    #[test]
    fn a_is_even(c in -40.0f64..40.0) {
        prop_assert_eq!(scaling_a_value(c).unwrap(), scaling_a_value(-c).unwrap());
    }

    #[test]
    fn regime_follows_c(c in -5.0f64..5.0) {
        let r = scaling_a(c).unwrap().regime;
        let expected = if (c.abs() - 1.0).abs() < 1e-9 {
            Regime::Pinch
        } else if c.abs() < 1.0 {
            Regime::Inner
        } else {
            Regime::Outer
        };
        prop_assert_eq!(r, expected);
    }

    #[test]
    fn small_system_collapse(n in 100usize..2000, nd in 1e-5f64..1e-3, mode in 0usize..3) {
        let n = 2 * (n / 2);
        let d = nd / n as f64;
        let g = [GMode::AtCritical, GMode::PlusDelta, GMode::PlusFiveDelta][mode].field(d);
        let expected = -d * d * (n * n) as f64 / 16.0;
        prop_assert!((ln_f(n, g, d) - expected).abs() < 0.01 * expected.abs());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn matches_exact_diagonalization(half in 2usize..=5, g in 0.5f64..2.5, d in 0.01f64..0.2) {
        let n = 2 * half;
        let f = ln_f(n, g, d).exp();
        prop_assert!((f - ed_oracle_fidelity(n, g, d).unwrap()).abs() < 1e-10);
    }
}

#[test]
fn a_is_positive_and_decreasing_in_magnitude() {
    let mut prev = f64::INFINITY;
    for i in 0..=10_000 {
        let c = 50.0 * i as f64 / 10_000.0;
        let a = scaling_a_value(c).unwrap();
        assert!(a > 0.0, "A({c}) = {a}");
        assert!(a <= prev, "A not monotone at c = {c}");
        prev = a;
    }
}

#[test]
fn continuous_through_the_pinch() {
    for c in [1.0 - 1e-8, 1.0 + 1e-8, -1.0 - 1e-8, -1.0 + 1e-8] {
        assert!((scaling_a_value(c).unwrap() - PINCH_VALUE).abs() < 1e-6);
    }
}

#[test]
fn thermodynamic_consistency_improves_with_size() {
    let (g, d) = (1.5, 0.1);
    let target = log_fidelity_per_site_integral(g, d).unwrap();
    let errs: Vec<f64> = [10usize, 100, 1000, 10_000]
        .iter()
        .map(|&n| (ln_f(n, g, d) / n as f64 - target).abs())
        .collect();
    assert!(errs.windows(2).all(|w| w[1] <= w[0]), "{errs:?}");
    assert!(errs[3] < 1e-12);
}

#[test]
fn sweeps_are_deterministic_across_thread_counts() {
    let grid: Vec<f64> = (1..=8).map(|i| (20_000 * i) as f64).collect();
    let params = SweepParams {
        size: 2,
        delta: 1e-4,
        g_mode: GMode::PlusDelta,
    };
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| sweep(Axis::Size, params, &grid).unwrap())
    };
    let one = run(1);
    let three = run(3);
    for (a, b) in one.points.iter().zip(&three.points) {
        assert_eq!(a.log_f.to_bits(), b.log_f.to_bits());
    }
}

#[test]
fn collapse_at_large_size() {
    let c_grid: Vec<f64> = (0..=12).map(|i| -3.0 + 0.5 * i as f64).collect();
    let r = collapse_residuals(&[5e-4, 1e-3, 2e-3], &c_grid, 2_000_000).unwrap();
    assert!(r < 2e-3, "{r}");
}

/// Inside `|c| < 1` the finite ring keeps an extra factor `1/√2` relative to
/// the per-site integral; outside it does not.
#[test]
fn inner_region_offset_is_ln_sqrt_two() {
    let (n, d) = (200_000usize, 1e-4);
    for c in [0.0, 0.5, -0.5] {
        let g = 1.0 + c * d;
        let off = ln_f(n, g, d) - n as f64 * log_fidelity_per_site_integral(g, d).unwrap();
        assert!((off - 0.5 * 2f64.ln()).abs() < 1e-3, "c = {c}: {off}");
    }
    for c in [2.0, 3.0] {
        let g = 1.0 + c * d;
        let off = ln_f(n, g, d) - n as f64 * log_fidelity_per_site_integral(g, d).unwrap();
        assert!(off.abs() < 1e-2, "c = {c}: {off}");
    }
    // The same offset seen through the scaling estimate.
    let gap = scaling_a_value(0.0).unwrap() - numeric_scaling(n, d, 0.0).unwrap();
    assert!((gap - 0.5 * 2f64.ln() / (n as f64 * d)).abs() < 1e-3);
}
