//! Exact ground-state fidelity of the periodic transverse-field Ising chain
//!
//! ```text
//! H(g) = -Σ_i (σx_i σx_{i+1} + g σz_i)
//! ```
//!
//! After the Jordan–Wigner mapping the even-parity ground state is a product
//! over the antiperiodic momenta `k_m = (2m-1)π/N`, `m = 1..N/2`, of pair states
//! rotated by the Bogoliubov angle `θ(k, g) = atan2(sin k, g - cos k)`. The
//! overlap of two such states factorises into
//!
//! ```text
//! F(g, δ) = Π_k cos((θ(k, g+δ) - θ(k, g-δ)) / 2).
//! ```
//!
//! Everything here works with `ln F`; the raw product underflows as soon as
//! `N|δ|` reaches a few hundred.

use crate::error::{FidelityError, Result};
use crate::quadrature::{self, QuadConfig};
use crate::summation::chunked_sum;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Largest chain accepted by the mode-product routines.
pub const MAX_SIZE: usize = 100_000_000;

/// Below this `exp` underflows to zero in double precision.
pub const UNDERFLOW_LOG: f64 = -745.0;

/// A fidelity evaluation request: the overlap of the ground states at
/// `field - half_diff` and `field + half_diff` on a ring of `size` spins.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainSpec {
    size: usize,
    field: f64,
    half_diff: f64,
}

impl ChainSpec {
    pub fn new(size: usize, field: f64, half_diff: f64) -> Result<Self> {
        check_size(size)?;
        if !(field + half_diff).is_finite() || !(field - half_diff).is_finite() {
            return Err(FidelityError::domain(format!(
                "g ± δ must be finite (g = {field}, δ = {half_diff})"
            )));
        }
        Ok(Self { size, field, half_diff })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn field(&self) -> f64 {
        self.field
    }

    pub fn half_diff(&self) -> f64 {
        self.half_diff
    }
}

fn check_size(n: usize) -> Result<()> {
    if n < 2 || n % 2 != 0 {
        return Err(FidelityError::domain(format!(
            "system size must be even and at least 2, got N = {n}"
        )));
    }
    if n > MAX_SIZE {
        return Err(FidelityError::domain(format!(
            "system size N = {n} exceeds the supported maximum {MAX_SIZE}"
        )));
    }
    Ok(())
}

/// Positive momenta of the antiperiodic fermion sector.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSet {
    momenta: Vec<f64>,
}

impl ModeSet {
    pub fn momenta(&self) -> &[f64] {
        &self.momenta
    }

    pub fn len(&self) -> usize {
        self.momenta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.momenta.is_empty()
    }
}

#[inline]
fn momentum(m: usize, n: usize) -> f64 {
    ((2 * m + 1) as f64) * PI / (n as f64)
}

/// `k_m = (2m-1)π/N` for `m = 1..N/2`, ascending.
pub fn momentum_grid(n: usize) -> Result<ModeSet> {
    check_size(n)?;
    Ok(ModeSet {
        momenta: (0..n / 2).map(|m| momentum(m, n)).collect(),
    })
}

fn check_momentum(k: f64) -> Result<()> {
    if k > 0.0 && k < PI {
        Ok(())
    } else {
        Err(FidelityError::domain(format!("momentum must lie in (0, π), got {k}")))
    }
}

/// Bogoliubov angle of mode `k` at field `g`, in `(0, π)` and continuous in
/// `g` through `g = cos k`.
pub fn bogoliubov_angle(k: f64, g: f64) -> Result<f64> {
    check_momentum(k)?;
    if !g.is_finite() {
        return Err(FidelityError::domain("field must be finite"));
    }
    Ok(k.sin().atan2(g - k.cos()))
}

/// `ln f_k` without argument checks.
///
/// The angle difference is taken as the argument of the product of the two
/// rotation vectors rather than as a difference of two `atan2` calls, and
/// `ln cos(x/2)` is evaluated as `ln(1 - 2 sin²(x/4))`. Both keep full relative
/// precision when `δ` is tiny.
#[inline]
pub(crate) fn log_overlap_unchecked(k: f64, g: f64, delta: f64) -> f64 {
    let (s, c) = k.sin_cos();
    let plus = (g + delta) - c;
    let minus = (g - delta) - c;
    let cross = -2.0 * delta * s;
    let dot = plus * minus + s * s;
    let diff = cross.atan2(dot);
    let q = (0.25 * diff).sin();
    let x = 2.0 * q * q;
    if x >= 1.0 {
        f64::NEG_INFINITY
    } else {
        (-x).ln_1p()
    }
}

/// Single-mode overlap `f_k = cos((θ(k, g+δ) - θ(k, g-δ)) / 2)`.
pub fn mode_overlap(k: f64, g: f64, delta: f64) -> Result<f64> {
    check_momentum(k)?;
    if !(g + delta).is_finite() || !(g - delta).is_finite() {
        return Err(FidelityError::domain("g ± δ must be finite"));
    }
    Ok(log_overlap_unchecked(k, g, delta).exp())
}

/// `ln F`, `F` and `ln F / N` for one chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FidelityValue {
    pub log_f: f64,
    pub f: f64,
    pub per_site: f64,
    /// Some mode overlap vanished to machine precision; `log_f` is `-∞`.
    pub orthogonal: bool,
}

impl FidelityValue {
    fn from_log(log_f: f64, n: usize) -> Self {
        let orthogonal = log_f == f64::NEG_INFINITY;
        let f = if log_f > UNDERFLOW_LOG { log_f.exp() } else { 0.0 };
        Self {
            log_f,
            f,
            per_site: log_f / n as f64,
            orthogonal,
        }
    }
}

/// Exact `ln F` from the mode product, accumulated in ascending `k` with a
/// chunked compensated reduction.
pub fn log_fidelity(spec: &ChainSpec) -> FidelityValue {
    let n = spec.size;
    let (g, delta) = (spec.field, spec.half_diff);
    let log_f = if delta == 0.0 {
        0.0
    } else {
        let sum = chunked_sum(n / 2, |m| log_overlap_unchecked(momentum(m, n), g, delta));
        // A single -∞ term poisons the compensation with NaN.
        if sum.is_nan() {
            f64::NEG_INFINITY
        } else {
            sum.min(0.0)
        }
    };
    FidelityValue::from_log(log_f, n)
}

/// Thermodynamic-limit fidelity per site, `(1/2π) ∫₀^π ln f_k dk`.
pub fn log_fidelity_per_site_integral(g: f64, delta: f64) -> Result<f64> {
    log_fidelity_per_site_integral_with(g, delta, QuadConfig::default())
}

pub fn log_fidelity_per_site_integral_with(g: f64, delta: f64, cfg: QuadConfig) -> Result<f64> {
    if !(g + delta).is_finite() || !(g - delta).is_finite() {
        return Err(FidelityError::domain("g ± δ must be finite"));
    }
    if delta == 0.0 {
        return Ok(0.0);
    }
    // The integrand varies on the scale of the distances of g ± δ from the
    // critical points ±1, close to k = 0 and k = π respectively.
    let mut scales = vec![delta.abs()];
    for gc in [1.0, -1.0] {
        for x in [g, g + delta, g - delta] {
            scales.push((x - gc).abs());
        }
    }
    let mut breaks = Vec::new();
    for s in scales.into_iter().filter(|s| *s > 0.0) {
        for f in [0.1, 1.0, 10.0] {
            breaks.push(s * f);
            breaks.push(PI - s * f);
        }
    }
    // The tolerance refers to the per-site value, after division by 2π.
    let cfg = QuadConfig {
        abs_tol: cfg.abs_tol * 2.0 * PI,
        ..cfg
    };
    let r = quadrature::integrate(|k| log_overlap_unchecked(k, g, delta), 0.0, PI, &breaks, cfg)?;
    Ok(r.value / (2.0 * PI))
}

/// Fidelity susceptibility normalised so that `ln F ≈ -δ² χ_F / 2` for the
/// half-difference `δ`, i.e. `χ_F = Σ_k (∂θ/∂g)²`.
pub fn fidelity_susceptibility(g: f64, n: usize) -> Result<f64> {
    check_size(n)?;
    if !g.is_finite() {
        return Err(FidelityError::domain("field must be finite"));
    }
    Ok(chunked_sum(n / 2, |m| {
        let (s, c) = momentum(m, n).sin_cos();
        let d = g - c;
        let dtheta = s / (d * d + s * s);
        dtheta * dtheta
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn grid_small_sizes() {
        assert_eq!(momentum_grid(2).unwrap().momenta(), &[PI / 2.0]);
        let g4 = momentum_grid(4).unwrap();
        assert_relative_eq!(g4.momenta()[0], FRAC_PI_4);
        assert_relative_eq!(g4.momenta()[1], 3.0 * FRAC_PI_4);
    }

    #[test]
    fn grid_large() {
        let g = momentum_grid(100_000).unwrap();
        assert_eq!(g.len(), 50_000);
        assert_relative_eq!(g.momenta()[0], PI * 1e-5);
        assert!(g.momenta().windows(2).all(|w| w[0] < w[1]));
        assert!(*g.momenta().last().unwrap() < PI);
    }

    #[test]
    fn grid_rejects_odd_and_zero() {
        for n in [0, 1, 7] {
            let e = momentum_grid(n).unwrap_err();
            assert!(e.to_string().contains("even"), "{e}");
        }
        assert!(momentum_grid(MAX_SIZE + 2).is_err());
    }

    #[test]
    fn angle_values() {
        assert_relative_eq!(bogoliubov_angle(PI / 2.0, 1.0).unwrap(), FRAC_PI_4);
        assert_relative_eq!(bogoliubov_angle(PI / 2.0, 0.0).unwrap(), PI / 2.0);
        let far = bogoliubov_angle(PI / 2.0, 1e12).unwrap();
        assert!(far > 0.0 && far < 1e-11);
        assert!(bogoliubov_angle(0.0, 1.0).is_err());
        assert!(bogoliubov_angle(PI, 1.0).is_err());
    }

    #[test]
    fn angle_is_continuous_through_cos_k() {
        let k = 0.7;
        let a = bogoliubov_angle(k, k.cos() - 1e-9).unwrap();
        let b = bogoliubov_angle(k, k.cos() + 1e-9).unwrap();
        assert!((a - b).abs() < 1e-8);
    }

    #[test]
    fn mode_overlap_values() {
        assert_eq!(mode_overlap(1.1, 0.7, 0.0).unwrap(), 1.0);
        // Hand evaluation: cos((atan2(1, 2) - atan2(1, 0)) / 2).
        let expected = ((1.0f64.atan2(2.0) - PI / 2.0) / 2.0).cos();
        assert_relative_eq!(mode_overlap(PI / 2.0, 1.0, 1.0).unwrap(), expected, epsilon = 1e-15);
        assert_relative_eq!(expected, 0.850_650_808_352_039_9, epsilon = 1e-12);
        let a = mode_overlap(0.3, 1.2, 0.1).unwrap();
        let b = mode_overlap(0.3, 1.2, -0.1).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn mode_overlap_matches_angle_difference() {
        for &(k, g, d) in &[(0.2, 1.0, 0.3), (2.9, -0.4, 0.2), (1.5, 1.7, 0.9)] {
            let direct = ((bogoliubov_angle(k, g + d).unwrap() - bogoliubov_angle(k, g - d).unwrap()) / 2.0).cos();
            assert_relative_eq!(mode_overlap(k, g, d).unwrap(), direct, epsilon = 1e-14);
        }
    }

    #[test]
    fn zero_difference_is_unit_fidelity() {
        let v = log_fidelity(&ChainSpec::new(1000, 0.3, 0.0).unwrap());
        assert_eq!(v.log_f, 0.0);
        assert_eq!(v.f, 1.0);
        assert!(!v.orthogonal);
    }

    #[test]
    fn underflow_keeps_log() {
        let v = log_fidelity(&ChainSpec::new(2_000_000, 1.0, 1e-2).unwrap());
        assert!(v.log_f < UNDERFLOW_LOG);
        assert!(v.log_f.is_finite());
        assert_eq!(v.f, 0.0);
        assert_relative_eq!(v.per_site * 2e6, v.log_f, max_relative = 1e-15);
    }

    #[test]
    fn chain_spec_validation() {
        assert!(ChainSpec::new(3, 1.0, 0.1).is_err());
        assert!(ChainSpec::new(4, f64::INFINITY, 0.1).is_err());
        assert!(ChainSpec::new(4, f64::MAX, f64::MAX).is_err());
        assert!(ChainSpec::new(4, 5.0, -7.0).is_ok());
    }

    #[test]
    fn susceptibility_far_field_vanishes() {
        assert!(fidelity_susceptibility(1e6, 1000).unwrap() < 1e-9);
        assert!(fidelity_susceptibility(f64::NAN, 10).is_err());
    }

    #[test]
    fn susceptibility_matches_finite_difference_of_angle() {
        let (g, n) = (1.3, 10);
        let h = 1e-6;
        let direct: f64 = momentum_grid(n)
            .unwrap()
            .momenta()
            .iter()
            .map(|&k| {
                let d = (bogoliubov_angle(k, g + h).unwrap() - bogoliubov_angle(k, g - h).unwrap()) / (2.0 * h);
                d * d
            })
            .sum();
        assert_relative_eq!(fidelity_susceptibility(g, n).unwrap(), direct, max_relative = 1e-8);
    }

    #[test]
    fn integral_zero_delta() {
        assert_eq!(log_fidelity_per_site_integral(1.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn integral_at_criticality() {
        let v = log_fidelity_per_site_integral(1.0, 1e-4).unwrap();
        assert!((v + 2.5e-5).abs() / 2.5e-5 < 0.01, "{v}");
    }
}
