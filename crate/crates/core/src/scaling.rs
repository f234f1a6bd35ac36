//! The scaling function `A(c)` of the Ising chain and the closed-form
//! fidelity predictions built on it.
//!
//! In the thermodynamic limit near the critical field `g_c = 1`,
//! `ln F(g, δ) ≈ -N|δ| A(c)` with `c = (g - 1)/|δ|` and
//!
//! ```text
//!        ⎧ 1/4 + |c| K(c₁)/2π + (|c|-1) Im E(c₂)/4π      |c| ≤ 1
//! A(c) = ⎨
//!        ⎩ |c|/4 - |c| K(c₁)/2π - (|c|-1) Im E(c₂)/4π    |c| > 1
//!
//! c₁ = -4|c|/(|c|-1)²,   c₂ = (|c|+1)²/(|c|-1)²
//! ```
//!
//! The mirror critical point `g = -1` maps onto this one under `g → -g`.

use crate::chain::fidelity_susceptibility;
use crate::elliptic::{ellip_e_with, ellip_k_with, EllipticConfig};
use crate::error::{FidelityError, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

pub const G_CRITICAL: f64 = 1.0;

/// `|c|` within this distance of 1 is treated as the pinch point.
pub const PINCH_TOL: f64 = 1e-9;

/// `A(±1) = (π - 2)/4π`.
pub const PINCH_VALUE: f64 = (PI - 2.0) / (4.0 * PI);

/// Largest `|δ|` and `|g - 1|` accepted by the scaling-law formulas.
pub const SCALING_WINDOW: f64 = 0.05;

/// Minimum `|g - 1|/|δ|` for the away-from-criticality formula.
pub const AWAY_RATIO: f64 = 10.0;

/// Largest `N|δ|` for the susceptibility formula.
pub const SUSCEPTIBILITY_MAX_N_DELTA: f64 = 0.1;

// The outer branch subtracts terms of size |c|/4 to leave ~1/16|c|, so the
// elliptic integrals are converged well past the library default.
fn config() -> EllipticConfig {
    EllipticConfig::new(1e-15, 100).expect("valid elliptic config")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Inner,
    Outer,
    Pinch,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingEval {
    pub c: f64,
    pub a_value: f64,
    /// Infinite at the pinch point.
    pub da_dc: f64,
    pub regime: Regime,
}

fn regime_of(c: f64) -> Regime {
    let a = c.abs();
    if (a - 1.0).abs() <= PINCH_TOL {
        Regime::Pinch
    } else if a < 1.0 {
        Regime::Inner
    } else {
        Regime::Outer
    }
}

/// `A(c)` alone.
pub fn scaling_a_value(c: f64) -> Result<f64> {
    if !c.is_finite() {
        return Err(FidelityError::domain(format!(
            "scaled distance c must be finite, got {c}"
        )));
    }
    let a = c.abs();
    if regime_of(c) == Regime::Pinch {
        return Ok(PINCH_VALUE);
    }
    let cfg = config();
    let gap = a - 1.0;
    let c1 = -4.0 * a / (gap * gap);
    let c2 = (a + 1.0) * (a + 1.0) / (gap * gap);
    let k = ellip_k_with(c1, &cfg)?;
    let im_e = ellip_e_with(c2, &cfg)?.im;
    let value = if a <= 1.0 {
        0.25 + a * k / (2.0 * PI) + gap * im_e / (4.0 * PI)
    } else {
        a / 4.0 - a * k / (2.0 * PI) - gap * im_e / (4.0 * PI)
    };
    Ok(value.max(0.0))
}

/// Default finite-difference step for `dA/dc` at `c`.
pub fn default_step(c: f64) -> f64 {
    1e-4f64.min((1.0 - c.abs()).abs() / 10.0)
}

/// `A(c)` together with its slope and regime.
pub fn scaling_a(c: f64) -> Result<ScalingEval> {
    let a_value = scaling_a_value(c)?;
    let regime = regime_of(c);
    let da_dc = match regime {
        // ln|1 - |c|| divergence; dA/dc is odd in c.
        Regime::Pinch => -c.signum() * f64::INFINITY,
        _ => scaling_a_derivative(c, default_step(c))?,
    };
    Ok(ScalingEval {
        c,
        a_value,
        da_dc,
        regime,
    })
}

/// Large-`|c|` asymptote `A(c) ≈ 1/(16|c|)`.
pub fn scaling_a_asymptotic(c: f64) -> Result<f64> {
    if !c.is_finite() || c.abs() <= 1.0 {
        return Err(FidelityError::domain(format!(
            "asymptotic form needs |c| > 1, got c = {c}"
        )));
    }
    Ok(1.0 / (16.0 * c.abs()))
}

/// Central difference `(A(c+h) - A(c-h)) / 2h`.
pub fn scaling_a_derivative(c: f64, h: f64) -> Result<f64> {
    if !c.is_finite() || (c.abs() - 1.0).abs() <= PINCH_TOL {
        return Err(FidelityError::domain(format!("dA/dc is singular at |c| = 1 (c = {c})")));
    }
    let max_h = default_step(c);
    if !(h > 0.0 && h <= max_h) {
        return Err(FidelityError::domain(format!(
            "step h = {h:e} must satisfy 0 < h ≤ min(1e-4, |1-|c||/10) = {max_h:e}"
        )));
    }
    Ok((scaling_a_value(c + h)? - scaling_a_value(c - h)?) / (2.0 * h))
}

/// Leading behaviour of `dA/dc` next to the pinch point `c = 1`:
/// `ln|1-c|/4π - 3 ln2/4π + (1 ± 1)/8`, with `+` above and `-` below.
pub fn pinch_slope_expansion(c: f64) -> f64 {
    let branch = if c > 1.0 { 0.25 } else { 0.0 };
    (1.0 - c).abs().ln() / (4.0 * PI) - 3.0 * 2f64.ln() / (4.0 * PI) + branch
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Formula {
    /// `ln F ≈ -N|δ| A((g-1)/|δ|)`
    ScalingLaw,
    /// `ln F ≈ -N δ² / (16|g-1|)`
    Away,
    /// `ln F ≈ -δ² χ_F / 2`
    Susceptibility,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub log_f_predicted: f64,
    pub formula: Formula,
}

fn check_scaling_window(g: f64, delta: f64) -> Result<()> {
    if delta.abs() > SCALING_WINDOW {
        return Err(FidelityError::regime(format!(
            "scaling law needs |δ| ≤ {SCALING_WINDOW}, got |δ| = {}",
            delta.abs()
        )));
    }
    if (g - G_CRITICAL).abs() > SCALING_WINDOW {
        return Err(FidelityError::regime(format!(
            "scaling law needs |g-1| ≤ {SCALING_WINDOW}, got |g-1| = {}",
            (g - G_CRITICAL).abs()
        )));
    }
    Ok(())
}

/// Closed-form estimate of `ln F` from one of the asymptotic formulas, with
/// hard guards on the regime each formula is valid in.
pub fn predict_log_fidelity(g: f64, delta: f64, n: usize, formula: Formula) -> Result<Prediction> {
    if !(g.is_finite() && delta.is_finite()) {
        return Err(FidelityError::domain("g and δ must be finite"));
    }
    if n < 2 || n % 2 != 0 {
        return Err(FidelityError::domain(format!(
            "system size must be even and at least 2, got N = {n}"
        )));
    }
    let nf = n as f64;
    let log_f_predicted = if delta == 0.0 {
        0.0
    } else {
        match formula {
            Formula::ScalingLaw => {
                check_scaling_window(g, delta)?;
                -nf * delta.abs() * scaling_a_value((g - G_CRITICAL) / delta.abs())?
            }
            Formula::Away => {
                let eps = (g - G_CRITICAL).abs();
                if eps < AWAY_RATIO * delta.abs() {
                    return Err(FidelityError::regime(format!(
                        "away formula needs |g-1| ≥ {AWAY_RATIO}|δ|, got |g-1| = {eps}, |δ| = {}",
                        delta.abs()
                    )));
                }
                -nf * delta * delta / (16.0 * eps)
            }
            Formula::Susceptibility => {
                if nf * delta.abs() > SUSCEPTIBILITY_MAX_N_DELTA {
                    return Err(FidelityError::regime(format!(
                        "susceptibility formula needs N|δ| ≤ {SUSCEPTIBILITY_MAX_N_DELTA}, got {}",
                        nf * delta.abs()
                    )));
                }
                -delta * delta * fidelity_susceptibility(g, n)? / 2.0
            }
        }
    };
    Ok(Prediction {
        log_f_predicted,
        formula,
    })
}

/// Leading-order fidelity decay per site in the thermodynamic limit,
/// `d̃ = |δ| A((g-1)/|δ|)`.
pub fn scaling_parameter(g: f64, delta: f64) -> Result<f64> {
    if !(g.is_finite() && delta.is_finite()) {
        return Err(FidelityError::domain("g and δ must be finite"));
    }
    check_scaling_window(g, delta)?;
    if delta == 0.0 {
        return Ok(0.0);
    }
    Ok(delta.abs() * scaling_a_value((g - G_CRITICAL) / delta.abs())?)
}
