//! The acceptance suite: every numbered criterion, its pinned tolerance, and
//! the measured value. Shared by the `check` subcommand and the `acceptance`
//! test target.

use crate::analysis::{find_crossover, fit_power_law, local_slope, numeric_scaling, sweep, Axis, GMode, SweepParams};
use crate::chain::{fidelity_susceptibility, log_fidelity, log_fidelity_per_site_integral, ChainSpec};
use crate::ed::ed_oracle_fidelity;
use crate::elliptic::{agm, ellip_e, ellip_k};
use crate::error::Result;
use crate::scaling::{default_step, scaling_a_derivative, scaling_a_value};
use serde::Serialize;
use std::f64::consts::PI;

/// One measured quantity against its bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub label: String,
    pub measured: f64,
    pub bound: String,
    pub passed: bool,
}

impl Check {
    fn below(label: impl Into<String>, measured: f64, limit: f64) -> Self {
        Self {
            label: label.into(),
            measured,
            bound: format!("< {limit:e}"),
            passed: measured < limit,
        }
    }

    fn within(label: impl Into<String>, measured: f64, lo: f64, hi: f64) -> Self {
        Self {
            label: label.into(),
            measured,
            bound: format!("in [{lo}, {hi}]"),
            passed: (lo..=hi).contains(&measured),
        }
    }

    fn failed(label: impl Into<String>, err: impl std::fmt::Display) -> Self {
        Self {
            label: format!("{}: {err}", label.into()),
            measured: f64::NAN,
            bound: "evaluation must succeed".into(),
            passed: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionReport {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub checks: Vec<Check>,
    /// Extra measured context, not part of the pass/fail decision.
    pub notes: Vec<String>,
}

impl CriterionReport {
    fn new(id: u32, name: &'static str, checks: Vec<Check>, notes: Vec<String>) -> Self {
        Self {
            id,
            name,
            passed: !checks.is_empty() && checks.iter().all(|c| c.passed),
            checks,
            notes,
        }
    }

    fn from_result(id: u32, name: &'static str, r: Result<(Vec<Check>, Vec<String>)>) -> Self {
        match r {
            Ok((checks, notes)) => Self::new(id, name, checks, notes),
            Err(e) => Self::new(id, name, vec![Check::failed(name, e)], vec![]),
        }
    }

    /// `[PASS] C4 scaling-function oracle: ...` style summary line.
    pub fn summary_line(&self) -> String {
        let parts: Vec<String> = self
            .checks
            .iter()
            .map(|c| format!("{} = {:.6e} ({})", c.label, c.measured, c.bound))
            .collect();
        format!(
            "[{}] C{} {}: {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            parts.join("; ")
        )
    }
}

fn ln_f(n: usize, g: f64, delta: f64) -> Result<f64> {
    Ok(log_fidelity(&ChainSpec::new(n, g, delta)?).log_f)
}

fn rel(measured: f64, expected: f64) -> f64 {
    (measured - expected).abs() / expected.abs()
}

pub fn oracle_equivalence() -> CriterionReport {
    let run = || -> Result<_> {
        let mut worst: f64 = 0.0;
        let mut at = (0, 0.0, 0.0);
        for n in (4..=12).step_by(2) {
            for g in [0.5, 1.0, 1.5, 2.0] {
                for d in [0.05, 0.1, 0.3] {
                    let product = ln_f(n, g, d)?.exp();
                    let ed = ed_oracle_fidelity(n, g, d)?;
                    let diff = (product - ed).abs();
                    if diff >= worst {
                        worst = diff;
                        at = (n, g, d);
                    }
                }
            }
        }
        Ok((
            vec![Check::below("max |F_product - F_ED|", worst, 1e-10)],
            vec![format!("worst case at N = {}, g = {}, δ = {}", at.0, at.1, at.2)],
        ))
    };
    CriterionReport::from_result(1, "oracle equivalence", run())
}

/// `N |δ| A - (-ln F)`: for `|c| < 1` this tends to `-ln √2` as `N|δ|` grows,
/// the weight of the parity-symmetric ferromagnetic state on one side.
fn inner_offset_note(n: usize, g: f64, delta: f64, log_f: f64) -> Result<String> {
    let thermo = log_fidelity_per_site_integral(g, delta)? * n as f64;
    Ok(format!(
        "ln F = {log_f:.6}; N × per-site integral = {thermo:.6}; difference {:.4} (ln √2 = {:.4})",
        log_f - thermo,
        0.5 * 2f64.ln()
    ))
}

pub fn critical_decay() -> CriterionReport {
    let run = || -> Result<_> {
        let (n, g, d) = (200_000, 1.0, 1e-4);
        let l = ln_f(n, g, d)?;
        Ok((
            vec![Check::below("|ln F + 5| / 5", rel(l, -5.0), 0.02)],
            vec![inner_offset_note(n, g, d, l)?],
        ))
    };
    CriterionReport::from_result(2, "critical-point decay", run())
}

pub fn pinch_value() -> CriterionReport {
    let run = || -> Result<_> {
        let (n, d) = (200_000usize, 1e-4);
        let l = ln_f(n, 1.0 + d, d)?;
        let expected = -(n as f64) * d * (PI - 2.0) / (4.0 * PI);
        Ok((
            vec![Check::below(
                "|ln F + Nδ(π-2)/4π| / |ln F|",
                (l - expected).abs() / l.abs(),
                0.02,
            )],
            vec![format!("ln F = {l:.6}, prediction {expected:.6}")],
        ))
    };
    CriterionReport::from_result(3, "pinch value", run())
}

pub fn scaling_function_oracle() -> CriterionReport {
    let run = || -> Result<_> {
        let (n, d) = (200_000usize, 1e-4);
        let mut worst: f64 = 0.0;
        let mut worst_c = 0.0;
        let mut outer: f64 = 0.0;
        for i in 0..25 {
            let c = -3.0 + 0.25 * i as f64;
            let r = (scaling_a_value(c)? - numeric_scaling(n, d, c)?).abs();
            if r >= worst {
                worst = r;
                worst_c = c;
            }
            if c.abs() >= 1.0 {
                outer = outer.max(r);
            }
        }
        let g = 1.0 + worst_c * d;
        Ok((
            vec![Check::below("max_c |A(c) - (-ln F / N|δ|)|", worst, 1e-3)],
            vec![
                format!("worst at c = {worst_c}"),
                format!("max residual over |c| ≥ 1: {outer:.3e}"),
                inner_offset_note(n, g, d, ln_f(n, g, d)?)?,
            ],
        ))
    };
    CriterionReport::from_result(4, "scaling-function oracle", run())
}

pub const CROSSOVER_DELTAS: [f64; 4] = [1e-3, 3e-4, 1e-4, 3e-5];

pub fn crossover_exponent() -> CriterionReport {
    let run = || -> Result<_> {
        let mut checks = Vec::new();
        let mut notes = Vec::new();
        for (label, mode) in [
            ("g = 1", GMode::AtCritical),
            ("g = 1 + δ", GMode::PlusDelta),
            ("g = 1 + 5δ", GMode::PlusFiveDelta),
        ] {
            let pts = CROSSOVER_DELTAS
                .iter()
                .map(|&d| Ok((d, find_crossover(d, mode, 1.5)?)))
                .collect::<Result<Vec<_>>>()?;
            let fit = fit_power_law(&pts)?;
            checks.push(Check::within(format!("b ({label})"), fit.exponent_b, 0.985, 1.005));
            notes.push(format!(
                "{label}: a = {:.4}, b = {:.5} ± {:.1e}",
                fit.prefactor_a, fit.exponent_b, fit.stderr_b
            ));
        }
        Ok((checks, notes))
    };
    CriterionReport::from_result(5, "crossover exponent", run())
}

/// Local slope at `x0` from a five-point geometric stencil (ratio 1.1).
fn slope_at(axis: Axis, params: SweepParams, x0: f64) -> Result<f64> {
    let grid: Vec<f64> = (-2..=2)
        .map(|j| {
            let x = x0 * 1.1f64.powi(j);
            if axis == Axis::Size {
                2.0 * (x / 2.0).round()
            } else {
                x
            }
        })
        .collect();
    let table = sweep(axis, params, &grid)?;
    Ok(local_slope(&table)?[2].1)
}

pub fn regime_slopes() -> CriterionReport {
    let run = || -> Result<_> {
        let size_axis = SweepParams {
            size: 2,
            delta: 1e-4,
            g_mode: GMode::AtCritical,
        };
        let delta_axis = SweepParams {
            size: 100_000,
            delta: 0.0,
            g_mode: GMode::AtCritical,
        };
        let small = slope_at(Axis::Size, size_axis, 1e3)?;
        let large = slope_at(Axis::Size, size_axis, 1e6)?;
        let small_d = slope_at(Axis::Delta, delta_axis, 1e-6)?;
        let large_d = slope_at(Axis::Delta, delta_axis, 1e-3)?;
        let chi = fidelity_susceptibility(1.0, 1000)?;
        Ok((
            vec![
                Check::within("slope at N = 1e3 (δ = 1e-4)", small, 1.8, 2.0),
                Check::within("slope at N = 1e6 (δ = 1e-4)", large, 1.0, 1.1),
                Check::within("slope at δ = 1e-6 (N = 1e5)", small_d, 1.8, 2.0),
                Check::within("slope at δ = 1e-3 (N = 1e5)", large_d, 1.0, 1.1),
            ],
            vec![format!(
                "χ_F(1, 1000) / (N²/8) = {:.6}; χ_F ≈ (N² - N)/8 has log-slope 2 + O(1/N)",
                chi / (1e6 / 8.0)
            )],
        ))
    };
    CriterionReport::from_result(6, "regime slopes", run())
}

pub fn away_from_criticality() -> CriterionReport {
    let run = || -> Result<_> {
        let (n, g, d) = (1_000_000usize, 1.1, 1e-5);
        let l = ln_f(n, g, d)?;
        let predicted = -(n as f64) * d * d / (16.0 * 0.1);
        // Exact thermodynamic susceptibility per site for g > 1.
        let exact = -(n as f64) * d * d / (8.0 * g * g * (g * g - 1.0));
        Ok((
            vec![Check::below(
                "|ln F + Nδ²/16ε| / |ln F|",
                (l - predicted).abs() / l.abs(),
                0.05,
            )],
            vec![format!(
                "ln F = {l:.6e}, leading-order prediction {predicted:.6e}, -Nδ²/(8g²(g²-1)) = {exact:.6e}"
            )],
        ))
    };
    CriterionReport::from_result(7, "away from criticality", run())
}

pub fn susceptibility_limits() -> CriterionReport {
    let run = || -> Result<_> {
        let mut worst: f64 = 0.0;
        for (n, g, d) in [
            (1000usize, 1.0, 1e-5),
            (10_000, 1.0, 1e-6),
            (1000, 1.1, 1e-5),
            (10_000, 0.9, 1e-6),
            (100, 1.5, 1e-4),
            (2000, 1.02, 5e-6),
        ] {
            let l = ln_f(n, g, d)?;
            let chi = fidelity_susceptibility(g, n)?;
            worst = worst.max((l + d * d * chi / 2.0).abs() / l.abs());
        }
        let n1 = 10_000usize;
        let chi1 = fidelity_susceptibility(1.0, n1)?;
        let n2 = 1_000_000usize;
        let chi2 = fidelity_susceptibility(1.1, n2)?;
        let target2 = n2 as f64 / 0.8;
        Ok((
            vec![
                Check::below("max |ln F + δ²χ_F/2| / |ln F| (N|δ| ≤ 1e-2)", worst, 1e-3),
                Check::below("|χ_F(1, 1e4) - N²/8| / (N²/8)", rel(chi1, (n1 * n1) as f64 / 8.0), 0.05),
                Check::below("|χ_F(1.1, 1e6) - N/0.8| / (N/0.8)", rel(chi2, target2), 0.05),
            ],
            vec![format!(
                "χ_F(1.1, 1e6) = {chi2:.6e}; N/(4g²(g²-1)) = {:.6e}",
                n2 as f64 / (4.0 * 1.21 * 0.21)
            )],
        ))
    };
    CriterionReport::from_result(8, "susceptibility limits", run())
}

pub fn log_divergence() -> CriterionReport {
    let run = || -> Result<_> {
        let pts = (2..=6)
            .map(|j| {
                let c = 1.0 - 10f64.powi(-j);
                Ok(((1.0 - c).abs(), -scaling_a_derivative(c, default_step(c))?))
            })
            .collect::<Result<Vec<_>>>()?;
        // dA/dc ≈ s ln|1-c| + const; regress directly in (ln|1-c|, dA/dc).
        let n = pts.len() as f64;
        let xs: Vec<f64> = pts.iter().map(|p| p.0.ln()).collect();
        let ys: Vec<f64> = pts.iter().map(|p| -p.1).collect();
        let mx = xs.iter().sum::<f64>() / n;
        let my = ys.iter().sum::<f64>() / n;
        let slope = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
            / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
        let target = 1.0 / (4.0 * PI);
        let (below, above) = (1.0 - 1e-3, 1.0 + 1e-3);
        let jump =
            scaling_a_derivative(above, default_step(above))? - scaling_a_derivative(below, default_step(below))?;
        Ok((
            vec![
                Check::below("|slope - 1/4π| / (1/4π)", rel(slope, target), 0.02),
                Check::below("|jump - 1/4| / (1/4) at |1-c| = 1e-3", rel(jump, 0.25), 0.02),
            ],
            vec![format!(
                "regression slope {slope:.6} vs 1/4π = {target:.6}; jump {jump:.6}"
            )],
        ))
    };
    CriterionReport::from_result(9, "log-divergence of dA/dc", run())
}

pub fn elliptic_layer() -> CriterionReport {
    let run = || -> Result<_> {
        let mut legendre: f64 = 0.0;
        for m in [0.1, 0.3, 0.5, 0.7, 0.9] {
            let mc = 1.0 - m;
            let (k, kc) = (ellip_k(m)?, ellip_k(mc)?);
            let (e, ec) = (ellip_e(m)?.re, ellip_e(mc)?.re);
            legendre = legendre.max(rel(e * kc + ec * k - k * kc, PI / 2.0));
        }
        let mut agm_dev: f64 = 0.0;
        for i in 0..100 {
            let m = 0.99 * i as f64 / 99.0;
            agm_dev = agm_dev.max(rel(ellip_k(m)?, agm::ellip_k(m)));
        }
        // Im E must shrink steadily towards zero as m → 1⁺.
        let ims = (1..=12)
            .map(|j| Ok(ellip_e(1.0 + 10f64.powi(-j))?.im))
            .collect::<Result<Vec<f64>>>()?;
        let monotone = ims.windows(2).all(|w| w[1] < w[0] && w[1] >= 0.0);
        let last = *ims.last().expect("twelve samples");
        Ok((
            vec![
                Check::below("max Legendre relation relative error", legendre, 1e-9),
                Check::below("max |K_Carlson - K_AGM| / K on [0, 0.99]", agm_dev, 1e-10),
                Check::below(
                    "Im E(1 + 1e-12) (decreasing in m - 1)",
                    if monotone { last } else { f64::INFINITY },
                    1e-5,
                ),
            ],
            vec![],
        ))
    };
    CriterionReport::from_result(10, "elliptic layer", run())
}

pub fn small_system_collapse() -> CriterionReport {
    let run = || -> Result<_> {
        let (n, d) = (1000usize, 1e-7);
        let reference = d * d * (n * n) as f64 / 16.0;
        let vals = [GMode::AtCritical, GMode::PlusDelta, GMode::PlusFiveDelta]
            .iter()
            .map(|m| ln_f(n, m.field(d), d))
            .collect::<Result<Vec<_>>>()?;
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in i + 1..3 {
                worst = worst.max((vals[i] - vals[j]).abs() / reference);
            }
        }
        Ok((
            vec![Check::below("max pairwise |Δ ln F| / (δ²N²/16)", worst, 0.01)],
            vec![format!("ln F = {:?}, -δ²N²/16 = {:.6e}", vals, -reference)],
        ))
    };
    CriterionReport::from_result(11, "small-N curve collapse", run())
}

/// Every criterion, in order.
pub fn run_all() -> Vec<CriterionReport> {
    vec![
        oracle_equivalence(),
        critical_decay(),
        pinch_value(),
        scaling_function_oracle(),
        crossover_exponent(),
        regime_slopes(),
        away_from_criticality(),
        susceptibility_limits(),
        log_divergence(),
        elliptic_layer(),
        small_system_collapse(),
    ]
}
