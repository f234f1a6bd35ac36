//! Parameter sweeps, log-log slopes, crossover location, power-law fits and
//! scaling-collapse residuals.

use crate::chain::{log_fidelity, ChainSpec};
use crate::error::{FidelityError, Result};
use crate::scaling::{scaling_a_value, G_CRITICAL, SCALING_WINDOW};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    Size,
    Delta,
    Field,
}

/// Where the midpoint field `g` sits relative to the critical point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GMode {
    /// `g = 1`
    AtCritical,
    /// `g = 1 + δ`: one of the two states is critical.
    PlusDelta,
    /// `g = 1 + 5δ`
    PlusFiveDelta,
    Explicit(f64),
}

impl GMode {
    pub fn field(&self, delta: f64) -> f64 {
        match *self {
            GMode::AtCritical => G_CRITICAL,
            GMode::PlusDelta => G_CRITICAL + delta,
            GMode::PlusFiveDelta => G_CRITICAL + 5.0 * delta,
            GMode::Explicit(g) => g,
        }
    }
}

/// Parameters held fixed during a sweep. The one named by the sweep axis is
/// replaced by the grid coordinate; for [`Axis::Field`] the grid gives `g`
/// directly and `g_mode` is ignored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepParams {
    pub size: usize,
    pub delta: f64,
    pub g_mode: GMode,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub x: f64,
    pub log_f: f64,
    pub per_site: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub axis: Axis,
    pub points: Vec<SweepPoint>,
    pub meta: SweepParams,
}

impl SweepTable {
    pub fn xs(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.x)
    }
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.len() < 3 {
        return Err(FidelityError::Arity {
            needed: 3,
            got: grid.len(),
        });
    }
    if let Some(w) = grid.windows(2).find(|w| !(w[1] > w[0])) {
        return Err(FidelityError::domain(format!(
            "grid must be strictly increasing ({} then {})",
            w[0], w[1]
        )));
    }
    Ok(())
}

fn as_size(x: f64) -> Result<usize> {
    if x.fract() != 0.0 || x < 2.0 || x > crate::chain::MAX_SIZE as f64 || (x as usize) % 2 != 0 {
        return Err(FidelityError::domain(format!(
            "size grid entries must be even integers ≥ 2, got {x}"
        )));
    }
    Ok(x as usize)
}

fn resolve(axis: Axis, params: &SweepParams, x: f64) -> Result<ChainSpec> {
    let (n, g, delta) = match axis {
        Axis::Size => (as_size(x)?, params.g_mode.field(params.delta), params.delta),
        Axis::Delta => (params.size, params.g_mode.field(x), x),
        Axis::Field => (params.size, x, params.delta),
    };
    ChainSpec::new(n, g, delta)
}

/// One exact `ln F` per grid point, returned in grid order.
pub fn sweep(axis: Axis, params: SweepParams, grid: &[f64]) -> Result<SweepTable> {
    check_grid(grid)?;
    let points = grid
        .par_iter()
        .map(|&x| {
            let spec = resolve(axis, &params, x).map_err(|e| e.at(x))?;
            let v = log_fidelity(&spec);
            Ok(SweepPoint {
                x,
                log_f: v.log_f,
                per_site: v.per_site,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepTable {
        axis,
        points,
        meta: params,
    })
}

/// `d ln(-ln F) / d ln x` at every grid point: three-point second-order
/// differences on the (generally non-uniform) log grid, one-sided at the ends.
pub fn local_slope(table: &SweepTable) -> Result<Vec<(f64, f64)>> {
    let pts = &table.points;
    if pts.len() < 3 {
        return Err(FidelityError::Arity {
            needed: 3,
            got: pts.len(),
        });
    }
    if let Some(p) = pts.iter().find(|p| !(p.log_f < 0.0) || !(p.x > 0.0)) {
        return Err(FidelityError::DegenerateData(format!(
            "log-log slope needs x > 0 and ln F < 0, got ln F = {} at x = {}",
            p.log_f, p.x
        )));
    }
    let u: Vec<f64> = pts.iter().map(|p| p.x.ln()).collect();
    let v: Vec<f64> = pts.iter().map(|p| (-p.log_f).ln()).collect();
    let last = pts.len() - 1;
    let slopes = (0..=last)
        .map(|i| {
            let s = if i == 0 {
                (v[1] - v[0]) / (u[1] - u[0])
            } else if i == last {
                (v[last] - v[last - 1]) / (u[last] - u[last - 1])
            } else {
                let h1 = u[i] - u[i - 1];
                let h2 = u[i + 1] - u[i];
                (h1 * h1 * v[i + 1] - h2 * h2 * v[i - 1] + (h2 * h2 - h1 * h1) * v[i]) / (h1 * h2 * (h1 + h2))
            };
            (pts[i].x, s)
        })
        .collect();
    Ok(slopes)
}

/// Grid used by [`find_crossover`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossoverConfig {
    /// Geometric points per decade of `N`.
    pub points_per_decade: usize,
    /// The sweep spans `[low/|δ|, high/|δ|]`.
    pub low: f64,
    pub high: f64,
}

impl Default for CrossoverConfig {
    fn default() -> Self {
        Self {
            points_per_decade: 25,
            low: 1e-2,
            high: 1e2,
        }
    }
}

/// Geometric grid of even sizes, deduplicated after rounding.
pub fn even_geometric_grid(lo: f64, hi: f64, points_per_decade: usize) -> Vec<f64> {
    let decades = (hi / lo).log10();
    let count = (decades * points_per_decade as f64).ceil() as usize + 1;
    let mut out: Vec<f64> = (0..count)
        .map(|i| {
            let x = lo * (hi / lo).powf(i as f64 / (count - 1) as f64);
            (2.0 * (x / 2.0).round()).max(2.0)
        })
        .collect();
    out.dedup();
    out
}

/// Where the slope profile crosses `target`, by linear interpolation in
/// `(ln x, slope)`. The slope must be non-increasing over the two points on
/// either side of the crossing.
pub fn crossing_point(slopes: &[(f64, f64)], target: f64) -> Result<f64> {
    let i = slopes
        .windows(2)
        .position(|w| w[0].1 >= target && w[1].1 < target)
        .ok_or_else(|| FidelityError::Range(format!("slope never crosses {target} inside the sweep")))?;
    let lo = i.saturating_sub(1);
    let hi = (i + 2).min(slopes.len() - 1);
    if slopes[lo..=hi].windows(2).any(|w| w[1].1 > w[0].1 + 1e-12) {
        return Err(FidelityError::DataQuality(format!(
            "slope is not monotone around x = {}",
            slopes[i].0
        )));
    }
    let (x0, s0) = slopes[i];
    let (x1, s1) = slopes[i + 1];
    let t = (target - s0) / (s1 - s0);
    Ok((x0.ln() + t * (x1.ln() - x0.ln())).exp())
}

/// System size at which the local slope of `ln(-ln F)` vs `ln N` passes
/// `target_slope` (3/2 marks the middle of the `N²` to `N` crossover).
pub fn find_crossover(delta: f64, g_mode: GMode, target_slope: f64) -> Result<f64> {
    find_crossover_with(delta, g_mode, target_slope, CrossoverConfig::default())
}

pub fn find_crossover_with(delta: f64, g_mode: GMode, target_slope: f64, cfg: CrossoverConfig) -> Result<f64> {
    let d = delta.abs();
    if !(1e-6..=1e-2).contains(&d) {
        return Err(FidelityError::domain(format!(
            "crossover search needs 1e-6 ≤ |δ| ≤ 1e-2, got {delta}"
        )));
    }
    if !(target_slope > 1.0 && target_slope < 2.0) {
        return Err(FidelityError::domain(format!(
            "target slope must lie in (1, 2), got {target_slope}"
        )));
    }
    let grid = even_geometric_grid(cfg.low / d, cfg.high / d, cfg.points_per_decade);
    let params = SweepParams { size: 2, delta, g_mode };
    let table = sweep(Axis::Size, params, &grid)?;
    crossing_point(&local_slope(&table)?, target_slope)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub prefactor_a: f64,
    pub exponent_b: f64,
    pub stderr_b: f64,
    /// `ln y - ln(a x^{-b})` per input point.
    pub residuals: Vec<f64>,
}

/// Least-squares fit of `y = a x^{-b}` as a straight line in log-log space.
pub fn fit_power_law(points: &[(f64, f64)]) -> Result<FitResult> {
    if points.len() < 3 {
        return Err(FidelityError::Arity {
            needed: 3,
            got: points.len(),
        });
    }
    if let Some(p) = points
        .iter()
        .find(|(x, y)| !(*x > 0.0 && *y > 0.0 && x.is_finite() && y.is_finite()))
    {
        return Err(FidelityError::domain(format!(
            "power-law fit needs positive data, got {p:?}"
        )));
    }
    let n = points.len() as f64;
    let lx: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ly: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(FidelityError::DegenerateData("all x values coincide".into()));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residuals: Vec<f64> = lx.iter().zip(&ly).map(|(x, y)| y - (intercept + slope * x)).collect();
    let ssr: f64 = residuals.iter().map(|r| r * r).sum();
    let stderr_b = (ssr / (n - 2.0) / sxx).sqrt();
    Ok(FitResult {
        prefactor_a: intercept.exp(),
        exponent_b: -slope,
        stderr_b,
        residuals,
    })
}

/// `-ln F / (N|δ|)` at `g = 1 + c|δ|`, the finite-size estimate of `A(c)`.
pub fn numeric_scaling(n: usize, delta: f64, c: f64) -> Result<f64> {
    let d = delta.abs();
    let spec = ChainSpec::new(n, G_CRITICAL + c * d, delta)?;
    Ok(-log_fidelity(&spec).log_f / (n as f64 * d))
}

/// Minimum `N|δ|` accepted by [`collapse_residuals`].
pub const COLLAPSE_MIN_N_DELTA: f64 = 10.0;

/// Largest `|(-ln F / N|δ|) - A(c)|` over all `(δ, c)` pairs.
pub fn collapse_residuals(deltas: &[f64], c_grid: &[f64], n: usize) -> Result<f64> {
    let mut pairs = Vec::with_capacity(deltas.len() * c_grid.len());
    for &d in deltas {
        if !(n as f64 * d.abs() >= COLLAPSE_MIN_N_DELTA) {
            return Err(FidelityError::regime(format!(
                "collapse needs N|δ| ≥ {COLLAPSE_MIN_N_DELTA}, got N|δ| = {}",
                n as f64 * d.abs()
            )));
        }
        if d.abs() > SCALING_WINDOW {
            return Err(FidelityError::regime(format!(
                "collapse needs |δ| ≤ {SCALING_WINDOW}, got {d}"
            )));
        }
        for &c in c_grid {
            if (c * d).abs() > SCALING_WINDOW || !c.is_finite() {
                return Err(FidelityError::regime(format!(
                    "collapse needs |g-1| = |c δ| ≤ {SCALING_WINDOW}, got c = {c}, δ = {d}"
                )));
            }
            pairs.push((d, c));
        }
    }
    let residuals = pairs
        .par_iter()
        .map(|&(d, c)| Ok((numeric_scaling(n, d, c)? - scaling_a_value(c)?).abs()))
        .collect::<Result<Vec<f64>>>()?;
    Ok(residuals.into_iter().fold(0.0, f64::max))
}
