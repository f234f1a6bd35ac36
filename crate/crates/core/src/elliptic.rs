//! Complete elliptic integrals `K(m)` and `E(m)` in the parameter convention
//! (`m = k²`), assembled from Carlson's symmetric integrals over the complex
//! numbers:
//!
//! ```text
//! K(m) = R_F(0, 1-m, 1)
//! E(m) = 2 R_G(0, 1-m, 1)
//! ```
//!
//! For `m > 1` the second argument lies on the branch cut. It is taken as
//! `1 - m + i0`, i.e. `m` approached from below the real axis, which gives
//! `Im E(m) ≥ 0`.
//!
//! The arithmetic-geometric-mean routines in [`agm`] are kept as an
//! independent check of the Carlson path.

use crate::error::{FidelityError, Result};
use num_complex::Complex64;

/// A complex number with finite components.
pub type ComplexValue = Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticConfig {
    rel_tol: f64,
    max_iter: usize,
}

impl Default for EllipticConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            max_iter: 100,
        }
    }
}

impl EllipticConfig {
    pub fn new(rel_tol: f64, max_iter: usize) -> Result<Self> {
        if !(rel_tol > 0.0 && rel_tol <= 1e-8) {
            return Err(FidelityError::domain(format!(
                "rel_tol must lie in (0, 1e-8], got {rel_tol:e}"
            )));
        }
        if max_iter < 20 {
            return Err(FidelityError::domain(format!(
                "max_iter must be at least 20, got {max_iter}"
            )));
        }
        Ok(Self { rel_tol, max_iter })
    }

    pub fn rel_tol(&self) -> f64 {
        self.rel_tol
    }

    pub fn max_iter(&self) -> usize {
        self.max_iter
    }
}

fn check_args(args: [Complex64; 3]) -> Result<()> {
    if args.iter().any(|a| !(a.re.is_finite() && a.im.is_finite())) {
        return Err(FidelityError::domain("Carlson arguments must be finite"));
    }
    if args.iter().filter(|a| a.norm() == 0.0).count() > 1 {
        return Err(FidelityError::domain("at most one Carlson argument may be zero"));
    }
    Ok(())
}

fn finite(v: Complex64, what: &str) -> Result<Complex64> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(FidelityError::numerical(
            format!("{what} produced a non-finite value"),
            f64::NAN,
        ))
    }
}

fn spread(a: Complex64, args: [Complex64; 3]) -> f64 {
    args.iter().map(|x| (a - x).norm()).fold(0.0, f64::max) / a.norm()
}

fn lambda(sx: Complex64, sy: Complex64, sz: Complex64) -> Complex64 {
    sx * sy + sy * sz + sz * sx
}

/// Carlson's `R_F(x, y, z) = ½ ∫₀^∞ [(t+x)(t+y)(t+z)]^{-1/2} dt`.
pub fn carlson_rf(x: Complex64, y: Complex64, z: Complex64) -> Result<Complex64> {
    carlson_rf_with(x, y, z, &EllipticConfig::default())
}

pub fn carlson_rf_with(x: Complex64, y: Complex64, z: Complex64, cfg: &EllipticConfig) -> Result<Complex64> {
    check_args([x, y, z])?;
    // The fifth-order tail leaves a relative error below spread⁶/4.
    let stop = cfg.rel_tol.powf(1.0 / 6.0);
    let (mut x, mut y, mut z) = (x, y, z);
    let mut a = (x + y + z) / 3.0;
    let mut iter = 0;
    let mut s = spread(a, [x, y, z]);
    while s >= stop {
        if iter == cfg.max_iter {
            return Err(FidelityError::numerical("R_F duplication did not converge", s));
        }
        let lam = lambda(x.sqrt(), y.sqrt(), z.sqrt());
        x = (x + lam) * 0.25;
        y = (y + lam) * 0.25;
        z = (z + lam) * 0.25;
        a = (a + lam) * 0.25;
        s = spread(a, [x, y, z]);
        iter += 1;
    }
    let dx = (a - x) / a;
    let dy = (a - y) / a;
    let dz = -(dx + dy);
    let e2 = dx * dy - dz * dz;
    let e3 = dx * dy * dz;
    let series = 1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0;
    finite(series / a.sqrt(), "R_F")
}

/// Carlson's `R_D(x, y, z) = 3/2 ∫₀^∞ [(t+x)(t+y)]^{-1/2} (t+z)^{-3/2} dt`.
pub fn carlson_rd(x: Complex64, y: Complex64, z: Complex64) -> Result<Complex64> {
    carlson_rd_with(x, y, z, &EllipticConfig::default())
}

pub fn carlson_rd_with(x: Complex64, y: Complex64, z: Complex64, cfg: &EllipticConfig) -> Result<Complex64> {
    check_args([x, y, z])?;
    if z.norm() == 0.0 {
        return Err(FidelityError::domain("R_D requires a non-zero third argument"));
    }
    let stop = (cfg.rel_tol / 4.0).powf(1.0 / 6.0);
    let (mut x, mut y, mut z) = (x, y, z);
    let mut a = (x + y + 3.0 * z) / 5.0;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut fac = 1.0;
    let mut iter = 0;
    let mut s = spread(a, [x, y, z]);
    while s >= stop {
        if iter == cfg.max_iter {
            return Err(FidelityError::numerical("R_D duplication did not converge", s));
        }
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lam = lambda(sx, sy, sz);
        sum += fac / (sz * (z + lam));
        fac *= 0.25;
        x = (x + lam) * 0.25;
        y = (y + lam) * 0.25;
        z = (z + lam) * 0.25;
        a = (a + lam) * 0.25;
        s = spread(a, [x, y, z]);
        iter += 1;
    }
    let dx = (a - x) / a;
    let dy = (a - y) / a;
    let dz = -(dx + dy) / 3.0;
    let xy = dx * dy;
    let z2 = dz * dz;
    let e2 = xy - 6.0 * z2;
    let e3 = (3.0 * xy - 8.0 * z2) * dz;
    let e4 = 3.0 * (xy - z2) * z2;
    let e5 = xy * z2 * dz;
    let series = 1.0 - 3.0 * e2 / 14.0 + e3 / 6.0 + 9.0 * e2 * e2 / 88.0 - 3.0 * e4 / 22.0 - 9.0 * e2 * e3 / 52.0
        + 3.0 * e5 / 26.0;
    finite(fac * series / (a * a.sqrt()) + 3.0 * sum, "R_D")
}

/// Carlson's `R_G`, from
/// `2 R_G(x,y,z) = z R_F - (x-z)(y-z) R_D / 3 + √x √y / √z`
/// with the largest argument in the `z` slot.
pub fn carlson_rg(x: Complex64, y: Complex64, z: Complex64) -> Result<Complex64> {
    carlson_rg_with(x, y, z, &EllipticConfig::default())
}

pub fn carlson_rg_with(x: Complex64, y: Complex64, z: Complex64, cfg: &EllipticConfig) -> Result<Complex64> {
    check_args([x, y, z])?;
    let mut args = [x, y, z];
    args.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
    let [x, y, z] = args;
    let rf = carlson_rf_with(x, y, z, cfg)?;
    let rd = carlson_rd_with(x, y, z, cfg)?;
    let tail = if x.norm() == 0.0 || y.norm() == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        x.sqrt() * y.sqrt() / z.sqrt()
    };
    finite(0.5 * (z * rf - (x - z) * (y - z) * rd / 3.0 + tail), "R_G")
}

fn parameter_arg(m: f64) -> Complex64 {
    // +0.0 imaginary part: continuation from above the cut in 1 - m.
    Complex64::new(1.0 - m, 0.0)
}

/// `K(m) = ∫₀^{π/2} (1 - m sin²θ)^{-1/2} dθ` for `m < 1`.
pub fn ellip_k(m: f64) -> Result<f64> {
    ellip_k_with(m, &EllipticConfig::default())
}

pub fn ellip_k_with(m: f64, cfg: &EllipticConfig) -> Result<f64> {
    if !m.is_finite() {
        return Err(FidelityError::domain("elliptic parameter must be finite"));
    }
    if m >= 1.0 {
        return Err(FidelityError::domain(format!("K(m) requires m < 1, got m = {m}")));
    }
    let one = Complex64::new(1.0, 0.0);
    Ok(carlson_rf_with(Complex64::new(0.0, 0.0), parameter_arg(m), one, cfg)?.re)
}

/// `E(m) = ∫₀^{π/2} (1 - m sin²θ)^{1/2} dθ`, complex for `m > 1`.
pub fn ellip_e(m: f64) -> Result<Complex64> {
    ellip_e_with(m, &EllipticConfig::default())
}

pub fn ellip_e_with(m: f64, cfg: &EllipticConfig) -> Result<Complex64> {
    if !m.is_finite() {
        return Err(FidelityError::domain("elliptic parameter must be finite"));
    }
    if m == 1.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let one = Complex64::new(1.0, 0.0);
    // E = R_F - (m/3) R_D, the z = 1 form of 2 R_G(0, 1-m, 1).
    let y = parameter_arg(m);
    let zero = Complex64::new(0.0, 0.0);
    let rf = carlson_rf_with(zero, y, one, cfg)?;
    let rd = carlson_rd_with(zero, y, one, cfg)?;
    let mut e = rf - m / 3.0 * rd;
    if m < 1.0 {
        e.im = 0.0;
    }
    finite(e, "E(m)")
}

/// Arithmetic-geometric-mean evaluations of `K` and `E`, used as an oracle.
pub mod agm {
    use std::f64::consts::FRAC_PI_2;

    fn iterate(m: f64) -> (f64, f64) {
        let mut a = 1.0f64;
        let mut b = (1.0 - m).sqrt();
        let mut c2 = m;
        let mut pow = 0.5;
        let mut sum = pow * c2;
        for _ in 0..64 {
            if (a - b).abs() <= 1e-16 * a {
                break;
            }
            let an = 0.5 * (a + b);
            let c = 0.5 * (a - b);
            b = (a * b).sqrt();
            a = an;
            pow *= 2.0;
            c2 = c * c;
            sum += pow * c2;
        }
        (FRAC_PI_2 / a, sum)
    }

    /// `K(m)` for `m < 1`.
    pub fn ellip_k(m: f64) -> f64 {
        iterate(m).0
    }

    /// `E(m)` for `m ≤ 1`.
    pub fn ellip_e(m: f64) -> f64 {
        if m == 1.0 {
            return 1.0;
        }
        let (k, sum) = iterate(m);
        k * (1.0 - sum)
    }
}
