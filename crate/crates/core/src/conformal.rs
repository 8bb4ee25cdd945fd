//! Conformal maps between the unit disc and the slit plane `C \ [0, ∞)`, and
//! the distortion inequalities that transfer distances between them.

use core::f64::consts::{PI, TAU};

use num_complex::Complex64;
use num_traits::Float;

use crate::{Error, Result, I};

/// Relative tolerance used for boundary membership tests.
pub const BOUNDARY_TOL: f64 = 1e-14;

/// The positive parameter `a` of the disc-to-slit-plane map.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct MapParam(f64);

impl MapParam {
    pub fn new(a: f64) -> Result<Self> {
        if a > 0.0 && a.is_finite() {
            Ok(MapParam(a))
        } else {
            Err(Error::domain(alloc::format!("map parameter must be positive, got {a}")))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// True when `λ` lies on `[0, ∞)` up to `1e-14·(1+|λ|)`.
pub fn on_ray(lambda: Complex64) -> bool {
    let tol = BOUNDARY_TOL * (1.0 + lambda.norm());
    lambda.im.abs() <= tol && lambda.re >= -tol
}

fn check_disc(z: Complex64) -> Result<()> {
    if z.norm() < 1.0 - BOUNDARY_TOL {
        Ok(())
    } else {
        Err(Error::domain(alloc::format!("point {z} is not inside the unit disc")))
    }
}

fn check_slit(lambda: Complex64) -> Result<()> {
    if on_ray(lambda) || !lambda.is_finite() {
        Err(Error::domain(alloc::format!("point {lambda} lies on [0, inf)")))
    } else {
        Ok(())
    }
}

/// Square root with the cut along `[0, ∞)`: `arg λ ∈ (0, 2π)`, hence `Im √λ ≥ 0`.
pub fn sqrt_slit(lambda: Complex64) -> Complex64 {
    let mut arg = lambda.im.atan2(lambda.re);
    if arg <= 0.0 {
        arg += TAU;
    }
    if arg >= TAU {
        arg -= TAU;
    }
    Complex64::from_polar(lambda.norm().sqrt(), 0.5 * arg)
}

/// `φ_a(z) = -a ((z+1)/(z-1))²`, mapping the disc onto `C \ [0, ∞)`.
pub fn phi(a: MapParam, z: Complex64) -> Result<Complex64> {
    check_disc(z)?;
    let w = (z + 1.0) / (z - 1.0);
    Ok(-a.0 * w * w)
}

/// Inverse of [`phi`]: `z = (√λ - i√a)/(√λ + i√a)`.
pub fn phi_inv(a: MapParam, lambda: Complex64) -> Result<Complex64> {
    check_slit(lambda)?;
    let r = sqrt_slit(lambda);
    let ia = I * a.0.sqrt();
    Ok((r - ia) / (r + ia))
}

/// Distance from `λ` to `[0, ∞)`.
pub fn dist_to_ray(lambda: Complex64) -> f64 {
    if lambda.re >= 0.0 {
        lambda.im.abs()
    } else {
        lambda.norm()
    }
}

/// Distance from `p` to the segment `[a, b]` (orthogonal projection, clamped).
pub fn dist_to_segment(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a) * ab.conj()).re / len2;
    let t = t.clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

/// A two-sided bound `lower ≤ x ≤ upper`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sandwich {
    pub lower: f64,
    pub upper: f64,
}

impl Sandwich {
    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }
}

/// Bounds on `d(φ_a(z), [0,∞))` in terms of the disc geometry:
/// `a(1-|z|)|z+1|/|z-1|³` times 1 and 8.
pub fn distortion_disc(a: MapParam, z: Complex64) -> Result<Sandwich> {
    check_disc(z)?;
    let base = a.0 * (1.0 - z.norm()) * (z + 1.0).norm() / (z - 1.0).norm().powi(3);
    Ok(Sandwich {
        lower: base,
        upper: 8.0 * base,
    })
}

/// Bounds on `1 - |φ_a^{-1}(λ)|`:
/// `√a·d(λ,[0,∞))/(√|λ|(a+|λ|))` times 1/4 and 4.
pub fn distortion_ray(a: MapParam, lambda: Complex64) -> Result<Sandwich> {
    check_slit(lambda)?;
    let m = lambda.norm();
    let base = a.0.sqrt() * dist_to_ray(lambda) / (m.sqrt() * (a.0 + m));
    Ok(Sandwich {
        lower: 0.25 * base,
        upper: 4.0 * base,
    })
}

/// The closed-form moduli `|z+1| = 2√|λ|/|√λ+i√a|` and `|z-1| = 2√a/|√λ+i√a|`
/// for `z = φ_a^{-1}(λ)`.
pub fn inverse_moduli(a: MapParam, lambda: Complex64) -> Result<(f64, f64)> {
    check_slit(lambda)?;
    let den = (sqrt_slit(lambda) + I * a.0.sqrt()).norm();
    Ok((2.0 * lambda.norm().sqrt() / den, 2.0 * a.0.sqrt() / den))
}

/// Image of `λ` under `g(λ) = -1/(a+λ)` with its true distance to the
/// segment `[-1/a, 0]` and the lower bound `d(λ,[0,∞))/(2√5 (a+|λ|)²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolventImage {
    pub g: Complex64,
    pub actual: f64,
    pub lower: f64,
}

pub fn g_dist_bound(a: MapParam, lambda: Complex64) -> Result<ResolventImage> {
    let shifted = lambda + a.0;
    if shifted.norm() <= BOUNDARY_TOL * (1.0 + lambda.norm()) {
        return Err(Error::Pole("g(lambda) = -1/(a+lambda) at lambda = -a"));
    }
    check_slit(lambda)?;
    let g = -shifted.inv();
    let actual = dist_to_segment(g, Complex64::new(-1.0 / a.0, 0.0), Complex64::new(0.0, 0.0));
    let m = lambda.norm();
    let lower = dist_to_ray(lambda) / (2.0 * 5.0f64.sqrt() * (a.0 + m) * (a.0 + m));
    Ok(ResolventImage { g, actual, lower })
}

/// Deterministic low-discrepancy points in the open disc (Fibonacci spiral
/// in area measure, pushed towards the boundary by `r = u^{1/4}` so the
/// near-boundary regime is well represented).
pub fn disc_samples(n: usize) -> impl Iterator<Item = Complex64> {
    let golden = PI * (3.0 - 5.0f64.sqrt());
    (0..n).map(move |k| {
        let u = (k as f64 + 0.5) / n as f64;
        let r = u.powf(0.25) * (1.0 - 1e-6);
        Complex64::from_polar(r, golden * k as f64)
    })
}

/// Deterministic points of `C \ [0, ∞)` spread over moduli `10^{-3}..10^{3}`
/// and all arguments in `(0, 2π)`.
pub fn slit_samples(n: usize) -> impl Iterator<Item = Complex64> {
    let golden = (5.0f64.sqrt() - 1.0) / 2.0;
    (0..n).map(move |k| {
        let u = (k as f64 + 0.5) / n as f64;
        let v = (k as f64 * golden).fract();
        let modulus = 10.0f64.powf(-3.0 + 6.0 * u);
        let arg = TAU * (1e-4 + (1.0 - 2e-4) * v);
        Complex64::from_polar(modulus, arg)
    })
}
