//! `L^p` norms of the free resolvent symbol `(λ - |ξ|^{2s})^{-1}` on `R^d`:
//! radial quadrature and closed-form upper bounds.

use num_complex::Complex64;
use num_traits::Float;

use crate::conformal::{dist_to_ray, on_ray};
use crate::numerics::{integral_algebraic, quad_semiinfinite_split, sphere_area, QuadConfig};
use crate::{Error, Result};

fn check_params(d: u32, s: f64, p: f64) -> Result<()> {
    if d == 0 {
        return Err(Error::domain("dimension must be at least 1"));
    }
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::domain(alloc::format!("fractional order must be positive, got {s}")));
    }
    if !p.is_finite() {
        return Err(Error::domain("p must be finite"));
    }
    Ok(())
}

fn check_lambda(lambda: Complex64) -> Result<()> {
    if on_ray(lambda) || !lambda.is_finite() {
        Err(Error::domain(alloc::format!("spectral parameter {lambda} lies on [0, inf)")))
    } else {
        Ok(())
    }
}

/// `‖(λ - |·|^{2s})^{-1}‖_{L^p}^p = |S^{d-1}| ∫₀^∞ r^{d-1} |r^{2s} - λ|^{-p} dr`.
pub fn resolvent_lp_direct(d: u32, s: f64, p: f64, lambda: Complex64, tol: f64) -> Result<f64> {
    check_params(d, s, p)?;
    check_lambda(lambda)?;
    let h = f64::from(d) / (2.0 * s);
    if !(p > h) {
        return Err(Error::domain(alloc::format!(
            "resolvent norm diverges: need p > d/2s = {h}, got p = {p}"
        )));
    }
    let dm1 = f64::from(d) - 1.0;
    let two_s = 2.0 * s;
    let f = move |r: f64| {
        if r == 0.0 {
            return if d == 1 { lambda.norm().powf(-p) } else { 0.0 };
        }
        r.powf(dm1) * (Complex64::new(r.powf(two_s), 0.0) - lambda).norm().powf(-p)
    };
    // breakpoints around the radius where r^{2s} meets |λ| and Re λ
    let mut breaks: alloc::vec::Vec<f64> = alloc::vec![lambda.norm().powf(1.0 / two_s)];
    if lambda.re > 0.0 {
        let im = lambda.im.abs();
        for shift in [-1.0, 0.0, 1.0] {
            let v = lambda.re + shift * im;
            if v > 0.0 {
                breaks.push(v.powf(1.0 / two_s));
            }
        }
    }
    let cfg = QuadConfig {
        abs_tol: 0.0,
        rel_tol: tol,
        max_panels: 20000,
    };
    let decay = two_s * p - dm1;
    let q = quad_semiinfinite_split(&f, &breaks, decay, &cfg)?;
    Ok(sphere_area(d)? * q.value)
}

/// Every constant of the closed-form resolvent bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ResolventConstants {
    /// `δ = d/2s - 1`.
    pub delta: f64,
    /// `max{1, 2^{δ-1}}`.
    pub c_ds: f64,
    /// `max{1, 2^{1-δ}}`.
    pub c_prime_ds: f64,
    pub k1: f64,
    /// `K₁ C'_{d,s} 2^{δ/2}`.
    pub k2: f64,
    /// `1/(δ+1) + 2∫₀^∞ (t²+1)^{-p/2} dt`.
    pub k3: f64,
    /// `max{K₂, ∫₀^∞ t^δ (t²+1)^{-p/2} dt}`.
    pub m1: f64,
    /// `max{∫₀^∞ t^δ (t²+1)^{-p/2} dt, K₃}`, defined for `s > d/2` only.
    pub n1: Option<f64>,
}

pub fn resolvent_constants(d: u32, s: f64, p: f64) -> Result<ResolventConstants> {
    check_params(d, s, p)?;
    let h = f64::from(d) / (2.0 * s);
    if !(p > 1.0 && p > h) {
        return Err(Error::domain(alloc::format!(
            "resolvent constants need p > max(1, d/2s) = {}, got p = {p}",
            h.max(1.0)
        )));
    }
    let delta = h - 1.0;
    let c_ds = 2.0f64.powf(delta - 1.0).max(1.0);
    let c_prime_ds = 2.0f64.powf(1.0 - delta).max(1.0);
    let flat = integral_algebraic(0.0, p)?;
    let weighted = integral_algebraic(delta, p)?;
    let k1 = ((1.0 + c_ds) * flat).max(c_ds * weighted);
    let k2 = k1 * c_prime_ds * 2.0f64.powf(0.5 * delta);
    let k3 = 1.0 / (delta + 1.0) + 2.0 * flat;
    let m1 = k2.max(weighted);
    let n1 = (delta < 0.0).then(|| weighted.max(k3));
    Ok(ResolventConstants {
        delta,
        c_ds,
        c_prime_ds,
        k1,
        k2,
        k3,
        m1,
        n1,
    })
}

/// `|S^{d-1}|/(2s) · M₁ · |λ|^{d/2s-1} / d(λ, [0,∞))^{p-1}` for `0 < s ≤ d/2`.
pub fn bound_br(d: u32, s: f64, p: f64, lambda: Complex64) -> Result<f64> {
    check_params(d, s, p)?;
    if s > f64::from(d) / 2.0 {
        return Err(Error::WrongRegime("s > d/2: use bound_br1"));
    }
    check_lambda(lambda)?;
    let k = resolvent_constants(d, s, p)?;
    let h = f64::from(d) / (2.0 * s);
    Ok(sphere_area(d)? / (2.0 * s) * k.m1 * lambda.norm().powf(h - 1.0)
        / dist_to_ray(lambda).powf(p - 1.0))
}

/// `|S^{d-1}|/(2s) · N₁ / d(λ, [0,∞))^{p-d/2s}` for `s > d/2`.
pub fn bound_br1(d: u32, s: f64, p: f64, lambda: Complex64) -> Result<f64> {
    check_params(d, s, p)?;
    if s <= f64::from(d) / 2.0 {
        return Err(Error::WrongRegime("s <= d/2: use bound_br"));
    }
    check_lambda(lambda)?;
    let k = resolvent_constants(d, s, p)?;
    let h = f64::from(d) / (2.0 * s);
    Ok(sphere_area(d)? / (2.0 * s) * k.n1.unwrap_or(f64::NAN) / dist_to_ray(lambda).powf(p - h))
}

/// Whichever of [`bound_br`] and [`bound_br1`] applies.
pub fn bound_auto(d: u32, s: f64, p: f64, lambda: Complex64) -> Result<f64> {
    if s <= f64::from(d) / 2.0 {
        bound_br(d, s, p, lambda)
    } else {
        bound_br1(d, s, p, lambda)
    }
}

/// Sharper bound on the negative half-plane `Re λ < 0`:
/// `|S^{d-1}|/(2s) · ∫₀^∞ t^{d/2s-1}(t²+1)^{-p/2} dt · |λ|^{d/2s-1} / |λ|^{p-1}`.
pub fn bound_left_half_plane(d: u32, s: f64, p: f64, lambda: Complex64) -> Result<f64> {
    check_params(d, s, p)?;
    check_lambda(lambda)?;
    if !(lambda.re < 0.0) {
        return Err(Error::WrongRegime("needs Re(lambda) < 0"));
    }
    let h = f64::from(d) / (2.0 * s);
    let w = integral_algebraic(h - 1.0, p)?;
    Ok(sphere_area(d)? / (2.0 * s) * w * lambda.norm().powf(h - 1.0)
        / dist_to_ray(lambda).powf(p - 1.0))
}
