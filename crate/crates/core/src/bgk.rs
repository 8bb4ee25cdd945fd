//! Zero sums for holomorphic functions on the disc with boundary growth
//! envelopes, and the specific envelopes of `g = f ∘ φ_a`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use num_complex::Complex64;
use num_traits::Float;

use crate::discretize::OmegaData;
use crate::numerics::sphere_area;
use crate::resolvent::resolvent_constants;
use crate::{Error, Result};

/// A boundary point `ζ` with growth exponent `β ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BoundaryPoint {
    pub zeta: Complex64,
    pub beta: f64,
}

/// `log|h(z)| ≤ K / ((1-|z|)^α ∏_j |z-ζ_j|^{β_j})`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GrowthEnvelope {
    pub k: f64,
    pub alpha: f64,
    pub boundary: Vec<BoundaryPoint>,
}

fn check_boundary(boundary: &[BoundaryPoint]) -> Result<()> {
    for b in boundary {
        if (b.zeta.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::domain(alloc::format!("boundary point {} is off the unit circle", b.zeta)));
        }
        if !(b.beta >= 0.0) {
            return Err(Error::domain("boundary exponents must be nonnegative"));
        }
    }
    Ok(())
}

impl GrowthEnvelope {
    pub fn new(k: f64, alpha: f64, boundary: Vec<BoundaryPoint>) -> Result<Self> {
        if !(k >= 0.0) || !(alpha >= 0.0) {
            return Err(Error::domain("envelope needs K >= 0 and alpha >= 0"));
        }
        check_boundary(&boundary)?;
        Ok(GrowthEnvelope { k, alpha, boundary })
    }

    /// The right-hand side `K / ((1-|z|)^α ∏ |z-ζ_j|^{β_j})`.
    pub fn log_bound(&self, z: Complex64) -> f64 {
        self.k / weight(z, self.alpha, &self.boundary)
    }
}

/// `(1-|z|)^α ∏_j |z-ζ_j|^{β_j}`.
fn weight(z: Complex64, alpha: f64, boundary: &[BoundaryPoint]) -> f64 {
    boundary
        .iter()
        .fold((1.0 - z.norm()).powf(alpha), |acc, b| acc * (z - b.zeta).norm().powf(b.beta))
}

/// `Σ_z (1-|z|)^{α+1+τ} ∏_j |z-ζ_j|^{(β_j-1+τ)₊}`.
pub fn bgk_sum(zeros: &[Complex64], alpha: f64, tau: f64, boundary: &[BoundaryPoint]) -> Result<f64> {
    if !(tau > 0.0 && tau < 1.0) {
        return Err(Error::domain(alloc::format!("tau must lie in (0, 1), got {tau}")));
    }
    if !(alpha >= 0.0) {
        return Err(Error::domain("alpha must be nonnegative"));
    }
    check_boundary(boundary)?;
    let mut total = 0.0;
    for &z in zeros {
        if !(z.norm() < 1.0) {
            return Err(Error::domain(alloc::format!("zero {z} is not inside the unit disc")));
        }
        let mut term = (1.0 - z.norm()).powf(alpha + 1.0 + tau);
        for b in boundary {
            term *= (z - b.zeta).norm().powf((b.beta - 1.0 + tau).max(0.0));
        }
        total += term;
    }
    Ok(total)
}

/// Concentric sample circles inside the disc.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SampleSpec {
    pub radii: Vec<f64>,
    pub angles: usize,
}

impl Default for SampleSpec {
    fn default() -> Self {
        SampleSpec {
            radii: vec![0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99],
            angles: 256,
        }
    }
}

impl SampleSpec {
    pub fn points(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.radii.iter().flat_map(move |&r| {
            (0..self.angles).map(move |j| Complex64::from_polar(r, TAU * j as f64 / self.angles as f64))
        })
    }
}

/// Smallest `K` with `(log|h|)₊ ≤ K / weight` on the sample set.
pub fn envelope_estimate(
    h: &dyn Fn(Complex64) -> Result<Complex64>,
    alpha: f64,
    boundary: &[BoundaryPoint],
    samples: &SampleSpec,
) -> Result<f64> {
    check_boundary(boundary)?;
    let h0 = h(Complex64::new(0.0, 0.0))?;
    if (h0 - 1.0).norm() > 1e-9 {
        return Err(Error::Normalization { value: h0 });
    }
    let mut k: f64 = 0.0;
    for z in samples.points() {
        if !(z.norm() < 1.0) {
            return Err(Error::domain("sample radii must be below 1"));
        }
        let v = h(z)?.norm().ln().max(0.0);
        k = k.max(v * weight(z, alpha, boundary));
    }
    Ok(k)
}

/// Normalized finite Blaschke product `∏ b_w(z)/b_w(0)` with
/// `b_w(z) = (w - z)/(1 - w̄ z)`.
pub fn blaschke(zeros: &[Complex64], z: Complex64) -> Result<Complex64> {
    let mut acc = Complex64::new(1.0, 0.0);
    for &w in zeros {
        if !(w.norm() < 1.0) || w.norm() == 0.0 {
            return Err(Error::domain("Blaschke zeros must satisfy 0 < |w| < 1"));
        }
        acc *= (w - z) / ((Complex64::new(1.0, 0.0) - w.conj() * z) * w);
    }
    Ok(acc)
}

/// Inputs of [`lt_envelope`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeInputs {
    pub d: u32,
    pub s: f64,
    pub p: f64,
    /// `Γ_p` of the regularized determinant bound.
    pub gamma_p: f64,
    pub a: f64,
    pub omega: OmegaData,
    /// `‖V‖_{L^p}^p`.
    pub v_norm_pp: f64,
}

/// Envelope of `log|f ∘ φ_a|` on the disc.
///
/// For `s ≤ d/2`: `K = 4^p K₁ C_ω^p a^{d/2s} |ω-a|^{-p} ‖V‖_p^p`, `α = p-1`,
/// `β(+1) = d/s-p+1`, `β(-1) = p-d/s+1`. For `s > d/2`: `K₁` is replaced
/// by `K₄`, `α = p-d/2s`, `β(+1) = 3d/2s-p`, `β(-1) = p-d/2s`. A negative
/// exponent is set to 0 and `2^{|β|}` is folded into `K`, since `|z∓1| ≤ 2`.
pub fn lt_envelope(inp: &EnvelopeInputs) -> Result<GrowthEnvelope> {
    let EnvelopeInputs { d, s, p, a, omega, .. } = *inp;
    if !(a > omega.omega) {
        return Err(Error::domain(alloc::format!("shift a = {a} must exceed omega = {}", omega.omega)));
    }
    if !(inp.v_norm_pp >= 0.0) || !(inp.gamma_p > 0.0) {
        return Err(Error::domain("need ||V||_p^p >= 0 and Gamma_p > 0"));
    }
    let h = f64::from(d) / (2.0 * s);
    let rc = resolvent_constants(d, s, p)?;
    let (m, alpha, b_plus, b_minus) = if s <= f64::from(d) / 2.0 {
        if !(p > h) {
            return Err(Error::domain("regime s <= d/2 needs p > d/2s"));
        }
        (rc.m1, p - 1.0, 2.0 * h - p + 1.0, p - 2.0 * h + 1.0)
    } else {
        let n1 = rc.n1.ok_or(Error::WrongRegime("N1 undefined"))?;
        (n1, p - h, 3.0 * h - p, p - h)
    };
    let k_base = inp.gamma_p / (2.0 * PI).powi(d as i32) * sphere_area(d)? / (2.0 * s) * m;
    let mut k = 4.0f64.powf(p) * k_base * omega.c_omega.powf(p) * a.powf(h) / (a - omega.omega).powf(p)
        * inp.v_norm_pp;
    let mut boundary = Vec::with_capacity(2);
    for (zeta, beta) in [(1.0, b_plus), (-1.0, b_minus)] {
        if beta < 0.0 {
            k *= 2.0f64.powf(-beta);
        }
        boundary.push(BoundaryPoint {
            zeta: Complex64::new(zeta, 0.0),
            beta: beta.max(0.0),
        });
    }
    GrowthEnvelope::new(k, alpha, boundary)
}
