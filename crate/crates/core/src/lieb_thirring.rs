//! Eigenvalue-sum inequalities: exponents, case dispatch, constant ledgers,
//! the verification pipeline and its supporting surrogate checks.

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Float;

use crate::conformal::{dist_to_ray, dist_to_segment};
use crate::determinant::GammaP;
use crate::discretize::{
    assemble_h, find_omega, lp_norm, schatten_norm, Grid, OmegaData, Potential, PotentialSpec,
};
use crate::eigen::{classify_discrete, default_classification_eps, eig, eigvals, Spectrum, DEFAULT_EIG_TOL};
use crate::matrix::CMatrix;
use crate::numerics::{integral_algebraic, integral_rational, quad_semiinfinite, sphere_area, QuadConfig};
use crate::resolvent::resolvent_constants;
use crate::{Error, Result};

/// Which inequality is being checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Theorem {
    /// Complex-analytic bound for `0 < s ≤ d/2`, `p > d/2s`.
    T1,
    /// Complex-analytic bound for `s > d/2`, `p > 1`.
    T1b,
    /// Operator-theoretic bound for `s > 0`, `p > max{1, d/2s}`; fully explicit.
    T2,
}

impl core::fmt::Display for Theorem {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            Theorem::T1 => "T1",
            Theorem::T1b => "T1b",
            Theorem::T2 => "T2",
        })
    }
}

impl core::str::FromStr for Theorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "T1" | "t1" => Ok(Theorem::T1),
            "T1b" | "t1b" | "T1B" => Ok(Theorem::T1b),
            "T2" | "t2" => Ok(Theorem::T2),
            other => Err(Error::domain(alloc::format!("unknown theorem {other:?}; expected T1, T1b or T2"))),
        }
    }
}

/// Relative tolerance for the boundary cases `p = d/s` and friends.
const TIE_TOL: f64 = 1e-12;

fn sign_class(x: f64, scale: f64) -> core::cmp::Ordering {
    if x.abs() <= TIE_TOL * scale.max(1.0) {
        core::cmp::Ordering::Equal
    } else if x < 0.0 {
        core::cmp::Ordering::Less
    } else {
        core::cmp::Ordering::Greater
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SpectralParams {
    pub d: u32,
    pub s: f64,
    pub p: f64,
    pub tau: f64,
}

impl SpectralParams {
    pub fn new(d: u32, s: f64, p: f64, tau: f64) -> Self {
        SpectralParams { d, s, p, tau }
    }

    /// `d/2s`.
    pub fn h(&self) -> f64 {
        f64::from(self.d) / (2.0 * self.s)
    }

    fn basic(&self) -> Result<()> {
        if self.d == 0 {
            return Err(Error::domain("dimension must be at least 1"));
        }
        if !(self.s > 0.0 && self.s.is_finite()) {
            return Err(Error::domain("hypothesis s > 0 violated"));
        }
        if !(self.p >= 1.0 && self.p.is_finite()) {
            return Err(Error::domain("hypothesis p >= 1 violated"));
        }
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(Error::domain("hypothesis tau > 0 violated"));
        }
        Ok(())
    }

    /// Checks the hypotheses of `theorem`, including the admissible range of
    /// `τ` in the relevant proof case.
    pub fn validate(&self, theorem: Theorem) -> Result<Case> {
        self.basic()?;
        let (d, s, p, tau, h) = (f64::from(self.d), self.s, self.p, self.tau, self.h());
        match theorem {
            Theorem::T1 => {
                if s > d / 2.0 {
                    return Err(Error::domain("T1 needs 0 < s <= d/2 (use T1b for s > d/2)"));
                }
                if !(p > h) {
                    return Err(Error::domain(alloc::format!("T1 needs p > d/2s = {h}, got p = {p}")));
                }
            }
            Theorem::T1b => {
                if s <= d / 2.0 {
                    return Err(Error::domain("T1b needs s > d/2 (use T1 for s <= d/2)"));
                }
                if !(p > 1.0) {
                    return Err(Error::domain(alloc::format!("T1b needs p > max(1, d/2s) = 1, got p = {p}")));
                }
            }
            Theorem::T2 => {
                if !(p > 1.0 && p > h) {
                    return Err(Error::domain(alloc::format!(
                        "T2 needs p > max(1, d/2s) = {}, got p = {p}",
                        h.max(1.0)
                    )));
                }
            }
        }
        let case = case_dispatch(theorem, self)?;
        let limit = case.tau_limit(self);
        if !(tau < limit) {
            return Err(Error::domain(alloc::format!(
                "tau = {tau} is not admissible in {case:?}: need tau < {limit}"
            )));
        }
        Ok(case)
    }
}

/// Proof case selected by the signs of the exponent combinations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Case {
    /// `d/2s < p < d/s`.
    T1Below,
    /// `p = d/s`.
    T1Critical,
    /// `p > d/s` and `p - d/s - 2 - τ ≥ 0`.
    T1AboveFar,
    /// `p > d/s` and `p - d/s - 2 - τ < 0`.
    T1AboveNear,
    /// `p - d/2s - 1 ≥ 0`, `3d/2s - p - 1 < 0`, `p - 3d/2s - 1 - τ > 0`.
    T1bRegion1Far,
    /// `p - d/2s - 1 ≥ 0`, `3d/2s - p - 1 < 0`, `p - 3d/2s - 1 - τ ≤ 0`.
    T1bRegion1Near,
    /// `p - d/2s - 1 < 0`, `3d/2s - p - 1 < 0`.
    T1bRegion2,
    /// `p - d/2s - 1 < 0`, `3d/2s - p - 1 ≥ 0`.
    T1bRegion3,
    /// `p - d/2s - 1 - τ > 0`.
    T2Far,
    /// `p - d/2s - 1 - τ ≤ 0`.
    T2Near,
}

impl Case {
    /// Index `j` of the integral `I_j` (0 for the operator-theoretic bound).
    pub fn index(self) -> u8 {
        match self {
            Case::T1Below => 1,
            Case::T1Critical => 2,
            Case::T1AboveFar => 3,
            Case::T1AboveNear => 4,
            Case::T1bRegion1Far => 5,
            Case::T1bRegion1Near => 6,
            Case::T1bRegion2 => 7,
            Case::T1bRegion3 => 8,
            Case::T2Far | Case::T2Near => 0,
        }
    }

    /// Upper end of the admissible `τ` interval.
    pub fn tau_limit(self, sp: &SpectralParams) -> f64 {
        let (p, h) = (sp.p, sp.h());
        match self {
            Case::T1Below => (2.0 * h - p).min(1.0),
            Case::T1Critical => 1.0,
            Case::T1AboveFar | Case::T1AboveNear => (p - 2.0 * h).min(1.0),
            Case::T1bRegion1Far | Case::T1bRegion1Near => (p + 1.0 - 3.0 * h).min(1.0),
            Case::T1bRegion2 => (p + 1.0 - 3.0 * h).min(1.0 + h - p).min(1.0),
            Case::T1bRegion3 => (1.0 + h - p).min(1.0),
            Case::T2Far | Case::T2Near => f64::INFINITY,
        }
    }
}

pub fn case_dispatch(theorem: Theorem, sp: &SpectralParams) -> Result<Case> {
    use core::cmp::Ordering::*;
    let (p, tau, h) = (sp.p, sp.tau, sp.h());
    Ok(match theorem {
        Theorem::T1 => match sign_class(p - 2.0 * h, p) {
            Less => Case::T1Below,
            Equal => Case::T1Critical,
            Greater => {
                if p - 2.0 * h - 2.0 - tau >= 0.0 {
                    Case::T1AboveFar
                } else {
                    Case::T1AboveNear
                }
            }
        },
        Theorem::T1b => {
            let x = p - h - 1.0;
            let y = 3.0 * h - p - 1.0;
            match (x >= 0.0, y >= 0.0) {
                (true, false) => {
                    if p - 3.0 * h - 1.0 - tau > 0.0 {
                        Case::T1bRegion1Far
                    } else {
                        Case::T1bRegion1Near
                    }
                }
                (false, false) => Case::T1bRegion2,
                (false, true) => Case::T1bRegion3,
                (true, true) => {
                    return Err(Error::domain(
                        "p - d/2s - 1 >= 0 and 3d/2s - p - 1 >= 0 force s <= d/2; not a T1b configuration",
                    ))
                }
            }
        }
        Theorem::T2 => {
            if p - h - 1.0 - tau > 0.0 {
                Case::T2Far
            } else {
                Case::T2Near
            }
        }
    })
}

/// Shape of the summand denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum DenominatorForm {
    /// `|λ|^α (1+|λ|)^β`.
    PowerProduct,
    /// `(1+|λ|)^β` with `β = d/2s + τ`.
    Shifted,
}

/// Summand `d(λ, [0,∞))^q / (|λ|^α (1+|λ|)^β)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExponentSpec {
    pub q: f64,
    pub alpha: f64,
    pub beta: f64,
    pub form: DenominatorForm,
}

pub fn exponents(theorem: Theorem, sp: &SpectralParams) -> Result<ExponentSpec> {
    sp.validate(theorem)?;
    let (p, tau, h) = (sp.p, sp.tau, sp.h());
    Ok(match theorem {
        Theorem::T1 => ExponentSpec {
            q: p + tau,
            alpha: (0.5 * (p + tau)).min(h),
            beta: 2.0 * tau + 0.5 * (2.0 * h - p - tau).max(0.0),
            form: DenominatorForm::PowerProduct,
        },
        Theorem::T1b => ExponentSpec {
            q: p + 1.0 - h + tau,
            alpha: 0.5 + 0.5 * (p - h + tau).min(1.0),
            beta: 2.0 * tau + 0.5 * (h - p + 1.0 - tau).max(0.0),
            form: DenominatorForm::PowerProduct,
        },
        Theorem::T2 => ExponentSpec {
            q: p,
            alpha: 0.0,
            beta: h + tau,
            form: DenominatorForm::Shifted,
        },
    })
}

/// Every constant entering the explicit part of a bound.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConstantsBundle {
    pub theorem: Theorem,
    pub case: Case,
    /// `j` of `I_j`; 0 for the single integral `I` of the explicit bound.
    pub integral_index: u8,
    /// `(a, b)` with `I = ∫₀^∞ t^a (1+t)^{-b} dt`.
    pub integral_exponents: (f64, f64),
    pub integral: f64,
    /// `δ_j`; absent for `T2`.
    pub delta: Option<f64>,
    /// `M₁`, `N₁`, or `∫₀^∞ t^{d/2s-1}(t²+1)^{-p/2} dt` for `T2`.
    pub resolvent_factor: f64,
    /// `K₁`, `K₄`, or the `K₁` of the explicit bound.
    pub k: f64,
    /// `4^p K C_ω^p` (`K₂` or `K₅`); absent for `T2`.
    pub k_envelope: Option<f64>,
    pub gamma_p: Option<f64>,
    pub omega: f64,
    pub c_omega: f64,
    /// Multiplies `‖V‖_p^p`. For `T1`/`T1b` the unknown disc-theorem constant is left out.
    pub explicit_factor: f64,
}

fn integral_spec(case: Case, sp: &SpectralParams) -> (f64, f64) {
    let (p, tau, h) = (sp.p, sp.tau, sp.h());
    match case.index() {
        1..=4 => {
            let x = p - 2.0 * h - 2.0 - tau;
            let m = (2.0 * h - p - tau).max(0.0).max(x);
            (p + 0.5 * x.max(0.0), p + 1.0 + 2.0 * tau + 0.5 * m)
        }
        5..=8 => {
            let x = p - 3.0 * h - 1.0 - tau;
            let m = x.max(0.0).max(h + 1.0 - p - tau);
            (p + 0.5 * x.max(0.0), p + 1.0 + 2.0 * tau + 0.5 * m)
        }
        _ => {
            let x = (p - h - 1.0 - tau).max(0.0);
            (p + x, p + h + 1.0 + tau + x)
        }
    }
}

fn delta_j(theorem: Theorem, sp: &SpectralParams) -> Option<f64> {
    let (p, tau, h) = (sp.p, sp.tau, sp.h());
    match theorem {
        Theorem::T1 => Some(3.5 * p + 1.5 * tau + p.min(2.0 * h) - h),
        Theorem::T1b => Some(
            2.0 * (2.0 * p + 1.0 - h + tau) - 0.5 * (p - h - 1.0 + tau).max(0.0).max(3.0 * h - p - 1.0 + tau),
        ),
        Theorem::T2 => None,
    }
}

pub fn constants_bundle(
    theorem: Theorem,
    sp: &SpectralParams,
    omega: &OmegaData,
    gamma: Option<GammaP>,
) -> Result<ConstantsBundle> {
    let case = sp.validate(theorem)?;
    let exps = exponents(theorem, sp)?;
    let (d, s, p, tau, h) = (sp.d, sp.s, sp.p, sp.tau, sp.h());
    let (ia, ib) = integral_spec(case, sp);
    let integral = integral_rational(ia, ib)?;
    let sphere = sphere_area(d)?;
    let two_pi_d = (2.0 * PI).powi(d as i32);
    let cp = omega.c_omega.powf(p);
    let delta = delta_j(theorem, sp);
    match theorem {
        Theorem::T2 => {
            let w = integral_algebraic(h - 1.0, p)?;
            let k = sphere / (2.0 * s * two_pi_d) * w;
            let explicit_factor = (2.0 * 5.0f64.sqrt()).powf(p) * k * cp * omega.omega.powf(h) / (integral * tau);
            Ok(ConstantsBundle {
                theorem,
                case,
                integral_index: 0,
                integral_exponents: (ia, ib),
                integral,
                delta,
                resolvent_factor: w,
                k,
                k_envelope: None,
                gamma_p: None,
                omega: omega.omega,
                c_omega: omega.c_omega,
                explicit_factor,
            })
        }
        Theorem::T1 | Theorem::T1b => {
            let gamma = match gamma {
                Some(g) => g,
                None => GammaP::standard(p)?,
            };
            let rc = resolvent_constants(d, s, p)?;
            let resolvent_factor = if theorem == Theorem::T1 {
                rc.m1
            } else {
                rc.n1.ok_or(Error::WrongRegime("N1 needs s > d/2"))?
            };
            let k = gamma.value / two_pi_d * sphere / (2.0 * s) * resolvent_factor;
            let delta_v = delta.unwrap_or(0.0);
            let explicit_factor =
                k * 2.0f64.powf(delta_v) / (integral * tau) * cp * omega.omega.powf(exps.beta - tau);
            Ok(ConstantsBundle {
                theorem,
                case,
                integral_index: case.index(),
                integral_exponents: (ia, ib),
                integral,
                delta,
                resolvent_factor,
                k,
                k_envelope: Some(4.0f64.powf(p) * k * cp),
                gamma_p: Some(gamma.value),
                omega: omega.omega,
                c_omega: omega.c_omega,
                explicit_factor,
            })
        }
    }
}

/// Result of [`lt_sum`].
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LtSum {
    pub value: f64,
    pub terms: usize,
    /// Eigenvalues at `λ = 0` with `α > 0`, left out of the sum.
    pub excluded_at_zero: usize,
}

pub fn lt_sum(eigenvalues: &[Complex64], spec: &ExponentSpec) -> LtSum {
    let mut out = LtSum {
        value: 0.0,
        terms: 0,
        excluded_at_zero: 0,
    };
    for &l in eigenvalues {
        let r = l.norm();
        if r == 0.0 && spec.alpha > 0.0 {
            out.excluded_at_zero += 1;
            continue;
        }
        out.value += dist_to_ray(l).powf(spec.q) / (r.powf(spec.alpha) * (1.0 + r).powf(spec.beta));
        out.terms += 1;
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Verdict {
    Holds,
    Violated,
    /// The bound has a non-explicit constant; only the ratio is recorded.
    PropertyOnly,
}

/// Knobs of [`verify`].
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct VerifyOptions {
    pub eta_target: f64,
    pub eig_tol: f64,
    /// Classification threshold; `None` uses `max{10·max residual, 1e-8}`.
    pub classification_eps: Option<f64>,
    /// Override for `Γ_p`.
    pub gamma_p: Option<f64>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            eta_target: 0.5,
            eig_tol: DEFAULT_EIG_TOL,
            classification_eps: None,
            gamma_p: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VerificationReport {
    pub theorem: Theorem,
    pub params: SpectralParams,
    pub grid: Grid,
    pub potential: Option<PotentialSpec>,
    pub exponents: ExponentSpec,
    pub constants: ConstantsBundle,
    pub omega: OmegaData,
    /// `‖V‖_{L^p}^p` on the grid.
    pub v_norm_pp: f64,
    pub lhs: f64,
    /// `explicit_factor · ‖V‖_p^p`.
    pub rhs: f64,
    /// `lhs / rhs`; 0 when `lhs = 0`.
    pub ratio: f64,
    pub verdict: Verdict,
    pub eigenvalue_count: usize,
    pub discrete: Vec<Complex64>,
    pub excluded_at_zero: usize,
    pub classification_eps: f64,
    pub max_residual: f64,
    /// `rhs - lhs`.
    pub margin: f64,
}

/// Runs the whole pipeline: assembly, certified spectrum, classification,
/// `(ω, C_ω)`, constants and the eigenvalue sum.
pub fn verify(
    theorem: Theorem,
    grid: &Grid,
    sp: &SpectralParams,
    v: &Potential,
    opts: &VerifyOptions,
) -> Result<VerificationReport> {
    sp.validate(theorem)?;
    let op = assemble_h(grid, sp.s, v)?;
    let spectrum = eig(&op.matrix, opts.eig_tol)?;
    let eps = opts.classification_eps.unwrap_or_else(|| default_classification_eps(&spectrum));
    let max_residual = spectrum.max_residual();
    let eigenvalue_count = spectrum.len();
    let spectrum = classify_discrete(spectrum, eps)?;
    let discrete = spectrum.discrete();
    let v_norm_pp = lp_norm(v, sp.p)?.powf(sp.p);
    let omega = find_omega(grid, sp.s, v, opts.eta_target)?;
    let exps = exponents(theorem, sp)?;
    let gamma = opts.gamma_p.map(|g| GammaP::custom(sp.p, g)).transpose()?;
    let constants = constants_bundle(theorem, sp, &omega, gamma)?;
    let sum = lt_sum(&discrete, &exps);
    let rhs = constants.explicit_factor * v_norm_pp;
    let lhs = sum.value;
    let ratio = if lhs == 0.0 { 0.0 } else { lhs / rhs };
    let verdict = if lhs == 0.0 {
        Verdict::Holds
    } else if theorem == Theorem::T2 {
        if lhs <= rhs {
            Verdict::Holds
        } else {
            Verdict::Violated
        }
    } else {
        Verdict::PropertyOnly
    };
    Ok(VerificationReport {
        theorem,
        params: *sp,
        grid: *grid,
        potential: v.spec().cloned(),
        exponents: exps,
        constants,
        omega,
        v_norm_pp,
        lhs,
        rhs,
        ratio,
        verdict,
        eigenvalue_count,
        discrete,
        excluded_at_zero: sum.excluded_at_zero,
        classification_eps: eps,
        max_residual,
        margin: rhs - lhs,
    })
}

/// Certified and classified spectrum of `H` on a grid.
pub fn classified_spectrum(grid: &Grid, s: f64, v: &Potential, opts: &VerifyOptions) -> Result<Spectrum> {
    let op = assemble_h(grid, s, v)?;
    let spectrum = eig(&op.matrix, opts.eig_tol)?;
    let eps = opts.classification_eps.unwrap_or_else(|| default_classification_eps(&spectrum));
    classify_discrete(spectrum, eps)
}

/// Pair `(lhs, rhs)` of a checked inequality `lhs ≤ rhs`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Comparison {
    pub lhs: f64,
    pub rhs: f64,
}

impl Comparison {
    pub fn holds(&self, rel_tol: f64) -> bool {
        self.lhs <= self.rhs + rel_tol * self.rhs.abs()
    }
}

/// Finite-dimensional surrogate of the normal-operator eigenvalue bound:
/// `Σ_{μ ∈ σ(B)} d(μ, hull σ(A))^p ≤ ‖B - A‖_{S_p}^p` for normal `A` with
/// collinear spectrum.
pub fn hansmann_check(a: &CMatrix, b: &CMatrix, p: f64) -> Result<Comparison> {
    if !(p >= 1.0) {
        return Err(Error::domain("hansmann_check needs p >= 1"));
    }
    if a.rows() != b.rows() || !a.is_square() || !b.is_square() {
        return Err(Error::domain("A and B must be square of equal size"));
    }
    if !a.is_normal(1e-10) {
        return Err(Error::domain("hypothesis violated: A is not normal"));
    }
    let ev = eigvals(a)?;
    let (lo, hi) = covering_segment(&ev)?;
    let mu = eigvals(b)?;
    let lhs = mu.iter().map(|&m| dist_to_segment(m, lo, hi).powf(p)).sum();
    let rhs = schatten_norm(&(b - a), p)?.powf(p);
    Ok(Comparison { lhs, rhs })
}

fn covering_segment(ev: &[Complex64]) -> Result<(Complex64, Complex64)> {
    let Some(&first) = ev.first() else {
        return Err(Error::domain("empty spectrum"));
    };
    // farthest pair via two sweeps from an arbitrary point
    let far = |from: Complex64| {
        ev.iter()
            .copied()
            .fold(from, |best, z| if (z - from).norm() > (best - from).norm() { z } else { best })
    };
    let lo = far(first);
    let hi = far(lo);
    let scale = ev.iter().map(|z| z.norm()).fold(1.0, f64::max);
    for &z in ev {
        if dist_to_segment(z, lo, hi) > 1e-10 * scale {
            return Err(Error::domain("hypothesis violated: spectrum of A is not collinear"));
        }
    }
    Ok((lo, hi))
}

/// The explicit chain at a fixed shift `a > ω`:
/// `Σ d(λ,[0,∞))^p/(a+|λ|)^{2p} ≤ (2√5)^p K₁ C_ω^p a^{d/2s-p}/|ω-a|^p ‖V‖_p^p`.
pub fn theorem2_pipeline_check(
    grid: &Grid,
    s: f64,
    p: f64,
    v: &Potential,
    omega: &OmegaData,
    a: f64,
    opts: &VerifyOptions,
) -> Result<Comparison> {
    if !(a > omega.omega) {
        return Err(Error::domain(alloc::format!("shift a = {a} must exceed omega = {}", omega.omega)));
    }
    let d = grid.d;
    let h = f64::from(d) / (2.0 * s);
    if !(p > 1.0 && p > h) {
        return Err(Error::domain("needs p > max(1, d/2s)"));
    }
    let spectrum = classified_spectrum(grid, s, v, opts)?;
    let lhs = spectrum
        .discrete()
        .iter()
        .map(|&l| dist_to_ray(l).powf(p) / (a + l.norm()).powf(2.0 * p))
        .sum();
    let k1 = sphere_area(d)? / (2.0 * s * (2.0 * PI).powi(d as i32)) * integral_algebraic(h - 1.0, p)?;
    let rhs = (2.0 * 5.0f64.sqrt()).powf(p) * k1 * omega.c_omega.powf(p) * a.powf(h - p)
        / (a - omega.omega).powf(p)
        * lp_norm(v, p)?.powf(p);
    Ok(Comparison { lhs, rhs })
}

/// Exponents `(γ, E)` of the weight `(a-ω)^p a^γ (a+|λ|)^{-E}` integrated
/// over `a ∈ [ω, ∞)` in each proof case.
pub fn a_weight_exponents(case: Case, sp: &SpectralParams) -> (f64, f64) {
    let (p, tau, h) = (sp.p, sp.tau, sp.h());
    match case {
        Case::T1Below => (-1.0, h + 0.5 * p + 1.5 * tau),
        Case::T1Critical => (-1.0, p + 2.0 * tau),
        Case::T1AboveFar | Case::T1AboveNear => (0.5 * (p - 2.0 * h - 2.0 - tau), 1.5 * (p + tau) - h),
        Case::T1bRegion1Far | Case::T1bRegion1Near => {
            (0.5 * (p - 3.0 * h - 1.0 - tau), 1.5 * (p + tau) - 1.5 * h + 0.5)
        }
        Case::T1bRegion2 => (0.5 * (p - 3.0 * h - 1.0 - tau), p + 1.0 - h + tau),
        Case::T1bRegion3 => (-1.0, 0.5 * (p + 1.0) + 0.5 * h + 1.5 * tau),
        Case::T2Far | Case::T2Near => (p - h - 1.0 - tau, 2.0 * p),
    }
}

/// One eigenvalue's `a`-integral against its closed-form lower bound.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AIntegration {
    pub lambda_abs: f64,
    /// `∫_ω^∞ (a-ω)^p a^γ (a+|λ|)^{-E} da` by quadrature.
    pub numeric: f64,
    /// `(|λ|+ω)^{p+1+γ-E} J` with `J` a Beta integral.
    pub lower: f64,
}

/// Checks the lower bound used when integrating the fixed-`a` inequality
/// over `a ∈ [ω, ∞)`, for each `|λ|`.
pub fn a_integration_check(case: Case, sp: &SpectralParams, omega: f64, lambdas: &[Complex64]) -> Result<Vec<AIntegration>> {
    let (gamma, e) = a_weight_exponents(case, sp);
    let p = sp.p;
    let j = if gamma >= 0.0 {
        integral_rational(p + gamma, e)?
    } else {
        integral_rational(p, e - gamma)?
    };
    let decay = e - p - gamma;
    let mut out = Vec::with_capacity(lambdas.len());
    for &l in lambdas {
        let r = l.norm();
        let scale = r + omega;
        // a = ω + (|λ|+ω) t
        let f = |t: f64| {
            if t == 0.0 {
                return 0.0;
            }
            let u = scale * t;
            (p * u.ln() + gamma * (omega + u).ln() - e * (r + omega + u).ln()).exp() * scale
        };
        let q = quad_semiinfinite(&f, decay, &QuadConfig::relative(1e-10))?;
        out.push(AIntegration {
            lambda_abs: r,
            numeric: q.value,
            lower: scale.powf(p + 1.0 + gamma - e) * j,
        });
    }
    Ok(out)
}

/// Human-readable summary line of a report.
pub fn summary_line(r: &VerificationReport) -> String {
    alloc::format!(
        "{} d={} s={} p={} tau={}: lhs={:.6e} rhs={:.6e} ratio={:.3e} verdict={:?} discrete={}",
        r.theorem,
        r.params.d,
        r.params.s,
        r.params.p,
        r.params.tau,
        r.lhs,
        r.rhs,
        r.ratio,
        r.verdict,
        r.discrete.len()
    )
}
