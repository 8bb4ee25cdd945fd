//! Regularized determinants `det_n(I - A)`, the perturbation determinant
//! `f(λ) = det_⌈p⌉(I - F(λ))` of a discretized operator, and its growth bound.

use alloc::vec::Vec;
use core::f64::consts::{E, PI, TAU};

use num_complex::Complex64;
use num_traits::{Float, Zero};

use crate::discretize::{schatten_from_singular, DiscretizedOperator, OmegaData};
use crate::eigen::{eigvals, svd};
use crate::matrix::CMatrix;
use crate::{Error, Result};

/// `n = ⌈p⌉`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RegDetOrder(u32);

impl RegDetOrder {
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("determinant order must be at least 1"));
        }
        Ok(RegDetOrder(n))
    }

    pub fn from_p(p: f64) -> Result<Self> {
        if !(p > 0.0 && p.is_finite()) || p > u32::MAX as f64 {
            return Err(Error::domain(alloc::format!("need a finite p > 0, got {p}")));
        }
        Self::new(p.ceil() as u32)
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

/// The constant of `|det_⌈p⌉(I - A)| ≤ exp(Γ_p ‖A‖_{S_p}^p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GammaP {
    pub p: f64,
    pub value: f64,
}

impl GammaP {
    /// `Γ₁ = 1`, `Γ₂ = 1/2`, otherwise `e(2 + ln ⌈p⌉)`.
    pub fn standard(p: f64) -> Result<Self> {
        let n = RegDetOrder::from_p(p)?.get();
        let value = if p == 1.0 {
            1.0
        } else if p == 2.0 {
            0.5
        } else {
            E * (2.0 + f64::from(n).ln())
        };
        Ok(GammaP { p, value })
    }

    pub fn custom(p: f64, value: f64) -> Result<Self> {
        RegDetOrder::from_p(p)?;
        if !(value > 0.0 && value.is_finite()) {
            return Err(Error::domain("Gamma_p must be positive"));
        }
        Ok(GammaP { p, value })
    }
}

/// `log det_n(I - A)` from the eigenvalues of `A`, imaginary part reduced to `(-π, π]`.
/// Returns `-∞` real part when some eigenvalue equals 1.
pub fn log_det_regularized(n: RegDetOrder, eigenvalues: &[Complex64]) -> Complex64 {
    let mut acc = Complex64::zero();
    for &l in eigenvalues {
        let one_minus = Complex64::new(1.0, 0.0) - l;
        if one_minus.is_zero() {
            return Complex64::new(f64::NEG_INFINITY, 0.0);
        }
        acc += one_minus.ln();
        let mut pow = Complex64::new(1.0, 0.0);
        for j in 1..n.get() {
            pow *= l;
            acc += pow / f64::from(j);
        }
    }
    let im = acc.im - TAU * ((acc.im + PI) / TAU).floor();
    Complex64::new(acc.re, if im == -PI { PI } else { im })
}

/// `∏_k (1-λ_k) exp(Σ_{j<n} λ_k^j / j)`.
pub fn det_regularized(n: RegDetOrder, eigenvalues: &[Complex64]) -> Complex64 {
    let l = log_det_regularized(n, eigenvalues);
    if l.re == f64::NEG_INFINITY {
        Complex64::zero()
    } else {
        l.exp()
    }
}

/// `|det_n(I - A)|` against `exp(Γ ‖A‖_{S_n}^n)`, with both logarithms.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GrowthCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub log_lhs: f64,
    pub log_rhs: f64,
}

impl GrowthCheck {
    pub fn holds(&self) -> bool {
        self.log_lhs <= self.log_rhs + 1e-12 * self.log_rhs.abs().max(1.0)
    }
}

pub fn det_growth_check(n: RegDetOrder, a: &CMatrix, gamma: GammaP) -> Result<GrowthCheck> {
    let ev = eigvals(a)?;
    let log_lhs = log_det_regularized(n, &ev).re;
    let order = f64::from(n.get());
    let norm = schatten_from_singular(&svd(a)?, order);
    let log_rhs = gamma.value * norm.powf(order);
    Ok(GrowthCheck {
        lhs: log_lhs.exp(),
        rhs: log_rhs.exp(),
        log_lhs,
        log_rhs,
    })
}

/// Evaluates `f(λ) = det_⌈p⌉(I - F(λ))` with
/// `F(λ) = (λ+a)(a+H)^{-1} V (λ-H₀)^{-1}`, caching `(a+H)^{-1}`.
#[derive(Debug, Clone)]
pub struct PerturbationDeterminant {
    op: DiscretizedOperator,
    order: RegDetOrder,
    a: f64,
    shifted_inverse: CMatrix,
}

impl PerturbationDeterminant {
    pub fn new(op: DiscretizedOperator, p: f64, a: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::domain("shift a must be positive"));
        }
        let order = RegDetOrder::from_p(p)?;
        let n = op.grid.size();
        let mut shifted = op.matrix.clone();
        for i in 0..n {
            shifted[(i, i)] += a;
        }
        let shifted_inverse = shifted
            .lu()
            .map_err(|_| Error::Singular("a + H"))?
            .inverse();
        Ok(PerturbationDeterminant {
            op,
            order,
            a,
            shifted_inverse,
        })
    }

    pub fn operator(&self) -> &DiscretizedOperator {
        &self.op
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn order(&self) -> RegDetOrder {
        self.order
    }

    /// `(a+H)^{-1}`.
    pub fn shifted_inverse(&self) -> &CMatrix {
        &self.shifted_inverse
    }

    /// The matrix `F(λ)`.
    pub fn perturbation(&self, lambda: Complex64) -> Result<CMatrix> {
        let bs = self.op.birman_schwinger(lambda)?;
        Ok(self.shifted_inverse.matmul(&bs).scale(lambda + self.a))
    }

    pub fn log_eval(&self, lambda: Complex64) -> Result<Complex64> {
        if self.op.potential.is_none() {
            return Ok(Complex64::zero());
        }
        let ev = eigvals(&self.perturbation(lambda)?)?;
        Ok(log_det_regularized(self.order, &ev))
    }

    pub fn eval(&self, lambda: Complex64) -> Result<Complex64> {
        let l = self.log_eval(lambda)?;
        Ok(if l.re == f64::NEG_INFINITY {
            Complex64::zero()
        } else {
            l.exp()
        })
    }
}

/// One-shot evaluation of `f(λ)`.
pub fn f_lambda(op: &DiscretizedOperator, p: f64, a: f64, lambda: Complex64) -> Result<Complex64> {
    PerturbationDeterminant::new(op.clone(), p, a)?.eval(lambda)
}

/// Number of zeros minus poles of `f` inside the circle `|λ - center| = r`,
/// by the argument principle on `samples` points; steps whose argument jump
/// exceeds `π/4` are bisected.
pub fn winding_number(
    f: &dyn Fn(Complex64) -> Result<Complex64>,
    center: Complex64,
    radius: f64,
    samples: usize,
) -> Result<i64> {
    if !(radius > 0.0) || samples < 8 {
        return Err(Error::domain("winding number needs r > 0 and at least 8 samples"));
    }
    let point = |t: f64| center + Complex64::from_polar(radius, t);
    let eval = |t: f64| -> Result<Complex64> {
        let v = f(point(t))?;
        if v.is_zero() || !v.is_finite() {
            return Err(Error::Pole("zero or pole of f on the contour"));
        }
        Ok(v)
    };
    let mut total = 0.0;
    let h = TAU / samples as f64;
    let mut prev = eval(0.0)?;
    for k in 1..=samples {
        let t1 = k as f64 * h;
        let next = eval(t1)?;
        total += arg_increment(&eval, t1 - h, t1, prev, next, 0)?;
        prev = next;
    }
    Ok((total / TAU).round() as i64)
}

fn arg_increment(
    eval: &dyn Fn(f64) -> Result<Complex64>,
    t0: f64,
    t1: f64,
    v0: Complex64,
    v1: Complex64,
    depth: u32,
) -> Result<f64> {
    let step = (v1 / v0).arg();
    if step.abs() <= PI / 4.0 || depth >= 12 {
        return Ok(step);
    }
    let tm = 0.5 * (t0 + t1);
    let vm = eval(tm)?;
    Ok(arg_increment(eval, t0, tm, v0, vm, depth + 1)? + arg_increment(eval, tm, t1, vm, v1, depth + 1)?)
}

/// `log|f(λ)|` against `Γ_p (C_ω/|ω-a|)^p |λ+a|^p ‖V(λ-H₀)^{-1}‖_{S_p}^p`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ChainCheck {
    pub log_abs_f: f64,
    /// `Γ_p ‖F(λ)‖_{S_p}^p`, the intermediate step.
    pub growth: f64,
    pub rhs: f64,
}

impl ChainCheck {
    pub fn holds(&self) -> bool {
        let slack = 1e-10 * self.rhs.abs().max(1.0);
        self.log_abs_f <= self.growth + slack && self.growth <= self.rhs + slack
    }
}

pub fn growth_chain_check(
    f: &PerturbationDeterminant,
    omega: &OmegaData,
    gamma: GammaP,
    lambda: Complex64,
) -> Result<ChainCheck> {
    if !(f.a > omega.omega) {
        return Err(Error::domain("shift a must exceed omega"));
    }
    let p = gamma.p;
    let log_abs_f = f.log_eval(lambda)?.re;
    let sf = schatten_from_singular(&svd(&f.perturbation(lambda)?)?, p);
    let sbs = schatten_from_singular(&svd(&f.op.birman_schwinger(lambda)?)?, p);
    let shift = omega.c_omega / (f.a - omega.omega);
    Ok(ChainCheck {
        log_abs_f,
        growth: gamma.value * sf.powf(p),
        rhs: gamma.value * (shift * (lambda + f.a).norm()).powf(p) * sbs.powf(p),
    })
}

/// Eigenvalues of `F(λ)`, exposed for diagnostics.
pub fn perturbation_eigenvalues(f: &PerturbationDeterminant, lambda: Complex64) -> Result<Vec<Complex64>> {
    eigvals(&f.perturbation(lambda)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use crate::discretize::{assemble_h, assemble_h0, find_omega, Grid, PotentialSpec};

    #[test]
    fn det_examples() {
        let two = RegDetOrder::new(2).unwrap();
        let v = det_regularized(two, &[c64(0.5, 0.0)]);
        assert!((v - c64(0.5 * 0.5f64.exp(), 0.0)).norm() < 1e-15);
        for n in 1..5 {
            assert_eq!(det_regularized(RegDetOrder::new(n).unwrap(), &[]), c64(1.0, 0.0));
        }
        let v = det_regularized(RegDetOrder::new(1).unwrap(), &[c64(0.5, 0.0), c64(-1.0, 0.0)]);
        assert!((v - c64(1.0, 0.0)).norm() < 1e-15);
        assert_eq!(det_regularized(two, &[c64(1.0, 0.0)]), c64(0.0, 0.0));
        assert_eq!(RegDetOrder::from_p(2.3).unwrap().get(), 3);
        assert_eq!(RegDetOrder::from_p(2.0).unwrap().get(), 2);
    }

    #[test]
    fn growth_examples() {
        let one = RegDetOrder::new(1).unwrap();
        let r = det_growth_check(one, &CMatrix::from_diag(&[c64(-1.0, 0.0)]), GammaP::standard(1.0).unwrap()).unwrap();
        assert!((r.lhs - 2.0).abs() < 1e-14 && (r.rhs - E).abs() < 1e-14 && r.holds());
        let z = CMatrix::zeros(3, 3);
        let r = det_growth_check(RegDetOrder::new(2).unwrap(), &z, GammaP::standard(2.0).unwrap()).unwrap();
        assert_eq!((r.lhs, r.rhs), (1.0, 1.0));
    }

    #[test]
    fn gamma_defaults() {
        assert_eq!(GammaP::standard(1.0).unwrap().value, 1.0);
        assert_eq!(GammaP::standard(2.0).unwrap().value, 0.5);
        assert!((GammaP::standard(3.0).unwrap().value - E * (2.0 + 3.0f64.ln())).abs() < 1e-15);
        assert!(GammaP::custom(2.0, -1.0).is_err());
    }

    #[test]
    fn free_operator_gives_one() {
        let g = Grid::new(1, 16, 10.0).unwrap();
        let op = assemble_h0(&g, 0.5).unwrap();
        assert_eq!(f_lambda(&op, 2.0, 2.0, c64(-1.0, 0.5)).unwrap(), c64(1.0, 0.0));
        let v = PotentialSpec::constant(c64(0.0, 0.0)).sample(&g).unwrap();
        let op = assemble_h(&g, 0.5, &v).unwrap();
        let f = f_lambda(&op, 2.0, 2.0, c64(-1.0, 0.5)).unwrap();
        assert!((f - c64(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn normalization_at_minus_a() {
        let g = Grid::new(1, 16, 10.0).unwrap();
        let v = PotentialSpec::gaussian(c64(-0.5, 0.5), 1.0).sample(&g).unwrap();
        let op = assemble_h(&g, 0.5, &v).unwrap();
        let f = f_lambda(&op, 2.0, 3.0, c64(-3.0, 0.0)).unwrap();
        assert!((f - c64(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn winding_counts_constant_shift() {
        let g = Grid::new(1, 8, TAU).unwrap();
        let c = c64(0.0, 0.3);
        let v = PotentialSpec::constant(c).sample(&g).unwrap();
        let op = assemble_h(&g, 1.0, &v).unwrap();
        let f = PerturbationDeterminant::new(op, 2.0, 2.0).unwrap();
        let eval = |l: Complex64| f.eval(l);
        // m = 1 has multiplicity 2 (k = ±1); m = 0 is simple
        assert_eq!(winding_number(&eval, c64(1.0, 0.3), 0.2, 64).unwrap(), 2);
        assert_eq!(winding_number(&eval, c64(0.0, 0.3), 0.2, 64).unwrap(), 1);
        assert_eq!(winding_number(&eval, c64(-2.0, 0.3), 0.2, 64).unwrap(), 0);
    }

    #[test]
    fn chain_holds_on_small_well() {
        let g = Grid::new(1, 32, 20.0).unwrap();
        let v = PotentialSpec::gaussian(c64(-0.3, 0.3), 1.0).sample(&g).unwrap();
        let omega = find_omega(&g, 0.5, &v, 0.5).unwrap();
        let op = assemble_h(&g, 0.5, &v).unwrap();
        let f = PerturbationDeterminant::new(op, 2.0, 2.0 * omega.omega).unwrap();
        for l in [c64(-0.5, 0.1), c64(1.0, 1.0), c64(-3.0, -2.0)] {
            let r = growth_chain_check(&f, &omega, GammaP::standard(2.0).unwrap(), l).unwrap();
            assert!(r.holds(), "{l}: {r:?}");
        }
    }
}
