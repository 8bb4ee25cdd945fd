//! Special functions and quadrature behind every constant of the estimates.
//!
//! The closed forms reduce to Beta functions; [`quad_semiinfinite`] is the
//! independent route used to cross-check them.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::Float;

use crate::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural logarithm of `Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // Γ(x)Γ(1-x) = π / sin(πx), valid for 0 < x < 1/2 with sin > 0.
        return (PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// The Gamma function on the real line (poles at non-positive integers give
/// non-finite values).
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    let x = x - 1.0;
    let mut acc = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
}

/// Euler Beta function `B(a, b)` for `a, b > 0`.
pub fn beta(a: f64, b: f64) -> f64 {
    if a + b < 40.0 {
        gamma(a) * gamma(b) / gamma(a + b)
    } else {
        (ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)).exp()
    }
}

/// Surface measure of the unit sphere `S^{d-1}` in `R^d`.
///
/// Returns 2 for `d = 1` and `2π^{d/2}/Γ(d/2)` otherwise, which is the factor
/// produced by polar coordinates. The alternative normalization
/// `v_{d-1} = 2π^{(d-1)/2}/Γ((d-1)/2)` that sometimes appears in the
/// literature is *not* the sphere area (it gives 2 instead of 2π for `d = 2`)
/// and is not used anywhere in this crate.
pub fn sphere_area(d: u32) -> Result<f64> {
    match d {
        0 => Err(Error::domain("sphere_area requires d >= 1")),
        1 => Ok(2.0),
        _ => {
            let h = f64::from(d) / 2.0;
            Ok(2.0 * PI.powf(h) / gamma(h))
        }
    }
}

/// Integrands with algebraic decay whose integrals over `[0, ∞)` have Beta
/// closed forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IntegralSpec {
    /// `t^δ (t²+1)^{-p/2}`; converges iff `p > δ+1 > 0`.
    Algebraic { delta: f64, p: f64 },
    /// `t^a (1+t)^{-b}`; converges iff `a > -1` and `b > a+1`.
    Rational { a: f64, b: f64 },
}

impl IntegralSpec {
    pub fn check(&self) -> Result<()> {
        match *self {
            IntegralSpec::Algebraic { delta, p } => {
                if !(delta + 1.0 > 0.0) {
                    return Err(Error::domain(alloc::format!(
                        "algebraic integral diverges at 0: need delta+1 > 0, got delta = {delta}"
                    )));
                }
                if !(p > delta + 1.0) {
                    return Err(Error::domain(alloc::format!(
                        "algebraic integral diverges at infinity: need p > delta+1, got p = {p}, delta = {delta}"
                    )));
                }
            }
            IntegralSpec::Rational { a, b } => {
                if !(a > -1.0) {
                    return Err(Error::domain(alloc::format!(
                        "rational integral diverges at 0: need a > -1, got a = {a}"
                    )));
                }
                if !(b > a + 1.0) {
                    return Err(Error::domain(alloc::format!(
                        "rational integral diverges at infinity: need b > a+1, got a = {a}, b = {b}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn integrand(&self, t: f64) -> f64 {
        match *self {
            IntegralSpec::Algebraic { delta, p } => t.powf(delta) * (t * t + 1.0).powf(-0.5 * p),
            IntegralSpec::Rational { a, b } => t.powf(a) * (1.0 + t).powf(-b),
        }
    }

    /// Exponent `h` such that the integrand behaves like `t^{-h}` at infinity.
    pub fn decay(&self) -> f64 {
        match *self {
            IntegralSpec::Algebraic { delta, p } => p - delta,
            IntegralSpec::Rational { a, b } => b - a,
        }
    }

    pub fn closed_form(&self) -> Result<f64> {
        self.check()?;
        Ok(match *self {
            IntegralSpec::Algebraic { delta, p } => {
                0.5 * beta((delta + 1.0) / 2.0, (p - delta - 1.0) / 2.0)
            }
            IntegralSpec::Rational { a, b } => beta(a + 1.0, b - a - 1.0),
        })
    }

    pub fn quadrature(&self, cfg: &QuadConfig) -> Result<QuadResult> {
        self.check()?;
        let f = |t: f64| self.integrand(t);
        quad_semiinfinite(&f, self.decay(), cfg)
    }
}

/// `∫₀^∞ t^δ (t²+1)^{-p/2} dt = ½ B((δ+1)/2, (p-δ-1)/2)`.
pub fn integral_algebraic(delta: f64, p: f64) -> Result<f64> {
    IntegralSpec::Algebraic { delta, p }.closed_form()
}

/// `∫₀^∞ t^a (1+t)^{-b} dt = B(a+1, b-a-1)`.
pub fn integral_rational(a: f64, b: f64) -> Result<f64> {
    IntegralSpec::Rational { a, b }.closed_form()
}

/// Tolerances and budget for adaptive quadrature. A panel set is accepted
/// once the summed error estimate is below `max(abs_tol, rel_tol·|value|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_panels: 4000,
        }
    }
}

impl QuadConfig {
    pub fn absolute(tol: f64) -> Self {
        QuadConfig {
            abs_tol: tol,
            rel_tol: 0.0,
            ..Default::default()
        }
    }

    pub fn relative(tol: f64) -> Self {
        QuadConfig {
            abs_tol: 0.0,
            rel_tol: tol,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

// 21-point Gauss-Kronrod rule (QUADPACK qk21); the 10-point Gauss nodes are
// the odd-indexed Kronrod nodes.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689,
    0.973_906_528_517_171_720_077_964_012_084,
    0.930_157_491_355_708_226_001_207_180_060,
    0.865_063_366_688_984_510_732_096_688_423,
    0.780_817_726_586_416_897_063_717_578_345,
    0.679_409_568_299_024_406_234_327_365_115,
    0.562_757_134_668_604_683_339_000_099_273,
    0.433_395_394_129_247_190_799_265_943_166,
    0.294_392_862_701_460_198_131_126_603_104,
    0.148_874_338_981_631_210_884_826_001_130,
    0.0,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062,
    0.032_558_162_307_964_727_478_818_972_459,
    0.054_755_896_574_351_996_031_381_300_245,
    0.075_039_674_810_919_952_767_043_140_916,
    0.093_125_454_583_697_605_535_065_465_083,
    0.109_387_158_802_297_641_899_210_590_326,
    0.123_491_976_262_065_851_077_208_596_631,
    0.134_709_217_311_473_325_928_054_278_740,
    0.142_775_938_577_060_080_797_094_273_139,
    0.147_739_104_901_338_491_374_841_515_972,
    0.149_445_554_002_916_905_664_936_468_390,
];
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893,
    0.149_451_349_150_580_593_145_776_339_658,
    0.219_086_362_515_982_043_995_534_934_228,
    0.269_266_719_309_996_355_091_226_921_569,
    0.295_524_224_714_752_870_173_892_994_651,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn gk21(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> Result<Panel> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[10];
    let mut gauss = 0.0;
    let mut resabs = kronrod.abs();
    let mut fv = [0.0f64; 21];
    fv[10] = fc;
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv[j] = f1;
        fv[20 - j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    if fv.iter().any(|v| !v.is_finite()) {
        return Err(Error::Convergence {
            what: "quadrature (non-finite integrand)",
            estimate: f64::NAN,
            error_estimate: f64::INFINITY,
        });
    }
    let mean = kronrod * 0.5;
    let mut resasc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        resasc += WGK[j] * ((fv[j] - mean).abs() + (fv[20 - j] - mean).abs());
    }
    let value = kronrod * half;
    let resabs = resabs * half.abs();
    let resasc = resasc * half.abs();
    let mut error = ((kronrod - gauss) * half).abs();
    if resasc != 0.0 && error != 0.0 {
        error = resasc * (1.0f64).min((200.0 * error / resasc).powf(1.5));
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * resabs);
    }
    Ok(Panel { a, b, value, error })
}

/// Globally adaptive Gauss-Kronrod quadrature over consecutive panels
/// `[breaks[0], breaks[1]], [breaks[1], breaks[2]], ...`.
pub fn quad_adaptive(f: &dyn Fn(f64) -> f64, breaks: &[f64], cfg: &QuadConfig) -> Result<QuadResult> {
    if breaks.len() < 2 {
        return Err(Error::domain("quadrature needs at least one interval"));
    }
    let mut panels: Vec<Panel> = Vec::with_capacity(64);
    for w in breaks.windows(2) {
        if w[1] > w[0] {
            panels.push(gk21(f, w[0], w[1])?);
        }
    }
    let mut evaluations = 21 * panels.len();
    loop {
        let value: f64 = panels.iter().map(|p| p.value).sum();
        let error: f64 = panels.iter().map(|p| p.error).sum();
        let target = cfg.abs_tol.max(cfg.rel_tol * value.abs());
        if error <= target {
            return Ok(QuadResult {
                value,
                error,
                evaluations,
            });
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .fold((0usize, -1.0f64), |acc, (i, p)| if p.error > acc.1 { (i, p.error) } else { acc });
        let p = panels[worst];
        let mid = 0.5 * (p.a + p.b);
        if panels.len() >= cfg.max_panels || !(mid > p.a && mid < p.b) {
            return Err(Error::Convergence {
                what: "adaptive quadrature",
                estimate: value,
                error_estimate: error,
            });
        }
        let left = gk21(f, p.a, mid)?;
        let right = gk21(f, mid, p.b)?;
        evaluations += 42;
        panels[worst] = left;
        panels.push(right);
    }
}

/// `∫₀^∞ f(t) dt` by adaptive quadrature.
///
/// `[0, 1]` is integrated directly; the tail `[1, ∞)` is mapped onto `(0, 1]`
/// by `t = u^{-m}` with `m = 1/(decay-1)` clamped to `[1/4, 64]`, so an
/// integrand decaying like `t^{-decay}` becomes bounded at `u = 0`.
pub fn quad_semiinfinite(f: &dyn Fn(f64) -> f64, decay: f64, cfg: &QuadConfig) -> Result<QuadResult> {
    quad_semiinfinite_split(f, &[1.0], decay, cfg)
}

/// As [`quad_semiinfinite`] with explicit interior breakpoints. The tail
/// starts at the last (positive) breakpoint.
pub fn quad_semiinfinite_split(
    f: &dyn Fn(f64) -> f64,
    breaks: &[f64],
    decay: f64,
    cfg: &QuadConfig,
) -> Result<QuadResult> {
    if !(decay > 1.0) {
        return Err(Error::domain(alloc::format!(
            "semi-infinite quadrature needs a decay exponent > 1, got {decay}"
        )));
    }
    let mut pts: Vec<f64> = breaks.iter().copied().filter(|b| b.is_finite() && *b > 0.0).collect();
    pts.sort_by(|a, b| a.total_cmp(b));
    pts.dedup();
    if pts.is_empty() {
        pts.push(1.0);
    }
    let c = *pts.last().unwrap();
    let m = (1.0 / (decay - 1.0)).clamp(0.25, 64.0);
    // x in [0, c] is the original variable; x in [c, c+1] encodes u = c+1-x.
    let g = |x: f64| {
        if x <= c {
            f(x)
        } else {
            let u = c + 1.0 - x;
            if u <= 0.0 {
                return 0.0;
            }
            let t = c * u.powf(-m);
            let v = f(t) * c * m * u.powf(-m - 1.0);
            // t overflows only on a set of negligible measure next to u = 0
            if v.is_finite() {
                v
            } else {
                0.0
            }
        }
    };
    let mut all = Vec::with_capacity(pts.len() + 2);
    all.push(0.0);
    all.extend_from_slice(&pts);
    all.push(c + 1.0);
    quad_adaptive(&g, &all, cfg)
}

/// The two-sided comparison `min{1, 2^{α-1}}(a^α+b^α) ≤ (a+b)^α ≤ max{1, 2^{α-1}}(a^α+b^α)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerSumBounds {
    pub lower: f64,
    pub value: f64,
    pub upper: f64,
}

pub fn power_sum_bounds(a: f64, b: f64, alpha: f64) -> Result<PowerSumBounds> {
    if !(a >= 0.0 && b >= 0.0) {
        return Err(Error::domain("power_sum_bounds requires a, b >= 0"));
    }
    if !(alpha > 0.0) {
        return Err(Error::domain("power_sum_bounds requires alpha > 0"));
    }
    let k = 2.0f64.powf(alpha - 1.0);
    let sum = a.powf(alpha) + b.powf(alpha);
    Ok(PowerSumBounds {
        lower: k.min(1.0) * sum,
        value: (a + b).powf(alpha),
        upper: k.max(1.0) * sum,
    })
}
