//! Periodic-box models of `H₀ = (-Δ)^s` and `H = H₀ + V`: grids, potentials,
//! Fourier-multiplier matrices, Schatten norms and the discrete
//! Birman–Solomyak and shift checks.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;
use num_traits::{Float, Zero};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::eigen::svd;
use crate::matrix::CMatrix;
use crate::{Error, Result};

/// Default cap on the number of grid points `N^d`.
pub const DEFAULT_GRID_CAP: usize = 4096;

/// Uniform grid on the box `[-L/2, L/2)^d` with `N` points per axis.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Grid {
    pub d: u32,
    pub n: usize,
    pub l: f64,
}

impl Grid {
    pub fn new(d: u32, n: usize, l: f64) -> Result<Self> {
        Self::with_cap(d, n, l, DEFAULT_GRID_CAP)
    }

    pub fn with_cap(d: u32, n: usize, l: f64, cap: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::domain("dimension must be at least 1"));
        }
        if n < 4 || !n.is_power_of_two() {
            return Err(Error::domain(alloc::format!(
                "points per axis must be a power of two >= 4, got {n}"
            )));
        }
        if !(l > 0.0 && l.is_finite()) {
            return Err(Error::domain(alloc::format!("box side must be positive, got {l}")));
        }
        let size = n
            .checked_pow(d)
            .ok_or(Error::Resource { requested: usize::MAX, cap })?;
        if size > cap {
            return Err(Error::Resource { requested: size, cap });
        }
        Ok(Grid { d, n, l })
    }

    /// Total number of points `N^d`.
    pub fn size(&self) -> usize {
        self.n.pow(self.d)
    }

    /// Cell volume `(L/N)^d`.
    pub fn cell_volume(&self) -> f64 {
        (self.l / self.n as f64).powi(self.d as i32)
    }

    /// Per-axis indices of the flat (row-major) index `idx`.
    pub fn multi_index(&self, mut idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.d as usize];
        for slot in out.iter_mut().rev() {
            *slot = idx % self.n;
            idx /= self.n;
        }
        out
    }

    /// Coordinates of point `idx`: `x_j = -L/2 + jL/N` per axis.
    pub fn point(&self, idx: usize) -> Vec<f64> {
        let h = self.l / self.n as f64;
        self.multi_index(idx)
            .into_iter()
            .map(|j| -0.5 * self.l + j as f64 * h)
            .collect()
    }

    /// Lattice frequency of flat index `idx`, each component in `{-N/2, …, N/2-1}`.
    pub fn frequency(&self, idx: usize) -> Vec<i64> {
        let half = (self.n / 2) as i64;
        self.multi_index(idx)
            .into_iter()
            .map(|j| j as i64 - half)
            .collect()
    }

    /// `|2πk/L|` for every frequency, in flat order.
    pub fn wavenumbers(&self) -> Vec<f64> {
        (0..self.size())
            .map(|i| {
                let k2: f64 = self
                    .frequency(i)
                    .iter()
                    .map(|&k| {
                        let q = TAU * k as f64 / self.l;
                        q * q
                    })
                    .sum();
                k2.sqrt()
            })
            .collect()
    }
}

/// Shape of a generated potential.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum PotentialKind {
    /// `A exp(-|x-c|²/w²)`.
    Gaussian,
    /// `A` on the cube `|x-c|_∞ ≤ w`, zero elsewhere.
    Box,
    /// `A exp(-|x-c|²/(2w)²) u(x)` with `u` a seeded random trigonometric
    /// polynomial of wavenumbers `≤ 2/w`, scaled to `max |u| = 1`.
    RandomBandlimited,
    /// `A` everywhere.
    Constant,
}

/// Generator descriptor; reproduces the samples bit-exactly.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PotentialSpec {
    pub kind: PotentialKind,
    pub amplitude: Complex64,
    #[cfg_attr(feature = "serde", serde(default = "default_width"))]
    pub width: f64,
    #[cfg_attr(feature = "serde", serde(default))]
    pub center: Vec<f64>,
    #[cfg_attr(feature = "serde", serde(default))]
    pub seed: u64,
}

#[cfg(feature = "serde")]
fn default_width() -> f64 {
    1.0
}

impl PotentialSpec {
    pub fn gaussian(amplitude: Complex64, width: f64) -> Self {
        Self::new(PotentialKind::Gaussian, amplitude, width, 0)
    }

    pub fn boxed(amplitude: Complex64, width: f64) -> Self {
        Self::new(PotentialKind::Box, amplitude, width, 0)
    }

    pub fn random_bandlimited(amplitude: Complex64, width: f64, seed: u64) -> Self {
        Self::new(PotentialKind::RandomBandlimited, amplitude, width, seed)
    }

    pub fn constant(amplitude: Complex64) -> Self {
        Self::new(PotentialKind::Constant, amplitude, 1.0, 0)
    }

    fn new(kind: PotentialKind, amplitude: Complex64, width: f64, seed: u64) -> Self {
        PotentialSpec {
            kind,
            amplitude,
            width,
            center: Vec::new(),
            seed,
        }
    }

    pub fn with_center(mut self, center: Vec<f64>) -> Self {
        self.center = center;
        self
    }

    pub fn sample(&self, grid: &Grid) -> Result<Potential> {
        let d = grid.d as usize;
        if !(self.width > 0.0 && self.width.is_finite()) {
            return Err(Error::domain("potential width must be positive"));
        }
        if !self.amplitude.is_finite() {
            return Err(Error::domain("potential amplitude must be finite"));
        }
        let center = if self.center.is_empty() {
            vec![0.0; d]
        } else if self.center.len() == d {
            self.center.clone()
        } else {
            return Err(Error::domain("potential center has the wrong dimension"));
        };
        let w = self.width;
        let dist2 = |x: &[f64]| -> f64 { x.iter().zip(&center).map(|(a, b)| (a - b) * (a - b)).sum() };
        let values: Vec<Complex64> = match self.kind {
            PotentialKind::Gaussian => (0..grid.size())
                .map(|i| self.amplitude * (-dist2(&grid.point(i)) / (w * w)).exp())
                .collect(),
            PotentialKind::Box => (0..grid.size())
                .map(|i| {
                    let inside = grid
                        .point(i)
                        .iter()
                        .zip(&center)
                        .all(|(a, b)| (a - b).abs() <= w);
                    if inside {
                        self.amplitude
                    } else {
                        Complex64::zero()
                    }
                })
                .collect(),
            PotentialKind::Constant => vec![self.amplitude; grid.size()],
            PotentialKind::RandomBandlimited => {
                let field = random_trig_field(grid, 2.0 / w, self.seed);
                (0..grid.size())
                    .map(|i| {
                        let env = (-dist2(&grid.point(i)) / (4.0 * w * w)).exp();
                        self.amplitude * env * field[i]
                    })
                    .collect()
            }
        };
        Ok(Potential {
            grid: *grid,
            values,
            spec: Some(self.clone()),
        })
    }
}

fn uniform_pm1(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
}

fn random_trig_field(grid: &Grid, kmax: f64, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = grid.wavenumbers();
    let coeffs: Vec<(usize, Complex64)> = (0..grid.size())
        .filter(|&k| q[k] <= kmax)
        .map(|k| (k, Complex64::new(uniform_pm1(&mut rng), uniform_pm1(&mut rng))))
        .collect();
    let mut field = vec![Complex64::zero(); grid.size()];
    for (x, slot) in field.iter_mut().enumerate() {
        let jx = grid.multi_index(x);
        for &(k, c) in &coeffs {
            let phase: f64 = grid
                .frequency(k)
                .iter()
                .zip(&jx)
                .map(|(&kk, &j)| kk as f64 * j as f64)
                .sum::<f64>()
                * TAU
                / grid.n as f64;
            *slot += c * Complex64::from_polar(1.0, phase);
        }
    }
    let max = field.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max > 0.0 {
        for z in field.iter_mut() {
            *z /= max;
        }
    }
    field
}

/// Potential samples on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    grid: Grid,
    values: Vec<Complex64>,
    spec: Option<PotentialSpec>,
}

impl Potential {
    pub fn from_samples(grid: &Grid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.size() {
            return Err(Error::domain(alloc::format!(
                "expected {} samples, got {}",
                grid.size(),
                values.len()
            )));
        }
        Ok(Potential {
            grid: *grid,
            values,
            spec: None,
        })
    }

    pub fn zero(grid: &Grid) -> Self {
        Potential {
            grid: *grid,
            values: vec![Complex64::zero(); grid.size()],
            spec: None,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn spec(&self) -> Option<&PotentialSpec> {
        self.spec.as_ref()
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.im == 0.0)
    }

    /// Multiplies every sample by `c`; the descriptor amplitude follows.
    pub fn scaled(&self, c: Complex64) -> Self {
        Potential {
            grid: self.grid,
            values: self.values.iter().map(|v| v * c).collect(),
            spec: self.spec.clone().map(|mut s| {
                s.amplitude *= c;
                s
            }),
        }
    }
}

/// Grid quadrature of `‖V‖_{L^p}`: `((L/N)^d Σ |V|^p)^{1/p}`; `p = ∞` gives the maximum.
pub fn lp_norm(v: &Potential, p: f64) -> Result<f64> {
    if p.is_infinite() && p > 0.0 {
        return Ok(v.values.iter().map(|z| z.norm()).fold(0.0, f64::max));
    }
    if !(p >= 1.0) {
        return Err(Error::domain(alloc::format!("L^p norm needs p >= 1, got {p}")));
    }
    let s: f64 = v.values.iter().map(|z| z.norm().powf(p)).sum();
    Ok((v.grid.cell_volume() * s).powf(1.0 / p))
}

/// `(Σ σ_k^p)^{1/p}`; `p = ∞` gives the operator norm.
pub fn schatten_norm(m: &CMatrix, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::domain(alloc::format!("Schatten norm needs p >= 1, got {p}")));
    }
    let sv = svd(m)?;
    Ok(schatten_from_singular(&sv, p))
}

pub(crate) fn schatten_from_singular(sv: &[f64], p: f64) -> f64 {
    if p.is_infinite() {
        return sv.first().copied().unwrap_or(0.0);
    }
    let smax = sv.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return 0.0;
    }
    let s: f64 = sv.iter().map(|x| (x / smax).powf(p)).sum();
    smax * s.powf(1.0 / p)
}

/// Unitary DFT `F[k, x] = N^{-d/2} exp(-2πi k·j_x / N)`, rows indexed by frequency.
pub fn dft_matrix(grid: &Grid) -> CMatrix {
    let size = grid.size();
    let norm = (size as f64).sqrt().recip();
    let freqs: Vec<Vec<i64>> = (0..size).map(|k| grid.frequency(k)).collect();
    let idx: Vec<Vec<usize>> = (0..size).map(|x| grid.multi_index(x)).collect();
    CMatrix::from_fn(size, size, |k, x| {
        let phase: i64 = freqs[k]
            .iter()
            .zip(&idx[x])
            .map(|(&kk, &j)| kk * j as i64)
            .sum();
        let phase = phase.rem_euclid(grid.n as i64) as f64;
        Complex64::from_polar(norm, -TAU * phase / grid.n as f64)
    })
}

/// `F* diag(g) F`: the circulant matrix with entries `N^{-d} Σ_k g_k e^{2πi k·(x-y)/N}`.
pub fn fourier_multiplier_matrix(grid: &Grid, g: &[Complex64]) -> Result<CMatrix> {
    let size = grid.size();
    if g.len() != size {
        return Err(Error::domain("multiplier length must equal the grid size"));
    }
    let n = grid.n;
    let roots: Vec<Complex64> = (0..n)
        .map(|j| Complex64::from_polar(1.0, TAU * j as f64 / n as f64))
        .collect();
    let freqs: Vec<Vec<i64>> = (0..size).map(|k| grid.frequency(k)).collect();
    // kernel over index differences Δ ∈ Z_N^d
    let kernel: Vec<Complex64> = (0..size)
        .map(|delta| {
            let dj = grid.multi_index(delta);
            let mut acc = Complex64::zero();
            for (k, gk) in g.iter().enumerate() {
                let phase: i64 = freqs[k].iter().zip(&dj).map(|(&kk, &j)| kk * j as i64).sum();
                acc += gk * roots[phase.rem_euclid(n as i64) as usize];
            }
            acc / size as f64
        })
        .collect();
    let idx: Vec<Vec<usize>> = (0..size).map(|x| grid.multi_index(x)).collect();
    Ok(CMatrix::from_fn(size, size, |x, y| {
        let mut delta = 0usize;
        for (a, b) in idx[x].iter().zip(&idx[y]) {
            delta = delta * n + (a + n - b) % n;
        }
        kernel[delta]
    }))
}

/// `H₀` or `H` on a grid, with its Fourier multipliers and dense matrix.
#[derive(Debug, Clone)]
pub struct DiscretizedOperator {
    pub grid: Grid,
    pub s: f64,
    /// `m_k = |2πk/L|^{2s}` in flat frequency order.
    pub multipliers: Vec<f64>,
    pub potential: Option<Potential>,
    pub matrix: CMatrix,
}

impl DiscretizedOperator {
    /// Spectrum of `H₀`, i.e. the sorted multipliers.
    pub fn free_spectrum(&self) -> Vec<f64> {
        let mut m = self.multipliers.clone();
        m.sort_by(f64::total_cmp);
        m
    }

    /// `diag(V) F* diag(g) F`, or the zero matrix without a potential.
    pub fn weighted_multiplier(&self, g: &[Complex64]) -> Result<CMatrix> {
        let base = fourier_multiplier_matrix(&self.grid, g)?;
        Ok(match &self.potential {
            Some(v) => base.scale_rows(v.values()),
            None => CMatrix::zeros(self.grid.size(), self.grid.size()),
        })
    }

    /// `diag(V) (λ - H₀)^{-1}`.
    pub fn birman_schwinger(&self, lambda: Complex64) -> Result<CMatrix> {
        let g = self.free_resolvent_symbol(lambda)?;
        self.weighted_multiplier(&g)
    }

    /// `(λ - m_k)^{-1}` for every frequency.
    pub fn free_resolvent_symbol(&self, lambda: Complex64) -> Result<Vec<Complex64>> {
        let mut g = Vec::with_capacity(self.multipliers.len());
        for &m in &self.multipliers {
            let den = lambda - m;
            if den.norm() <= f64::EPSILON * (1.0 + m) {
                return Err(Error::Pole("spectral parameter equals a Fourier multiplier"));
            }
            g.push(den.inv());
        }
        Ok(g)
    }
}

fn check_s(s: f64) -> Result<()> {
    if s > 0.0 && s.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(alloc::format!("fractional order must be positive, got {s}")))
    }
}

/// Fourier multipliers `|2πk/L|^{2s}`.
pub fn multipliers(grid: &Grid, s: f64) -> Result<Vec<f64>> {
    check_s(s)?;
    Ok(grid
        .wavenumbers()
        .into_iter()
        .map(|q| if q == 0.0 { 0.0 } else { q.powf(2.0 * s) })
        .collect())
}

pub fn assemble_h0(grid: &Grid, s: f64) -> Result<DiscretizedOperator> {
    let m = multipliers(grid, s)?;
    let g: Vec<Complex64> = m.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let mut matrix = fourier_multiplier_matrix(grid, &g)?;
    // exact symmetry: the kernel is real up to rounding for a symmetric multiplier set
    let size = grid.size();
    for i in 0..size {
        for j in i..size {
            let avg = (matrix[(i, j)] + matrix[(j, i)].conj()) * 0.5;
            matrix[(i, j)] = avg;
            matrix[(j, i)] = avg.conj();
        }
    }
    Ok(DiscretizedOperator {
        grid: *grid,
        s,
        multipliers: m,
        potential: None,
        matrix,
    })
}

pub fn assemble_h(grid: &Grid, s: f64, v: &Potential) -> Result<DiscretizedOperator> {
    if v.grid() != grid {
        return Err(Error::domain("potential was sampled on a different grid"));
    }
    let mut op = assemble_h0(grid, s)?;
    for (i, val) in v.values().iter().enumerate() {
        op.matrix[(i, i)] += val;
    }
    op.potential = Some(v.clone());
    Ok(op)
}

/// Discrete Birman–Solomyak check at `λ ∉ [0, ∞)`, `p ≥ 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BsCheck {
    /// `‖diag(V) F* diag((λ-m)^{-1}) F‖_{S_p}^p`.
    pub lhs: f64,
    /// `N^{-d} Σ_x |V|^p Σ_k |λ-m_k|^{-p}`.
    pub rhs: f64,
}

impl BsCheck {
    pub fn holds(&self, rel_tol: f64) -> bool {
        self.lhs <= self.rhs * (1.0 + rel_tol)
    }
}

pub fn bs_check(grid: &Grid, s: f64, p: f64, v: &Potential, lambda: Complex64) -> Result<BsCheck> {
    if !(p >= 2.0) || !p.is_finite() {
        return Err(Error::domain(alloc::format!(
            "discrete Birman-Solomyak check needs finite p >= 2, got {p}"
        )));
    }
    if crate::conformal::on_ray(lambda) {
        return Err(Error::domain("spectral parameter must lie off [0, inf)"));
    }
    let op = assemble_h(grid, s, v)?;
    let g = op.free_resolvent_symbol(lambda)?;
    let k = op.weighted_multiplier(&g)?;
    let sv = svd(&k)?;
    let lhs: f64 = sv.iter().map(|x| x.powf(p)).sum();
    let vp: f64 = v.values().iter().map(|z| z.norm().powf(p)).sum();
    let gp: f64 = g.iter().map(|z| z.norm().powf(p)).sum();
    Ok(BsCheck {
        lhs,
        rhs: vp * gp / grid.size() as f64,
    })
}

/// An admissible shift `ω` with `η = ‖V(-ω-H₀)^{-1}‖ < 1` and `C_ω = 1/(1-η)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OmegaData {
    pub omega: f64,
    pub c_omega: f64,
    pub eta: f64,
}

impl OmegaData {
    pub fn new(omega: f64, eta: f64) -> Result<Self> {
        if !(omega >= 1.0) || !(0.0..1.0).contains(&eta) {
            return Err(Error::domain("need omega >= 1 and 0 <= eta < 1"));
        }
        Ok(OmegaData {
            omega,
            c_omega: 1.0 / (1.0 - eta),
            eta,
        })
    }
}

/// Largest `ω` tried by [`find_omega`].
pub const OMEGA_CAP: f64 = 1048576.0;

/// `‖diag(V)(-ω-H₀)^{-1}‖_{S_∞}`.
pub fn shift_norm(op: &DiscretizedOperator, omega: f64) -> Result<f64> {
    let k = op.birman_schwinger(Complex64::new(-omega, 0.0))?;
    Ok(svd(&k)?.first().copied().unwrap_or(0.0))
}

/// First `ω ∈ {1, 2, 4, …, 2^20}` with `‖V(-ω-H₀)^{-1}‖ ≤ η_target`.
pub fn find_omega(grid: &Grid, s: f64, v: &Potential, eta_target: f64) -> Result<OmegaData> {
    if !(eta_target > 0.0 && eta_target < 1.0) {
        return Err(Error::domain("eta target must lie in (0, 1)"));
    }
    let op = assemble_h(grid, s, v)?;
    let mut omega = 1.0;
    loop {
        let eta = shift_norm(&op, omega)?;
        if eta <= eta_target {
            return OmegaData::new(omega, eta);
        }
        if omega >= OMEGA_CAP {
            return Err(Error::NoOmega {
                last_omega: omega,
                last_norm: eta,
            });
        }
        omega *= 2.0;
    }
}

/// `‖(-a-H)^{-1}‖` against `C_ω/|ω-a|`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ShiftCheck {
    pub lhs: f64,
    pub rhs: f64,
}

pub fn resolvent_shift_check(op: &DiscretizedOperator, omega: &OmegaData, a: f64) -> Result<ShiftCheck> {
    if !(a > omega.omega) {
        return Err(Error::domain(alloc::format!(
            "shift a = {a} must exceed omega = {}",
            omega.omega
        )));
    }
    let n = op.grid.size();
    let mut m = op.matrix.clone();
    for i in 0..n {
        m[(i, i)] += a;
    }
    let sv = svd(&m)?;
    let smin = sv.last().copied().unwrap_or(0.0);
    let smax = sv.first().copied().unwrap_or(0.0);
    if !(smin > f64::EPSILON * n as f64 * smax) {
        return Err(Error::Singular("a + H"));
    }
    Ok(ShiftCheck {
        lhs: smin.recip(),
        rhs: omega.c_omega / (a - omega.omega),
    })
}
