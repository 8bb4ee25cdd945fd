//! Dense complex eigenvalues (Hessenberg reduction + shifted QR) and singular
//! values (one-sided Jacobi), with residual certificates.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_complex::Complex64;
use num_traits::{Float, Zero};

use crate::conformal::dist_to_ray;
use crate::matrix::CMatrix;
use crate::{Error, Result};

/// Default residual tolerance, relative to `‖A‖_F`.
pub const DEFAULT_EIG_TOL: f64 = 1e-8;

const EPS: f64 = f64::EPSILON;

/// Whether an eigenvalue of a discretized operator is treated as a point of
/// the discrete spectrum or as a remnant of the continuous spectrum `[0, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum SpectralClass {
    DiscreteCandidate,
    EssentialLike,
}

/// Eigenvalues counted with algebraic multiplicity, sorted by `(Re, Im)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<Complex64>,
    /// `‖Av - λv‖ / ‖A‖_F` for a unit vector `v`, aligned with `eigenvalues`.
    pub residuals: Vec<f64>,
    /// Filled by [`classify_discrete`].
    pub classes: Option<Vec<SpectralClass>>,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    /// Eigenvalues tagged as discrete candidates (empty before classification).
    pub fn discrete(&self) -> Vec<Complex64> {
        match &self.classes {
            Some(c) => self
                .eigenvalues
                .iter()
                .zip(c)
                .filter(|(_, c)| **c == SpectralClass::DiscreteCandidate)
                .map(|(l, _)| *l)
                .collect(),
            None => Vec::new(),
        }
    }
}

pub(crate) fn lex_cmp(a: &Complex64, b: &Complex64) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// Reduces `a` to upper Hessenberg form `H = Q* A Q`. Returns `(H, Q)`; `Q`
/// is only formed when `want_q`.
fn hessenberg(a: &CMatrix, want_q: bool) -> (CMatrix, Option<CMatrix>) {
    let n = a.rows();
    let mut h = a.clone();
    let mut q = want_q.then(|| CMatrix::identity(n));
    if n < 3 {
        return (h, q);
    }
    let mut v = vec![Complex64::zero(); n];
    for k in 0..n - 2 {
        let norm: f64 = ((k + 1)..n).map(|i| h[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let phase = if x0.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * norm;
        for i in (k + 1)..n {
            v[i] = h[(i, k)];
        }
        v[k + 1] -= alpha;
        let vnorm: f64 = ((k + 1)..n).map(|i| v[i].norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for i in (k + 1)..n {
            v[i] /= vnorm;
        }
        // H <- (I - 2vv*) H on rows k+1..n
        for j in 0..n {
            let mut s = Complex64::zero();
            for i in (k + 1)..n {
                s += v[i].conj() * h[(i, j)];
            }
            if s.is_zero() {
                continue;
            }
            let s = s * 2.0;
            for i in (k + 1)..n {
                let vi = v[i];
                h[(i, j)] -= vi * s;
            }
        }
        // H <- H (I - 2vv*) on columns k+1..n; Q likewise.
        let right = |m: &mut CMatrix| {
            for i in 0..n {
                let mut s = Complex64::zero();
                for j in (k + 1)..n {
                    s += m[(i, j)] * v[j];
                }
                if s.is_zero() {
                    continue;
                }
                let s = s * 2.0;
                for j in (k + 1)..n {
                    let vj = v[j].conj();
                    m[(i, j)] -= s * vj;
                }
            }
        };
        right(&mut h);
        if let Some(q) = q.as_mut() {
            right(q);
        }
        for i in (k + 2)..n {
            h[(i, k)] = Complex64::zero();
        }
    }
    (h, q)
}

/// Complex Givens rotation `G = [[c, s], [-s̄, c]]` with `G [a; b] = [r; 0]`.
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let na = a.norm();
    if b.is_zero() {
        return (1.0, Complex64::zero());
    }
    if na == 0.0 {
        return (0.0, Complex64::new(1.0, 0.0));
    }
    let nrm = na.hypot(b.norm());
    (na / nrm, (a / na) * b.conj() / nrm)
}

fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let m1 = (a + d) * 0.5 + disc;
    let m2 = (a + d) * 0.5 - disc;
    if (m1 - d).norm() <= (m2 - d).norm() {
        m1
    } else {
        m2
    }
}

/// Schur form `A = Z T Z*` of a Hessenberg matrix in place. `T` is upper
/// triangular on return; `z` is updated when present.
fn hessenberg_qr(h: &mut CMatrix, mut z: Option<&mut CMatrix>, full: bool) -> Result<()> {
    let n = h.rows();
    if n == 0 {
        return Ok(());
    }
    let hnorm = h.frobenius_norm().max(f64::MIN_POSITIVE);
    let mut hi = n - 1;
    let mut its = 0usize;
    let mut total = 0usize;
    let budget = 60 * n.max(4);
    while hi > 0 {
        let mut l = hi;
        while l > 0 {
            let s = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            let s = if s == 0.0 { hnorm } else { s };
            if h[(l, l - 1)].norm() <= EPS * s {
                h[(l, l - 1)] = Complex64::zero();
                break;
            }
            l -= 1;
        }
        if l == hi {
            hi -= 1;
            its = 0;
            continue;
        }
        its += 1;
        total += 1;
        if total > budget {
            return Err(Error::Convergence {
                what: "shifted QR iteration",
                estimate: hi as f64,
                error_estimate: h[(hi, hi - 1)].norm(),
            });
        }
        let mu = if its % 10 == 0 {
            // exceptional shift to break cycles
            h[(hi, hi)] + Complex64::new(0.75 * h[(hi, hi - 1)].norm(), 0.0)
        } else {
            wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };
        let (col_lo, col_hi) = if full { (0, n) } else { (l, hi + 1) };
        for k in l..=hi {
            h[(k, k)] -= mu;
        }
        let mut rots: Vec<(f64, Complex64)> = Vec::with_capacity(hi - l);
        for k in l..hi {
            let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
            for j in k..col_hi {
                let x = h[(k, j)];
                let y = h[(k + 1, j)];
                h[(k, j)] = x * c + s * y;
                h[(k + 1, j)] = -s.conj() * x + y * c;
            }
            h[(k + 1, k)] = Complex64::zero();
            rots.push((c, s));
        }
        for (idx, &(c, s)) in rots.iter().enumerate() {
            let k = l + idx;
            let row_end = (k + 2).min(hi) + 1;
            for i in col_lo..row_end {
                let u = h[(i, k)];
                let v = h[(i, k + 1)];
                h[(i, k)] = u * c + s.conj() * v;
                h[(i, k + 1)] = -s * u + v * c;
            }
            if let Some(z) = z.as_deref_mut() {
                for i in 0..n {
                    let u = z[(i, k)];
                    let v = z[(i, k + 1)];
                    z[(i, k)] = u * c + s.conj() * v;
                    z[(i, k + 1)] = -s * u + v * c;
                }
            }
        }
        for k in l..=hi {
            h[(k, k)] += mu;
        }
    }
    Ok(())
}

/// All eigenvalues (with multiplicity), sorted by `(Re, Im)`, without
/// certificates.
pub fn eigvals(a: &CMatrix) -> Result<Vec<Complex64>> {
    check_input(a)?;
    let (mut h, _) = hessenberg(a, false);
    hessenberg_qr(&mut h, None, false)?;
    let mut ev = h.diagonal();
    ev.sort_by(lex_cmp);
    Ok(ev)
}

fn check_input(a: &CMatrix) -> Result<()> {
    if !a.is_square() {
        return Err(Error::domain("eigendecomposition needs a square matrix"));
    }
    if !a.is_finite() {
        return Err(Error::domain("matrix has non-finite entries"));
    }
    Ok(())
}

/// Eigenvector of upper-triangular `t` for its `k`-th diagonal entry, by one
/// step of inverse iteration (back substitution) on `T - t_kk I`.
fn triangular_eigvec(t: &CMatrix, k: usize, small: f64) -> Vec<Complex64> {
    let n = t.rows();
    let lambda = t[(k, k)];
    let mut y = vec![Complex64::zero(); n];
    y[k] = Complex64::new(1.0, 0.0);
    for i in (0..k).rev() {
        let mut s = Complex64::zero();
        for j in (i + 1)..=k {
            s += t[(i, j)] * y[j];
        }
        let mut d = t[(i, i)] - lambda;
        if d.norm() < small {
            d = Complex64::new(small, 0.0);
        }
        y[i] = -s / d;
        let big = y[i].norm();
        if big > 1e100 {
            for x in y.iter_mut() {
                *x /= big;
            }
        }
    }
    y
}

/// Certified eigendecomposition: every eigenvalue comes with the residual of
/// an explicitly computed eigenvector. Fails with
/// [`Error::PartialSpectrum`] if some residual exceeds `tol`.
pub fn eig(a: &CMatrix, tol: f64) -> Result<Spectrum> {
    check_input(a)?;
    let n = a.rows();
    let anorm = a.frobenius_norm();
    if n == 0 {
        return Ok(Spectrum {
            eigenvalues: Vec::new(),
            residuals: Vec::new(),
            classes: None,
        });
    }
    let (mut t, q) = hessenberg(a, true);
    let mut q = q.unwrap();
    hessenberg_qr(&mut t, Some(&mut q), true)?;
    let small = EPS * t.frobenius_norm().max(f64::MIN_POSITIVE);
    let mut pairs: Vec<(Complex64, f64)> = Vec::with_capacity(n);
    for k in 0..n {
        let lambda = t[(k, k)];
        let y = triangular_eigvec(&t, k, small);
        // v = Q y restricted to the nonzero head of y
        let mut v = vec![Complex64::zero(); n];
        for i in 0..n {
            let row = q.row(i);
            let mut s = Complex64::zero();
            for j in 0..=k {
                s += row[j] * y[j];
            }
            v[i] = s;
        }
        let vn: f64 = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        let residual = if vn == 0.0 || anorm == 0.0 {
            0.0
        } else {
            for x in v.iter_mut() {
                *x /= vn;
            }
            let av = a.matvec(&v);
            let r: f64 = av
                .iter()
                .zip(&v)
                .map(|(x, y)| (x - lambda * y).norm_sqr())
                .sum::<f64>()
                .sqrt();
            r / anorm
        };
        pairs.push((lambda, residual));
    }
    pairs.sort_by(|a, b| lex_cmp(&a.0, &b.0));
    let eigenvalues: Vec<Complex64> = pairs.iter().map(|p| p.0).collect();
    let residuals: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let uncertified: Vec<usize> = residuals
        .iter()
        .enumerate()
        .filter(|(_, r)| !(**r <= tol))
        .map(|(i, _)| i)
        .collect();
    if !uncertified.is_empty() {
        return Err(Error::PartialSpectrum {
            eigenvalues,
            uncertified,
        });
    }
    Ok(Spectrum {
        eigenvalues,
        residuals,
        classes: None,
    })
}

/// Singular values in descending order (one-sided Jacobi).
pub fn svd(a: &CMatrix) -> Result<Vec<f64>> {
    if !a.is_finite() {
        return Err(Error::domain("matrix has non-finite entries"));
    }
    let work = if a.rows() >= a.cols() { a.clone() } else { a.adjoint() };
    let (m, n) = (work.rows(), work.cols());
    let mut cols: Vec<Vec<Complex64>> = (0..n).map(|j| work.column(j)).collect();
    let tol = EPS * m as f64;
    // pairs below this are at rounding level of the largest singular value
    let floor = EPS * EPS * work.frobenius_norm().powi(2);
    let mut converged = n < 2;
    for _sweep in 0..80 {
        if converged {
            break;
        }
        let mut rotated = false;
        for i in 0..n {
            for j in (i + 1)..n {
                let (ci, cj) = {
                    let (lo, hi) = cols.split_at_mut(j);
                    (&mut lo[i], &mut hi[0])
                };
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = Complex64::zero();
                for (x, y) in ci.iter().zip(cj.iter()) {
                    alpha += x.norm_sqr();
                    beta += y.norm_sqr();
                    gamma += x.conj() * y;
                }
                let g = gamma.norm();
                if g <= floor || g <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let pc = phase.conj();
                for (x, y) in ci.iter_mut().zip(cj.iter_mut()) {
                    let yx = *y * pc;
                    let xi = *x;
                    *x = xi * c - yx * s;
                    *y = xi * s + yx * c;
                }
            }
        }
        converged = !rotated;
    }
    if !converged {
        return Err(Error::Convergence {
            what: "one-sided Jacobi SVD",
            estimate: f64::NAN,
            error_estimate: f64::NAN,
        });
    }
    let mut sv: Vec<f64> = cols
        .iter()
        .map(|c| c.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}

/// Default threshold `max{10·max residual, 1e-8}`.
pub fn default_classification_eps(spec: &Spectrum) -> f64 {
    (10.0 * spec.max_residual()).max(1e-8)
}

/// Tags `λ` as a discrete candidate iff `d(λ, [0,∞)) > eps`.
pub fn classify_discrete(mut spec: Spectrum, eps: f64) -> Result<Spectrum> {
    if !(eps > 0.0) {
        return Err(Error::domain("classification threshold must be positive"));
    }
    spec.classes = Some(
        spec.eigenvalues
            .iter()
            .map(|&l| {
                if dist_to_ray(l) > eps {
                    SpectralClass::DiscreteCandidate
                } else {
                    SpectralClass::EssentialLike
                }
            })
            .collect(),
    );
    Ok(spec)
}
