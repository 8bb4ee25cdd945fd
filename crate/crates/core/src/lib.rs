//! Numerical kernels for spectral estimates of fractional Schrödinger operators
//! `H = (-Δ)^s + V` with complex-valued potentials.
//!
//! The crate is `no_std` and only needs an allocator. Everything here is a pure
//! function of its inputs: special functions and quadrature ([`numerics`]),
//! conformal maps between the disc and the slit plane ([`conformal`]), dense
//! complex linear algebra ([`matrix`], [`eigen`]), periodic-box models of the
//! operator ([`discretize`]), free-resolvent norms ([`resolvent`]),
//! regularized determinants ([`determinant`]), zero-counting envelopes
//! ([`bgk`]) and the eigenvalue-sum inequalities themselves ([`lieb_thirring`]).

#![no_std]
#![warn(missing_debug_implementations)]
// std's inherent float methods shadow `num_traits::Float` whenever std is in the build graph
#![allow(unused_imports)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bgk;
pub mod conformal;
pub mod determinant;
pub mod discretize;
pub mod eigen;
mod error;
pub mod lieb_thirring;
pub mod matrix;
pub mod numerics;
pub mod resolvent;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Unit imaginary number.
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Convenience constructor.
#[inline]
pub const fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
