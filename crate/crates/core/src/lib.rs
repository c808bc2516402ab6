//! Zero-temperature Casimir energy and force between two parallel
//! bi-isotropic (magneto-electric) half-spaces.
//!
//! The crate is `no_std` and only needs `alloc`. Everything is expressed in
//! natural units: frequencies in units of a reference angular frequency
//! `ω_u` (usually the Lorentz resonance of the first plate) and lengths in
//! units of `c/ω_u`. See [`units`] for the conversions to SI.
//!
//! Module map:
//!
//! - [`dispersion`]: imaginary-frequency response of a plate (ε, μ, χ, κ).
//! - [`fresnel`]: 2×2 reflection matrices, closed form plus a boundary-value oracle.
//! - [`quadrature`]: tensor-product Gauss–Legendre on the quarter plane.
//! - [`lifshitz`]: energy and force integrals.
//! - [`asymptotics`]: small-coupling expansion of the key combination.
//! - [`analysis`]: phase diagrams, distance scans and the equilibrium distance.
#![no_std]
// `!(x > 0.0)` guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod asymptotics;
pub mod dispersion;
mod error;
pub mod fresnel;
pub mod lifshitz;
pub mod quadrature;
pub mod units;

pub use error::{Error, Result};
