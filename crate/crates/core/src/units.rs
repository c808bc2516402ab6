//! Physical constants and the natural unit system.
//!
//! Frequencies are measured in a reference angular frequency `ω_u` and
//! lengths in `c/ω_u`. Energies per area come out in `ħω_u³/c²` and
//! pressures in `ħω_u⁴/c³`.

use core::f64::consts::PI;

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Vacuum impedance, Ω. Impedances inside the crate are relative to this.
pub const VACUUM_IMPEDANCE: f64 = 376.730_313_668;

/// `π⁴/60`: magnitude of the rescaled force integral for ideal mirrors.
pub const IDEAL_FORCE_INTEGRAL: f64 = PI * PI * PI * PI / 60.0;
/// `π⁴/180`: magnitude of the rescaled energy integral for ideal mirrors.
pub const IDEAL_ENERGY_INTEGRAL: f64 = PI * PI * PI * PI / 180.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NaturalUnits {
    /// Reference angular frequency in rad/s.
    pub omega: f64,
}

impl NaturalUnits {
    pub fn new(omega: f64) -> Self {
        Self { omega }
    }

    /// `c/ω_u` in meters.
    pub fn length(&self) -> f64 {
        SPEED_OF_LIGHT / self.omega
    }

    pub fn distance_from_meters(&self, meters: f64) -> f64 {
        meters / self.length()
    }

    pub fn distance_to_meters(&self, d: f64) -> f64 {
        d * self.length()
    }

    /// Pressure unit `ħω_u⁴/c³` in pascal.
    pub fn pressure(&self) -> f64 {
        let l = self.length();
        HBAR * SPEED_OF_LIGHT / (l * l * l * l)
    }

    /// Energy-per-area unit `ħω_u³/c²` in J/m².
    pub fn energy_per_area(&self) -> f64 {
        let l = self.length();
        HBAR * SPEED_OF_LIGHT / (l * l * l)
    }
}

/// Magnitude of the ideal-mirror pressure `π²ħc/(240 d⁴)` with `d` in natural units.
pub fn ideal_pressure(d: f64) -> f64 {
    PI * PI / (240.0 * d * d * d * d)
}

/// Magnitude of the ideal-mirror pressure in pascal, `d` in meters.
pub fn ideal_pressure_si(d_meters: f64) -> f64 {
    let d2 = d_meters * d_meters;
    PI * PI * HBAR * SPEED_OF_LIGHT / (240.0 * d2 * d2)
}
