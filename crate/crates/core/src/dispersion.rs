//! Material response at imaginary frequency `ξ = −iω`.
//!
//! All frequencies are dimensionless multiples of the reference frequency
//! of [`crate::units::NaturalUnits`].

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::{Error, Result};

/// Relative slack allowed on the passivity inequality.
pub const PASSIVITY_SLACK: f64 = 1e-12;

/// Single-resonance Lorentz permittivity.
///
/// At imaginary frequency `ε_r(iξ) = 1 + ω_p²/(ξ² + ω_R² + γ_R ξ)`, which is
/// real, at least one, and decreasing in `ξ` when `ω_p > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzOscillator {
    pub omega_p: f64,
    pub omega_r: f64,
    pub gamma_r: f64,
}

impl LorentzOscillator {
    pub fn new(omega_p: f64, omega_r: f64, gamma_r: f64) -> Result<Self> {
        if !(omega_p >= 0.0 && omega_p.is_finite()) {
            return Err(Error::InvalidParameter { name: "omega_p", value: omega_p });
        }
        if !(omega_r > 0.0 && omega_r.is_finite()) {
            return Err(Error::InvalidParameter { name: "omega_R", value: omega_r });
        }
        if !(gamma_r >= 0.0 && gamma_r.is_finite()) {
            return Err(Error::InvalidParameter { name: "gamma_R", value: gamma_r });
        }
        Ok(Self { omega_p, omega_r, gamma_r })
    }

    /// `ω_p = ω_R = 1`, `γ_R = 0.05` in units of `ω_R`.
    pub fn reference() -> Self {
        Self { omega_p: 1.0, omega_r: 1.0, gamma_r: 0.05 }
    }

    /// No polarisable matter: `ε_r ≡ 1`.
    pub fn vacuum() -> Self {
        Self { omega_p: 0.0, omega_r: 1.0, gamma_r: 0.0 }
    }

    pub fn at_imag_freq(&self, xi: f64) -> f64 {
        let den = xi * xi + self.omega_r * self.omega_r + self.gamma_r * xi;
        1.0 + self.omega_p * self.omega_p / den
    }

    /// Static value `1 + ω_p²/ω_R²`, the upper bound over `ξ ≥ 0`.
    pub fn static_value(&self) -> f64 {
        1.0 + (self.omega_p * self.omega_p) / (self.omega_r * self.omega_r)
    }
}

/// Chirality parameter κ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChiralityModel {
    /// Frequency independent; evaluates to `−i·κ₀` at imaginary frequency.
    Constant { kappa0: f64 },
    /// Condon model `κ(ω) = ω_κ ω/(ω² − ω_κR² + iγ_κ ω)`.
    Condon { omega_kappa: f64, omega_kappa_r: f64, gamma_kappa: f64 },
}

impl ChiralityModel {
    pub fn constant(kappa0: f64) -> Self {
        ChiralityModel::Constant { kappa0 }
    }

    /// Condon model parametrised by its peak magnitude on the imaginary axis,
    /// `κ_max = ω_κ/(2ω_κR + γ_κ)`.
    pub fn condon_from_peak(kappa_max: f64, omega_kappa_r: f64, gamma_kappa: f64) -> Result<Self> {
        if !(omega_kappa_r > 0.0 && omega_kappa_r.is_finite()) {
            return Err(Error::InvalidParameter { name: "omega_kappaR", value: omega_kappa_r });
        }
        if !(gamma_kappa >= 0.0 && gamma_kappa.is_finite()) {
            return Err(Error::InvalidParameter { name: "gamma_kappa", value: gamma_kappa });
        }
        if !kappa_max.is_finite() {
            return Err(Error::InvalidParameter { name: "kappa_max", value: kappa_max });
        }
        Ok(ChiralityModel::Condon {
            omega_kappa: kappa_max * (2.0 * omega_kappa_r + gamma_kappa),
            omega_kappa_r,
            gamma_kappa,
        })
    }

    /// Purely imaginary value of κ at `ω = iξ`.
    pub fn at_imag_freq(&self, xi: f64) -> Complex64 {
        match *self {
            ChiralityModel::Constant { kappa0 } => Complex64::new(0.0, -kappa0),
            ChiralityModel::Condon { omega_kappa, omega_kappa_r, gamma_kappa } => {
                let den = xi * xi + omega_kappa_r * omega_kappa_r + gamma_kappa * xi;
                Complex64::new(0.0, -omega_kappa * xi / den)
            }
        }
    }

    /// Supremum of `|κ(iξ)|` over `ξ ≥ 0`.
    pub fn peak_magnitude(&self) -> f64 {
        match *self {
            ChiralityModel::Constant { kappa0 } => kappa0.abs(),
            ChiralityModel::Condon { omega_kappa, omega_kappa_r, gamma_kappa } => {
                omega_kappa.abs() / (2.0 * omega_kappa_r + gamma_kappa)
            }
        }
    }

    /// `|κ(iξ)|` as `ξ → ∞`.
    pub fn high_frequency_magnitude(&self) -> f64 {
        match *self {
            ChiralityModel::Constant { kappa0 } => kappa0.abs(),
            ChiralityModel::Condon { .. } => 0.0,
        }
    }

    /// Model of the mirror image (κ → −κ).
    pub fn mirrored(&self) -> Self {
        match *self {
            ChiralityModel::Constant { kappa0 } => ChiralityModel::Constant { kappa0: -kappa0 },
            ChiralityModel::Condon { omega_kappa, omega_kappa_r, gamma_kappa } => {
                ChiralityModel::Condon { omega_kappa: -omega_kappa, omega_kappa_r, gamma_kappa }
            }
        }
    }
}

/// Tellegen (non-reciprocity) parameter χ. Only a frequency-independent
/// model is available.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonReciprocityModel {
    pub chi0: f64,
}

impl NonReciprocityModel {
    pub fn constant(chi0: f64) -> Self {
        Self { chi0 }
    }
}

/// One bi-isotropic plate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlateMaterial {
    pub permittivity: LorentzOscillator,
    pub mu_r: f64,
    pub chi: NonReciprocityModel,
    pub kappa: ChiralityModel,
}

/// Material response at a single imaginary frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResponseAt {
    pub xi: f64,
    pub eps_r: f64,
    pub mu_r: f64,
    pub chi: f64,
    pub kappa: Complex64,
}

impl ResponseAt {
    pub fn refractive_index(&self) -> f64 {
        libm::sqrt(self.mu_r * self.eps_r)
    }

    /// `χ² + |κ|² − n²`; non-positive for a passive response.
    pub fn passivity_excess(&self) -> f64 {
        self.chi * self.chi + self.kappa.norm_sqr() - self.mu_r * self.eps_r
    }

    pub fn is_passive(&self) -> bool {
        self.passivity_excess() <= PASSIVITY_SLACK * self.mu_r * self.eps_r
    }
}

impl PlateMaterial {
    pub fn new(
        permittivity: LorentzOscillator,
        mu_r: f64,
        chi: NonReciprocityModel,
        kappa: ChiralityModel,
    ) -> Result<Self> {
        if !(mu_r > 0.0 && mu_r.is_finite()) {
            return Err(Error::InvalidParameter { name: "mu_r", value: mu_r });
        }
        if !chi.chi0.is_finite() {
            return Err(Error::InvalidParameter { name: "chi", value: chi.chi0 });
        }
        if let ChiralityModel::Constant { kappa0 } = kappa {
            if !kappa0.is_finite() {
                return Err(Error::InvalidParameter { name: "kappa0", value: kappa0 });
            }
        }
        Ok(Self { permittivity, mu_r, chi, kappa })
    }

    /// Reference Lorentz plate (`ω_p = ω_R`, `γ_R = 0.05 ω_R`, `μ_r = 1`)
    /// with constant couplings.
    pub fn reference(chi: f64, kappa0: f64) -> Self {
        Self {
            permittivity: LorentzOscillator::reference(),
            mu_r: 1.0,
            chi: NonReciprocityModel::constant(chi),
            kappa: ChiralityModel::constant(kappa0),
        }
    }

    pub fn with_chi(mut self, chi: f64) -> Self {
        self.chi = NonReciprocityModel::constant(chi);
        self
    }

    pub fn with_kappa(mut self, kappa: ChiralityModel) -> Self {
        self.kappa = kappa;
        self
    }

    /// Plate with χ → −χ (the partner in the antisymmetric-χ configuration).
    pub fn with_reversed_chi(self) -> Self {
        let chi = -self.chi.chi0;
        self.with_chi(chi)
    }

    /// Parity image: κ → −κ, everything else unchanged.
    pub fn parity_image(self) -> Self {
        let kappa = self.kappa.mirrored();
        self.with_kappa(kappa)
    }

    pub fn permittivity_at_imag_freq(&self, xi: f64) -> f64 {
        self.permittivity.at_imag_freq(xi)
    }

    pub fn chirality_at_imag_freq(&self, xi: f64) -> Complex64 {
        self.kappa.at_imag_freq(xi)
    }

    pub fn response_at(&self, xi: f64) -> ResponseAt {
        ResponseAt {
            xi,
            eps_r: self.permittivity_at_imag_freq(xi),
            mu_r: self.mu_r,
            chi: self.chi.chi0,
            kappa: self.chirality_at_imag_freq(xi),
        }
    }

    /// Check `χ² + |κ(iξ)|² ≤ μ_r ε_r(iξ)` on every grid point.
    pub fn validate_passivity(&self, xi_grid: &[f64]) -> PassivityReport {
        let violations = xi_grid
            .iter()
            .map(|&xi| self.response_at(xi))
            .filter(|r| !r.is_passive())
            .map(|r| PassivityViolation { xi: r.xi, excess: r.passivity_excess() })
            .collect();
        PassivityReport { violations }
    }

    /// Passivity on a fixed probe grid covering `ξ ∈ {0} ∪ [1e-4, 1e4]` plus
    /// the `ξ → ∞` limit. Independent of any plate separation.
    pub fn validate_passivity_everywhere(&self) -> PassivityReport {
        let mut report = self.validate_passivity(&passivity_probe_grid());
        let kappa_inf = self.kappa.high_frequency_magnitude();
        let chi = self.chi.chi0;
        let excess = chi * chi + kappa_inf * kappa_inf - self.mu_r;
        if excess > PASSIVITY_SLACK * self.mu_r {
            report.violations.push(PassivityViolation { xi: f64::INFINITY, excess });
        }
        report
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PassivityViolation {
    pub xi: f64,
    pub excess: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PassivityReport {
    pub violations: Vec<PassivityViolation>,
}

impl PassivityReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn first(&self) -> Option<&PassivityViolation> {
        self.violations.first()
    }
}

/// `ξ = 0` followed by 161 log-spaced points on `[1e-4, 1e4]`.
pub fn passivity_probe_grid() -> Vec<f64> {
    let mut grid = Vec::with_capacity(162);
    grid.push(0.0);
    grid.extend((0..=160).map(|i| libm::pow(10.0, -4.0 + 8.0 * i as f64 / 160.0)));
    grid
}
