//! Material description files.
//!
//! A material file is TOML with flat keys:
//!
//! ```toml
//! omega_R_hz = 1e15
//! omega_p_over_omega_R = 1.0
//! gamma_R_over_omega_R = 0.05
//! mu_r = 1.0
//! chi = 0.5
//! kappa_model = "constant"   # or "condon"
//! kappa0 = 0.5
//! # condon only:
//! # omega_kappaR_hz = 1e15
//! # gamma_kappa_over_omega_kappaR = 0.1
//! # kappa_max = 0.5
//! ```
//!
//! Frequencies labelled `_hz` are read as angular frequencies (rad/s).

use std::fs;
use std::path::{Path, PathBuf};

use casimir_core::dispersion::{ChiralityModel, LorentzOscillator, NonReciprocityModel, PlateMaterial};
use casimir_core::units::NaturalUnits;
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum KappaModel {
    #[default]
    Constant,
    Condon,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(non_snake_case)]
pub struct MaterialConfig {
    pub omega_R_hz: f64,
    pub omega_p_over_omega_R: f64,
    pub gamma_R_over_omega_R: f64,
    #[serde(default = "one")]
    pub mu_r: f64,
    #[serde(default)]
    pub chi: f64,
    #[serde(default)]
    pub kappa_model: KappaModel,
    pub kappa0: Option<f64>,
    pub omega_kappaR_hz: Option<f64>,
    pub gamma_kappa_over_omega_kappaR: Option<f64>,
    pub kappa_max: Option<f64>,
}

fn one() -> f64 {
    1.0
}

impl MaterialConfig {
    /// Lorentz plate with `ω_p = ω_R`, `γ_R = 0.05ω_R`, `ω_R = 10¹⁵ s⁻¹`.
    pub fn reference(chi: f64, kappa0: f64) -> Self {
        Self {
            omega_R_hz: 1e15,
            omega_p_over_omega_R: 1.0,
            gamma_R_over_omega_R: 0.05,
            mu_r: 1.0,
            chi,
            kappa_model: KappaModel::Constant,
            kappa0: Some(kappa0),
            omega_kappaR_hz: None,
            gamma_kappa_over_omega_kappaR: None,
            kappa_max: None,
        }
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| e.message().to_string())
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config { path: path.to_path_buf(), message: e.to_string() })?;
        Self::parse(&text).map_err(|message| CliError::Config { path: path.to_path_buf(), message })
    }

    /// Natural units anchored on this material's resonance.
    pub fn units(&self) -> NaturalUnits {
        NaturalUnits::new(self.omega_R_hz)
    }

    /// Material in the natural units `units`, rejecting plates that break the
    /// passivity bound anywhere on the imaginary axis.
    pub fn to_material(&self, units: &NaturalUnits) -> Result<PlateMaterial, String> {
        let positive = |key: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(v)
            } else {
                Err(format!("`{key}` must be positive, got {v}"))
            }
        };
        let non_negative = |key: &str, v: f64| {
            if v >= 0.0 && v.is_finite() {
                Ok(v)
            } else {
                Err(format!("`{key}` must be non-negative, got {v}"))
            }
        };
        let wr = positive("omega_R_hz", self.omega_R_hz)? / units.omega;
        let wp = non_negative("omega_p_over_omega_R", self.omega_p_over_omega_R)? * wr;
        let gr = non_negative("gamma_R_over_omega_R", self.gamma_R_over_omega_R)? * wr;
        positive("mu_r", self.mu_r)?;
        if !self.chi.is_finite() {
            return Err(format!("`chi` must be finite, got {}", self.chi));
        }
        let kappa = match self.kappa_model {
            KappaModel::Constant => {
                let k = self.kappa0.ok_or("`kappa_model = \"constant\"` needs `kappa0`")?;
                if self.kappa_max.is_some() || self.omega_kappaR_hz.is_some() {
                    return Err("Condon keys given with `kappa_model = \"constant\"`".into());
                }
                ChiralityModel::constant(k)
            }
            KappaModel::Condon => {
                let wk = self.omega_kappaR_hz.ok_or("`kappa_model = \"condon\"` needs `omega_kappaR_hz`")?;
                let gk = self
                    .gamma_kappa_over_omega_kappaR
                    .ok_or("`kappa_model = \"condon\"` needs `gamma_kappa_over_omega_kappaR`")?;
                let km = self.kappa_max.ok_or("`kappa_model = \"condon\"` needs `kappa_max`")?;
                let wk = positive("omega_kappaR_hz", wk)? / units.omega;
                ChiralityModel::condon_from_peak(km, wk, non_negative("gamma_kappa_over_omega_kappaR", gk)? * wk)
                    .map_err(|e| e.to_string())?
            }
        };
        let material = PlateMaterial::new(
            LorentzOscillator::new(wp, wr, gr).map_err(|e| e.to_string())?,
            self.mu_r,
            NonReciprocityModel::constant(self.chi),
            kappa,
        )
        .map_err(|e| e.to_string())?;
        let report = material.validate_passivity_everywhere();
        if let Some(v) = report.first() {
            let at = if v.xi.is_infinite() {
                "xi -> infinity".to_string()
            } else {
                format!("xi = {:.4e} rad/s", v.xi * units.omega)
            };
            return Err(format!(
                "passivity bound chi^2 + |kappa|^2 <= mu_r eps_r fails at {at} (excess {:.3e}); reduce `chi` or `kappa`",
                v.excess
            ));
        }
        Ok(material)
    }
}

/// A loaded plate together with where it came from, for messages.
#[derive(Debug, Clone)]
pub struct LoadedMaterial {
    pub source: Option<PathBuf>,
    pub config: MaterialConfig,
}

impl LoadedMaterial {
    pub fn from_path(path: Option<&Path>) -> Result<Self, CliError> {
        match path {
            Some(p) => Ok(Self { source: Some(p.to_path_buf()), config: MaterialConfig::load(p)? }),
            None => Ok(Self { source: None, config: MaterialConfig::reference(0.0, 0.0) }),
        }
    }

    pub fn material(&self, units: &NaturalUnits) -> Result<PlateMaterial, CliError> {
        self.config.to_material(units).map_err(|message| match &self.source {
            Some(path) => CliError::Config { path: path.clone(), message },
            None => CliError::Precondition(message),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn parses_constant_model() {
        let c = MaterialConfig::parse(
            "omega_R_hz = 1e15\nomega_p_over_omega_R = 1.0\ngamma_R_over_omega_R = 0.05\nchi = 0.5\nkappa_model = \"constant\"\nkappa0 = 0.5\n",
        )
        .unwrap();
        assert_eq!(c, MaterialConfig::reference(0.5, 0.5));
        let m = c.to_material(&c.units()).unwrap();
        assert_eq!(m, PlateMaterial::reference(0.5, 0.5));
    }

    #[test]
    fn parses_condon_model() {
        let c = MaterialConfig::parse(
            "omega_R_hz = 1e15\nomega_p_over_omega_R = 1.0\ngamma_R_over_omega_R = 0.05\nchi = 0.3\n\
             kappa_model = \"condon\"\nomega_kappaR_hz = 2e15\ngamma_kappa_over_omega_kappaR = 0.1\nkappa_max = 0.4\n",
        )
        .unwrap();
        let m = c.to_material(&c.units()).unwrap();
        assert_relative_eq!(m.kappa.peak_magnitude(), 0.4, max_relative = 1e-14);
        assert_relative_eq!(m.chirality_at_imag_freq(2.0).im, -0.4, max_relative = 1e-14);
    }

    #[test]
    fn unknown_key_is_named() {
        let err =
            MaterialConfig::parse("omega_R_hz = 1e15\nomega_p_over_omega_R = 1\ngamma_R_over_omega_R = 0\nkapa0 = 1\n")
                .unwrap_err();
        assert!(err.contains("kapa0"), "{err}");
    }

    #[test]
    fn missing_kappa0_is_named() {
        let c = MaterialConfig { kappa0: None, ..MaterialConfig::reference(0.0, 0.0) };
        assert!(c.to_material(&c.units()).unwrap_err().contains("kappa0"));
    }

    #[test]
    fn passivity_violation_names_frequency() {
        let c = MaterialConfig::reference(1.0, 0.9);
        let err = c.to_material(&c.units()).unwrap_err();
        assert!(err.contains("passivity") && err.contains("xi"), "{err}");
    }

    #[test]
    fn second_plate_uses_first_plate_units() {
        let c = MaterialConfig { omega_R_hz: 2e15, ..MaterialConfig::reference(0.0, 0.0) };
        let m = c.to_material(&NaturalUnits::new(1e15)).unwrap();
        assert_eq!(m.permittivity.omega_r, 2.0);
        assert_eq!(m.permittivity.omega_p, 2.0);
    }
}
