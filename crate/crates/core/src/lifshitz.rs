//! Lifshitz energy and force between two plates.
//!
//! In rescaled variables `ξ̃ = ξd`, `k̃ = k∥d`, `K̃ = √(ξ̃² + k̃²)` (natural
//! units, `ħ = c = 1`):
//!
//! ```text
//! E/A = 1/(4π²d³) ∫∫ dξ̃ dk̃  k̃ ln[1 − T e^{−2K̃} + D e^{−4K̃}]
//! F/A = 1/(4π²d⁴) ∫∫ dξ̃ dk̃  k̃ K̃ (−2T e^{−2K̃} + 4D e^{−4K̃}) / (1 − T e^{−2K̃} + D e^{−4K̃})
//! ```
//!
//! with `T = tr(R₁R₂)` and `D = det R₁ · det R₂`. A positive force is
//! repulsive. Forces are normalised by the ideal-mirror magnitude
//! `F₀ = π²/(240d⁴)`.

use core::f64::consts::PI;

use crate::dispersion::{ChiralityModel, PlateMaterial};
use crate::fresnel::{ReflectionMatrix, Reflector, TransverseMode};
use crate::quadrature::{integrate_semi_infinite_2d, QuadratureSpec};
use crate::units::{ideal_pressure, IDEAL_FORCE_INTEGRAL};
use crate::{Error, Result};

/// Width of the error band, in estimated standard errors, inside which the
/// sign of a force is not reported.
pub const SIGN_BAND: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrandParts {
    /// `r¹ss r²ss + r¹sp r²ps + r¹ps r²sp + r¹pp r²pp`.
    pub trace_term: f64,
    /// `det R₁ · det R₂`.
    pub det_term: f64,
    pub numerator: f64,
    pub denominator: f64,
}

impl IntegrandParts {
    /// `numerator / denominator`; multiply by `k̃K̃` for the force integrand.
    pub fn force_kernel(&self) -> f64 {
        self.numerator / self.denominator
    }

    /// `ln det(1 − R₁R₂e^{−2K̃})`.
    pub fn log_det(&self) -> f64 {
        libm::log(self.denominator)
    }
}

pub fn integrand_parts(r1: &ReflectionMatrix, r2: &ReflectionMatrix, k_total: f64) -> Result<IntegrandParts> {
    let (trace_term, det_term) = trace_and_det(r1, r2);
    parts_from(trace_term, det_term, k_total)
}

fn trace_and_det(r1: &ReflectionMatrix, r2: &ReflectionMatrix) -> (f64, f64) {
    let trace = r1.r_ss * r2.r_ss + r1.r_sp * r2.r_ps + r1.r_ps * r2.r_sp + r1.r_pp * r2.r_pp;
    (trace, r1.det() * r2.det())
}

fn parts_from(trace_term: f64, det_term: f64, k_total: f64) -> Result<IntegrandParts> {
    let e2 = libm::exp(-2.0 * k_total);
    let e4 = e2 * e2;
    let numerator = -2.0 * trace_term * e2 + 4.0 * det_term * e4;
    let denominator = 1.0 - trace_term * e2 + det_term * e4;
    if !(denominator > 0.0) {
        return Err(Error::NonPositiveDenominator { value: denominator, k_total });
    }
    Ok(IntegrandParts { trace_term, det_term, numerator, denominator })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ForceSign {
    Attractive,
    Repulsive,
    Indeterminate,
}

impl ForceSign {
    /// Classify `ratio` given its absolute error estimate.
    pub fn classify(ratio: f64, error: f64) -> Self {
        if ratio == 0.0 || ratio.abs() < SIGN_BAND * error {
            ForceSign::Indeterminate
        } else if ratio > 0.0 {
            ForceSign::Repulsive
        } else {
            ForceSign::Attractive
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            ForceSign::Attractive => "attractive",
            ForceSign::Repulsive => "repulsive",
            ForceSign::Indeterminate => "indeterminate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForceResult {
    pub distance: f64,
    /// Pressure in natural units; positive is repulsive.
    pub force_per_area: f64,
    /// `F/F₀`.
    pub ratio: f64,
    /// Absolute error estimate on `ratio`.
    pub quad_error: f64,
    pub sign: ForceSign,
    pub converged: bool,
}

impl ForceResult {
    fn from_integral(distance: f64, integral: f64, error: f64, converged: bool) -> Self {
        let ratio = integral / IDEAL_FORCE_INTEGRAL;
        let quad_error = error / IDEAL_FORCE_INTEGRAL;
        Self {
            distance,
            force_per_area: ratio * ideal_pressure(distance),
            ratio,
            quad_error,
            sign: ForceSign::classify(ratio, quad_error),
            converged,
        }
    }

    /// Error estimate relative to `|F|`.
    pub fn relative_error(&self) -> f64 {
        self.quad_error / self.ratio.abs()
    }

    fn require_converged(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NotConverged { value: self.ratio, error_estimate: self.quad_error })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyResult {
    pub distance: f64,
    /// Energy per area in natural units.
    pub energy_per_area: f64,
    /// Absolute error estimate on `energy_per_area`.
    pub error: f64,
    pub converged: bool,
}

impl EnergyResult {
    /// `E/|E₀|` with `E₀ = −π²/(720d³)` the ideal-mirror energy.
    pub fn ratio(&self) -> f64 {
        self.energy_per_area / ideal_energy(self.distance).abs()
    }
}

/// `−π²/(720d³)`.
pub fn ideal_energy(d: f64) -> f64 {
    -PI * PI / (720.0 * d * d * d)
}

fn check_distance(d: f64) -> Result<()> {
    if d > 0.0 && d.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name: "distance", value: d })
    }
}

fn force_integral<F>(mut trace_and_det: F, d: f64, spec: &QuadratureSpec) -> Result<ForceResult>
where
    F: FnMut(&TransverseMode) -> Result<(f64, f64)>,
{
    check_distance(d)?;
    let q = integrate_semi_infinite_2d(
        |x, y| {
            let mode = TransverseMode::new(x, y, d)?;
            let (t, det) = trace_and_det(&mode)?;
            let k = mode.k_total();
            Ok(y * k * parts_from(t, det, k)?.force_kernel())
        },
        spec,
    )?;
    Ok(ForceResult::from_integral(d, q.value, q.error_estimate, q.converged))
}

/// General two-plate force; non-convergence is reported through
/// [`ForceResult::converged`] rather than as an error.
pub fn evaluate_force<A: Reflector, B: Reflector>(
    plate1: &A,
    plate2: &B,
    d: f64,
    spec: &QuadratureSpec,
) -> Result<ForceResult> {
    force_integral(|mode| Ok(trace_and_det(&plate1.reflection(mode)?, &plate2.reflection(mode)?)), d, spec)
}

/// General two-plate force; fails with [`Error::NotConverged`] if the
/// quadrature misses its tolerance.
pub fn casimir_force<A: Reflector, B: Reflector>(
    plate1: &A,
    plate2: &B,
    d: f64,
    spec: &QuadratureSpec,
) -> Result<ForceResult> {
    evaluate_force(plate1, plate2, d, spec)?.require_converged()
}

/// Force between `plate` and its χ-reversed partner, using
/// `T = r_ss² + r_pp² − r_ps² − r_sp²` and `D = (det R)²` of one plate.
pub fn evaluate_force_symmetric_plate(plate: &PlateMaterial, d: f64, spec: &QuadratureSpec) -> Result<ForceResult> {
    force_integral(
        |mode| {
            let r = plate.reflection(mode)?;
            let det = r.det();
            Ok((r.key_combination(), det * det))
        },
        d,
        spec,
    )
}

/// `χ₁ = −χ₂ = chi`, `κ₁ = κ₂ = kappa0` (constant), other parameters from
/// `base`.
pub fn force_symmetric(
    base: &PlateMaterial,
    chi: f64,
    kappa0: f64,
    d: f64,
    spec: &QuadratureSpec,
) -> Result<ForceResult> {
    let plate = base.with_chi(chi).with_kappa(ChiralityModel::constant(kappa0));
    evaluate_force_symmetric_plate(&plate, d, spec)?.require_converged()
}

/// The plate pair that [`force_symmetric`] describes.
pub fn symmetric_pair(base: &PlateMaterial, chi: f64, kappa0: f64) -> (PlateMaterial, PlateMaterial) {
    let plate = base.with_chi(chi).with_kappa(ChiralityModel::constant(kappa0));
    (plate, plate.with_reversed_chi())
}

pub fn casimir_energy_per_area<A: Reflector, B: Reflector>(
    plate1: &A,
    plate2: &B,
    d: f64,
    spec: &QuadratureSpec,
) -> Result<EnergyResult> {
    let result = evaluate_energy(plate1, plate2, d, spec)?;
    if result.converged {
        Ok(result)
    } else {
        Err(Error::NotConverged { value: result.energy_per_area, error_estimate: result.error })
    }
}

fn evaluate_energy<A: Reflector, B: Reflector>(
    plate1: &A,
    plate2: &B,
    d: f64,
    spec: &QuadratureSpec,
) -> Result<EnergyResult> {
    check_distance(d)?;
    let q = integrate_semi_infinite_2d(
        |x, y| {
            let mode = TransverseMode::new(x, y, d)?;
            let parts = integrand_parts(&plate1.reflection(&mode)?, &plate2.reflection(&mode)?, mode.k_total())?;
            Ok(y * parts.log_det())
        },
        spec,
    )?;
    let scale = 1.0 / (4.0 * PI * PI * d * d * d);
    Ok(EnergyResult {
        distance: d,
        energy_per_area: scale * q.value,
        error: scale * q.error_estimate,
        converged: q.converged,
    })
}

/// `−[E(d(1+h)) − E(d(1−h))]/(2dh)` as a [`ForceResult`]; the error field
/// carries the propagated energy quadrature errors.
pub fn force_via_energy_derivative<A: Reflector, B: Reflector>(
    plate1: &A,
    plate2: &B,
    d: f64,
    h: f64,
    spec: &QuadratureSpec,
) -> Result<ForceResult> {
    if !(1e-4..=1e-2).contains(&h) {
        return Err(Error::InvalidParameter { name: "h", value: h });
    }
    check_distance(d)?;
    let hi = evaluate_energy(plate1, plate2, d * (1.0 + h), spec)?;
    let lo = evaluate_energy(plate1, plate2, d * (1.0 - h), spec)?;
    let step = 2.0 * d * h;
    let force = -(hi.energy_per_area - lo.energy_per_area) / step;
    let f0 = ideal_pressure(d);
    let ratio = force / f0;
    let quad_error = (hi.error + lo.error) / step / f0;
    Ok(ForceResult {
        distance: d,
        force_per_area: force,
        ratio,
        quad_error,
        sign: ForceSign::classify(ratio, quad_error),
        converged: hi.converged && lo.converged,
    })
}
