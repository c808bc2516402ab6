//! Reflection of a bi-isotropic half-space at imaginary frequency.
//!
//! The medium supports two circularly polarised eigenwaves with refractive
//! indices `n_± = √(n² − χ²) ± κ(iξ)`. With `κ(iξ)` purely imaginary the pair
//! is complex conjugate, so the refraction cosines `c_±` are conjugate too
//! and the four assembled coefficients come out real.
//!
//! [`reflection_matrix`] evaluates the closed form; [`reflection_matrix_oracle`]
//! solves the 4×4 tangential-field matching problem numerically and is kept
//! as an independent check.

mod oracle;

use num_complex::Complex64;

use crate::dispersion::{PlateMaterial, ResponseAt, PASSIVITY_SLACK};
use crate::{Error, Result};

pub use oracle::reflection_matrix_oracle;

/// Tolerance on the imaginary residue of an assembled coefficient,
/// relative to `1 + |Re|`.
pub const REALNESS_TOLERANCE: f64 = 1e-10;

/// Rescaled integration point `(ξ̃, k̃∥) = (ξd/c, k∥d)` at plate separation
/// `d` (natural units).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransverseMode {
    pub xi_tilde: f64,
    pub k_tilde: f64,
    pub distance: f64,
}

impl TransverseMode {
    pub fn new(xi_tilde: f64, k_tilde: f64, distance: f64) -> Result<Self> {
        if !(xi_tilde > 0.0 && xi_tilde.is_finite()) {
            return Err(Error::InvalidParameter { name: "xi_tilde", value: xi_tilde });
        }
        if !(k_tilde >= 0.0 && k_tilde.is_finite()) {
            return Err(Error::InvalidParameter { name: "k_tilde", value: k_tilde });
        }
        if !(distance > 0.0 && distance.is_finite()) {
            return Err(Error::InvalidParameter { name: "distance", value: distance });
        }
        Ok(Self { xi_tilde, k_tilde, distance })
    }

    /// `K̃ = √(ξ̃² + k̃∥²)`.
    pub fn k_total(&self) -> f64 {
        libm::hypot(self.xi_tilde, self.k_tilde)
    }

    /// Unscaled imaginary frequency `ξ` in natural units.
    pub fn xi(&self) -> f64 {
        self.xi_tilde / self.distance
    }

    /// Unscaled `k∥` in natural units.
    pub fn k_parallel(&self) -> f64 {
        self.k_tilde / self.distance
    }

    /// `k̃∥/ξ̃`.
    pub fn ratio(&self) -> f64 {
        self.k_tilde / self.xi_tilde
    }
}

/// Eigenwave indices `k_±/(ξ√(μ₀ε₀)) = √(μ_r ε_r − χ²) ± κ(iξ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveNumbers {
    pub k_plus: Complex64,
    pub k_minus: Complex64,
    pub n: f64,
}

impl WaveNumbers {
    pub fn at(response: &ResponseAt) -> Result<Self> {
        let n = response.refractive_index();
        let s2 = n * n - response.chi * response.chi;
        if s2 < -PASSIVITY_SLACK * n * n {
            return Err(Error::BranchDomain { chi: response.chi, n });
        }
        let s = Complex64::new(libm::sqrt(s2.max(0.0)), 0.0);
        Ok(Self { k_plus: s + response.kappa, k_minus: s - response.kappa, n })
    }
}

/// Vacuum and refraction cosines after the Wick rotation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefractionGeometry {
    /// `c₀ = K̃/ξ̃ ≥ 1`.
    pub c0: f64,
    pub c_plus: Complex64,
    pub c_minus: Complex64,
}

impl RefractionGeometry {
    pub fn new(mode: &TransverseMode, waves: &WaveNumbers) -> Self {
        let a = mode.ratio();
        let cos = |index: Complex64| (Complex64::new(1.0, 0.0) + a * a / (index * index)).sqrt();
        Self { c0: mode.k_total() / mode.xi_tilde, c_plus: cos(waves.k_plus), c_minus: cos(waves.k_minus) }
    }
}

/// Wave impedances relative to the vacuum impedance `η₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Impedances {
    pub eta0: f64,
    pub eta: f64,
    pub eta_plus: Complex64,
    pub eta_minus: Complex64,
    /// `√(1 − (χ/n)²)`.
    pub root: f64,
    /// `χ/n`.
    pub chi_over_n: f64,
}

impl Impedances {
    pub fn at(response: &ResponseAt) -> Result<Self> {
        let n = response.refractive_index();
        let chi_over_n = response.chi / n;
        let arg = 1.0 - chi_over_n * chi_over_n;
        if arg < -PASSIVITY_SLACK {
            return Err(Error::BranchDomain { chi: response.chi, n });
        }
        let root = libm::sqrt(arg.max(0.0));
        let eta = libm::sqrt(response.mu_r / response.eps_r);
        Ok(Self {
            eta0: 1.0,
            eta,
            eta_plus: Complex64::new(eta * root, -eta * chi_over_n),
            eta_minus: Complex64::new(eta * root, eta * chi_over_n),
            root,
            chi_over_n,
        })
    }
}

/// `(η₀, η, η₊, η₋)` of `material` at imaginary frequency `xi`.
pub fn impedances(material: &PlateMaterial, xi: f64) -> Result<Impedances> {
    let response = material.response_at(xi);
    check_passive(&response)?;
    Impedances::at(&response)
}

/// 2×2 reflection matrix in the (TE = s, TM = p) basis.
///
/// `r_sp` converts TM into TE, `r_ps` converts TE into TM.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ReflectionMatrix {
    pub r_ss: f64,
    pub r_pp: f64,
    pub r_sp: f64,
    pub r_ps: f64,
}

impl ReflectionMatrix {
    pub const ZERO: Self = Self { r_ss: 0.0, r_pp: 0.0, r_sp: 0.0, r_ps: 0.0 };

    /// Ideal mirror at imaginary frequency.
    pub const PERFECT_CONDUCTOR: Self = Self { r_ss: -1.0, r_pp: 1.0, r_sp: 0.0, r_ps: 0.0 };

    pub fn det(&self) -> f64 {
        self.r_ss * self.r_pp - self.r_sp * self.r_ps
    }

    /// `r_ss² + r_pp² − r_ps² − r_sp²`.
    pub fn key_combination(&self) -> f64 {
        self.r_ss * self.r_ss + self.r_pp * self.r_pp - self.r_ps * self.r_ps - self.r_sp * self.r_sp
    }

    pub fn max_abs(&self) -> f64 {
        self.r_ss.abs().max(self.r_pp.abs()).max(self.r_sp.abs()).max(self.r_ps.abs())
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.r_ss - other.r_ss)
            .abs()
            .max((self.r_pp - other.r_pp).abs())
            .max((self.r_sp - other.r_sp).abs())
            .max((self.r_ps - other.r_ps).abs())
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.r_ss, self.r_pp, self.r_sp, self.r_ps]
    }
}

/// Anything that reflects: a bi-isotropic plate, an ideal mirror.
pub trait Reflector {
    fn reflection(&self, mode: &TransverseMode) -> Result<ReflectionMatrix>;
}

impl Reflector for PlateMaterial {
    fn reflection(&self, mode: &TransverseMode) -> Result<ReflectionMatrix> {
        reflection_matrix(self, mode)
    }
}

impl<R: Reflector + ?Sized> Reflector for &R {
    fn reflection(&self, mode: &TransverseMode) -> Result<ReflectionMatrix> {
        (**self).reflection(mode)
    }
}

/// Ideal conductor, `R = diag(−1, 1)` at every mode.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PerfectConductor;

impl Reflector for PerfectConductor {
    fn reflection(&self, _mode: &TransverseMode) -> Result<ReflectionMatrix> {
        Ok(ReflectionMatrix::PERFECT_CONDUCTOR)
    }
}

pub(crate) fn check_passive(response: &ResponseAt) -> Result<()> {
    if response.is_passive() {
        Ok(())
    } else {
        Err(Error::PassivityViolation { xi: response.xi, excess: response.passivity_excess() })
    }
}

pub(crate) fn real_part(coefficient: &'static str, z: Complex64) -> Result<f64> {
    if z.im.abs() < REALNESS_TOLERANCE * (1.0 + z.re.abs()) {
        Ok(z.re)
    } else {
        Err(Error::BranchSelection { coefficient, imag: z.im })
    }
}

/// Closed-form reflection matrix of `material` at `mode`.
///
/// All cosines are carried multiplied by `ξ̃` (`C₀ = K̃`,
/// `C_± = √(ξ̃² + k̃∥²/n_±²)`). Every coefficient is a ratio of quadratic
/// forms in the cosines, so the factor cancels and grazing modes with
/// `ξ̃ ≪ k̃∥` stay well scaled.
pub fn reflection_matrix(material: &PlateMaterial, mode: &TransverseMode) -> Result<ReflectionMatrix> {
    let response = material.response_at(mode.xi());
    check_passive(&response)?;
    let imp = Impedances::at(&response)?;
    let waves = WaveNumbers::at(&response)?;

    let xi2 = Complex64::new(mode.xi_tilde * mode.xi_tilde, 0.0);
    let k2 = mode.k_tilde * mode.k_tilde;
    let c0 = mode.k_total();
    let cp = (xi2 + k2 / (waves.k_plus * waves.k_plus)).sqrt();
    let cm = (xi2 + k2 / (waves.k_minus * waves.k_minus)).sqrt();

    let eta = imp.eta;
    let sum = cp + cm;
    let prod = cp * cm;
    let diff = cp - cm;
    let i = Complex64::new(0.0, 1.0);

    let delta = (eta * eta + 1.0) * c0 * sum + 2.0 * eta * (c0 * c0 + prod) * imp.root;
    if !(delta.norm() > 1e-14 * c0 * c0) {
        return Err(Error::DegenerateMode { xi_tilde: mode.xi_tilde, k_tilde: mode.k_tilde });
    }

    let diag_a = (eta * eta - 1.0) * c0 * sum;
    let diag_b = 2.0 * eta * (c0 * c0 - prod) * imp.root;
    let off = 2.0 * eta * c0 / delta;

    Ok(ReflectionMatrix {
        r_ss: real_part("r_ss", (diag_a + diag_b) / delta)?,
        r_pp: real_part("r_pp", -(diag_a - diag_b) / delta)?,
        r_sp: real_part("r_sp", off * (i * diff * imp.root - sum * imp.chi_over_n))?,
        r_ps: real_part("r_ps", -off * (i * diff * imp.root + sum * imp.chi_over_n))?,
    })
}

/// Matrix of the partner plate with χ → −χ (same ε, μ, κ): diagonals
/// unchanged, `r_sp ↦ −r_ps`, `r_ps ↦ −r_sp`.
pub fn mirror_plate_matrix(matrix: &ReflectionMatrix) -> ReflectionMatrix {
    ReflectionMatrix { r_ss: matrix.r_ss, r_pp: matrix.r_pp, r_sp: -matrix.r_ps, r_ps: -matrix.r_sp }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dispersion::{ChiralityModel, LorentzOscillator, NonReciprocityModel};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    /// Plate with `ε_r(iξ) = eps` at every frequency (ω_R huge, ω_p scaled).
    pub(crate) fn flat_plate(eps: f64, chi: f64, kappa0: f64) -> PlateMaterial {
        let wr = 1e9;
        PlateMaterial {
            permittivity: LorentzOscillator { omega_p: wr * libm::sqrt(eps - 1.0), omega_r: wr, gamma_r: 0.0 },
            mu_r: 1.0,
            chi: NonReciprocityModel::constant(chi),
            kappa: ChiralityModel::constant(kappa0),
        }
    }

    fn mode(xi: f64, k: f64) -> TransverseMode {
        TransverseMode::new(xi, k, 1.0).unwrap()
    }

    #[test]
    fn mode_domain() {
        assert!(TransverseMode::new(0.0, 1.0, 1.0).is_err());
        assert!(TransverseMode::new(1.0, -1.0, 1.0).is_err());
        assert!(TransverseMode::new(1.0, 1.0, 0.0).is_err());
        let m = mode(3.0, 4.0);
        assert_eq!(m.k_total(), 5.0);
    }

    #[test]
    fn impedances_without_chi_are_equal() {
        let m = flat_plate(2.0, 0.0, 0.3);
        let imp = impedances(&m, 0.5).unwrap();
        assert_eq!(imp.eta_plus, imp.eta_minus);
        assert_relative_eq!(imp.eta_plus.re, imp.eta, max_relative = 1e-15);
    }

    #[test]
    fn impedances_at_eps_two_chi_half() {
        let m = flat_plate(2.0, 0.5, 0.0);
        let imp = impedances(&m, 0.5).unwrap();
        let scale = 1.0 / libm::sqrt(2.0);
        assert_relative_eq!(imp.eta_plus.re, scale * libm::sqrt(1.0 - 0.125), max_relative = 1e-10);
        assert_relative_eq!(imp.eta_plus.im, -scale * 0.353_553_390_593_273_8, max_relative = 1e-10);
        assert_relative_eq!(imp.eta_minus.im, scale * 0.353_553_390_593_273_8, max_relative = 1e-10);
    }

    #[test]
    fn impedance_branch_domain() {
        let response = ResponseAt { xi: 1.0, eps_r: 1.0, mu_r: 1.0, chi: 1.2, kappa: Complex64::new(0.0, 0.0) };
        assert!(matches!(Impedances::at(&response), Err(Error::BranchDomain { .. })));
    }

    #[test]
    fn reduces_to_fresnel_without_couplings() {
        for eps in [1.3, 2.0, 7.5] {
            let plate = flat_plate(eps, 0.0, 0.0);
            let md = mode(0.7, 1.9);
            let r = reflection_matrix(&plate, &md).unwrap();
            let n = libm::sqrt(eps);
            let eta = 1.0 / n;
            let c0 = md.k_total() / md.xi_tilde;
            let cn = libm::sqrt(1.0 + md.ratio() * md.ratio() / eps);
            let rss = (eta * c0 - cn) / (eta * c0 + cn);
            let rpp = -(eta * cn - c0) / (eta * cn + c0);
            assert_relative_eq!(r.r_ss, rss, max_relative = 1e-12);
            assert_relative_eq!(r.r_pp, rpp, max_relative = 1e-12);
            assert_eq!(r.r_sp, 0.0);
            assert_eq!(r.r_ps, 0.0);
        }
    }

    #[test]
    fn vacuum_plate_does_not_reflect() {
        let plate = PlateMaterial {
            permittivity: LorentzOscillator::vacuum(),
            mu_r: 1.0,
            chi: NonReciprocityModel::constant(0.0),
            kappa: ChiralityModel::constant(0.0),
        };
        let r = reflection_matrix(&plate, &mode(0.4, 2.0)).unwrap();
        assert!(r.max_abs() < 1e-15);
    }

    #[test]
    fn perfect_conductor_limit() {
        let plate = flat_plate(1e14, 0.4, 0.3);
        for (xi, k) in [(0.1, 0.1), (1.0, 3.0), (2.0, 0.01)] {
            let r = reflection_matrix(&plate, &mode(xi, k)).unwrap();
            assert!(r.max_abs_diff(&ReflectionMatrix::PERFECT_CONDUCTOR) < 1e-6, "{r:?}");
        }
    }

    #[test]
    fn passivity_violation_is_reported() {
        let plate = flat_plate(1.5, 1.0, 0.9);
        let err = reflection_matrix(&plate, &mode(1.0, 1.0)).unwrap_err();
        assert!(matches!(err, Error::PassivityViolation { .. }));
    }

    #[test]
    fn refraction_cosines_are_conjugate() {
        let plate = flat_plate(1.7, 0.4, 0.6);
        let md = mode(0.3, 2.2);
        let response = plate.response_at(md.xi());
        let geo = RefractionGeometry::new(&md, &WaveNumbers::at(&response).unwrap());
        assert!((geo.c_plus - geo.c_minus.conj()).norm() < 1e-12);
        assert!(geo.c0 >= 1.0);
    }

    #[test]
    fn mirror_matches_direct_evaluation() {
        let plate = flat_plate(2.0, 0.5, 0.5);
        let md = mode(1.0, 1.0);
        let r = reflection_matrix(&plate, &md).unwrap();
        let direct = reflection_matrix(&plate.with_reversed_chi(), &md).unwrap();
        assert!(mirror_plate_matrix(&r).max_abs_diff(&direct) < 1e-14);
        assert_eq!(mirror_plate_matrix(&mirror_plate_matrix(&r)), r);
    }

    #[test]
    fn mirror_at_zero_chi_reproduces_matrix() {
        let plate = flat_plate(1.6, 0.0, 0.7);
        let r = reflection_matrix(&plate, &mode(0.5, 1.5)).unwrap();
        assert!(r.r_sp.abs() > 1e-3);
        assert!(mirror_plate_matrix(&r).max_abs_diff(&r) < 1e-15);
    }

    fn passive_params() -> impl Strategy<Value = (f64, f64, f64, f64, f64)> {
        (1.0f64..4.0, -1.0f64..1.0, -1.0f64..1.0, 1e-3f64..5.0, 0.0f64..8.0)
            .prop_filter("passive", |(eps, chi, kappa, _, _)| chi * chi + kappa * kappa <= *eps)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn coefficients_bounded((eps, chi, kappa, xi, k) in passive_params()) {
            let r = reflection_matrix(&flat_plate(eps, chi, kappa), &mode(xi, k)).unwrap();
            prop_assert!(r.max_abs() <= 1.0 + 1e-12, "{:?}", r);
        }

        #[test]
        fn mirror_diagonals_invariant((eps, chi, kappa, xi, k) in passive_params()) {
            let plate = flat_plate(eps, chi, kappa);
            let md = mode(xi, k);
            let r = reflection_matrix(&plate, &md).unwrap();
            let direct = reflection_matrix(&plate.with_reversed_chi(), &md).unwrap();
            prop_assert!(mirror_plate_matrix(&r).max_abs_diff(&direct) < 1e-13);
        }

        #[test]
        fn couplings_vanish_continuously(eps in 1.0f64..4.0, xi in 1e-2f64..3.0, k in 0.0f64..5.0, t in 1e-4f64..1e-2) {
            let md = mode(xi, k);
            let base = reflection_matrix(&flat_plate(eps, 0.0, 0.0), &md).unwrap();
            let r = reflection_matrix(&flat_plate(eps, 0.5 * t, 0.5 * t), &md).unwrap();
            prop_assert!(r.max_abs_diff(&base) < 4.0 * t);
        }
    }
}
