//! Small-coupling expansion of the key combination
//! `r_ss² + r_pp² − r_ps² − r_sp²` to quadratic order in the reduced
//! couplings `χ_r = χ/n`, `κ_r = |κ|/n`.
//!
//! Two forms are provided:
//!
//! - [`QuadraticExpansion::published`] is the closed form usually quoted for
//!   this problem. Its `ε → 1` limit is
//!   `−(32/Δ²)η₀²η²c₀²(p²χ_r² + 4q²κ_r²)`, which the exact matrix confirms
//!   (a prefactor of 16 is off by two; see [`resolve_prefactor`]). Away from
//!   `ε = 1` its quadratic coefficients do not match the exact matrix.
//! - [`QuadraticExpansion::consistent`] expands numerator and `Δ²` jointly
//!   to first order in `χ_r²` and `κ_r²` and reproduces the exact
//!   coefficients for every `ε`, so the residual is quartic.

use crate::dispersion::{ChiralityModel, LorentzOscillator, NonReciprocityModel, PlateMaterial};
use crate::fresnel::{reflection_matrix, TransverseMode};
use crate::lifshitz::ForceSign;
use crate::{Error, Result};

/// Largest coupling for which the expansion is trusted.
pub const VALIDITY_RADIUS: f64 = 0.05;

/// Prefactor of the `ε → 1` limit confirmed by the exact matrix.
pub const LIMIT_PREFACTOR: f64 = 32.0;
/// Alternative prefactor that the exact matrix rules out.
pub const REJECTED_LIMIT_PREFACTOR: f64 = 16.0;

/// Distance to a window edge treated as "on the edge".
pub const WINDOW_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionContext {
    /// `k̃∥/ξ̃`.
    pub a: f64,
    /// Refractive index `√(μ_r ε_r)`.
    pub n: f64,
    /// `√(1 + a²/n²)`.
    pub p: f64,
    /// `(a²/n²)/(2p)`.
    pub q: f64,
    /// `√(1 + a²)`.
    pub c0: f64,
    pub chi_r: f64,
    pub kappa_r: f64,
}

impl ExpansionContext {
    pub fn new(a: f64, n: f64, chi: f64, kappa: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::InvalidParameter { name: "a", value: a });
        }
        if !(n >= 1.0 && n.is_finite()) {
            return Err(Error::InvalidParameter { name: "n", value: n });
        }
        let s = a * a / (n * n);
        let p = libm::sqrt(1.0 + s);
        Ok(Self { a, n, p, q: s / (2.0 * p), c0: libm::sqrt(1.0 + a * a), chi_r: chi / n, kappa_r: kappa / n })
    }

    pub fn with_couplings(self, chi: f64, kappa: f64) -> Self {
        Self { chi_r: chi / self.n, kappa_r: kappa / self.n, ..self }
    }
}

/// `(η²−η₀²)²/(η₀²η²)`.
pub fn impedance_contrast(eta0: f64, eta: f64) -> f64 {
    let d = eta * eta - eta0 * eta0;
    d * d / (eta0 * eta0 * eta * eta)
}

/// `zeroth + chi·χ_r² + kappa·κ_r²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticExpansion {
    pub zeroth: f64,
    pub chi: f64,
    pub kappa: f64,
}

impl QuadraticExpansion {
    pub fn published(ctx: &ExpansionContext, eta0: f64, eta: f64) -> Self {
        let ExpansionContext { p, q, c0, .. } = *ctx;
        let x = impedance_contrast(eta0, eta);
        let (c2, p2, pq) = (c0 * c0, p * p, p * q);
        let delta = (eta * eta + eta0 * eta0) * c0 * 2.0 * p + 2.0 * eta0 * eta * (c2 + p2);
        let pref = 8.0 * eta0 * eta0 * eta * eta / (delta * delta);
        let z0 = x * c2 * p2 + (c2 - p2) * (c2 - p2);
        let zc = 2.0 * x * c2 * pq - (c2 + p2) * (c2 + p2) - 4.0 * (c2 - p2) * pq;
        let zk = 2.0 * x * c2 * pq - 8.0 * q * q * (3.0 * c2 - p2) - 4.0 * (c2 - p2) * pq;
        Self { zeroth: pref * z0, chi: pref * zc, kappa: pref * zk }
    }

    pub fn consistent(ctx: &ExpansionContext, eta0: f64, eta: f64) -> Self {
        let ExpansionContext { p, q, c0, .. } = *ctx;
        let one = Lin::constant(1.0);
        let x = Lin { c: 0.0, x: 1.0, y: 0.0 };
        // C₊ + C₋, (C₊ − C₋)², C₊C₋ and √(1 − χ_r²), all scaled by 1/n.
        let s = Lin { c: 2.0 * p, x: 2.0 * q, y: -6.0 * q + 4.0 * q * q / p };
        let dm2 = Lin { c: 0.0, x: 0.0, y: -16.0 * q * q };
        let prod = Lin { c: p * p, x: 2.0 * p * q, y: -6.0 * p * q + 8.0 * q * q };
        let w2 = one - x;
        let w = Lin { c: 1.0, x: -0.5, y: 0.0 };
        let c02 = Lin::constant(c0 * c0);
        let (e2, e02, ee) = (eta * eta, eta0 * eta0, eta0 * eta);

        let delta = s.scale((e2 + e02) * c0) + (c02 + prod).mul(w).scale(2.0 * ee);
        let diff = c02 - prod;
        let n = (s.mul(s).scale((e2 - e02) * (e2 - e02) * c0 * c0) + diff.mul(diff).mul(w2).scale(4.0 * ee * ee))
            .scale(2.0)
            - (s.mul(s).mul(x) - dm2.mul(w2)).scale(8.0 * ee * ee * c0 * c0);
        let key = n.mul(delta.mul(delta).recip());
        Self { zeroth: key.c, chi: key.x, kappa: key.y }
    }

    pub fn evaluate(&self, chi_r: f64, kappa_r: f64) -> f64 {
        self.zeroth + self.chi * chi_r * chi_r + self.kappa * kappa_r * kappa_r
    }

    pub fn at(&self, ctx: &ExpansionContext) -> f64 {
        self.evaluate(ctx.chi_r, ctx.kappa_r)
    }
}

/// Published expansion evaluated at the couplings stored in `ctx`.
pub fn key_combination_expansion(ctx: &ExpansionContext, eta0: f64, eta: f64) -> f64 {
    QuadraticExpansion::published(ctx, eta0, eta).at(ctx)
}

/// `c + x·X + y·Y`, truncated after first order in `X`, `Y`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Lin {
    c: f64,
    x: f64,
    y: f64,
}

impl Lin {
    fn constant(c: f64) -> Self {
        Self { c, x: 0.0, y: 0.0 }
    }

    fn scale(self, k: f64) -> Self {
        Self { c: k * self.c, x: k * self.x, y: k * self.y }
    }

    fn mul(self, o: Self) -> Self {
        Self { c: self.c * o.c, x: self.c * o.x + self.x * o.c, y: self.c * o.y + self.y * o.c }
    }

    fn recip(self) -> Self {
        let c2 = self.c * self.c;
        Self { c: 1.0 / self.c, x: -self.x / c2, y: -self.y / c2 }
    }
}

impl core::ops::Add for Lin {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self { c: self.c + o.c, x: self.x + o.x, y: self.y + o.y }
    }
}

impl core::ops::Sub for Lin {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self { c: self.c - o.c, x: self.x - o.x, y: self.y - o.y }
    }
}

/// Key combination of the exact closed-form matrix for a plate with
/// frequency-independent `ε_r`, `μ_r`, χ and constant κ at `k̃∥/ξ̃ = a`.
pub fn exact_key_combination(eps_r: f64, mu_r: f64, a: f64, chi: f64, kappa: f64) -> Result<f64> {
    if !(eps_r >= 1.0) {
        return Err(Error::InvalidParameter { name: "eps_r", value: eps_r });
    }
    // A resonance far above the probed frequency keeps ε_r flat.
    let omega_r = 1e9;
    let plate = PlateMaterial::new(
        LorentzOscillator::new(omega_r * libm::sqrt(eps_r - 1.0), omega_r, 0.0)?,
        mu_r,
        NonReciprocityModel::constant(chi),
        ChiralityModel::constant(kappa),
    )?;
    let mode = TransverseMode::new(1.0, a, 1.0)?;
    Ok(reflection_matrix(&plate, &mode)?.key_combination())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coupling {
    Chi,
    Kappa,
}

/// Quadratic coefficient of the exact key combination in the reduced
/// coupling, from a single finite difference at `reduced`.
pub fn fit_quadratic_coefficient(eps_r: f64, a: f64, coupling: Coupling, reduced: f64) -> Result<f64> {
    let n = libm::sqrt(eps_r);
    let base = exact_key_combination(eps_r, 1.0, a, 0.0, 0.0)?;
    let (chi, kappa) = match coupling {
        Coupling::Chi => (reduced * n, 0.0),
        Coupling::Kappa => (0.0, reduced * n),
    };
    Ok((exact_key_combination(eps_r, 1.0, a, chi, kappa)? - base) / (reduced * reduced))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrefactorResolution {
    pub fitted: f64,
    /// χ coefficient implied by a prefactor of 32.
    pub with_32: f64,
    /// χ coefficient implied by a prefactor of 16.
    pub with_16: f64,
    pub chosen: f64,
}

/// Decide between the two `ε → 1` prefactors by fitting the exact χ
/// coefficient at `χ_r = 1e-3`.
pub fn resolve_prefactor(a: f64) -> Result<PrefactorResolution> {
    let fitted = fit_quadratic_coefficient(1.0, a, Coupling::Chi, 1e-3)?;
    let ctx = ExpansionContext::new(a, 1.0, 0.0, 0.0)?;
    let delta = 2.0 * ctx.c0 * 2.0 * ctx.p + 2.0 * (ctx.c0 * ctx.c0 + ctx.p * ctx.p);
    let coeff = |pref: f64| -pref * ctx.c0 * ctx.c0 * ctx.p * ctx.p / (delta * delta);
    let (with_32, with_16) = (coeff(LIMIT_PREFACTOR), coeff(REJECTED_LIMIT_PREFACTOR));
    let chosen =
        if (fitted - with_32).abs() <= (fitted - with_16).abs() { LIMIT_PREFACTOR } else { REJECTED_LIMIT_PREFACTOR };
    Ok(PrefactorResolution { fitted, with_32, with_16, chosen })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistanceRegime {
    /// `c/d ≫ ω_R`.
    Small,
    /// `c/d ≪ ω_R`.
    Large,
}

/// Predicted force sign for a χ-antisymmetric pair with small couplings.
///
/// The small-distance answer ignores the non-retarded dielectric term,
/// which only vanishes linearly in `d` (≈ 0.032·d F₀ for the reference
/// plate against ≈ 0.23χ² + 0.12κ₀² of repulsion); weak couplings need
/// correspondingly smaller `d` before the prediction holds.
pub fn limit_sign(regime: DistanceRegime, material: &PlateMaterial) -> Result<ForceSign> {
    let chi = material.chi.chi0;
    let kappa = material.kappa.peak_magnitude();
    for v in [chi, kappa] {
        if v.abs() > VALIDITY_RADIUS {
            return Err(Error::OutsideValidity { value: v });
        }
    }
    let coupled = chi != 0.0 || kappa != 0.0;
    let dielectric = material.permittivity.omega_p > 0.0 || material.mu_r != 1.0;
    Ok(match (regime, coupled, dielectric) {
        (_, false, false) => ForceSign::Indeterminate,
        (_, false, true) => ForceSign::Attractive,
        (DistanceRegime::Small, true, _) => ForceSign::Repulsive,
        (DistanceRegime::Large, true, true) => ForceSign::Attractive,
        (DistanceRegime::Large, true, false) => ForceSign::Repulsive,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeSign {
    Negative,
    Positive,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MonotonicitySigns {
    pub chi: DerivativeSign,
    pub kappa: DerivativeSign,
}

/// Upper edge of the impedance-contrast window for the χ derivative.
pub const CHI_WINDOW: f64 = 4.0;
/// Upper edge of the impedance-contrast window for the κ derivative.
pub const KAPPA_WINDOW: f64 = 2.0;

/// Signs of `∂/∂χ_r` and `∂/∂κ_r` of the published expansion (for positive
/// couplings). Outside the windows on `(η²−η₀²)²/(η₀²η²)`, or on their edge,
/// the answer is inconclusive.
pub fn monotonicity_derivatives(ctx: &ExpansionContext, eta0: f64, eta: f64) -> MonotonicitySigns {
    let x = impedance_contrast(eta0, eta);
    let e = QuadraticExpansion::published(ctx, eta0, eta);
    let sign = |coeff: f64, window: f64| {
        if x > window - WINDOW_TOLERANCE || coeff == 0.0 {
            DerivativeSign::Inconclusive
        } else if coeff < 0.0 {
            DerivativeSign::Negative
        } else {
            DerivativeSign::Positive
        }
    };
    MonotonicitySigns { chi: sign(e.chi, CHI_WINDOW), kappa: sign(e.kappa, KAPPA_WINDOW) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn ctx(eps: f64, a: f64) -> ExpansionContext {
        ExpansionContext::new(a, libm::sqrt(eps), 0.0, 0.0).unwrap()
    }

    #[test]
    fn context_ordering() {
        for eps in [1.0, 1.5, 2.0, 4.0] {
            for a in [0.1, 1.0, 10.0] {
                let c = ctx(eps, a);
                assert!(c.c0 >= c.p - 1e-15 && c.p > 2.0 * c.q && c.q >= 0.0);
            }
        }
    }

    #[test]
    fn zeroth_order_is_non_negative_and_exact() {
        for eps in [1.0, 2.0, 5.0] {
            let c = ctx(eps, 1.0);
            let eta = 1.0 / libm::sqrt(eps);
            let z = key_combination_expansion(&c, 1.0, eta);
            assert!(z >= 0.0);
            let exact = exact_key_combination(eps, 1.0, 1.0, 0.0, 0.0).unwrap();
            assert_relative_eq!(z, exact, max_relative = 1e-8, epsilon = 1e-14);
            assert_relative_eq!(
                QuadraticExpansion::consistent(&c, 1.0, eta).zeroth,
                exact,
                max_relative = 1e-8,
                epsilon = 1e-14
            );
        }
    }

    #[test]
    fn vacuum_limit_coefficients() {
        let c = ctx(1.0, 1.0);
        for e in [QuadraticExpansion::published(&c, 1.0, 1.0), QuadraticExpansion::consistent(&c, 1.0, 1.0)] {
            assert_relative_eq!(e.chi, -0.5, max_relative = 1e-12);
            assert_relative_eq!(e.kappa, -0.125, max_relative = 1e-12);
        }
    }

    #[test]
    fn prefactor_resolves_to_32() {
        for a in [0.5, 1.0, 3.0] {
            let r = resolve_prefactor(a).unwrap();
            assert_eq!(r.chosen, LIMIT_PREFACTOR);
            assert_relative_eq!(r.fitted, r.with_32, max_relative = 1e-3);
        }
    }

    #[test]
    fn consistent_form_matches_exact_fit() {
        for eps in [1.0, 1.5, 2.0] {
            for a in [0.1, 1.0, 10.0] {
                let e = QuadraticExpansion::consistent(&ctx(eps, a), 1.0, 1.0 / libm::sqrt(eps));
                let fc = fit_quadratic_coefficient(eps, a, Coupling::Chi, 1e-3).unwrap();
                let fk = fit_quadratic_coefficient(eps, a, Coupling::Kappa, 1e-3).unwrap();
                assert_relative_eq!(e.chi, fc, max_relative = 1e-3);
                assert_relative_eq!(e.kappa, fk, max_relative = 1e-3);
            }
        }
    }

    #[test]
    fn residual_is_quartic() {
        let eps = 2.0;
        let n = libm::sqrt(eps);
        let e = QuadraticExpansion::consistent(&ctx(eps, 1.0), 1.0, 1.0 / n);
        let residual = |s: f64| {
            let exact = exact_key_combination(eps, 1.0, 1.0, s * n, s * n).unwrap();
            (exact - e.evaluate(s, s)).abs()
        };
        let ratio = residual(0.04) / residual(0.02);
        assert!((ratio - 16.0).abs() < 3.0, "{ratio}");
    }

    #[test]
    fn limit_signs() {
        let plate = |wp: f64, chi: f64, kappa: f64| {
            let mut m = PlateMaterial::reference(chi, kappa);
            m.permittivity.omega_p = wp;
            m
        };
        assert_eq!(limit_sign(DistanceRegime::Small, &plate(1.0, 0.02, 0.0)).unwrap(), ForceSign::Repulsive);
        assert_eq!(limit_sign(DistanceRegime::Large, &plate(1.0, 0.02, 0.02)).unwrap(), ForceSign::Attractive);
        assert_eq!(limit_sign(DistanceRegime::Large, &plate(0.0, 0.02, 0.01)).unwrap(), ForceSign::Repulsive);
        assert!(matches!(limit_sign(DistanceRegime::Small, &plate(1.0, 0.2, 0.0)), Err(Error::OutsideValidity { .. })));
    }

    #[test]
    fn monotonicity_windows() {
        let signs = |eps: f64| monotonicity_derivatives(&ctx(eps, 1.0), 1.0, 1.0 / libm::sqrt(eps));
        let both_negative = MonotonicitySigns { chi: DerivativeSign::Negative, kappa: DerivativeSign::Negative };
        assert_eq!(signs(2.0), both_negative);
        assert_eq!(signs(1.0), both_negative);
        let edge = 3.0 + 2.0 * core::f64::consts::SQRT_2;
        assert_eq!(signs(edge).chi, DerivativeSign::Inconclusive);
    }
}
