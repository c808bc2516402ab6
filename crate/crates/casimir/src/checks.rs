//! Invariant suite behind `casimir validate`, plus the random passive
//! samplers it shares with the test suites.

use casimir_core::analysis::PlatePair;
use casimir_core::asymptotics::{resolve_prefactor, LIMIT_PREFACTOR};
use casimir_core::dispersion::{ChiralityModel, LorentzOscillator, NonReciprocityModel, PlateMaterial};
use casimir_core::fresnel::{
    mirror_plate_matrix, reflection_matrix, reflection_matrix_oracle, PerfectConductor, TransverseMode,
};
use casimir_core::lifshitz::{casimir_force, integrand_parts, ForceSign};
use casimir_core::quadrature::QuadratureSpec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn log_uniform<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    (rng.random_range(lo.ln()..hi.ln())).exp()
}

/// Lorentz plate with constant couplings inside `χ² + κ₀² ≤ 0.98`, which is
/// passive at every frequency because `ε_r ≥ 1`.
pub fn random_passive_plate<R: Rng>(rng: &mut R) -> PlateMaterial {
    let radius = 0.99 * rng.random::<f64>().sqrt();
    let angle = rng.random_range(0.0..std::f64::consts::TAU);
    PlateMaterial {
        permittivity: LorentzOscillator {
            omega_p: rng.random_range(0.0..3.0),
            omega_r: rng.random_range(0.3..3.0),
            gamma_r: rng.random_range(0.0..0.3),
        },
        mu_r: 1.0,
        chi: NonReciprocityModel::constant(radius * angle.cos()),
        kappa: ChiralityModel::constant(radius * angle.sin()),
    }
}

/// Mode with `ξ̃` and `k̃∥` spread over several decades and `d` over
/// `[0.01, 100]`.
pub fn random_mode<R: Rng>(rng: &mut R) -> TransverseMode {
    let xi = log_uniform(rng, 1e-3, 20.0);
    let k = if rng.random_bool(0.1) { 0.0 } else { log_uniform(rng, 1e-3, 20.0) };
    TransverseMode::new(xi, k, log_uniform(rng, 0.01, 100.0)).expect("valid mode")
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        Self { name, passed, detail }
    }
}

impl std::fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} {}: {}", if self.passed { "PASS" } else { "FAIL" }, self.name, self.detail)
    }
}

pub fn ideal_mirror_check(spec: &QuadratureSpec) -> CheckOutcome {
    match casimir_force(&PerfectConductor, &PerfectConductor, 1.0, spec) {
        Ok(f) => CheckOutcome::new("ideal mirrors", (f.ratio + 1.0).abs() < 1e-3, format!("F/F0 = {:.8}", f.ratio)),
        Err(e) => CheckOutcome::new("ideal mirrors", false, e.to_string()),
    }
}

/// Largest componentwise gap between the closed form and the linear-solve
/// oracle over `draws` random passive samples.
pub fn oracle_gap(draws: usize, seed: u64) -> Result<(f64, f64), casimir_core::Error> {
    let mut rng = rng(seed);
    let mut gap = 0.0f64;
    let mut largest = 0.0f64;
    for _ in 0..draws {
        let plate = random_passive_plate(&mut rng);
        let mode = random_mode(&mut rng);
        let closed = reflection_matrix(&plate, &mode)?;
        let oracle = reflection_matrix_oracle(&plate, &mode)?;
        gap = gap.max(closed.max_abs_diff(&oracle));
        largest = largest.max(closed.max_abs());
    }
    Ok((gap, largest))
}

pub fn oracle_check(draws: usize) -> CheckOutcome {
    match oracle_gap(draws, 2) {
        Ok((gap, largest)) => CheckOutcome::new(
            "closed form vs boundary-value oracle",
            gap < 1e-10 && largest <= 1.0 + 1e-12,
            format!("max |diff| = {gap:.3e}, max |r| = {largest:.15} over {draws} draws"),
        ),
        Err(e) => CheckOutcome::new("closed form vs boundary-value oracle", false, e.to_string()),
    }
}

/// Smallest Lifshitz denominator over `draws` random plate pairs and modes.
pub fn min_denominator(draws: usize, seed: u64) -> Result<f64, casimir_core::Error> {
    let mut rng = rng(seed);
    let mut min = f64::INFINITY;
    for _ in 0..draws {
        let a = random_passive_plate(&mut rng);
        let b = random_passive_plate(&mut rng);
        let mode = random_mode(&mut rng);
        let parts = integrand_parts(&reflection_matrix(&a, &mode)?, &reflection_matrix(&b, &mode)?, mode.k_total());
        match parts {
            Ok(p) => min = min.min(p.denominator),
            Err(casimir_core::Error::NonPositiveDenominator { value, .. }) => return Ok(value),
            Err(e) => return Err(e),
        }
    }
    Ok(min)
}

pub fn denominator_check(draws: usize) -> CheckOutcome {
    match min_denominator(draws, 3) {
        Ok(min) => {
            CheckOutcome::new("denominator positivity", min > 0.0, format!("min = {min:.3e} over {draws} draws"))
        }
        Err(e) => CheckOutcome::new("denominator positivity", false, e.to_string()),
    }
}

pub fn mirror_check(draws: usize) -> CheckOutcome {
    let mut rng = rng(4);
    let mut gap = 0.0f64;
    for _ in 0..draws {
        let plate = random_passive_plate(&mut rng);
        let mode = random_mode(&mut rng);
        let (Ok(r), Ok(m)) = (reflection_matrix(&plate, &mode), reflection_matrix(&plate.with_reversed_chi(), &mode))
        else {
            return CheckOutcome::new("mirror plate identity", false, "evaluation failed".into());
        };
        gap = gap.max(mirror_plate_matrix(&r).max_abs_diff(&m));
    }
    CheckOutcome::new("mirror plate identity", gap < 1e-12, format!("max |diff| = {gap:.3e} over {draws} draws"))
}

pub fn parity_image_check(spec: &QuadratureSpec) -> CheckOutcome {
    let plate = PlateMaterial::reference(0.5, 0.5);
    let pair = PlatePair::General(plate, plate.parity_image());
    let mut detail = Vec::new();
    let mut passed = true;
    for d in [0.1, 1.0, 10.0] {
        match pair.force(d, spec) {
            Ok(f) => {
                passed &= f.sign == ForceSign::Attractive;
                detail.push(format!("d={d}: {:.4e}", f.ratio));
            }
            Err(e) => {
                passed = false;
                detail.push(e.to_string());
            }
        }
    }
    CheckOutcome::new("parity image attracts", passed, detail.join(", "))
}

pub fn prefactor_check() -> CheckOutcome {
    match resolve_prefactor(1.0) {
        Ok(r) => CheckOutcome::new(
            "small-coupling prefactor",
            r.chosen == LIMIT_PREFACTOR && (r.fitted / r.with_32 - 1.0).abs() < 1e-2,
            format!("fitted {:.6}, 32 -> {:.6}, 16 -> {:.6}", r.fitted, r.with_32, r.with_16),
        ),
        Err(e) => CheckOutcome::new("small-coupling prefactor", false, e.to_string()),
    }
}

pub fn run_all(spec: &QuadratureSpec) -> Vec<CheckOutcome> {
    vec![
        ideal_mirror_check(spec),
        oracle_check(1000),
        denominator_check(10_000),
        mirror_check(1000),
        parity_image_check(spec),
        prefactor_check(),
    ]
}
