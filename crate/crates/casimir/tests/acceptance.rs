//! Acceptance criteria 1–10. Runs without the libtest harness so every
//! criterion prints its `PASS`/`FAIL criterion N` line; exits non-zero if any
//! fails.

use std::time::{Duration, Instant};

use casimir::checks::{min_denominator, oracle_gap, random_passive_plate, rng};
use casimir::exec::RayonExecutor;
use casimir_core::analysis::{
    distance_scan, equilibrium_distance, lin_space, phase_diagram, Behavior, PhaseDiagramMode, PhaseDiagramSpec,
    PlatePair,
};
use casimir_core::asymptotics::{
    exact_key_combination, fit_quadratic_coefficient, resolve_prefactor, Coupling, ExpansionContext,
    QuadraticExpansion, LIMIT_PREFACTOR,
};
use casimir_core::dispersion::{ChiralityModel, LorentzOscillator, NonReciprocityModel, PlateMaterial};
use casimir_core::fresnel::PerfectConductor;
use casimir_core::lifshitz::{casimir_force, evaluate_force, force_via_energy_derivative, ForceSign};
use casimir_core::quadrature::QuadratureSpec;
use casimir_core::units::NaturalUnits;
use rand::Rng;

const OMEGA_R: f64 = 1e15;

fn units() -> NaturalUnits {
    NaturalUnits::new(OMEGA_R)
}

fn um(micrometres: f64) -> f64 {
    units().distance_from_meters(micrometres * 1e-6)
}

fn spec() -> QuadratureSpec {
    QuadratureSpec::default()
}

fn base() -> PlateMaterial {
    PlateMaterial::reference(0.0, 0.0)
}

fn verdict(n: u32, passed: bool, detail: String) -> bool {
    println!("{} criterion {n}: {detail}", if passed { "PASS" } else { "FAIL" });
    passed
}

fn criterion_1_ideal_metal_benchmark() -> bool {
    let start = Instant::now();
    let ideal = casimir_force(&PerfectConductor, &PerfectConductor, um(1.0), &spec()).unwrap();
    let ideal_time = start.elapsed();

    let plasma = PlateMaterial::new(
        LorentzOscillator::new(100.0, 1e-4, 0.0).unwrap(),
        1.0,
        NonReciprocityModel::constant(0.0),
        ChiralityModel::constant(0.0),
    )
    .unwrap();
    let start = Instant::now();
    let metal = casimir_force(&plasma, &plasma, um(1.0), &spec().with_refinements(5)).unwrap();
    let plasma_time = start.elapsed();

    let passed = (ideal.ratio + 1.0).abs() < 1e-3
        && (metal.ratio + 1.0).abs() < 0.02
        && ideal_time < Duration::from_secs(1)
        && plasma_time < Duration::from_secs(1);
    verdict(
        1,
        passed,
        format!(
            "perfect conductors F/F0 = {:.6} ({:.0?}); plasma wp = 100 wR at 1 um F/F0 = {:.5} ({:.0?})",
            ideal.ratio, ideal_time, metal.ratio, plasma_time
        ),
    )
}

fn criterion_2_oracle_equivalence() -> bool {
    let start = Instant::now();
    let (gap, largest) = oracle_gap(1000, 20).unwrap();
    let elapsed = start.elapsed();
    verdict(
        2,
        gap < 1e-10 && elapsed < Duration::from_secs(10),
        format!(
            "max componentwise |closed - oracle| = {gap:.2e} over 1000 draws (max |r| = {largest:.6}), {elapsed:.1?}"
        ),
    )
}

fn criterion_3_denominator_positivity() -> bool {
    let min = min_denominator(10_000, 30).unwrap();
    verdict(3, min > 0.0, format!("min denominator = {min:.4e} over 10^4 draws"))
}

fn criterion_4_energy_force_consistency() -> bool {
    // Five random passive pairs at four separations spanning both regimes.
    let mut r = rng(40);
    let mut worst = 0.0f64;
    let mut failures = 0;
    for _ in 0..5 {
        let a = random_passive_plate(&mut r);
        let b = random_passive_plate(&mut r);
        for d in [0.1, 0.5, 2.0, 8.0] {
            let d = d * r.random_range(0.9..1.1);
            let direct = evaluate_force(&a, &b, d, &spec()).unwrap();
            let via = force_via_energy_derivative(&a, &b, d, 1e-3, &spec()).unwrap();
            let gap = (direct.ratio - via.ratio).abs();
            let tol = (1e-3 * direct.ratio.abs()).max(direct.quad_error + via.quad_error);
            worst = worst.max(gap / tol);
            failures += usize::from(gap > tol);
        }
    }
    verdict(4, failures == 0, format!("20 points, worst |gap|/tolerance = {worst:.3}, {failures} outside"))
}

fn criterion_5_distance_behaviour() -> bool {
    let exec = RayonExecutor::from_env();
    let start = Instant::now();
    let cases = [
        (0.0, 0.0, Behavior::LongRangeAttraction),
        (1.0, 0.0, Behavior::LongRangeRepulsion),
        (0.0, 1.0, Behavior::RepulsionThenAttraction),
        (0.5, 0.5, Behavior::RepulsionThenAttraction),
    ];
    let mut passed = true;
    let mut detail = Vec::new();
    for (chi, kappa, expected) in cases {
        let pair = PlatePair::antisymmetric(&base(), chi, kappa);
        let scan = distance_scan(&pair, um(0.05), um(10.0), 24, &spec(), &exec).unwrap();
        passed &= scan.behavior == expected;
        detail.push(format!("(chi={chi}, kappa={kappa}) -> {}", scan.behavior.as_str()));
    }
    let elapsed = start.elapsed();
    passed &= elapsed < Duration::from_secs(120);
    verdict(5, passed, format!("{}; {elapsed:.1?}", detail.join(", ")))
}

fn criterion_6_equilibrium_distance() -> bool {
    let pair = PlatePair::antisymmetric(&base(), 0.5, 0.5);
    let result = equilibrium_distance(&pair, um(0.05), um(5.0), &spec()).unwrap();
    let Some(eq) = result else {
        return verdict(6, false, "no sign change in [0.05, 5] um".into());
    };
    let d_c = units().distance_to_meters(eq.d_c) * 1e6;
    let below = pair.force(eq.bracket.0 * 0.9, &spec()).unwrap().sign;
    let above = pair.force(eq.bracket.1 * 1.1, &spec()).unwrap().sign;
    let flips = below == ForceSign::Repulsive && above == ForceSign::Attractive;
    verdict(
        6,
        (0.1..=1.0).contains(&d_c) && flips,
        format!("d_c = {d_c:.4} um (required [0.1, 1]); repulsive below: {below:?}, attractive above: {above:?}"),
    )
}

fn criterion_7_parity_conjugate_attraction() -> bool {
    let d = um(0.1);
    let fixed = |kappa1: f64, chi1: f64, kappa2: f64, chi2: f64| {
        let a = base().with_chi(chi1).with_kappa(ChiralityModel::constant(kappa1));
        let b = base().with_chi(chi2).with_kappa(ChiralityModel::constant(kappa2));
        evaluate_force(&a, &b, d, &spec()).unwrap()
    };
    let anchor = fixed(0.5, 0.5, -0.5, 0.5);
    let mut passed = anchor.sign == ForceSign::Attractive;
    let mut strongest = f64::NEG_INFINITY;
    // χ₁ = 0.5 keeps |κ₁| ≤ 0.866 passive at high frequency.
    for kappa1 in lin_space(-0.8, 0.8, 11) {
        let f = fixed(kappa1, 0.5, -kappa1, 0.5);
        passed &= f.sign == ForceSign::Attractive;
        strongest = strongest.max(f.ratio);
    }
    verdict(
        7,
        passed,
        format!(
            "anchor F/F0 = {:.5}; parity line chi=0.5, kappa1 in [-0.8, 0.8] x11, max F/F0 = {strongest:.5}",
            anchor.ratio
        ),
    )
}

fn criterion_8_small_coupling_expansion() -> bool {
    let resolution = resolve_prefactor(1.0).unwrap();
    let mut worst: f64 = 0.0;
    // ε_r = 1 is where the published form is complete at quadratic order;
    // the consistent form is checked across [1, 2].
    for a in [0.3, 1.0, 3.0] {
        let ctx = ExpansionContext::new(a, 1.0, 0.0, 0.0).unwrap();
        let e = QuadraticExpansion::published(&ctx, 1.0, 1.0);
        worst = worst.max((fit_quadratic_coefficient(1.0, a, Coupling::Chi, 1e-3).unwrap() / e.chi - 1.0).abs());
        worst = worst.max((fit_quadratic_coefficient(1.0, a, Coupling::Kappa, 1e-3).unwrap() / e.kappa - 1.0).abs());
        for eps in [1.5f64, 2.0] {
            let n = eps.sqrt();
            let ctx = ExpansionContext::new(a, n, 0.0, 0.0).unwrap();
            let e = QuadraticExpansion::consistent(&ctx, 1.0, 1.0 / n);
            worst = worst.max((fit_quadratic_coefficient(eps, a, Coupling::Chi, 1e-3).unwrap() / e.chi - 1.0).abs());
            worst =
                worst.max((fit_quadratic_coefficient(eps, a, Coupling::Kappa, 1e-3).unwrap() / e.kappa - 1.0).abs());
        }
    }

    let eps: f64 = 2.0;
    let n = eps.sqrt();
    let e = QuadraticExpansion::consistent(&ExpansionContext::new(1.0, n, 0.0, 0.0).unwrap(), 1.0, 1.0 / n);
    let residual = |s: f64| (exact_key_combination(eps, 1.0, 1.0, s * n, s * n).unwrap() - e.evaluate(s, s)).abs();
    let richardson = residual(0.04) / residual(0.02);

    let passed = worst < 0.01 && (richardson - 16.0).abs() <= 3.0 && resolution.chosen == LIMIT_PREFACTOR;
    verdict(
        8,
        passed,
        format!(
            "max coefficient mismatch {:.2e}; residual ratio {richardson:.3}; prefactor fit {:.6} vs 32 -> {:.6}, 16 -> {:.6}",
            worst, resolution.fitted, resolution.with_32, resolution.with_16
        ),
    )
}

fn criterion_9_phase_boundary_shrinks_and_saturates() -> bool {
    let exec = RayonExecutor::from_env();
    let start = Instant::now();
    let grids: Vec<_> = [0.1, 0.5, 1.0, 10.0]
        .iter()
        .map(|&d| {
            let spec = PhaseDiagramSpec::new(PhaseDiagramMode::AntisymmetricChi, 21, um(d));
            phase_diagram(&base(), &spec, &exec).unwrap()
        })
        .collect();
    let elapsed = start.elapsed();
    let repulsive: Vec<_> = grids.iter().map(|g| g.count(ForceSign::Repulsive)).collect();
    let monotone = repulsive.windows(2).all(|w| w[1] <= w[0]);
    let agreement = grids[2].agreement(&grids[3]);
    let converged = grids.iter().all(|g| g.all_converged());
    let passed = monotone && agreement >= 0.95 && converged && elapsed < Duration::from_secs(600);
    verdict(
        9,
        passed,
        format!(
            "repulsive cells at 0.1/0.5/1/10 um = {repulsive:?} (non-increasing: {monotone}); \
             1 vs 10 um agreement = {:.1}% (required >= 95%); all converged: {converged}; {elapsed:.1?}",
            100.0 * agreement
        ),
    )
}

fn criterion_10_condon_sensitivity() -> bool {
    let variation = |d: f64| {
        let mut ratios = Vec::new();
        for kappa_max in lin_space(0.0, 1.0, 11) {
            let kappa = ChiralityModel::condon_from_peak(kappa_max, 1.0, 0.1).unwrap();
            let plate = base().with_chi(0.5).with_kappa(kappa);
            ratios.push(PlatePair::Antisymmetric(plate).force(d, &spec()).unwrap().ratio);
        }
        let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        (hi - lo) / ratios[0].abs()
    };
    let far = variation(um(10.0));
    let near = variation(um(0.1));
    verdict(
        10,
        far < 0.05 && near > 0.05,
        format!("chi = 0.5, kappa_max 0 -> 1: variation {:.2}% at 10 um, {:.1}% at 0.1 um", 100.0 * far, 100.0 * near),
    )
}

fn main() {
    let criteria: [(u32, fn() -> bool); 10] = [
        (1, criterion_1_ideal_metal_benchmark),
        (2, criterion_2_oracle_equivalence),
        (3, criterion_3_denominator_positivity),
        (4, criterion_4_energy_force_consistency),
        (5, criterion_5_distance_behaviour),
        (6, criterion_6_equilibrium_distance),
        (7, criterion_7_parity_conjugate_attraction),
        (8, criterion_8_small_coupling_expansion),
        (9, criterion_9_phase_boundary_shrinks_and_saturates),
        (10, criterion_10_condon_sensitivity),
    ];
    let mut failed = Vec::new();
    for (n, run) in criteria {
        match std::panic::catch_unwind(run) {
            Ok(true) => {}
            Ok(false) => failed.push(n),
            Err(_) => {
                println!("FAIL criterion {n}: panicked");
                failed.push(n);
            }
        }
    }
    println!("acceptance: {} of 10 passed; failing: {failed:?}", 10 - failed.len());
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
