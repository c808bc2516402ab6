//! Sweeps built on the force integral: sign phase diagrams, force–distance
//! scans and the zero crossing of the force.
//!
//! Evaluation order is abstracted by [`Executor`] so a caller with threads
//! can fan cells out; results are always assembled by index.

use alloc::vec::Vec;

use crate::dispersion::{ChiralityModel, PlateMaterial};
use crate::lifshitz::{evaluate_force, evaluate_force_symmetric_plate, ForceResult, ForceSign};
use crate::quadrature::QuadratureSpec;
use crate::{Error, Result};

/// Evaluates `f(0), …, f(count − 1)` and returns the results in index order.
pub trait Executor {
    fn map_indexed<R, F>(&self, count: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send;
}

/// Evaluates in order on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn map_indexed<R, F>(&self, count: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        (0..count).map(f).collect()
    }
}

/// `n` points from `min` to `max`, equally spaced in `ln d`.
pub fn log_space(min: f64, max: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return alloc::vec![min];
    }
    let (a, b) = (libm::log(min), libm::log(max));
    (0..n)
        .map(|i| match i {
            0 => min,
            _ if i == n - 1 => max,
            _ => libm::exp(a + (b - a) * i as f64 / (n - 1) as f64),
        })
        .collect()
}

/// `n` points from `min` to `max` inclusive.
pub fn lin_space(min: f64, max: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return alloc::vec![min];
    }
    (0..n).map(|i| min + (max - min) * i as f64 / (n - 1) as f64).collect()
}

/// Two plates facing each other.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PlatePair {
    General(PlateMaterial, PlateMaterial),
    /// `plate` against its χ-reversed copy, evaluated with the
    /// single-matrix formula.
    Antisymmetric(PlateMaterial),
}

impl PlatePair {
    /// `χ₁ = −χ₂ = chi`, `κ₁ = κ₂ = kappa0` on top of `base`.
    pub fn antisymmetric(base: &PlateMaterial, chi: f64, kappa0: f64) -> Self {
        PlatePair::Antisymmetric(base.with_chi(chi).with_kappa(ChiralityModel::constant(kappa0)))
    }

    pub fn plates(&self) -> (PlateMaterial, PlateMaterial) {
        match *self {
            PlatePair::General(a, b) => (a, b),
            PlatePair::Antisymmetric(p) => (p, p.with_reversed_chi()),
        }
    }

    pub fn force(&self, d: f64, spec: &QuadratureSpec) -> Result<ForceResult> {
        match self {
            PlatePair::General(a, b) => evaluate_force(a, b, d, spec),
            PlatePair::Antisymmetric(p) => evaluate_force_symmetric_plate(p, d, spec),
        }
    }

    /// Both plates pass the separation-independent passivity probe.
    pub fn is_passive(&self) -> bool {
        let (a, b) = self.plates();
        a.validate_passivity_everywhere().is_ok() && b.validate_passivity_everywhere().is_ok()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub name: &'static str,
    pub min: f64,
    pub max: f64,
}

impl Axis {
    pub fn values(&self, n: usize) -> Vec<f64> {
        lin_space(self.min, self.max, n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhaseDiagramMode {
    /// Plate 1 fixed; sweep `(κ₂, χ₂)` with the general formula.
    FixedPlate1 { kappa1: f64, chi1: f64 },
    /// Sweep `(χ, κ)` with `χ₁ = −χ₂ = χ`, `κ₁ = κ₂ = κ`.
    AntisymmetricChi,
}

impl PhaseDiagramMode {
    pub fn default_axes(&self) -> (Axis, Axis) {
        match self {
            PhaseDiagramMode::FixedPlate1 { .. } => {
                (Axis { name: "kappa2", min: -1.0, max: 1.0 }, Axis { name: "chi2", min: -1.0, max: 1.0 })
            }
            PhaseDiagramMode::AntisymmetricChi => {
                (Axis { name: "chi", min: 0.0, max: 1.0 }, Axis { name: "kappa", min: 0.0, max: 1.0 })
            }
        }
    }

    fn pair(&self, base: &PlateMaterial, u: f64, v: f64) -> PlatePair {
        match *self {
            PhaseDiagramMode::FixedPlate1 { kappa1, chi1 } => PlatePair::General(
                base.with_chi(chi1).with_kappa(ChiralityModel::constant(kappa1)),
                base.with_chi(v).with_kappa(ChiralityModel::constant(u)),
            ),
            PhaseDiagramMode::AntisymmetricChi => PlatePair::antisymmetric(base, u, v),
        }
    }
}

pub const DEFAULT_GRID: usize = 41;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseDiagramSpec {
    pub mode: PhaseDiagramMode,
    pub axis1: Axis,
    pub axis2: Axis,
    pub grid_n: usize,
    pub distance: f64,
    pub quadrature: QuadratureSpec,
}

impl PhaseDiagramSpec {
    pub fn new(mode: PhaseDiagramMode, grid_n: usize, distance: f64) -> Self {
        let (axis1, axis2) = mode.default_axes();
        Self { mode, axis1, axis2, grid_n, distance, quadrature: QuadratureSpec::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub axis1: f64,
    pub axis2: f64,
    /// `None` when a plate fails the passivity bound.
    pub force: Option<ForceResult>,
}

impl Cell {
    pub fn sign(&self) -> Option<ForceSign> {
        self.force.map(|f| f.sign)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseDiagramGrid {
    pub spec: PhaseDiagramSpec,
    pub base: PlateMaterial,
    /// Row-major: `axis1` outer, `axis2` inner.
    pub cells: Vec<Cell>,
}

impl PhaseDiagramGrid {
    pub fn cell(&self, i: usize, j: usize) -> &Cell {
        &self.cells[i * self.spec.grid_n + j]
    }

    pub fn count(&self, sign: ForceSign) -> usize {
        self.cells.iter().filter(|c| c.sign() == Some(sign)).count()
    }

    pub fn excluded(&self) -> usize {
        self.cells.iter().filter(|c| c.force.is_none()).count()
    }

    pub fn all_converged(&self) -> bool {
        self.cells.iter().filter_map(|c| c.force).all(|f| f.converged)
    }

    /// Fraction of cells evaluated in both grids that carry the same sign.
    pub fn agreement(&self, other: &Self) -> f64 {
        let mut same = 0usize;
        let mut total = 0usize;
        for (a, b) in self.cells.iter().zip(&other.cells) {
            if let (Some(x), Some(y)) = (a.sign(), b.sign()) {
                total += 1;
                same += usize::from(x == y);
            }
        }
        if total == 0 {
            1.0
        } else {
            same as f64 / total as f64
        }
    }
}

pub fn phase_diagram<E: Executor>(base: &PlateMaterial, spec: &PhaseDiagramSpec, exec: &E) -> Result<PhaseDiagramGrid> {
    if spec.grid_n < 2 {
        return Err(Error::InvalidParameter { name: "grid_n", value: spec.grid_n as f64 });
    }
    if !(spec.distance > 0.0) {
        return Err(Error::InvalidParameter { name: "distance", value: spec.distance });
    }
    let n = spec.grid_n;
    let us = spec.axis1.values(n);
    let vs = spec.axis2.values(n);
    let cells = exec.map_indexed(n * n, |k| {
        let (u, v) = (us[k / n], vs[k % n]);
        let pair = spec.mode.pair(base, u, v);
        let force = if pair.is_passive() { Some(pair.force(spec.distance, &spec.quadrature)?) } else { None };
        Ok(Cell { axis1: u, axis2: v, force })
    });
    let cells = cells.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(PhaseDiagramGrid { spec: *spec, base: *base, cells })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Behavior {
    LongRangeRepulsion,
    LongRangeAttraction,
    RepulsionThenAttraction,
    /// Anything else: an attraction-to-repulsion switch, more than one
    /// switch, or no definite sign at all.
    Anomalous {
        sign_changes: usize,
    },
}

impl Behavior {
    pub fn as_str(&self) -> &'static str {
        match self {
            Behavior::LongRangeRepulsion => "long_range_repulsion",
            Behavior::LongRangeAttraction => "long_range_attraction",
            Behavior::RepulsionThenAttraction => "repulsion_then_attraction",
            Behavior::Anomalous { .. } => "anomalous",
        }
    }
}

/// Classify a sign sequence ordered by increasing distance. Indeterminate
/// points are skipped.
pub fn classify(signs: impl IntoIterator<Item = ForceSign>) -> Behavior {
    let definite: Vec<ForceSign> = signs.into_iter().filter(|s| *s != ForceSign::Indeterminate).collect();
    let changes = definite.windows(2).filter(|w| w[0] != w[1]).count();
    match (definite.first(), definite.last(), changes) {
        (Some(ForceSign::Repulsive), _, 0) => Behavior::LongRangeRepulsion,
        (Some(ForceSign::Attractive), _, 0) => Behavior::LongRangeAttraction,
        (Some(ForceSign::Repulsive), Some(ForceSign::Attractive), 1) => Behavior::RepulsionThenAttraction,
        _ => Behavior::Anomalous { sign_changes: changes },
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistanceScan {
    /// Natural units, strictly increasing.
    pub distances: Vec<f64>,
    pub results: Vec<ForceResult>,
    pub behavior: Behavior,
}

impl DistanceScan {
    pub fn ratios(&self) -> impl Iterator<Item = f64> + '_ {
        self.results.iter().map(|r| r.ratio)
    }
}

pub const MIN_SCAN_POINTS: usize = 8;

pub fn distance_scan<E: Executor>(
    pair: &PlatePair,
    d_min: f64,
    d_max: f64,
    points: usize,
    spec: &QuadratureSpec,
    exec: &E,
) -> Result<DistanceScan> {
    if !(d_min > 0.0 && d_min < d_max && d_max.is_finite()) {
        return Err(Error::InvalidParameter { name: "d_min", value: d_min });
    }
    if points < MIN_SCAN_POINTS {
        return Err(Error::InvalidParameter { name: "points", value: points as f64 });
    }
    let distances = log_space(d_min, d_max, points);
    let results = exec.map_indexed(points, |i| pair.force(distances[i], spec));
    let results = results.into_iter().collect::<Result<Vec<_>>>()?;
    let behavior = classify(results.iter().map(|r| r.sign));
    Ok(DistanceScan { distances, results, behavior })
}

/// Default search bracket in units of `c/ω_R`.
pub const DEFAULT_EQUILIBRIUM_BRACKET: (f64, f64) = (0.01, 100.0);

/// Relative bracket width at which the search stops.
pub const EQUILIBRIUM_RTOL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumResult {
    pub d_c: f64,
    /// Final bracket: repulsive at `.0`, attractive at `.1`.
    pub bracket: (f64, f64),
    /// `|F(d_c)|/F₀(d_c)`.
    pub residual: f64,
    pub evaluations: usize,
}

/// Zero of the force between `d_lo` and `d_hi` where it turns from
/// repulsive to attractive. `Ok(None)` when both ends share a sign.
pub fn equilibrium_distance(
    pair: &PlatePair,
    d_lo: f64,
    d_hi: f64,
    spec: &QuadratureSpec,
) -> Result<Option<EquilibriumResult>> {
    if !(d_lo > 0.0 && d_lo < d_hi && d_hi.is_finite()) {
        return Err(Error::InvalidParameter { name: "d_lo", value: d_lo });
    }
    let lo = pair.force(d_lo, spec)?;
    let hi = pair.force(d_hi, spec)?;
    for r in [lo, hi] {
        if r.sign == ForceSign::Indeterminate {
            return Err(Error::IndeterminateSign { distance: r.distance });
        }
    }
    match (lo.sign, hi.sign) {
        (a, b) if a == b => return Ok(None),
        (ForceSign::Attractive, _) => return Err(Error::UnstableCrossing { distance: libm::sqrt(d_lo * d_hi) }),
        _ => {}
    }

    // Work in u = ln d, where the ratio is smooth and slowly varying.
    let (mut u0, mut f0) = (libm::log(d_lo), lo.ratio);
    let (mut u1, mut f1) = (libm::log(d_hi), hi.ratio);
    let mut evaluations = 2;
    let mut side = 0i8;
    let tol = libm::log1p(EQUILIBRIUM_RTOL);
    while u1 - u0 > tol {
        // Illinois-style false position, falling back to bisection when the
        // interpolant strays too close to an end.
        let mut u = u0 - f0 * (u1 - u0) / (f1 - f0);
        let width = u1 - u0;
        if !(u > u0 + 0.05 * width && u < u1 - 0.05 * width) {
            u = 0.5 * (u0 + u1);
        }
        let f = pair.force(libm::exp(u), spec)?.ratio;
        evaluations += 1;
        if f > 0.0 {
            u0 = u;
            f0 = f;
            if side == 1 {
                f1 *= 0.5;
            }
            side = 1;
        } else {
            u1 = u;
            f1 = f;
            if side == -1 {
                f0 *= 0.5;
            }
            side = -1;
        }
    }
    let u = if f1 != f0 { u0 - f0 * (u1 - u0) / (f1 - f0) } else { 0.5 * (u0 + u1) };
    let d_c = libm::exp(u.clamp(u0, u1));
    let residual = pair.force(d_c, spec)?.ratio.abs();
    Ok(Some(EquilibriumResult { d_c, bracket: (libm::exp(u0), libm::exp(u1)), residual, evaluations: evaluations + 1 }))
}
