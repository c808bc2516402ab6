//! Tensor-product Gauss–Legendre quadrature on the open quarter plane
//! `(0, ∞)²`, for integrands that decay like `e^{−2K̃}`.
//!
//! Each half-line is mapped onto `(0, 1)` and integrated with an open
//! Gauss–Legendre rule, so the axes (in particular `ξ̃ = 0`) are never
//! sampled. The error estimate is the difference between successive node
//! counts `n/2 → n → 2n → …`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::{Error, Result};

/// Substitution taking `t ∈ (0, 1)` onto `x ∈ (0, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HalfLineMap {
    /// `x = −L ln t`, `dx = L/t dt`.
    Exponential { scale: f64 },
    /// `x = L t/(1 − t)`, `dx = L/(1 − t)² dt`.
    Rational { scale: f64 },
}

impl HalfLineMap {
    fn apply(&self, t: f64) -> (f64, f64) {
        match *self {
            HalfLineMap::Exponential { scale } => (-scale * libm::log(t), scale / t),
            HalfLineMap::Rational { scale } => {
                let u = 1.0 - t;
                (scale * t / u, scale / (u * u))
            }
        }
    }

    fn scale(&self) -> f64 {
        match *self {
            HalfLineMap::Exponential { scale } | HalfLineMap::Rational { scale } => scale,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub mapping: HalfLineMap,
    /// Nodes per axis at the first accepted level; the guard level uses half.
    pub base_nodes: usize,
    pub max_refinements: usize,
    pub rel_tol: f64,
    pub abs_tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            mapping: HalfLineMap::Exponential { scale: 1.0 },
            base_nodes: 48,
            max_refinements: 3,
            rel_tol: 1e-6,
            abs_tol: 1e-8,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.base_nodes < 8 {
            return Err(Error::InvalidParameter { name: "base_nodes", value: self.base_nodes as f64 });
        }
        if !(self.rel_tol > 0.0) {
            return Err(Error::InvalidParameter { name: "rel_tol", value: self.rel_tol });
        }
        if !(self.abs_tol > 0.0) {
            return Err(Error::InvalidParameter { name: "abs_tol", value: self.abs_tol });
        }
        let scale = self.mapping.scale();
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::InvalidParameter { name: "mapping scale", value: scale });
        }
        Ok(())
    }

    pub fn with_nodes(mut self, base_nodes: usize) -> Self {
        self.base_nodes = base_nodes;
        self
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    pub fn with_refinements(mut self, max_refinements: usize) -> Self {
        self.max_refinements = max_refinements;
        self
    }

    fn accepts(&self, value: f64, error: f64) -> bool {
        error <= self.abs_tol.max(self.rel_tol * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub converged: bool,
    /// Nodes per axis of the level that produced `value`.
    pub nodes_per_axis: usize,
    /// Total integrand evaluations over all levels.
    pub evaluations: usize,
}

/// Gauss–Legendre nodes and weights on `(−1, 1)`, ascending.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut rule = Vec::with_capacity(n);
    let nf = n as f64;
    for i in 0..n {
        // Tricomi's initial guess for the i-th largest root.
        let mut x = libm::cos(PI * (i as f64 + 0.75) / (nf + 0.5));
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        rule.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    rule.reverse();
    rule
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Open rule on `(0, ∞)` as `(node, weight)` pairs.
pub fn half_line_rule(mapping: HalfLineMap, n: usize) -> Vec<(f64, f64)> {
    gauss_legendre(n)
        .into_iter()
        .map(|(x, w)| {
            let t = 0.5 * (x + 1.0);
            let (node, jac) = mapping.apply(t);
            (node, 0.5 * w * jac)
        })
        .collect()
}

/// Kahan–Babuška–Neumaier accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

fn tensor_rule<F>(f: &mut F, rule: &[(f64, f64)]) -> Result<f64>
where
    F: FnMut(f64, f64) -> Result<f64>,
{
    let mut acc = CompensatedSum::default();
    for &(x, wx) in rule {
        for &(y, wy) in rule {
            let v = f(x, y)?;
            if !v.is_finite() {
                return Err(Error::IntegrandFault { x, y });
            }
            acc.add(wx * wy * v);
        }
    }
    Ok(acc.value())
}

/// `∫₀^∞ dx ∫₀^∞ dy f(x, y)`.
///
/// Stops at the first level whose difference to the previous one is within
/// `max(abs_tol, rel_tol·|value|)`. If the last refinement still misses the
/// tolerance the finest value is returned with `converged = false`.
pub fn integrate_semi_infinite_2d<F>(mut f: F, spec: &QuadratureSpec) -> Result<QuadratureResult>
where
    F: FnMut(f64, f64) -> Result<f64>,
{
    spec.validate()?;
    let mut n = spec.base_nodes / 2;
    let mut previous = tensor_rule(&mut f, &half_line_rule(spec.mapping, n))?;
    let mut evaluations = n * n;
    let mut result = None;
    for _ in 0..=spec.max_refinements {
        n = if n == spec.base_nodes / 2 { spec.base_nodes } else { 2 * n };
        let value = tensor_rule(&mut f, &half_line_rule(spec.mapping, n))?;
        evaluations += n * n;
        let error_estimate = (value - previous).abs();
        let converged = spec.accepts(value, error_estimate);
        result = Some(QuadratureResult { value, error_estimate, converged, nodes_per_axis: n, evaluations });
        if converged {
            break;
        }
        previous = value;
    }
    Ok(result.expect("at least one level is evaluated"))
}
