use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum Error {
    #[error("invalid value {value} for `{name}`")]
    InvalidParameter { name: &'static str, value: f64 },

    #[error("passivity violated at xi = {xi} (chi^2 + |kappa|^2 - n^2 = {excess})")]
    PassivityViolation { xi: f64, excess: f64 },

    #[error("|chi| = {chi} exceeds the refractive index n = {n}")]
    BranchDomain { chi: f64, n: f64 },

    #[error("degenerate mode at xi~ = {xi_tilde}, k~ = {k_tilde}")]
    DegenerateMode { xi_tilde: f64, k_tilde: f64 },

    #[error("coefficient {coefficient} has residual imaginary part {imag}")]
    BranchSelection { coefficient: &'static str, imag: f64 },

    #[error("Lifshitz denominator {value} is not positive at K~ = {k_total}")]
    NonPositiveDenominator { value: f64, k_total: f64 },

    #[error("integrand is not finite at ({x}, {y})")]
    IntegrandFault { x: f64, y: f64 },

    #[error("quadrature did not converge: value {value}, error estimate {error_estimate}")]
    NotConverged { value: f64, error_estimate: f64 },

    #[error("force sign is indeterminate at d = {distance}; tighten the quadrature")]
    IndeterminateSign { distance: f64 },

    #[error("force crosses zero from attraction to repulsion near d = {distance}")]
    UnstableCrossing { distance: f64 },

    #[error("coupling {value} is outside the small-coupling validity radius")]
    OutsideValidity { value: f64 },
}
