use crate::C64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A Laplace-space pole sits on or above the inversion contour where the
    /// transform must be stable. Carries the offending pole.
    #[error("stability violation: pole at {pole} lies above the inversion contour")]
    StabilityViolation { pole: C64 },

    #[error("evaluation on a pole of the transform at p = {0}")]
    OnPole(C64),

    #[error("degree-zero polynomial has no roots")]
    DegreeZero,

    #[error("quadrature did not converge: {0}")]
    QuadratureFailure(String),

    #[error("ODE step size underflow at t = {0}")]
    StepUnderflow(f64),

    #[error("internal consistency violation: {0}")]
    Inconsistency(String),

    #[error("truncation warning: probability mass {mass} below 1 - 1e-6; raise n_max")]
    Truncation { mass: f64 },
}
