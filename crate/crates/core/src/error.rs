use thiserror::Error;

/// Failures reported by the numerical engine.
///
/// Variants carrying a `t` name the curve parameter at which the failure was
/// detected so callers can report the failing grid point.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum Error {
    #[error("singular 3x3 system (|det| = {det:e} below the degeneracy floor)")]
    SingularSystem { det: f64 },
    #[error("grid is not strictly increasing at index {index}")]
    NonMonotoneGrid { index: usize },
    #[error("no sign change on the bracket [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },
    #[error("iteration limit reached (last residual {residual:e})")]
    MaxIterations { residual: f64 },
    #[error("radial root solve could not bracket the unit sphere")]
    RootBracketFailure,
    #[error("support point solver diverged (residual {residual:e})")]
    SolverDivergence { residual: f64 },
    #[error("degenerate plane normal")]
    DegenerateDirection,
    #[error("first and second derivatives are dependent at t = {t}")]
    DegenerateCurvature { t: f64 },
    #[error("parameter t = {t} is outside the sampled range")]
    OutOfRange { t: f64 },
    #[error("not enough samples: need {needed}, got {got}")]
    InsufficientPoints { needed: usize, got: usize },
    #[error("classification needs at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("dv/ds leaves the osculating plane (residual {residual:e})")]
    ResidualTooLarge { residual: f64 },
    #[error("origin is not interior to the translated unit ball (F(-a0) = {value})")]
    OriginNotInterior { value: f64 },
    #[error("denominator below tolerance ({value:e})")]
    ZeroDenominator { value: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
