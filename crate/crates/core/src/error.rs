use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    BadParameters(String),
    #[error("B is not positive: B({s}, {t}) = {value}")]
    NonPositiveB { s: f64, t: f64, value: f64 },
    #[error("B(s, 0) must equal 1; deviation {deviation:.3e} exceeds tolerance {tolerance:.1e}")]
    NormalizationViolation { deviation: f64, tolerance: f64 },
    #[error("metric source is not periodic with period {period}: mismatch {mismatch:.3e}")]
    NotPeriodic { period: f64, mismatch: f64 },
    #[error("degenerate boundary data at s = {s}: K_t = {k_t}, B_t = {b_t}")]
    DegenerateBoundaryData { s: f64, k_t: f64, b_t: f64 },
    #[error("jet system is singular at s-index {index} (determinant {det:.3e})")]
    SingularJetSystem { index: usize, det: f64 },
    #[error("chart provides t-derivatives up to order {available}, {required} needed")]
    InsufficientSmoothness { required: usize, available: usize },
    #[error("start-off too deep: last jet term {last:.3e} exceeds 1e-3 of leading term {leading:.3e}")]
    StartoffTooDeep { last: f64, leading: f64 },
    #[error("blow-up detected at t = {t}: {reason}")]
    BlowupDetected { t: f64, reason: String },
    #[error("step rejected at t = {t}: Gauss residual {residual:.3e} above cap {cap:.1e}")]
    StepRejected { t: f64, residual: f64, cap: f64 },
    #[error("N is not positive at grid index ({i}, {j})")]
    NonpositiveN { i: usize, j: usize },
    #[error("reduced coefficient denominator {value:.3e} below 1e-10 at ({i}, {j})")]
    DivisionHazard { i: usize, j: usize, value: f64 },
    #[error("blow-up window out of range: {0}")]
    WindowOutOfRange(String),
    #[error("drift a = {0} must exceed 3/2")]
    DriftOutOfRange(f64),
    #[error("linear solve failed: {0}")]
    SolverSingular(String),
    #[error("test function does not vanish on the boundary: trace {trace:.3e}")]
    BoundaryConditionViolated { trace: f64 },
    #[error("zero set measure {measured:.4} is below the required {required:.4}")]
    ZeroSetTooSmall { measured: f64, required: f64 },
    #[error("invalid curvature profile: {0}")]
    ProfileInvalid(String),
    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
