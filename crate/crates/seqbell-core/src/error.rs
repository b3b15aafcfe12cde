use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("entry count {len} is not a perfect square of dimension {dim}")]
    BadShape { dim: usize, len: usize },
    #[error("matrix contains non-finite entries")]
    NonFinite,
    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },
    #[error("observable is not dichotomic (max |O^2 - 1| entry {deviation:.3e})")]
    NotDichotomic { deviation: f64 },
    #[error("triple is not trine (||B1+B2+B3|| = {deviation:.3e})")]
    NotTrine { deviation: f64 },
    #[error("state trace is {trace:.6}, expected 1")]
    TraceNotOne { trace: f64 },
    #[error("state is not positive semidefinite (lowest eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },
    #[error("unsharpness {eta} outside {range}")]
    UnsharpnessOutOfRange { eta: f64, range: &'static str },
    #[error("setting weights must be nonnegative and sum to 1 (sum {sum:.6})")]
    BadWeights { sum: f64 },
    #[error("eigensolver did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("singular decomposition: weight omega_{setting} vanishes on the state support")]
    SingularDecomposition { setting: usize },
    #[error("chain must contain at least one observer")]
    EmptyChain,
    #[error("closed-form values cover at most four observers (got {observers})")]
    BeyondClosedForms { observers: usize },
    #[error("local dimension {dim} outside the supported range [2, 8]")]
    UnsupportedDimension { dim: usize },
    #[error("Bell value {value} outside the feasible range (0, 6]")]
    InfeasibleTuple { value: f64 },
    #[error("range certification requires a violation by the first observer")]
    NoFirstViolation,
    #[error("step {step} leaves no grid points inside the violation region")]
    EmptyRegion { step: f64 },
    #[error("step {step} outside the allowed range {range}")]
    BadStep { step: f64, range: &'static str },
    #[error("eta3 = {eta3} lies below the admissible floor {floor:.6}")]
    Eta3BelowFloor { eta3: f64, floor: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;
