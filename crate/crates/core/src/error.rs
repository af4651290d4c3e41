use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("gram matrix is not symmetric")]
    NotSymmetric,

    #[error("class has non-positive square {0}; a class in the positive cone is required")]
    NotPositive(String),

    #[error("orthogonal complement of the reference class is not negative definite")]
    NotHyperbolic,

    #[error("matrix is not invertible over the integers")]
    NotUnimodular,

    #[error("matrix does not preserve the intersection form")]
    NotAnIsometry,

    #[error("invalid fan: {0}")]
    InvalidFan(String),

    #[error("unrealizable self-intersection sequence: {0}")]
    UnrealizableSequence(String),

    #[error("invalid blowup: {0}")]
    InvalidBlowup(String),

    #[error("invalid exceptional configuration: {0}")]
    InvalidConfiguration(String),

    #[error("divisor does not have multidegree zero on component {0}")]
    NonzeroMultidegree(usize),

    #[error("unsupported cycle length {0}; the lambda-invariant needs n >= 3")]
    UnsupportedCycleLength(usize),

    #[error("no exact root: {0}")]
    Obstruction(String),

    #[error("map does not fix boundary class {0}")]
    BoundaryNotPreserved(usize),

    #[error("class has square {0}; reflections need square -2")]
    NotARoot(i64),

    #[error("class is not in the positive cone")]
    OutsidePositiveCone,

    #[error("failed to certify an ample class within {0} attempts")]
    AmpleCertification(u32),

    #[error("iteration did not converge: {0}")]
    NonConvergence(String),

    #[error("total boundary class has square {0}, expected 0")]
    BoundaryNotIsotropic(i64),

    #[error("period point is defined on a lattice of rank {expected}, got {got}")]
    PeriodDomain { expected: usize, got: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
