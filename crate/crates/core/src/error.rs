use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("coincident knots unsupported")]
    CoincidentKnots,

    #[error("knots must be finite and strictly increasing")]
    KnotsNotIncreasing,

    #[error("a spline needs at least {min} knots, got {got}")]
    TooFewKnots { min: usize, got: usize },

    #[error("spline order {order} exceeds the supported maximum {max}")]
    OrderTooLarge { order: usize, max: usize },

    #[error("zero or negative knot collides under reflection")]
    ReflectedKnotCollision,

    #[error("knot window [{start}, {start}+{len}] out of range for {available} coordinates")]
    KnotWindowOutOfRange {
        start: usize,
        len: usize,
        available: usize,
    },

    #[error("derivative of order-2 spline is distributional")]
    DistributionalDerivative,

    #[error("degenerate evaluation point")]
    DegenerateEvaluationPoint,

    #[error(
        "invalid orbit coordinates: {0} (perturb coincident or zero entries by a small epsilon)"
    )]
    InvalidOrbit(String),

    #[error("projection index must satisfy k < n (got k = {k}, n = {n})")]
    ProjectionIndex { n: usize, k: usize },

    #[error("expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("input not in expected algebra")]
    NotInAlgebra,

    #[error("missing parameter: {0}")]
    MissingParameter(&'static str),

    #[error("non-finite coordinate")]
    NonFinite,

    #[error("unknown series {0:?}; expected one of B, C, D")]
    UnknownSeries(String),
}
