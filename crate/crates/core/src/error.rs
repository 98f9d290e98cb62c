use thiserror::Error;

/// Errors raised anywhere in the decoupling pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by the zero polynomial")]
    DivisionByZeroPoly,

    #[error("division by the zero rational function")]
    DivisionByZeroFunction,

    #[error("gcd of two zero polynomials is undefined")]
    GcdOfZeros,

    #[error("polynomial division is not exact")]
    InexactDivision,

    #[error("evaluation at a pole (s = {re} + {im}j)")]
    EvaluationAtPole { re: f64, im: f64 },

    #[error("root finding needs a polynomial of degree >= 1")]
    DegreeTooLow,

    #[error("root finder did not converge after {iterations} iterations (residual {residual:e})")]
    RootsNotConverged { iterations: usize, residual: f64 },

    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("{op} requires a square matrix, got {rows}x{cols}")]
    NotSquare {
        op: &'static str,
        rows: usize,
        cols: usize,
    },

    #[error("matrix is not unimodular (determinant is not a nonzero constant)")]
    NotUnimodular,

    #[error("matrix is singular as a rational matrix")]
    Singular,

    #[error("plant has normal rank {rank} < {dim}")]
    RankDeficient { rank: usize, dim: usize },

    #[error("feedback loop is ill-posed: det(I + PC) is identically zero")]
    IllPosed,

    #[error("system is not stable: {0}")]
    Unstable(String),

    #[error("pole of order {order} exceeds the supported maximum of {max}")]
    PoleOrderTooHigh { order: usize, max: usize },

    #[error("rational function is not strictly proper")]
    NotStrictlyProper,

    #[error("relative degree {actual} is below the required {required}")]
    RelativeDegreeShortfall { required: i64, actual: i64 },

    #[error("infeasible design: {0}")]
    Infeasible(String),

    #[error("singular value iteration did not converge")]
    SvdNotConverged,

    #[error("invalid frequency grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
