use thiserror::Error;

use crate::inequalities::ClaimId;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{function}: argument {value} outside the domain (0, inf)")]
    Domain { function: &'static str, value: f64 },

    #[error("unsupported polygamma order {0} (supported: 0..=3)")]
    UnsupportedOrder(u8),

    #[error("Bernoulli index {0} out of range (0..=12)")]
    BernoulliRange(usize),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("division by an interval containing zero: [{lo}, {hi}]")]
    DivisionByZero { lo: f64, hi: f64 },

    #[error("logarithm of a non-positive interval: [{lo}, {hi}]")]
    LogNonPositive { lo: f64, hi: f64 },

    #[error("interval result is not finite")]
    Overflow,

    #[error("harmonic mean with degenerate denominator a + b = {0}")]
    DegenerateDenominator(f64),

    #[error("quadrature did not converge: error estimate {err_estimate:e} above tolerance {tol:e} after {evaluations} evaluations")]
    NonConvergence {
        err_estimate: f64,
        tol: f64,
        evaluations: usize,
    },

    #[error("{0} is a monotonicity claim and needs a pair of points")]
    PairwiseClaim(ClaimId),

    #[error("{0} cannot be certified with interval arithmetic")]
    NotCertifiable(ClaimId),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid scan grid: {0}")]
    Grid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
