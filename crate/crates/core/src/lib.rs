//! Verification library for the computations behind vector-valued modular
//! forms on SO(3, n+1): symbolic c-functions with zero/pole bookkeeping,
//! K-Bessel Whittaker functions and the Schmid operator in coordinates,
//! Weyl-group walks, finite-field character sums and archimedean Fourier
//! transforms of degenerate sections.

pub mod cfunc;
pub mod fourier;
pub mod padic;
pub mod quad;
pub mod quadspace;
pub mod rng;
pub mod schmid;
pub mod special;
pub mod suites;
pub mod symbolic;
pub mod walk;

use num_bigint::BigInt;
use num_rational::BigRational;

pub type Q = BigRational;

/// Rational `n/d` from machine integers.
pub fn q(n: i64, d: i64) -> Q {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Integer as a rational.
pub fn qi(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("pole of gamma at {0}")]
    Pole(f64),
    #[error("series did not converge: {0}")]
    Convergence(String),
    #[error("value overflows f64")]
    EvaluationOverflow,
    #[error("linear factor with identically zero argument")]
    ZeroLinearFactor,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("eta is not admissible (zero or negative norm)")]
    EtaNotAdmissible,
    #[error("degenerate point: u_eta vanishes")]
    DegeneratePoint,
    #[error("function evaluation failed on stencil: {0}")]
    StencilFailure(String),
    #[error("equivariance violated by {0:e}")]
    EquivarianceViolation(f64),
    #[error("singular basis")]
    SingularBasis,
    #[error("unknown name: {0}")]
    UnknownName(String),
    #[error("enumeration of {needed} points exceeds budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("phase undefined at x2 = 0")]
    PhaseUndefined,
    #[error("ratio not constant: spread {0:e}")]
    NotConstant(f64),
    #[error("no rational with bounded denominator near {0}")]
    RationalizationFailed(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
