use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the solvers in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },

    #[error("point {w} lies outside the analytic sector of half-angle {alpha}")]
    OutsideSector { w: Complex64, alpha: f64 },

    #[error("potential `{what}` is not analytic and cannot be evaluated at complex {w}")]
    NonAnalytic { what: String, w: Complex64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("adaptive scheme did not reach tolerance {tol:e} within {budget} subdivisions")]
    NonConvergence { tol: f64, budget: usize },

    #[error("supremum appears unbounded (still growing at v = {cutoff})")]
    Unbounded { cutoff: f64 },

    #[error("step size underflow at s = {at}")]
    StepUnderflow { at: f64 },

    #[error("maximum number of steps ({0}) exceeded")]
    MaxSteps(usize),

    #[error("Riccati variable exceeded the pole guard near s = {at} (|alpha| = {magnitude:e})")]
    RiccatiPole { at: f64, magnitude: f64 },

    #[error("decay condition fails: |V| e^(2 Re z x) still {residual:e} at the cutoff x = {cutoff}")]
    DecayViolation { cutoff: f64, residual: f64 },

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("root iteration did not converge after {iterations} iterations (last z = {last}, |r| = {residual:e})")]
    RootNonConvergence {
        iterations: usize,
        last: Complex64,
        residual: f64,
    },

    #[error("iterate {0} left the half-plane Re z > 0")]
    Escaped(Complex64),

    #[error("residual vanishes on the contour near {0}")]
    ZeroOnContour(Complex64),

    #[error("the two roots collapsed onto {0}")]
    Collapse(Complex64),

    #[error("denominator too small: {0:e}")]
    SmallDenominator(f64),

    #[error("unsupported problem: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
