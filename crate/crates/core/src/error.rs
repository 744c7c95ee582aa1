use thiserror::Error;

use num_complex::Complex64;

/// Errors raised by the numerical routines.
///
/// Every variant is a domain error from the CLI's point of view (exit status 1);
/// usage errors are handled by the argument parser before any of this runs.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate critical parameter c = {0}: c must stay away from 0, 1 and -1")]
    DegenerateParameter(Complex64),

    #[error("z = {0} is a pole of the map")]
    Pole(Complex64),

    #[error("c = {0} lies outside the parameter region U (|t| <= 1)")]
    OutsideRegion(Complex64),

    #[error("root labeling failed: |p| = {p_abs}, |q| = {q_abs} do not straddle the unit circle")]
    Labeling { p_abs: f64, q_abs: f64 },

    #[error("Moebius map does not normalize the map: {0}")]
    NonNormalizing(String),

    #[error("circle restriction is not a homeomorphism (min T' = {min_derivative:e})")]
    NotHomeomorphism { min_derivative: f64 },

    #[error("rotation number is not monotone in the prefactor near t = {t}")]
    NonMonotone { t: f64 },

    #[error("tuning did not converge after {depth} bisections; bracket [{lo}, {hi}]")]
    TuningNonConvergence { depth: usize, lo: f64, hi: f64 },

    #[error("orbit escaped at iterate {iterate}")]
    Escape { iterate: usize },

    #[error("finite critical orbit: iterates {first} and {second} coincide")]
    FiniteOrbit { first: usize, second: usize },

    #[error("coincident points in cross ratio")]
    CoincidentPoints,

    #[error("index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("power iteration did not converge after {iterations} squarings (bound gap {gap:e})")]
    EigenNonConvergence { iterations: usize, gap: f64 },

    #[error("i/o error: {0}")]
    Io(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
