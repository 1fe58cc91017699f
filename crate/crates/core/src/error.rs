use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    #[error("bath exponent s = {s} lies within 1e-3 of an integer; the level-shift prefactor is singular")]
    IntegerExponent { s: f64 },

    #[error("retarded block is singular at omega = {omega} (|det| = {det:e}); the system sits at the critical point")]
    Singular { omega: f64, det: f64 },

    #[error("correlation spectrum has imaginary part {imag:e} at omega = {omega}")]
    NonRealSpectrum { omega: f64, imag: f64 },

    #[error("pole search did not converge after {iterations} iterations (last z = {last}, |det| = {residual:e})")]
    NoConvergence {
        iterations: usize,
        last: Complex64,
        residual: f64,
    },

    #[error("pole search left the lower half plane at z = {z}")]
    BranchCrossing { z: Complex64 },

    #[error("soft-mode continuation failed at y = {y}: {source}")]
    Continuation {
        y: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("quadrature error estimate {error:e} exceeds tolerance {tolerance:e} after {subdivisions} subdivisions")]
    QuadratureFailure {
        error: f64,
        tolerance: f64,
        subdivisions: usize,
    },

    #[error("excitation number grows only by a factor {ratio:.4} across the fit window; fluctuations stay finite at the critical point")]
    NotDiverging { ratio: f64 },

    #[error("discretized bath is unstable: y = {y} is not below the effective critical coupling {y_c}")]
    LyapunovSingular { y: f64, y_c: f64 },
}

impl Error {
    /// True for errors caused by bad input rather than a numerical failure.
    pub fn is_validation(&self) -> bool {
        matches!(self, Error::InvalidParams(_) | Error::IntegerExponent { .. })
    }
}
