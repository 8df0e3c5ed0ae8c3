use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("pole of {function} at argument {arg}")]
    Pole {
        function: &'static str,
        arg: Complex64,
    },

    #[error("series did not converge after {terms} terms (tail bound {tail_bound:e})")]
    NonConvergence { terms: usize, tail_bound: f64 },

    #[error("degenerate parameter {name} = {value} (integer-degenerate within {window:e})")]
    Degenerate {
        name: &'static str,
        value: Complex64,
        window: f64,
    },

    #[error("expected {expected} roots but located {found}; scan trace: {trace}")]
    CountMismatch {
        expected: usize,
        found: usize,
        trace: String,
    },

    #[error("integrator failure: {0}")]
    Integrator(String),

    #[error("normalization failed: {0}")]
    Normalization(String),

    #[error("phase is not real: imaginary part {imag:e} at E = {energy}")]
    NonRealPhase { energy: f64, imag: f64 },

    #[error("far-field fit residual {residual:e} exceeds tolerance at E = {energy}")]
    FitResidual { energy: f64, residual: f64 },

    #[error("zero-energy node count did not stabilize: counts {counts:?}")]
    NonStabilization { counts: Vec<usize> },

    #[error("eigenvalue isolation failed: {0}")]
    NonIsolation(String),

    #[error("exceptional energy {energy}: {reason}")]
    Exceptional { energy: f64, reason: String },
}
