//! Complex special functions: gamma, Gauss `2F1` (plain and regularized) and
//! Clausen `3F2`.
//!
//! The hypergeometric functions are summed directly as power series with a
//! rigorous geometric bound on the neglected tail, so they are restricted to
//! `|w| <= 0.75`. Every formula in this crate is arranged so that no larger
//! argument is ever needed.

mod gamma;
mod hyper;

pub use gamma::{cgamma, ln_cgamma, rgamma, sin_pi};
pub use hyper::{
    hyp2f1, hyp2f1_regularized, hyp2f1_regularized_with, hyp2f1_with, hyp3f2, hyp3f2_with,
    pfq_with, SeriesDiagnostics, SeriesOptions, MAX_ARGUMENT,
};

use num_complex::Complex64;

/// Distance below which a parameter counts as sitting on a non-positive
/// integer.
pub const POLE_WINDOW: f64 = 1e-12;

/// Returns the integer `-k` (`k >= 0`) that `w` lies within `window` of, if
/// any.
pub fn near_nonpositive_integer(w: Complex64, window: f64) -> Option<i64> {
    let r = w.re.round();
    if r <= 0.0 && (w.re - r).abs() <= window && w.im.abs() <= window {
        Some(r as i64)
    } else {
        None
    }
}
