//! Exact solution of the 1D stationary Schrödinger equation for the
//! short-range exponential well with an inverse square root singularity,
//!
//! ```text
//! V(x) = V0 + V1 / sqrt(1 - exp(-x/σ)),   x > 0.
//! ```
//!
//! The substitution `z = sqrt(1 - exp(-x/σ))` maps the Schrödinger equation
//! onto a general Heun equation whose singularity at `z = 0` is apparent, so
//! every solution is an irreducible two-term combination of Gauss functions
//! (equivalently a Clausen `3F2` with one upper parameter exceeding a lower
//! one by unity). On top of that the crate provides:
//!
//! * [`specfun`]: complex gamma, plain and regularized `2F1`, `3F2`;
//! * [`heun`]: the Heun parameter map and the fundamental solutions;
//! * [`spectrum`]: the exact spectral function, root isolation and counting
//!   bounds;
//! * [`states`]: normalized bound states and the zero-energy solution;
//! * [`scattering`]: asymptotic amplitudes and phase shifts for `E > 0`;
//! * [`oracle`]: an independent shooting solver used for validation;
//! * [`cli`]: the `sqrtwell` command line front end that emits table and
//!   figure data.
//!
//! ```
//! use sqrtwell::{PhysParams, spectrum::{find_spectrum, SpectrumOptions}};
//!
//! let p = PhysParams::new(1.0, 1.0, 4.0, 2.0).unwrap();
//! let spec = find_spectrum(&p, &SpectrumOptions::default()).unwrap();
//! assert_eq!(spec.levels.len(), 3);
//! assert!((spec.levels[0].energy + 2.168051138).abs() < 1e-7);
//! ```

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
mod error;
pub mod heun;
pub mod model;
pub mod ode;
pub mod oracle;
pub mod quad;
pub mod scattering;
pub mod specfun;
pub mod spectrum;
pub mod states;

pub use error::{Error, Result};
pub use model::PhysParams;
pub use num_complex::Complex64;

/// Complex scalar used throughout the special-function layer.
pub type ComplexValue = Complex64;
