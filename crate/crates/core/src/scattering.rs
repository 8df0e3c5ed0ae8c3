//! Scattering states for `E > 0`.
//!
//! With `ψ = (1+z)^{α₁}(1-z)^{α₂}(c₁u₁ + c₂u₂)`, the origin condition fixes
//! `c₂/c₁`, and continuing `u₁` to `z → 1` gives the far field
//! `ψ ∝ A e^{-iκx} + B e^{+iκx}` with
//!
//! ```text
//! A = c₂/c₁ - (α₁+α₂) Γ(1+2α₁) Γ(-2α₂) / (Γ(1-α+2α₁) Γ(1+α-2α₂))
//! B = 16^{α₂} (α₂-α₁) Γ(1+2α₁) Γ(2α₂) / (Γ(1+α) Γ(1-α+2α₁+2α₂))
//! ```
//!
//! where `α₂ = -iκσ` is imaginary. The phase `δ = Re((i/2) ln(A/B))` is
//! reported in `(-π/2, π/2]`; it jumps by `π` wherever `A = -B`.
//!
//! `δ` is referenced to `cos(κx)`: `ψ ∝ cos(κx - δ)`. The conventional phase
//! relative to the free solution `sin(κx)` is `δ - π/2` modulo `π`, exposed
//! as [`PhaseShiftPoint::standard_phase`].

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::heun::{self, map_to_heun, Branch, HeunParams};
use crate::model::PhysParams;
use crate::oracle::reduce_half_pi;
use crate::specfun::ln_cgamma;
use crate::states::zero_energy_node_count;
use crate::{Error, Result};

/// Accepted `|Im((i/2) ln(A/B))|`.
pub const REALITY_TOL: f64 = 1e-8;
/// Below this `|u₂(0)|` the origin condition is treated as exceptional.
pub const EXCEPTIONAL_DENOMINATOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseShiftPoint {
    pub energy: f64,
    /// Physical wavenumber `sqrt(2mE)/ħ`.
    pub k: f64,
    /// The σ-scaled wavenumber `sqrt(mσ²E/2ħ²) = κσ/2`.
    pub k_scaled: f64,
    /// Phase in `(-π/2, π/2]`.
    pub delta: f64,
    /// Imaginary part of `(i/2) ln(A/B)`, a diagnostic.
    pub delta_imag: f64,
    pub a: Complex64,
    pub b: Complex64,
}

impl PhaseShiftPoint {
    /// Phase relative to the free solution `sin(κx)`, in `(-π/2, π/2]`.
    pub fn standard_phase(&self) -> f64 {
        reduce_half_pi(self.delta - PI / 2.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseShiftCurve {
    pub points: Vec<PhaseShiftPoint>,
    /// Energies where `A = -B` and the reported phase jumps by `π`.
    pub jumps: Vec<f64>,
    /// `δ` unwrapped along the grid.
    pub unwrapped: Vec<f64>,
}

fn scattering_params(p: &PhysParams, energy: f64) -> Result<HeunParams> {
    p.require_vanishing_well()?;
    if !(energy > 0.0) || !energy.is_finite() {
        return Err(Error::Domain(format!(
            "scattering needs E > 0, got {energy}"
        )));
    }
    Ok(map_to_heun(p, energy, Branch::Plus, Branch::Plus))
}

/// `c₂/c₁ = -u₁(0)/u₂(0)` from the Gauss-combination route (Clausen
/// normalization).
pub fn origin_coefficient_ratio(p: &PhysParams, energy: f64) -> Result<Complex64> {
    let h = scattering_params(p, energy)?;
    ratio_from(energy, heun::u1(&h, 0.0)?, heun::u2(&h, 0.0)?)
}

/// [`origin_coefficient_ratio`] evaluated through the Clausen `3F2` series.
pub fn origin_coefficient_ratio_clausen(p: &PhysParams, energy: f64) -> Result<Complex64> {
    let h = scattering_params(p, energy)?;
    ratio_from(
        energy,
        heun::u1_clausen(&h, 0.0)?,
        heun::u2_clausen(&h, 0.0)?,
    )
}

fn ratio_from(energy: f64, u1: Complex64, u2: Complex64) -> Result<Complex64> {
    if u2.norm() < EXCEPTIONAL_DENOMINATOR {
        return Err(Error::Exceptional {
            energy,
            reason: format!("u2(0) = {u2} is numerically zero"),
        });
    }
    Ok(-u1 / u2)
}

/// Far-field amplitudes `(A, B)`.
pub fn asymptotic_amplitudes(p: &PhysParams, energy: f64) -> Result<(Complex64, Complex64)> {
    let h = scattering_params(p, energy)?;
    let ratio = ratio_from(energy, heun::u1(&h, 0.0)?, heun::u2(&h, 0.0)?)?;
    let (a1, a2, al) = (h.alpha1, h.alpha2, h.alpha_h);
    let one = Complex64::new(1.0, 0.0);
    let g_a = ln_cgamma(one + 2.0 * a1)? + ln_cgamma(-2.0 * a2)?
        - ln_cgamma(one - al + 2.0 * a1)?
        - ln_cgamma(one + al - 2.0 * a2)?;
    let a = ratio - (a1 + a2) * g_a.exp();
    let g_b = a2 * 16f64.ln() + ln_cgamma(one + 2.0 * a1)? + ln_cgamma(2.0 * a2)?
        - ln_cgamma(one + al)?
        - ln_cgamma(one - al + 2.0 * a1 + 2.0 * a2)?;
    let b = (a2 - a1) * g_b.exp();
    Ok((a, b))
}

/// Phase shift at one energy.
pub fn phase_shift(p: &PhysParams, energy: f64) -> Result<PhaseShiftPoint> {
    let (a, b) = asymptotic_amplitudes(p, energy)?;
    if a.norm() == 0.0 || b.norm() == 0.0 {
        return Err(Error::Exceptional {
            energy,
            reason: "vanishing far-field amplitude".into(),
        });
    }
    let raw = 0.5 * Complex64::i() * (a / b).ln();
    if raw.im.abs() > REALITY_TOL {
        return Err(Error::NonRealPhase {
            energy,
            imag: raw.im,
        });
    }
    let k = p.wavenumber(energy);
    Ok(PhaseShiftPoint {
        energy,
        k,
        k_scaled: 0.5 * k * p.sigma,
        delta: reduce_half_pi(raw.re),
        delta_imag: raw.im,
        a,
        b,
    })
}

/// `arg(-A/B)`, which passes through zero at every jump.
fn jump_indicator(p: &PhysParams, energy: f64) -> Result<f64> {
    let (a, b) = asymptotic_amplitudes(p, energy)?;
    Ok((-a / b).arg())
}

/// Bisects `arg(-A/B)` on `[lo, hi]` down to relative width `1e-13`.
fn localize_jump(p: &PhysParams, mut lo: f64, mut hi: f64) -> Result<f64> {
    let mut f_lo = jump_indicator(p, lo)?;
    for _ in 0..200 {
        if hi - lo <= 1e-13 * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let f_mid = jump_indicator(p, mid)?;
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

const MAX_HOP_RATIO: f64 = 1.25;

/// Brackets `(lo, hi, sign of the hop)` of the `π` hops of the reduced phase
/// on `[lo, hi]`. Intervals wider than a factor `MAX_HOP_RATIO` or over which
/// the phase moves by more than `π/4` are subdivided until every hop is
/// isolated, so a coarse grid can neither mistake a smooth rise for a jump nor
/// hide a jump behind one.
fn hops_between(
    p: &PhysParams,
    (lo, d_lo): (f64, f64),
    (hi, d_hi): (f64, f64),
    depth: usize,
) -> Result<Vec<(f64, f64, f64)>> {
    let step = d_hi - d_lo;
    if hi <= MAX_HOP_RATIO * lo && step.abs() <= PI / 4.0 {
        return Ok(Vec::new());
    }
    if depth >= 40 || hi - lo <= 1e-10 * hi {
        return Ok(if step.abs() > PI / 2.0 {
            vec![(lo, hi, step.signum())]
        } else {
            Vec::new()
        });
    }
    let mid = (lo * hi).sqrt();
    let d_mid = phase_shift(p, mid)?.delta;
    let mut out = hops_between(p, (lo, d_lo), (mid, d_mid), depth + 1)?;
    out.extend(hops_between(p, (mid, d_mid), (hi, d_hi), depth + 1)?);
    Ok(out)
}

/// Phase shifts on an increasing grid of positive energies, with every
/// `π` jump located and the jump count checked against the number of bound
/// states minus one.
pub fn phase_shift_curve(p: &PhysParams, grid: &[f64]) -> Result<PhaseShiftCurve> {
    p.require_vanishing_well()?;
    if grid.is_empty() || !(grid[0] > 0.0) || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain(
            "energy grid must be positive and increasing".into(),
        ));
    }
    let points = grid
        .par_iter()
        .map(|&e| phase_shift(p, e))
        .collect::<Result<Vec<_>>>()?;

    let hops = points
        .par_windows(2)
        .map(|w| hops_between(p, (w[0].energy, w[0].delta), (w[1].energy, w[1].delta), 0))
        .collect::<Result<Vec<_>>>()?;
    let mut unwrapped = Vec::with_capacity(points.len());
    let mut jumps = Vec::new();
    let mut offset = 0.0;
    for (i, pt) in points.iter().enumerate() {
        if i > 0 {
            for &(lo, hi, dir) in &hops[i - 1] {
                offset -= PI * dir;
                jumps.push((lo, hi));
            }
        }
        unwrapped.push(pt.delta + offset);
    }
    let jumps = jumps
        .par_iter()
        .map(|&(lo, hi)| localize_jump(p, lo, hi))
        .collect::<Result<Vec<_>>>()?;

    let bound = zero_energy_node_count(p)?;
    let expected = bound.saturating_sub(1);
    if jumps.len() != expected {
        return Err(Error::CountMismatch {
            expected,
            found: jumps.len(),
            trace: format!("jumps at {jumps:?}; zero-energy node count {bound}"),
        });
    }
    Ok(PhaseShiftCurve {
        points,
        jumps,
        unwrapped,
    })
}

/// Geometric energy grid on `[e_lo, e_hi]` with `n` points.
pub fn log_energy_grid(e_lo: f64, e_hi: f64, n: usize) -> Vec<f64> {
    let n = n.max(2);
    let (a, b) = (e_lo.ln(), e_hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Default sweep: `[1e-3, max(50, 10 V0)]`, dense enough to resolve every
/// jump of the reference wells.
pub fn default_energy_grid(p: &PhysParams) -> Vec<f64> {
    log_energy_grid(1e-3, (10.0 * p.v0).max(50.0), 600)
}
