//! Exact bound-state spectrum of the vanishing well.
//!
//! Bound states are the zeros of
//!
//! ```text
//! S(E) = 1 - ((αβ + 2α₂q)/q) · F̃(α, β; 1+2α₂; 1/2) / F̃(α, β; 2α₂; 1/2)
//! ```
//!
//! with regularized Gauss functions `F̃ = 2F1/Γ(c)` and the plus branch of
//! both exponents. `S` also has poles; the scan keeps a sign change only when
//! `|S|` shrinks as the bracket is bisected. The number of levels is known in
//! advance from the zeros of the zero-energy solution.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::heun::{map_to_heun, Branch, HeunParams};
use crate::model::PhysParams;
use crate::specfun::{hyp2f1, hyp2f1_regularized, hyp3f2};
use crate::states::{bound_state_grid, bound_wavefunction, zero_energy_node_count};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyLevel {
    /// Ground state is 0.
    pub index: usize,
    pub energy: f64,
    /// `|S(E)|` at the refined root.
    pub spectral_residual: f64,
    pub node_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumResult {
    pub levels: Vec<EnergyLevel>,
    /// Asymptotic Chadan bound on the number of levels.
    pub chadan_bound: f64,
    /// Zero-energy node count, the exact number of levels.
    pub exact_count: usize,
    /// Energy window of the final scan.
    pub scan_window: (f64, f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumOptions {
    /// Roots are refined to `|ΔE| ≤ tol · max(1, |E|)`.
    pub tol: f64,
    /// Points of the initial scan grid.
    pub scan_points: usize,
    /// Widening/densification rounds before giving up.
    pub max_rounds: usize,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        SpectrumOptions {
            tol: 1e-10,
            scan_points: 400,
            max_rounds: 4,
        }
    }
}

/// One sample of `S(E)`; `value` is `None` at a pole or where the
/// evaluation failed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanSample {
    pub energy: f64,
    pub value: Option<f64>,
}

const HALF: f64 = 0.5;
const BISECT_REL: f64 = 1e-3;

fn plus_params(p: &PhysParams, energy: f64) -> Result<HeunParams> {
    p.require_vanishing_well()?;
    if !(energy < 0.0) || !energy.is_finite() {
        return Err(Error::Domain(format!(
            "spectral function needs E < 0, got {energy}"
        )));
    }
    Ok(map_to_heun(p, energy, Branch::Plus, Branch::Plus))
}

fn prefactor(h: &HeunParams) -> Complex64 {
    let q = h.q_h;
    (h.alpha_h * h.beta_h + 2.0 * h.alpha2 * q) / q
}

/// `(F̃(α,β;1+2α₂;½), F̃(α,β;2α₂;½))`.
fn regularized_pair(h: &HeunParams) -> Result<(Complex64, Complex64)> {
    let c = 2.0 * h.alpha2;
    let (top, _) = hyp2f1_regularized(h.alpha_h, h.beta_h, c + 1.0, HALF)?;
    let (bottom, _) = hyp2f1_regularized(h.alpha_h, h.beta_h, c, HALF)?;
    Ok((top, bottom))
}

/// The spectral function `S(E)` through regularized Gauss functions.
pub fn spectral_function(p: &PhysParams, energy: f64) -> Result<f64> {
    let h = plus_params(p, energy)?;
    let (top, bottom) = regularized_pair(&h)?;
    if bottom == Complex64::new(0.0, 0.0) {
        return Err(Error::Pole {
            function: "spectral_function",
            arg: Complex64::new(energy, 0.0),
        });
    }
    let s = 1.0 - prefactor(&h) * top / bottom;
    if !s.re.is_finite() {
        return Err(Error::Pole {
            function: "spectral_function",
            arg: Complex64::new(energy, 0.0),
        });
    }
    Ok(s.re)
}

/// Pole-free numerator `F̃(2α₂) - ((αβ+2α₂q)/q) F̃(1+2α₂)`; it vanishes
/// exactly where the bound-state wavefunction vanishes at the origin.
pub fn spectral_numerator(p: &PhysParams, energy: f64) -> Result<f64> {
    let h = plus_params(p, energy)?;
    let (top, bottom) = regularized_pair(&h)?;
    Ok((bottom - prefactor(&h) * top).re)
}

/// `S(E)` written with ordinary Gauss functions,
/// `1 - ((αβ+2α₂q)/q) · 2F1(α,β;1+2α₂;½) / (2α₂ · 2F1(α,β;2α₂;½))`.
/// Independent of the regularized path; fails where `2α₂` is a
/// non-positive integer.
pub fn spectral_function_plain(p: &PhysParams, energy: f64) -> Result<f64> {
    let h = plus_params(p, energy)?;
    let c = 2.0 * h.alpha2;
    let (top, _) = hyp2f1(h.alpha_h, h.beta_h, c + 1.0, HALF)?;
    let (bottom, _) = hyp2f1(h.alpha_h, h.beta_h, c, HALF)?;
    Ok((1.0 - prefactor(&h) * top / (c * bottom)).re)
}

/// Clausen form of the spectrum condition,
/// `3F2(α, β, 1-αβ/q; -αβ/q, δ; ½)`, whose zeros are the levels.
pub fn spectral_function_3f2(p: &PhysParams, energy: f64) -> Result<f64> {
    let h = plus_params(p, energy)?;
    let r = h.clausen_ratio()?;
    let (v, _) = hyp3f2(h.alpha_h, h.beta_h, 1.0 - r, -r, h.delta_h, HALF)?;
    Ok(v.re)
}

/// `2(√2 - 1) sqrt(m σ² V0 / ħ²)`, the asymptotic Chadan estimate of the
/// number of levels; zero for `V0 ≤ 0`.
pub fn chadan_bound(p: &PhysParams) -> f64 {
    0.5 * calogero_integral(p)
}

/// Calogero integral `(2/π) ∫ sqrt(2m|V|)/ħ dx` of the vanishing well, equal to
/// `4(√2 - 1) sqrt(m σ² V0 / ħ²)`.
pub fn calogero_integral(p: &PhysParams) -> f64 {
    if !(p.v0 > 0.0) {
        return 0.0;
    }
    4.0 * (2f64.sqrt() - 1.0) * (p.m * p.sigma * p.sigma * p.v0).sqrt() / p.hbar
}

/// `S(E)` on the given energies, in order. Poles and failures become `None`.
pub fn scan_spectral_function(p: &PhysParams, energies: &[f64]) -> Result<Vec<ScanSample>> {
    p.require_vanishing_well()?;
    Ok(energies
        .par_iter()
        .map(|&e| ScanSample {
            energy: e,
            value: spectral_function(p, e).ok(),
        })
        .collect())
}

/// Scan grid over dimensionless energies `[e_min, e_max]` (both negative):
/// uniform in `sqrt(-e)` plus a logarithmic stretch near zero.
fn scan_grid(e_min: f64, e_max: f64, n: usize) -> Vec<f64> {
    let (a, b) = ((-e_max).sqrt(), (-e_min).sqrt());
    let mut es: Vec<f64> = (0..=n)
        .map(|k| {
            let u = a + (b - a) * k as f64 / n as f64;
            -u * u
        })
        .collect();
    let top = (-e_max).ln();
    let bottom = 1f64.min(-e_min).ln();
    let m = n / 2;
    if bottom > top {
        for k in 0..=m {
            es.push(-(top + (bottom - top) * k as f64 / m as f64).exp());
        }
    }
    es.retain(|e| *e <= e_max && *e >= e_min);
    es.sort_by(|x, y| x.partial_cmp(y).unwrap());
    es.dedup_by(|x, y| (*x - *y).abs() <= 1e-15 * y.abs());
    es
}

enum Bracket {
    Root(f64, f64, f64),
    Pole,
}

/// Bisects a sign change of `S` down to relative width `1e-3` and decides
/// whether it encloses a root or a pole.
fn classify(p: &PhysParams, mut a: f64, mut b: f64, mut sa: f64, sb: f64) -> Bracket {
    let start = sa.abs().max(sb.abs());
    let mut last = start;
    while (b - a) > BISECT_REL * a.abs().max(b.abs()).max(1e-300) {
        let m = 0.5 * (a + b);
        let sm = match spectral_function(p, m) {
            Ok(v) => v,
            Err(_) => return Bracket::Pole,
        };
        last = sm.abs();
        if sm == 0.0 {
            return Bracket::Root(m, m, 0.0);
        }
        if sm.signum() == sa.signum() {
            a = m;
            sa = sm;
        } else {
            b = m;
        }
    }
    if last > start {
        Bracket::Pole
    } else {
        Bracket::Root(a, b, sa)
    }
}

/// Illinois false position on a pole-free bracket.
fn polish(p: &PhysParams, mut a: f64, mut b: f64, mut fa: f64, tol: f64) -> Result<f64> {
    let mut fb = spectral_function(p, b)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    let mut side = 0i32;
    for _ in 0..200 {
        let c = (a * fb - b * fa) / (fb - fa);
        let c = if c > a.min(b) && c < a.max(b) {
            c
        } else {
            0.5 * (a + b)
        };
        let fc = spectral_function(p, c)?;
        if fc == 0.0 {
            return Ok(c);
        }
        if fc.signum() == fb.signum() {
            b = c;
            fb = fc;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = c;
            fa = fc;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
        if (b - a).abs() <= tol * 1f64.max(c.abs()) {
            return Ok(if fa.abs() < fb.abs() { a } else { b });
        }
    }
    Err(Error::NonIsolation(format!(
        "root polish did not converge in [{a}, {b}]"
    )))
}

fn locate_roots(p: &PhysParams, energies: &[f64], tol: f64) -> Result<(Vec<f64>, String)> {
    let samples = scan_spectral_function(p, energies)?;
    let mut brackets = Vec::new();
    let mut poles = 0usize;
    let mut prev: Option<(f64, f64)> = None;
    for s in &samples {
        match s.value {
            Some(v) => {
                if let Some((e0, v0)) = prev {
                    if v == 0.0 {
                        brackets.push((s.energy, s.energy, 0.0, 0.0));
                    } else if v0.signum() != v.signum() && v0 != 0.0 {
                        brackets.push((e0, s.energy, v0, v));
                    }
                }
                prev = Some((s.energy, v));
            }
            None => prev = None,
        }
    }
    let found: Vec<Option<f64>> = brackets
        .par_iter()
        .map(|&(a, b, sa, sb)| {
            if a == b {
                return Ok(Some(a));
            }
            match classify(p, a, b, sa, sb) {
                Bracket::Pole => Ok(None),
                Bracket::Root(a, b, sa) if a == b || sa == 0.0 => Ok(Some(a)),
                Bracket::Root(a, b, sa) => polish(p, a, b, sa, tol).map(Some),
            }
        })
        .collect::<Result<_>>()?;
    let mut roots = Vec::new();
    for r in found {
        match r {
            Some(e) => roots.push(e),
            None => poles += 1,
        }
    }
    roots.sort_by(|x, y| x.partial_cmp(y).unwrap());
    roots.dedup_by(|x, y| (*x - *y).abs() <= 10.0 * tol * 1f64.max(y.abs()));
    let trace = format!(
        "window [{:.6e}, {:.6e}], {} points, {} sign changes, {} poles, roots {:?}",
        energies.first().copied().unwrap_or(f64::NAN),
        energies.last().copied().unwrap_or(f64::NAN),
        energies.len(),
        brackets.len(),
        poles,
        roots
    );
    Ok((roots, trace))
}

/// All bound-state energies, validated against the zero-energy node count
/// and the node count of each wavefunction.
pub fn find_spectrum(p: &PhysParams, opts: &SpectrumOptions) -> Result<SpectrumResult> {
    p.require_vanishing_well()?;
    if !(opts.tol > 0.0) {
        return Err(Error::Domain(format!(
            "tolerance must be positive, got {}",
            opts.tol
        )));
    }
    let expected = zero_energy_node_count(p)?;
    let s = p.energy_scale();
    let v = s * p.v0;
    let mut e_min = -2.0 * v - 10.0;
    let e_max = -1e-9;
    let mut n = opts.scan_points.max(16);
    let mut traces = Vec::new();
    let mut roots = Vec::new();
    for _ in 0..=opts.max_rounds {
        let grid: Vec<f64> = scan_grid(e_min, e_max, n)
            .into_iter()
            .map(|e| e / s)
            .collect();
        let (r, trace) = locate_roots(p, &grid, opts.tol)?;
        traces.push(trace);
        if r.len() == expected {
            roots = r;
            break;
        }
        e_min *= 2.0;
        n *= 2;
    }
    if roots.len() != expected {
        return Err(Error::CountMismatch {
            expected,
            found: roots.len(),
            trace: traces.join("; "),
        });
    }

    let grid = bound_state_grid(p, &roots);
    let levels = roots
        .par_iter()
        .enumerate()
        .map(|(index, &energy)| {
            let residual = spectral_function(p, energy)?.abs();
            let mut lvl = EnergyLevel {
                index,
                energy,
                spectral_residual: residual,
                node_count: 0,
            };
            let table = bound_wavefunction(p, &lvl, &grid)?;
            lvl.node_count = table.node_count();
            if lvl.node_count != index {
                return Err(Error::NonIsolation(format!(
                    "level {index} at E = {energy} has {} nodes",
                    lvl.node_count
                )));
            }
            Ok(lvl)
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(SpectrumResult {
        levels,
        chadan_bound: chadan_bound(p),
        exact_count: expected,
        scan_window: (e_min / s, e_max / s),
    })
}
