//! Bound-state wavefunctions, their normalization and node structure, and
//! the zero-energy solution whose zeros count the bound states.
//!
//! Bound states use `ψ = (1+z)^{α₁} (1-z)^{α₂} u₂(z)` with the plus branch of
//! both exponents; the series argument `(1-z)/2` never exceeds `1/2`, so one
//! representation covers the whole half-line. Far out `(1-z)^{α₂}` behaves
//! like `2^{-α₂} e^{-α₂ x/σ}`, which fixes the analytic tail of the norm.
//!
//! The zero-energy solution is the solution of the Heun equation that
//! belongs to the exponent 2 at the apparent singularity `z = 0`, which is
//! the one vanishing at the origin. It equals the conventional combination
//! `c₁ (1+z)^{α₁} u₁ + c₂ (1+z)^{-α₁} u₂` up to scale (kept as
//! [`zero_energy_combination`] for cross-checks), but its power series stays
//! well conditioned for deep wells. Because the solution diverges
//! logarithmically at `z = 1`, the series is used up to a switch point and
//! the ODE is integrated beyond it.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::heun::{self, map_to_heun, Branch, HeunParams};
use crate::model::PhysParams;
use crate::ode::{integrate, StepControl};
use crate::quad::{graded_grid, simpson_with_estimate};
use crate::spectrum::EnergyLevel;
use crate::{Error, Result};

/// Relative Simpson error estimate accepted by [`normalize`].
pub const QUADRATURE_TOL: f64 = 1e-8;
/// Relative size of the analytic tail accepted by [`bound_wavefunction`].
pub const TAIL_TOL: f64 = 1e-10;
/// Samples smaller than this fraction of `max|ψ|` do not count as crossings.
pub const ZERO_TOUCH: f64 = 1e-12;
/// Default `z` at which the zero-energy solution switches to the ODE.
pub const ZERO_ENERGY_SWITCH: f64 = 0.5;

const NODE_TOL_SIGMA: f64 = 1e-8;
const MAX_NODE_ROUNDS: usize = 5;

/// Which solution a table holds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StateLabel {
    Bound(EnergyLevel),
    ZeroEnergy,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sample {
    pub x: f64,
    pub z: f64,
    pub psi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WavefunctionTable {
    pub level: StateLabel,
    pub samples: Vec<Sample>,
    /// `∫ψ² dx` of the samples before scaling; `None` for the
    /// non-normalizable zero-energy solution.
    pub norm: Option<f64>,
    /// Interior zeros, refined to `1e-8 σ` when the table was built from an
    /// analytic solution.
    pub nodes: Vec<f64>,
    /// Exponential decay rate `α₂/σ` of a bound state.
    pub decay_rate: Option<f64>,
}

impl WavefunctionTable {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn xs(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.x).collect()
    }

    pub fn psis(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.psi).collect()
    }
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Domain("grid must not be empty".into()));
    }
    if !(grid[0] > 0.0) || !grid.iter().all(|x| x.is_finite()) {
        return Err(Error::Domain(
            "grid points must be finite and positive".into(),
        ));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain("grid must be strictly increasing".into()));
    }
    Ok(())
}

/// Classical turning point `V(x) = E` of the vanishing well for `E < 0`.
fn turning_point(p: &PhysParams, energy: f64) -> f64 {
    let r = 1.0 + energy.abs() / p.v0;
    let u = 1.0 - 1.0 / (r * r);
    -p.sigma * u.ln()
}

/// Shared quadrature grid for the bound states at `energies`: quadratic
/// grading on `(0, σ]`, fine uniform spacing through the classically allowed
/// region and a coarser stretch over the exponential tails.
pub fn bound_state_grid(p: &PhysParams, energies: &[f64]) -> Vec<f64> {
    let s = p.energy_scale();
    let mut x_turn = 0.0f64;
    let mut x_end = 0.0f64;
    let mut e_top = f64::NEG_INFINITY;
    for &e in energies {
        let xt = turning_point(p, e);
        let a2 = (-s * e).sqrt();
        x_turn = x_turn.max(xt);
        x_end = x_end.max(xt + 22.0 * p.sigma / a2);
        e_top = e_top.max(e);
    }
    let x_fine = (x_turn + 3.0 * p.sigma).max(4.0 * p.sigma);
    let x_end = x_end.max(x_fine + p.sigma);
    // largest local wavenumber beyond σ, where the well is deepest
    let k_max = (p.kinetic_factor() * (e_top - p.potential_unchecked(p.sigma)).max(0.0)).sqrt();
    let fine = (p.sigma / 200.0).min(if k_max > 0.0 {
        0.02 / k_max
    } else {
        f64::INFINITY
    });
    graded_grid(p.sigma, 512, &[(x_fine, fine), (x_end, p.sigma / 40.0)])
}

/// Grid for the zero-energy solution up to `x_max`; `refine` doubles the
/// density per unit.
pub fn zero_energy_grid(p: &PhysParams, x_max: f64, refine: u32) -> Vec<f64> {
    let f = 2f64.powi(refine as i32);
    graded_grid(
        p.sigma,
        (256.0 * f) as usize,
        &[(x_max, p.sigma / (20.0 * f))],
    )
}

/// Analytic bound-state solution with a fixed overall scale.
struct BoundEval {
    p: PhysParams,
    h: HeunParams,
    scale: f64,
}

impl BoundEval {
    fn new(p: &PhysParams, energy: f64) -> Result<Self> {
        p.require_vanishing_well()?;
        if !(energy < 0.0) {
            return Err(Error::Domain(format!(
                "bound states need E < 0, got {energy}"
            )));
        }
        Ok(BoundEval {
            p: *p,
            h: map_to_heun(p, energy, Branch::Plus, Branch::Plus),
            scale: 1.0,
        })
    }

    fn raw(&self, x: f64) -> Result<f64> {
        let z = self.p.coord_map(x)?;
        let (l1p, l1m) = self.p.log_coords(x)?;
        let pre = heun::prefactor_from_logs(&self.h, l1p, l1m);
        if pre.norm() == 0.0 {
            return Ok(0.0);
        }
        Ok((pre * heun::u2_gauss_combo(&self.h, z)?).re)
    }

    fn eval(&self, x: f64) -> Result<f64> {
        Ok(self.scale * self.raw(x)?)
    }

    fn decay_rate(&self) -> f64 {
        self.h.alpha2.re / self.p.sigma
    }
}

fn evaluate_on<F>(grid: &[f64], f: F) -> Result<Vec<f64>>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    grid.par_iter().map(|&x| f(x)).collect()
}

/// Indices `i` with a strict sign change between samples `i` and `j > i`,
/// skipping samples that merely touch zero.
fn sign_change_brackets(psi: &[f64]) -> Vec<(usize, usize)> {
    let peak = psi.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let floor = ZERO_TOUCH * peak;
    let mut out = Vec::new();
    let mut last: Option<usize> = None;
    for (i, &v) in psi.iter().enumerate() {
        if v.abs() <= floor {
            continue;
        }
        if let Some(j) = last {
            if psi[j].signum() != v.signum() {
                out.push((j, i));
            }
        }
        last = Some(i);
    }
    out
}

fn bisect_node<F>(mut a: f64, mut b: f64, mut fa: f64, tol: f64, f: F) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    while b - a > tol {
        let m = 0.5 * (a + b);
        let fm = f(m)?;
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

fn refine_nodes<F>(xs: &[f64], psi: &[f64], tol: f64, f: F) -> Result<Vec<f64>>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    sign_change_brackets(psi)
        .par_iter()
        .map(|&(i, j)| bisect_node(xs[i], xs[j], psi[i], tol, &f))
        .collect()
}

/// `(∫₀^X ψ² dx, Simpson error estimate, analytic tail beyond X)` with the
/// origin (where `ψ = 0`) prepended to the samples.
fn norm_parts(xs: &[f64], psi: &[f64], decay_rate: f64) -> Result<(f64, f64, f64)> {
    let mut qx = Vec::with_capacity(xs.len() + 1);
    let mut qy = Vec::with_capacity(xs.len() + 1);
    qx.push(0.0);
    qy.push(0.0);
    qx.extend_from_slice(xs);
    qy.extend(psi.iter().map(|v| v * v));
    let (body, est) = simpson_with_estimate(&qx, &qy)
        .map_err(|e| Error::Normalization(format!("insufficient grid: {e}")))?;
    let last = *psi.last().unwrap_or(&0.0);
    let tail = last * last / (2.0 * decay_rate);
    Ok((body, est, tail))
}

/// Normalized bound state of `lvl` sampled on `grid`.
///
/// The norm is computed on an internal grid adapted to the level, so any
/// sampling grid yields a unit-norm table. The sign is fixed so that `ψ > 0`
/// just right of the origin.
pub fn bound_wavefunction(
    p: &PhysParams,
    lvl: &EnergyLevel,
    grid: &[f64],
) -> Result<WavefunctionTable> {
    check_grid(grid)?;
    let mut ev = BoundEval::new(p, lvl.energy)?;
    let qgrid = bound_state_grid(p, &[lvl.energy]);
    let qpsi = evaluate_on(&qgrid, |x| ev.raw(x))?;
    let (body, est, tail) = norm_parts(&qgrid, &qpsi, ev.decay_rate())?;
    let norm = body + tail;
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(Error::Normalization(format!("non-positive norm {norm}")));
    }
    if est > QUADRATURE_TOL * norm || tail > TAIL_TOL * norm {
        return Err(Error::Normalization(format!(
            "quadrature estimate {est:e}, tail {tail:e} for norm {norm:e}"
        )));
    }
    let first = qpsi
        .iter()
        .find(|v| v.abs() > 0.0)
        .copied()
        .ok_or_else(|| Error::Normalization("wavefunction vanishes identically".into()))?;
    ev.scale = first.signum() / norm.sqrt();

    let psi = evaluate_on(grid, |x| ev.eval(x))?;
    let nodes = refine_nodes(grid, &psi, NODE_TOL_SIGMA * p.sigma, |x| ev.eval(x))?;
    let samples = grid
        .iter()
        .zip(&psi)
        .map(|(&x, &v)| {
            Ok(Sample {
                x,
                z: p.coord_map(x)?,
                psi: v,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(WavefunctionTable {
        level: StateLabel::Bound(*lvl),
        samples,
        norm: Some(norm),
        nodes,
        decay_rate: Some(ev.decay_rate()),
    })
}

/// Bound states of several levels on the grid shared by all of them.
pub fn bound_wavefunctions(
    p: &PhysParams,
    levels: &[EnergyLevel],
) -> Result<Vec<WavefunctionTable>> {
    let energies: Vec<f64> = levels.iter().map(|l| l.energy).collect();
    let grid = bound_state_grid(p, &energies);
    levels
        .iter()
        .map(|l| bound_wavefunction(p, l, &grid))
        .collect()
}

/// Rescales a bound-state table to unit norm using the table's own samples
/// plus the analytic tail `ψ(X)² σ / (2α₂)`.
///
/// Needs a multiple of four intervals once the origin is prepended (the
/// grids from [`bound_state_grid`] qualify).
pub fn normalize(table: &WavefunctionTable) -> Result<WavefunctionTable> {
    let rate = table
        .decay_rate
        .ok_or_else(|| Error::Normalization("zero-energy solution is not normalizable".into()))?;
    let xs = table.xs();
    check_grid(&xs)?;
    let psi = table.psis();
    let (body, est, tail) = norm_parts(&xs, &psi, rate)?;
    let norm = body + tail;
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(Error::Normalization(format!("non-positive norm {norm}")));
    }
    if est > QUADRATURE_TOL * norm {
        return Err(Error::Normalization(format!(
            "insufficient grid: quadrature estimate {est:e} for norm {norm:e}"
        )));
    }
    let scale = 1.0 / norm.sqrt();
    let mut out = table.clone();
    for s in &mut out.samples {
        s.psi *= scale;
    }
    out.norm = Some(norm);
    Ok(out)
}

/// `∫ψ_a ψ_b dx` for two tables on the same grid, with the product of the
/// analytic tails added.
pub fn overlap(a: &WavefunctionTable, b: &WavefunctionTable) -> Result<f64> {
    if a.samples.len() != b.samples.len()
        || a.samples.iter().zip(&b.samples).any(|(s, t)| s.x != t.x)
    {
        return Err(Error::Domain(
            "overlap needs tables on a shared grid".into(),
        ));
    }
    let (ra, rb) = match (a.decay_rate, b.decay_rate) {
        (Some(ra), Some(rb)) => (ra, rb),
        _ => return Err(Error::Domain("overlap needs bound states".into())),
    };
    let mut qx = vec![0.0];
    let mut qy = vec![0.0];
    for (s, t) in a.samples.iter().zip(&b.samples) {
        qx.push(s.x);
        qy.push(s.psi * t.psi);
    }
    let (body, _) = simpson_with_estimate(&qx, &qy)?;
    let (la, lb) = (a.samples.last().unwrap().psi, b.samples.last().unwrap().psi);
    Ok(body + la * lb / (ra + rb))
}

/// Zero-energy solution fixed by `ψ(0) = 0`: series for `z ≤ z_switch`,
/// ODE continuation beyond.
struct ZeroEnergy {
    p: PhysParams,
    hm: HeunParams,
    scale: f64,
    x_switch: f64,
}

impl ZeroEnergy {
    fn new(p: &PhysParams, z_switch: f64) -> Result<Self> {
        p.require_vanishing_well()?;
        if !(z_switch > 0.0 && z_switch <= 0.5) {
            return Err(Error::Domain(format!(
                "switch point must lie in (0, 0.5], got {z_switch}"
            )));
        }
        Ok(ZeroEnergy {
            p: *p,
            hm: map_to_heun(p, 0.0, Branch::Minus, Branch::Plus),
            scale: 1.0,
            x_switch: p.coord_inverse(z_switch)?,
        })
    }

    /// `(ψ, dψ/dx)` from the series, valid for `x ≤ x_switch`.
    ///
    /// Uses the prefactor `(1+z)^{-α₁}` of the minus branch, with which the
    /// origin series stays well conditioned for deep wells.
    fn analytic_with_derivative(&self, x: f64) -> Result<(f64, f64)> {
        let z = self.p.coord_map(x)?;
        let a = self.hm.alpha1.re;
        let g = (a * z.ln_1p()).exp();
        let (u, du) = heun::origin_solution(&self.hm, z)?;
        let psi = g * u.re;
        let dz = g * (a / (1.0 + z) * u.re + du.re);
        // dz/dx = (1 - z²)/(2σz), while u carries a factor z²
        let dx = if z > 0.0 {
            dz * (1.0 - z * z) / (2.0 * self.p.sigma * z)
        } else {
            0.0
        };
        Ok((self.scale * psi, self.scale * dx))
    }

    fn rhs(&self) -> impl Fn(f64, &[f64; 2]) -> [f64; 2] + '_ {
        let kin = self.p.kinetic_factor();
        move |x, y| [y[1], kin * self.p.potential_unchecked(x) * y[0]]
    }

    fn step_control(&self) -> StepControl {
        StepControl {
            rtol: 1e-12,
            atol: 1e-300,
            ..Default::default()
        }
    }

    /// Values and derivatives on an increasing grid; `None` derivative
    /// marks points evaluated from the series.
    fn sweep(&self, grid: &[f64]) -> Result<Vec<(f64, Option<[f64; 2]>)>> {
        let split = grid.partition_point(|&x| x <= self.x_switch);
        let head = evaluate_on(&grid[..split], |x| Ok(self.analytic_with_derivative(x)?.0))?;
        let mut out: Vec<(f64, Option<[f64; 2]>)> = head.into_iter().map(|v| (v, None)).collect();
        if split == grid.len() {
            return Ok(out);
        }
        let (v, d) = self.analytic_with_derivative(self.x_switch)?;
        let mut state = [v, d];
        let mut x = self.x_switch;
        let ctl = self.step_control();
        let f = self.rhs();
        for &xn in &grid[split..] {
            let (_, y) = integrate(&f, x, state, xn, &ctl, |_, _| true)?;
            state = y;
            x = xn;
            out.push((y[0], Some(y)));
        }
        Ok(out)
    }

    fn continued(&self, x_from: f64, y: [f64; 2], x: f64) -> Result<f64> {
        let (_, y) = integrate(self.rhs(), x_from, y, x, &self.step_control(), |_, _| true)?;
        Ok(y[0])
    }
}

fn zero_energy_table(ze: &ZeroEnergy, p: &PhysParams, grid: &[f64]) -> Result<WavefunctionTable> {
    let swept = ze.sweep(grid)?;
    let psi: Vec<f64> = swept.iter().map(|s| s.0).collect();
    let tol = NODE_TOL_SIGMA * p.sigma;
    let nodes = sign_change_brackets(&psi)
        .into_iter()
        .map(|(i, j)| {
            let (a, b) = (grid[i], grid[j]);
            match swept[i].1 {
                None if b <= ze.x_switch => {
                    bisect_node(a, b, psi[i], tol, |x| Ok(ze.analytic_with_derivative(x)?.0))
                }
                Some(y) => bisect_node(a, b, psi[i], tol, |x| ze.continued(a, y, x)),
                None => {
                    let (v, d) = ze.analytic_with_derivative(ze.x_switch)?;
                    bisect_node(a, b, psi[i], tol, |x| {
                        if x <= ze.x_switch {
                            Ok(ze.analytic_with_derivative(x)?.0)
                        } else {
                            ze.continued(ze.x_switch, [v, d], x)
                        }
                    })
                }
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let samples = grid
        .iter()
        .zip(&psi)
        .map(|(&x, &v)| {
            Ok(Sample {
                x,
                z: p.coord_map(x)?,
                psi: v,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(WavefunctionTable {
        level: StateLabel::ZeroEnergy,
        samples,
        norm: None,
        nodes,
        decay_rate: None,
    })
}

/// Zero-energy solution vanishing at the origin, scaled so that `ψ > 0`
/// just right of it.
pub fn zero_energy_solution(p: &PhysParams, grid: &[f64]) -> Result<WavefunctionTable> {
    zero_energy_solution_with(p, grid, ZERO_ENERGY_SWITCH)
}

/// [`zero_energy_solution`] with an explicit series-to-ODE switch point.
pub fn zero_energy_solution_with(
    p: &PhysParams,
    grid: &[f64],
    z_switch: f64,
) -> Result<WavefunctionTable> {
    check_grid(grid)?;
    let ze = ZeroEnergy::new(p, z_switch)?;
    zero_energy_table(&ze, p, grid)
}

/// Number of zeros of the zero-energy solution at `x > 0`, which equals the
/// number of bound states.
///
/// Starts at `X = 20σ` and doubles both the range and the grid density until
/// the count no longer changes.
pub fn zero_energy_node_count(p: &PhysParams) -> Result<usize> {
    let ze = ZeroEnergy::new(p, ZERO_ENERGY_SWITCH)?;
    let mut counts = Vec::new();
    let mut x_max = 20.0 * p.sigma;
    for round in 0..=MAX_NODE_ROUNDS as u32 {
        let grid = zero_energy_grid(p, x_max, round);
        let psi: Vec<f64> = ze.sweep(&grid)?.into_iter().map(|s| s.0).collect();
        let n = sign_change_brackets(&psi).len();
        if counts.last() == Some(&n) {
            return Ok(n);
        }
        counts.push(n);
        x_max *= 2.0;
    }
    Err(Error::NonStabilization { counts })
}

/// Raw complex `ψ` of the bound state at `x`, before sign fixing and
/// normalization; exposed for residual checks.
pub fn bound_state_raw(p: &PhysParams, energy: f64, x: f64) -> Result<Complex64> {
    let ev = BoundEval::new(p, energy)?;
    let z = p.coord_map(x)?;
    let (l1p, l1m) = p.log_coords(x)?;
    Ok(heun::prefactor_from_logs(&ev.h, l1p, l1m) * heun::u2_gauss_combo(&ev.h, z)?)
}

/// Ratio `c₂/c₁` of the zero-energy solution written as
/// `c₁ (1+z)^{α₁} u₁ + c₂ (1+z)^{-α₁} u₂`, with `u₁` on the plus branch and
/// `u₂` on the minus branch (both normalized like the Clausen functions),
/// fixed by `ψ(0) = 0`.
///
/// The minus-branch Clausen series cancels heavily at `z = 1/2` for deep
/// wells (roughly `log10(max term / sum)` digits are lost), so this form
/// serves as a cross-check for shallow wells only.
pub fn zero_energy_coefficient_ratio(p: &PhysParams) -> Result<f64> {
    p.require_vanishing_well()?;
    let hp = map_to_heun(p, 0.0, Branch::Plus, Branch::Plus);
    let hm = map_to_heun(p, 0.0, Branch::Minus, Branch::Plus);
    let u1_0 = heun::u1(&hp, 0.0)?.re;
    let u2_0 = heun::u2_clausen(&hm, 0.0)?.re;
    if u2_0 == 0.0 {
        return Err(Error::Exceptional {
            energy: 0.0,
            reason: "second solution vanishes at the origin".into(),
        });
    }
    Ok(-u1_0 / u2_0)
}

/// The two-solution form of the zero-energy solution at `z ∈ [0, 0.5]`
/// with `c₁ = 1`; see [`zero_energy_coefficient_ratio`].
pub fn zero_energy_combination(p: &PhysParams, z: f64) -> Result<f64> {
    let c2 = zero_energy_coefficient_ratio(p)?;
    let hp = map_to_heun(p, 0.0, Branch::Plus, Branch::Plus);
    let hm = map_to_heun(p, 0.0, Branch::Minus, Branch::Plus);
    let a1 = hp.alpha1.re;
    let l = z.ln_1p();
    Ok((a1 * l).exp() * heun::u1(&hp, z)?.re + c2 * (-a1 * l).exp() * heun::u2_clausen(&hm, z)?.re)
}
