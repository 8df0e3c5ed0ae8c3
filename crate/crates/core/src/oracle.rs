//! Brute-force reference solver for `ψ'' = (2m/ħ²)(V(x) - E) ψ` on the
//! half-line with `ψ(0) = 0`.
//!
//! The regular solution starts at a small `x0` with `ψ = x0`, `ψ' = 1` and is
//! integrated by adaptive Dormand–Prince steps over a mesh of breakpoints
//! graded like `k²` near the origin, where the well behaves like
//! `-V0 sqrt(σ/x)`. Eigenvalues of the Dirichlet problem on `[0, X]` are
//! isolated by bisection on the number of nodes; scattering phases come from
//! a least-squares fit of the far field. None of this touches the special
//! function layer.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::model::PhysParams;
use crate::ode::{integrate, StepControl};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShootingConfig {
    /// Inner starting point.
    pub x0: f64,
    /// Outer end of the integration; extended automatically where needed.
    pub x_max: f64,
    /// Relative tolerance of the integrator.
    pub rtol: f64,
    pub max_bisections: usize,
}

impl ShootingConfig {
    /// Defaults for a well of range `σ`: `x0 = 1e-8 σ`, `X = 40 σ`.
    pub fn for_scale(sigma: f64) -> Self {
        ShootingConfig {
            x0: 1e-8 * sigma,
            x_max: 40.0 * sigma,
            rtol: 1e-10,
            max_bisections: 200,
        }
    }

    pub fn for_params(p: &PhysParams) -> Self {
        Self::for_scale(p.sigma)
    }

    fn validate(&self) -> Result<()> {
        if !(self.x0 > 0.0 && self.x_max > self.x0 && self.rtol > 0.0) {
            return Err(Error::Domain(format!(
                "shooting config needs 0 < x0 < x_max and rtol > 0 (x0={}, x_max={}, rtol={})",
                self.x0, self.x_max, self.rtol
            )));
        }
        Ok(())
    }
}

/// A potential together with the constants of the radial equation.
pub struct Problem<'a> {
    pub potential: &'a (dyn Fn(f64) -> f64 + Sync),
    /// `2m/ħ²`.
    pub kinetic_factor: f64,
    /// Length scale of the breakpoint mesh.
    pub scale: f64,
}

/// Outcome of one integration of the regular solution.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Shot {
    nodes: usize,
    /// State at the end, divided by `exp(log_scale)`.
    y: [f64; 2],
    log_scale: f64,
}

const RESCALE_ABOVE: f64 = 1e100;

fn breakpoints(scale: f64, x0: f64, x_end: f64) -> Vec<f64> {
    const K: usize = 64;
    let mut pts: Vec<f64> = (1..=K)
        .map(|k| {
            let t = k as f64 / K as f64;
            scale * t * t
        })
        .filter(|&x| x > x0 && x < x_end)
        .collect();
    let mut x = scale;
    while x + scale < x_end {
        x += scale;
        pts.push(x);
    }
    pts.push(x_end);
    pts
}

impl Problem<'_> {
    /// Integrates from `cfg.x0` to `x_end`, counting sign changes of `ψ`,
    /// and calls `sample(x, ψ, ψ', log_scale)` at every requested point.
    fn march<S>(
        &self,
        energy: f64,
        cfg: &ShootingConfig,
        x_end: f64,
        at: &[f64],
        mut sample: S,
    ) -> Result<Shot>
    where
        S: FnMut(usize, [f64; 2], f64),
    {
        let kin = self.kinetic_factor;
        let v = self.potential;
        let f = move |x: f64, y: &[f64; 2]| [y[1], kin * (v(x) - energy) * y[0]];
        let ctl = StepControl {
            rtol: cfg.rtol,
            atol: 1e-300,
            ..Default::default()
        };
        let mut stops = breakpoints(self.scale, cfg.x0, x_end);
        stops.extend(at.iter().copied().filter(|&x| x > cfg.x0 && x <= x_end));
        stops.sort_by(|a, b| a.partial_cmp(b).unwrap());
        stops.dedup();

        let mut x = cfg.x0;
        let mut y = [cfg.x0, 1.0];
        let mut log_scale = 0.0;
        let mut nodes = 0usize;
        let mut sign = 1.0f64;
        let mut next_sample = 0usize;
        while next_sample < at.len() && at[next_sample] <= cfg.x0 {
            sample(next_sample, y, log_scale);
            next_sample += 1;
        }
        for &stop in &stops {
            let (_, yn) = integrate(f, x, y, stop, &ctl, |_, ys| {
                if ys[0] != 0.0 && ys[0].signum() != sign {
                    nodes += 1;
                    sign = ys[0].signum();
                }
                true
            })?;
            x = stop;
            y = yn;
            while next_sample < at.len() && at[next_sample] <= x {
                if at[next_sample] == x {
                    sample(next_sample, y, log_scale);
                }
                next_sample += 1;
            }
            let big = y[0].abs().max(y[1].abs() / kin.sqrt().max(1e-300));
            if big > RESCALE_ABOVE {
                y = [y[0] / big, y[1] / big];
                log_scale += big.ln();
            }
        }
        Ok(Shot {
            nodes,
            y,
            log_scale,
        })
    }

    fn node_count(&self, energy: f64, cfg: &ShootingConfig) -> Result<usize> {
        Ok(self.march(energy, cfg, cfg.x_max, &[], |_, _, _| {})?.nodes)
    }

    /// Energy where the node count on `[x0, X]` steps from `n` to `n + 1`,
    /// starting from `lo` (count ≤ n) and `hi` (count > n).
    fn bisect_level(
        &self,
        n: usize,
        mut lo: f64,
        mut hi: f64,
        cfg: &ShootingConfig,
    ) -> Result<f64> {
        for _ in 0..cfg.max_bisections {
            let mid = 0.5 * (lo + hi);
            if hi - lo <= 1e-9 * 1f64.max(mid.abs()) {
                return Ok(mid);
            }
            if self.node_count(mid, cfg)? > n {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Err(Error::NonIsolation(format!(
            "level {n} not isolated in {} bisections (bracket [{lo}, {hi}])",
            cfg.max_bisections
        )))
    }

    /// All Dirichlet eigenvalues in `[e_lo, e_hi)`, given that the node
    /// count at `e_lo` is zero.
    pub fn eigenvalues_in(&self, e_lo: f64, e_hi: f64, cfg: &ShootingConfig) -> Result<Vec<f64>> {
        cfg.validate()?;
        if self.node_count(e_lo, cfg)? != 0 {
            return Err(Error::NonIsolation(format!(
                "lower energy {e_lo} is not below the ground state"
            )));
        }
        let count = self.node_count(e_hi, cfg)?;
        (0..count)
            .into_par_iter()
            .map(|n| self.bisect_level(n, e_lo, e_hi, cfg))
            .collect()
    }

    /// Regular solution on increasing positive `grid`, scaled to
    /// `max |ψ| = 1` over the grid.
    pub fn wavefunction(
        &self,
        energy: f64,
        grid: &[f64],
        cfg: &ShootingConfig,
    ) -> Result<Vec<f64>> {
        cfg.validate()?;
        let end = *grid
            .last()
            .ok_or_else(|| Error::Domain("empty grid".into()))?;
        let mut raw = vec![(0.0, 0.0); grid.len()];
        self.march(energy, cfg, end.max(cfg.x0 * 2.0), grid, |i, y, ls| {
            raw[i] = (y[0], ls)
        })?;
        let top = raw
            .iter()
            .filter(|(v, _)| *v != 0.0)
            .map(|(v, ls)| v.abs().ln() + ls)
            .fold(f64::NEG_INFINITY, f64::max);
        Ok(raw
            .iter()
            .map(|&(v, ls)| {
                if v == 0.0 {
                    0.0
                } else {
                    v.signum() * (v.abs().ln() + ls - top).exp()
                }
            })
            .collect())
    }

    /// Phase `φ` of the far field `C sin(κx + φ)`, reduced to `(-π/2, π/2]`,
    /// from a least-squares fit over the last four wavelengths before `X`.
    pub fn scattering_phase(&self, energy: f64, cfg: &ShootingConfig) -> Result<f64> {
        cfg.validate()?;
        if !(energy > 0.0) {
            return Err(Error::Domain(format!(
                "scattering needs E > 0, got {energy}"
            )));
        }
        let kappa = (self.kinetic_factor * energy).sqrt();
        let span = 4.0 * 2.0 * PI / kappa;
        let x_end = cfg.x_max.max(2.0 * span);
        let n = 256;
        let grid: Vec<f64> = (0..=n)
            .map(|i| x_end - span + span * i as f64 / n as f64)
            .collect();
        let psi = self.wavefunction(energy, &grid, cfg)?;
        let (mut ss, mut sc, mut cc, mut ys, mut yc) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for (&x, &y) in grid.iter().zip(&psi) {
            let (s, c) = (kappa * x).sin_cos();
            ss += s * s;
            sc += s * c;
            cc += c * c;
            ys += y * s;
            yc += y * c;
        }
        let det = ss * cc - sc * sc;
        let a = (ys * cc - yc * sc) / det;
        let b = (yc * ss - ys * sc) / det;
        let amp = a.hypot(b);
        let resid = grid
            .iter()
            .zip(&psi)
            .map(|(&x, &y)| {
                let (s, c) = (kappa * x).sin_cos();
                (y - a * s - b * c).powi(2)
            })
            .sum::<f64>();
        let rel = (resid / grid.len() as f64).sqrt() / amp;
        if !(rel <= 1e-4) {
            return Err(Error::FitResidual {
                energy,
                residual: rel,
            });
        }
        Ok(reduce_half_pi(b.atan2(a)))
    }
}

/// Reduces an angle modulo `π` into `(-π/2, π/2]`.
pub fn reduce_half_pi(phi: f64) -> f64 {
    let mut r = phi - PI * (phi / PI).round();
    if r <= -PI / 2.0 {
        r += PI;
    }
    if r > PI / 2.0 {
        r -= PI;
    }
    r
}

fn well_problem(p: &PhysParams) -> impl Fn(f64) -> f64 + Sync + '_ {
    move |x| p.potential_unchecked(x)
}

/// Bound-state energies of the well by shooting. `X` is extended until the
/// shallowest level satisfies `κ X ≥ 18`.
pub fn oracle_eigenvalues(p: &PhysParams, cfg: &ShootingConfig) -> Result<Vec<f64>> {
    p.require_vanishing_well()?;
    let v = well_problem(p);
    let prob = Problem {
        potential: &v,
        kinetic_factor: p.kinetic_factor(),
        scale: p.sigma,
    };
    let mut cfg = *cfg;
    let mut e_lo = -p.v0;
    while prob.node_count(e_lo, &cfg)? > 0 {
        e_lo *= 2.0;
        if !e_lo.is_finite() {
            return Err(Error::NonIsolation(
                "no lower bound for the ground state".into(),
            ));
        }
    }
    for _ in 0..6 {
        let levels = prob.eigenvalues_in(e_lo, 0.0, &cfg)?;
        let Some(&top) = levels.last() else {
            return Ok(levels);
        };
        let kappa = (p.kinetic_factor() * top.abs()).sqrt();
        if kappa * cfg.x_max >= 18.0 {
            return Ok(levels);
        }
        cfg.x_max = 1.2 * 18.0 / kappa;
    }
    Err(Error::NonIsolation(
        "outer boundary did not converge".into(),
    ))
}

/// Regular solution of the well at energy `E` on `grid`, scaled to unit
/// maximum modulus.
pub fn oracle_wavefunction(
    p: &PhysParams,
    energy: f64,
    grid: &[f64],
    cfg: &ShootingConfig,
) -> Result<Vec<f64>> {
    p.validate()?;
    let v = well_problem(p);
    Problem {
        potential: &v,
        kinetic_factor: p.kinetic_factor(),
        scale: p.sigma,
    }
    .wavefunction(energy, grid, cfg)
}

/// Phase shift relative to the free solution `sin(κx)`, reduced to
/// `(-π/2, π/2]`.
pub fn oracle_scattering_phase(p: &PhysParams, energy: f64, cfg: &ShootingConfig) -> Result<f64> {
    p.validate()?;
    let v = well_problem(p);
    Problem {
        potential: &v,
        kinetic_factor: p.kinetic_factor(),
        scale: p.sigma,
    }
    .scattering_phase(energy, cfg)
}
