//! Reduction of the Schrödinger equation to the general Heun equation
//!
//! ```text
//! u'' + (γ/z + δ/(z-1) + ε/(z+1)) u' + (αβ z - q) / (z (z-1) (z+1)) u = 0
//! ```
//!
//! via `ψ = (1+z)^{α₁} (1-z)^{α₂} u(z)` and `z = sqrt(1 - e^{-x/σ})`, for which
//! `ρ = dz/dx = -(z+1)(z-1)/(2σz)`. The exponent parameters are
//! `(γ, δ, ε) = (-1, 1+2α₂, 1+2α₁)` and the accessory parameter is
//! `q = α₂ - α₁`.
//!
//! The local exponents at `z = 0` are `0` and `2`; the singularity is
//! nevertheless apparent because `q² + q(ε-1+a(δ-1)) + aαβ = 0` with
//! `a = -1`. Each fundamental solution is then a Clausen `3F2` with one upper
//! parameter exceeding a lower one by unity, or equivalently a two-term
//! combination of Gauss functions. The Gauss form is the primary evaluation
//! route here; the Clausen form is kept as an independent cross-check.
//!
//! The conventional prefactor `(z-1)^{α₂}` has a negative base on `(0, 1)`;
//! this module uses `(1-z)^{α₂}` and absorbs the constant phase into the
//! coefficients, which keeps bound states real.

use num_complex::Complex64;
use serde::Serialize;

use crate::model::PhysParams;
use crate::specfun::{hyp2f1, hyp3f2, near_nonpositive_integer};
use crate::{Error, Result};

/// Window for the "ε is unity, zero or a negative integer" style checks.
pub const DEGENERACY_WINDOW: f64 = 1e-10;

/// Branch of a square root in the exponent definitions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Branch::Plus => Branch::Minus,
            Branch::Minus => Branch::Plus,
        }
    }
}

/// Parameters of the general Heun equation for one energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HeunParams {
    pub gamma_h: Complex64,
    pub delta_h: Complex64,
    pub epsilon_h: Complex64,
    /// Takes the `+` root of the `α, β` pair.
    pub alpha_h: Complex64,
    pub beta_h: Complex64,
    pub q_h: Complex64,
    /// Third finite singularity of the Heun equation.
    pub a_sing: f64,
    pub alpha1: Complex64,
    pub alpha2: Complex64,
    pub energy: f64,
}

/// Coefficients of the general solution `ψ = φ (c₁ u₁ + c₂ u₂)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolutionCoefficients {
    pub c1: Complex64,
    pub c2: Complex64,
}

impl SolutionCoefficients {
    pub fn new(c1: Complex64, c2: Complex64) -> Result<Self> {
        if c1 == Complex64::new(0.0, 0.0) && c2 == Complex64::new(0.0, 0.0) {
            return Err(Error::Domain(
                "solution coefficients must not both vanish".into(),
            ));
        }
        Ok(SolutionCoefficients { c1, c2 })
    }
}

/// Principal square root with the branch cut handled so that a negative real
/// radicand yields `+i·sqrt(|x|)`.
fn principal_sqrt(x: f64) -> Complex64 {
    if x >= 0.0 {
        Complex64::new(x.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-x).sqrt())
    }
}

pub fn map_to_heun(p: &PhysParams, energy: f64, sign1: Branch, sign2: Branch) -> HeunParams {
    let s = p.energy_scale();
    let alpha1 = sign1.sign() * principal_sqrt(s * (-energy + p.v0 - p.v1));
    let alpha2 = sign2.sign() * principal_sqrt(s * (-energy + p.v0 + p.v1));
    let root = principal_sqrt(4.0 * s * (-energy + p.v0));
    let sum = alpha1 + alpha2;
    // α₂² - α₁² = 2sV₁ and αβ = -q²; the small member of each pair comes from
    // these products instead of a difference of nearly equal numbers.
    let diff = alpha2 - alpha1;
    let q_h = if sum.norm() > diff.norm() {
        2.0 * s * p.v1 / sum
    } else {
        diff
    };
    let (plus, minus) = (sum + root, sum - root);
    let (alpha_h, beta_h) = if plus.norm() >= minus.norm() {
        let small = if plus.norm() > 0.0 { -q_h * q_h / plus } else { minus };
        (plus, small)
    } else {
        (-q_h * q_h / minus, minus)
    };
    HeunParams {
        gamma_h: Complex64::new(-1.0, 0.0),
        delta_h: 1.0 + 2.0 * alpha2,
        epsilon_h: 1.0 + 2.0 * alpha1,
        alpha_h,
        beta_h,
        q_h,
        a_sing: -1.0,
        alpha1,
        alpha2,
        energy,
    }
}

/// Residual of the apparent-singularity condition
/// `q² + q(ε - 1 + a(δ - 1)) + a α β = 0`, divided by `max(1, |q|)`.
///
/// Here `q` is a double root of the condition, so a shift `Δq` moves the
/// residual by `Δq²`; the mild scaling keeps that visible.
pub fn apparent_singularity_check(h: &HeunParams) -> f64 {
    let a = h.a_sing;
    let q = h.q_h;
    let ab = h.alpha_h * h.beta_h;
    let r = q * q + q * (h.epsilon_h - 1.0 + a * (h.delta_h - 1.0)) + a * ab;
    r.norm() / q.norm().max(1.0)
}

impl HeunParams {
    pub fn apparent_singularity_residual(&self) -> f64 {
        apparent_singularity_check(self)
    }

    fn check_q(&self) -> Result<()> {
        if self.q_h.norm() < DEGENERACY_WINDOW {
            return Err(Error::Degenerate {
                name: "q",
                value: self.q_h,
                window: DEGENERACY_WINDOW,
            });
        }
        Ok(())
    }

    fn check_sum(&self) -> Result<()> {
        let sum = self.alpha1 + self.alpha2;
        if sum.norm() < DEGENERACY_WINDOW {
            return Err(Error::Degenerate {
                name: "alpha1 + alpha2",
                value: sum,
                window: DEGENERACY_WINDOW,
            });
        }
        Ok(())
    }

    /// `αβ/q`, the Clausen lower parameter.
    pub fn clausen_ratio(&self) -> Result<Complex64> {
        self.check_q()?;
        Ok(self.alpha_h * self.beta_h / self.q_h)
    }
}

/// Rejects `value` within the degeneracy window of `1, 0, -1, ...`.
fn check_gauss_lower(name: &'static str, value: Complex64) -> Result<()> {
    if near_nonpositive_integer(value - 1.0, DEGENERACY_WINDOW).is_some() {
        return Err(Error::Degenerate {
            name,
            value,
            window: DEGENERACY_WINDOW,
        });
    }
    Ok(())
}

/// `Σ (a)ₙ(b)ₙ/((c)ₙ n!) (λ - n) wⁿ`, the Gauss series with each term
/// weighted by `λ - n`; summed in one pass as `λ · 3F2(a, b, 1-λ; -λ, c; w)`
/// so that no two nearly equal series are subtracted.
fn weighted_gauss(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    lambda: Complex64,
    w: f64,
) -> Result<Complex64> {
    if near_nonpositive_integer(-lambda, 1e-6).is_none() {
        return Ok(lambda * hyp3f2(a, b, 1.0 - lambda, -lambda, c, w)?.0);
    }
    let (f0, _) = hyp2f1(a, b, c, w)?;
    let (f1, _) = hyp2f1(a + 1.0, b + 1.0, c + 1.0, w)?;
    Ok(lambda * f0 - w * a * b / c * f1)
}

/// Gauss combination with lower parameter `lower` and term weight
/// `(λ - n)/(α₁+α₂)`.
fn gauss_combo(h: &HeunParams, lower: Complex64, lambda: Complex64, w: f64) -> Result<Complex64> {
    Ok(weighted_gauss(h.alpha_h, h.beta_h, lower, lambda, w)? / (h.alpha1 + h.alpha2))
}

/// `d/dw` of [`gauss_combo`].
fn gauss_combo_dw(
    h: &HeunParams,
    lower: Complex64,
    lambda: Complex64,
    w: f64,
) -> Result<Complex64> {
    let (a, b) = (h.alpha_h, h.beta_h);
    let f = weighted_gauss(a + 1.0, b + 1.0, lower + 1.0, lambda - 1.0, w)?;
    Ok(a * b / lower * f / (h.alpha1 + h.alpha2))
}

/// First fundamental solution as the two-term Gauss combination
/// `2F1(α,β;ε;(1+z)/2) - 2α₁/(α₁+α₂) · 2F1(α,β;ε-1;(1+z)/2)`.
///
/// Differs from the Clausen form [`u1_clausen`] by the constant factor
/// `(α₂-α₁)/(α₂+α₁)`. The two series are combined term by term, the `n`-th
/// term carrying the weight `(α₂-α₁-n)/(α₁+α₂)`.
pub fn u1_gauss_combo(h: &HeunParams, z: f64) -> Result<Complex64> {
    check_gauss_lower("epsilon", h.epsilon_h)?;
    h.check_q()?;
    h.check_sum()?;
    let w = check_range((1.0 + z) / 2.0, z, "u1")?;
    gauss_combo(h, h.epsilon_h, h.q_h, w)
}

/// `d/dz` of [`u1_gauss_combo`].
pub fn u1_gauss_combo_dz(h: &HeunParams, z: f64) -> Result<Complex64> {
    check_gauss_lower("epsilon", h.epsilon_h)?;
    h.check_q()?;
    h.check_sum()?;
    let w = check_range((1.0 + z) / 2.0, z, "u1")?;
    Ok(0.5 * gauss_combo_dw(h, h.epsilon_h, h.q_h, w)?)
}

/// Mirror image of [`u1_gauss_combo`] about `z = 0`: `α₁ ↔ α₂`, `ε → δ`,
/// argument `(1-z)/2`.
pub fn u2_gauss_combo(h: &HeunParams, z: f64) -> Result<Complex64> {
    check_gauss_lower("delta", h.delta_h)?;
    h.check_q()?;
    h.check_sum()?;
    let w = check_range((1.0 - z) / 2.0, z, "u2")?;
    gauss_combo(h, h.delta_h, -h.q_h, w)
}

/// `d/dz` of [`u2_gauss_combo`].
pub fn u2_gauss_combo_dz(h: &HeunParams, z: f64) -> Result<Complex64> {
    check_gauss_lower("delta", h.delta_h)?;
    h.check_q()?;
    h.check_sum()?;
    let w = check_range((1.0 - z) / 2.0, z, "u2")?;
    Ok(-0.5 * gauss_combo_dw(h, h.delta_h, -h.q_h, w)?)
}

fn check_range(w: f64, z: f64, which: &str) -> Result<f64> {
    if !(0.0..=0.75).contains(&w) {
        return Err(Error::Domain(format!(
            "{which} series representation needs its argument in [0, 0.75], got {w} (z = {z})"
        )));
    }
    Ok(w)
}

/// First fundamental solution in Clausen form,
/// `3F2(α, β, 1+αβ/q; αβ/q, ε; (1+z)/2)`.
pub fn u1_clausen(h: &HeunParams, z: f64) -> Result<Complex64> {
    let r = h.clausen_ratio()?;
    let w = check_range((1.0 + z) / 2.0, z, "u1")?;
    Ok(hyp3f2(h.alpha_h, h.beta_h, 1.0 + r, r, h.epsilon_h, w)?.0)
}

/// Second fundamental solution in Clausen form,
/// `3F2(α, β, 1-αβ/q; -αβ/q, δ; (1-z)/2)`.
pub fn u2_clausen(h: &HeunParams, z: f64) -> Result<Complex64> {
    let r = h.clausen_ratio()?;
    let w = check_range((1.0 - z) / 2.0, z, "u2")?;
    Ok(hyp3f2(h.alpha_h, h.beta_h, 1.0 - r, -r, h.delta_h, w)?.0)
}

/// `d/dz` of [`u2_clausen`].
pub fn u2_clausen_dz(h: &HeunParams, z: f64) -> Result<Complex64> {
    let r = h.clausen_ratio()?;
    let w = check_range((1.0 - z) / 2.0, z, "u2")?;
    let (a, b, a3, b1, b2) = (h.alpha_h, h.beta_h, 1.0 - r, -r, h.delta_h);
    let (f, _) = hyp3f2(a + 1.0, b + 1.0, a3 + 1.0, b1 + 1.0, b2 + 1.0, w)?;
    Ok(-0.5 * a * b * a3 / (b1 * b2) * f)
}

/// `u₁` normalized like the Clausen function (value 1 at `z = -1`), evaluated
/// through the Gauss combination.
pub fn u1(h: &HeunParams, z: f64) -> Result<Complex64> {
    Ok(u1_gauss_combo(h, z)? * (h.alpha1 + h.alpha2) / h.q_h)
}

/// `u₂` normalized like the Clausen function (value 1 at `z = 1`), evaluated
/// through the Gauss combination.
pub fn u2(h: &HeunParams, z: f64) -> Result<Complex64> {
    Ok(-u2_gauss_combo(h, z)? * (h.alpha1 + h.alpha2) / h.q_h)
}

pub fn u1_dz(h: &HeunParams, z: f64) -> Result<Complex64> {
    Ok(u1_gauss_combo_dz(h, z)? * (h.alpha1 + h.alpha2) / h.q_h)
}

pub fn u2_dz(h: &HeunParams, z: f64) -> Result<Complex64> {
    Ok(-u2_gauss_combo_dz(h, z)? * (h.alpha1 + h.alpha2) / h.q_h)
}

/// `(1+z)^{α₁} (1-z)^{α₂}` from precomputed `ln(1+z)` and `ln(1-z)`.
pub fn prefactor_from_logs(h: &HeunParams, ln1pz: f64, ln1mz: f64) -> Complex64 {
    (h.alpha1 * ln1pz + h.alpha2 * ln1mz).exp()
}

/// General solution `(1+z)^{α₁} (1-z)^{α₂} (c₁ u₁ + c₂ u₂)` for `z` in `(0, 1)`.
///
/// With `c₁ ≠ 0` the series route limits `z` to `(0, 0.5]`.
pub fn general_solution(
    h: &HeunParams,
    coeffs: &SolutionCoefficients,
    z: f64,
) -> Result<Complex64> {
    if !(z > 0.0 && z < 1.0) {
        return Err(Error::Domain(format!(
            "general_solution requires 0 < z < 1, got {z}"
        )));
    }
    general_solution_logs(h, coeffs, z, z.ln_1p(), (-z).ln_1p())
}

/// [`general_solution`] with `ln(1±z)` supplied by the caller, which keeps
/// full accuracy when `1 - z` underflows relative to `z`.
pub fn general_solution_logs(
    h: &HeunParams,
    coeffs: &SolutionCoefficients,
    z: f64,
    ln1pz: f64,
    ln1mz: f64,
) -> Result<Complex64> {
    let zero = Complex64::new(0.0, 0.0);
    let mut acc = zero;
    if coeffs.c1 != zero {
        acc += coeffs.c1 * u1(h, z)?;
    }
    if coeffs.c2 != zero {
        acc += coeffs.c2 * u2(h, z)?;
    }
    Ok(prefactor_from_logs(h, ln1pz, ln1mz) * acc)
}

/// [`general_solution`] at a physical position `x`.
pub fn general_solution_at(
    p: &PhysParams,
    h: &HeunParams,
    coeffs: &SolutionCoefficients,
    x: f64,
) -> Result<Complex64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!(
            "general_solution_at requires x > 0, got {x}"
        )));
    }
    let z = p.coord_map(x)?;
    let (l1p, l1m) = p.log_coords(x)?;
    general_solution_logs(h, coeffs, z, l1p, l1m)
}

/// Local solution at the apparent singularity `z = 0` belonging to the
/// exponent 2, `u = z² Σ a_k z^k` with `a_0 = 1`, and its `z`-derivative.
///
/// It is the unique solution (up to scale) with `u(0) = 0`, i.e. the one
/// obeying the Dirichlet condition at the origin. The power series converges
/// for `|z| < 1`; `z` is limited to `[0, 0.75]`.
pub fn origin_solution(h: &HeunParams, z: f64) -> Result<(Complex64, Complex64)> {
    if !(0.0..=0.75).contains(&z) {
        return Err(Error::Domain(format!(
            "origin series needs 0 <= z <= 0.75, got {z}"
        )));
    }
    let zero = Complex64::new(0.0, 0.0);
    let (g, d, e) = (h.gamma_h, h.delta_h, h.epsilon_h);
    let ab = h.alpha_h * h.beta_h;
    // (z³ - z) u'' + ((γ+δ+ε) z² + (δ-ε) z - γ) u' + (αβ z - q) u = 0
    let mut prev = zero; // a_{j-1}
    let mut cur = Complex64::new(1.0, 0.0); // a_j, starting at j = 2
    let mut zp = z * z; // z^j
    let mut sum = zp * cur;
    let mut dsum = 2.0 * z * cur;
    let mut quiet = 0;
    for j in 2..20_000usize {
        let jf = j as f64;
        let den = (jf + 1.0) * (jf + g);
        if den.norm() == 0.0 {
            return Err(Error::Degenerate {
                name: "gamma",
                value: g,
                window: 0.0,
            });
        }
        let next = (cur * (jf * (d - e) - h.q_h)
            + prev * ((jf - 1.0) * (jf - 2.0 + g + d + e) + ab))
            / den;
        prev = cur;
        cur = next;
        let dterm = (jf + 1.0) * zp * cur;
        zp *= z;
        let term = zp * cur;
        sum += term;
        dsum += dterm;
        if term.norm() <= f64::EPSILON * 1e-2 * sum.norm()
            && dterm.norm() <= f64::EPSILON * 1e-2 * dsum.norm()
        {
            quiet += 1;
            if quiet >= 3 {
                return Ok((sum, dsum));
            }
        } else {
            quiet = 0;
        }
        if zp == 0.0 {
            return Ok((sum, dsum));
        }
    }
    Err(Error::NonConvergence {
        terms: 20_000,
        tail_bound: f64::INFINITY,
    })
}
