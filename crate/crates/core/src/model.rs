//! Problem instance, the potential and the coordinate map `z(x)`.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Physical inputs of one problem instance.
///
/// `v1` defaults to `-v0`, which makes the potential vanish at infinity; the
/// bound-state and scattering layers require that specialization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysParams {
    pub m: f64,
    pub hbar: f64,
    pub v0: f64,
    pub sigma: f64,
    pub v1: f64,
}

impl PhysParams {
    /// Vanishing-at-infinity well, `V1 = -V0`.
    pub fn new(m: f64, hbar: f64, v0: f64, sigma: f64) -> Result<Self> {
        Self::with_v1(m, hbar, v0, sigma, -v0)
    }

    /// General member of the family with an independent `V1`.
    pub fn with_v1(m: f64, hbar: f64, v0: f64, sigma: f64, v1: f64) -> Result<Self> {
        let p = PhysParams {
            m,
            hbar,
            v0,
            sigma,
            v1,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.m, self.hbar, self.v0, self.sigma, self.v1]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::Domain("parameters must be finite".into()));
        }
        if self.m <= 0.0 || self.hbar <= 0.0 || self.sigma <= 0.0 {
            return Err(Error::Domain(format!(
                "m, hbar and sigma must be positive (m={}, hbar={}, sigma={})",
                self.m, self.hbar, self.sigma
            )));
        }
        Ok(())
    }

    /// Checks `V1 = -V0` and `V0 > 0`, the precondition of every bound-state
    /// and scattering operation.
    pub fn require_vanishing_well(&self) -> Result<()> {
        self.validate()?;
        if !(self.v0 > 0.0) {
            return Err(Error::Domain(format!(
                "V0 must be positive, got {}",
                self.v0
            )));
        }
        let scale = self.v0.abs().max(1.0);
        if (self.v1 + self.v0).abs() > 1e-12 * scale {
            return Err(Error::Domain(format!(
                "operation requires V1 = -V0 (V0={}, V1={})",
                self.v0, self.v1
            )));
        }
        Ok(())
    }

    /// `2 m σ² / ħ²`: converts energies into the dimensionless units in
    /// which all Heun parameters are expressed.
    pub fn energy_scale(&self) -> f64 {
        2.0 * self.m * self.sigma * self.sigma / (self.hbar * self.hbar)
    }

    /// `2 m / ħ²`, the coefficient of `(E - V)` in the Schrödinger equation.
    pub fn kinetic_factor(&self) -> f64 {
        2.0 * self.m / (self.hbar * self.hbar)
    }

    /// Physical wavenumber `sqrt(2 m E) / ħ` for `E > 0`.
    pub fn wavenumber(&self, energy: f64) -> f64 {
        (self.kinetic_factor() * energy).sqrt()
    }

    pub fn potential(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) {
            return Err(Error::Domain(format!("potential requires x > 0, got {x}")));
        }
        Ok(self.potential_unchecked(x))
    }

    /// Potential without the domain check; used inside integrators.
    pub(crate) fn potential_unchecked(&self, x: f64) -> f64 {
        // 1 - e^{-t} loses precision for small t
        let one_minus_u = -(-x / self.sigma).exp_m1();
        self.v0 + self.v1 / one_minus_u.sqrt()
    }

    pub fn coord_map(&self, x: f64) -> Result<f64> {
        if !(x >= 0.0) {
            return Err(Error::Domain(format!("coord_map requires x >= 0, got {x}")));
        }
        Ok((-(-x / self.sigma).exp_m1()).sqrt())
    }

    /// `1 - z(x)`, computed without cancellation as
    /// `e^{-x/σ} / (1 + sqrt(1 - e^{-x/σ}))`.
    pub fn coord_complement(&self, x: f64) -> Result<f64> {
        let z = self.coord_map(x)?;
        Ok((-x / self.sigma).exp() / (1.0 + z))
    }

    /// `(ln(1+z), ln(1-z))` at position `x`, both accurate for any `x > 0`.
    pub fn log_coords(&self, x: f64) -> Result<(f64, f64)> {
        let z = self.coord_map(x)?;
        let l1p = z.ln_1p();
        // (1-z)(1+z) = e^{-x/σ}
        let l1m = if z < 0.5 {
            (-z).ln_1p()
        } else {
            -x / self.sigma - l1p
        };
        Ok((l1p, l1m))
    }

    pub fn coord_inverse(&self, z: f64) -> Result<f64> {
        if !(0.0..1.0).contains(&z) {
            return Err(Error::Domain(format!(
                "coord_inverse requires 0 <= z < 1, got {z}"
            )));
        }
        Ok(-self.sigma * (-z * z).ln_1p())
    }

    /// Near-origin and far-field asymptotes of the vanishing well:
    /// `(-V0 / sqrt(x/σ), -(V0/2) e^{-x/σ})`.
    pub fn asymptotes(&self, x: f64) -> Result<(f64, f64)> {
        if !(x > 0.0) {
            return Err(Error::Domain(format!("asymptotes require x > 0, got {x}")));
        }
        let near = -self.v0 / (x / self.sigma).sqrt();
        let far = -0.5 * self.v0 * (-x / self.sigma).exp();
        Ok((near, far))
    }
}
