//! Adaptive Dormand–Prince 5(4) integration for small real systems.
//!
//! Used by the shooting oracle and by the continuation of the zero-energy
//! solution past the point where the series representation stops converging.

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl {
    pub rtol: f64,
    pub atol: f64,
    /// Initial trial step; zero picks one from the interval length.
    pub h_init: f64,
    pub h_max: f64,
    pub max_steps: usize,
}

impl Default for StepControl {
    fn default() -> Self {
        StepControl {
            rtol: 1e-10,
            atol: 1e-14,
            h_init: 0.0,
            h_max: f64::INFINITY,
            max_steps: 2_000_000,
        }
    }
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
// fifth-order weights minus embedded fourth-order weights
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Integrates `y' = f(x, y)` from `x0` to `x1` (either direction). `observe`
/// sees every accepted step `(x, y)` including the end point; returning
/// `false` from it stops the integration early at that step.
pub fn integrate<const N: usize, F, O>(
    f: F,
    x0: f64,
    y0: [f64; N],
    x1: f64,
    ctl: &StepControl,
    mut observe: O,
) -> Result<(f64, [f64; N])>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
    O: FnMut(f64, &[f64; N]) -> bool,
{
    let span = x1 - x0;
    if span == 0.0 {
        return Ok((x0, y0));
    }
    let dir = span.signum();
    let mut h = if ctl.h_init > 0.0 {
        ctl.h_init.min(span.abs())
    } else {
        (span.abs() * 1e-3).min(ctl.h_max)
    };
    let mut x = x0;
    let mut y = y0;
    let mut k = [[0.0; N]; 7];
    k[0] = f(x, &y);
    let mut steps = 0usize;

    while (x1 - x) * dir > 0.0 {
        if steps >= ctl.max_steps {
            return Err(Error::Integrator(format!(
                "step budget of {} exhausted at x = {x}",
                ctl.max_steps
            )));
        }
        steps += 1;
        let last = (x + dir * h - x1) * dir >= 0.0;
        let h_try = if last {
            (x1 - x).abs()
        } else {
            h.min(ctl.h_max)
        };
        let hs = dir * h_try;

        for s in 1..7 {
            let mut ys = y;
            for (j, kj) in k.iter().enumerate().take(s) {
                let a = A[s][j];
                if a != 0.0 {
                    for i in 0..N {
                        ys[i] += hs * a * kj[i];
                    }
                }
            }
            k[s] = f(x + C[s] * hs, &ys);
        }
        // stage 7 was evaluated at the 5th-order solution
        let mut y_new = y;
        for i in 0..N {
            let mut acc = 0.0;
            for (s, ks) in k.iter().enumerate().take(6) {
                acc += A[6][s] * ks[i];
            }
            y_new[i] += hs * acc;
        }
        let mut err = 0.0f64;
        for i in 0..N {
            let mut e = 0.0;
            for (s, ks) in k.iter().enumerate() {
                e += E[s] * ks[i];
            }
            let scale = ctl.atol + ctl.rtol * y[i].abs().max(y_new[i].abs());
            err = err.max((hs * e / scale).abs());
        }
        if !err.is_finite() {
            return Err(Error::Integrator(format!(
                "non-finite error estimate at x = {x}"
            )));
        }

        if err <= 1.0 {
            x = if last { x1 } else { x + hs };
            y = y_new;
            k[0] = k[6];
            if !observe(x, &y) {
                return Ok((x, y));
            }
            let fac = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            h = (h_try * fac).min(ctl.h_max);
        } else {
            h = h_try * (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
        }
        if h < 1e-15 * x.abs().max(1e-300) {
            return Err(Error::Integrator(format!("step size underflow at x = {x}")));
        }
    }
    Ok((x, y))
}
