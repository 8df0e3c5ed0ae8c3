//! Composite Simpson quadrature on non-uniform grids and the graded grids
//! used for wavefunction integrals.

use crate::{Error, Result};

/// Composite Simpson rule on an arbitrary grid with an even number of
/// intervals; each pair of intervals uses the three-point rule for unequal
/// spacing.
pub fn simpson(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::Domain(
            "abscissae and values differ in length".into(),
        ));
    }
    let intervals = xs.len().saturating_sub(1);
    if intervals < 2 || !intervals.is_multiple_of(2) {
        return Err(Error::Domain(format!(
            "Simpson rule needs an even number of intervals, got {intervals}"
        )));
    }
    let mut total = 0.0;
    for i in (0..intervals).step_by(2) {
        let h0 = xs[i + 1] - xs[i];
        let h1 = xs[i + 2] - xs[i + 1];
        if !(h0 > 0.0 && h1 > 0.0) {
            return Err(Error::Domain(
                "Simpson abscissae must be strictly increasing".into(),
            ));
        }
        let hs = h0 + h1;
        total += hs / 6.0
            * ((2.0 - h1 / h0) * ys[i]
                + hs * hs / (h0 * h1) * ys[i + 1]
                + (2.0 - h0 / h1) * ys[i + 2]);
    }
    Ok(total)
}

/// Simpson integral together with a Richardson error estimate obtained from
/// the same rule on every other point. Needs a multiple of four intervals.
pub fn simpson_with_estimate(xs: &[f64], ys: &[f64]) -> Result<(f64, f64)> {
    let intervals = xs.len().saturating_sub(1);
    if intervals < 4 || !intervals.is_multiple_of(4) {
        return Err(Error::Domain(format!(
            "error estimate needs a multiple of four intervals, got {intervals}"
        )));
    }
    let fine = simpson(xs, ys)?;
    let cx: Vec<f64> = xs.iter().step_by(2).copied().collect();
    let cy: Vec<f64> = ys.iter().step_by(2).copied().collect();
    let coarse = simpson(&cx, &cy)?;
    Ok((fine, (fine - coarse).abs() / 15.0))
}

/// Piecewise grid on `(0, x_end]`: quadratic grading `x_k = scale (k/n)^2` on
/// `(0, scale]`, then uniform pieces given as `(end, spacing)` pairs. Each
/// piece holds a multiple of four intervals, so the grid with the origin
/// prepended suits [`simpson_with_estimate`].
pub fn graded_grid(scale: f64, n_graded: usize, pieces: &[(f64, f64)]) -> Vec<f64> {
    let n_graded = n_graded.div_ceil(4).max(1) * 4;
    let mut xs = Vec::with_capacity(n_graded + 1024);
    for k in 1..=n_graded {
        let t = k as f64 / n_graded as f64;
        xs.push(scale * t * t);
    }
    let mut start = scale;
    for &(end, spacing) in pieces {
        if end <= start {
            continue;
        }
        let n = (((end - start) / spacing).ceil() as usize)
            .div_ceil(4)
            .max(1)
            * 4;
        let h = (end - start) / n as f64;
        for k in 1..=n {
            xs.push(start + h * k as f64);
        }
        start = end;
    }
    xs
}
