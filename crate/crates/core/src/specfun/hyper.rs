use num_complex::Complex64;
use serde::Serialize;

use super::{near_nonpositive_integer, rgamma, POLE_WINDOW};
use crate::{Error, Result};

/// Largest `|w|` accepted by the direct series.
pub const MAX_ARGUMENT: f64 = 0.75;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesOptions {
    /// Relative tolerance on the neglected tail.
    pub tol: f64,
    pub max_terms: usize,
}

impl Default for SeriesOptions {
    fn default() -> Self {
        SeriesOptions {
            tol: 1e-12,
            max_terms: 10_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct SeriesDiagnostics {
    pub terms_used: usize,
    /// Rigorous bound on `|sum of all neglected terms|`.
    pub tail_bound: f64,
    pub max_term_magnitude: f64,
}

/// Neumaier-compensated complex accumulator.
#[derive(Default)]
struct CompensatedSum {
    re: f64,
    im: f64,
    c_re: f64,
    c_im: f64,
}

impl CompensatedSum {
    fn add(&mut self, v: Complex64) {
        fn step(sum: &mut f64, comp: &mut f64, x: f64) {
            let t = *sum + x;
            if sum.abs() >= x.abs() {
                *comp += (*sum - t) + x;
            } else {
                *comp += (x - t) + *sum;
            }
            *sum = t;
        }
        step(&mut self.re, &mut self.c_re, v.re);
        step(&mut self.im, &mut self.c_im, v.im);
    }

    fn value(&self) -> Complex64 {
        Complex64::new(self.re + self.c_re, self.im + self.c_im)
    }
}

/// Upper bound on `|t_{k+1}/t_k|` valid for every `k >= n`, or `None` when
/// some `n + Re b` is not yet positive.
fn ratio_bound(upper: &[Complex64], lower: &[Complex64], w: f64, n: usize) -> Option<f64> {
    let n = n as f64;
    let mut rho = w.abs();
    // pair the last upper parameter with the n! denominator
    let one = Complex64::new(1.0, 0.0);
    for (i, a) in upper.iter().enumerate() {
        let b = lower.get(i).copied().unwrap_or(one);
        let denom = n + b.re;
        if denom <= 0.0 {
            return None;
        }
        rho *= 1.0 + (a - b).norm() / denom;
    }
    Some(rho)
}

/// Sums `Σ_{n >= start} t_n` where `t_start` is given and
/// `t_{n+1} = t_n · Π(a_i+n) / (Π(b_j+n) (n+1)) · w`. The stopping rule
/// measures the tail against `head + Σ`, `head` being terms summed earlier.
///
/// The caller guarantees that no `b_j + n` vanishes for `n >= start`.
fn sum_from(
    upper: &[Complex64],
    lower: &[Complex64],
    w: f64,
    start: usize,
    first: Complex64,
    head: Complex64,
    opts: &SeriesOptions,
) -> Result<(Complex64, SeriesDiagnostics)> {
    debug_assert_eq!(upper.len(), lower.len() + 1);
    let mut acc = CompensatedSum::default();
    let mut term = first;
    let mut max_term = first.norm();
    let mut n = start;
    let mut used = 0usize;
    loop {
        acc.add(term);
        used += 1;
        let nf = n as f64;
        let mut num = Complex64::new(w, 0.0);
        for a in upper {
            num *= a + nf;
        }
        let mut den = Complex64::new(nf + 1.0, 0.0);
        for b in lower {
            den *= b + nf;
        }
        let next = term * num / den;
        max_term = max_term.max(next.norm());
        n += 1;

        let sum = acc.value();
        if next == Complex64::new(0.0, 0.0) && upper.iter().any(|a| terminates_at(*a, n)) {
            return Ok((
                sum,
                SeriesDiagnostics {
                    terms_used: used,
                    tail_bound: 0.0,
                    max_term_magnitude: max_term,
                },
            ));
        }
        if let Some(rho) = ratio_bound(upper, lower, w, n) {
            if rho < 1.0 {
                let tail = next.norm() / (1.0 - rho);
                let floor = f64::EPSILON * max_term;
                if tail <= opts.tol * (head + sum).norm() || tail <= floor {
                    return Ok((
                        sum,
                        SeriesDiagnostics {
                            terms_used: used,
                            tail_bound: tail,
                            max_term_magnitude: max_term,
                        },
                    ));
                }
                if used >= opts.max_terms {
                    return Err(Error::NonConvergence {
                        terms: used,
                        tail_bound: tail,
                    });
                }
            }
        }
        if used >= opts.max_terms {
            return Err(Error::NonConvergence {
                terms: used,
                tail_bound: f64::INFINITY,
            });
        }
        if !next.re.is_finite() || !next.im.is_finite() {
            return Err(Error::NonConvergence {
                terms: used,
                tail_bound: f64::INFINITY,
            });
        }
        term = next;
    }
}

/// True when the upper parameter `a` is exactly `1 - n`, i.e. `(a)_n` and all
/// later Pochhammer symbols vanish.
fn terminates_at(a: Complex64, n: usize) -> bool {
    a.im == 0.0 && a.re <= 0.0 && a.re == a.re.round() && ((-a.re) as usize) < n
}

fn check_argument(w: f64) -> Result<()> {
    if !(w.abs() <= MAX_ARGUMENT) {
        return Err(Error::Domain(format!(
            "hypergeometric series argument |w| = {} exceeds {MAX_ARGUMENT}",
            w.abs()
        )));
    }
    Ok(())
}

fn check_lower(name: &'static str, b: Complex64) -> Result<()> {
    if near_nonpositive_integer(b, POLE_WINDOW).is_some() {
        return Err(Error::Pole {
            function: name,
            arg: b,
        });
    }
    Ok(())
}

/// Generalized hypergeometric series `pFq` with `p = q + 1` by direct
/// summation.
pub fn pfq_with(
    upper: &[Complex64],
    lower: &[Complex64],
    w: f64,
    opts: &SeriesOptions,
) -> Result<(Complex64, SeriesDiagnostics)> {
    if upper.len() != lower.len() + 1 {
        return Err(Error::Domain("pFq requires p = q + 1".into()));
    }
    check_argument(w)?;
    for &b in lower {
        check_lower("pFq", b)?;
    }
    sum_from(
        upper,
        lower,
        w,
        0,
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 0.0),
        opts,
    )
}

/// Gauss hypergeometric function `2F1(a, b; c; w)` for `|w| <= 0.75`.
pub fn hyp2f1(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    w: f64,
) -> Result<(Complex64, SeriesDiagnostics)> {
    hyp2f1_with(a, b, c, w, &SeriesOptions::default())
}

pub fn hyp2f1_with(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    w: f64,
    opts: &SeriesOptions,
) -> Result<(Complex64, SeriesDiagnostics)> {
    check_argument(w)?;
    check_lower("2F1", c)?;
    sum_from(
        &[a, b],
        &[c],
        w,
        0,
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 0.0),
        opts,
    )
}

/// Regularized Gauss function `2F1(a, b; c; w) / Γ(c)`, entire in `c`.
pub fn hyp2f1_regularized(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    w: f64,
) -> Result<(Complex64, SeriesDiagnostics)> {
    hyp2f1_regularized_with(a, b, c, w, &SeriesOptions::default())
}

pub fn hyp2f1_regularized_with(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    w: f64,
    opts: &SeriesOptions,
) -> Result<(Complex64, SeriesDiagnostics)> {
    check_argument(w)?;
    // Terms with Re(c + n) < 1/2 take 1/Γ(c+n) from the downward recurrence
    // 1/Γ(c+n) = (c+n)/Γ(c+n+1), seeded at the first index with
    // Re(c + n) >= 1/2, so no step divides by a small c + n and all terms
    // share the rounding of a single gamma evaluation.
    let direct = if c.re < 0.5 {
        (0.5 - c.re).ceil() as usize
    } else {
        0
    };
    let seed = rgamma(c + direct as f64);
    let mut recip = vec![seed; direct + 1];
    for n in (0..direct).rev() {
        recip[n] = (c + n as f64) * recip[n + 1];
    }
    let mut acc = CompensatedSum::default();
    let mut pref = Complex64::new(1.0, 0.0); // (a)_n (b)_n w^n / n!
    let mut max_term = 0.0f64;
    for (n, &r) in recip.iter().enumerate().take(direct) {
        let t = pref * r;
        max_term = max_term.max(t.norm());
        acc.add(t);
        let nf = n as f64;
        pref = pref * (a + nf) * (b + nf) * w / (nf + 1.0);
        if n + 1 >= opts.max_terms {
            return Err(Error::NonConvergence {
                terms: n + 1,
                tail_bound: f64::INFINITY,
            });
        }
    }
    let first = pref * seed;
    let capped = SeriesOptions {
        tol: opts.tol,
        max_terms: opts.max_terms.saturating_sub(direct).max(1),
    };
    if first == Complex64::new(0.0, 0.0) {
        // only possible when the series already terminated
        let sum = acc.value();
        return Ok((
            sum,
            SeriesDiagnostics {
                terms_used: direct,
                tail_bound: 0.0,
                max_term_magnitude: max_term,
            },
        ));
    }
    let head = acc.value();
    let (rest, diag) = sum_from(&[a, b], &[c], w, direct, first, head, &capped)?;
    let total = head + rest;
    let max_term = max_term.max(diag.max_term_magnitude);
    // the head is exact up to rounding, the stopping rule only saw the tail part
    Ok((
        total,
        SeriesDiagnostics {
            terms_used: direct + diag.terms_used,
            tail_bound: diag.tail_bound,
            max_term_magnitude: max_term,
        },
    ))
}

/// Clausen function `3F2(a1, a2, a3; b1, b2; w)` for `|w| <= 0.75`.
pub fn hyp3f2(
    a1: Complex64,
    a2: Complex64,
    a3: Complex64,
    b1: Complex64,
    b2: Complex64,
    w: f64,
) -> Result<(Complex64, SeriesDiagnostics)> {
    hyp3f2_with(a1, a2, a3, b1, b2, w, &SeriesOptions::default())
}

pub fn hyp3f2_with(
    a1: Complex64,
    a2: Complex64,
    a3: Complex64,
    b1: Complex64,
    b2: Complex64,
    w: f64,
    opts: &SeriesOptions,
) -> Result<(Complex64, SeriesDiagnostics)> {
    check_argument(w)?;
    check_lower("3F2", b1)?;
    check_lower("3F2", b2)?;
    sum_from(
        &[a1, a2, a3],
        &[b1, b2],
        w,
        0,
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 0.0),
        opts,
    )
}
