use std::f64::consts::PI;

use num_complex::Complex64;

use super::{near_nonpositive_integer, POLE_WINDOW};
use crate::{Error, Result};

// Lanczos approximation, g = 7, nine coefficients.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// `ln Γ(w)` for `Re w >= 1/2` (any branch of the logarithm is fine for
/// callers that only exponentiate).
fn ln_gamma_right(w: Complex64) -> Complex64 {
    let w = w - 1.0;
    let mut acc = Complex64::new(LANCZOS_COEFFS[0], 0.0);
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (w + i as f64);
    }
    let t = w + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (w + 0.5) * t.ln() - t + acc.ln()
}

/// `sin(π w)` with the real part reduced first, so values near the integers
/// keep full relative accuracy.
pub fn sin_pi(w: Complex64) -> Complex64 {
    let n = w.re.round();
    let f = Complex64::new(w.re - n, w.im);
    let s = (f * PI).sin();
    if (n as i64) % 2 == 0 {
        s
    } else {
        -s
    }
}

/// `ln sin(π w)`, stable for large `|Im w|` where `sin` itself overflows.
fn ln_sin_pi(w: Complex64) -> Complex64 {
    let i = Complex64::i();
    if w.im > 20.0 {
        // sin(πw) = -e^{-iπw} (1 - e^{2iπw}) / (2i)
        let e = (2.0 * i * PI * w).exp();
        -i * PI * w - (2.0 * i).ln() + (-e).ln_1p_c() + Complex64::new(0.0, PI)
    } else if w.im < -20.0 {
        // sin(πw) = e^{iπw} (1 - e^{-2iπw}) / (2i)
        let e = (-2.0 * i * PI * w).exp();
        i * PI * w - (2.0 * i).ln() + (-e).ln_1p_c()
    } else {
        sin_pi(w).ln()
    }
}

trait Ln1p {
    fn ln_1p_c(self) -> Complex64;
}

impl Ln1p for Complex64 {
    fn ln_1p_c(self) -> Complex64 {
        if self.norm() < 1e-8 {
            self - 0.5 * self * self
        } else {
            (1.0 + self).ln()
        }
    }
}

/// `ln Γ(w)` on the whole plane minus the poles. The imaginary part is not
/// reduced to the principal branch.
pub fn ln_cgamma(w: Complex64) -> Result<Complex64> {
    if near_nonpositive_integer(w, POLE_WINDOW).is_some() {
        return Err(Error::Pole {
            function: "gamma",
            arg: w,
        });
    }
    if w.re >= 0.5 {
        Ok(ln_gamma_right(w))
    } else {
        Ok(Complex64::new(PI.ln(), 0.0) - ln_sin_pi(w) - ln_gamma_right(1.0 - w))
    }
}

/// Complex gamma function.
pub fn cgamma(w: Complex64) -> Result<Complex64> {
    if near_nonpositive_integer(w, POLE_WINDOW).is_some() {
        return Err(Error::Pole {
            function: "gamma",
            arg: w,
        });
    }
    if w.re >= 0.5 {
        Ok(ln_gamma_right(w).exp())
    } else {
        Ok(PI / (sin_pi(w) * ln_gamma_right(1.0 - w).exp()))
    }
}

/// Reciprocal gamma function `1/Γ(w)`; entire, exactly zero at the poles of
/// `Γ`.
pub fn rgamma(w: Complex64) -> Complex64 {
    if w.re >= 0.5 {
        (-ln_gamma_right(w)).exp()
    } else {
        if w.im == 0.0 && w.re == w.re.round() {
            return Complex64::new(0.0, 0.0);
        }
        sin_pi(w) * ln_gamma_right(1.0 - w).exp() / PI
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn factorial_and_half() {
        assert!(rel(cgamma(c(5.0, 0.0)).unwrap(), c(24.0, 0.0)) < 1e-14);
        let sqrt_pi = PI.sqrt();
        assert!(rel(cgamma(c(0.5, 0.0)).unwrap(), c(sqrt_pi, 0.0)) < 1e-14);
        assert!(rel(cgamma(c(-0.5, 0.0)).unwrap(), c(-2.0 * sqrt_pi, 0.0)) < 1e-14);
    }

    #[test]
    fn imaginary_unit_modulus() {
        let g = cgamma(c(0.0, 1.0)).unwrap();
        let expected = PI / PI.sinh();
        assert!((g.norm_sqr() - expected).abs() < 1e-13);
        assert!((expected - 0.272_029_054_982).abs() < 1e-12);
    }

    #[test]
    fn poles_are_errors() {
        for k in 0..5 {
            let w = c(-(k as f64), 0.0);
            match cgamma(w) {
                Err(Error::Pole { arg, .. }) => assert_eq!(arg, w),
                other => panic!("expected pole, got {other:?}"),
            }
            assert_eq!(rgamma(w), c(0.0, 0.0));
        }
        assert!(cgamma(c(-3.0 + 1e-13, 0.0)).is_err());
        assert!(cgamma(c(-3.0 + 1e-9, 0.0)).is_ok());
    }

    #[test]
    fn large_factorials() {
        // 30! and 49!
        let f30 = 2.652_528_598_121_910_6e32;
        assert!(rel(cgamma(c(31.0, 0.0)).unwrap(), c(f30, 0.0)) < 1e-13);
        let f49 = 6.082_818_640_342_675e62;
        assert!(rel(cgamma(c(50.0, 0.0)).unwrap(), c(f49, 0.0)) < 1e-13);
    }

    #[test]
    fn ln_gamma_matches_gamma() {
        for &w in &[c(0.3, 2.0), c(-4.7, 1.5), c(12.0, -30.0), c(-20.5, 0.25)] {
            let a = ln_cgamma(w).unwrap().exp();
            let b = cgamma(w).unwrap();
            assert!(rel(a, b) < 1e-12, "{w}: {a} vs {b}");
        }
    }

    #[test]
    fn ln_gamma_far_imaginary() {
        // |Γ(iy)|² = π / (y sinh πy); compare logs for y beyond sinh overflow
        for &y in &[30.0, 80.0, 300.0] {
            let lg = ln_cgamma(c(0.0, y)).unwrap();
            let expected = 0.5 * (PI.ln() - f64::ln(y) - (PI * y - 2f64.ln()));
            assert!((lg.re - expected).abs() < 1e-10 * expected.abs(), "y={y}");
            let lg = ln_cgamma(c(-0.3, -y)).unwrap();
            let direct = ln_cgamma(c(0.7, -y)).unwrap() - c(-0.3, -y).ln();
            assert!((lg.re - direct.re).abs() < 1e-10 * direct.re.abs());
        }
    }

    #[test]
    fn reciprocal_near_pole() {
        // 1/Γ(-k + h) ≈ (-1)^k k! h
        let w = -3.0 + 1e-10;
        let h = w + 3.0;
        let r = rgamma(c(w, 0.0));
        assert!((r.re / (-6.0 * h) - 1.0).abs() < 1e-8);
    }
}
