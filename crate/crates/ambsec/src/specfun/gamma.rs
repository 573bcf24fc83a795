//! Gamma function on the real line and the principal-branch log-gamma on the
//! complex plane.
//!
//! Mellin–Barnes contours probe gamma factors far up the imaginary axis where
//! plain products overflow, so everything here works in the log domain: a
//! fixed-coefficient Lanczos approximation on the right half-plane plus the
//! reflection formula on the left.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GammaError {
    /// Gamma has poles at 0, -1, -2, ...
    #[error("gamma pole at nonpositive integer {0}")]
    Pole(f64),
}

// Lanczos coefficients, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_7;

fn lanczos_sum(z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(LANCZOS[0], 0.0);
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    acc
}

/// Principal branch of `ln Γ(z)`.
///
/// Errors on the poles (nonpositive integers); accurate to roughly 1e-13
/// relative elsewhere.
pub fn ln_gamma_complex(z: Complex64) -> Result<Complex64, GammaError> {
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.floor() {
        return Err(GammaError::Pole(z.re));
    }
    if z.re < 0.5 {
        // Reflection: ln Γ(z) = ln π − ln sin(πz) − ln Γ(1−z).
        let ln_pi = std::f64::consts::PI.ln();
        return Ok(ln_pi - ln_sin_pi(z) - ln_gamma_complex(Complex64::new(1.0, 0.0) - z)?);
    }
    let zm1 = z - 1.0;
    let t = zm1 + LANCZOS_G + 0.5;
    Ok(LN_SQRT_2PI + (zm1 + 0.5) * t.ln() - t + lanczos_sum(zm1).ln())
}

/// `ln sin(πz)` without overflow for large `|Im z|`.
///
/// For |Im z| beyond a few units, `sin` overflows; use
/// `sin(πz) = (e^{iπz} − e^{−iπz}) / 2i` keeping only the dominant
/// exponential in log form.
fn ln_sin_pi(z: Complex64) -> Complex64 {
    let pi = std::f64::consts::PI;
    if z.im.abs() < 8.0 {
        // Reduce the real part to keep sin well-conditioned.
        let k = z.re.round();
        let zr = Complex64::new(z.re - k, z.im);
        let s = (pi * zr).sin();
        let mut v = s.ln();
        // sin(π(zr + k)) = (−1)^k sin(π zr)
        if (k as i64).rem_euclid(2) != 0 {
            v += Complex64::new(0.0, pi); // ln(−1), principal-ish branch is fine for |Γ| uses
        }
        return v;
    }
    // sin(πz) = −(1/2i) e^{−iπz} (1 − e^{2iπz})   [Im z > 0: |e^{2iπz}| < 1]
    let i = Complex64::new(0.0, 1.0);
    if z.im > 0.0 {
        let small = (2.0 * pi * i * z).exp();
        -i * pi * z + (Complex64::new(1.0, 0.0) - small).ln() - (2.0 * i).ln()
    } else {
        let small = (-2.0 * pi * i * z).exp();
        i * pi * z + (Complex64::new(1.0, 0.0) - small).ln() - (-2.0 * i).ln()
    }
}

/// `ln Γ(x)` for real `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    ln_gamma_complex(Complex64::new(x, 0.0))
        .expect("x > 0 has no pole")
        .re
}

/// Γ(x) for real x away from the poles.
pub fn gamma(x: f64) -> Result<f64, GammaError> {
    if x <= 0.0 && x == x.floor() {
        return Err(GammaError::Pole(x));
    }
    if x > 0.0 {
        Ok(ln_gamma(x).exp())
    } else {
        // Reflection on the real axis.
        let pi = std::f64::consts::PI;
        Ok(pi / ((pi * x).sin() * ln_gamma(1.0 - x).exp()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_factorials() {
        assert!((gamma(1.0).unwrap() - 1.0).abs() < 1e-14);
        assert!((gamma(5.0).unwrap() - 24.0).abs() < 24.0 * 1e-13);
    }

    #[test]
    fn poles_rejected() {
        assert_eq!(gamma(0.0), Err(GammaError::Pole(0.0)));
        assert_eq!(gamma(-3.0), Err(GammaError::Pole(-3.0)));
        assert!(ln_gamma_complex(Complex64::new(-2.0, 0.0)).is_err());
    }

    #[test]
    fn reflection_identity_high_on_contour() {
        // ln|Γ(z)Γ(1−z)| = ln|π / sin(πz)| at z = 0.5 + 14i, where
        // sin(π(0.5 + 14i)) = cosh(14π) and ln cosh t = t + ln(1+e^{−2t}) − ln 2.
        let z = Complex64::new(0.5, 14.0);
        let lhs = (ln_gamma_complex(z).unwrap()
            + ln_gamma_complex(Complex64::new(1.0, 0.0) - z).unwrap())
        .re;
        let pi = std::f64::consts::PI;
        let ln_cosh = 14.0 * pi + (1.0 + (-28.0 * pi).exp()).ln() - std::f64::consts::LN_2;
        let rhs = pi.ln() - ln_cosh;
        let rel = ((lhs - rhs) / rhs).abs();
        assert!(rel < 1e-10, "reflection residual {rel}");
    }

    #[test]
    fn half_integer_value() {
        // Γ(2.5) = 3/4 · √π
        let exact = 0.75 * std::f64::consts::PI.sqrt();
        assert!((gamma(2.5).unwrap() - exact).abs() / exact < 1e-13);
    }

    #[test]
    fn negative_noninteger() {
        // Γ(−0.5) = −2√π
        let exact = -2.0 * std::f64::consts::PI.sqrt();
        assert!((gamma(-0.5).unwrap() - exact).abs() / exact.abs() < 1e-12);
    }
}
