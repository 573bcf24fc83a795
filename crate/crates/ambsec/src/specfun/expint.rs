//! Exponential integral E1 and its exponentially scaled companion.
//!
//! The wiretap-side Laplace transform multiplies up to `2K` factors of
//! `u e^u E1(u)` with `u` anywhere from ~1e−6 to far beyond the underflow
//! point of `e^{−u}`, so the scaled form `e^x E1(x)` is the workhorse.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ExpIntError {
    #[error("E1 defined for x > 0, got {0}")]
    Domain(f64),
}

const EULER: f64 = 0.577_215_664_901_532_9;

/// E1(x) = ∫_x^∞ e^{−t}/t dt for x > 0.
pub fn expint_e1(x: f64) -> Result<f64, ExpIntError> {
    if !(x > 0.0) {
        return Err(ExpIntError::Domain(x));
    }
    if x <= 1.0 {
        Ok(e1_series(x))
    } else {
        Ok((-x).exp() * e1_cf_scaled(x))
    }
}

/// e^x · E1(x), stable for arbitrarily large x (→ 1/x as x → ∞).
pub fn expint_e1_scaled(x: f64) -> Result<f64, ExpIntError> {
    if !(x > 0.0) {
        return Err(ExpIntError::Domain(x));
    }
    if x <= 1.0 {
        Ok(x.exp() * e1_series(x))
    } else {
        Ok(e1_cf_scaled(x))
    }
}

fn e1_series(x: f64) -> f64 {
    // E1(x) = −γ − ln x + Σ_{k≥1} (−1)^{k+1} x^k / (k · k!)
    let mut term = 1.0;
    let mut sum = 0.0;
    for k in 1..40 {
        term *= -x / k as f64;
        let add = -term / k as f64;
        sum += add;
        if add.abs() < 1e-18 * sum.abs().max(1e-30) {
            break;
        }
    }
    -EULER - x.ln() + sum
}

fn e1_cf_scaled(x: f64) -> f64 {
    // Continued fraction (modified Lentz):
    // e^x E1(x) = 1/(x+1− 1²/(x+3− 2²/(x+5− ...)))
    let tiny = 1e-300;
    let mut b = x + 1.0;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..200u32 {
        let a = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (b + a * d);
        c = b + a / c;
        let delta = c * d;
        h *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h
}
