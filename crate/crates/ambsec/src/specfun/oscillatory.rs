//! Zero-partitioned quadrature for Bessel-kernel integrals on [0, ∞).
//!
//! Plain adaptive rules stall on `∫ J_ν(b r) g(r) dr` once many oscillations
//! carry significant mass, so the integral is split at consecutive kernel
//! zeros and the alternating partial sums are accelerated with Wynn's
//! epsilon algorithm.

use super::quad::gauss_legendre_nodes;

/// Wynn epsilon acceleration of a sequence of partial sums.
///
/// Returns the extrapolated limit and a stability-based error estimate
/// (difference between the last two even-column entries).
pub fn wynn_epsilon(partial_sums: &[f64]) -> (f64, f64) {
    let n = partial_sums.len();
    if n == 0 {
        return (0.0, f64::INFINITY);
    }
    if n == 1 {
        return (partial_sums[0], f64::INFINITY);
    }
    let mut prev: Vec<f64> = vec![0.0; n + 1]; // ε_{-1} column
    let mut cur: Vec<f64> = partial_sums.to_vec(); // ε_0 column
    let mut best = *partial_sums.last().unwrap();
    let mut prev_best = best;
    for _col in 1..n {
        let m = cur.len() - 1;
        let mut next = Vec::with_capacity(m);
        for i in 0..m {
            let diff = cur[i + 1] - cur[i];
            if diff == 0.0 {
                // Converged exactly; propagate.
                next.push(prev[i + 1]);
            } else {
                next.push(prev[i + 1] + 1.0 / diff);
            }
        }
        prev = std::mem::take(&mut cur);
        cur = next;
        if cur.is_empty() {
            break;
        }
        // Even columns approximate the limit.
        if _col % 2 == 0 {
            prev_best = best;
            best = *cur.last().unwrap();
        }
    }
    (best, (best - prev_best).abs())
}

/// `∫_0^∞ g(r) dr` where `g` changes sign at the given kernel zeros
/// (ascending). Integrates `[0, z_1]`, then zero-to-zero segments, feeding
/// the partial sums to epsilon acceleration.
///
/// `g` must decay (absolutely integrable or alternating with decaying
/// envelope). Returns (value, error estimate).
pub fn integrate_zero_partitioned<F, Z>(g: F, mut zeros: Z, rel_tol: f64, max_segments: usize) -> (f64, f64)
where
    F: Fn(f64) -> f64,
    Z: FnMut(usize) -> f64,
{
    let (nodes, weights) = gauss_legendre_nodes(31);
    let seg = |a: f64, b: f64| -> f64 {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut acc = 0.0;
        for (&x, &w) in nodes.iter().zip(weights) {
            acc += w * g(c + h * x);
        }
        acc * h
    };
    // Head [0, z1] may span many non-oscillatory e-folds; bisect it a few
    // times for safety.
    let z1 = zeros(1);
    let mut head = 0.0;
    let parts = 8;
    for i in 0..parts {
        head += seg(z1 * i as f64 / parts as f64, z1 * (i + 1) as f64 / parts as f64);
    }
    let mut sums = Vec::with_capacity(max_segments + 1);
    let mut total = head;
    sums.push(total);
    let mut best = total;
    let mut best_err = f64::INFINITY;
    let mut prev_z = z1;
    for k in 2..=max_segments + 1 {
        let z = zeros(k);
        let s = seg(prev_z, z);
        prev_z = z;
        total += s;
        sums.push(total);
        if sums.len() >= 4 {
            let (est, stab) = wynn_epsilon(&sums);
            let err = stab.max(s.abs() * 1e-3);
            if err < best_err {
                best = est;
                best_err = err;
            }
            let scale = best.abs().max(1e-300);
            if best_err < rel_tol * scale || s.abs() < 1e-16 * scale {
                return (best, best_err);
            }
        }
    }
    (best, best_err)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::bessel::{bessel_j0, bessel_j1, j0_zero, j1_zero};

    #[test]
    fn accelerates_alternating_series() {
        // Σ (−1)^{k+1}/k = ln 2; partial sums converge like 1/n.
        let mut s = 0.0;
        let sums: Vec<f64> = (1..30)
            .map(|k| {
                s += if k % 2 == 1 { 1.0 } else { -1.0 } / k as f64;
                s
            })
            .collect();
        let (v, _) = wynn_epsilon(&sums);
        assert!((v - std::f64::consts::LN_2).abs() < 1e-12, "got {v}");
    }

    #[test]
    fn weber_sonine_via_partition() {
        // ∫_0^∞ r J0(b r) e^{−p r²} dr = e^{−b²/(4p)} / (2p)
        let (b, p) = (3.0, 0.4);
        let (v, err) = integrate_zero_partitioned(
            |r| r * bessel_j0(b * r) * (-p * r * r).exp(),
            |n| j0_zero(n) / b,
            1e-12,
            120,
        );
        let exact = (-b * b / (4.0 * p)).exp() / (2.0 * p);
        assert!(((v - exact) / exact).abs() < 1e-10, "v={v} exact={exact} err={err}");
    }

    #[test]
    fn j1_pure_tail() {
        // ∫_0^∞ J1(b r) dr = 1/b — conditionally convergent, pure acceleration test.
        let b = 2.5;
        let (v, _err) = integrate_zero_partitioned(
            |r| bessel_j1(b * r),
            |n| j1_zero(n) / b,
            1e-12,
            200,
        );
        assert!(((v - 1.0 / b) * b).abs() < 1e-9, "got {v}, want {}", 1.0 / b);
    }
}
