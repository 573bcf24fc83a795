//! Distribution of the legitimate-receiver SINR.
//!
//! The coherently combined channel power `W = |h_direct + Σ φ_k h_cascade|²`
//! has the radial characteristic function
//!
//! ```text
//! Φ(t) = e^{−Ω t} · Π_k (1 + β_k t)^{−1}
//! ```
//!
//! (direct Rayleigh link times one factor per device cascade). Two
//! independent evaluation routes recover the density and CDF from Φ:
//!
//! * reference: the oscillatory inversion integrals
//!   `f_W(w) = ∫ J0(2√(wt)) Φ(t) dt` and
//!   `F_W(w) = ∫ √(w/t) J1(2√(wt)) Φ(t) dt`, partitioned zero-to-zero with
//!   series acceleration (plain adaptive quadrature stalls at large w);
//! * contour: the exact Mellin–Barnes form
//!   `f_W(w) = (1/2πi) ∫ Γ(s) G(1−s)/Γ(1−s) w^{−s} ds` on Re s = 1/2, where
//!   `G(ζ) = ∫ t^{ζ−1} Φ(t) dt` is sampled once per parameter set as a
//!   Fourier sum on a log grid, making whole CDF curves cheap.
//!
//! The SINR is γ = ρW with ρ = P/σ_r², so densities rescale by 1/ρ.

use num_complex::Complex64;

use super::AnalyticError;
use crate::specfun::oscillatory::wynn_epsilon;
use crate::specfun::quad::{gauss_legendre_nodes, integrate, Domain, QuadratureSpec};
use crate::specfun::{bessel_j0, bessel_j1, j0_zero, j1_zero, ln_gamma_complex};
use crate::sysmodel::DerivedParams;

/// Which evaluation path to use for the legitimate-side distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SinrDistRoute {
    /// Oscillatory kernel-inversion quadrature (the reference).
    HankelReference,
    /// Mellin–Barnes contour with sampled Mellin kernel (the fast path).
    MellinContour,
}

/// Radial characteristic function of the composite channel power.
pub(crate) fn phi_composite(t: f64, omega: f64, betas: &[f64]) -> f64 {
    let mut v = (-omega * t).exp();
    for &b in betas {
        v /= 1.0 + b * t;
    }
    v
}

/// `∫_0^∞ Φ(t) dt` — the density of W at the origin, and the constant in
/// the high-SNR expansion.
pub(crate) fn phi_integral(omega: f64, betas: &[f64], rel_tol: f64) -> Result<f64, AnalyticError> {
    let spec = QuadratureSpec { rel_tol, max_subdivisions: 40000, ..Default::default() };
    let r = integrate(|t| phi_composite(t, omega, betas), Domain::SemiInfinite(0.0), &spec)?;
    Ok(r.value)
}

/// Radius beyond which `r·Φ(r²/4)` is negligible relative to its peak.
fn envelope_cutoff(omega: f64, betas: &[f64]) -> f64 {
    let scale = 1.0 / (omega + betas.iter().sum::<f64>());
    let mut r = 2.0 * scale.sqrt();
    let mut peak = 0.0f64;
    loop {
        let v = (1.0 + r) * phi_composite(r * r / 4.0, omega, betas);
        peak = peak.max(v);
        if v < 1e-19 * peak || r > 1e9 {
            return r;
        }
        r *= 1.25;
    }
}

/// Shared machinery for the density and CDF inversions: head integral up to
/// the first kernel zero, then zero-to-zero Gauss panels fed into epsilon
/// acceleration.
fn oscillatory_inversion<G, Z>(
    integrand: G,
    zero_at: Z,
    r_max: f64,
    rel_tol: f64,
) -> Result<(f64, f64), AnalyticError>
where
    G: Fn(f64) -> f64,
    Z: Fn(usize) -> f64,
{
    let head_spec = QuadratureSpec { rel_tol: rel_tol * 0.1, max_subdivisions: 20000, ..Default::default() };
    let z1 = zero_at(1);
    if z1 >= r_max {
        // Kernel never completes a half-cycle before the envelope dies:
        // effectively non-oscillatory.
        let r = integrate(&integrand, Domain::Finite(0.0, r_max), &head_spec)?;
        return Ok((r.value, r.err_estimate));
    }
    let head = integrate(&integrand, Domain::Finite(0.0, z1), &head_spec)?;
    let (nodes, weights) = gauss_legendre_nodes(31);
    let panel = |a: f64, b: f64| -> f64 {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut acc = 0.0;
        for (&x, &w) in nodes.iter().zip(weights) {
            acc += w * integrand(c + h * x);
        }
        acc * h
    };
    let mut sums = Vec::with_capacity(64);
    let mut total = head.value;
    sums.push(total);
    let mut prev_z = z1;
    let mut best = total;
    let mut best_err = f64::INFINITY;
    let max_segments = 700;
    for n in 2..=max_segments {
        let z = zero_at(n);
        let s = panel(prev_z, z);
        prev_z = z;
        total += s;
        sums.push(total);
        let scale = best.abs().max(total.abs()).max(1e-300);
        if prev_z > r_max && s.abs() < 1e-17 * scale {
            // Envelope exhausted: the plain sum is already converged.
            return Ok((total, head.err_estimate + s.abs() + 1e-16 * scale));
        }
        if sums.len() >= 6 {
            let (est, stab) = wynn_epsilon(&sums);
            let err = stab + head.err_estimate;
            if err < best_err {
                best = est;
                best_err = err;
            }
            if best_err < rel_tol * best.abs().max(1e-300) {
                return Ok((best, best_err));
            }
        }
    }
    // Ran out of segments: report the best accelerated value with its error.
    if best_err.is_finite() {
        Ok((best, best_err))
    } else {
        Err(AnalyticError::NonConvergent {
            what: "oscillatory kernel inversion".into(),
            value: best,
            err: best_err,
        })
    }
}

/// Density of W at `w` via the reference oscillatory route.
pub(crate) fn density_w_hankel(
    w: f64,
    omega: f64,
    betas: &[f64],
    rel_tol: f64,
) -> Result<(f64, f64), AnalyticError> {
    if w < 0.0 {
        return Err(AnalyticError::Domain(format!("w must be >= 0, got {w}")));
    }
    if w == 0.0 {
        return Ok((phi_integral(omega, betas, rel_tol)?, rel_tol));
    }
    let b = w.sqrt();
    let r_max = envelope_cutoff(omega, betas);
    oscillatory_inversion(
        |r| 0.5 * r * bessel_j0(b * r) * phi_composite(r * r / 4.0, omega, betas),
        |n| j0_zero(n) / b,
        r_max,
        rel_tol,
    )
}

/// CDF of W at `w` via the reference oscillatory route.
pub(crate) fn cdf_w_hankel(
    w: f64,
    omega: f64,
    betas: &[f64],
    rel_tol: f64,
) -> Result<(f64, f64), AnalyticError> {
    if w < 0.0 {
        return Err(AnalyticError::Domain(format!("w must be >= 0, got {w}")));
    }
    if w == 0.0 {
        return Ok((0.0, 0.0));
    }
    let b = w.sqrt();
    let r_max = envelope_cutoff(omega, betas);
    let (v, e) = oscillatory_inversion(
        |r| b * bessel_j1(b * r) * phi_composite(r * r / 4.0, omega, betas),
        |n| j1_zero(n) / b,
        r_max,
        rel_tol,
    )?;
    // Float fuzz can push the value a hair outside [0, 1].
    Ok((v.clamp(0.0, 1.0), e))
}

/// Mellin transform of Φ sampled along the inversion contour, plus the
/// gamma-ratio weights for the density and CDF kernels. Built once per
/// parameter set; each evaluation afterwards is a short dot product.
pub struct LegitDistribution {
    rho: f64,
    tau_step: f64,
    /// weights_pdf[k] = Γ(s_k)/Γ(1−s_k)·G(1−s_k), s_k = 1/2 + i k·step
    weights_pdf: Vec<Complex64>,
    /// weights_cdf[k] = Γ(s_k)/Γ(2−s_k)·G(1−s_k)
    weights_cdf: Vec<Complex64>,
    /// f_W(0) = ∫ Φ — the density is flat here and the w^{−s} contour
    /// magnitudes explode, so tiny w short-circuits to this value.
    origin_density: f64,
    /// Scale of W for the origin cutoff.
    w_scale: f64,
}

pub(crate) const CONTOUR_ANCHOR: f64 = 0.5;

/// Sample `G(anchor − iτ) = ∫ t^{−1/2−iτ} Φ(t) dt` on a τ grid as Fourier
/// sums over a log-spaced sampling of Φ.
pub(crate) fn sample_mellin_kernel(
    omega: f64,
    betas: &[f64],
    tau_max: f64,
    tau_step: f64,
) -> Vec<Complex64> {
    // h(y) = e^{y/2} Φ(e^y): two-sided decay (e^{y/2} left, superexponential
    // right), so the plain trapezoid converges spectrally. The y step is set
    // by aliasing: 2π/hy must comfortably exceed 2·tau_max.
    let hy = (std::f64::consts::PI / (tau_max + 40.0)).min(0.045);
    let scale = 1.0 / (omega + betas.iter().sum::<f64>());
    let y_peak = scale.ln();
    let h = |y: f64| (0.5 * y).exp() * phi_composite(y.exp(), omega, betas);
    let h_peak = h(y_peak).max(h(y_peak + 1.0)).max(h(y_peak - 1.0));
    // Left tail: e^{y/2} < 1e−18·peak; right tail: scan for the
    // superexponential cutoff.
    let y_lo = 2.0 * (1e-18 * h_peak).ln();
    let mut y_hi = y_peak;
    while h(y_hi) > 1e-20 * h_peak {
        y_hi += 0.5;
    }
    let n = ((y_hi - y_lo) / hy).ceil() as usize + 1;
    let samples: Vec<(f64, f64)> = (0..n)
        .map(|m| {
            let y = y_lo + m as f64 * hy;
            (y, h(y) * hy)
        })
        .collect();
    let n_tau = (tau_max / tau_step).ceil() as usize + 1;
    (0..n_tau)
        .map(|k| {
            let tau = k as f64 * tau_step;
            let mut acc = Complex64::new(0.0, 0.0);
            for &(y, hv) in &samples {
                acc += hv * Complex64::new(0.0, -tau * y).exp();
            }
            acc
        })
        .collect()
}

impl LegitDistribution {
    /// Build the contour tables for the given parameters.
    pub fn new(dp: &DerivedParams) -> Self {
        Self::with_contour(dp, 42.0, 0.05)
    }

    pub(crate) fn with_contour(dp: &DerivedParams, tau_max: f64, tau_step: f64) -> Self {
        let g = sample_mellin_kernel(dp.omega_tr, &dp.beta, tau_max, tau_step);
        let mut weights_pdf = Vec::with_capacity(g.len());
        let mut weights_cdf = Vec::with_capacity(g.len());
        for (k, gv) in g.iter().enumerate() {
            let s = Complex64::new(CONTOUR_ANCHOR, k as f64 * tau_step);
            let one = Complex64::new(1.0, 0.0);
            let ln_gs = ln_gamma_complex(s).expect("no pole on the contour");
            let ln_g1 = ln_gamma_complex(one - s).expect("no pole");
            let ln_g2 = ln_gamma_complex(2.0 * one - s).expect("no pole");
            weights_pdf.push((ln_gs - ln_g1).exp() * gv);
            weights_cdf.push((ln_gs - ln_g2).exp() * gv);
        }
        let origin_density = phi_integral(dp.omega_tr, &dp.beta, 1e-10).unwrap_or(f64::NAN);
        Self {
            rho: dp.p_lin / dp.sigma_r2,
            tau_step,
            weights_pdf,
            weights_cdf,
            origin_density,
            w_scale: dp.omega_tr + dp.beta.iter().sum::<f64>(),
        }
    }

    /// Density of the SINR γ = ρW at `gamma`.
    pub fn pdf(&self, gamma: f64) -> f64 {
        if gamma < 0.0 {
            return 0.0;
        }
        let w = gamma / self.rho;
        if w < 1e-8 * self.w_scale {
            return self.origin_density / self.rho;
        }
        let ln_w = w.ln();
        // f_W(w) = (step/π) Σ' Re[ weight_k · e^{−s_k ln w} ]
        let mut acc = 0.5 * (self.weights_pdf[0] * Complex64::new(-CONTOUR_ANCHOR * ln_w, 0.0).exp()).re;
        for (k, wt) in self.weights_pdf.iter().enumerate().skip(1) {
            let s = Complex64::new(CONTOUR_ANCHOR, k as f64 * self.tau_step);
            acc += (wt * (-s * ln_w).exp()).re;
        }
        (acc * self.tau_step / std::f64::consts::PI / self.rho).max(0.0)
    }

    /// CDF of the SINR at `gamma`.
    pub fn cdf(&self, gamma: f64) -> f64 {
        if gamma <= 0.0 {
            return 0.0;
        }
        let w = gamma / self.rho;
        let ln_w = w.ln();
        // F_W(w) = (step/π) Σ' Re[ weight_k · w^{1−s_k} ]
        let one = Complex64::new(1.0, 0.0);
        let mut acc = 0.5
            * (self.weights_cdf[0] * ((one - Complex64::new(CONTOUR_ANCHOR, 0.0)) * ln_w).exp()).re;
        for (k, wt) in self.weights_cdf.iter().enumerate().skip(1) {
            let s = Complex64::new(CONTOUR_ANCHOR, k as f64 * self.tau_step);
            acc += (wt * ((one - s) * ln_w).exp()).re;
        }
        (acc * self.tau_step / std::f64::consts::PI).clamp(0.0, 1.0)
    }
}

/// Density of the legitimate SINR at `gamma` by the requested route.
pub fn legit_pdf(
    gamma: f64,
    dp: &DerivedParams,
    route: SinrDistRoute,
) -> Result<f64, AnalyticError> {
    if gamma < 0.0 {
        return Err(AnalyticError::Domain(format!("gamma must be >= 0, got {gamma}")));
    }
    match route {
        SinrDistRoute::HankelReference => {
            let rho = dp.p_lin / dp.sigma_r2;
            let (v, _) = density_w_hankel(gamma / rho, dp.omega_tr, &dp.beta, 1e-9)?;
            Ok((v / rho).max(0.0))
        }
        SinrDistRoute::MellinContour => Ok(LegitDistribution::new(dp).pdf(gamma)),
    }
}

/// CDF of the legitimate SINR at `gamma` by the requested route.
pub fn legit_cdf(
    gamma: f64,
    dp: &DerivedParams,
    route: SinrDistRoute,
) -> Result<f64, AnalyticError> {
    if gamma < 0.0 {
        return Err(AnalyticError::Domain(format!("gamma must be >= 0, got {gamma}")));
    }
    match route {
        SinrDistRoute::HankelReference => {
            let rho = dp.p_lin / dp.sigma_r2;
            let (v, _) = cdf_w_hankel(gamma / rho, dp.omega_tr, &dp.beta, 1e-9)?;
            Ok(v)
        }
        SinrDistRoute::MellinContour => Ok(LegitDistribution::new(dp).cdf(gamma)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sysmodel::{derive, SystemConfig};

    fn defaults(k: usize) -> DerivedParams {
        derive(&SystemConfig { num_bds: k, ..Default::default() }).unwrap()
    }

    #[test]
    fn no_device_reduces_to_exponential_density() {
        // K = 0: density = (1/(ρΩ)) e^{−γ/(ρΩ)}
        let dp = defaults(0);
        let mean = dp.legit_snr() * dp.omega_tr / dp.omega_tr; // ρ·Ω_tr
        for i in [0usize, 1, 3, 10, 30] {
            let gamma = mean * i as f64 / 10.0;
            let exact = (-gamma / mean).exp() / mean;
            let hankel = legit_pdf(gamma, &dp, SinrDistRoute::HankelReference).unwrap();
            let contour = legit_pdf(gamma, &dp, SinrDistRoute::MellinContour).unwrap();
            assert!(((hankel - exact) / exact).abs() < 1e-6, "hankel at {gamma}: {hankel} vs {exact}");
            assert!(((contour - exact) / exact).abs() < 1e-6, "contour at {gamma}: {contour} vs {exact}");
        }
    }

    #[test]
    fn no_device_exponential_cdf() {
        let dp = defaults(0);
        let mean = dp.legit_snr();
        for frac in [0.1, 0.5, 1.0, 2.0, 5.0] {
            let gamma = mean * frac;
            let exact = 1.0 - (-frac as f64).exp();
            let hankel = legit_cdf(gamma, &dp, SinrDistRoute::HankelReference).unwrap();
            let contour = legit_cdf(gamma, &dp, SinrDistRoute::MellinContour).unwrap();
            assert!((hankel - exact).abs() < 1e-9, "hankel {hankel} vs {exact}");
            assert!((contour - exact).abs() < 1e-8, "contour {contour} vs {exact}");
        }
        assert_eq!(legit_cdf(0.0, &dp, SinrDistRoute::HankelReference).unwrap(), 0.0);
    }

    #[test]
    fn routes_agree_with_devices() {
        // K = 2 and K = 20 at the mean SINR: the two routes must agree to 1e−4
        // relative on the bulk.
        for k in [2usize, 20] {
            let dp = defaults(k);
            let rho = dp.p_lin / dp.sigma_r2;
            let mean_w = dp.omega_tr + dp.beta.iter().sum::<f64>();
            for frac in [0.2, 1.0, 4.0] {
                let gamma = rho * mean_w * frac;
                let h = legit_pdf(gamma, &dp, SinrDistRoute::HankelReference).unwrap();
                let c = legit_pdf(gamma, &dp, SinrDistRoute::MellinContour).unwrap();
                if h > 1e-12 {
                    assert!(
                        ((h - c) / h).abs() < 1e-4,
                        "K={k} frac={frac}: hankel {h} vs contour {c}"
                    );
                }
            }
        }
    }

    #[test]
    fn density_normalizes() {
        // ∫ f dγ = 1 within 1e−5 (integrate in w-space directly).
        let dp = defaults(3);
        let spec = QuadratureSpec { rel_tol: 1e-8, max_subdivisions: 8000, ..Default::default() };
        let dist = LegitDistribution::new(&dp);
        let rho = dp.p_lin / dp.sigma_r2;
        let mean = rho * (dp.omega_tr + dp.beta.iter().sum::<f64>());
        let r = integrate(|g| dist.pdf(g), Domain::Finite(0.0, 60.0 * mean), &spec).unwrap();
        assert!((r.value - 1.0).abs() < 1e-5, "mass {}", r.value);
    }

    #[test]
    fn cdf_monotone_and_saturates() {
        let dp = defaults(20);
        let dist = LegitDistribution::new(&dp);
        let rho = dp.p_lin / dp.sigma_r2;
        let mean = rho * (dp.omega_tr + dp.beta.iter().sum::<f64>());
        let mut prev = 0.0;
        for i in 1..=40 {
            let v = dist.cdf(mean * i as f64 / 8.0);
            assert!(v >= prev - 1e-12);
            prev = v;
        }
        assert!(dist.cdf(mean * 40.0) > 0.999);
    }

    #[test]
    fn negative_gamma_rejected() {
        let dp = defaults(1);
        assert!(legit_pdf(-1.0, &dp, SinrDistRoute::HankelReference).is_err());
    }
}
