//! Distribution of the eavesdropper SINR and its mean.
//!
//! The wiretap SINR is γ_e = S/(σ_e² + I) with S the direct-link power and
//! I the aggregate backscatter interference. Conditioning on I gives the
//! closed-form survival function
//!
//! ```text
//! P(γ_e > x) = e^{−λ σ_e² x} · L_I(λx),     λ = 1/(P Ω_te),
//! ```
//!
//! where the Laplace transform of I factors over devices,
//! `L_I(s) = Π_k u_k e^{u_k} E1(u_k)` with `u_k = 1/(s A_k)`. Everything here
//! is elementary (exponential integrals), no contours needed.

use super::AnalyticError;
use crate::specfun::expint_e1_scaled;
use crate::specfun::quad::{integrate, Domain, QuadratureSpec};
use crate::sysmodel::DerivedParams;

/// Per-device Laplace factor g(u) = u e^u E1(u) ∈ (0, 1), exponentially
/// scaled so it is finite for any u > 0.
fn laplace_factor(u: f64) -> f64 {
    u * expint_e1_scaled(u).expect("u > 0")
}

/// Laplace transform of the aggregate interference at `s > 0`
/// (`s = 0` gives 1). Accumulated in the log domain so large device counts
/// cannot underflow prematurely.
pub fn interference_laplace(s: f64, cap_a: &[f64]) -> f64 {
    if s == 0.0 || cap_a.is_empty() {
        return 1.0;
    }
    let mut ln_acc = 0.0;
    for &a in cap_a {
        ln_acc += laplace_factor(1.0 / (s * a)).ln();
    }
    ln_acc.exp()
}

/// Survival function P(γ_e > x); exact and elementary.
pub fn eve_sf(x: f64, dp: &DerivedParams) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    let lx = dp.lambda_e * x;
    (-lx * dp.sigma_e2).exp() * interference_laplace(lx, &dp.cap_a)
}

/// CDF of the eavesdropper SINR. 0 at x = 0, monotone, → 1.
pub fn eve_cdf(x: f64, dp: &DerivedParams) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    1.0 - eve_sf(x, dp)
}

/// The bracket term 1 + u − e^{−u}/E1(u), positive for all u > 0.
///
/// For large u the direct form cancels catastrophically; switch to the
/// asymptotic expansion 1/u − 3/u² + 13/u³ derived from the continued
/// fraction of E1.
fn pdf_bracket(u: f64) -> f64 {
    if u > 1e3 {
        let inv = 1.0 / u;
        inv * (1.0 - 3.0 * inv + 13.0 * inv * inv)
    } else {
        1.0 + u - 1.0 / expint_e1_scaled(u).expect("u > 0")
    }
}

/// Density of the eavesdropper SINR at x > 0; the derivative of [`eve_cdf`].
pub fn eve_pdf(x: f64, dp: &DerivedParams) -> Result<f64, AnalyticError> {
    if !(x > 0.0) {
        return Err(AnalyticError::Domain(format!("eve_pdf needs x > 0, got {x}")));
    }
    let lam = dp.lambda_e;
    let lx = lam * x;
    let li = interference_laplace(lx, &dp.cap_a);
    let mut bracket_sum = 0.0;
    for &a in &dp.cap_a {
        bracket_sum += pdf_bracket(1.0 / (lx * a));
    }
    let p_omega_te = 1.0 / lam; // P·Ω_te
    let v = lam * (-lx * dp.sigma_e2).exp() * li * (dp.sigma_e2 + p_omega_te / x * bracket_sum);
    Ok(v.max(0.0))
}

/// Mean eavesdropper SINR. `E[S/(N+I)] = P Ω_te ∫ e^{−σ_e² u} L_I(u) du`
/// by independence of S and I.
pub fn gamma_e_bar(dp: &DerivedParams) -> Result<(f64, f64), AnalyticError> {
    mean_with_noise(dp, dp.sigma_e2)
}

/// High-power limit of the mean eavesdropper SINR (drops the noise floor;
/// needs K ≥ 2 for the inverse interference moment to exist).
pub fn gamma_e_bar_high_power(dp: &DerivedParams) -> Result<(f64, f64), AnalyticError> {
    if dp.num_bds() < 2 {
        return Err(AnalyticError::Domain(
            "high-power mean needs K >= 2 (E[1/I] diverges otherwise)".into(),
        ));
    }
    mean_with_noise(dp, 0.0)
}

fn mean_with_noise(dp: &DerivedParams, noise: f64) -> Result<(f64, f64), AnalyticError> {
    let p_omega_te = dp.p_lin * dp.omega_te;
    if dp.cap_a.is_empty() {
        if noise == 0.0 {
            return Err(AnalyticError::Domain("K = 0 has no interference".into()));
        }
        return Ok((p_omega_te / noise, 0.0));
    }
    let spec = QuadratureSpec { rel_tol: 1e-9, max_subdivisions: 60000, ..Default::default() };
    let r = integrate(
        |u: f64| {
            if u <= 0.0 {
                return 0.0;
            }
            (-noise * u).exp() * interference_laplace(u, &dp.cap_a)
        },
        Domain::SemiInfinite(0.0),
        &spec,
    )?;
    Ok((p_omega_te * r.value, p_omega_te * r.err_estimate))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sysmodel::{derive, SystemConfig};

    fn defaults(k: usize) -> DerivedParams {
        derive(&SystemConfig { num_bds: k, ..Default::default() }).unwrap()
    }

    #[test]
    fn no_device_is_exponential() {
        // K = 0: F(x) = 1 − e^{−x σ_e²/(P Ω_te)}
        let dp = defaults(0);
        let mean = dp.eve_direct_snr();
        for frac in [0.1, 1.0, 3.0] {
            let x = mean * frac;
            let exact = 1.0 - (-frac as f64).exp();
            assert!((eve_cdf(x, &dp) - exact).abs() < 1e-12);
        }
        // density reduces to the exponential law
        let x = mean;
        let exact = (-1.0f64).exp() / mean;
        assert!(((eve_pdf(x, &dp).unwrap() - exact) / exact).abs() < 1e-12);
    }

    #[test]
    fn cdf_limits_and_monotonicity() {
        let dp = defaults(20);
        assert_eq!(eve_cdf(0.0, &dp), 0.0);
        let (mean, _) = gamma_e_bar(&dp).unwrap();
        assert!(eve_cdf(1e6 * mean, &dp) > 1.0 - 1e-4);
        let mut prev = 0.0;
        for i in 1..=200 {
            let v = eve_cdf(mean * i as f64 / 20.0, &dp);
            assert!((0.0..=1.0).contains(&v));
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn pdf_is_cdf_derivative() {
        // Centered finite differences of the CDF at 0.1, 1, 10 × mean match
        // the density to 1e−6 absolute.
        let dp = defaults(20);
        let (mean, _) = gamma_e_bar(&dp).unwrap();
        for frac in [0.1, 1.0, 10.0] {
            let x = mean * frac;
            let h = x * 1e-5;
            let fd = (eve_cdf(x + h, &dp) - eve_cdf(x - h, &dp)) / (2.0 * h);
            let pdf = eve_pdf(x, &dp).unwrap();
            assert!((fd - pdf).abs() < 1e-6, "x={x}: fd={fd} pdf={pdf}");
        }
    }

    #[test]
    fn pdf_nonnegative_and_bracket_stable() {
        let dp = defaults(5);
        for exp10 in -8..8 {
            let x = 10f64.powi(exp10);
            assert!(eve_pdf(x, &dp).unwrap() >= 0.0);
        }
        // bracket continuity across the asymptotic switch
        let below = pdf_bracket(999.0);
        let above = pdf_bracket(1001.0);
        assert!(((below - above) / below).abs() < 1e-2);
        for &u in &[1e-6, 0.1, 1.0, 50.0, 1e3, 1e8] {
            assert!(pdf_bracket(u) > 0.0, "bracket({u}) must stay positive");
        }
    }

    #[test]
    fn pdf_normalizes() {
        let dp = defaults(3);
        let spec = QuadratureSpec { rel_tol: 1e-8, max_subdivisions: 40000, ..Default::default() };
        let r = integrate(
            |x| if x > 0.0 { eve_pdf(x, &dp).unwrap() } else { 0.0 },
            Domain::SemiInfinite(0.0),
            &spec,
        )
        .unwrap();
        assert!((r.value - 1.0).abs() < 1e-5, "mass {}", r.value);
    }

    #[test]
    fn mean_matches_pdf_integral() {
        // E[γ_e] from the Laplace identity vs ∫ x f(x) dx.
        let dp = defaults(4);
        let (mean, _) = gamma_e_bar(&dp).unwrap();
        let spec = QuadratureSpec { rel_tol: 1e-9, max_subdivisions: 60000, ..Default::default() };
        let direct = integrate(
            |x| if x > 0.0 { x * eve_pdf(x, &dp).unwrap() } else { 0.0 },
            Domain::SemiInfinite(0.0),
            &spec,
        )
        .unwrap()
        .value;
        assert!(((mean - direct) / direct).abs() < 1e-6, "laplace {mean} vs direct {direct}");
    }

    #[test]
    fn mean_regression_values() {
        // Frozen from an independent high-precision evaluation of the
        // defining integrals.
        let dp = defaults(1);
        let (m1, _) = gamma_e_bar(&dp).unwrap();
        assert!(((m1 - 48.103_152_008_2) / m1).abs() < 1e-7, "K=1 mean {m1}");
        let dp = defaults(20);
        let (m20, _) = gamma_e_bar(&dp).unwrap();
        assert!(((m20 - 0.448_652_988_93) / m20).abs() < 1e-7, "K=20 mean {m20}");
    }

    #[test]
    fn high_power_limit_guards() {
        assert!(gamma_e_bar_high_power(&defaults(1)).is_err());
        let dp = defaults(20);
        let (lim, _) = gamma_e_bar_high_power(&dp).unwrap();
        let (fin, _) = gamma_e_bar(&dp).unwrap();
        // Noise only shrinks the SINR.
        assert!(lim > fin);
    }
}
