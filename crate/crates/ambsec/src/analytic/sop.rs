//! Secrecy outage probability: reference quadrature, contour fast path,
//! high-SNR asymptote, and the secrecy diversity order.

use std::collections::BTreeMap;

use num_complex::Complex64;

use super::eve::{eve_pdf, eve_sf, gamma_e_bar, gamma_e_bar_high_power};
use super::legit::{cdf_w_hankel, phi_integral, sample_mellin_kernel, CONTOUR_ANCHOR};
use super::{AnalyticError, EvalRoute};
use crate::specfun::ln_gamma_complex;
use crate::specfun::quad::{integrate, Domain, QuadratureSpec};
use crate::sysmodel::DerivedParams;

/// Tolerances and contour parameters for the SOP evaluators.
#[derive(Debug, Clone)]
pub struct SopSettings {
    /// Target relative accuracy of the master quadrature.
    pub rel_tol: f64,
    /// Imaginary truncation of the Mellin–Barnes contour.
    pub contour_tau_max: f64,
    /// Contour node spacing.
    pub contour_step: f64,
}

impl Default for SopSettings {
    fn default() -> Self {
        Self { rel_tol: 1e-7, contour_tau_max: 42.0, contour_step: 0.04 }
    }
}

impl SopSettings {
    /// Oracle-grade tolerances for acceptance-level comparisons.
    pub fn tight() -> Self {
        Self { rel_tol: 1e-10, ..Default::default() }
    }
}

/// One SOP evaluation with its provenance and numeric health.
#[derive(Debug, Clone)]
pub struct SecrecyResult {
    pub sop: f64,
    pub route: EvalRoute,
    pub err_estimate: f64,
    pub diagnostics: BTreeMap<String, String>,
}

/// A parameter point bound to the route that should evaluate it.
#[derive(Debug, Clone)]
pub struct SopParams {
    pub derived: DerivedParams,
    pub evaluation_route: EvalRoute,
}

impl SopParams {
    /// Evaluate at these parameters; the result records the route that
    /// actually produced the number (a flagged fast path falls back).
    pub fn evaluate(&self, settings: &SopSettings) -> Result<SecrecyResult, AnalyticError> {
        sop_exact(&self.derived, self.evaluation_route, settings)
    }
}

/// Threshold map of the outage event: γ_r < Θ(1+γ_e) − 1, expressed on the
/// unscaled channel power W = γ_r σ_r²/P.
fn w_of_x(dp: &DerivedParams, x: f64) -> f64 {
    (dp.theta * (1.0 + x) - 1.0) * dp.sigma_r2 / dp.p_lin
}

/// How far into the wiretap tail the outer integral must reach so the
/// remainder (bounded by the survival function, since F ≤ 1) is below
/// `target`.
fn eve_tail_cut(dp: &DerivedParams, target: f64) -> f64 {
    let scale = 1.0 / (dp.lambda_e * dp.sigma_e2);
    let mut x = scale * 1e-3;
    while eve_sf(x, dp) > target && x < scale * 1e6 {
        x *= 2.0;
    }
    x
}

/// Reference route: adaptive quadrature of
/// `∫ F_W(w(x)) f_e(x) dx` with the legitimate CDF evaluated by the
/// oscillatory Hankel inversion. This is the source of truth the other
/// routes are judged against.
pub fn sop_master(dp: &DerivedParams, settings: &SopSettings) -> Result<SecrecyResult, AnalyticError> {
    let cdf_tol = (settings.rel_tol * 0.05).max(1e-12);
    let integrand = |x: f64| -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        let f = eve_pdf(x.max(1e-300), dp).unwrap_or(0.0);
        if f == 0.0 {
            return 0.0;
        }
        let (cdf, _) = cdf_w_hankel(w_of_x(dp, x), dp.omega_tr, &dp.beta, cdf_tol)
            .unwrap_or((f64::NAN, f64::NAN));
        cdf * f
    };
    // Two passes: a coarse one to learn the magnitude, then a cut deep
    // enough that the tail (≤ survival function) is negligible relative to it.
    let coarse_cut = eve_tail_cut(dp, 1e-10);
    let coarse_spec = QuadratureSpec { rel_tol: 1e-4, max_subdivisions: 2000, ..Default::default() };
    let coarse = integrate(integrand, Domain::Finite(0.0, coarse_cut), &coarse_spec)?;
    let tail_target = (settings.rel_tol * 0.1 * coarse.value.max(1e-280)).max(1e-290);
    let x_cut = eve_tail_cut(dp, tail_target);
    let spec = QuadratureSpec {
        rel_tol: settings.rel_tol,
        abs_tol: tail_target.max(1e-300),
        max_subdivisions: 40000,
        ..Default::default()
    };
    let r = integrate(integrand, Domain::Finite(0.0, x_cut), &spec)?;
    let sop = r.value;
    if !(0.0..=1.0 + 1e-9).contains(&sop) || !sop.is_finite() {
        return Err(AnalyticError::InvalidResult(format!(
            "master-route SOP {sop} outside [0, 1]"
        )));
    }
    let err = r.err_estimate + cdf_tol * sop + eve_sf(x_cut, dp);
    let mut diagnostics = BTreeMap::new();
    diagnostics.insert("x_cut".into(), format!("{x_cut:.6e}"));
    diagnostics.insert("subdivisions".into(), format!("{}", r.subdivisions));
    Ok(SecrecyResult {
        sop: sop.clamp(0.0, 1.0),
        route: EvalRoute::MasterIntegral,
        err_estimate: err,
        diagnostics,
    })
}

/// Fractional-moment transform of the wiretap SINR sampled along the
/// contour: T(1−s) = ∫ (1+dx)^{1−s} f_e(x) dx, evaluated for all contour
/// nodes from one set of samples on the v = ln(1+dx) grid.
struct EveMomentSampler {
    /// Simpson-weighted q(v_m)·e^{(1−anchor) v_m}
    base: Vec<f64>,
    /// v_m (the phase coordinate)
    phase: Vec<f64>,
    /// Same with trapezoid weights, for an internal error estimate.
    base_trapezoid: Vec<f64>,
}

impl EveMomentSampler {
    fn build(dp: &DerivedParams, x_cut: f64, n_nodes: usize) -> Self {
        let d = dp.d_ratio;
        let v_max = (d * x_cut).ln_1p();
        let n = n_nodes | 1;
        let h = v_max / (n - 1) as f64;
        let mut base = Vec::with_capacity(n);
        let mut base_trapezoid = Vec::with_capacity(n);
        let mut phase = Vec::with_capacity(n);
        for m in 0..n {
            let v = m as f64 * h;
            let x = (v.exp_m1()) / d;
            let q = eve_pdf(x.max(1e-300), dp).unwrap_or(0.0) * (1.0 + d * x) / d;
            let w_simpson = if m == 0 || m == n - 1 {
                1.0
            } else if m % 2 == 1 {
                4.0
            } else {
                2.0
            } * h
                / 3.0;
            let w_trap = if m == 0 || m == n - 1 { 0.5 } else { 1.0 } * h;
            let boosted = q * ((1.0 - CONTOUR_ANCHOR) * v).exp();
            base.push(w_simpson * boosted);
            base_trapezoid.push(w_trap * boosted);
            phase.push(v);
        }
        Self { base, phase, base_trapezoid }
    }

    /// T(1 − (anchor + iτ)) and the Simpson-vs-trapezoid discrepancy.
    fn moment(&self, tau: f64) -> (Complex64, f64) {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut acc_t = Complex64::new(0.0, 0.0);
        for ((&b, &bt), &v) in self.base.iter().zip(&self.base_trapezoid).zip(&self.phase) {
            let ph = Complex64::new(0.0, -tau * v).exp();
            acc += b * ph;
            acc_t += bt * ph;
        }
        (acc, (acc - acc_t).norm())
    }
}

/// Contour fast path: the outage probability as a single Mellin–Barnes
/// integral
///
/// `P = (1/2πi) ∫ Γ(s)/Γ(2−s) · G(1−s) · a^{1−s} · T(1−s) ds`, a = c σ_r²/P,
///
/// where G is the Mellin transform of the legitimate kernel Φ and T the
/// fractional moment of the wiretap SINR. Both kernels are sampled once;
/// the contour sum is a dot product.
pub fn sop_contour(dp: &DerivedParams, settings: &SopSettings) -> Result<SecrecyResult, AnalyticError> {
    let tau_max = settings.contour_tau_max;
    let ht = settings.contour_step;
    let n_tau = (tau_max / ht).ceil() as usize + 1;

    let g = sample_mellin_kernel(dp.omega_tr, &dp.beta, tau_max, ht);
    let x_cut = eve_tail_cut(dp, 1e-18);
    let v_range = (dp.d_ratio * x_cut).ln_1p();
    let cycles = tau_max * v_range / (2.0 * std::f64::consts::PI);
    let n_v = ((cycles * 40.0) as usize).clamp(2001, 60001);
    let sampler = EveMomentSampler::build(dp, x_cut, n_v);

    let a = dp.c * dp.sigma_r2 / dp.p_lin;
    let ln_a = a.ln();
    let one = Complex64::new(1.0, 0.0);
    let mut terms: Vec<Complex64> = Vec::with_capacity(n_tau);
    let mut inner_err = 0.0f64;
    for (k, gk) in g.iter().enumerate().take(n_tau) {
        let tau = k as f64 * ht;
        let s = Complex64::new(CONTOUR_ANCHOR, tau);
        let ln_ratio = ln_gamma_complex(s).expect("no pole on contour")
            - ln_gamma_complex(2.0 * one - s).expect("no pole");
        let (t_mom, t_err) = sampler.moment(tau);
        let term = (ln_ratio + (one - s) * ln_a).exp() * gk * t_mom;
        inner_err = inner_err
            .max(t_err * (ln_ratio.re + (1.0 - CONTOUR_ANCHOR) * ln_a).exp() * gk.norm());
        terms.push(term);
    }
    let sum_with_stride = |stride: usize| -> f64 {
        let mut acc = 0.5 * terms[0].re;
        let mut k = stride;
        while k < n_tau {
            acc += terms[k].re;
            k += stride;
        }
        acc * (ht * stride as f64) / std::f64::consts::PI
    };
    let full = sum_with_stride(1);
    let half = sum_with_stride(2);
    let tail = terms.last().map(|t| t.norm()).unwrap_or(0.0) * ht * 20.0;
    let err = (full - half).abs() + tail + inner_err * ht * n_tau as f64 + 1e-12 * full.abs();

    let mut diagnostics = BTreeMap::new();
    diagnostics.insert("contour_nodes".into(), format!("{n_tau}"));
    diagnostics.insert("contour_tau_max".into(), format!("{tau_max}"));
    diagnostics.insert("moment_nodes".into(), format!("{}", sampler.base.len()));
    Ok(SecrecyResult {
        sop: full,
        route: EvalRoute::FoxhClosedForm,
        err_estimate: err,
        diagnostics,
    })
}

/// Which mean wiretap SINR the asymptote uses (an open modeling choice; the
/// finite-power mean is the default and the high-power limit is provided
/// for comparison).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EveMeanVariant {
    FinitePower,
    HighPowerLimit,
}

/// High-SNR asymptote:
/// `P ≈ (σ_r²/P) [Θ(1+γ̄_e) − 1] C`, with `C = ∫ Φ(t) dt` the density of the
/// channel power at the origin and γ̄_e the mean wiretap SINR by exact
/// quadrature of its Laplace-transform integral.
pub fn sop_asymptotic(dp: &DerivedParams) -> Result<SecrecyResult, AnalyticError> {
    sop_asymptotic_with(dp, EveMeanVariant::FinitePower)
}

/// Asymptote with an explicit choice of the mean-SINR variant.
pub fn sop_asymptotic_with(
    dp: &DerivedParams,
    variant: EveMeanVariant,
) -> Result<SecrecyResult, AnalyticError> {
    let (ge, ge_err) = match variant {
        EveMeanVariant::FinitePower => gamma_e_bar(dp)?,
        EveMeanVariant::HighPowerLimit => gamma_e_bar_high_power(dp)?,
    };
    let c_leg = phi_integral(dp.omega_tr, &dp.beta, 1e-10)?;
    let lead = dp.sigma_r2 / dp.p_lin;
    let sop = lead * (dp.theta * (1.0 + ge) - 1.0) * c_leg;
    let err = lead * dp.theta * ge_err * c_leg + 1e-9 * sop;
    let mut diagnostics = BTreeMap::new();
    diagnostics.insert("gamma_e_bar".into(), format!("{ge:.12e}"));
    diagnostics.insert("c_leg".into(), format!("{c_leg:.12e}"));
    diagnostics.insert(
        "eve_mean_variant".into(),
        match variant {
            EveMeanVariant::FinitePower => "finite-power".into(),
            EveMeanVariant::HighPowerLimit => "high-power-limit".into(),
        },
    );
    Ok(SecrecyResult { sop, route: EvalRoute::Asymptotic, err_estimate: err, diagnostics })
}

/// Evaluate the SOP by the requested route.
///
/// The contour route is cross-checked against the master route: if the two
/// disagree beyond `max(1e−3 relative, combined error estimates)` the result
/// is flagged `foxh-mismatch` and the master value is returned instead.
pub fn sop_exact(
    dp: &DerivedParams,
    route: EvalRoute,
    settings: &SopSettings,
) -> Result<SecrecyResult, AnalyticError> {
    match route {
        EvalRoute::MasterIntegral => sop_master(dp, settings),
        EvalRoute::Asymptotic => sop_asymptotic(dp),
        EvalRoute::FoxhClosedForm => {
            let master = sop_master(dp, settings)?;
            let contour = sop_contour(dp, settings)?;
            let delta = (contour.sop - master.sop).abs();
            let budget = (1e-3 * master.sop).max(contour.err_estimate + master.err_estimate);
            let in_range = (0.0 - contour.err_estimate..=1.0 + contour.err_estimate)
                .contains(&contour.sop);
            if delta <= budget && in_range {
                let mut out = contour;
                out.sop = out.sop.clamp(0.0, 1.0);
                out.diagnostics.insert("master_value".into(), format!("{:.12e}", master.sop));
                out.diagnostics.insert("route_delta".into(), format!("{delta:.3e}"));
                Ok(out)
            } else {
                let mut out = master;
                out.diagnostics.insert("foxh-mismatch".into(), "true".into());
                out.diagnostics.insert("contour_value".into(), format!("{:.12e}", contour.sop));
                out.diagnostics.insert("route_delta".into(), format!("{delta:.3e}"));
                Ok(out)
            }
        }
    }
}

/// Secrecy diversity order: least-squares slope of −log10 SOP against
/// log10 P over the top decade of the power grid.
///
/// The grid (in dBm) must span at least 30 dB and every SOP on the top
/// decade must be strictly positive and representable.
pub fn sdo_estimate(
    dp_base: &DerivedParams,
    p_grid_dbm: &[f64],
    route: EvalRoute,
    settings: &SopSettings,
) -> Result<f64, AnalyticError> {
    if p_grid_dbm.len() < 2 {
        return Err(AnalyticError::Domain("power grid needs at least 2 points".into()));
    }
    let lo = p_grid_dbm.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = p_grid_dbm.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if hi - lo < 30.0 {
        return Err(AnalyticError::Domain(format!(
            "power grid must span >= 30 dB, got {:.1}",
            hi - lo
        )));
    }
    let mut pts = Vec::new();
    for &dbm in p_grid_dbm {
        if dbm < hi - 10.0 {
            continue; // fit only the top decade
        }
        let dp = dp_base.with_power_dbm(dbm);
        let sop = match route {
            EvalRoute::MasterIntegral => sop_master(&dp, settings)?.sop,
            EvalRoute::FoxhClosedForm => sop_contour(&dp, settings)?.sop,
            EvalRoute::Asymptotic => sop_asymptotic(&dp)?.sop,
        };
        if !(sop > 1e-300) || !sop.is_finite() {
            return Err(AnalyticError::Domain(format!(
                "SOP underflows at {dbm} dBm; shrink the grid"
            )));
        }
        pts.push(((dbm - 30.0) / 10.0, -sop.log10()));
    }
    if pts.len() < 2 {
        return Err(AnalyticError::Domain("top decade holds fewer than 2 grid points".into()));
    }
    // Ordinary least squares slope.
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    Ok((n * sxy - sx * sy) / (n * sxx - sx * sx))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sysmodel::{derive, SystemConfig};

    fn defaults(k: usize) -> DerivedParams {
        derive(&SystemConfig { num_bds: k, ..Default::default() }).unwrap()
    }

    /// Classical no-device wiretap closed form:
    /// 1 − γ̄_r/(γ̄_r + Θ γ̄_e) e^{−(Θ−1)/γ̄_r}.
    fn classical(gr: f64, ge: f64, theta: f64) -> f64 {
        1.0 - gr / (gr + theta * ge) * (-(theta - 1.0) / gr).exp()
    }

    #[test]
    fn no_device_master_matches_classical() {
        let dp = defaults(0);
        let s = sop_master(&dp, &SopSettings::tight()).unwrap();
        let expect = classical(dp.legit_snr(), dp.eve_direct_snr(), dp.theta);
        assert!(
            ((s.sop - expect) / expect).abs() < 1e-8,
            "master {} vs classical {expect}",
            s.sop
        );
    }

    #[test]
    fn no_device_contour_matches_classical() {
        let dp = defaults(0);
        let s = sop_contour(&dp, &SopSettings::default()).unwrap();
        let expect = classical(dp.legit_snr(), dp.eve_direct_snr(), dp.theta);
        assert!(
            ((s.sop - expect) / expect).abs() < 1e-6,
            "contour {} vs classical {expect}",
            s.sop
        );
        assert!((s.sop - expect).abs() <= s.err_estimate.max(1e-6 * expect));
    }

    #[test]
    fn routes_agree_with_devices() {
        for k in [1usize, 20] {
            let dp = defaults(k);
            let m = sop_master(&dp, &SopSettings::default()).unwrap();
            let c = sop_contour(&dp, &SopSettings::default()).unwrap();
            assert!(
                ((m.sop - c.sop) / m.sop).abs() < 1e-3,
                "K={k}: master {} vs contour {}",
                m.sop,
                c.sop
            );
        }
    }

    #[test]
    fn silenced_eavesdropper_limit() {
        // Ω_te → 0 pushes γ_e to 0 and the SOP to F_r(Θ − 1).
        let cfg = SystemConfig { num_bds: 2, dist_t_e: 1e4, ..Default::default() };
        let dp = derive(&cfg).unwrap();
        let s = sop_master(&dp, &SopSettings::default()).unwrap();
        let f = super::super::legit::legit_cdf(
            dp.theta - 1.0,
            &dp,
            super::super::legit::SinrDistRoute::HankelReference,
        )
        .unwrap();
        assert!(((s.sop - f) / f).abs() < 1e-4, "sop {} vs F(Θ−1) {f}", s.sop);
    }

    #[test]
    fn exact_wrapper_prefers_contour_and_records_provenance() {
        let dp = defaults(20);
        let r = sop_exact(&dp, EvalRoute::FoxhClosedForm, &SopSettings::default()).unwrap();
        assert_eq!(r.route, EvalRoute::FoxhClosedForm);
        assert!(r.diagnostics.contains_key("master_value"));
        assert!(!r.diagnostics.contains_key("foxh-mismatch"));
        assert!((0.0..=1.0).contains(&r.sop));

        let bound = SopParams { derived: dp, evaluation_route: EvalRoute::FoxhClosedForm };
        let r2 = bound.evaluate(&SopSettings::default()).unwrap();
        assert_eq!(r2.sop, r.sop);
    }

    #[test]
    fn asymptote_closes_at_high_power() {
        let dp = defaults(20).with_power_dbm(60.0);
        let exact = sop_contour(&dp, &SopSettings::default()).unwrap();
        let asy = sop_asymptotic(&dp).unwrap();
        let ratio = exact.sop / asy.sop;
        assert!((0.95..=1.05).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn no_device_asymptote_reduction() {
        // K = 0: asymptote = (σ_r²/(P Ω_tr)) (Θ(1+γ̄_e) − 1), γ̄_e = PΩ_te/σ_e².
        let dp = defaults(0);
        let asy = sop_asymptotic(&dp).unwrap();
        let expect =
            dp.sigma_r2 / (dp.p_lin * dp.omega_tr) * (dp.theta * (1.0 + dp.eve_direct_snr()) - 1.0);
        assert!(((asy.sop - expect) / expect).abs() < 1e-8);
    }

    #[test]
    fn sdo_is_one() {
        let dp = defaults(20);
        let grid: Vec<f64> = (0..=15).map(|i| 40.0 + 2.0 * i as f64).collect();
        let s_asy = sdo_estimate(&dp, &grid, EvalRoute::Asymptotic, &SopSettings::default()).unwrap();
        assert!((0.97..=1.03).contains(&s_asy), "asymptotic slope {s_asy}");
        let s_exact =
            sdo_estimate(&dp, &grid, EvalRoute::FoxhClosedForm, &SopSettings::default()).unwrap();
        assert!((s_exact - s_asy).abs() < 0.05, "exact {s_exact} vs asy {s_asy}");
    }

    #[test]
    fn sdo_grid_validation() {
        let dp = defaults(2);
        let short: Vec<f64> = vec![40.0, 50.0];
        assert!(matches!(
            sdo_estimate(&dp, &short, EvalRoute::Asymptotic, &SopSettings::default()),
            Err(AnalyticError::Domain(_))
        ));
    }

    #[test]
    fn sdo_invariant_to_cascade_gain() {
        // Doubling every β_k shifts the curve but not the slope.
        let dp = defaults(10);
        let mut boosted = dp.clone();
        for b in &mut boosted.beta {
            *b *= 2.0;
        }
        let grid: Vec<f64> = (0..=10).map(|i| 40.0 + 3.0 * i as f64).collect();
        let s1 = sdo_estimate(&dp, &grid, EvalRoute::Asymptotic, &SopSettings::default()).unwrap();
        let s2 = sdo_estimate(&boosted, &grid, EvalRoute::Asymptotic, &SopSettings::default()).unwrap();
        assert!((s1 - s2).abs() < 0.02, "slopes {s1} vs {s2}");
    }
}
