//! Experiment orchestration: parameter sweeps, figure presets, dataset
//! emission, and the self-validation report.
//!
//! A [`SweepSpec`] names one swept variable, a grid, and the evaluation
//! routes to run at every point; [`run_sweep`] produces a [`FigureDataset`]
//! whose metadata embeds the fully resolved configuration, the seed, and the
//! tool version, so a dataset can be reproduced bit-exactly from its own
//! sidecar. Figure presets are thin stacks of sweeps sharing that one code
//! path.

use std::collections::BTreeMap;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analytic::{
    eve_cdf, gamma_e_bar, legit_cdf, sdo_estimate, sop_asymptotic, sop_contour, sop_exact,
    sop_master, AnalyticError, EvalRoute, LegitDistribution, SinrDistRoute, SopSettings,
};
use crate::foxh::{foxh_eval, lauricella_fd, ContourSpec, FoxHSpec};
use crate::montecarlo::{
    empirical_sop, ks_statistic, rank_correlation, sample_batch, MonteCarloError,
};
use crate::sysmodel::{derive, ConfigError, SystemConfig};

#[derive(Debug, Error)]
pub enum SweepError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Analytic(#[from] AnalyticError),
    #[error(transparent)]
    MonteCarlo(#[from] MonteCarloError),
    #[error("invalid sweep: {0}")]
    BadSpec(String),
    #[error("i/o error on {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

/// The quantity a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    /// Direct legitimate-link SNR in dB (moves transmit power).
    SnrDb,
    /// Number of backscatter devices.
    K,
    /// Interference-free eavesdropper SNR target in dB (moves the
    /// transmitter–eavesdropper gain, the only eavesdropper-exclusive knob).
    GammaEBarDb,
    /// Device–receiver distance in meters.
    DKr,
    /// Secrecy rate threshold in bit/s/Hz.
    RS,
    /// Normalized timing error.
    TS,
    /// Normalized channel-estimation error.
    CsiEps,
}

/// Evaluation routes a sweep can request per grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RouteChoice {
    Montecarlo,
    Exact,
    Asymptotic,
}

impl std::fmt::Display for RouteChoice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RouteChoice::Montecarlo => "montecarlo",
            RouteChoice::Exact => "exact",
            RouteChoice::Asymptotic => "asymptotic",
        })
    }
}

/// One sweep: variable, grid, routes, trial budget, seed, base config.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub grid: Vec<f64>,
    pub routes: Vec<RouteChoice>,
    pub n_trials: usize,
    pub seed: u64,
    pub base_config: SystemConfig,
}

impl SweepSpec {
    fn validate(&self) -> Result<(), SweepError> {
        if self.grid.is_empty() {
            return Err(SweepError::BadSpec("grid must be nonempty".into()));
        }
        if self.grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(SweepError::BadSpec("grid must be strictly ascending".into()));
        }
        if self.routes.is_empty() {
            return Err(SweepError::BadSpec("at least one route required".into()));
        }
        if self.routes.contains(&RouteChoice::Montecarlo) && self.n_trials < 10_000 {
            return Err(SweepError::BadSpec(format!(
                "montecarlo route needs n_trials >= 10^4, got {}",
                self.n_trials
            )));
        }
        Ok(())
    }
}

/// Apply one grid value of the swept variable to a config.
pub fn apply_variable(
    base: &SystemConfig,
    variable: SweepVariable,
    value: f64,
) -> Result<SystemConfig, SweepError> {
    let mut cfg = base.clone();
    match variable {
        SweepVariable::SnrDb => cfg = cfg.with_legit_snr_db(value),
        SweepVariable::K => {
            if value < 0.0 || value.fract() != 0.0 {
                return Err(SweepError::BadSpec(format!("K grid value {value} not a whole number")));
            }
            cfg.num_bds = value as usize;
        }
        SweepVariable::GammaEBarDb => {
            // Pin P·Ω_te/σ_e² to the target by moving the eavesdropper
            // distance; device geometry stays put.
            let dp = derive(&cfg)?;
            let omega_te = 10f64.powf(value / 10.0) * dp.sigma_e2 / dp.p_lin;
            cfg.dist_t_e = omega_te.powf(-1.0 / cfg.path_loss_exp);
        }
        SweepVariable::DKr => cfg.dist_k_r = crate::sysmodel::PerDevice::Shared(value),
        SweepVariable::RS => cfg.secrecy_rate = value,
        SweepVariable::TS => cfg.timing_error = value,
        SweepVariable::CsiEps => cfg.csi_error = value,
    }
    cfg.validate()?;
    Ok(cfg)
}

/// One plotted curve.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Series {
    pub label: String,
    pub route: RouteChoice,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    /// Binomial standard errors (simulation routes only).
    pub stderr: Option<Vec<f64>>,
    /// Trials per point (simulation routes only).
    pub n_trials: Option<usize>,
}

/// Which figure preset a dataset reproduces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FigureId {
    Fig2a,
    Fig2b,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig8,
    Custom,
}

impl std::str::FromStr for FigureId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "fig2a" => Ok(Self::Fig2a),
            "fig2b" => Ok(Self::Fig2b),
            "fig3" => Ok(Self::Fig3),
            "fig4" => Ok(Self::Fig4),
            "fig5" => Ok(Self::Fig5),
            "fig6" => Ok(Self::Fig6),
            "fig7" => Ok(Self::Fig7),
            "fig8" => Ok(Self::Fig8),
            other => Err(format!("unknown figure id `{other}`")),
        }
    }
}

/// Everything needed to reproduce a dataset bit-exactly.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DatasetMetadata {
    pub tool_version: String,
    pub seed: u64,
    pub n_trials: usize,
    /// Fully resolved base configuration (after defaults and overrides).
    pub base_config: SystemConfig,
    /// Per-point incidents: route fallbacks, failures, diagnostics.
    pub notes: BTreeMap<String, String>,
}

/// Plot-ready data for one figure.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FigureDataset {
    pub figure_id: FigureId,
    pub series: Vec<Series>,
    pub metadata: DatasetMetadata,
}

/// Evaluate every requested route over the grid. Per-point failures land in
/// the metadata notes (the value becomes NaN) and the sweep continues.
pub fn run_sweep(spec: &SweepSpec) -> Result<FigureDataset, SweepError> {
    run_sweep_labeled(spec, "", FigureId::Custom)
}

fn run_sweep_labeled(
    spec: &SweepSpec,
    label_prefix: &str,
    figure_id: FigureId,
) -> Result<FigureDataset, SweepError> {
    spec.validate()?;
    let settings = SopSettings::default();
    let mut notes = BTreeMap::new();
    let mut series = Vec::new();
    for &route in &spec.routes {
        let mut y = vec![f64::NAN; spec.grid.len()];
        let mut stderr = vec![0.0f64; spec.grid.len()];
        match route {
            RouteChoice::Montecarlo => {
                for (i, &value) in spec.grid.iter().enumerate() {
                    let cfg = apply_variable(&spec.base_config, spec.variable, value)?;
                    match sample_batch(&cfg, spec.n_trials, spec.seed) {
                        Ok(batch) => match empirical_sop(&batch, cfg.secrecy_rate) {
                            Ok((p, se)) => {
                                y[i] = p;
                                stderr[i] = se;
                            }
                            Err(e) => {
                                notes.insert(format!("{route}[{i}]"), e.to_string());
                            }
                        },
                        Err(e) => {
                            notes.insert(format!("{route}[{i}]"), e.to_string());
                        }
                    }
                }
            }
            RouteChoice::Exact | RouteChoice::Asymptotic => {
                let results: Vec<Result<crate::analytic::SecrecyResult, String>> = spec
                    .grid
                    .par_iter()
                    .map(|&value| {
                        let cfg = apply_variable(&spec.base_config, spec.variable, value)
                            .map_err(|e| e.to_string())?;
                        let dp = derive(&cfg).map_err(|e| e.to_string())?;
                        let r = if route == RouteChoice::Exact {
                            sop_exact(&dp, EvalRoute::FoxhClosedForm, &settings)
                        } else {
                            sop_asymptotic(&dp)
                        };
                        r.map_err(|e| e.to_string())
                    })
                    .collect();
                for (i, res) in results.into_iter().enumerate() {
                    match res {
                        Ok(r) => {
                            y[i] = r.sop;
                            if r.diagnostics.contains_key("foxh-mismatch") {
                                notes.insert(
                                    format!("{route}[{i}]"),
                                    "foxh-mismatch: fell back to master value".into(),
                                );
                            }
                        }
                        Err(e) => {
                            notes.insert(format!("{route}[{i}]"), e);
                        }
                    }
                }
            }
        }
        let is_mc = route == RouteChoice::Montecarlo;
        series.push(Series {
            label: if label_prefix.is_empty() {
                route.to_string()
            } else {
                label_prefix.to_string()
            },
            route,
            x: spec.grid.clone(),
            y,
            stderr: is_mc.then_some(stderr),
            n_trials: is_mc.then_some(spec.n_trials),
        });
    }
    Ok(FigureDataset {
        figure_id,
        series,
        metadata: DatasetMetadata {
            tool_version: crate::TOOL_VERSION.into(),
            seed: spec.seed,
            n_trials: spec.n_trials,
            base_config: spec.base_config.clone(),
            notes,
        },
    })
}

/// Figure presets: each stacks sweeps over the same code path as custom
/// sweeps and merges the per-curve datasets.
pub fn figure(
    id: FigureId,
    base: &SystemConfig,
    n_trials: usize,
    seed: u64,
) -> Result<FigureDataset, SweepError> {
    match id {
        FigureId::Fig2a | FigureId::Fig2b => cdf_figure(id, base, n_trials, seed),
        FigureId::Fig3 => {
            let snr: Vec<f64> = (0..=15).map(|i| 2.0 * i as f64).collect();
            stacked_sweep(id, base, n_trials, seed, SweepVariable::SnrDb, &snr, SweepVariable::K, &[0.0, 10.0, 20.0, 40.0], "K", all_routes())
        }
        FigureId::Fig4 => {
            let snr: Vec<f64> = (0..=15).map(|i| 2.0 * i as f64).collect();
            stacked_sweep(id, base, n_trials, seed, SweepVariable::SnrDb, &snr, SweepVariable::GammaEBarDb, &[-10.0, 0.0, 10.0], "eve_snr_db", all_routes())
        }
        FigureId::Fig5 => {
            let snr: Vec<f64> = (0..=15).map(|i| 2.0 * i as f64).collect();
            stacked_sweep(id, base, n_trials, seed, SweepVariable::SnrDb, &snr, SweepVariable::DKr, &[0.1, 0.5, 1.0], "d_kr", all_routes())
        }
        FigureId::Fig6 => {
            let base20 = base.clone().with_legit_snr_db(20.0);
            let rs = [0.5, 1.0, 1.5, 2.0, 2.5, 3.0];
            stacked_sweep(id, &base20, n_trials, seed, SweepVariable::RS, &rs, SweepVariable::K, &[0.0, 10.0, 20.0, 40.0], "K", all_routes())
        }
        FigureId::Fig7 => {
            let base20 = base.clone().with_legit_snr_db(20.0);
            let ts = [0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3];
            stacked_sweep(id, &base20, n_trials, seed, SweepVariable::TS, &ts, SweepVariable::K, &[10.0, 20.0, 40.0], "K", vec![RouteChoice::Montecarlo])
        }
        FigureId::Fig8 => {
            let base20 = base.clone().with_legit_snr_db(20.0);
            let eps = [0.0, 0.1, 0.2, 0.3, 0.4];
            stacked_sweep(id, &base20, n_trials, seed, SweepVariable::CsiEps, &eps, SweepVariable::K, &[10.0, 20.0, 40.0], "K", vec![RouteChoice::Montecarlo])
        }
        FigureId::Custom => Err(SweepError::BadSpec("custom is not a preset figure".into())),
    }
}

fn all_routes() -> Vec<RouteChoice> {
    vec![RouteChoice::Montecarlo, RouteChoice::Exact, RouteChoice::Asymptotic]
}

#[allow(clippy::too_many_arguments)]
fn stacked_sweep(
    id: FigureId,
    base: &SystemConfig,
    n_trials: usize,
    seed: u64,
    x_var: SweepVariable,
    x_grid: &[f64],
    series_var: SweepVariable,
    series_values: &[f64],
    series_name: &str,
    routes: Vec<RouteChoice>,
) -> Result<FigureDataset, SweepError> {
    let mut all_series = Vec::new();
    let mut notes = BTreeMap::new();
    for &sv in series_values {
        let cfg = apply_variable(base, series_var, sv)?;
        let spec = SweepSpec {
            variable: x_var,
            grid: x_grid.to_vec(),
            routes: routes.clone(),
            n_trials,
            seed,
            base_config: cfg,
        };
        let label = format!("{series_name}={sv}");
        let ds = run_sweep_labeled(&spec, &label, id)?;
        for (k, v) in ds.metadata.notes {
            notes.insert(format!("{label}: {k}"), v);
        }
        all_series.extend(ds.series);
    }
    Ok(FigureDataset {
        figure_id: id,
        series: all_series,
        metadata: DatasetMetadata {
            tool_version: crate::TOOL_VERSION.into(),
            seed,
            n_trials,
            base_config: base.clone(),
            notes,
        },
    })
}

/// SINR distribution curves (empirical vs analytic CDF) for K = 0 and the
/// configured device count.
fn cdf_figure(
    id: FigureId,
    base: &SystemConfig,
    n_trials: usize,
    seed: u64,
) -> Result<FigureDataset, SweepError> {
    let eve_side = id == FigureId::Fig2b;
    let mut series = Vec::new();
    let mut notes = BTreeMap::new();
    for k in [0usize, base.num_bds.max(1)] {
        let cfg = SystemConfig { num_bds: k, ..base.clone() };
        let dp = derive(&cfg)?;
        let batch = sample_batch(&cfg, n_trials, seed)?;
        let samples = if eve_side { &batch.gamma_e } else { &batch.gamma_r };
        notes.insert(format!("K={k}: rank_correlation"), format!("{:.4}", rank_correlation(&batch)));
        // Log grid spanning the sample range.
        let (lo, hi) = samples.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &s| {
            (lo.min(s.max(1e-12)), hi.max(s))
        });
        let n_pts = 60;
        let grid: Vec<f64> = (0..n_pts)
            .map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (n_pts - 1) as f64).exp())
            .collect();
        let empirical = crate::montecarlo::empirical_cdf(samples, &grid)?;
        series.push(Series {
            label: format!("K={k}"),
            route: RouteChoice::Montecarlo,
            x: grid.clone(),
            y: empirical,
            stderr: None,
            n_trials: Some(n_trials),
        });
        let analytic: Vec<f64> = if eve_side {
            grid.iter().map(|&x| eve_cdf(x, &dp)).collect()
        } else {
            let dist = LegitDistribution::new(&dp);
            grid.iter().map(|&x| dist.cdf(x)).collect()
        };
        series.push(Series {
            label: format!("K={k}"),
            route: RouteChoice::Exact,
            x: grid,
            y: analytic,
            stderr: None,
            n_trials: None,
        });
    }
    Ok(FigureDataset {
        figure_id: id,
        series,
        metadata: DatasetMetadata {
            tool_version: crate::TOOL_VERSION.into(),
            seed,
            n_trials,
            base_config: base.clone(),
            notes,
        },
    })
}

/// Output format for [`emit`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmitFormat {
    Csv,
    Json,
}

/// Write a dataset to `path` (CSV rows `x,series,route,value,stderr,n` or a
/// JSON mirror) plus a `<path>.meta.json` sidecar, always.
pub fn emit(dataset: &FigureDataset, format: EmitFormat, path: &Path) -> Result<(), SweepError> {
    let io_err = |source| SweepError::Io { path: path.to_path_buf(), source };
    let mut out = Vec::new();
    match format {
        EmitFormat::Csv => {
            out.extend_from_slice(b"x,series,route,value,stderr,n\n");
            for s in &dataset.series {
                for (i, (&x, &y)) in s.x.iter().zip(&s.y).enumerate() {
                    let stderr = s
                        .stderr
                        .as_ref()
                        .map(|v| format!("{}", v[i]))
                        .unwrap_or_default();
                    let n = s.n_trials.map(|n| n.to_string()).unwrap_or_default();
                    out.extend_from_slice(
                        format!("{},{},{},{},{},{}\n", x, s.label, s.route, y, stderr, n).as_bytes(),
                    );
                }
            }
        }
        EmitFormat::Json => {
            out = serde_json::to_vec_pretty(dataset).expect("dataset serializes");
            out.push(b'\n');
        }
    }
    std::fs::File::create(path)
        .and_then(|mut f| f.write_all(&out))
        .map_err(io_err)?;
    let meta_path = path.with_extension(match path.extension().and_then(|e| e.to_str()) {
        Some(ext) => format!("{ext}.meta.json"),
        None => "meta.json".to_string(),
    });
    let meta = serde_json::to_vec_pretty(&dataset.metadata).expect("metadata serializes");
    std::fs::File::create(&meta_path)
        .and_then(|mut f| f.write_all(&meta))
        .map_err(|source| SweepError::Io { path: meta_path.clone(), source })?;
    Ok(())
}

/// One check in the validation report.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub id: String,
    pub passed: bool,
    pub measured: f64,
    pub threshold: f64,
    pub detail: String,
}

/// Machine-readable cross-validation report.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

/// Trial budgets for [`validate_all`]; defaults are desk-scale.
#[derive(Debug, Clone)]
pub struct ValidationBudget {
    pub cdf_trials: usize,
    pub sop_trials: usize,
    pub seed: u64,
}

impl Default for ValidationBudget {
    fn default() -> Self {
        Self { cdf_trials: 200_000, sop_trials: 1_000_000, seed: 20_240_901 }
    }
}

/// Run the cross-oracle suite at the given configuration: simulation against
/// analytic distributions, contour against master SOP, asymptote, diversity
/// order, trends, and the special-function identities. Failures are report
/// content, not errors.
pub fn validate_all(config: &SystemConfig, budget: &ValidationBudget) -> Result<ValidationReport, SweepError> {
    let mut checks = Vec::new();
    let mut push = |id: &str, passed: bool, measured: f64, threshold: f64, detail: String| {
        checks.push(CheckResult { id: id.into(), passed, measured, threshold, detail });
    };
    let settings = SopSettings::default();
    let dp = derive(config)?;

    // KS distribution checks at the configured K.
    let batch = sample_batch(config, budget.cdf_trials, budget.seed)?;
    let band = 1.63 / (budget.cdf_trials as f64).sqrt();
    let dist = LegitDistribution::new(&dp);
    let ks_r = ks_statistic(&batch.gamma_r, |x| dist.cdf(x));
    push("ks-legitimate-cdf", ks_r < band, ks_r, band, format!("K={}", dp.num_bds()));
    let ks_e = ks_statistic(&batch.gamma_e, |x| eve_cdf(x, &dp));
    push("ks-eavesdropper-cdf", ks_e < band, ks_e, band, format!("K={}", dp.num_bds()));
    push(
        "sinr-rank-correlation",
        true,
        rank_correlation(&batch),
        f64::NAN,
        "informational: dependence ignored by the single-integral form".into(),
    );

    // Classical no-device closed form.
    let mut worst = 0.0f64;
    for snr_db in [5.0, 15.0, 25.0] {
        for (ge_db, theta) in [(-5.0, 2.0f64), (5.0, 4.0)] {
            let cfg = SystemConfig { num_bds: 0, secrecy_rate: theta.log2(), ..config.clone() }
                .with_legit_snr_db(snr_db);
            let mut d0 = derive(&cfg)?;
            let omega_te = 10f64.powf(ge_db / 10.0) * d0.sigma_e2 / d0.p_lin;
            d0.omega_te = omega_te;
            d0.lambda_e = 1.0 / (d0.p_lin * omega_te);
            let s = sop_master(&d0, &SopSettings::tight())?;
            let gr = d0.legit_snr();
            let ge = d0.eve_direct_snr();
            let classical = 1.0 - gr / (gr + d0.theta * ge) * (-(d0.theta - 1.0) / gr).exp();
            worst = worst.max(((s.sop - classical) / classical).abs());
        }
    }
    push("classical-wiretap-closed-form", worst < 1e-8, worst, 1e-8, "K=0 grid".into());

    // Route agreement at the configured point.
    let master = sop_master(&dp, &settings)?;
    let contour = sop_contour(&dp, &settings)?;
    let delta = ((master.sop - contour.sop) / master.sop).abs();
    push("route-agreement", delta < 1e-3, delta, 1e-3, format!("master={:.6e}", master.sop));

    // Monte Carlo within 3 binomial standard errors of the master value.
    let big = sample_batch(config, budget.sop_trials, budget.seed)?;
    let (p_mc, se) = empirical_sop(&big, config.secrecy_rate)?;
    let sigmas = (p_mc - master.sop).abs() / se.max(1e-300);
    push(
        "montecarlo-vs-master",
        sigmas < 3.0,
        sigmas,
        3.0,
        format!("mc={p_mc:.4e} master={:.4e} n={}", master.sop, budget.sop_trials),
    );

    // Asymptote closes at high power.
    let high = dp.with_power_dbm(60.0);
    let ratio = sop_contour(&high, &settings)?.sop / sop_asymptotic(&high)?.sop;
    push("asymptote-ratio-60dbm", (0.95..=1.05).contains(&ratio), ratio, 1.05, String::new());

    // Secrecy diversity order.
    let grid: Vec<f64> = (0..=15).map(|i| 40.0 + 2.0 * i as f64).collect();
    let slope = sdo_estimate(&dp, &grid, EvalRoute::Asymptotic, &settings)?;
    push("secrecy-diversity-order", (0.97..=1.03).contains(&slope), slope, 1.0, String::new());

    // Qualitative trends at 20 dB legitimate SNR, master route.
    let base20 = config.clone().with_legit_snr_db(20.0);
    let sop_at = |cfg: &SystemConfig| -> Result<f64, SweepError> {
        Ok(sop_master(&derive(cfg)?, &settings)?.sop)
    };
    let trend = |values: &[f64]| values.windows(2).all(|w| w[1] > w[0]);
    let ks: Vec<f64> = [0usize, 10, 20, 40]
        .iter()
        .map(|&k| sop_at(&SystemConfig { num_bds: k, ..base20.clone() }))
        .collect::<Result<_, _>>()?;
    let dec: Vec<f64> = ks.iter().rev().cloned().collect();
    push("sop-decreasing-in-k", trend(&dec), ks[3], ks[0], format!("{ks:?}"));
    let ge: Vec<f64> = [-10.0, 0.0, 10.0]
        .iter()
        .map(|&g| {
            let cfg = apply_variable(&base20, SweepVariable::GammaEBarDb, g)?;
            sop_at(&cfg)
        })
        .collect::<Result<_, _>>()?;
    push("sop-increasing-in-eve-snr", trend(&ge), ge[2], ge[0], format!("{ge:?}"));
    let dkr: Vec<f64> = [0.1, 0.5, 1.0]
        .iter()
        .map(|&d| sop_at(&apply_variable(&base20, SweepVariable::DKr, d)?))
        .collect::<Result<_, _>>()?;
    push("sop-increasing-in-bd-distance", trend(&dkr), dkr[2], dkr[0], format!("{dkr:?}"));
    let rs: Vec<f64> = [0.5, 1.0, 2.0, 3.0]
        .iter()
        .map(|&r| sop_at(&apply_variable(&base20, SweepVariable::RS, r)?))
        .collect::<Result<_, _>>()?;
    push("sop-increasing-in-rate", trend(&rs), rs[3], rs[0], format!("{rs:?}"));

    // Special-function spot identities.
    let k0 = crate::specfun::bessel_k0(2.0).map(|v| (v - 0.113_893_872_749).abs()).unwrap_or(f64::NAN);
    push("bessel-k0-value", k0 < 1e-9, k0, 1e-9, "K0(2)".into());
    let e1 = crate::specfun::expint_e1(1.0).map(|v| (v - 0.219_383_934_396).abs()).unwrap_or(f64::NAN);
    push("expint-e1-value", e1 < 1e-9, e1, 1e-9, "E1(1)".into());
    let exp_id = foxh_eval(
        &FoxHSpec { m: 1, n: 0, p: 0, q: 1, upper_params: vec![], lower_params: vec![(0.0, 1.0)], argument: 1.3 },
        &ContourSpec::default(),
    )
    .map(|v| ((v.value - (-1.3f64).exp()) / (-1.3f64).exp()).abs())
    .unwrap_or(f64::NAN);
    push("foxh-exponential-identity", exp_id < 1e-7, exp_id, 1e-7, String::new());
    let fd = lauricella_fd(1.0, &[1.0], 2.0, &[-0.5])
        .map(|v| (v - 2.0 * 1.5f64.ln()).abs())
        .unwrap_or(f64::NAN);
    push("lauricella-log-identity", fd < 1e-8, fd, 1e-8, String::new());

    // Input validation gives errors, not crashes.
    let bad = SystemConfig { dist_k_r: crate::sysmodel::PerDevice::Shared(-0.5), ..config.clone() };
    push(
        "invalid-config-rejected",
        derive(&bad).is_err(),
        f64::NAN,
        f64::NAN,
        "negative distance".into(),
    );

    // Eavesdropper mean consistency between routes.
    let (ge_mean, ge_err) = gamma_e_bar(&dp)?;
    push(
        "eve-mean-finite",
        ge_mean.is_finite() && ge_mean > 0.0,
        ge_mean,
        ge_err,
        "Laplace-transform quadrature".into(),
    );

    // Distribution reference routes agree pointwise.
    let mid = dp.legit_snr() * (dp.omega_tr + dp.beta.iter().sum::<f64>()) / dp.omega_tr;
    let hankel = legit_cdf(mid, &dp, SinrDistRoute::HankelReference)?;
    let mellin = legit_cdf(mid, &dp, SinrDistRoute::MellinContour)?;
    let dist_delta = (hankel - mellin).abs();
    push("legit-cdf-route-agreement", dist_delta < 1e-6, dist_delta, 1e-6, String::new());

    let passed = checks.iter().all(|c| c.passed);
    Ok(ValidationReport { checks, passed })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_spec_validation() {
        let base = SystemConfig::default();
        let bad = SweepSpec {
            variable: SweepVariable::SnrDb,
            grid: vec![],
            routes: vec![RouteChoice::Exact],
            n_trials: 0,
            seed: 1,
            base_config: base.clone(),
        };
        assert!(matches!(run_sweep(&bad), Err(SweepError::BadSpec(_))));
        let bad_mc = SweepSpec {
            variable: SweepVariable::SnrDb,
            grid: vec![0.0, 10.0],
            routes: vec![RouteChoice::Montecarlo],
            n_trials: 100,
            seed: 1,
            base_config: base,
        };
        assert!(matches!(run_sweep(&bad_mc), Err(SweepError::BadSpec(_))));
    }

    #[test]
    fn single_point_sweep_has_all_routes() {
        let spec = SweepSpec {
            variable: SweepVariable::SnrDb,
            grid: vec![20.0],
            routes: vec![RouteChoice::Montecarlo, RouteChoice::Exact, RouteChoice::Asymptotic],
            n_trials: 20_000,
            seed: 5,
            base_config: SystemConfig { num_bds: 4, ..Default::default() },
        };
        let ds = run_sweep(&spec).unwrap();
        assert_eq!(ds.series.len(), 3);
        for s in &ds.series {
            assert_eq!(s.x.len(), 1);
            assert!(s.y[0].is_finite());
        }
    }

    #[test]
    fn eve_snr_knob_hits_target() {
        let cfg = apply_variable(&SystemConfig::default(), SweepVariable::GammaEBarDb, -10.0).unwrap();
        let dp = derive(&cfg).unwrap();
        let got = 10.0 * dp.eve_direct_snr().log10();
        assert!((got + 10.0).abs() < 1e-9, "eve snr {got}");
    }

    #[test]
    fn emit_csv_shape_and_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let spec = SweepSpec {
            variable: SweepVariable::SnrDb,
            grid: vec![10.0, 20.0],
            routes: vec![RouteChoice::Asymptotic],
            n_trials: 0,
            seed: 9,
            base_config: SystemConfig { num_bds: 2, ..Default::default() },
        };
        let ds = run_sweep(&spec).unwrap();
        let csv_path = dir.path().join("out.csv");
        emit(&ds, EmitFormat::Csv, &csv_path).unwrap();
        let text = std::fs::read_to_string(&csv_path).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "x,series,route,value,stderr,n");
        assert_eq!(text.lines().count(), 1 + 2); // header + points × routes
        assert!(csv_path.with_extension("csv.meta.json").exists());

        let json_path = dir.path().join("out.json");
        emit(&ds, EmitFormat::Json, &json_path).unwrap();
        let back: FigureDataset =
            serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
        assert_eq!(back.series.len(), ds.series.len());
        assert_eq!(back.series[0].y, ds.series[0].y);
        assert_eq!(back.metadata.seed, ds.metadata.seed);
    }

    #[test]
    fn emit_empty_series_header_only() {
        let ds = FigureDataset {
            figure_id: FigureId::Custom,
            series: vec![],
            metadata: DatasetMetadata {
                tool_version: crate::TOOL_VERSION.into(),
                seed: 0,
                n_trials: 0,
                base_config: SystemConfig::default(),
                notes: BTreeMap::new(),
            },
        };
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("empty.csv");
        emit(&ds, EmitFormat::Csv, &p).unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "x,series,route,value,stderr,n\n");
    }

    #[test]
    fn emit_deterministic_bytes() {
        let spec = SweepSpec {
            variable: SweepVariable::SnrDb,
            grid: vec![0.0, 15.0, 30.0],
            routes: vec![RouteChoice::Montecarlo, RouteChoice::Exact],
            n_trials: 20_000,
            seed: 42,
            base_config: SystemConfig { num_bds: 3, ..Default::default() },
        };
        let dir = tempfile::tempdir().unwrap();
        let (p1, p2) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
        emit(&run_sweep(&spec).unwrap(), EmitFormat::Csv, &p1).unwrap();
        emit(&run_sweep(&spec).unwrap(), EmitFormat::Csv, &p2).unwrap();
        assert_eq!(std::fs::read(&p1).unwrap(), std::fs::read(&p2).unwrap());
    }

    #[test]
    fn io_error_carries_path() {
        let ds = FigureDataset {
            figure_id: FigureId::Custom,
            series: vec![],
            metadata: DatasetMetadata {
                tool_version: crate::TOOL_VERSION.into(),
                seed: 0,
                n_trials: 0,
                base_config: SystemConfig::default(),
                notes: BTreeMap::new(),
            },
        };
        let err = emit(&ds, EmitFormat::Csv, Path::new("/nonexistent-dir/x.csv")).unwrap_err();
        match err {
            SweepError::Io { path, .. } => assert!(path.to_string_lossy().contains("nonexistent")),
            other => panic!("expected Io, got {other}"),
        }
    }

    #[test]
    fn figure_ids_parse() {
        assert_eq!("fig3".parse::<FigureId>().unwrap(), FigureId::Fig3);
        assert!("fig9".parse::<FigureId>().is_err());
    }
}
