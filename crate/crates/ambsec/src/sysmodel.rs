//! System parameters and derived large-scale quantities.
//!
//! [`SystemConfig`] holds everything the experiments vary (powers, distances,
//! device count, impairments); [`derive()`] linearizes the dB quantities once
//! and precomputes the per-device cascade gains that every analytic formula
//! consumes. Configs are immutable after construction and safe to share.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("distance `{name}` must be > 0, got {value}")]
    NonPositiveDistance { name: &'static str, value: f64 },
    #[error("path_loss_exp must be > 0, got {0}")]
    NonPositivePathLoss(f64),
    #[error("secrecy_rate must be > 0, got {0}")]
    NonPositiveRate(f64),
    #[error("backscatter amplitude {amp} outside (0, {amp_max}] for device {index}")]
    AmplitudeOutOfRange { index: usize, amp: f64, amp_max: f64 },
    #[error("amp_max must be > 0, got {0}")]
    NonPositiveAmpMax(f64),
    #[error("per-device list `{name}` has length {got}, expected {want} (or 1)")]
    ListLength { name: &'static str, got: usize, want: usize },
    #[error("{name} must lie in [0, 1), got {value}")]
    UnitIntervalError { name: &'static str, value: f64 },
    #[error("{name} must be finite, got {value}")]
    NotFinite { name: &'static str, value: f64 },
}

/// Scalar shared by all devices, or one value per device.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PerDevice {
    Shared(f64),
    List(Vec<f64>),
}

impl PerDevice {
    /// Expand to `k` values; a shared scalar replicates, a list must match.
    pub fn expand(&self, k: usize, name: &'static str) -> Result<Vec<f64>, ConfigError> {
        match self {
            PerDevice::Shared(v) => Ok(vec![*v; k]),
            PerDevice::List(vs) if vs.len() == k => Ok(vs.clone()),
            PerDevice::List(vs) if vs.len() == 1 => Ok(vec![vs[0]; k]),
            PerDevice::List(vs) => Err(ConfigError::ListLength { name, got: vs.len(), want: k }),
        }
    }
}

impl From<f64> for PerDevice {
    fn from(v: f64) -> Self {
        PerDevice::Shared(v)
    }
}

/// All tunable system parameters. dB quantities stay in dB here; [`derive()`]
/// is the single linearization site.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SystemConfig {
    /// Transmit power in dBm.
    pub transmit_power_dbm: f64,
    /// Number of backscatter devices K (0 is legal: no devices).
    pub num_bds: usize,
    /// Transmitter–receiver distance in meters.
    pub dist_t_r: f64,
    /// Transmitter–eavesdropper distance in meters.
    pub dist_t_e: f64,
    /// Transmitter–device distance(s) in meters.
    pub dist_t_k: PerDevice,
    /// Device–eavesdropper distance(s) in meters.
    pub dist_k_e: PerDevice,
    /// Device–receiver distance(s) in meters.
    pub dist_k_r: PerDevice,
    /// Backscatter amplitude(s), each in (0, amp_max].
    pub backscatter_amp: PerDevice,
    /// Amplitude cap.
    pub amp_max: f64,
    /// Path loss exponent α.
    pub path_loss_exp: f64,
    /// Receiver noise power in dBm.
    pub noise_r_dbm: f64,
    /// Eavesdropper noise power in dBm.
    pub noise_e_dbm: f64,
    /// Target secrecy rate in bit/s/Hz (> 0).
    pub secrecy_rate: f64,
    /// Normalized timing error in [0, 1); 0 disables the impairment.
    pub timing_error: f64,
    /// Normalized mean-squared channel-estimation error in [0, 1); 0 disables.
    pub csi_error: f64,
    /// Draw each device–receiver distance uniformly in (0, dist_k_r] per
    /// batch instead of holding it fixed. Monte Carlo only; excluded from
    /// analytic cross-checks.
    pub randomize_bd_distance: bool,
}

impl Default for SystemConfig {
    /// Default parameter set used throughout the experiments.
    fn default() -> Self {
        Self {
            transmit_power_dbm: 20.0,
            num_bds: 20,
            dist_t_r: 10.0,
            dist_t_e: 10.0,
            dist_t_k: PerDevice::Shared(9.5),
            dist_k_e: PerDevice::Shared(2.0),
            dist_k_r: PerDevice::Shared(0.5),
            backscatter_amp: PerDevice::Shared(0.8),
            amp_max: 1.0,
            path_loss_exp: 2.5,
            noise_r_dbm: -30.0,
            noise_e_dbm: -30.0,
            secrecy_rate: 1.0,
            timing_error: 0.0,
            csi_error: 0.0,
            randomize_bd_distance: false,
        }
    }
}

/// Everything the closed-form and simulation layers consume, in linear units.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DerivedParams {
    /// Transmit power in watts.
    pub p_lin: f64,
    /// Receiver noise power in watts.
    pub sigma_r2: f64,
    /// Eavesdropper noise power in watts.
    pub sigma_e2: f64,
    /// Large-scale gain of the direct legitimate link, d^{−α}.
    pub omega_tr: f64,
    /// Large-scale gain of the direct wiretap link.
    pub omega_te: f64,
    /// Per-device large-scale gains.
    pub omega_tk: Vec<f64>,
    pub omega_kr: Vec<f64>,
    pub omega_ke: Vec<f64>,
    /// Per-device backscatter amplitudes a_k.
    pub amp: Vec<f64>,
    /// Cascade power gains toward the receiver: β_k = a_k² Ω_tk Ω_kr.
    pub beta: Vec<f64>,
    /// Cascade interference scales at the eavesdropper: A_k = P a_k² Ω_tk Ω_ke.
    pub cap_a: Vec<f64>,
    /// λ = 1/(P Ω_te), the wiretap direct-link rate parameter.
    pub lambda_e: f64,
    /// Θ = 2^{R_s}.
    pub theta: f64,
    /// c = Θ − 1.
    pub c: f64,
    /// d = Θ/c.
    pub d_ratio: f64,
    /// A_r = σ_r² Ω_tr^{K−1} / (P Π β_k); the legitimate-CDF argument scale.
    pub a_r: f64,
    /// Normalized timing error carried over from the config.
    pub timing_error: f64,
    /// Normalized CSI error carried over from the config.
    pub csi_error: f64,
    /// Target secrecy rate (bit/s/Hz).
    pub secrecy_rate: f64,
}

fn dbm_to_watt(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

impl SystemConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let k = self.num_bds;
        for (name, v) in [
            ("transmit_power_dbm", self.transmit_power_dbm),
            ("noise_r_dbm", self.noise_r_dbm),
            ("noise_e_dbm", self.noise_e_dbm),
        ] {
            if !v.is_finite() {
                return Err(ConfigError::NotFinite { name, value: v });
            }
        }
        for (name, v) in [("dist_t_r", self.dist_t_r), ("dist_t_e", self.dist_t_e)] {
            if !(v > 0.0) {
                return Err(ConfigError::NonPositiveDistance { name, value: v });
            }
        }
        for (name, pd) in [
            ("dist_t_k", &self.dist_t_k),
            ("dist_k_e", &self.dist_k_e),
            ("dist_k_r", &self.dist_k_r),
        ] {
            for v in pd.expand(k, name)? {
                if !(v > 0.0) {
                    return Err(ConfigError::NonPositiveDistance { name, value: v });
                }
            }
        }
        if !(self.path_loss_exp > 0.0) {
            return Err(ConfigError::NonPositivePathLoss(self.path_loss_exp));
        }
        if !(self.amp_max > 0.0) {
            return Err(ConfigError::NonPositiveAmpMax(self.amp_max));
        }
        for (i, a) in self.backscatter_amp.expand(k, "backscatter_amp")?.iter().enumerate() {
            if !(*a > 0.0 && *a <= self.amp_max) {
                return Err(ConfigError::AmplitudeOutOfRange {
                    index: i,
                    amp: *a,
                    amp_max: self.amp_max,
                });
            }
        }
        if !(self.secrecy_rate > 0.0) {
            return Err(ConfigError::NonPositiveRate(self.secrecy_rate));
        }
        for (name, v) in [("timing_error", self.timing_error), ("csi_error", self.csi_error)] {
            if !(0.0..1.0).contains(&v) {
                return Err(ConfigError::UnitIntervalError { name, value: v });
            }
        }
        Ok(())
    }

    /// Average SNR of the direct legitimate link, P·Ω_tr/σ_r², in dB.
    /// This is the x-axis of the SNR sweeps; it moves with transmit power.
    pub fn legit_snr_db(&self) -> f64 {
        let p = dbm_to_watt(self.transmit_power_dbm);
        let omega = self.dist_t_r.powf(-self.path_loss_exp);
        10.0 * (p * omega / dbm_to_watt(self.noise_r_dbm)).log10()
    }

    /// Set transmit power so that the direct legitimate SNR hits `snr_db`.
    pub fn with_legit_snr_db(mut self, snr_db: f64) -> Self {
        let omega = self.dist_t_r.powf(-self.path_loss_exp);
        let sigma = dbm_to_watt(self.noise_r_dbm);
        self.transmit_power_dbm = snr_db + 10.0 * (sigma / omega).log10() + 30.0;
        self
    }
}

/// Compute all derived quantities. Pure: identical configs give bit-identical
/// results. dBm → watt conversion is `10^((x−30)/10)` and happens only here.
pub fn derive(config: &SystemConfig) -> Result<DerivedParams, ConfigError> {
    config.validate()?;
    let k = config.num_bds;
    let alpha = config.path_loss_exp;
    let omega = |d: f64| d.powf(-alpha);

    let p_lin = dbm_to_watt(config.transmit_power_dbm);
    let sigma_r2 = dbm_to_watt(config.noise_r_dbm);
    let sigma_e2 = dbm_to_watt(config.noise_e_dbm);

    let omega_tr = omega(config.dist_t_r);
    let omega_te = omega(config.dist_t_e);
    let omega_tk: Vec<f64> = config.dist_t_k.expand(k, "dist_t_k")?.iter().map(|&d| omega(d)).collect();
    let omega_kr: Vec<f64> = config.dist_k_r.expand(k, "dist_k_r")?.iter().map(|&d| omega(d)).collect();
    let omega_ke: Vec<f64> = config.dist_k_e.expand(k, "dist_k_e")?.iter().map(|&d| omega(d)).collect();
    let amp = config.backscatter_amp.expand(k, "backscatter_amp")?;

    let beta: Vec<f64> = (0..k).map(|i| amp[i] * amp[i] * omega_tk[i] * omega_kr[i]).collect();
    let cap_a: Vec<f64> = (0..k).map(|i| p_lin * amp[i] * amp[i] * omega_tk[i] * omega_ke[i]).collect();

    let theta = 2f64.powf(config.secrecy_rate);
    let c = theta - 1.0;
    let beta_prod: f64 = beta.iter().product(); // empty product = 1 for K = 0
    let a_r = sigma_r2 * omega_tr.powi(k as i32 - 1) / (p_lin * beta_prod);

    Ok(DerivedParams {
        p_lin,
        sigma_r2,
        sigma_e2,
        omega_tr,
        omega_te,
        omega_tk,
        omega_kr,
        omega_ke,
        amp,
        beta,
        cap_a,
        lambda_e: 1.0 / (p_lin * omega_te),
        theta,
        c,
        d_ratio: theta / c,
        a_r,
        timing_error: config.timing_error,
        csi_error: config.csi_error,
        secrecy_rate: config.secrecy_rate,
    })
}

impl DerivedParams {
    /// Number of backscatter devices.
    pub fn num_bds(&self) -> usize {
        self.beta.len()
    }

    /// Rescale to a new transmit power, updating every power-bearing field
    /// (geometry and rate threshold stay put).
    pub fn with_power_dbm(&self, dbm: f64) -> DerivedParams {
        let p_new = dbm_to_watt(dbm);
        let scale = p_new / self.p_lin;
        DerivedParams {
            p_lin: p_new,
            cap_a: self.cap_a.iter().map(|a| a * scale).collect(),
            lambda_e: self.lambda_e / scale,
            a_r: self.a_r / scale,
            ..self.clone()
        }
    }

    /// Average SNR of the direct legitimate link, P·Ω_tr/σ_r².
    pub fn legit_snr(&self) -> f64 {
        self.p_lin * self.omega_tr / self.sigma_r2
    }

    /// Interference-free average SNR of the wiretap link, P·Ω_te/σ_e².
    pub fn eve_direct_snr(&self) -> f64 {
        self.p_lin * self.omega_te / self.sigma_e2
    }
}

/// Parse a config from TOML text (the on-disk format).
pub fn from_toml(text: &str) -> Result<SystemConfig, toml::de::Error> {
    toml::from_str(text)
}

/// Serialize a config to TOML text.
pub fn to_toml(config: &SystemConfig) -> String {
    toml::to_string_pretty(config).expect("config serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn direct_gain_evaluation() {
        // d = 10 m, α = 2.5 → Ω = 10^{−2.5}
        let dp = derive(&SystemConfig::default()).unwrap();
        assert!((dp.omega_tr - 10f64.powf(-2.5)).abs() < 1e-18);
        assert!((dp.omega_tr - 3.1623e-3).abs() < 1e-7);
    }

    #[test]
    fn rate_threshold() {
        // R_s = 1 → Θ = 2, c = 1, d = 2
        let dp = derive(&SystemConfig::default()).unwrap();
        assert_eq!(dp.theta, 2.0);
        assert_eq!(dp.c, 1.0);
        assert_eq!(dp.d_ratio, 2.0);
    }

    #[test]
    fn no_devices_empty_product() {
        let cfg = SystemConfig { num_bds: 0, ..Default::default() };
        let dp = derive(&cfg).unwrap();
        assert!(dp.beta.is_empty());
        let expect = dp.sigma_r2 / (dp.omega_tr * dp.p_lin);
        assert!(((dp.a_r - expect) / expect).abs() < 1e-15);
    }

    #[test]
    fn cascade_gain_value() {
        // a = 0.8, d_tk = 9.5, d_kr = 0.5, α = 2.5 → β = 0.64 · 9.5^{−2.5} · 0.5^{−2.5}
        let dp = derive(&SystemConfig::default()).unwrap();
        let expect = 0.64 * 9.5f64.powf(-2.5) * 0.5f64.powf(-2.5);
        assert!(((dp.beta[0] - expect) / expect).abs() < 1e-15);
        // frozen from a reference calculator
        assert!((dp.beta[0] - 1.3015053267781457e-2).abs() < 1e-15);
    }

    #[test]
    fn dbm_linearization() {
        let dp = derive(&SystemConfig::default()).unwrap();
        assert!((dp.p_lin - 0.1).abs() < 1e-15); // 20 dBm
        assert!((dp.sigma_r2 - 1e-6).abs() < 1e-20); // −30 dBm
    }

    #[test]
    fn validation_errors_named() {
        let bad = SystemConfig { dist_t_r: 0.0, ..Default::default() };
        assert!(matches!(derive(&bad), Err(ConfigError::NonPositiveDistance { .. })));

        let bad = SystemConfig { secrecy_rate: 0.0, ..Default::default() };
        assert!(matches!(derive(&bad), Err(ConfigError::NonPositiveRate(_))));

        let bad = SystemConfig {
            backscatter_amp: PerDevice::Shared(1.2),
            amp_max: 1.0,
            ..Default::default()
        };
        assert!(matches!(derive(&bad), Err(ConfigError::AmplitudeOutOfRange { .. })));

        let bad = SystemConfig { path_loss_exp: -1.0, ..Default::default() };
        assert!(matches!(derive(&bad), Err(ConfigError::NonPositivePathLoss(_))));

        let bad = SystemConfig {
            dist_k_r: PerDevice::List(vec![0.5, 0.5]),
            num_bds: 3,
            ..Default::default()
        };
        assert!(matches!(derive(&bad), Err(ConfigError::ListLength { .. })));

        let bad = SystemConfig { timing_error: 1.0, ..Default::default() };
        assert!(matches!(derive(&bad), Err(ConfigError::UnitIntervalError { .. })));
    }

    #[test]
    fn derive_is_pure() {
        let cfg = SystemConfig::default();
        assert_eq!(derive(&cfg).unwrap(), derive(&cfg).unwrap());
    }

    #[test]
    fn snr_roundtrip() {
        let cfg = SystemConfig::default().with_legit_snr_db(20.0);
        assert!((cfg.legit_snr_db() - 20.0).abs() < 1e-12);
        let dp = derive(&cfg).unwrap();
        assert!((10.0 * dp.legit_snr().log10() - 20.0).abs() < 1e-12);
    }

    #[test]
    fn toml_roundtrip_with_overrides() {
        let text = r#"
            transmit_power_dbm = 23.0
            num_bds = 4
            dist_k_r = [0.1, 0.2, 0.3, 0.4]
        "#;
        let cfg = from_toml(text).unwrap();
        assert_eq!(cfg.num_bds, 4);
        assert_eq!(cfg.dist_t_r, 10.0); // default survives
        let dp = derive(&cfg).unwrap();
        assert_eq!(dp.omega_kr.len(), 4);
        let back = from_toml(&to_toml(&cfg)).unwrap();
        assert_eq!(cfg, back);
    }
}
