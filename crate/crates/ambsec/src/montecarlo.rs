//! Trial-level simulation of the backscatter wiretap system.
//!
//! Each trial draws every fading coefficient fresh, forms the two SINRs from
//! the same draw (they share the transmitter→device channels), and applies
//! the optional impairment models. Randomness is counter-based: every trial
//! owns stream `trial_index` of a ChaCha8 cipher keyed by the batch seed, so
//! results are bit-identical across runs and across any number of worker
//! threads, and enabling an impairment never perturbs the base draws.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use thiserror::Error;

use crate::sysmodel::{derive, ConfigError, DerivedParams, SystemConfig};

#[derive(Debug, Error)]
pub enum MonteCarloError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("batch must contain at least one trial")]
    EmptyBatch,
    #[error("grid must be sorted ascending")]
    UnsortedGrid,
    #[error("empty sample set")]
    EmptySamples,
}

/// All fading coefficients of one trial.
#[derive(Debug, Clone)]
pub struct FadingDraw {
    pub h_tr: Complex64,
    pub h_te: Complex64,
    pub h_tk: Vec<Complex64>,
    pub h_kr: Vec<Complex64>,
    pub h_ke: Vec<Complex64>,
    /// Backscatter coefficients a_k e^{jφ_k}, phase re-drawn every trial.
    pub phi: Vec<Complex64>,
}

/// Paired per-trial SINR realizations and the seed that produced them.
#[derive(Debug, Clone)]
pub struct SinrSampleBatch {
    pub gamma_r: Vec<f64>,
    pub gamma_e: Vec<f64>,
    pub n_trials: usize,
    pub seed: u64,
    pub timing_error: f64,
    pub csi_error: f64,
}

fn chacha_key(seed: u64) -> [u8; 32] {
    // SplitMix64 expansion of the 64-bit seed into a 256-bit key.
    let mut key = [0u8; 32];
    let mut state = seed;
    for chunk in key.chunks_mut(8) {
        state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
        chunk.copy_from_slice(&z.to_le_bytes());
    }
    key
}

/// RNG for one trial: stream `trial` of the batch cipher.
fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::from_seed(chacha_key(seed));
    rng.set_stream(trial);
    rng
}

/// Reserved stream for batch-level draws (randomized device placement).
const BATCH_STREAM: u64 = u64::MAX;

fn complex_normal(rng: &mut ChaCha8Rng, variance: f64) -> Complex64 {
    let scale = (variance / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * scale, im * scale)
}

/// Draw all channels of one trial. Phases are uniform on [0, 2π) and
/// re-randomized every trial; the analytic side only requires circular
/// symmetry, for which uniform is the maximal-entropy choice.
pub fn draw_fading(dp: &DerivedParams, seed: u64, trial: u64) -> FadingDraw {
    let mut rng = trial_rng(seed, trial);
    let k = dp.num_bds();
    let h_tr = complex_normal(&mut rng, dp.omega_tr);
    let h_te = complex_normal(&mut rng, dp.omega_te);
    let mut h_tk = Vec::with_capacity(k);
    let mut h_kr = Vec::with_capacity(k);
    let mut h_ke = Vec::with_capacity(k);
    let mut phi = Vec::with_capacity(k);
    for i in 0..k {
        h_tk.push(complex_normal(&mut rng, dp.omega_tk[i]));
        h_kr.push(complex_normal(&mut rng, dp.omega_kr[i]));
        h_ke.push(complex_normal(&mut rng, dp.omega_ke[i]));
        let theta = rng.gen::<f64>() * std::f64::consts::TAU;
        phi.push(Complex64::new(dp.amp[i] * theta.cos(), dp.amp[i] * theta.sin()));
    }
    FadingDraw { h_tr, h_te, h_tk, h_kr, h_ke, phi }
}

/// Receiver-side signal/noise split under a normalized timing offset
/// `t_s ∈ [0, 1)`.
///
/// The coherent backscatter amplitude shrinks by (1 − t_s) and the displaced
/// power fraction t_s(2 − t_s)·P·|Σ φ h h|² lands in the noise term. At
/// t_s = 0 this is the plain coherent SINR, bit-exactly.
pub fn apply_timing_error(
    direct: Complex64,
    backscatter_sum: Complex64,
    p_lin: f64,
    sigma_r2: f64,
    t_s: f64,
) -> (f64, f64) {
    debug_assert!((0.0..1.0).contains(&t_s));
    let coherent = direct + (1.0 - t_s) * backscatter_sum;
    let signal = p_lin * coherent.norm_sqr();
    let displaced = t_s * (2.0 - t_s) * p_lin * backscatter_sum.norm_sqr();
    (signal, sigma_r2 + displaced)
}

/// Signal/noise split under a normalized mean-squared channel-estimation
/// error `eps ∈ [0, 1)`: the fraction eps of the coherent signal power is
/// unresolvable by the estimator and acts as self-interference. At eps = 0
/// this is a bit-exact no-op.
pub fn apply_csi_error(signal_power: f64, noise_power: f64, eps: f64) -> (f64, f64) {
    debug_assert!((0.0..1.0).contains(&eps));
    ((1.0 - eps) * signal_power, noise_power + eps * signal_power)
}

fn trial_sinrs(dp: &DerivedParams, draw: &FadingDraw) -> (f64, f64) {
    let k = dp.num_bds();
    let mut bsum = Complex64::new(0.0, 0.0);
    let mut interference = 0.0;
    for i in 0..k {
        bsum += draw.phi[i] * draw.h_kr[i] * draw.h_tk[i];
        interference += dp.amp[i] * dp.amp[i] * draw.h_tk[i].norm_sqr() * draw.h_ke[i].norm_sqr();
    }
    let (signal, noise) =
        apply_timing_error(draw.h_tr, bsum, dp.p_lin, dp.sigma_r2, dp.timing_error);
    let (signal, noise) = apply_csi_error(signal, noise, dp.csi_error);
    let gamma_r = signal / noise;
    let gamma_e = dp.p_lin * draw.h_te.norm_sqr() / (dp.sigma_e2 + dp.p_lin * interference);
    (gamma_r, gamma_e)
}

/// Simulate `n_trials` independent realizations of both SINRs.
///
/// Same seed and config reproduce the batch bit-exactly regardless of the
/// rayon worker count: every trial draws from its own counter-indexed
/// stream.
pub fn sample_batch(
    config: &SystemConfig,
    n_trials: usize,
    seed: u64,
) -> Result<SinrSampleBatch, MonteCarloError> {
    if n_trials == 0 {
        return Err(MonteCarloError::EmptyBatch);
    }
    let mut dp = derive(config)?;
    if config.randomize_bd_distance {
        // Per-device placement for this batch: distance uniform in
        // (0, d_max], drawn from the reserved batch stream.
        let mut rng = trial_rng(seed, BATCH_STREAM);
        let alpha = config.path_loss_exp;
        for i in 0..dp.num_bds() {
            let u: f64 = 1.0 - rng.gen::<f64>(); // (0, 1]
            let d_max = dp.omega_kr[i].powf(-1.0 / alpha);
            dp.omega_kr[i] = (u * d_max).powf(-alpha);
            dp.beta[i] = dp.amp[i] * dp.amp[i] * dp.omega_tk[i] * dp.omega_kr[i];
        }
    }
    let mut gamma_r = vec![0.0f64; n_trials];
    let mut gamma_e = vec![0.0f64; n_trials];
    let chunk = 8192;
    gamma_r
        .par_chunks_mut(chunk)
        .zip(gamma_e.par_chunks_mut(chunk))
        .enumerate()
        .for_each(|(ci, (gr, ge))| {
            let base = ci * chunk;
            for j in 0..gr.len() {
                let draw = draw_fading(&dp, seed, (base + j) as u64);
                let (r, e) = trial_sinrs(&dp, &draw);
                gr[j] = r;
                ge[j] = e;
            }
        });
    Ok(SinrSampleBatch {
        gamma_r,
        gamma_e,
        n_trials,
        seed,
        timing_error: config.timing_error,
        csi_error: config.csi_error,
    })
}

/// Samples of the squared device cascade `|φ h h|²` with mean β.
pub fn sample_double_rayleigh(beta: f64, n: usize, seed: u64) -> Vec<f64> {
    (0..n)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, trial as u64);
            let a = complex_normal(&mut rng, 1.0).norm_sqr();
            let b = complex_normal(&mut rng, 1.0).norm_sqr();
            beta * a * b
        })
        .collect()
}

/// Fraction of trials in secrecy outage at rate `r_s`, with the binomial
/// standard error.
pub fn empirical_sop(batch: &SinrSampleBatch, r_s: f64) -> Result<(f64, f64), MonteCarloError> {
    if batch.n_trials == 0 {
        return Err(MonteCarloError::EmptyBatch);
    }
    let theta = 2f64.powf(r_s);
    let outages = batch
        .gamma_r
        .iter()
        .zip(&batch.gamma_e)
        .filter(|&(&gr, &ge)| gr < theta * (1.0 + ge) - 1.0)
        .count();
    let p = outages as f64 / batch.n_trials as f64;
    let se = (p * (1.0 - p) / batch.n_trials as f64).sqrt();
    Ok((p, se))
}

/// Right-continuous empirical CDF evaluated on an ascending grid.
pub fn empirical_cdf(samples: &[f64], grid: &[f64]) -> Result<Vec<f64>, MonteCarloError> {
    if samples.is_empty() {
        return Err(MonteCarloError::EmptySamples);
    }
    if grid.windows(2).any(|w| w[0] > w[1]) {
        return Err(MonteCarloError::UnsortedGrid);
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("no NaN samples"));
    let n = sorted.len() as f64;
    Ok(grid
        .iter()
        .map(|&g| sorted.partition_point(|&s| s <= g) as f64 / n)
        .collect())
}

/// Kolmogorov–Smirnov statistic of `samples` against a reference CDF.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> f64 {
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("no NaN samples"));
    let n = sorted.len() as f64;
    let mut sup = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        sup = sup.max(((i + 1) as f64 / n - f).abs());
        sup = sup.max((i as f64 / n - f).abs());
    }
    sup
}

/// Spearman rank correlation between the paired SINRs — the dependence the
/// single-integral outage formula ignores. Reported alongside any
/// analytic-vs-simulation gap.
pub fn rank_correlation(batch: &SinrSampleBatch) -> f64 {
    fn ranks(v: &[f64]) -> Vec<f64> {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&a, &b| v[a].partial_cmp(&v[b]).expect("no NaN"));
        let mut r = vec![0.0; v.len()];
        for (rank, &i) in idx.iter().enumerate() {
            r[i] = rank as f64;
        }
        r
    }
    let ra = ranks(&batch.gamma_r);
    let rb = ranks(&batch.gamma_e);
    let n = ra.len() as f64;
    let mean = (n - 1.0) / 2.0;
    let mut cov = 0.0;
    let mut va = 0.0;
    let mut vb = 0.0;
    for (a, b) in ra.iter().zip(&rb) {
        cov += (a - mean) * (b - mean);
        va += (a - mean) * (a - mean);
        vb += (b - mean) * (b - mean);
    }
    cov / (va.sqrt() * vb.sqrt())
}
