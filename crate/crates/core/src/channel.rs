//! Seeded Monte Carlo simulator of the cascaded Rayleigh channels,
//! best-surface selection, and a decode-and-forward relay baseline.
//!
//! Trials are embarrassingly parallel. Aggregation is chunked with a fixed
//! chunk size and a fixed fold order, so estimates are bit-identical for any
//! worker count.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rng::{RngSpec, TrialRng};

/// Minimum trial count accepted by the estimators.
pub const MIN_TRIALS: u64 = 1_000;

/// Trials per deterministic aggregation chunk.
const CHUNK: u64 = 8_192;

/// Scenario parameters for one simulated link.
///
/// The average SNR always satisfies
/// `avg_snr = symbol_energy_ratio * dist_sr^-path_loss_exp * dist_rd^-path_loss_exp`;
/// the plain constructor uses neutral geometry (unit distances, zero
/// exponent) so `avg_snr` is the single SNR knob.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    pub num_ris: usize,
    pub num_elements: usize,
    /// Average per-branch SNR, linear scale.
    pub avg_snr: f64,
    /// Outage threshold, linear scale.
    pub snr_threshold: f64,
    pub dist_sr: f64,
    pub dist_rd: f64,
    pub path_loss_exp: f64,
    /// Es/N0, linear scale.
    pub symbol_energy_ratio: f64,
}

impl SystemConfig {
    /// Neutral-geometry scenario: distances 1, path-loss exponent 0.
    pub fn new(
        num_ris: usize,
        num_elements: usize,
        avg_snr: f64,
        snr_threshold: f64,
    ) -> Result<Self> {
        let cfg = Self {
            num_ris,
            num_elements,
            avg_snr,
            snr_threshold,
            dist_sr: 1.0,
            dist_rd: 1.0,
            path_loss_exp: 0.0,
            symbol_energy_ratio: avg_snr,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Scenario built from the link budget; the average SNR is derived.
    pub fn from_link_budget(
        num_ris: usize,
        num_elements: usize,
        symbol_energy_ratio: f64,
        dist_sr: f64,
        dist_rd: f64,
        path_loss_exp: f64,
        snr_threshold: f64,
    ) -> Result<Self> {
        let avg_snr = symbol_energy_ratio
            * dist_sr.powf(-path_loss_exp)
            * dist_rd.powf(-path_loss_exp);
        let cfg = Self {
            num_ris,
            num_elements,
            avg_snr,
            snr_threshold,
            dist_sr,
            dist_rd,
            path_loss_exp,
            symbol_energy_ratio,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_ris == 0 || self.num_elements == 0 {
            return Err(Error::InvalidConfig(
                "num_ris and num_elements must be >= 1".into(),
            ));
        }
        for (name, v) in [
            ("avg_snr", self.avg_snr),
            ("snr_threshold", self.snr_threshold),
            ("dist_sr", self.dist_sr),
            ("dist_rd", self.dist_rd),
            ("symbol_energy_ratio", self.symbol_energy_ratio),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        if self.path_loss_exp.is_nan() || self.path_loss_exp < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "path_loss_exp must be nonnegative, got {}",
                self.path_loss_exp
            )));
        }
        let derived = self.symbol_energy_ratio
            * self.dist_sr.powf(-self.path_loss_exp)
            * self.dist_rd.powf(-self.path_loss_exp);
        let err = (derived - self.avg_snr).abs() / self.avg_snr.max(derived);
        if err > 1e-9 {
            return Err(Error::InvalidConfig(format!(
                "avg_snr {} inconsistent with link budget {}",
                self.avg_snr, derived
            )));
        }
        Ok(())
    }
}

/// A Monte Carlo point estimate with its normal-approximation interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloResult {
    pub estimate: f64,
    pub std_error: f64,
    pub trials: u64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl MonteCarloResult {
    const Z_95: f64 = 1.959_963_984_540_054;

    fn probability(hits: u64, trials: u64) -> Self {
        let n = trials as f64;
        let p = hits as f64 / n;
        let se = (p * (1.0 - p) / n).sqrt();
        Self {
            estimate: p,
            std_error: se,
            trials,
            ci_low: (p - Self::Z_95 * se).max(0.0),
            ci_high: (p + Self::Z_95 * se).min(1.0),
        }
    }

    fn sample_mean(sum: f64, sum_sq: f64, trials: u64) -> Self {
        let n = trials as f64;
        let mean = sum / n;
        let var = (sum_sq / n - mean * mean).max(0.0) * n / (n - 1.0);
        let se = (var / n).sqrt();
        Self {
            estimate: mean,
            std_error: se,
            trials,
            ci_low: mean - Self::Z_95 * se,
            ci_high: mean + Self::Z_95 * se,
        }
    }
}

/// Relay pre-log factor: half-duplex relaying spends two slots per symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelayPrelog {
    HalfDuplex,
    FullDuplex,
}

impl RelayPrelog {
    pub fn factor(self) -> f64 {
        match self {
            RelayPrelog::HalfDuplex => 0.5,
            RelayPrelog::FullDuplex => 1.0,
        }
    }
}

/// One cascade amplitude: the coherent sum of `n` Rayleigh-product element
/// gains (each factor has mean sqrt(pi)/2 and unit second moment).
pub fn sample_cascade_amplitude(n: usize, rng: &mut TrialRng) -> f64 {
    debug_assert!(n >= 1);
    let mut a = 0.0;
    for _ in 0..n {
        a += rng.rayleigh() * rng.rayleigh();
    }
    a
}

/// End-to-end SNR of one branch given its cascade amplitude.
#[inline]
pub fn e2e_snr(amplitude: f64, avg_snr: f64) -> f64 {
    avg_snr * amplitude * amplitude
}

/// Index and value of the strongest branch; ties resolve to the lowest index.
pub fn best_branch(snrs: &[f64]) -> Result<(usize, f64)> {
    if snrs.is_empty() {
        return Err(Error::EmptyBranchList);
    }
    let mut idx = 0;
    let mut best = snrs[0];
    for (i, &v) in snrs.iter().enumerate().skip(1) {
        if v > best {
            idx = i;
            best = v;
        }
    }
    Ok((idx, best))
}

/// Selected-branch SNR for one trial of the surface-aided link.
fn selected_snr(cfg: &SystemConfig, rng: &mut TrialRng) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for _ in 0..cfg.num_ris {
        let a = sample_cascade_amplitude(cfg.num_elements, rng);
        let snr = e2e_snr(a, cfg.avg_snr);
        if snr > best {
            best = snr;
        }
    }
    best
}

/// Selected end-to-end SNR for one trial of the DF relay baseline:
/// the best of `num_ris` relays, each the minimum of two exponential hops.
fn selected_relay_snr(cfg: &SystemConfig, rng: &mut TrialRng) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for _ in 0..cfg.num_ris {
        let hop1 = rng.exponential(cfg.avg_snr);
        let hop2 = rng.exponential(cfg.avg_snr);
        let snr = hop1.min(hop2);
        if snr > best {
            best = snr;
        }
    }
    best
}

/// Outage probability of best-surface selection by Monte Carlo.
pub fn mc_outage(cfg: &SystemConfig, trials: u64, spec: RngSpec) -> Result<MonteCarloResult> {
    check_trials(trials)?;
    cfg.validate()?;
    let hits = count_chunked(trials, |t| {
        let mut rng = TrialRng::new(spec, t);
        selected_snr(cfg, &mut rng) < cfg.snr_threshold
    });
    Ok(MonteCarloResult::probability(hits, trials))
}

/// Average sum-rate of best-surface selection by Monte Carlo.
pub fn mc_sum_rate(cfg: &SystemConfig, trials: u64, spec: RngSpec) -> Result<MonteCarloResult> {
    check_trials(trials)?;
    cfg.validate()?;
    let (sum, sum_sq) = sum_chunked(trials, |t| {
        let mut rng = TrialRng::new(spec, t);
        (1.0 + selected_snr(cfg, &mut rng)).log2()
    });
    Ok(MonteCarloResult::sample_mean(sum, sum_sq, trials))
}

/// Outage probability of opportunistic DF relay selection.
pub fn mc_relay_outage(
    cfg: &SystemConfig,
    trials: u64,
    spec: RngSpec,
) -> Result<MonteCarloResult> {
    check_trials(trials)?;
    cfg.validate()?;
    let hits = count_chunked(trials, |t| {
        let mut rng = TrialRng::new(spec, t);
        selected_relay_snr(cfg, &mut rng) < cfg.snr_threshold
    });
    Ok(MonteCarloResult::probability(hits, trials))
}

/// Average sum-rate of opportunistic DF relay selection.
pub fn mc_relay_sum_rate(
    cfg: &SystemConfig,
    trials: u64,
    spec: RngSpec,
    prelog: RelayPrelog,
) -> Result<MonteCarloResult> {
    check_trials(trials)?;
    cfg.validate()?;
    let factor = prelog.factor();
    let (sum, sum_sq) = sum_chunked(trials, |t| {
        let mut rng = TrialRng::new(spec, t);
        factor * (1.0 + selected_relay_snr(cfg, &mut rng)).log2()
    });
    Ok(MonteCarloResult::sample_mean(sum, sum_sq, trials))
}

fn check_trials(trials: u64) -> Result<()> {
    if trials < MIN_TRIALS {
        return Err(Error::TooFewTrials {
            min: MIN_TRIALS,
            got: trials,
        });
    }
    Ok(())
}

/// Count trials satisfying the predicate. Chunks are evaluated in parallel;
/// the integer total is order-independent.
fn count_chunked<F>(trials: u64, pred: F) -> u64
where
    F: Fn(u64) -> bool + Sync,
{
    let chunks = trials.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = ((c + 1) * CHUNK).min(trials);
            let mut hits = 0u64;
            for t in lo..hi {
                if pred(t) {
                    hits += 1;
                }
            }
            hits
        })
        .sum()
}

/// Sum f(trial) and f(trial)^2 with a fixed association tree: sequential
/// within each chunk, then a sequential fold over chunk results in chunk
/// order. Bit-identical for any worker count.
fn sum_chunked<F>(trials: u64, f: F) -> (f64, f64)
where
    F: Fn(u64) -> f64 + Sync,
{
    let chunks = trials.div_ceil(CHUNK);
    let partials: Vec<(f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = ((c + 1) * CHUNK).min(trials);
            let mut sum = 0.0;
            let mut sum_sq = 0.0;
            for t in lo..hi {
                let v = f(t);
                sum += v;
                sum_sq += v * v;
            }
            (sum, sum_sq)
        })
        .collect();
    partials
        .into_iter()
        .fold((0.0, 0.0), |(s, q), (ps, pq)| (s + ps, q + pq))
}
