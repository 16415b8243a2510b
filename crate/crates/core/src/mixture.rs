//! Squared generalized-K fit of the cascade power and its mixture-gamma
//! representation; exact and asymptotic outage, diversity order.

use crate::error::{Error, Result};
use crate::special::{gauss_laguerre, ln_gamma_unchecked, reg_lower_gamma};

use std::f64::consts::PI;

/// Closed-form moments of the cascade amplitude for `n` elements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CascadeMoments {
    pub mean: f64,
    pub variance: f64,
    /// Mean power of the cascade, E[amplitude^2].
    pub mean_power: f64,
}

/// Mean, variance and mean power of the sum of `n` i.i.d. Rayleigh-product
/// element gains.
pub fn cascade_moments(n: usize) -> CascadeMoments {
    let nf = n as f64;
    let mean = nf * PI / 4.0;
    let variance = nf * (16.0 - PI * PI) / 16.0;
    CascadeMoments {
        mean,
        variance,
        mean_power: mean * mean + variance,
    }
}

/// Fourth moment of the cascade amplitude, from exact Rayleigh-product
/// moment algebra. Element-gain moments: m1 = pi/4, m2 = 1, m3 = 9 pi / 16,
/// m4 = 4.
pub fn cascade_fourth_moment(n: usize) -> f64 {
    let nf = n as f64;
    let m1 = PI / 4.0;
    let m2 = 1.0;
    let m3 = 9.0 * PI / 16.0;
    let m4 = 4.0;
    nf * m4
        + 3.0 * nf * (nf - 1.0) * m2 * m2
        + 4.0 * nf * (nf - 1.0) * m3 * m1
        + 6.0 * nf * (nf - 1.0) * (nf - 2.0) * m2 * m1 * m1
        + nf * (nf - 1.0) * (nf - 2.0) * (nf - 3.0) * m1.powi(4)
}

/// Shaping parameters of the squared generalized-K model of the cascade
/// power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KgParams {
    pub shape_l: f64,
    pub shape_m: f64,
    /// Mean power E[amplitude^2].
    pub mean_power: f64,
}

impl KgParams {
    /// Combined scale: xi^2 * mean_power = shape_l * shape_m by definition.
    pub fn xi_sq(&self) -> f64 {
        self.shape_l * self.shape_m / self.mean_power
    }

    pub fn xi(&self) -> f64 {
        self.xi_sq().sqrt()
    }
}

/// Fit the squared generalized-K model for `n` elements: the second shape
/// equals `n` (which pins the diversity order), and the first shape solves
/// the fourth-moment ratio
/// E[A^4] / E[A^2]^2 = (l + 1)(m + 1) / (l m).
pub fn fit_kg(n: usize) -> Result<KgParams> {
    if n == 0 {
        return Err(Error::InvalidConfig("element count must be >= 1".into()));
    }
    let moments = cascade_moments(n);
    let m = n as f64;
    let ratio = cascade_fourth_moment(n) / (moments.mean_power * moments.mean_power);
    let denom = ratio * m - (m + 1.0);
    if denom <= 0.0 {
        return Err(Error::FitFailure(format!(
            "moment ratio {ratio} implies a non-positive first shape for n = {n}"
        )));
    }
    let l = (m + 1.0) / denom;
    Ok(KgParams {
        shape_l: l,
        shape_m: m,
        mean_power: moments.mean_power,
    })
}

/// One gamma component of the mixture: weight, shape, and rate (the SNR
/// density term is weight * g^(shape-1) * avg^-shape * exp(-rate g / avg)).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MgTerm {
    pub weight: f64,
    pub shape: f64,
    pub rate: f64,
}

/// Finite mixture of gamma densities approximating the selected-branch SNR
/// law at unit average SNR, scaled by `avg_snr` at evaluation time.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureGamma {
    terms: Vec<MgTerm>,
    /// CDF mixture coefficients: cdf_weights[i] = weight_i * Gamma(shape) *
    /// rate_i^-shape; positive and summing to one by construction.
    cdf_weights: Vec<f64>,
}

/// Build the mixture from the fitted shape parameters with an M-point
/// Gauss-Laguerre rule.
pub fn build_mg(params: &KgParams, order: usize) -> Result<MixtureGamma> {
    let rule = gauss_laguerre(order)?;
    let l = params.shape_l;
    let m = params.shape_m;
    let xi_sq = params.xi_sq();

    // The CDF coefficients reduce to y_i t_i^(l-1) up to normalization;
    // everything else cancels between numerator and the normalizing sum.
    let log_raw: Vec<f64> = rule
        .iter()
        .map(|(t, y)| y.ln() + (l - 1.0) * t.ln())
        .collect();
    let max = log_raw.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut cdf_weights: Vec<f64> = log_raw.iter().map(|&v| (v - max).exp()).collect();
    let total: f64 = cdf_weights.iter().sum();
    for c in cdf_weights.iter_mut() {
        *c /= total;
    }

    let ln_gamma_m = ln_gamma_unchecked(m);
    let terms: Vec<MgTerm> = rule
        .nodes()
        .iter()
        .zip(&cdf_weights)
        .map(|(&t, &c)| {
            let rate = xi_sq / t;
            MgTerm {
                weight: (c.ln() + m * rate.ln() - ln_gamma_m).exp(),
                shape: m,
                rate,
            }
        })
        .collect();

    Ok(MixtureGamma { terms, cdf_weights })
}

impl MixtureGamma {
    pub fn order(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> &[MgTerm] {
        &self.terms
    }

    fn shape(&self) -> f64 {
        self.terms[0].shape
    }

    /// SNR density at `snr` for average SNR `avg_snr`.
    pub fn pdf(&self, snr: f64, avg_snr: f64) -> f64 {
        debug_assert!(snr > 0.0 && avg_snr > 0.0);
        let m = self.shape();
        let ln_gamma_m = ln_gamma_unchecked(m);
        let ln_snr = snr.ln();
        let ln_avg = avg_snr.ln();
        self.terms
            .iter()
            .zip(&self.cdf_weights)
            .map(|(term, &c)| {
                (c.ln() + m * term.rate.ln() - ln_gamma_m + (m - 1.0) * ln_snr
                    - m * ln_avg
                    - term.rate * snr / avg_snr)
                    .exp()
            })
            .sum()
    }

    /// SNR distribution function at `snr` for average SNR `avg_snr`,
    /// evaluated through the regularized lower incomplete gamma so large
    /// shapes cannot overflow.
    pub fn cdf(&self, snr: f64, avg_snr: f64) -> f64 {
        debug_assert!(snr >= 0.0 && avg_snr > 0.0);
        let m = self.shape();
        let v: f64 = self
            .terms
            .iter()
            .zip(&self.cdf_weights)
            .map(|(term, &c)| {
                let x = term.rate * snr / avg_snr;
                c * reg_lower_gamma(m, x).expect("shape and argument are positive")
            })
            .sum();
        v.clamp(0.0, 1.0)
    }
}

/// Exact outage probability of best-of-K selection: the single-branch CDF
/// raised to the K-th power.
pub fn outage_exact(mg: &MixtureGamma, snr_threshold: f64, avg_snr: f64, num_ris: usize) -> f64 {
    debug_assert!(num_ris >= 1);
    mg.cdf(snr_threshold, avg_snr).powi(num_ris as i32)
}

/// High-SNR asymptote of the outage probability. Deliberately unclamped:
/// values above one at low average SNR are the expected pre-asymptotic
/// behavior, and preserving the raw form keeps log-log slope fits exact.
pub fn outage_asymptotic(
    mg: &MixtureGamma,
    snr_threshold: f64,
    avg_snr: f64,
    num_ris: usize,
) -> f64 {
    debug_assert!(num_ris >= 1);
    let m = mg.shape();
    let ln_gamma_m = ln_gamma_unchecked(m);
    let ln_th = snr_threshold.ln();
    // log-sum-exp over the per-term contributions of the truncated series
    let exponents: Vec<f64> = mg
        .terms
        .iter()
        .zip(&mg.cdf_weights)
        .map(|(term, &c)| {
            c.ln() + m * term.rate.ln() - ln_gamma_m - m.ln() + m * ln_th
                - term.rate * snr_threshold / avg_snr
        })
        .collect();
    let max = exponents.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = exponents.iter().map(|&e| (e - max).exp()).sum();
    let log_single = max + sum.ln() - m * avg_snr.ln();
    (num_ris as f64 * log_single).exp()
}

/// Diversity order of the selected system: branches times elements.
pub fn diversity_order(num_ris: usize, num_elements: usize) -> u64 {
    num_ris as u64 * num_elements as u64
}
