//! Extreme-value asymptotics of best-of-K selection: Gaussian-equivalent
//! SNR law, its Chernoff tail form, the constant tail ratio, the 1 - 1/K
//! growth threshold, and the capacity scaling law.

use crate::error::{Error, Result};
use crate::mixture::cascade_moments;
use crate::special::marcum_q_half;

use std::f64::consts::PI;

/// Default Chernoff parameter: the midpoint of the open interval (0, 1/2).
pub const DEFAULT_THETA: f64 = 0.25;

/// Gaussian surrogate of the cascade amplitude: the selected-branch SNR is
/// then noncentral-chi-square distributed with half a degree of freedom.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianEquivalent {
    /// Noncentrality (squared amplitude mean).
    pub noncentrality: f64,
    /// Amplitude variance.
    pub variance: f64,
}

impl GaussianEquivalent {
    pub fn new(num_elements: usize) -> Self {
        let m = cascade_moments(num_elements);
        Self {
            noncentrality: m.mean * m.mean,
            variance: m.variance,
        }
    }
}

/// Chernoff parameter, constrained to the open interval (0, 1/2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChernoffParams {
    theta: f64,
}

impl ChernoffParams {
    pub fn new(theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta < 0.5) {
            return Err(Error::ChernoffParameter(theta));
        }
        Ok(Self { theta })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

impl Default for ChernoffParams {
    fn default() -> Self {
        Self {
            theta: DEFAULT_THETA,
        }
    }
}

/// Everything the capacity scaling law produces for one (K, N, avg_snr,
/// theta) point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingReport {
    /// Constant tail ratio (1 - F) / f of the Chernoff form.
    pub growth_constant: f64,
    /// The 1 - 1/K quantile scale at which the selected SNR grows.
    pub threshold: f64,
    /// log2(1 + threshold).
    pub sum_rate_full: f64,
    /// Leading four-term decomposition:
    /// log2(ln K) + log2((16 - pi^2)/(16 theta)) + log2(avg_snr) + log2(N).
    pub sum_rate_leading: f64,
}

/// Single-branch SNR CDF under the Gaussian amplitude surrogate, via the
/// order-1/2 Marcum Q closed form. Monotone nondecreasing in `snr`.
pub fn gaussian_cdf_exact(snr: f64, avg_snr: f64, num_elements: usize) -> f64 {
    debug_assert!(snr >= 0.0 && avg_snr > 0.0);
    let ge = GaussianEquivalent::new(num_elements);
    let sigma = ge.variance.sqrt();
    let a = ge.noncentrality.sqrt() / sigma;
    let b = (snr / avg_snr).sqrt() / sigma;
    1.0 - marcum_q_half(a, b)
}

fn pieces(avg_snr: f64, num_elements: usize, theta: f64) -> (f64, f64, f64) {
    let n = num_elements as f64;
    let gap = 16.0 - PI * PI;
    // decay scale, prefactor exponent, and the shared prefactor
    let scale = 16.0 * theta / (avg_snr * n * gap);
    let bias = theta * n * PI * PI / (2.0 * (1.0 - 2.0 * theta) * gap);
    let prefactor = (1.0 - 2.0 * theta).powf(-0.5) * bias.exp();
    (scale, bias, prefactor)
}

/// Chernoff tail form of the single-branch SNR CDF. An asymptotic form:
/// it may be negative at small `snr` and is deliberately not clamped.
pub fn chernoff_cdf(snr: f64, avg_snr: f64, num_elements: usize, params: ChernoffParams) -> f64 {
    1.0 - chernoff_tail(snr, avg_snr, num_elements, params)
}

/// Exact complement 1 - chernoff_cdf, free of cancellation deep in the
/// tail where the CDF saturates at one.
pub fn chernoff_tail(snr: f64, avg_snr: f64, num_elements: usize, params: ChernoffParams) -> f64 {
    let (scale, _, prefactor) = pieces(avg_snr, num_elements, params.theta());
    prefactor * (-scale * snr).exp()
}

/// Exact derivative of `chernoff_cdf` with respect to `snr`.
pub fn chernoff_pdf(snr: f64, avg_snr: f64, num_elements: usize, params: ChernoffParams) -> f64 {
    let (scale, _, prefactor) = pieces(avg_snr, num_elements, params.theta());
    prefactor * scale * (-scale * snr).exp()
}

/// The constant tail ratio (1 - F) / f of the Chernoff form:
/// avg_snr * N * (16 - pi^2) / (16 theta).
pub fn growth_constant(avg_snr: f64, num_elements: usize, params: ChernoffParams) -> f64 {
    let n = num_elements as f64;
    avg_snr * n * (16.0 - PI * PI) / (16.0 * params.theta())
}

/// The growth threshold: the exact solution of chernoff_cdf(h) = 1 - 1/K.
pub fn growth_threshold(
    num_ris: usize,
    num_elements: usize,
    avg_snr: f64,
    params: ChernoffParams,
) -> f64 {
    debug_assert!(num_ris >= 1);
    let theta = params.theta();
    let (_, bias, _) = pieces(avg_snr, num_elements, theta);
    let bracket = (num_ris as f64).ln() - 0.5 * (1.0 - 2.0 * theta).ln() + bias;
    bracket * growth_constant(avg_snr, num_elements, params)
}

/// Asymptotic sum-rate of best-of-K selection, both as log2(1 + threshold)
/// and as the leading four-term decomposition. The leading form needs
/// ln K > 0, so K = 1 is rejected.
pub fn asymptotic_sum_rate(
    num_ris: usize,
    num_elements: usize,
    avg_snr: f64,
    params: ChernoffParams,
) -> Result<ScalingReport> {
    if num_ris < 2 {
        return Err(Error::LeadingFormNeedsK2(num_ris));
    }
    let gap = 16.0 - PI * PI;
    let threshold = growth_threshold(num_ris, num_elements, avg_snr, params);
    let leading = (num_ris as f64).ln().log2()
        + (gap / (16.0 * params.theta())).log2()
        + avg_snr.log2()
        + (num_elements as f64).log2();
    Ok(ScalingReport {
        growth_constant: growth_constant(avg_snr, num_elements, params),
        threshold,
        sum_rate_full: (1.0 + threshold).log2(),
        sum_rate_leading: leading,
    })
}

/// Calibrate the Chernoff parameter for (N, avg_snr) by golden-section
/// minimization of the sup-norm gap to the Gaussian-equivalent CDF over the
/// upper window snr in [avg_snr * noncentrality, 4 * avg_snr * noncentrality],
/// the region the growth threshold lives in.
pub fn calibrate_theta(num_elements: usize, avg_snr: f64) -> ChernoffParams {
    let lam = GaussianEquivalent::new(num_elements).noncentrality;
    let lo = avg_snr * lam;
    let hi = 4.0 * avg_snr * lam;
    const GRID: usize = 257;
    let sup_gap = |theta: f64| -> f64 {
        let params = ChernoffParams { theta };
        let mut worst = 0.0f64;
        for i in 0..GRID {
            let g = lo + (hi - lo) * i as f64 / (GRID - 1) as f64;
            let diff =
                (chernoff_cdf(g, avg_snr, num_elements, params) - gaussian_cdf_exact(g, avg_snr, num_elements)).abs();
            worst = worst.max(diff);
        }
        worst
    };

    // golden-section search on (0, 1/2)
    let inv_phi = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (1e-4, 0.5 - 1e-4);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (sup_gap(c), sup_gap(d));
    for _ in 0..80 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = sup_gap(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = sup_gap(d);
        }
        if (b - a).abs() < 1e-10 {
            break;
        }
    }
    ChernoffParams {
        theta: 0.5 * (a + b),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn gaussian_equivalent_matches_moments() {
        for n in [1usize, 5, 10] {
            let ge = GaussianEquivalent::new(n);
            let m = cascade_moments(n);
            assert_eq!(ge.noncentrality, m.mean * m.mean);
            assert_eq!(ge.variance, m.variance);
        }
    }

    #[test]
    fn chernoff_params_enforce_open_interval() {
        assert!(ChernoffParams::new(0.0).is_err());
        assert!(ChernoffParams::new(0.5).is_err());
        assert!(ChernoffParams::new(-0.1).is_err());
        assert!(ChernoffParams::new(0.25).is_ok());
        assert_eq!(ChernoffParams::default().theta(), DEFAULT_THETA);
    }

    #[test]
    fn gaussian_cdf_limits() {
        assert!(gaussian_cdf_exact(0.0, 10.0, 10).abs() < 1e-15);
        assert!(gaussian_cdf_exact(1e-15, 10.0, 10).abs() < 1e-9);
        assert!((gaussian_cdf_exact(1e9, 10.0, 10) - 1.0).abs() < 1e-12);
        let mut prev = 0.0;
        for i in 1..200 {
            let v = gaussian_cdf_exact(5.0 * i as f64, 10.0, 10);
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn gaussian_cdf_median_near_mean_amplitude() {
        // at snr = avg * noncentrality the amplitude sits at its mean
        let n = 10;
        let ge = GaussianEquivalent::new(n);
        let v = gaussian_cdf_exact(10.0 * ge.noncentrality, 10.0, n);
        assert!((v - 0.5).abs() < 0.02, "median check gave {v}");
    }

    #[test]
    fn chernoff_pair_is_internally_consistent() {
        let params = ChernoffParams::default();
        let (avg, n) = (10.0, 10);
        let g = avg * n as f64;
        let h = 1e-4 * g;
        let fd = (chernoff_cdf(g + h, avg, n, params) - chernoff_cdf(g - h, avg, n, params))
            / (2.0 * h);
        assert_relative_eq!(fd, chernoff_pdf(g, avg, n, params), max_relative = 1e-6);
    }

    #[test]
    fn tail_ratio_is_constant_and_equals_growth_constant() {
        let params = ChernoffParams::new(0.3).unwrap();
        let (avg, n) = (7.0, 12);
        let c1 = growth_constant(avg, n, params);
        for g in [1.0, 30.0, 500.0, 4e3, 3e4] {
            let ratio = chernoff_tail(g, avg, n, params) / chernoff_pdf(g, avg, n, params);
            assert_relative_eq!(ratio, c1, max_relative = 1e-12);
        }
        // the literal 1 - cdf form agrees wherever the subtraction is benign
        for g in [200.0, 600.0, 1500.0] {
            let ratio = (1.0 - chernoff_cdf(g, avg, n, params)) / chernoff_pdf(g, avg, n, params);
            assert_relative_eq!(ratio, c1, max_relative = 1e-10);
        }
        assert_relative_eq!(
            1.0 - chernoff_cdf(100.0, avg, n, params),
            chernoff_tail(100.0, avg, n, params),
            max_relative = 1e-10
        );
    }

    #[test]
    fn growth_constant_closed_form_point() {
        let params = ChernoffParams::new(0.25).unwrap();
        let want = (16.0 - PI * PI) / 4.0;
        assert_relative_eq!(growth_constant(1.0, 1, params), want, max_relative = 1e-14);
        // linear in avg_snr and N, decreasing in theta
        assert_relative_eq!(
            growth_constant(3.0, 1, params),
            3.0 * want,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            growth_constant(1.0, 4, params),
            4.0 * want,
            max_relative = 1e-14
        );
        assert!(
            growth_constant(1.0, 1, ChernoffParams::new(0.4).unwrap())
                < growth_constant(1.0, 1, ChernoffParams::new(0.2).unwrap())
        );
    }

    #[test]
    fn threshold_inverts_the_chernoff_cdf() {
        let params = ChernoffParams::default();
        for k in [2usize, 10, 100] {
            let h = growth_threshold(k, 10, 10.0, params);
            let level = chernoff_cdf(h, 10.0, 10, params);
            assert_abs_diff_eq!(level, 1.0 - 1.0 / k as f64, epsilon = 1e-12);
        }
    }

    #[test]
    fn threshold_monotone_in_k_n_avg() {
        let params = ChernoffParams::default();
        assert!(growth_threshold(10, 10, 10.0, params) > growth_threshold(2, 10, 10.0, params));
        assert!(growth_threshold(10, 15, 10.0, params) > growth_threshold(10, 10, 10.0, params));
        assert!(growth_threshold(10, 10, 20.0, params) > growth_threshold(10, 10, 10.0, params));
    }

    #[test]
    fn sum_rate_leading_shifts() {
        let params = ChernoffParams::default();
        // doubling N adds exactly one bit to the leading form
        let a = asymptotic_sum_rate(10, 10, 10.0, params).unwrap();
        let b = asymptotic_sum_rate(10, 20, 10.0, params).unwrap();
        assert_relative_eq!(
            b.sum_rate_leading - a.sum_rate_leading,
            1.0,
            max_relative = 1e-12
        );
        // K -> K^2 adds exactly one bit through the log2(ln K) term
        let c = asymptotic_sum_rate(100, 10, 10.0, params).unwrap();
        assert_relative_eq!(
            c.sum_rate_leading - a.sum_rate_leading,
            1.0,
            max_relative = 1e-12
        );
        // and the full form is literally log2(1 + threshold)
        assert_eq!(a.sum_rate_full, (1.0 + a.threshold).log2());
    }

    #[test]
    fn sum_rate_full_and_leading_converge_as_k_grows() {
        // the leading form drops terms that are fixed in K (one of them grows
        // with N), so convergence is in K at fixed N
        let params = ChernoffParams::default();
        let mut prev = f64::INFINITY;
        for k in [10usize, 1_000, 100_000, 10_000_000] {
            let r = asymptotic_sum_rate(k, 1, 10.0, params).unwrap();
            let gap = (r.sum_rate_full - r.sum_rate_leading).abs();
            assert!(gap < prev, "gap not shrinking at K = {k}");
            prev = gap;
        }
        let r = asymptotic_sum_rate(1_000_000, 1, 10.0, params).unwrap();
        assert!(
            (r.sum_rate_full - r.sum_rate_leading).abs() < 0.2,
            "full {} vs leading {}",
            r.sum_rate_full,
            r.sum_rate_leading
        );
    }

    #[test]
    fn leading_form_rejects_single_branch() {
        assert!(matches!(
            asymptotic_sum_rate(1, 10, 10.0, ChernoffParams::default()),
            Err(Error::LeadingFormNeedsK2(1))
        ));
        // the full form is still well-defined at K = 1
        let h = growth_threshold(1, 10, 10.0, ChernoffParams::default());
        assert!(h.is_finite() && h > 0.0);
    }

    #[test]
    fn calibrated_theta_lands_in_domain_and_tightens() {
        let params = calibrate_theta(10, 10.0);
        assert!(params.theta() > 0.0 && params.theta() < 0.5);
        // calibration should beat the default in its own sup-norm objective
        let lam = GaussianEquivalent::new(10).noncentrality;
        let sup = |p: ChernoffParams| -> f64 {
            (0..129)
                .map(|i| {
                    let g = 10.0 * lam * (1.0 + 3.0 * i as f64 / 128.0);
                    (chernoff_cdf(g, 10.0, 10, p) - gaussian_cdf_exact(g, 10.0, 10)).abs()
                })
                .fold(0.0, f64::max)
        };
        assert!(sup(params) <= sup(ChernoffParams::default()));
    }
}
