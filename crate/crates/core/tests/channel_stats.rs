//! Statistical checks of the Monte Carlo channel simulator: closed-form
//! moments, the single-element gain law, order statistics of the selection,
//! and bit-level determinism under different worker counts.

mod common;

use common::{ks_distance, linear_slope, sorted_snr_samples};
use ris_core::channel::{
    mc_outage, mc_relay_outage, mc_relay_sum_rate, mc_sum_rate, sample_cascade_amplitude,
};
use ris_core::special::bessel_k0;
use ris_core::{db_to_linear, RelayPrelog, RngSpec, SystemConfig, TrialRng};

use std::f64::consts::PI;

const DRAWS_1M: usize = 1_000_000;

fn amplitude_samples(n: usize, draws: usize, spec: RngSpec) -> Vec<f64> {
    (0..draws)
        .map(|t| {
            let mut rng = TrialRng::new(spec, t as u64);
            sample_cascade_amplitude(n, &mut rng)
        })
        .collect()
}

#[test]
fn cascade_moments_match_closed_forms() {
    // mean N pi/4, variance N (16 - pi^2)/16, within 3 standard errors
    for (stream, n) in [(0u64, 1usize), (1, 3), (2, 10)] {
        let nf = n as f64;
        let want_mean = nf * PI / 4.0;
        let want_var = nf * (16.0 - PI * PI) / 16.0;
        let samples = amplitude_samples(n, DRAWS_1M, RngSpec::new(0xA11CE, stream));
        let m = samples.iter().sum::<f64>() / DRAWS_1M as f64;
        let v = samples.iter().map(|a| (a - m) * (a - m)).sum::<f64>() / (DRAWS_1M - 1) as f64;
        let se_mean = (v / DRAWS_1M as f64).sqrt();
        assert!(
            (m - want_mean).abs() < 3.0 * se_mean,
            "N = {n}: mean {m} vs {want_mean}"
        );
        // standard error of the sample variance via the fourth central moment
        let m4 = samples.iter().map(|a| (a - m).powi(4)).sum::<f64>() / DRAWS_1M as f64;
        let se_var = ((m4 - v * v) / DRAWS_1M as f64).sqrt();
        assert!(
            (v - want_var).abs() < 3.0 * se_var,
            "N = {n}: variance {v} vs {want_var}"
        );
    }
}

#[test]
fn single_element_gain_matches_bessel_density() {
    // empirical CDF of one product gain vs the CDF of 4 a K0(2a)
    let mut samples = amplitude_samples(1, DRAWS_1M, RngSpec::new(0xBEEF, 0));
    samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
    // tabulate the model CDF once on a fine grid, then interpolate
    let grid_max = 8.0;
    let steps = 4000;
    let mut cdf_tab = vec![0.0; steps + 1];
    let mut acc = 0.0;
    let h = grid_max / steps as f64;
    let density = |a: f64| {
        if a <= 0.0 {
            0.0
        } else {
            4.0 * a * bessel_k0(2.0 * a).unwrap()
        }
    };
    #[allow(clippy::needless_range_loop)]
    for i in 1..=steps {
        let a0 = (i - 1) as f64 * h;
        let a1 = i as f64 * h;
        acc += 0.5 * h * (density(a0) + density(a1));
        cdf_tab[i] = acc.min(1.0);
    }
    let cdf = |a: f64| -> f64 {
        if a <= 0.0 {
            0.0
        } else if a >= grid_max {
            1.0
        } else {
            let pos = a / h;
            let idx = pos.floor() as usize;
            let frac = pos - idx as f64;
            cdf_tab[idx] * (1.0 - frac) + cdf_tab[idx + 1] * frac
        }
    };
    let ks = ks_distance(&samples, cdf);
    assert!(ks < 0.01, "KS distance {ks}");
}

#[test]
fn selection_obeys_order_statistics() {
    // ECDF of the best of K branches vs the K-th power of a single branch ECDF
    let k = 3usize;
    let n = 2usize;
    let single = sorted_snr_samples(n, DRAWS_1M, RngSpec::new(0xD00D, 7));
    let best: Vec<f64> = {
        let spec = RngSpec::new(0xD00D, 8);
        let mut v: Vec<f64> = (0..DRAWS_1M)
            .map(|t| {
                let mut rng = TrialRng::new(spec, t as u64);
                (0..k)
                    .map(|_| {
                        let a = sample_cascade_amplitude(n, &mut rng);
                        a * a
                    })
                    .fold(f64::NEG_INFINITY, f64::max)
            })
            .collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    };
    let ecdf_single = |x: f64| -> f64 {
        let idx = single.partition_point(|&s| s <= x);
        idx as f64 / single.len() as f64
    };
    let ks = ks_distance(&best, |x| ecdf_single(x).powi(k as i32));
    assert!(ks < 0.01, "order-statistics KS distance {ks}");
}

#[test]
fn estimates_are_bit_identical_across_worker_counts() {
    let cfg = SystemConfig::new(3, 4, db_to_linear(15.0), db_to_linear(10.0)).unwrap();
    let spec = RngSpec::new(123, 456);
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        pool.install(|| {
            let o = mc_outage(&cfg, 100_000, spec).unwrap();
            let r = mc_sum_rate(&cfg, 100_000, spec).unwrap();
            let ro = mc_relay_outage(&cfg, 100_000, spec).unwrap();
            let rr = mc_relay_sum_rate(&cfg, 100_000, spec, RelayPrelog::HalfDuplex).unwrap();
            (
                o.estimate.to_bits(),
                o.std_error.to_bits(),
                r.estimate.to_bits(),
                r.std_error.to_bits(),
                ro.estimate.to_bits(),
                rr.estimate.to_bits(),
            )
        })
    };
    let base = run(1);
    for threads in [2, 4, 8] {
        assert_eq!(run(threads), base, "mismatch at {threads} workers");
    }
}

#[test]
fn sum_rate_grows_with_more_surfaces_under_shared_seeds() {
    // branch draws nest in K, so the selected SNR is pointwise monotone
    let spec = RngSpec::new(0x5EED, 0);
    let mut prev = 0.0;
    for k in [2usize, 5, 10] {
        let cfg = SystemConfig::new(k, 10, db_to_linear(10.0), 1.0).unwrap();
        let r = mc_sum_rate(&cfg, 20_000, spec).unwrap();
        assert!(r.estimate > prev, "K = {k}: {} !> {prev}", r.estimate);
        prev = r.estimate;
    }
}

#[test]
fn relay_rate_gains_half_bit_per_snr_doubling_at_high_snr() {
    // with the half-duplex pre-log, rate ~ (1/2) log2(avg_snr) + const
    let spec = RngSpec::new(77, 0);
    let dbs = [40.0, 43.0103, 46.0206, 49.0309]; // successive doublings
    let rates: Vec<f64> = dbs
        .iter()
        .map(|&db| {
            let cfg = SystemConfig::new(2, 1, db_to_linear(db), 1.0).unwrap();
            mc_relay_sum_rate(&cfg, 50_000, spec, RelayPrelog::HalfDuplex)
                .unwrap()
                .estimate
        })
        .collect();
    let doublings: Vec<f64> = (0..dbs.len()).map(|i| i as f64).collect();
    let slope = linear_slope(&doublings, &rates);
    assert!(
        (slope - 0.5).abs() < 0.01,
        "rate gain per doubling {slope} (expect ~0.5)"
    );
}

#[test]
fn surface_link_dominates_relay_link_in_outage() {
    // N = 3 surfaces against DF relays across the waterfall region
    let spec = RngSpec::new(0xFA11, 0);
    for k in [1usize, 2, 3] {
        for db in [10.0, 20.0, 30.0, 40.0] {
            let cfg = SystemConfig::new(k, 3, db_to_linear(db), db_to_linear(20.0)).unwrap();
            let ris = mc_outage(&cfg, 50_000, spec).unwrap();
            let relay = mc_relay_outage(&cfg, 50_000, spec.substream(1)).unwrap();
            assert!(
                ris.estimate <= relay.estimate,
                "K = {k}, {db} dB: {} !<= {}",
                ris.estimate,
                relay.estimate
            );
        }
    }
}
