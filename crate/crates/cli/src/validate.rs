//! One-shot validation suite: reruns every module's invariants and prints a
//! pass/fail line per check.

use ris_core::channel::{mc_outage, mc_sum_rate, sample_cascade_amplitude};
use ris_core::mixture::{build_mg, diversity_order, fit_kg, outage_asymptotic, outage_exact};
use ris_core::scaling::{
    chernoff_cdf, chernoff_pdf, chernoff_tail, growth_constant, growth_threshold, ChernoffParams,
};
use ris_core::special::{bessel_k0, gauss_laguerre, marcum_q_half, reg_lower_gamma};
use ris_core::{db_to_linear, RngSpec, SystemConfig, TrialRng};

use std::f64::consts::PI;
use std::fmt::Write as _;

/// Validation depth.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValidationLevel {
    /// 1e5 Monte Carlo trials per statistical check.
    Quick,
    /// 1e7 trials.
    Full,
}

impl ValidationLevel {
    pub fn trials(self) -> u64 {
        match self {
            ValidationLevel::Quick => 100_000,
            ValidationLevel::Full => 10_000_000,
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "quick" => Some(ValidationLevel::Quick),
            "full" => Some(ValidationLevel::Full),
            _ => None,
        }
    }
}

pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "[{status}] {name}: {detail}", name = c.name, detail = c.detail);
        }
        let verdict = if self.all_passed() { "PASS" } else { "FAIL" };
        let _ = writeln!(
            out,
            "{verdict}: {}/{} checks passed",
            self.checks.iter().filter(|c| c.passed).count(),
            self.checks.len()
        );
        out
    }
}

fn check(name: &'static str, passed: bool, detail: String) -> Check {
    Check {
        name,
        passed,
        detail,
    }
}

/// Run the complete suite at the given depth.
pub fn run_validation(level: ValidationLevel) -> ValidationReport {
    let trials = level.trials();
    let seed = RngSpec::new(0x5EED_CAFE, 0);
    let mut checks = Vec::new();

    // -- special functions ---------------------------------------------------
    checks.push({
        let mut worst = 0.0f64;
        for m in [1usize, 2, 4, 8, 16, 25] {
            let rule = gauss_laguerre(m).expect("order in range");
            let mut factorial = 1.0;
            for p in 0..=(2 * m - 1) {
                if p > 0 {
                    factorial *= p as f64;
                }
                let got = rule.integrate(|x| x.powi(p as i32));
                worst = worst.max(((got - factorial) / factorial).abs());
            }
        }
        check(
            "quadrature exactness",
            worst < 1e-10,
            format!("max relative error {worst:.2e} (tolerance 1e-10)"),
        )
    });

    checks.push({
        let f = |a: f64| {
            if a <= 0.0 {
                0.0
            } else {
                4.0 * a * bessel_k0(2.0 * a).expect("positive argument")
            }
        };
        let integral = adaptive_simpson(&f, 0.0, 25.0, 1e-11, 48);
        let err = (integral - 1.0).abs();
        check(
            "element-gain density normalization",
            err < 1e-8,
            format!("|integral - 1| = {err:.2e} (tolerance 1e-8)"),
        )
    });

    checks.push({
        let mut worst = 0.0f64;
        for a in [0.0, 0.5, 1.0, 2.0, 4.0] {
            for b in [0.0, 0.5, 1.0, 2.0, 4.0] {
                let closed = marcum_q_half(a, b);
                let oracle = marcum_oracle(a, b);
                worst = worst.max((closed - oracle).abs());
            }
        }
        check(
            "Marcum Q closed form vs integration",
            worst < 1e-10,
            format!("max |diff| {worst:.2e} on the 5x5 grid"),
        )
    });

    checks.push({
        let mut ok = true;
        let mut worst = String::new();
        for a in [0.5, 1.0, 3.0, 7.5] {
            let mut prev = -1.0;
            for i in 0..=300 {
                let x = 0.1 * i as f64;
                let p = reg_lower_gamma(a, x).expect("valid arguments");
                if !(0.0..=1.0).contains(&p) || p + 1e-15 < prev {
                    ok = false;
                    worst = format!("violation at a = {a}, x = {x}");
                }
                prev = p;
            }
        }
        check(
            "regularized gamma is a CDF",
            ok,
            if ok { "monotone in [0, 1] for sampled shapes".into() } else { worst },
        )
    });

    // -- analytic distributions ----------------------------------------------
    let params3 = fit_kg(3).expect("fit");
    let mg3 = build_mg(&params3, 25).expect("mixture");

    checks.push({
        let gm: f64 = gamma_fn(params3.shape_m);
        let total: f64 = mg3
            .terms()
            .iter()
            .map(|t| t.weight * gm * t.rate.powf(-t.shape))
            .sum();
        let err = (total - 1.0).abs();
        check(
            "mixture normalization",
            err < 1e-10,
            format!("|sum - 1| = {err:.2e} (N = 3, order 25)"),
        )
    });

    checks.push({
        // first moment by composite Simpson
        let steps = 40_000usize;
        let hi = 400.0;
        let h = hi / steps as f64;
        let mut acc = 0.0;
        for i in 0..steps {
            let a = i as f64 * h;
            let b = a + h;
            let mid = 0.5 * (a + b);
            let f = |g: f64| if g <= 0.0 { 0.0 } else { g * mg3.pdf(g, 1.0) };
            acc += h / 6.0 * (f(a) + 4.0 * f(mid) + f(b));
        }
        let rel = (acc - params3.mean_power).abs() / params3.mean_power;
        check(
            "mixture mean vs mean power",
            rel < 0.005,
            format!("relative error {rel:.2e} (tolerance 5e-3)"),
        )
    });

    checks.push({
        // dual route: CDF vs integral of the density
        let avg = 10.0;
        let mut worst = 0.0f64;
        for g in [5.0, 20.0, 80.0] {
            let steps = 20_000usize;
            let h = g / steps as f64;
            let mut acc = 0.0;
            for i in 0..steps {
                let a = i as f64 * h;
                let mid = a + 0.5 * h;
                let b = a + h;
                let f = |x: f64| if x <= 0.0 { 0.0 } else { mg3.pdf(x, avg) };
                acc += h / 6.0 * (f(a) + 4.0 * f(mid) + f(b));
            }
            worst = worst.max((acc - mg3.cdf(g, avg)).abs());
        }
        check(
            "mixture CDF dual route",
            worst < 1e-9,
            format!("max |integral - cdf| = {worst:.2e} (tolerance 1e-9)"),
        )
    });

    checks.push({
        let th = db_to_linear(20.0);
        let avg = db_to_linear(20.0);
        let cfg = SystemConfig::new(2, 3, avg, th).expect("config");
        let mc = mc_outage(&cfg, trials, seed.substream(8)).expect("simulation");
        let analytic = outage_exact(&mg3, th, avg, 2);
        let diff = (analytic - mc.estimate).abs();
        check(
            "exact outage vs Monte Carlo",
            diff <= 3.0 * mc.std_error,
            format!(
                "analytic {analytic:.4e}, mc {:.4e}, |diff|/se = {:.2}",
                mc.estimate,
                diff / mc.std_error
            ),
        )
    });

    checks.push({
        let th = db_to_linear(20.0);
        let xs: Vec<f64> = (0..=6).map(|i| 5.5 + 0.25 * i as f64).collect();
        let ys: Vec<f64> = xs
            .iter()
            .map(|x| outage_asymptotic(&mg3, th, 10f64.powf(*x), 2).log10())
            .collect();
        let slope = slope(&xs, &ys);
        let target = -(diversity_order(2, 3) as f64);
        let ratio = slope / target;
        check(
            "asymptotic slope vs diversity order",
            (0.98..=1.02).contains(&ratio),
            format!("fitted/expected = {ratio:.4} for (K, N) = (2, 3)"),
        )
    });

    // -- scaling laws ----------------------------------------------------------
    checks.push({
        let params = ChernoffParams::default();
        let mut worst = 0.0f64;
        for k in [2usize, 10, 100, 10_000] {
            let h = growth_threshold(k, 10, 10.0, params);
            let level = chernoff_cdf(h, 10.0, 10, params);
            worst = worst.max((level - (1.0 - 1.0 / k as f64)).abs());
        }
        check(
            "growth threshold self-consistency",
            worst < 1e-10,
            format!("max |F(h_K) - (1 - 1/K)| = {worst:.2e}"),
        )
    });

    checks.push({
        let params = ChernoffParams::default();
        let c1 = growth_constant(10.0, 10, params);
        let mut worst = 0.0f64;
        for g in [1.0, 100.0, 5_000.0] {
            let ratio = chernoff_tail(g, 10.0, 10, params) / chernoff_pdf(g, 10.0, 10, params);
            worst = worst.max(((ratio - c1) / c1).abs());
        }
        check(
            "constant tail ratio",
            worst < 1e-12,
            format!("max relative deviation {worst:.2e}"),
        )
    });

    // -- channel / RNG ---------------------------------------------------------
    checks.push({
        let n = 3usize;
        let draws = trials;
        let want_mean = n as f64 * PI / 4.0;
        let want_var = n as f64 * (16.0 - PI * PI) / 16.0;
        let (mut s1, mut s2) = (0.0, 0.0);
        for t in 0..draws {
            let mut rng = TrialRng::new(seed.substream(9), t);
            let a = sample_cascade_amplitude(n, &mut rng);
            s1 += a;
            s2 += a * a;
        }
        let mean = s1 / draws as f64;
        let var = s2 / draws as f64 - mean * mean;
        let se_mean = (var / draws as f64).sqrt();
        let ok = (mean - want_mean).abs() < 3.0 * se_mean;
        check(
            "cascade amplitude moments",
            ok && (var - want_var).abs() / want_var < 0.05,
            format!("mean {mean:.4} vs {want_mean:.4}, variance {var:.4} vs {want_var:.4}"),
        )
    });

    checks.push({
        let cfg = SystemConfig::new(2, 3, db_to_linear(15.0), db_to_linear(10.0)).expect("config");
        let spec = seed.substream(10);
        let a = mc_outage(&cfg, trials.min(1_000_000), spec).expect("simulation");
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(2)
            .build()
            .expect("pool");
        let b = pool.install(|| mc_outage(&cfg, trials.min(1_000_000), spec).expect("simulation"));
        let identical =
            a.estimate.to_bits() == b.estimate.to_bits() && a.std_error.to_bits() == b.std_error.to_bits();
        check(
            "determinism across worker counts",
            identical,
            format!("estimate {:.10e} reproduced bit-exactly", a.estimate),
        )
    });

    checks.push({
        // shared-seed monotonicity of the outage estimate
        let spec = seed.substream(11);
        let mut ok = true;
        let mut prev = 1.0;
        for db in [5.0, 10.0, 15.0, 20.0, 25.0] {
            let cfg = SystemConfig::new(2, 3, db_to_linear(db), db_to_linear(10.0)).expect("config");
            let r = mc_outage(&cfg, trials.min(1_000_000), spec).expect("simulation");
            if r.estimate > prev {
                ok = false;
            }
            prev = r.estimate;
        }
        check(
            "outage monotone in average SNR",
            ok,
            "nonincreasing along a shared-seed SNR grid".into(),
        )
    });

    checks.push({
        // order statistics: ECDF of the max vs single-branch ECDF^K
        let draws = (trials.min(1_000_000)) as usize;
        let k = 3usize;
        let n = 2usize;
        let mut single: Vec<f64> = (0..draws)
            .map(|t| {
                let mut rng = TrialRng::new(seed.substream(12), t as u64);
                let a = sample_cascade_amplitude(n, &mut rng);
                a * a
            })
            .collect();
        single.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        let mut best: Vec<f64> = (0..draws)
            .map(|t| {
                let mut rng = TrialRng::new(seed.substream(13), t as u64);
                (0..k)
                    .map(|_| {
                        let a = sample_cascade_amplitude(n, &mut rng);
                        a * a
                    })
                    .fold(f64::NEG_INFINITY, f64::max)
            })
            .collect();
        best.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        let mut worst = 0.0f64;
        for (i, &x) in best.iter().enumerate() {
            let idx = single.partition_point(|&s| s <= x);
            let f_single = idx as f64 / draws as f64;
            let f_best = (i + 1) as f64 / draws as f64;
            worst = worst.max((f_single.powi(k as i32) - f_best).abs());
        }
        let bound = if draws >= 1_000_000 { 0.01 } else { 0.02 };
        check(
            "selection order statistics",
            worst < bound,
            format!("KS distance {worst:.4} (bound {bound})"),
        )
    });

    checks.push({
        // selection rate grows with K under shared seeds
        let spec = seed.substream(14);
        let mut prev = 0.0;
        let mut ok = true;
        for k in [2usize, 5, 10] {
            let cfg = SystemConfig::new(k, 10, db_to_linear(10.0), 1.0).expect("config");
            let r = mc_sum_rate(&cfg, trials.min(200_000), spec).expect("simulation");
            if r.estimate <= prev {
                ok = false;
            }
            prev = r.estimate;
        }
        check(
            "sum rate monotone in surface count",
            ok,
            "strictly increasing over K in {2, 5, 10}".into(),
        )
    });

    ValidationReport { checks }
}

fn gamma_fn(x: f64) -> f64 {
    ris_core::special::ln_gamma(x).expect("positive").exp()
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// Recursive adaptive Simpson quadrature.
fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
        let m = 0.5 * (a + b);
        (b - a) / 6.0 * (f(a) + 4.0 * f(m) + f(b))
    }
    let m = 0.5 * (a + b);
    let whole = simpson(f, a, b);
    let left = simpson(f, a, m);
    let right = simpson(f, m, b);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        adaptive_simpson(f, a, m, 0.5 * tol, depth - 1)
            + adaptive_simpson(f, m, b, 0.5 * tol, depth - 1)
    }
}

/// Composite-Simpson oracle for the order-1/2 Marcum Q function.
fn marcum_oracle(a: f64, b: f64) -> f64 {
    let integrand = |x: f64| {
        let y = (a * x).abs();
        let ln_cosh = y + (-2.0 * y).exp().ln_1p() - std::f64::consts::LN_2;
        (-(x * x + a * a) / 2.0 + ln_cosh).exp()
    };
    let hi = b + 45.0;
    let steps = 60_000usize;
    let h = (hi - b) / steps as f64;
    let mut acc = 0.0;
    for i in 0..steps {
        let x0 = b + i as f64 * h;
        acc += h / 6.0 * (integrand(x0) + 4.0 * integrand(x0 + 0.5 * h) + integrand(x0 + h));
    }
    (2.0 / PI).sqrt() * acc
}
