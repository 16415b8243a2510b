//! Independent brute-force oracles shared by the integration tests.
//! Everything here is deliberately separate from the library's own
//! evaluation paths.

#![allow(dead_code)]

/// Recursive adaptive Simpson quadrature.
pub fn adaptive_simpson<F: Fn(f64) -> f64 + Copy>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        ((b - a) / 6.0 * (fa + 4.0 * fm + fb), m, fm)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        whole: f64,
        m: f64,
        fm: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let (left, lm, flm) = simpson(f, a, fa, m, fm);
        let (right, rm, frm) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            recurse(f, a, fa, m, fm, left, lm, flm, 0.5 * tol, depth - 1)
                + recurse(f, m, fm, b, fb, right, rm, frm, 0.5 * tol, depth - 1)
        }
    }
    let fa = f(a);
    let fb = f(b);
    let (whole, m, fm) = simpson(&f, a, fa, b, fb);
    recurse(&f, a, fa, b, fb, whole, m, fm, tol, 48)
}

/// Oracle for the zero-order modified Bessel function of the second kind:
/// the integral representation K0(x) = int_0^inf exp(-x cosh t) dt,
/// integrated in the scaled form e^{-x} int exp(-x (cosh t - 1)) dt so the
/// quadrature tolerance is relative to the result.
pub fn bessel_k0_oracle(x: f64) -> f64 {
    let scaled = adaptive_simpson(
        |t: f64| {
            let half = 0.5 * t;
            let cosh_m1 = 2.0 * half.sinh() * half.sinh();
            (-x * cosh_m1).exp()
        },
        0.0,
        40.0,
        1e-13,
    );
    (-x).exp() * scaled
}

/// Oracle for the order-1/2 Marcum Q function: direct integration of the
/// noncentral-chi density tail,
/// Q_{1/2}(a, b) = sqrt(2/pi) int_b^inf exp(-(x^2 + a^2)/2) cosh(a x) dx.
pub fn marcum_q_half_oracle(a: f64, b: f64) -> f64 {
    let integrand = move |x: f64| {
        // exp(-(x^2+a^2)/2) cosh(ax) without overflow: ln cosh y = |y| + ln1p(e^{-2|y|}) - ln 2
        let y = (a * x).abs();
        let ln_cosh = y + (-2.0 * y).exp().ln_1p() - std::f64::consts::LN_2;
        (-(x * x + a * a) / 2.0 + ln_cosh).exp()
    };
    let hi = b + 45.0;
    (2.0 / std::f64::consts::PI).sqrt() * adaptive_simpson(integrand, b, hi, 1e-14)
}

/// Series oracle for the lower incomplete gamma:
/// e^{-x} sum_{n>=0} x^{a+n} / (a (a+1) ... (a+n)).
pub fn lower_incomplete_gamma_oracle(a: f64, x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let mut denom = a;
    let mut term = x.powf(a) / a;
    let mut sum = term;
    for n in 1..2000 {
        denom += 1.0;
        term *= x / denom;
        sum += term;
        if term < sum * 1e-18 {
            break;
        }
        let _ = n;
    }
    (-x).exp() * sum
}

/// erfc oracle by direct quadrature of the Gaussian density, in the shifted
/// form (2/sqrt(pi)) e^{-x^2} int_0^inf exp(-2xu - u^2) du so the tolerance
/// is relative to the result.
pub fn erfc_oracle(x: f64) -> f64 {
    if x < 0.0 {
        return 2.0 - erfc_oracle(-x);
    }
    let factor = 2.0 / std::f64::consts::PI.sqrt();
    let shifted = adaptive_simpson(|u: f64| (-2.0 * x * u - u * u).exp(), 0.0, 14.0, 1e-15);
    factor * (-x * x).exp() * shifted
}

/// Two-sided Kolmogorov-Smirnov distance between sorted samples and a CDF.
pub fn ks_distance(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let n = sorted.len() as f64;
    let mut worst = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        let lo = i as f64 / n;
        let hi = (i + 1) as f64 / n;
        worst = worst.max((f - lo).abs()).max((f - hi).abs());
    }
    worst
}

/// Ordinary least-squares slope of y on x.
pub fn linear_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// Sorted single-branch SNR samples at unit average SNR.
pub fn sorted_snr_samples(num_elements: usize, draws: usize, spec: ris_core::RngSpec) -> Vec<f64> {
    use ris_core::channel::sample_cascade_amplitude;
    use ris_core::TrialRng;
    let mut v: Vec<f64> = (0..draws)
        .map(|t| {
            let mut rng = TrialRng::new(spec, t as u64);
            let a = sample_cascade_amplitude(num_elements, &mut rng);
            a * a
        })
        .collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}
