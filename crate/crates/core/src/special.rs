//! Self-contained numerical special functions backing the analytic pipeline.
//!
//! Everything here is pure and stateless. Accuracy targets (checked against
//! independent oracles in the test suite):
//!
//! - `ln_gamma`: rel. error < 1e-12 on [1e-3, 1e3]
//! - `lower_incomplete_gamma` / regularized variants: series for x < a+1,
//!   continued fraction otherwise
//! - `bessel_k0`: rel. error < 1e-10 on [1e-4, 50]
//! - `erfc`: rel. error < 1e-12
//! - `gauss_laguerre`: degree-(2M-1) polynomial exactness to < 1e-10

use crate::error::{domain, Error, Result};

/// Euler-Mascheroni constant.
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
/// ln(2*pi)
const LN_TWO_PI: f64 = 1.837_877_066_409_345_6;

const MAX_QUADRATURE_ORDER: usize = 64;

/// A Gauss-Laguerre rule for the weight e^{-x} on (0, inf).
///
/// Nodes are strictly increasing and positive; weights are positive and sum
/// to one (the zeroth moment of the weight function). A rule of order M
/// integrates x^p e^{-x} exactly for p <= 2M-1.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    /// Approximate the integral of f(x) e^{-x} over (0, inf).
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.iter().map(|(t, y)| y * f(t)).sum()
    }
}

/// Natural log of the gamma function, for x > 0.
///
/// Upward recurrence into z >= 10 followed by the Stirling series with
/// Bernoulli terms through B14; the first omitted term at z = 10 is ~3e-17.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if x.is_nan() || x <= 0.0 {
        return Err(domain("ln_gamma", format!("requires x > 0, got {x}")));
    }
    Ok(ln_gamma_unchecked(x))
}

pub(crate) fn ln_gamma_unchecked(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    let mut shift = 0.0;
    let mut z = x;
    while z < 10.0 {
        shift += z.ln();
        z += 1.0;
    }
    // B_{2n} / (2n (2n-1) z^{2n-1}), n = 1..=7
    const C: [f64; 7] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360_360.0,
        1.0 / 156.0,
    ];
    let zi = 1.0 / z;
    let zi2 = zi * zi;
    let mut series = C[6];
    for c in C[..6].iter().rev() {
        series = c + zi2 * series;
    }
    (z - 0.5) * z.ln() - z + 0.5 * LN_TWO_PI + zi * series - shift
}

/// Regularized lower incomplete gamma P(a, x) in [0, 1].
pub fn reg_lower_gamma(a: f64, x: f64) -> Result<f64> {
    check_gamma_args("reg_lower_gamma", a, x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    if x < a + 1.0 {
        Ok(lower_series(a, x))
    } else {
        Ok(1.0 - upper_continued_fraction(a, x))
    }
}

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
pub fn reg_upper_gamma(a: f64, x: f64) -> Result<f64> {
    check_gamma_args("reg_upper_gamma", a, x)?;
    if x == 0.0 {
        return Ok(1.0);
    }
    if x < a + 1.0 {
        Ok(1.0 - lower_series(a, x))
    } else {
        Ok(upper_continued_fraction(a, x))
    }
}

/// Unregularized lower incomplete gamma.
///
/// Overflows together with Gamma(a) for a beyond ~170; the regularized
/// variant is the safe form for large shapes.
pub fn lower_incomplete_gamma(a: f64, x: f64) -> Result<f64> {
    let p = reg_lower_gamma(a, x)?;
    Ok(p * ln_gamma_unchecked(a).exp())
}

fn check_gamma_args(function: &'static str, a: f64, x: f64) -> Result<()> {
    if a.is_nan() || a <= 0.0 {
        return Err(domain(function, format!("requires a > 0, got {a}")));
    }
    if x.is_nan() || x < 0.0 {
        return Err(domain(function, format!("requires x >= 0, got {x}")));
    }
    Ok(())
}

fn gamma_prefactor(a: f64, x: f64) -> f64 {
    (-x + a * x.ln() - ln_gamma_unchecked(a)).exp()
}

/// Series for P(a, x), convergent and cancellation-free for x < a + 1.
fn lower_series(a: f64, x: f64) -> f64 {
    let mut ap = a;
    let mut term = 1.0 / a;
    let mut sum = term;
    for _ in 0..600 {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if term.abs() < sum.abs() * 1e-17 {
            break;
        }
    }
    sum * gamma_prefactor(a, x)
}

/// Modified Lentz continued fraction for Q(a, x), for x >= a + 1.
fn upper_continued_fraction(a: f64, x: f64) -> f64 {
    let tiny = f64::MIN_POSITIVE / f64::EPSILON;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..600 {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < tiny {
            d = tiny;
        }
        c = b + an / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h * gamma_prefactor(a, x)
}

/// Complementary error function, in (0, 2).
///
/// Evaluated through the regularized upper incomplete gamma,
/// erfc(x) = Q(1/2, x^2) for x >= 0, with the reflection erfc(-x) = 2 - erfc(x).
pub fn erfc(x: f64) -> f64 {
    if x < 0.0 {
        2.0 - erfc(-x)
    } else if x == 0.0 {
        1.0
    } else {
        // arguments are in-domain by construction
        match reg_upper_gamma(0.5, x * x) {
            Ok(q) => q,
            Err(_) => unreachable!(),
        }
    }
}

/// Modified Bessel function of the second kind, order zero, for x > 0.
///
/// Small arguments (x <= 2) use the ascending log series; larger arguments
/// use the exponential form e^{-x} * I(x) with I(x) evaluated by a fixed
/// generalized Gauss-Laguerre rule, which is exact to machine precision on
/// the tested range.
pub fn bessel_k0(x: f64) -> Result<f64> {
    if x.is_nan() || x <= 0.0 {
        return Err(domain("bessel_k0", format!("requires x > 0, got {x}")));
    }
    if x <= 2.0 {
        Ok(k0_series(x))
    } else {
        Ok(k0_large(x))
    }
}

fn k0_series(x: f64) -> f64 {
    // K0(x) = -(ln(x/2) + gamma) I0(x) + sum_k (x^2/4)^k / (k!)^2 H_k
    let z = x * x / 4.0;
    let mut term = 1.0;
    let mut i0 = 1.0;
    let mut sum = 0.0;
    let mut harmonic = 0.0;
    for k in 1..=20 {
        let kf = k as f64;
        term *= z / (kf * kf);
        i0 += term;
        harmonic += 1.0 / kf;
        sum += term * harmonic;
    }
    -((x / 2.0).ln() + EULER_GAMMA) * i0 + sum
}

fn k0_large(x: f64) -> f64 {
    // substitute u = x(cosh t - 1) in the integral representation:
    // K0(x) = e^{-x} \int_0^inf e^{-u} u^{-1/2} (u + 2x)^{-1/2} du
    use std::sync::OnceLock;
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    let (nodes, weights) = RULE.get_or_init(|| {
        laguerre_nodes_weights(32, -0.5).expect("fixed-order rule construction")
    });
    let integral: f64 = nodes
        .iter()
        .zip(weights)
        .map(|(&u, &w)| w / (u + 2.0 * x).sqrt())
        .sum();
    (-x).exp() * integral
}

/// Marcum Q-function of order 1/2.
///
/// Uses the exact identity
/// Q_{1/2}(a, b) = [erfc((b - a)/sqrt(2)) + erfc((b + a)/sqrt(2))] / 2,
/// so the result is in [0, 1] and nonincreasing in b.
pub fn marcum_q_half(a: f64, b: f64) -> f64 {
    debug_assert!(a >= 0.0 && b >= 0.0);
    let s = std::f64::consts::SQRT_2;
    0.5 * (erfc((b - a) / s) + erfc((b + a) / s))
}

/// The M-point Gauss-Laguerre rule for the weight e^{-x} on (0, inf).
///
/// Nodes come from the symmetric tridiagonal Jacobi matrix (implicit-shift
/// QL eigenvalues) polished by Newton steps on the Laguerre recurrence;
/// weights follow from the closed form in L_{M+1} at the refined nodes.
pub fn gauss_laguerre(order: usize) -> Result<QuadratureRule> {
    let (nodes, weights) = laguerre_nodes_weights(order, 0.0)?;
    Ok(QuadratureRule { nodes, weights })
}

fn laguerre_nodes_weights(order: usize, alpha: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if order == 0 || order > MAX_QUADRATURE_ORDER {
        return Err(Error::QuadratureOrder(order));
    }
    let n = order;
    // Jacobi matrix of the generalized Laguerre recurrence
    let mut diag: Vec<f64> = (0..n).map(|i| 2.0 * i as f64 + alpha + 1.0).collect();
    let mut off: Vec<f64> = (0..n)
        .map(|i| {
            let k = i as f64;
            if i == 0 {
                0.0
            } else {
                (k * (k + alpha)).sqrt()
            }
        })
        .collect();
    off.rotate_left(1); // off[i] couples diag[i] and diag[i+1]; off[n-1] unused
    tridiagonal_eigenvalues(&mut diag, &mut off)?;
    diag.sort_by(|a, b| a.partial_cmp(b).expect("eigenvalues are finite"));

    let mut nodes = diag;
    for t in nodes.iter_mut() {
        // Newton refinement on L_M^{(alpha)}; converges in one or two steps
        for _ in 0..3 {
            let (lm, lm1) = eval_genlaguerre(n, alpha, *t);
            let deriv = (n as f64 * lm - (n as f64 + alpha) * lm1) / *t;
            let step = lm / deriv;
            *t -= step;
            if step.abs() <= 4.0 * f64::EPSILON * t.abs() {
                break;
            }
        }
    }

    // w_i = Gamma(M + alpha + 1) t_i / (M! (M+1)^2 L_{M+1}^{(alpha)}(t_i)^2)
    let log_norm = ln_gamma_unchecked(n as f64 + alpha + 1.0) - ln_gamma_unchecked(n as f64 + 1.0);
    let weights: Vec<f64> = nodes
        .iter()
        .map(|&t| {
            let (lnext, _) = eval_genlaguerre(n + 1, alpha, t);
            let m1 = (n + 1) as f64;
            (log_norm + t.ln() - 2.0 * (m1 * lnext.abs()).ln()).exp()
        })
        .collect();

    for i in 0..n {
        let increasing = i == 0 || nodes[i] > nodes[i - 1];
        if !(nodes[i] > 0.0 && weights[i] > 0.0 && increasing) {
            return Err(Error::EigenConvergence);
        }
    }
    Ok((nodes, weights))
}

/// Value of L_order^{(alpha)} and L_{order-1}^{(alpha)} at x, by the
/// three-term recurrence.
fn eval_genlaguerre(order: usize, alpha: f64, x: f64) -> (f64, f64) {
    if order == 0 {
        return (1.0, 0.0);
    }
    let mut prev = 1.0;
    let mut cur = 1.0 + alpha - x;
    for k in 1..order {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - x) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

/// Implicit-shift QL eigenvalues of a symmetric tridiagonal matrix.
/// `off[i]` couples `diag[i]` and `diag[i+1]`; both slices have length n.
fn tridiagonal_eigenvalues(diag: &mut [f64], off: &mut [f64]) -> Result<()> {
    let n = diag.len();
    if n <= 1 {
        return Ok(());
    }
    off[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        'outer: loop {
            let mut m = l;
            while m < n - 1 {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if off[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 64 {
                return Err(Error::EigenConvergence);
            }
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
            let mut r = g.hypot(1.0);
            g = diag[m] - diag[l] + off[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            for i in (l..m).rev() {
                let f = s * off[i];
                let b = c * off[i];
                r = f.hypot(g);
                off[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    off[m] = 0.0;
                    continue 'outer;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                let t = (diag[i] - g) * s + 2.0 * c * b;
                p = s * t;
                diag[i + 1] = g + p;
                g = c * t - b;
            }
            diag[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        }
    }
    Ok(())
}
