//! Special functions against independent brute-force oracles.

mod common;

use common::{
    adaptive_simpson, bessel_k0_oracle, erfc_oracle, lower_incomplete_gamma_oracle,
    marcum_q_half_oracle,
};
use ris_core::special::{
    bessel_k0, erfc, gauss_laguerre, lower_incomplete_gamma, marcum_q_half,
};

#[test]
fn bessel_k0_matches_integration_oracle() {
    for x in [0.001, 0.01, 0.1, 0.5, 1.0, 2.0, 3.0, 7.0, 15.0, 30.0] {
        let got = bessel_k0(x).unwrap();
        let want = bessel_k0_oracle(x);
        let rel = (got - want).abs() / want;
        assert!(rel < 1e-10, "x = {x}: got {got}, oracle {want}, rel {rel}");
    }
}

#[test]
fn element_gain_density_normalizes() {
    // the single-element product-gain density 4 a K0(2a) integrates to one
    let f = |a: f64| {
        if a == 0.0 {
            0.0
        } else {
            4.0 * a * bessel_k0(2.0 * a).unwrap()
        }
    };
    let integral = adaptive_simpson(f, 0.0, 20.0, 1e-11);
    assert!(
        (integral - 1.0).abs() < 1e-8,
        "normalization gave {integral}"
    );
}

#[test]
fn marcum_matches_integration_oracle_on_grid() {
    for a in [0.0, 0.5, 1.0, 2.0, 4.0] {
        for b in [0.0, 0.5, 1.0, 2.0, 4.0] {
            let got = marcum_q_half(a, b);
            let want = marcum_q_half_oracle(a, b);
            assert!(
                (got - want).abs() < 1e-10,
                "Q_1/2({a}, {b}): got {got}, oracle {want}"
            );
        }
    }
}

#[test]
fn lower_incomplete_gamma_matches_series_oracle() {
    for (a, x) in [
        (0.5, 0.2),
        (1.0, 1.0),
        (2.5, 4.0),
        (3.0, 5.0),
        (7.5, 2.0),
        (7.5, 20.0),
        (20.0, 19.0),
    ] {
        let got = lower_incomplete_gamma(a, x).unwrap();
        let want = lower_incomplete_gamma_oracle(a, x);
        let rel = (got - want).abs() / want;
        assert!(rel < 1e-12, "({a}, {x}): got {got}, oracle {want}");
    }
}

#[test]
fn erfc_matches_quadrature_oracle() {
    for x in [-2.0, -0.3, 0.15, 0.7, 1.0, 2.0, 3.5, 6.0] {
        let got = erfc(x);
        let want = erfc_oracle(x);
        let rel = (got - want).abs() / want.abs();
        assert!(rel < 1e-12, "erfc({x}): got {got}, oracle {want}, rel {rel}");
    }
}

#[test]
fn quadrature_integrates_a_non_polynomial() {
    // int_0^inf e^{-x} cos x dx = 1/2; the rule should converge to it
    let rule = gauss_laguerre(40).unwrap();
    let got = rule.integrate(|x| x.cos());
    assert!((got - 0.5).abs() < 1e-6, "got {got}");
}
