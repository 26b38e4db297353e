#![allow(clippy::excessive_precision)]

mod common;

use csl_core::functional::{functional_equation_residual, h_factor, h_ratio_finite};
use csl_core::{Complex64, CslError, EvalConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn reciprocity_over_random_strip_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0101);
    let one = c(1.0, 0.0);
    for _ in 0..500 {
        let z = c(common::uniform(&mut rng, 0.01, 0.99), common::uniform(&mut rng, -50.0, 50.0));
        let product = h_factor(z).unwrap() * h_factor(one - z).unwrap();
        assert!((product - one).norm() <= 1e-10, "{z}: {product}");
    }
}

#[test]
fn unit_modulus_on_critical_line() {
    for i in 0..100 {
        let t = 0.1 + 49.9 * i as f64 / 99.0;
        let h = h_factor(c(0.5, t)).unwrap();
        assert!((h.norm() - 1.0).abs() <= 1e-10, "t = {t}: {}", h.norm());
    }
    assert!((h_factor(c(0.5, 0.0)).unwrap() - 1.0).norm() <= 1e-12);
}

#[test]
fn h_equals_zeta_quotient_from_oracle() {
    // H(z) = ζ(z)/ζ(1-z), with both zetas from Euler-Maclaurin summation.
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0102);
    let mut checked = 0;
    while checked < 100 {
        let z = c(common::uniform(&mut rng, 0.05, 0.95), common::uniform(&mut rng, -40.0, 40.0));
        let den = common::zeta_em(c(1.0, 0.0) - z, 80);
        if den.norm() < 0.1 {
            continue;
        }
        let expected = common::zeta_em(z, 80) / den;
        let h = h_factor(z).unwrap();
        assert!((h - expected).norm() <= 1e-11 * expected.norm(), "{z}: {h} vs {expected}");
        checked += 1;
    }
}

#[test]
fn residual_grid_is_small() {
    let cfg = EvalConfig::default();
    let mut worst = 0.0f64;
    for i in 0..9 {
        for j in 0..13 {
            let z = c(0.1 + 0.1 * i as f64, 2.5 * j as f64);
            let r = functional_equation_residual(z, &cfg).unwrap();
            assert_eq!(r.residual, (r.lhs - r.rhs).norm());
            assert_eq!(r.config_used, cfg);
            worst = worst.max(r.residual);
        }
    }
    assert!(worst <= 1e-8, "max residual {worst}");
}

#[test]
fn finite_ratio_properties() {
    for n in [1, 10, 1000] {
        let r = h_ratio_finite(c(0.5, 0.0), n).unwrap();
        assert!((r - 1.0).norm() <= 1e-12);
        let r = h_ratio_finite(c(0.5, 17.3), n).unwrap();
        assert!((r.norm() - 1.0).abs() <= 1e-13);
    }
    assert!(matches!(h_ratio_finite(c(1.0, 0.0), 5), Err(CslError::Singularity { .. })));
}
