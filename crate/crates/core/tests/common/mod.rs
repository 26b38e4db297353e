//! Reference evaluators that share no code path with the library: an
//! Euler-Maclaurin zeta, a Stirling-series gamma, and bisection on the
//! sign of the Z-function.
#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;

// B_2, B_4, ..., B_20
const BERNOULLI_EVEN: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

/// ζ(s) by Euler-Maclaurin summation with head length `head` and all ten
/// Bernoulli corrections. Accurate to ~1e-15 relative for |s| <= head.
pub fn zeta_em(s: Complex64, head: usize) -> Complex64 {
    let big_n = head as f64;
    let pow = |k: f64| (-s * k.ln()).exp();
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 1..head {
        sum += pow(k as f64);
    }
    let n_pow = pow(big_n);
    sum += n_pow * big_n / (s - 1.0) + n_pow * 0.5;
    // B_{2j}/(2j)! * s(s+1)...(s+2j-2) * N^{-s-2j+1}
    let mut rising = s;
    let mut fact = 2.0;
    let mut n_scale = n_pow / big_n;
    for (j, b) in BERNOULLI_EVEN.iter().enumerate() {
        let two_j = 2.0 * (j as f64 + 1.0);
        sum += rising * n_scale * (b / fact);
        rising = rising * (s + two_j - 1.0) * (s + two_j);
        fact *= (two_j + 1.0) * (two_j + 2.0);
        n_scale /= big_n * big_n;
    }
    sum
}

/// Γ(z) from the Stirling series at z + shift, divided back down by the
/// rising product.
pub fn gamma_stirling(z: Complex64) -> Complex64 {
    let shift = 15;
    let w = z + shift as f64;
    let mut lg = (w - 0.5) * w.ln() - w + 0.5 * (2.0 * PI).ln();
    let w2 = w * w;
    let mut wp = w;
    for (k, b) in BERNOULLI_EVEN.iter().take(8).enumerate() {
        let two_k = 2.0 * (k as f64 + 1.0);
        lg += *b / (two_k * (two_k - 1.0)) / wp;
        wp *= w2;
    }
    let mut prod = Complex64::new(1.0, 0.0);
    for k in 0..shift {
        prod *= z + k as f64;
    }
    lg.exp() / prod
}

/// Riemann-Siegel theta from its asymptotic expansion (t >= 10).
pub fn rs_theta(t: f64) -> f64 {
    t / 2.0 * (t / (2.0 * PI)).ln() - t / 2.0 - PI / 8.0
        + 1.0 / (48.0 * t)
        + 7.0 / (5760.0 * t.powi(3))
        + 31.0 / (80640.0 * t.powi(5))
        + 127.0 / (430080.0 * t.powi(7))
}

/// Z(t) = Re(e^{iθ(t)} ζ(1/2 + it)); real up to rounding.
pub fn z_function(t: f64) -> f64 {
    let rot = Complex64::from_polar(1.0, rs_theta(t));
    (rot * zeta_em(Complex64::new(0.5, t), 80)).re
}

/// Zeros of Z in [t_min, t_max]: sign changes on a 0.01 grid, bisected to
/// an interval of width 1e-13.
pub fn bisection_zeros(t_min: f64, t_max: f64) -> Vec<f64> {
    let step = 0.01;
    let count = ((t_max - t_min) / step).ceil() as usize;
    let mut out = Vec::new();
    let mut a = t_min;
    let mut za = z_function(a);
    for i in 1..=count {
        let b = (t_min + i as f64 * step).min(t_max);
        let zb = z_function(b);
        if za.signum() != zb.signum() {
            let (mut lo, mut hi, mut zlo) = (a, b, za);
            while hi - lo > 1e-13 {
                let mid = 0.5 * (lo + hi);
                let zm = z_function(mid);
                if zm.signum() == zlo.signum() {
                    lo = mid;
                    zlo = zm;
                } else {
                    hi = mid;
                }
            }
            out.push(0.5 * (lo + hi));
        }
        a = b;
        za = zb;
    }
    out
}

/// Uniform sample from [lo, hi) driven by a seeded generator.
pub fn uniform(rng: &mut impl rand::Rng, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo..hi)
}
