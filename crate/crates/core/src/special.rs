//! Complex elementary and special functions: integer powers `k^-z`, complex
//! sine, and the Lanczos log-gamma / gamma pair.

use std::f64::consts::{LN_2, PI};

use crate::error::{CslError, Result};
use crate::ComplexValue;

/// Radius around the poles of Γ inside which evaluation is refused.
pub const POLE_GUARD_RADIUS: f64 = 1e-6;

const LANCZOS_G: f64 = 7.0;
// Partial-fraction coefficients for g = 7 with ten terms; the common
// nine-term set loses accuracy to ~2e-13 once |Im z| grows past ~20.
const LANCZOS_COEFFS: [f64; 10] = [
    0.999_999_999_999_996_6,
    676.520_368_121_883_4,
    -1_259.139_216_722_268_5,
    771.323_428_775_065_9,
    -176.615_029_141_442_84,
    12.507_343_194_602_255,
    -0.138_570_906_916_104_1,
    9.748_932_558_003_44e-6,
    3.043_180_620_968_934e-7,
    -4.084_111_571_708_373e-8,
];

// 0.5 * ln(2π)
const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_8;

/// `k^-z = exp(-z ln k)`; exactly 1 for `k = 1`.
pub fn complex_power(k: u64, z: ComplexValue) -> ComplexValue {
    assert!(k >= 1, "complex_power needs a positive integer base");
    if k == 1 {
        return ComplexValue::new(1.0, 0.0);
    }
    power_from_log(-(k as f64).ln(), z)
}

/// `exp(log_base * z)`, the shared kernel for every `k^-z` term.
#[inline]
pub(crate) fn power_from_log(log_base: f64, z: ComplexValue) -> ComplexValue {
    (z * log_base).exp()
}

/// `2^w`.
#[inline]
pub fn pow2(w: ComplexValue) -> ComplexValue {
    power_from_log(LN_2, w)
}

/// Complex sine, `sin x cosh y + i cos x sinh y`.
pub fn complex_sin(z: ComplexValue) -> Result<ComplexValue> {
    let (s, c) = z.re.sin_cos();
    let out = ComplexValue::new(s * z.im.cosh(), c * z.im.sinh());
    if out.re.is_finite() && out.im.is_finite() {
        Ok(out)
    } else {
        Err(CslError::Overflow { z })
    }
}

/// A logarithm of `sin w` that never forms `sin w` itself, so it stays finite
/// for any imaginary part. Not the principal branch; only `exp` of it is
/// meaningful. Returns `-inf` real part exactly where `sin w == 0`.
pub fn log_sin(w: ComplexValue) -> ComplexValue {
    if w.im < 0.0 {
        return log_sin(w.conj()).conj();
    }
    // sin w = (i/2) e^{-iw} (1 - e^{2iw}), and |e^{2iw}| = e^{-2 Im w} <= 1 here.
    let i = ComplexValue::i();
    let e2 = (i * w * 2.0).exp();
    let one_minus = ComplexValue::new(1.0, 0.0) - e2;
    -i * w + one_minus.ln() + ComplexValue::new(-LN_2, PI / 2.0)
}

fn check_pole(z: ComplexValue) -> Result<()> {
    let k = z.re.round();
    if k <= 0.0 && (z - k).norm() <= POLE_GUARD_RADIUS {
        return Err(CslError::Pole { z, pole: k });
    }
    Ok(())
}

fn lanczos_log_gamma(z: ComplexValue) -> ComplexValue {
    let x = z - 1.0;
    let mut series = ComplexValue::new(LANCZOS_COEFFS[0], 0.0);
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        series += c / (x + i as f64);
    }
    let t = x + (LANCZOS_G + 0.5);
    (x + 0.5) * t.ln() - t + series.ln() + HALF_LN_TWO_PI
}

/// log Γ(z) via the Lanczos approximation (g = 7, ten coefficients), with
/// the reflection formula for `Re z < 0.5`.
///
/// For `Re z >= 0.5` the result is the analytic continuation of the real
/// log-gamma (imaginary part not reduced modulo 2π). Only `exp` of the
/// reflected branch is meaningful.
pub fn log_gamma(z: ComplexValue) -> Result<ComplexValue> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(CslError::InvalidInput(format!("log_gamma of non-finite {z}")));
    }
    check_pole(z)?;
    if z.re < 0.5 {
        // Γ(z) Γ(1-z) = π / sin(πz)
        let one_minus = ComplexValue::new(1.0, 0.0) - z;
        Ok(PI.ln() - log_sin(z * PI) - lanczos_log_gamma(one_minus))
    } else {
        Ok(lanczos_log_gamma(z))
    }
}

/// Γ(z) = exp(log Γ(z)).
pub fn gamma(z: ComplexValue) -> Result<ComplexValue> {
    let lg = log_gamma(z)?;
    let g = lg.exp();
    if g.re.is_finite() && g.im.is_finite() {
        Ok(g)
    } else {
        Err(CslError::Overflow { z })
    }
}
