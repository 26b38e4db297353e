//! The functional-equation factor H(z) = 2 Γ(1-z) (2π)^{z-1} sin(πz/2), its
//! finite-n counterpart Hₙ(z) = ζ̂ₙ(z) / ζ̂ₙ(1-z), and residuals of
//! ζ̂(z) = H(z) ζ̂(1-z).

use std::f64::consts::{LN_2, PI};

use crate::error::{CslError, Result};
use crate::series::{self, EvalConfig, DEFAULT_GUARD_RADIUS};
use crate::special::{log_gamma, log_sin};
use crate::ComplexValue;

/// Below this modulus a denominator is treated as an exact zero.
pub const DENOMINATOR_FLOOR: f64 = 1e-300;

const LN_TWO_PI: f64 = 1.837_877_066_409_345_5;

fn one() -> ComplexValue {
    ComplexValue::new(1.0, 0.0)
}

/// H(z), evaluated in log space and exponentiated once.
pub fn h_factor(z: ComplexValue) -> Result<ComplexValue> {
    let lg = log_gamma(one() - z).map_err(|e| match e {
        CslError::Pole { .. } => CslError::Pole {
            z,
            pole: (one() - z).re.round(),
        },
        other => other,
    })?;
    let ls = log_sin(z * (PI / 2.0));
    if ls.re == f64::NEG_INFINITY {
        // sin(πz/2) vanishes exactly (z an even integer <= 0)
        return Ok(ComplexValue::new(0.0, 0.0));
    }
    let log_h = lg + (z - 1.0) * LN_TWO_PI + ls + LN_2;
    Ok(log_h.exp())
}

fn check_ratio_arguments(z: ComplexValue) -> Result<()> {
    for w in [z, one() - z] {
        if (w - one()).norm() <= DEFAULT_GUARD_RADIUS {
            return Err(CslError::Singularity {
                z: w,
                guard: DEFAULT_GUARD_RADIUS,
            });
        }
    }
    Ok(())
}

fn checked_quotient(num: ComplexValue, den: ComplexValue, context: impl FnOnce() -> String) -> Result<ComplexValue> {
    let modulus = den.norm();
    if modulus < DENOMINATOR_FLOOR {
        return Err(CslError::DivisionByNearZero {
            modulus,
            context: context(),
        });
    }
    Ok(num / den)
}

/// Hₙ(z) = ζ̂ₙ(z) / ζ̂ₙ(1-z).
pub fn h_ratio_finite(z: ComplexValue, n: usize) -> Result<ComplexValue> {
    Ok(h_ratio_ladder(z, &[n])?[0])
}

/// Hₙ(z) for every `n` of an ascending ladder.
pub fn h_ratio_ladder(z: ComplexValue, ns: &[usize]) -> Result<Vec<ComplexValue>> {
    check_ratio_arguments(z)?;
    let num = series::zeta_hat_regularized_ladder(z, ns)?;
    let den = series::zeta_hat_regularized_ladder(one() - z, ns)?;
    num.into_iter()
        .zip(den)
        .zip(ns)
        .map(|((a, b), &n)| checked_quotient(a, b, || format!("zeta_hat_{n}(1 - ({z}))")))
        .collect()
}

/// One evaluation of both sides of the functional equation.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub point: ComplexValue,
    /// ζ̂(z)
    pub lhs: ComplexValue,
    /// H(z) ζ̂(1-z)
    pub rhs: ComplexValue,
    /// |lhs - rhs|
    pub residual: f64,
    pub config_used: EvalConfig,
}

/// Compare ζ̂(z) with H(z) ζ̂(1-z), both sides through the eta series.
pub fn functional_equation_residual(z: ComplexValue, config: &EvalConfig) -> Result<ResidualReport> {
    if !(z.re > 0.0 && z.re < 1.0) {
        return Err(CslError::Domain(format!(
            "functional-equation residual needs 0 < Re z < 1, got z = {z}"
        )));
    }
    let lhs = series::zeta_hat_eta(z, config)?.value;
    let reflected = series::zeta_hat_eta(one() - z, config)?.value;
    let rhs = h_factor(z)? * reflected;
    Ok(ResidualReport {
        point: z,
        lhs,
        rhs,
        residual: (lhs - rhs).norm(),
        config_used: config.clone(),
    })
}
