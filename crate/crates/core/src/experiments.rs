//! Doubling-ratio measurements and the truncation-error scaling scan.
//!
//! All experiments use the plain regularized sums ζ̂ₙ; acceleration is only
//! used to produce the reference value of the scaling scan.

use std::f64::consts::{LN_2, PI};

use crate::error::{CslError, Result};
use crate::functional::{h_ratio_ladder, DENOMINATOR_FLOOR};
use crate::series::{self, EvalConfig, SeriesValue};
use crate::ComplexValue;

/// Largest truncation index an experiment may request.
pub const DEFAULT_BUDGET: u64 = 1 << 24;
/// Minimum averaging order for the scaling-scan reference value.
pub const REFERENCE_MIN_ACCEL_ORDER: usize = 40;

/// Period of the imaginary part of a base-2 exponent: 2^w = 2^{w + 2πi/ln 2}.
pub const EXPONENT_PERIOD: f64 = 2.0 * PI / LN_2;

fn one() -> ComplexValue {
    ComplexValue::new(1.0, 0.0)
}

/// Reduce the imaginary part of a base-2 exponent into (-P/2, P/2].
pub fn wrap_exponent(w: ComplexValue) -> ComplexValue {
    let mut im = w.im - EXPONENT_PERIOD * (w.im / EXPONENT_PERIOD).round();
    if im <= -EXPONENT_PERIOD / 2.0 {
        im += EXPONENT_PERIOD;
    }
    ComplexValue::new(w.re, im)
}

/// `n_base, 2 n_base, ..., 2^m n_base` (m + 1 entries).
pub fn doubling_schedule(n_base: usize, m: usize) -> Result<Vec<usize>> {
    if n_base < 1 {
        return Err(CslError::InvalidInput("n_base must be >= 1".into()));
    }
    if m < 1 {
        return Err(CslError::InvalidInput("m must be >= 1".into()));
    }
    let requested = if m >= 64 {
        u128::MAX
    } else {
        (n_base as u128) << m
    };
    if requested > DEFAULT_BUDGET as u128 {
        return Err(CslError::BudgetExceeded {
            requested,
            budget: DEFAULT_BUDGET,
        });
    }
    Ok((0..=m).map(|i| n_base << i).collect())
}

fn successive_ratios(values: &[ComplexValue], schedule: &[usize], label: &str, point: ComplexValue) -> Result<Vec<ComplexValue>> {
    values
        .windows(2)
        .zip(schedule)
        .map(|(w, &n)| {
            let modulus = w[0].norm();
            if modulus < DENOMINATOR_FLOOR {
                Err(CslError::DivisionByNearZero {
                    modulus,
                    context: format!("{label}_{n}({point})"),
                })
            } else {
                Ok(w[1] / w[0])
            }
        })
        .collect()
}

/// ζ̂_{2n}(point) / ζ̂ₙ(point) for n = n_base, 2 n_base, ..., 2^{m-1} n_base.
pub fn zeta_hat_doubling(point: ComplexValue, n_base: usize, m: usize) -> Result<Vec<ComplexValue>> {
    let schedule = doubling_schedule(n_base, m)?;
    let values = series::zeta_hat_regularized_ladder(point, &schedule)?;
    successive_ratios(&values, &schedule, "zeta_hat", point)
}

/// Mean base-2 logarithm of the last ⌈len/2⌉ ratios.
///
/// Logs are unwrapped against the first tail entry before averaging and the
/// mean is returned on the principal strip.
pub fn tail_log2_mean(ratios: &[ComplexValue]) -> ComplexValue {
    assert!(!ratios.is_empty(), "tail_log2_mean of an empty list");
    let tail = ratios.len().div_ceil(2);
    let logs: Vec<ComplexValue> = ratios[ratios.len() - tail..]
        .iter()
        .map(|r| r.ln() / LN_2)
        .collect();
    let anchor = logs[0].im;
    let sum = logs.iter().fold(ComplexValue::new(0.0, 0.0), |acc, w| {
        let shift = EXPONENT_PERIOD * ((anchor - w.im) / EXPONENT_PERIOD).round();
        acc + ComplexValue::new(w.re, w.im + shift)
    });
    wrap_exponent(sum / tail as f64)
}

/// The ζ̂ doubling constant measured alongside the two candidate constants.
#[derive(Debug, Clone, PartialEq)]
pub struct ZetaHatDoublingSummary {
    /// Tail mean of log₂(ζ̂_{2n}/ζ̂ₙ), principal strip.
    pub fitted_exponent: ComplexValue,
    /// 1 - point, the exponent of the constant 2^{1-ρ}.
    pub stated_exponent: ComplexValue,
    /// -point, the exponent of 2^{-ρ} from the leading n^{-z}/2 tail term.
    pub leading_term_exponent: ComplexValue,
    /// fitted - stated, imaginary part wrapped.
    pub deviation_from_stated: ComplexValue,
    /// fitted - leading term, imaginary part wrapped.
    pub deviation_from_leading_term: ComplexValue,
}

/// Doubling measurement of Hₙ(point) = ζ̂ₙ(point) / ζ̂ₙ(1 - point).
#[derive(Debug, Clone, PartialEq)]
pub struct RatioReport {
    pub point: ComplexValue,
    pub n_base: usize,
    pub m_doublings: usize,
    /// The n of each ratio X_{2n} / Xₙ.
    pub schedule: Vec<usize>,
    /// H_{2n} / Hₙ
    pub ratios: Vec<ComplexValue>,
    /// ζ̂_{2n}(point) / ζ̂ₙ(point)
    pub zeta_hat_ratios: Vec<ComplexValue>,
    /// Tail mean of log₂(ratios), principal strip.
    pub fitted_exponent: ComplexValue,
    /// 1 - 2·point
    pub reference_exponent: ComplexValue,
    /// fitted - reference with the imaginary part wrapped into the principal strip.
    pub exponent_deviation: ComplexValue,
    /// |ratios[i]|
    pub moduli: Vec<f64>,
    pub zeta_hat: ZetaHatDoublingSummary,
}

impl RatioReport {
    /// The fitted exponent on the branch closest to the reference.
    pub fn fitted_exponent_near_reference(&self) -> ComplexValue {
        self.reference_exponent + self.exponent_deviation
    }

    /// Moduli over the fitting tail.
    pub fn tail_moduli(&self) -> &[f64] {
        let tail = self.m_doublings.div_ceil(2);
        &self.moduli[self.moduli.len() - tail..]
    }
}

pub fn h_doubling(point: ComplexValue, n_base: usize, m: usize) -> Result<RatioReport> {
    let schedule = doubling_schedule(n_base, m)?;
    let h_values = h_ratio_ladder(point, &schedule)?;
    let ratios = successive_ratios(&h_values, &schedule, "H", point)?;
    let zeta_hat_values = series::zeta_hat_regularized_ladder(point, &schedule)?;
    let zeta_hat_ratios = successive_ratios(&zeta_hat_values, &schedule, "zeta_hat", point)?;

    let fitted_exponent = tail_log2_mean(&ratios);
    let reference_exponent = one() - point * 2.0;
    let zh_fit = tail_log2_mean(&zeta_hat_ratios);
    let stated = one() - point;
    let leading = -point;

    Ok(RatioReport {
        point,
        n_base,
        m_doublings: m,
        schedule: schedule[..m].to_vec(),
        moduli: ratios.iter().map(|r| r.norm()).collect(),
        ratios,
        zeta_hat_ratios,
        fitted_exponent,
        reference_exponent,
        exponent_deviation: wrap_exponent(fitted_exponent - reference_exponent),
        zeta_hat: ZetaHatDoublingSummary {
            fitted_exponent: zh_fit,
            stated_exponent: stated,
            leading_term_exponent: leading,
            deviation_from_stated: wrap_exponent(zh_fit - stated),
            deviation_from_leading_term: wrap_exponent(zh_fit - leading),
        },
    })
}

/// Mean of |log₂ |H_{2n}/Hₙ|| over the schedule tail; near 0 when the ratio
/// modulus is near 1.
pub fn modulus_limit_check(point: ComplexValue, n_base: usize, m: usize) -> Result<f64> {
    let report = h_doubling(point, n_base, m)?;
    let tail = report.tail_moduli();
    Ok(tail.iter().map(|r| r.log2().abs()).sum::<f64>() / tail.len() as f64)
}

/// Truncation error of ζ̂ₙ over an n-grid, with its log-log slope.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingReport {
    pub point: ComplexValue,
    pub n_grid: Vec<usize>,
    /// |ζ̂ₙ(point) - reference|
    pub errors: Vec<f64>,
    /// Least-squares slope of ln(error) against ln(n) over usable points.
    pub fitted_slope: f64,
    /// -Re(point)
    pub reference_slope: f64,
    /// |Im z| <= 2πn/C for each n.
    pub domain_ok: Vec<bool>,
    pub hl_constant: f64,
    pub reference: SeriesValue,
    pub reference_config: EvalConfig,
}

/// The grid 2^8, 2^9, ..., 2^16.
pub fn default_scaling_grid() -> Vec<usize> {
    (8..=16).map(|e| 1usize << e).collect()
}

/// Ordinary least squares fit `y = slope·x + intercept`.
pub fn least_squares_slope(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    assert_eq!(xs.len(), ys.len());
    assert!(xs.len() >= 2, "need at least two points to fit a line");
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// The accelerated configuration used for the scaling-scan reference value.
pub fn scaling_reference_config(point: ComplexValue, config: &EvalConfig) -> EvalConfig {
    let accel_order = config.accel_order.max(REFERENCE_MIN_ACCEL_ORDER);
    // averaging needs terms that vary slowly in k, i.e. n well beyond |Im z|
    let n_terms = config
        .n_terms
        .max(accel_order)
        .max((20.0 * point.im.abs()).ceil() as usize);
    EvalConfig {
        n_terms,
        accelerate: true,
        accel_order,
        ..config.clone()
    }
}

pub fn error_scaling_scan(point: ComplexValue, n_grid: &[usize], config: &EvalConfig) -> Result<ScalingReport> {
    config.validate()?;
    if !(point.re > 0.0 && point.re < 1.0) {
        return Err(CslError::Domain(format!(
            "error scaling scan needs 0 < Re z < 1, got z = {point}"
        )));
    }
    if n_grid.is_empty() || n_grid[0] < 1 || n_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CslError::InvalidInput(
            "n_grid must be non-empty, strictly increasing and >= 1".into(),
        ));
    }
    let n_max = *n_grid.last().unwrap();
    if n_max as u64 > DEFAULT_BUDGET {
        return Err(CslError::BudgetExceeded {
            requested: n_max as u128,
            budget: DEFAULT_BUDGET,
        });
    }

    let c = config.hl_constant;
    let im_abs = point.im.abs();
    let domain_ok: Vec<bool> = n_grid
        .iter()
        .map(|&n| im_abs <= 2.0 * PI * n as f64 / c)
        .collect();
    let usable = domain_ok.iter().filter(|&&ok| ok).count();
    if usable < 3 {
        return Err(CslError::InsufficientDomain {
            usable,
            im_abs,
            hl_constant: c,
            n_min: im_abs * c / (2.0 * PI),
        });
    }

    let reference_config = scaling_reference_config(point, config);
    let reference = series::zeta_hat_eta(point, &reference_config)?;
    let errors: Vec<f64> = series::zeta_hat_regularized_ladder(point, n_grid)?
        .into_iter()
        .map(|v| (v - reference.value).norm())
        .collect();

    let (xs, ys): (Vec<f64>, Vec<f64>) = n_grid
        .iter()
        .zip(&errors)
        .zip(&domain_ok)
        .filter(|((_, &e), &ok)| ok && e > 0.0)
        .map(|((&n, &e), _)| ((n as f64).ln(), e.ln()))
        .unzip();
    if xs.len() < 3 {
        return Err(CslError::InsufficientDomain {
            usable: xs.len(),
            im_abs,
            hl_constant: c,
            n_min: im_abs * c / (2.0 * PI),
        });
    }
    let (fitted_slope, _) = least_squares_slope(&xs, &ys);

    Ok(ScalingReport {
        point,
        n_grid: n_grid.to_vec(),
        errors,
        fitted_slope,
        reference_slope: -point.re,
        domain_ok,
        hl_constant: c,
        reference,
        reference_config,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> ComplexValue {
        ComplexValue::new(re, im)
    }

    #[test]
    fn schedule_and_budget() {
        assert_eq!(doubling_schedule(3, 2).unwrap(), vec![3, 6, 12]);
        assert!(matches!(doubling_schedule(4096, 0), Err(CslError::InvalidInput(_))));
        assert!(matches!(doubling_schedule(0, 2), Err(CslError::InvalidInput(_))));
        assert!(doubling_schedule(1 << 12, 12).is_ok());
        assert!(matches!(
            doubling_schedule(1 << 12, 13),
            Err(CslError::BudgetExceeded { .. })
        ));
        assert!(matches!(doubling_schedule(1, 200), Err(CslError::BudgetExceeded { .. })));
    }

    #[test]
    fn wrap_exponent_range() {
        let p = EXPONENT_PERIOD;
        for &im in &[0.0, 1.0, -4.0, p / 2.0, -p / 2.0, 3.0 * p + 0.1, -28.27] {
            let w = wrap_exponent(c(0.3, im));
            assert!(w.im > -p / 2.0 - 1e-12 && w.im <= p / 2.0 + 1e-12, "{im} -> {}", w.im);
            let k = (im - w.im) / p;
            assert!((k - k.round()).abs() < 1e-9);
            assert_eq!(w.re, 0.3);
        }
    }

    #[test]
    fn tail_mean_unwraps_across_branch_cut() {
        // arguments straddling ±π
        let ratios: Vec<ComplexValue> = [3.1, -3.1, 3.12, -3.13]
            .iter()
            .map(|&a: &f64| ComplexValue::from_polar(1.0, a))
            .collect();
        let w = tail_log2_mean(&ratios);
        // tail = last two: 3.12 and -3.13 ≡ 2π - 3.13
        let expected_arg = (3.12 + (2.0 * PI - 3.13)) / 2.0;
        let expected = wrap_exponent(c(0.0, expected_arg / LN_2));
        assert!((w - expected).norm() < 1e-12, "{w} vs {expected}");
    }

    #[test]
    fn single_doubling_is_plain_quotient() {
        let rho = c(0.5, 14.134_725_142);
        let r = zeta_hat_doubling(rho, 1024, 1).unwrap();
        assert_eq!(r.len(), 1);
        let a = series::zeta_hat_regularized(rho, 1024).unwrap();
        let b = series::zeta_hat_regularized(rho, 2048).unwrap();
        assert!((r[0] - b / a).norm() <= 1e-15 * (b / a).norm());
    }

    #[test]
    fn zeta_hat_ratios_tend_to_one_off_zeros() {
        let r = zeta_hat_doubling(c(2.0, 0.0), 1024, 6).unwrap();
        assert!((r[5] - one()).norm() < 1e-6);
        let errs: Vec<f64> = r.iter().map(|x| (x - one()).norm()).collect();
        assert!(errs.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn least_squares_exact_line() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys: Vec<f64> = xs.iter().map(|x| -0.75 * x + 2.0).collect();
        let (s, b) = least_squares_slope(&xs, &ys);
        assert!((s + 0.75).abs() < 1e-14 && (b - 2.0).abs() < 1e-14);
    }

    #[test]
    fn scan_rejects_out_of_domain() {
        let cfg = EvalConfig::plain(10_000);
        let grid: Vec<usize> = (8..=12).map(|e| 1 << e).collect();
        assert!(matches!(
            error_scaling_scan(c(0.5, 1e6), &grid, &cfg),
            Err(CslError::InsufficientDomain { usable: 0, .. })
        ));
        assert!(matches!(
            error_scaling_scan(c(1.5, 1.0), &grid, &cfg),
            Err(CslError::Domain(_))
        ));
        assert!(matches!(
            error_scaling_scan(c(0.5, 1.0), &[256, 256, 512], &cfg),
            Err(CslError::InvalidInput(_))
        ));
    }

    #[test]
    fn scan_marks_domain_per_n() {
        let cfg = EvalConfig::plain(10_000);
        // 2πn/2 >= 300 needs n >= 95.5
        let r = error_scaling_scan(c(0.5, 300.0), &[32, 64, 128, 256, 512, 1024], &cfg).unwrap();
        assert_eq!(r.domain_ok, vec![false, false, true, true, true, true]);
        assert_eq!(r.errors.len(), 6);
    }
}
