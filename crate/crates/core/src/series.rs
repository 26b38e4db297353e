//! Partial sums of the zeta family.
//!
//! * `zeta_partial`: ζₙ(z) = Σ_{k≤n} k^-z
//! * `eta_partial`: ξₙ(z) = Σ_{k≤n} (-1)^{k-1} k^-z
//! * `zeta_hat_regularized`: ζ̂ₙ(z) = ζₙ(z) - n^{1-z}/(1-z)
//! * `zeta_hat_eta`: ξₙ(z) / (1 - 2^{1-z}), optionally tail-averaged
//!
//! Every sum runs over ascending `k` with no compensation, so identical
//! inputs produce bit-identical outputs and `f(conj z) == conj f(z)`.

use crate::error::{CslError, Result};
use crate::special::{power_from_log, pow2};
use crate::ComplexValue;

/// Default guard radius around removable or true singularities.
pub const DEFAULT_GUARD_RADIUS: f64 = 1e-6;

/// Evaluation knobs shared by every series-based operation.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalConfig {
    /// Series truncation index n.
    pub n_terms: usize,
    /// Tail-average the eta partial sums.
    pub accelerate: bool,
    /// Number of repeated averaging passes.
    pub accel_order: usize,
    /// The constant C > 1 in the validity domain |Im z| <= 2πn/C.
    pub hl_constant: f64,
    pub guard_radius: f64,
    /// Convergence target for iterative refinement.
    pub tolerance: f64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            n_terms: 10_000,
            accelerate: true,
            accel_order: 40,
            hl_constant: 2.0,
            guard_radius: DEFAULT_GUARD_RADIUS,
            tolerance: 1e-10,
        }
    }
}

impl EvalConfig {
    /// Plain (unaccelerated) evaluation with `n_terms` terms.
    pub fn plain(n_terms: usize) -> Self {
        EvalConfig {
            n_terms,
            accelerate: false,
            ..EvalConfig::default()
        }
    }

    /// Tail-averaged evaluation with `n_terms` terms and `accel_order` passes.
    pub fn accelerated(n_terms: usize, accel_order: usize) -> Self {
        EvalConfig {
            n_terms,
            accelerate: true,
            accel_order,
            ..EvalConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_terms < 1 {
            return Err(CslError::InvalidConfig("n_terms must be >= 1".into()));
        }
        if !(self.hl_constant > 1.0 && self.hl_constant.is_finite()) {
            return Err(CslError::InvalidConfig(format!(
                "hl_constant must be a finite value > 1, got {}",
                self.hl_constant
            )));
        }
        if !(self.guard_radius > 0.0 && self.guard_radius.is_finite()) {
            return Err(CslError::InvalidConfig(format!(
                "guard_radius must be a finite value > 0, got {}",
                self.guard_radius
            )));
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(CslError::InvalidConfig(format!(
                "tolerance must be a finite value > 0, got {}",
                self.tolerance
            )));
        }
        if self.accelerate {
            if self.accel_order < 1 {
                return Err(CslError::InvalidConfig("accel_order must be >= 1".into()));
            }
            if self.accel_order > self.n_terms {
                return Err(CslError::InvalidConfig(format!(
                    "accel_order {} exceeds n_terms {}",
                    self.accel_order, self.n_terms
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesMode {
    PlainZeta,
    EtaPrefactored,
    Regularized,
}

impl SeriesMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SeriesMode::PlainZeta => "plain_zeta",
            SeriesMode::EtaPrefactored => "eta_prefactored",
            SeriesMode::Regularized => "regularized",
        }
    }
}

/// A series value together with the truncation used and a heuristic error
/// estimate (not a rigorous bound).
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesValue {
    pub value: ComplexValue,
    pub n_used: usize,
    pub mode: SeriesMode,
    pub est_error: f64,
}

#[inline]
fn term(k: usize, z: ComplexValue) -> ComplexValue {
    if k == 1 {
        ComplexValue::new(1.0, 0.0)
    } else {
        power_from_log(-(k as f64).ln(), z)
    }
}

fn one() -> ComplexValue {
    ComplexValue::new(1.0, 0.0)
}

/// ζₙ(z) = Σ_{k=1..n} k^-z.
pub fn zeta_partial(z: ComplexValue, n: usize) -> ComplexValue {
    assert!(n >= 1, "zeta_partial needs n >= 1");
    zeta_partial_ladder(z, &[n])[0]
}

/// ζₙ(z) at every `n` of an ascending ladder, from one pass over k.
///
/// Each entry is bit-identical to `zeta_partial(z, n)`.
pub fn zeta_partial_ladder(z: ComplexValue, ns: &[usize]) -> Vec<ComplexValue> {
    assert!(
        ns.first().is_none_or(|&n| n >= 1) && ns.windows(2).all(|w| w[0] <= w[1]),
        "ladder must be ascending and start at n >= 1"
    );
    let mut out = Vec::with_capacity(ns.len());
    let mut sum = ComplexValue::new(0.0, 0.0);
    let mut k = 0;
    for &n in ns {
        while k < n {
            k += 1;
            sum += term(k, z);
        }
        out.push(sum);
    }
    out
}

/// ξₙ(z) = Σ_{k=1..n} (-1)^{k-1} k^-z.
pub fn eta_partial(z: ComplexValue, n: usize) -> ComplexValue {
    assert!(n >= 1, "eta_partial needs n >= 1");
    let mut sum = ComplexValue::new(0.0, 0.0);
    for k in 1..=n {
        if k % 2 == 1 {
            sum += term(k, z);
        } else {
            sum -= term(k, z);
        }
    }
    sum
}

/// `n^{1-z} / (1-z)`, the leading tail term removed by the regularization.
fn regularization_tail(z: ComplexValue, n: usize) -> ComplexValue {
    let w = one() - z;
    power_from_log((n as f64).ln(), w) / w
}

fn check_regularizable(z: ComplexValue, guard: f64) -> Result<()> {
    if (z - one()).norm() <= guard {
        Err(CslError::Singularity { z, guard })
    } else {
        Ok(())
    }
}

/// Regularized partial sum ζ̂ₙ(z) = ζₙ(z) - n^{1-z}/(1-z).
pub fn zeta_hat_regularized(z: ComplexValue, n: usize) -> Result<ComplexValue> {
    check_regularizable(z, DEFAULT_GUARD_RADIUS)?;
    Ok(zeta_partial(z, n) - regularization_tail(z, n))
}

/// ζ̂ₙ(z) at every `n` of an ascending ladder.
pub fn zeta_hat_regularized_ladder(z: ComplexValue, ns: &[usize]) -> Result<Vec<ComplexValue>> {
    check_regularizable(z, DEFAULT_GUARD_RADIUS)?;
    Ok(zeta_partial_ladder(z, ns)
        .into_iter()
        .zip(ns)
        .map(|(s, &n)| s - regularization_tail(z, n))
        .collect())
}

/// `1 - 2^{1-z}`, the factor converting the eta series into zeta.
pub fn eta_prefactor(z: ComplexValue) -> ComplexValue {
    one() - pow2(one() - z)
}

fn checked_prefactor(z: ComplexValue, guard: f64) -> Result<ComplexValue> {
    if z.re.is_nan() || z.re <= 0.0 {
        return Err(CslError::Domain(format!(
            "eta representation needs Re z > 0, got z = {z}"
        )));
    }
    let p = eta_prefactor(z);
    let modulus = p.norm();
    if modulus <= guard {
        return Err(CslError::PrefactorSingularity { z, modulus, guard });
    }
    Ok(p)
}

/// Collapse `sums` by repeated pairwise averaging; returns the final value
/// and the magnitude of the last averaging correction.
fn repeated_average(mut sums: Vec<ComplexValue>) -> (ComplexValue, f64) {
    debug_assert!(sums.len() >= 2);
    while sums.len() > 2 {
        for i in 0..sums.len() - 1 {
            sums[i] = (sums[i] + sums[i + 1]) * 0.5;
        }
        sums.pop();
    }
    let (a, b) = (sums[0], sums[1]);
    ((a + b) * 0.5, (b - a).norm() * 0.5)
}

/// Partial sums `S_{n-order}, ..., S_n` of the eta series (S_0 = 0), and of
/// its term-wise derivative when `with_derivative` is set.
fn eta_partial_sums_tail(
    z: ComplexValue,
    n: usize,
    order: usize,
    with_derivative: bool,
) -> (Vec<ComplexValue>, Vec<ComplexValue>) {
    let first = n - order;
    let mut sums = Vec::with_capacity(order + 1);
    let mut dsums = Vec::with_capacity(if with_derivative { order + 1 } else { 0 });
    let mut s = ComplexValue::new(0.0, 0.0);
    let mut ds = ComplexValue::new(0.0, 0.0);
    if first == 0 {
        sums.push(s);
        if with_derivative {
            dsums.push(ds);
        }
    }
    for k in 1..=n {
        let t = term(k, z);
        if k % 2 == 1 {
            s += t;
        } else {
            s -= t;
        }
        if with_derivative && k > 1 {
            // d/dz k^-z = -ln k * k^-z
            let dt = t * -(k as f64).ln();
            if k % 2 == 1 {
                ds += dt;
            } else {
                ds -= dt;
            }
        }
        if k >= first {
            sums.push(s);
            if with_derivative {
                dsums.push(ds);
            }
        }
    }
    (sums, dsums)
}

/// ζ̂(z) through the eta series: ξₙ(z) / (1 - 2^{1-z}).
///
/// Plain mode reports `(n+1)^{-Re z} / |1 - 2^{1-z}|` as its error estimate;
/// accelerated mode reports the last averaging correction scaled the same way.
pub fn zeta_hat_eta(z: ComplexValue, config: &EvalConfig) -> Result<SeriesValue> {
    config.validate()?;
    let p = checked_prefactor(z, config.guard_radius)?;
    let n = config.n_terms;
    let (eta, eta_err) = if config.accelerate {
        let (sums, _) = eta_partial_sums_tail(z, n, config.accel_order, false);
        repeated_average(sums)
    } else {
        (eta_partial(z, n), ((n + 1) as f64).powf(-z.re))
    };
    Ok(SeriesValue {
        value: eta / p,
        n_used: n,
        mode: SeriesMode::EtaPrefactored,
        est_error: eta_err / p.norm(),
    })
}

/// ζ̂(z) and dζ̂/dz from the (optionally accelerated) eta series.
pub fn zeta_hat_eta_with_derivative(
    z: ComplexValue,
    config: &EvalConfig,
) -> Result<(ComplexValue, ComplexValue)> {
    config.validate()?;
    let p = checked_prefactor(z, config.guard_radius)?;
    let n = config.n_terms;
    let order = if config.accelerate { config.accel_order } else { 1 };
    let (sums, dsums) = eta_partial_sums_tail(z, n, order, true);
    let (eta, deta) = if config.accelerate {
        (repeated_average(sums).0, repeated_average(dsums).0)
    } else {
        (sums[order], dsums[order])
    };
    // d/dz (1 - 2^{1-z}) = 2^{1-z} ln 2
    let dp = (one() - p) * std::f64::consts::LN_2;
    let value = eta / p;
    let derivative = (deta - value * dp) / p;
    Ok((value, derivative))
}

/// |ξ_{2n}(z) - (ζ_{2n}(z) - 2^{1-z} ζₙ(z))|; pure rounding noise.
pub fn identity_residual_plain(z: ComplexValue, n: usize) -> f64 {
    assert!(n >= 1, "identity_residual_plain needs n >= 1");
    let zs = zeta_partial_ladder(z, &[n, 2 * n]);
    let eta = eta_partial(z, 2 * n);
    (eta - (zs[1] - pow2(one() - z) * zs[0])).norm()
}

/// |ξ_{2n}(z) - (ζ̂_{2n}(z) - 2^{1-z} ζ̂ₙ(z))|; pure rounding noise.
pub fn identity_residual_regularized(z: ComplexValue, n: usize) -> Result<f64> {
    assert!(n >= 1, "identity_residual_regularized needs n >= 1");
    let zs = zeta_hat_regularized_ladder(z, &[n, 2 * n])?;
    let eta = eta_partial(z, 2 * n);
    Ok((eta - (zs[1] - pow2(one() - z) * zs[0])).norm())
}
