//! Critical-line zeros: grid scan of |ζ̂(1/2 + it)|, Newton refinement in
//! the complex plane, zero-table ingestion and cross-checking.

use std::path::Path;

use rayon::prelude::*;

use crate::error::{CslError, Result};
use crate::series::{self, EvalConfig};
use crate::ComplexValue;

/// Largest scan step accepted; coarser grids can step over zeros below t = 100.
pub const MAX_SCAN_STEP: f64 = 0.5;
pub const DEFAULT_SCAN_STEP: f64 = 0.05;
/// Grid minima of |ζ̂| above this value do not seed a refinement.
pub const COARSE_THRESHOLD: f64 = 0.5;
/// Refined ordinates closer than this are the same zero.
pub const DEDUP_RADIUS: f64 = 1e-6;
pub const MAX_NEWTON_ITERATIONS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanWindow {
    t_min: f64,
    t_max: f64,
    step: f64,
}

impl ScanWindow {
    pub fn new(t_min: f64, t_max: f64, step: f64) -> Result<Self> {
        if !(t_min.is_finite() && t_max.is_finite() && step.is_finite()) {
            return Err(CslError::InvalidWindow("bounds and step must be finite".into()));
        }
        if t_min < 0.0 {
            return Err(CslError::InvalidWindow(format!("t_min must be >= 0, got {t_min}")));
        }
        if t_max <= t_min {
            return Err(CslError::InvalidWindow(format!(
                "t_max ({t_max}) must exceed t_min ({t_min})"
            )));
        }
        if step <= 0.0 || step >= t_max - t_min {
            return Err(CslError::InvalidWindow(format!(
                "step must lie in (0, t_max - t_min), got {step}"
            )));
        }
        Ok(ScanWindow { t_min, t_max, step })
    }

    pub fn t_min(&self) -> f64 {
        self.t_min
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn contains(&self, t: f64) -> bool {
        t >= self.t_min && t <= self.t_max
    }

    /// Grid ordinates `t_min, t_min + step, ...`, closed by `t_max`.
    pub fn grid(&self) -> Vec<f64> {
        let span = self.t_max - self.t_min;
        let count = (span / self.step + 1e-9).floor() as usize;
        let mut ts: Vec<f64> = (0..=count).map(|i| self.t_min + i as f64 * self.step).collect();
        if let Some(&last) = ts.last() {
            if self.t_max - last > 1e-12 {
                ts.push(self.t_max);
            }
        }
        ts
    }

    /// The reference ordinates falling inside this window.
    pub fn restrict(&self, reference: &[f64]) -> Vec<f64> {
        reference.iter().copied().filter(|&t| self.contains(t)).collect()
    }
}

/// A zero ρ = 1/2 + i·ordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroRecord {
    /// 1-based position by ordinate within one scan.
    pub index: usize,
    pub ordinate: f64,
    /// |ζ̂(1/2 + i·ordinate)| after refinement.
    pub residual_mag: f64,
    pub refined: bool,
    /// Newton steps taken before the residual met the tolerance.
    pub iterations: usize,
}

impl ZeroRecord {
    pub fn rho(&self) -> ComplexValue {
        ComplexValue::new(0.5, self.ordinate)
    }
}

/// |ζ̂(1/2 + it)| through the eta series.
pub fn critical_line_modulus(t: f64, config: &EvalConfig) -> Result<f64> {
    Ok(series::zeta_hat_eta(ComplexValue::new(0.5, t), config)?.value.norm())
}

/// Newton iteration on ζ̂ from `1/2 + i·t_seed`.
///
/// Stops once |ζ̂| <= `config.tolerance`, then takes one polishing step if
/// it lowers the residual, and reports the ordinate of the final iterate.
pub fn refine_zero(t_seed: f64, config: &EvalConfig) -> Result<ZeroRecord> {
    config.validate()?;
    let mut z = ComplexValue::new(0.5, t_seed);
    let mut residual = f64::INFINITY;
    for iteration in 0..=MAX_NEWTON_ITERATIONS {
        let (f, df) = series::zeta_hat_eta_with_derivative(z, config)?;
        residual = f.norm();
        if residual <= config.tolerance {
            let polished = z - f / df;
            if polished.re > 0.0 && polished.re < 1.0 {
                let r = series::zeta_hat_eta(polished, config)?.value.norm();
                if r < residual {
                    z = polished;
                }
            }
            let ordinate = z.im;
            let residual_mag = critical_line_modulus(ordinate, config)?;
            return Ok(ZeroRecord {
                index: 1,
                ordinate,
                residual_mag,
                refined: residual_mag <= config.tolerance,
                iterations: iteration,
            });
        }
        if iteration == MAX_NEWTON_ITERATIONS || df.norm() == 0.0 {
            break;
        }
        z -= f / df;
        if !(z.re > 0.0 && z.re < 1.0) || !z.im.is_finite() {
            return Err(CslError::EscapedStrip { z, t_seed });
        }
    }
    Err(CslError::NoConvergence {
        t_seed,
        iterations: MAX_NEWTON_ITERATIONS,
        residual,
    })
}

/// Scan |ζ̂(1/2 + it)| over the window, refine every grid minimum below
/// [`COARSE_THRESHOLD`], and return the distinct zeros inside the window
/// ordered by ordinate.
pub fn scan_zeros(window: &ScanWindow, config: &EvalConfig) -> Result<Vec<ZeroRecord>> {
    config.validate()?;
    if !config.accelerate {
        return Err(CslError::InvalidConfig(
            "zero scanning needs accelerated evaluation".into(),
        ));
    }
    if window.step > MAX_SCAN_STEP {
        return Err(CslError::WindowTooCoarse {
            step: window.step,
            max_step: MAX_SCAN_STEP,
        });
    }

    let ts = window.grid();
    let moduli = ts
        .par_iter()
        .map(|&t| critical_line_modulus(t, config))
        .collect::<Result<Vec<f64>>>()?;

    let seeds: Vec<f64> = (0..ts.len())
        .filter(|&i| {
            let left = if i > 0 { moduli[i - 1] } else { f64::INFINITY };
            let right = moduli.get(i + 1).copied().unwrap_or(f64::INFINITY);
            moduli[i] < COARSE_THRESHOLD && moduli[i] <= left && moduli[i] < right
        })
        .map(|i| ts[i])
        .collect();

    let refined = seeds
        .par_iter()
        .map(|&t| match refine_zero(t, config) {
            Ok(rec) => Ok(Some(rec)),
            Err(CslError::NoConvergence { .. } | CslError::EscapedStrip { .. }) => Ok(None),
            Err(e) => Err(e),
        })
        .collect::<Result<Vec<Option<ZeroRecord>>>>()?;

    let mut found: Vec<ZeroRecord> = refined
        .into_iter()
        .flatten()
        .filter(|r| window.contains(r.ordinate))
        .collect();
    found.sort_by(|a, b| a.ordinate.total_cmp(&b.ordinate));

    let mut out: Vec<ZeroRecord> = Vec::with_capacity(found.len());
    for rec in found {
        match out.last_mut() {
            Some(prev) if (rec.ordinate - prev.ordinate).abs() <= DEDUP_RADIUS => {
                if rec.residual_mag < prev.residual_mag {
                    *prev = rec;
                }
            }
            _ => out.push(rec),
        }
    }
    for (i, rec) in out.iter_mut().enumerate() {
        rec.index = i + 1;
    }
    Ok(out)
}

/// Parse the zero-table format: one decimal ordinate per line, `#` comments
/// and blank lines ignored, strictly increasing.
pub fn parse_zero_table(text: &str) -> Result<Vec<f64>> {
    let mut out: Vec<f64> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let value: f64 = line
            .parse()
            .ok()
            .filter(|v: &f64| v.is_finite())
            .ok_or_else(|| CslError::Parse {
                line: i + 1,
                content: line.to_string(),
            })?;
        if let Some(&previous) = out.last() {
            if value <= previous {
                return Err(CslError::NonMonotonic {
                    line: i + 1,
                    value,
                    previous,
                });
            }
        }
        out.push(value);
    }
    Ok(out)
}

pub fn load_zero_table(path: impl AsRef<Path>) -> Result<Vec<f64>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| CslError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_zero_table(&text)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchedPair {
    /// Index of the found record (its `ZeroRecord::index`).
    pub found_index: usize,
    /// 1-based position in the reference list.
    pub reference_index: usize,
    pub found: f64,
    pub reference: f64,
    /// found - reference
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrosscheckReport {
    pub tolerance: f64,
    pub matched: Vec<MatchedPair>,
    pub unmatched_found: Vec<f64>,
    pub unmatched_reference: Vec<f64>,
    pub max_abs_delta: f64,
}

impl CrosscheckReport {
    pub fn all_matched(&self) -> bool {
        self.unmatched_found.is_empty() && self.unmatched_reference.is_empty()
    }
}

/// Greedy one-to-one matching of found ordinates against reference
/// ordinates, closest pairs first, pairs farther apart than `tol` never
/// matched. Restrict `reference` to the scanned window beforehand
/// ([`ScanWindow::restrict`]) so out-of-window entries are not reported.
pub fn crosscheck_zeros(found: &[ZeroRecord], reference: &[f64], tol: f64) -> CrosscheckReport {
    let mut candidates: Vec<(f64, usize, usize)> = Vec::new();
    for (i, rec) in found.iter().enumerate() {
        for (j, &r) in reference.iter().enumerate() {
            let d = (rec.ordinate - r).abs();
            if d <= tol {
                candidates.push((d, i, j));
            }
        }
    }
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

    let mut found_used = vec![false; found.len()];
    let mut ref_used = vec![false; reference.len()];
    let mut matched = Vec::new();
    for (_, i, j) in candidates {
        if found_used[i] || ref_used[j] {
            continue;
        }
        found_used[i] = true;
        ref_used[j] = true;
        matched.push(MatchedPair {
            found_index: found[i].index,
            reference_index: j + 1,
            found: found[i].ordinate,
            reference: reference[j],
            delta: found[i].ordinate - reference[j],
        });
    }
    matched.sort_by_key(|m| m.reference_index);

    let max_abs_delta = matched.iter().map(|m| m.delta.abs()).fold(0.0, f64::max);
    CrosscheckReport {
        tolerance: tol,
        unmatched_found: found
            .iter()
            .zip(&found_used)
            .filter(|(_, &u)| !u)
            .map(|(r, _)| r.ordinate)
            .collect(),
        unmatched_reference: reference
            .iter()
            .zip(&ref_used)
            .filter(|(_, &u)| !u)
            .map(|(&r, _)| r)
            .collect(),
        matched,
        max_abs_delta,
    }
}
