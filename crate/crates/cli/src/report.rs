//! Report records and their serialization.
//!
//! JSON reports have the top-level shape `{manifest, config, results}`.
//! Floating-point numbers are written with 17 significant digits; CSV uses
//! a header row, `,` separators, `.` decimals and LF line endings.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use csl_core::experiments::{RatioReport, ScalingReport, ZetaHatDoublingSummary};
use csl_core::functional::ResidualReport;
use csl_core::zeros::{CrosscheckReport, MatchedPair, ZeroRecord};
use csl_core::{ComplexValue, EvalConfig, SeriesValue};
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

/// Format a double with 17 significant digits.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// A double serialized as a JSON number with 17 significant digits, or
/// `null` when not finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct F17(pub f64);

impl Serialize for F17 {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return serializer.serialize_none();
        }
        let raw = RawValue::from_string(fmt17(self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(serializer)
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ComplexRecord {
    pub re: F17,
    pub im: F17,
}

impl From<ComplexValue> for ComplexRecord {
    fn from(z: ComplexValue) -> Self {
        ComplexRecord {
            re: F17(z.re),
            im: F17(z.im),
        }
    }
}

fn complexes(zs: &[ComplexValue]) -> Vec<ComplexRecord> {
    zs.iter().copied().map(ComplexRecord::from).collect()
}

fn reals(xs: &[f64]) -> Vec<F17> {
    xs.iter().copied().map(F17).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct ConfigRecord {
    pub n_terms: usize,
    pub accelerate: bool,
    pub accel_order: usize,
    pub hl_constant: F17,
    pub guard_radius: F17,
    pub tolerance: F17,
}

impl From<&EvalConfig> for ConfigRecord {
    fn from(c: &EvalConfig) -> Self {
        ConfigRecord {
            n_terms: c.n_terms,
            accelerate: c.accelerate,
            accel_order: c.accel_order,
            hl_constant: F17(c.hl_constant),
            guard_radius: F17(c.guard_radius),
            tolerance: F17(c.tolerance),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub command: String,
    /// Every flag value after defaults are applied, as text.
    pub parameters: BTreeMap<String, String>,
    pub timestamp: String,
}

impl Manifest {
    pub fn new(command: &str, parameters: BTreeMap<String, String>) -> Self {
        Manifest {
            command: command.to_string(),
            parameters,
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Envelope<'a, T: Serialize> {
    pub manifest: &'a Manifest,
    pub config: ConfigRecord,
    pub results: T,
}

pub fn to_json<T: Serialize>(manifest: &Manifest, config: &EvalConfig, results: T) -> String {
    let env = Envelope {
        manifest,
        config: config.into(),
        results,
    };
    let mut out = serde_json::to_string_pretty(&env).expect("report records always serialize");
    out.push('\n');
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct SeriesRecord {
    pub value: ComplexRecord,
    pub n_used: usize,
    pub mode: &'static str,
    pub est_error: F17,
}

impl From<&SeriesValue> for SeriesRecord {
    fn from(v: &SeriesValue) -> Self {
        SeriesRecord {
            value: v.value.into(),
            n_used: v.n_used,
            mode: v.mode.as_str(),
            est_error: F17(v.est_error),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ResidualRecord {
    pub point: ComplexRecord,
    pub lhs: ComplexRecord,
    pub rhs: ComplexRecord,
    pub residual: F17,
}

impl From<&ResidualReport> for ResidualRecord {
    fn from(r: &ResidualReport) -> Self {
        ResidualRecord {
            point: r.point.into(),
            lhs: r.lhs.into(),
            rhs: r.rhs.into(),
            residual: F17(r.residual),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ZeroRecordOut {
    pub index: usize,
    pub ordinate: F17,
    pub residual_mag: F17,
    pub refined: bool,
    pub iterations: usize,
}

impl From<&ZeroRecord> for ZeroRecordOut {
    fn from(r: &ZeroRecord) -> Self {
        ZeroRecordOut {
            index: r.index,
            ordinate: F17(r.ordinate),
            residual_mag: F17(r.residual_mag),
            refined: r.refined,
            iterations: r.iterations,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MatchedPairOut {
    pub found_index: usize,
    pub reference_index: usize,
    pub found: F17,
    pub reference: F17,
    pub delta: F17,
}

impl From<&MatchedPair> for MatchedPairOut {
    fn from(m: &MatchedPair) -> Self {
        MatchedPairOut {
            found_index: m.found_index,
            reference_index: m.reference_index,
            found: F17(m.found),
            reference: F17(m.reference),
            delta: F17(m.delta),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CrosscheckOut {
    pub reference_source: String,
    pub tolerance: F17,
    pub all_matched: bool,
    pub max_abs_delta: F17,
    pub matched: Vec<MatchedPairOut>,
    pub unmatched_found: Vec<F17>,
    pub unmatched_reference: Vec<F17>,
}

impl CrosscheckOut {
    pub fn new(report: &CrosscheckReport, reference_source: String) -> Self {
        CrosscheckOut {
            reference_source,
            tolerance: F17(report.tolerance),
            all_matched: report.all_matched(),
            max_abs_delta: F17(report.max_abs_delta),
            matched: report.matched.iter().map(Into::into).collect(),
            unmatched_found: reals(&report.unmatched_found),
            unmatched_reference: reals(&report.unmatched_reference),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ZetaHatSummaryOut {
    pub fitted_exponent: ComplexRecord,
    pub stated_exponent: ComplexRecord,
    pub leading_term_exponent: ComplexRecord,
    pub deviation_from_stated: ComplexRecord,
    pub deviation_from_leading_term: ComplexRecord,
}

impl From<&ZetaHatDoublingSummary> for ZetaHatSummaryOut {
    fn from(s: &ZetaHatDoublingSummary) -> Self {
        ZetaHatSummaryOut {
            fitted_exponent: s.fitted_exponent.into(),
            stated_exponent: s.stated_exponent.into(),
            leading_term_exponent: s.leading_term_exponent.into(),
            deviation_from_stated: s.deviation_from_stated.into(),
            deviation_from_leading_term: s.deviation_from_leading_term.into(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RatioRecord {
    pub point: ComplexRecord,
    pub provenance: String,
    pub n_base: usize,
    pub m_doublings: usize,
    pub schedule: Vec<usize>,
    pub ratios: Vec<ComplexRecord>,
    pub moduli: Vec<F17>,
    pub zeta_hat_ratios: Vec<ComplexRecord>,
    pub fitted_exponent: ComplexRecord,
    pub fitted_exponent_near_reference: ComplexRecord,
    pub reference_exponent: ComplexRecord,
    pub exponent_deviation: ComplexRecord,
    pub exponent_period_im: F17,
    pub tail_modulus_log2_mean: F17,
    pub zeta_hat: ZetaHatSummaryOut,
}

impl RatioRecord {
    pub fn new(r: &RatioReport, provenance: String) -> Self {
        let tail = r.tail_moduli();
        let tail_mean = tail.iter().map(|m| m.log2().abs()).sum::<f64>() / tail.len() as f64;
        RatioRecord {
            point: r.point.into(),
            provenance,
            n_base: r.n_base,
            m_doublings: r.m_doublings,
            schedule: r.schedule.clone(),
            ratios: complexes(&r.ratios),
            moduli: reals(&r.moduli),
            zeta_hat_ratios: complexes(&r.zeta_hat_ratios),
            fitted_exponent: r.fitted_exponent.into(),
            fitted_exponent_near_reference: r.fitted_exponent_near_reference().into(),
            reference_exponent: r.reference_exponent.into(),
            exponent_deviation: r.exponent_deviation.into(),
            exponent_period_im: F17(csl_core::experiments::EXPONENT_PERIOD),
            tail_modulus_log2_mean: F17(tail_mean),
            zeta_hat: (&r.zeta_hat).into(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalingRecord {
    pub point: ComplexRecord,
    pub n_grid: Vec<usize>,
    pub errors: Vec<F17>,
    pub domain_ok: Vec<bool>,
    pub fitted_slope: F17,
    pub reference_slope: F17,
    pub hl_constant: F17,
    pub reference: SeriesRecord,
    pub reference_config: ConfigRecord,
}

impl From<&ScalingReport> for ScalingRecord {
    fn from(r: &ScalingReport) -> Self {
        ScalingRecord {
            point: r.point.into(),
            n_grid: r.n_grid.clone(),
            errors: reals(&r.errors),
            domain_ok: r.domain_ok.clone(),
            fitted_slope: F17(r.fitted_slope),
            reference_slope: F17(r.reference_slope),
            hl_constant: F17(r.hl_constant),
            reference: (&r.reference).into(),
            reference_config: (&r.reference_config).into(),
        }
    }
}

/// Residual grid as CSV; `None` rows are guard-zone points marked `skipped`.
pub fn residual_csv(rows: &[(ComplexValue, Option<ResidualReport>)]) -> String {
    let mut out = String::from("re,im,residual,lhs_re,lhs_im,rhs_re,rhs_im\n");
    for (z, row) in rows {
        match row {
            Some(r) => out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                fmt17(z.re),
                fmt17(z.im),
                fmt17(r.residual),
                fmt17(r.lhs.re),
                fmt17(r.lhs.im),
                fmt17(r.rhs.re),
                fmt17(r.rhs.im)
            )),
            None => out.push_str(&format!("{},{},skipped,,,,\n", fmt17(z.re), fmt17(z.im))),
        }
    }
    out
}

/// `(n, error)` pairs of a scaling scan as CSV.
pub fn scaling_csv(r: &ScalingReport) -> String {
    let mut out = String::from("n,error,domain_ok\n");
    for ((n, e), ok) in r.n_grid.iter().zip(&r.errors).zip(&r.domain_ok) {
        out.push_str(&format!("{n},{},{ok}\n", fmt17(*e)));
    }
    out
}

/// Write `contents` to `path` through a sibling temporary file and a rename.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let name = path
        .file_name()
        .ok_or_else(|| std::io::Error::new(std::io::ErrorKind::InvalidInput, "output path has no file name"))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(fmt17(1.0), "1.0000000000000000e0");
        assert_eq!(fmt17(-0.1), "-1.0000000000000001e-1");
        for &x in &[std::f64::consts::PI, 1e-300, -2.5e17, 0.1 + 0.2] {
            assert_eq!(fmt17(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn f17_in_json() {
        let v = vec![F17(0.5), F17(f64::NAN)];
        assert_eq!(
            serde_json::to_string(&v).unwrap(),
            "[5.0000000000000000e-1,null]"
        );
        let parsed: Vec<Option<f64>> = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
        assert_eq!(parsed, vec![Some(0.5), None]);
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = std::env::temp_dir().join(format!("csl-report-test-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let p = dir.join("out.json");
        write_atomic(&p, "first").unwrap();
        write_atomic(&p, "second").unwrap();
        assert_eq!(fs::read_to_string(&p).unwrap(), "second");
        let leftovers: Vec<_> = fs::read_dir(&dir).unwrap().collect();
        assert_eq!(leftovers.len(), 1);
        fs::remove_dir_all(&dir).unwrap();
    }
}
