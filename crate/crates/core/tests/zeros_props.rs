#![allow(clippy::excessive_precision)]

mod common;

use std::io::Write;

use csl_core::functional::functional_equation_residual;
use csl_core::series::zeta_hat_eta;
use csl_core::zeros::{
    crosscheck_zeros, load_zero_table, parse_zero_table, refine_zero, scan_zeros, ScanWindow, ZeroRecord,
};
use csl_core::{Complex64, CslError, EvalConfig, BUNDLED_ZERO_TABLE};

fn scan(t_min: f64, t_max: f64) -> Vec<ZeroRecord> {
    let window = ScanWindow::new(t_min, t_max, 0.05).unwrap();
    scan_zeros(&window, &EvalConfig::default()).unwrap()
}

#[test]
fn scan_reproduces_bisection_zeros() {
    let found = scan(10.0, 35.0);
    let oracle = common::bisection_zeros(10.0, 35.0);
    assert_eq!(found.len(), 5);
    assert_eq!(oracle.len(), 5);
    for (i, (rec, t)) in found.iter().zip(&oracle).enumerate() {
        assert_eq!(rec.index, i + 1);
        assert!((rec.ordinate - t).abs() <= 1e-6, "{} vs {t}", rec.ordinate);
        assert!(rec.refined);
    }
}

#[test]
fn scan_below_first_zero_is_empty() {
    assert!(scan(0.0, 10.0).is_empty());
    let tiny = ScanWindow::new(20.0, 20.01, 0.005).unwrap();
    assert!(scan_zeros(&tiny, &EvalConfig::default()).unwrap().is_empty());
}

#[test]
fn scan_over_forty_units_finds_ten_verified_zeros() {
    let cfg = EvalConfig::default();
    let found = scan(10.0, 50.0);
    assert_eq!(found.len(), 10);
    let doubled = EvalConfig {
        accel_order: 2 * cfg.accel_order,
        ..cfg.clone()
    };
    for w in found.windows(2) {
        assert!(w[0].ordinate < w[1].ordinate);
    }
    for rec in &found {
        assert!(rec.refined && rec.residual_mag <= cfg.tolerance);
        let rho = rec.rho();
        assert!(zeta_hat_eta(rho, &doubled).unwrap().value.norm() <= 1e-8);
        assert!(zeta_hat_eta(Complex64::new(1.0, 0.0) - rho, &cfg).unwrap().value.norm() <= 1e-8);
        assert!(functional_equation_residual(rho, &cfg).unwrap().residual <= 1e-8);
    }
    let reference = parse_zero_table(BUNDLED_ZERO_TABLE).unwrap();
    let window = ScanWindow::new(10.0, 50.0, 0.05).unwrap();
    let check = crosscheck_zeros(&found, &window.restrict(&reference), 1e-6);
    assert!(check.all_matched());
    assert!(check.max_abs_delta <= 1e-9, "{}", check.max_abs_delta);
}

#[test]
fn scan_is_deterministic() {
    assert_eq!(scan(20.0, 33.0), scan(20.0, 33.0));
}

#[test]
fn scan_argument_errors() {
    assert!(matches!(
        ScanWindow::new(10.0, 50.0, 0.6).map(|w| scan_zeros(&w, &EvalConfig::default())),
        Ok(Err(CslError::WindowTooCoarse { .. }))
    ));
    let w = ScanWindow::new(10.0, 20.0, 0.05).unwrap();
    assert!(matches!(scan_zeros(&w, &EvalConfig::plain(10_000)), Err(CslError::InvalidConfig(_))));
    assert!(matches!(ScanWindow::new(5.0, 5.0, 0.05), Err(CslError::InvalidWindow(_))));
    assert!(matches!(ScanWindow::new(-1.0, 5.0, 0.05), Err(CslError::InvalidWindow(_))));
    assert!(matches!(ScanWindow::new(1.0, 5.0, 4.0), Err(CslError::InvalidWindow(_))));
}

#[test]
fn refine_examples() {
    let cfg = EvalConfig::default();
    let first = common::bisection_zeros(14.0, 14.3)[0];
    let rec = refine_zero(14.1, &cfg).unwrap();
    assert!(rec.refined);
    assert!((rec.ordinate - 14.134_725_142).abs() <= 1e-8);
    assert!((rec.ordinate - first).abs() <= 1e-10);
    // Newton from 13.0 steps off the strip before it can reach the zero
    assert!(matches!(refine_zero(13.0, &cfg), Err(CslError::EscapedStrip { .. })));
    let again = refine_zero(rec.ordinate, &cfg).unwrap();
    assert!(again.iterations <= 2, "{}", again.iterations);
    assert!(again.refined);
}

#[test]
fn zero_table_loading() {
    assert_eq!(
        parse_zero_table("14.134725141734695\n21.022039638771555\n").unwrap(),
        vec![14.134725141734695, 21.022039638771555]
    );
    assert_eq!(parse_zero_table("# header\n\n14.1\n  \n# x\n21.0\n").unwrap(), vec![14.1, 21.0]);
    assert!(matches!(
        parse_zero_table("21.0\n14.1\n"),
        Err(CslError::NonMonotonic { line: 2, .. })
    ));
    assert!(matches!(parse_zero_table("14.1\nfoo\n"), Err(CslError::Parse { line: 2, .. })));

    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(b"# zeros\n14.134725141734695\n21.022039638771555\n").unwrap();
    assert_eq!(load_zero_table(file.path()).unwrap().len(), 2);
    assert!(matches!(load_zero_table("/nonexistent/zeros.txt"), Err(CslError::Io { .. })));

    let bundled = parse_zero_table(BUNDLED_ZERO_TABLE).unwrap();
    assert_eq!(bundled.len(), 30);
    let oracle = common::bisection_zeros(10.0, 102.0);
    assert_eq!(oracle.len(), 30);
    for (a, b) in bundled.iter().zip(&oracle) {
        assert!((a - b).abs() <= 1e-9, "{a} vs {b}");
    }
}

fn record(index: usize, ordinate: f64) -> ZeroRecord {
    ZeroRecord {
        index,
        ordinate,
        residual_mag: 0.0,
        refined: true,
        iterations: 0,
    }
}

#[test]
fn crosscheck_examples() {
    let reference = [14.134725141734695, 21.022039638771555, 25.010857580145689];
    let same: Vec<_> = reference.iter().enumerate().map(|(i, &t)| record(i + 1, t)).collect();
    let report = crosscheck_zeros(&same, &reference, 1e-6);
    assert!(report.all_matched());
    assert_eq!(report.max_abs_delta, 0.0);

    let shifted: Vec<_> = reference.iter().enumerate().map(|(i, &t)| record(i + 1, t + 1e-7)).collect();
    let report = crosscheck_zeros(&shifted, &reference, 1e-6);
    assert!(report.all_matched());
    assert!((report.max_abs_delta - 1e-7).abs() < 1e-12);

    let report = crosscheck_zeros(&same[..2], &reference, 1e-6);
    assert_eq!(report.unmatched_reference, vec![25.010857580145689]);
    assert!(!report.all_matched());
}
