use std::collections::BTreeMap;
use std::path::Path;

use csl_core::experiments::{self, EXPONENT_PERIOD};
use csl_core::functional::{self, ResidualReport};
use csl_core::series;
use csl_core::zeros::{self, ScanWindow};
use csl_core::{ComplexValue, CslError, EvalConfig};
use rayon::prelude::*;
use serde::Serialize;

use crate::report::{self, fmt17, ComplexRecord, CrosscheckOut, Manifest, RatioRecord, ScalingRecord, SeriesRecord, ZeroRecordOut, F17};
use crate::{
    CliError, ConfigArgs, DoublingArgs, ErrscanArgs, EvalArgs, Format, Outcome, ResidualArgs, ZerosArgs, EXIT_FAILURE, EXIT_OK,
};

fn fmt_complex(z: ComplexValue) -> String {
    format!("{}{:+.16e}i", fmt17(z.re), z.im)
}

fn config_params(params: &mut BTreeMap<String, String>, c: &EvalConfig) {
    params.insert("n".into(), c.n_terms.to_string());
    params.insert("accelerate".into(), c.accelerate.to_string());
    params.insert("accel_order".into(), c.accel_order.to_string());
    params.insert("hl_constant".into(), c.hl_constant.to_string());
    params.insert("guard_radius".into(), c.guard_radius.to_string());
    params.insert("tolerance".into(), c.tolerance.to_string());
}

fn resolved_config(args: &ConfigArgs, accelerate_default: bool) -> Result<EvalConfig, CliError> {
    let config = args.resolve(accelerate_default);
    config.validate().map_err(|e| CliError::usage(e.to_string()))?;
    Ok(config)
}

/// Send `text` to `out` atomically, or hand it back for stdout.
fn emit(text: String, out: Option<&Path>) -> Result<Option<String>, CliError> {
    match out {
        Some(path) => {
            write_file(path, &text)?;
            Ok(None)
        }
        None => Ok(Some(text)),
    }
}

/// Load a zero table; errors name the file as well as the line.
fn load_table(path: &Path) -> Result<Vec<f64>, CliError> {
    zeros::load_zero_table(path).map_err(|e| {
        let mut err = CliError::from(e);
        if !err.message.contains(&path.display().to_string()) {
            err.message = format!("{}: {}", path.display(), err.message);
        }
        err
    })
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    report::write_atomic(path, text).map_err(|e| CliError {
        code: EXIT_FAILURE,
        message: format!("IoError: cannot write {}: {e}", path.display()),
    })
}

#[derive(Serialize)]
struct EvalResults {
    z: ComplexRecord,
    n: usize,
    zeta_partial: ComplexRecord,
    eta_partial: ComplexRecord,
    zeta_hat_regularized: ComplexRecord,
    zeta_hat_eta: SeriesRecord,
}

pub fn cmd_eval(args: EvalArgs) -> Result<Outcome, CliError> {
    let config = resolved_config(&args.config, true)?;
    let z = args.z;
    let mut params = BTreeMap::new();
    params.insert("z".into(), fmt_complex(z));
    params.insert("format".into(), format!("{:?}", args.format).to_lowercase());
    config_params(&mut params, &config);
    let manifest = Manifest::new("eval", params);

    let n = config.n_terms;
    let eta = series::zeta_hat_eta(z, &config)?;
    let zeta_partial = series::zeta_partial(z, n);
    let eta_partial = series::eta_partial(z, n);
    let regularized = series::zeta_hat_regularized(z, n)?;

    let text = match args.format {
        Format::Json => report::to_json(
            &manifest,
            &config,
            EvalResults {
                z: z.into(),
                n,
                zeta_partial: zeta_partial.into(),
                eta_partial: eta_partial.into(),
                zeta_hat_regularized: regularized.into(),
                zeta_hat_eta: (&eta).into(),
            },
        ),
        Format::Text => {
            let rows = [
                ("z", fmt_complex(z)),
                ("n", n.to_string()),
                ("zeta_partial", fmt_complex(zeta_partial)),
                ("eta_partial", fmt_complex(eta_partial)),
                ("zeta_hat_regularized", fmt_complex(regularized)),
                ("zeta_hat_eta", fmt_complex(eta.value)),
                ("zeta_hat_eta.est_error", fmt17(eta.est_error)),
                ("zeta_hat_eta.mode", eta.mode.as_str().to_string()),
            ];
            rows.iter().map(|(k, v)| format!("{k:<24}{v}\n")).collect()
        }
    };
    Ok(Outcome {
        stdout: emit(text, args.out.as_deref())?,
        summary: Vec::new(),
        code: EXIT_OK,
    })
}

fn linspace(lo: f64, hi: f64, steps: u64) -> Vec<f64> {
    if steps == 1 {
        return vec![lo];
    }
    (0..steps)
        .map(|i| {
            if i == steps - 1 {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (steps - 1) as f64
            }
        })
        .collect()
}

#[derive(Serialize)]
struct ResidualResults {
    evaluated: usize,
    skipped: Vec<ComplexRecord>,
    max_residual: F17,
    argmax: Option<ComplexRecord>,
    tol: F17,
    pass: bool,
    rows: Vec<report::ResidualRecord>,
}

pub fn cmd_residual(args: ResidualArgs) -> Result<Outcome, CliError> {
    let config = resolved_config(&args.config, true)?;
    for v in [args.re_min, args.re_max, args.im_min, args.im_max, args.tol] {
        if !v.is_finite() {
            return Err(CliError::usage("grid bounds and --tol must be finite"));
        }
    }
    let mut params = BTreeMap::new();
    params.insert("re_min".into(), args.re_min.to_string());
    params.insert("re_max".into(), args.re_max.to_string());
    params.insert("re_steps".into(), args.re_steps.to_string());
    params.insert("im_min".into(), args.im_min.to_string());
    params.insert("im_max".into(), args.im_max.to_string());
    params.insert("im_steps".into(), args.im_steps.to_string());
    params.insert("tol".into(), args.tol.to_string());
    config_params(&mut params, &config);
    let manifest = Manifest::new("residual", params);

    let points: Vec<ComplexValue> = linspace(args.re_min, args.re_max, args.re_steps)
        .into_iter()
        .flat_map(|re| {
            linspace(args.im_min, args.im_max, args.im_steps)
                .into_iter()
                .map(move |im| ComplexValue::new(re, im))
        })
        .collect();
    let rows: Vec<(ComplexValue, Option<ResidualReport>)> = points
        .par_iter()
        .map(|&z| (z, functional::functional_equation_residual(z, &config).ok()))
        .collect();

    let evaluated: Vec<&ResidualReport> = rows.iter().filter_map(|(_, r)| r.as_ref()).collect();
    let skipped: Vec<ComplexValue> = rows.iter().filter(|(_, r)| r.is_none()).map(|(z, _)| *z).collect();
    let worst = evaluated
        .iter()
        .max_by(|a, b| a.residual.total_cmp(&b.residual))
        .copied();
    let max_residual = worst.map_or(f64::NAN, |r| r.residual);
    let pass = worst.is_some() && max_residual <= args.tol;

    if let Some(path) = &args.json {
        let text = report::to_json(
            &manifest,
            &config,
            ResidualResults {
                evaluated: evaluated.len(),
                skipped: skipped.iter().map(|&z| z.into()).collect(),
                max_residual: F17(max_residual),
                argmax: worst.map(|r| r.point.into()),
                tol: F17(args.tol),
                pass,
                rows: evaluated.iter().map(|&r| r.into()).collect(),
            },
        );
        write_file(path, &text)?;
    }

    let summary = match worst {
        Some(w) => format!(
            "max residual {} at {} over {} points ({} skipped); tol {}: {}",
            fmt17(max_residual),
            fmt_complex(w.point),
            evaluated.len(),
            skipped.len(),
            fmt17(args.tol),
            if pass { "PASS" } else { "FAIL" }
        ),
        None => format!("no grid point evaluated ({} skipped): FAIL", skipped.len()),
    };
    Ok(Outcome {
        stdout: emit(report::residual_csv(&rows), args.out.as_deref())?,
        summary: vec![summary],
        code: if pass { EXIT_OK } else { EXIT_FAILURE },
    })
}

#[derive(Serialize)]
struct WindowRecord {
    t_min: F17,
    t_max: F17,
    step: F17,
}

#[derive(Serialize)]
struct ZerosResults {
    window: WindowRecord,
    zeros: Vec<ZeroRecordOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    crosscheck: Option<CrosscheckOut>,
}

pub fn cmd_zeros(args: ZerosArgs) -> Result<Outcome, CliError> {
    let config = resolved_config(&args.config, true)?;
    let window = ScanWindow::new(args.tmin, args.tmax, args.step)?;
    if window.step() > zeros::MAX_SCAN_STEP {
        return Err(CslError::WindowTooCoarse {
            step: window.step(),
            max_step: zeros::MAX_SCAN_STEP,
        }
        .into());
    }
    if !(args.match_tol >= 0.0 && args.match_tol.is_finite()) {
        return Err(CliError::usage("--match-tol must be a finite value >= 0"));
    }
    let reference = match &args.reference {
        Some(path) => Some((path.display().to_string(), load_table(path)?)),
        None => None,
    };
    let mut params = BTreeMap::new();
    params.insert("tmin".into(), args.tmin.to_string());
    params.insert("tmax".into(), args.tmax.to_string());
    params.insert("step".into(), args.step.to_string());
    params.insert("match_tol".into(), args.match_tol.to_string());
    if let Some((source, _)) = &reference {
        params.insert("reference".into(), source.clone());
    }
    config_params(&mut params, &config);
    let manifest = Manifest::new("zeros", params);

    let found = zeros::scan_zeros(&window, &config)?;
    let mut summary = vec![format!(
        "found {} zeros in [{}, {}]",
        found.len(),
        args.tmin,
        args.tmax
    )];
    let mut code = EXIT_OK;
    let crosscheck = reference.map(|(source, table)| {
        let check = zeros::crosscheck_zeros(&found, &window.restrict(&table), args.match_tol);
        summary.push(format!(
            "crosscheck vs {source}: {} matched, {} unmatched found, {} unmatched reference, max |delta| {}",
            check.matched.len(),
            check.unmatched_found.len(),
            check.unmatched_reference.len(),
            fmt17(check.max_abs_delta)
        ));
        if !check.all_matched() {
            code = EXIT_FAILURE;
        }
        CrosscheckOut::new(&check, source)
    });

    let text = report::to_json(
        &manifest,
        &config,
        ZerosResults {
            window: WindowRecord {
                t_min: F17(window.t_min()),
                t_max: F17(window.t_max()),
                step: F17(window.step()),
            },
            zeros: found.iter().map(Into::into).collect(),
            crosscheck,
        },
    );
    Ok(Outcome {
        stdout: emit(text, args.out.as_deref())?,
        summary,
        code,
    })
}

pub fn cmd_doubling(args: DoublingArgs) -> Result<Outcome, CliError> {
    let n_base = args.nbase as usize;
    let m = args.m as usize;
    experiments::doubling_schedule(n_base, m)?;

    let mut params = BTreeMap::new();
    params.insert("nbase".into(), n_base.to_string());
    params.insert("m".into(), m.to_string());
    let (point, provenance) = match (args.z, args.zero_index) {
        (Some(z), _) => {
            params.insert("z".into(), fmt_complex(z));
            (z, "user point".to_string())
        }
        (None, Some(index)) => {
            let (source, table) = match &args.reference {
                Some(path) => (format!("table {}", path.display()), load_table(path)?),
                None => (
                    "bundled table".to_string(),
                    zeros::parse_zero_table(csl_core::BUNDLED_ZERO_TABLE)?,
                ),
            };
            if index == 0 || index > table.len() {
                return Err(CliError::usage(format!(
                    "unknown zero index {index}; the {source} holds zeros 1..={}",
                    table.len()
                )));
            }
            params.insert("zero_index".into(), index.to_string());
            params.insert("refine".into(), args.refine.to_string());
            if let Some(path) = &args.reference {
                params.insert("reference".into(), path.display().to_string());
            }
            let t = table[index - 1];
            if args.refine {
                let rec = zeros::refine_zero(t, &EvalConfig::default())?;
                (
                    rec.rho(),
                    format!("zero_finder refinement of zero #{index} from the {source}"),
                )
            } else {
                (ComplexValue::new(0.5, t), format!("zero #{index} of the {source}"))
            }
        }
        (None, None) => return Err(CliError::usage("one of --z or --zero-index is required")),
    };
    let manifest = Manifest::new("doubling", params);
    // the experiment runs on plain sums up to the end of the schedule
    let config = EvalConfig::plain(n_base << m);

    let result = experiments::h_doubling(point, n_base, m)?;
    let record = RatioRecord::new(&result, provenance);
    let dev = result.exponent_deviation;
    let summary = vec![
        format!(
            "point {}: fitted exponent {} vs reference 1-2z = {}",
            fmt_complex(point),
            fmt_complex(result.fitted_exponent_near_reference()),
            fmt_complex(result.reference_exponent)
        ),
        format!(
            "deviation (imaginary part modulo {:.6}): {:+.3e}{:+.3e}i; tail |ratio| in [{:.12}, {:.12}]",
            EXPONENT_PERIOD,
            dev.re,
            dev.im,
            result.tail_moduli().iter().copied().fold(f64::INFINITY, f64::min),
            result.tail_moduli().iter().copied().fold(f64::NEG_INFINITY, f64::max),
        ),
        format!(
            "zeta_hat doubling exponent {}: deviation {:+.3e}{:+.3e}i from 1-z, {:+.3e}{:+.3e}i from -z",
            fmt_complex(result.zeta_hat.fitted_exponent),
            result.zeta_hat.deviation_from_stated.re,
            result.zeta_hat.deviation_from_stated.im,
            result.zeta_hat.deviation_from_leading_term.re,
            result.zeta_hat.deviation_from_leading_term.im,
        ),
    ];
    let text = report::to_json(&manifest, &config, record);
    Ok(Outcome {
        stdout: emit(text, args.out.as_deref())?,
        summary,
        code: EXIT_OK,
    })
}

pub fn power_of_two_grid(n_min: usize, n_max: usize) -> Vec<usize> {
    let mut grid = Vec::new();
    let mut n = n_min;
    while n <= n_max {
        grid.push(n);
        match n.checked_mul(2) {
            Some(next) => n = next,
            None => break,
        }
    }
    grid
}

pub fn cmd_errscan(args: ErrscanArgs) -> Result<Outcome, CliError> {
    let config = resolved_config(&args.config, false)?;
    let (n_min, n_max) = (args.nmin as usize, args.nmax as usize);
    if n_max < n_min {
        return Err(CliError::usage("--nmax must be >= --nmin"));
    }
    let grid = power_of_two_grid(n_min, n_max);
    let mut params = BTreeMap::new();
    params.insert("z".into(), fmt_complex(args.z));
    params.insert("nmin".into(), n_min.to_string());
    params.insert("nmax".into(), n_max.to_string());
    config_params(&mut params, &config);
    let manifest = Manifest::new("errscan", params);

    let result = experiments::error_scaling_scan(args.z, &grid, &config)?;
    if let Some(path) = &args.csv {
        write_file(path, &report::scaling_csv(&result))?;
    }
    let summary = vec![format!(
        "fitted slope {:.6} vs reference -Re z = {:.6} over {} of {} grid points",
        result.fitted_slope,
        result.reference_slope,
        result.domain_ok.iter().filter(|&&ok| ok).count(),
        result.n_grid.len()
    )];
    let text = report::to_json(&manifest, &config, ScalingRecord::from(&result));
    Ok(Outcome {
        stdout: emit(text, args.out.as_deref())?,
        summary,
        code: EXIT_OK,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linspace_endpoints() {
        let v = linspace(0.1, 0.9, 9);
        assert_eq!(v.len(), 9);
        assert_eq!(v[0], 0.1);
        assert_eq!(v[8], 0.9);
        assert_eq!(linspace(2.0, 3.0, 1), vec![2.0]);
    }

    #[test]
    fn grid_doubles() {
        assert_eq!(power_of_two_grid(256, 2048), vec![256, 512, 1024, 2048]);
        assert_eq!(power_of_two_grid(3, 20), vec![3, 6, 12]);
        assert!(power_of_two_grid(10, 5).is_empty());
    }

    #[test]
    fn complex_text_round_trips() {
        let z = ComplexValue::new(0.5, -14.134725142);
        assert_eq!(crate::complex_arg::parse_complex(&fmt_complex(z)), Ok(z));
    }
}
