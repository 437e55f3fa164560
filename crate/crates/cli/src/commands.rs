//! The four subcommands. Each consumes a parsed config, re-validates it,
//! runs the computation, and renders a deterministic CSV (plus a text
//! summary for the horseshoe analysis).

use crate::config::{
    read_axis, read_measure, read_metric, read_rates, read_system, GridAxis, RawConfig,
    SystemSpec,
};
use crate::csvfmt::{self, Csv};
use crate::CliError;
use thermo_neutral_core::verify::estimate_neutralized_entropy;
use thermo_neutral_core::{mmrne, SearchOptions};

/// Parameter-grid sweep of the pressure surface: one row per `(p, q)`
/// with the equilibrium data and the central-difference residuals of the
/// derivative identities.
pub fn cmd_pressure(mut raw: RawConfig) -> Result<String, CliError> {
    let system = read_system(&mut raw)?;
    let p_axis = read_axis(
        &mut raw,
        "grid.p",
        GridAxis {
            min: -2.0,
            max: 2.0,
            count: 5,
        },
    )?;
    let q_axis = read_axis(
        &mut raw,
        "grid.q",
        GridAxis {
            min: -2.0,
            max: 2.0,
            count: 5,
        },
    )?;
    let eigen_tol = raw.f64_or("tol.eigen", 1e-13)?;
    let step = raw.f64_or("deriv.step", 1e-5)?;
    raw.finish()?;

    let sys = system.two_potential_system()?.with_eigen_tol(eigen_tol);
    let mut csv = Csv::new(&[
        "p",
        "q",
        "Q",
        "lambda_u",
        "lambda_s",
        "h",
        "d_u",
        "d_s",
        "dim",
        "deriv_resid_u",
        "deriv_resid_s",
    ]);
    for p in p_axis.points() {
        for q in q_axis.points() {
            let pt = sys.eval_point(p, q)?;
            let (ru, rs) = sys.derivative_check(p, q, step)?;
            csv.row(&[
                csvfmt::float(p),
                csvfmt::float(q),
                csvfmt::float(pt.pressure),
                csvfmt::float(pt.lambda_u),
                csvfmt::float(pt.lambda_s),
                csvfmt::float(pt.h),
                csvfmt::float(pt.d_u),
                csvfmt::float(pt.d_s),
                csvfmt::float(pt.dim),
                csvfmt::float(ru),
                csvfmt::float(rs),
            ]);
        }
    }
    Ok(csv.finish())
}

/// Maximizer sweep over neutralization rates. For horseshoe systems the
/// Bernoulli-family maximizers are reported alongside; their count above
/// one signals coexisting maximizers.
pub fn cmd_mmrne(mut raw: RawConfig) -> Result<String, CliError> {
    let system = read_system(&mut raw)?;
    let rates = read_rates(&mut raw, &[0.0, 0.5, 1.0, 3.0])?;
    let box_halfwidth = raw.f64_or("search.box", 5.0)?;
    let param_tol = raw.f64_or("tol.search", 1e-8)?;
    let eigen_tol = raw.f64_or("tol.eigen", 1e-13)?;
    let grid_n = raw.usize_or("bernoulli.grid", 20001)?;
    raw.finish()?;

    let sys = system.two_potential_system()?.with_eigen_tol(eigen_tol);
    let opts = SearchOptions {
        box_halfwidth,
        param_tol,
        ..SearchOptions::default()
    };
    let records = mmrne::sweep(&sys, &rates, &opts)?;

    let mut csv = Csv::new(&[
        "r",
        "argmax_p",
        "argmax_q",
        "hr_max",
        "h",
        "dim",
        "edge_hit",
        "bernoulli_maxima",
        "bernoulli_p_star",
        "bernoulli_hr_star",
    ]);
    for rec in &records {
        let (count, p_star, hr_star) = match &system {
            SystemSpec::Horseshoe(hs) => {
                let maxima = hs.find_bernoulli_maximizers(rec.r, grid_n);
                let best = maxima
                    .iter()
                    .map(|s| s.hr)
                    .fold(f64::NEG_INFINITY, f64::max);
                let smallest = maxima.iter().map(|s| s.p).fold(f64::INFINITY, f64::min);
                (
                    maxima.len().to_string(),
                    csvfmt::float(smallest),
                    csvfmt::float(best),
                )
            }
            SystemSpec::Shift { .. } => (String::new(), String::new(), String::new()),
        };
        csv.row(&[
            csvfmt::float(rec.r),
            csvfmt::float(rec.argmax.0),
            csvfmt::float(rec.argmax.1),
            csvfmt::float(rec.hr_max),
            csvfmt::float(rec.h),
            csvfmt::float(rec.dim),
            csvfmt::flag(rec.edge_hit).to_string(),
            count,
            p_star,
            hr_star,
        ]);
    }
    Ok(csv.finish())
}

/// Sampled exact-cylinder verification of the neutralized entropy
/// formula: one row per rate.
pub fn cmd_verify(mut raw: RawConfig, seed_override: Option<u64>) -> Result<String, CliError> {
    let system = read_system(&mut raw)?;
    let sft = system.sft();
    let metric = read_metric(&mut raw)?;
    let rates = read_rates(&mut raw, &[1.0])?;
    let n = raw.usize_or("n", 400)?;
    let samples = raw.usize_or("samples", 200)?;
    let seed = raw.u64_or("seed", 0)?;
    let eigen_tol = raw.f64_or("tol.eigen", 1e-13)?;
    let measure = read_measure(&mut raw, &sft, eigen_tol)?;
    raw.finish()?;
    if n == 0 || samples == 0 {
        return Err(CliError::Config(
            "`n` and `samples` must be positive".to_string(),
        ));
    }
    let seed = seed_override.unwrap_or(seed);

    let mut csv = Csv::new(&["r", "theta", "n", "samples", "mean", "stddev", "predicted"]);
    for &r in &rates {
        let est = estimate_neutralized_entropy(&measure, &metric, r, n, samples, seed)?;
        csv.row(&[
            csvfmt::float(est.r),
            csvfmt::float(est.theta),
            est.n.to_string(),
            est.samples.to_string(),
            csvfmt::float(est.mean),
            csvfmt::float(est.stddev),
            csvfmt::float(est.predicted),
        ]);
    }
    Ok(csv.finish())
}

/// Bernoulli-family analysis of a horseshoe: a weight grid of the closed
/// forms as CSV, plus a summary with the derivatives at the symmetric
/// weight, the maximizers, and the critical-rate scan.
pub fn cmd_horseshoe(mut raw: RawConfig) -> Result<(String, String), CliError> {
    let system = read_system(&mut raw)?;
    let SystemSpec::Horseshoe(hs) = system else {
        return Err(CliError::Config(
            "the horseshoe command requires system.kind = horseshoe".to_string(),
        ));
    };
    let rates = read_rates(&mut raw, &[3.0])?;
    let r = *rates.last().unwrap();
    let grid_rows = raw.usize_or("grid.p.count", 201)?;
    let grid_n = raw.usize_or("bernoulli.grid", 20001)?;
    let scan_max = raw.f64_or("scan.r.max", r.max(3.0))?;
    raw.finish()?;
    if grid_rows < 2 {
        return Err(CliError::Config("`grid.p.count` must be at least 2".to_string()));
    }

    let mut csv = Csv::new(&["p", "h", "lambda1", "lambda2", "dim", "hr"]);
    for i in 0..grid_rows {
        let p = i as f64 / (grid_rows - 1) as f64;
        let s = hs.bernoulli_stats(p, r);
        csv.row(&[
            csvfmt::float(s.p),
            csvfmt::float(s.h),
            csvfmt::float(s.lambda1),
            csvfmt::float(s.lambda2),
            csvfmt::float(s.dim),
            csvfmt::float(s.hr),
        ]);
    }

    let mut summary = String::new();
    summary.push_str(&format!(
        "horseshoe eta1 = {}, eta2 = {}, r = {}\n",
        csvfmt::float(hs.eta1()),
        csvfmt::float(hs.eta2()),
        csvfmt::float(r)
    ));
    let (first, second) = hs.hr_derivatives_at_half(r);
    summary.push_str(&format!(
        "derivative at p = 1/2: {}\n",
        csvfmt::float(first)
    ));
    summary.push_str(&format!(
        "second derivative at p = 1/2 (closed form): {}\n",
        csvfmt::float(second)
    ));
    let step = 1e-4;
    let f = |p: f64| hs.bernoulli_stats(p, r).hr;
    let fd = (-f(0.5 - 2.0 * step) + 16.0 * f(0.5 - step) - 30.0 * f(0.5)
        + 16.0 * f(0.5 + step)
        - f(0.5 + 2.0 * step))
        / (12.0 * step * step);
    summary.push_str(&format!(
        "second derivative at p = 1/2 (finite difference): {}\n",
        csvfmt::float(fd)
    ));
    let maxima = hs.find_bernoulli_maximizers(r, grid_n);
    summary.push_str(&format!("maximizers: {}\n", maxima.len()));
    for m in &maxima {
        summary.push_str(&format!(
            "  p = {}, hr = {}\n",
            csvfmt::float(m.p),
            csvfmt::float(m.hr)
        ));
    }
    summary.push_str(&format!(
        "hr at p = 1/2: {}\n",
        csvfmt::float(hs.bernoulli_stats(0.5, r).hr)
    ));
    match hs.critical_r_scan(scan_max) {
        Some(rc) => {
            let below = hs.hr_derivatives_at_half((rc - 1e-3).max(0.0)).1;
            let above = hs.hr_derivatives_at_half(rc + 1e-3).1;
            summary.push_str(&format!(
                "critical r: {} (second derivative {} just below, {} just above)\n",
                csvfmt::float(rc),
                csvfmt::float(below),
                csvfmt::float(above)
            ));
        }
        None => {
            summary.push_str(&format!(
                "critical r: none in (0, {}]\n",
                csvfmt::float(scan_max)
            ));
        }
    }
    Ok((csv.finish(), summary))
}
