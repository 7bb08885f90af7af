use std::collections::BTreeSet;

use horolab::iet::{uniform_theta_grid, weak_mix_statistic, KeaneVerdict};
use horolab::{Rational, Scalar};

use super::{Context, Mode};
use crate::error::CliError;
use crate::report::{real, Plot, Report, Table};

pub fn iet_orbit(ctx: &mut Context) -> Result<Report, CliError> {
    match ctx.mode {
        Mode::Float => orbit_in::<f64>(ctx),
        Mode::Exact => orbit_in::<Rational>(ctx),
    }
}

fn orbit_in<S: Scalar>(ctx: &mut Context) -> Result<Report, CliError> {
    let iet = ctx.iet::<S>()?;
    let x0: S = ctx.scalar("params.x0", "0")?;
    let steps = ctx.config.ranged("params.steps", 1000usize, 0, 10_000_000)?;
    let orbit = iet
        .orbit(&x0, steps)
        .map_err(|e| CliError::config(ctx.config.line("params.x0"), "params.x0", e.to_string()))?;
    let exact = S::EXACT;
    let mut header = vec!["n", "x", "interval"];
    if exact {
        header.push("x_exact");
    }
    let mut table = Table::new(&header);
    let mut visited = BTreeSet::new();
    for (n, x) in orbit.iter().enumerate() {
        let interval = iet.interval_of(x)? + 1;
        visited.insert(interval);
        let mut row = vec![n.to_string(), real(x.to_f64()), interval.to_string()];
        if exact {
            row.push(x.to_record());
        }
        table.push(row);
    }
    let mut report = Report::new(table, Plot::points(1, 2, "n", "x"));
    report.metric("steps", steps);
    report.metric("final_x", orbit.last().map_or(0.0, Scalar::to_f64));
    report.metric("total_length", iet.total().to_f64());
    report.metric("intervals_visited", visited.len());
    Ok(report)
}

pub fn keane(ctx: &mut Context) -> Result<Report, CliError> {
    let certify = ctx.config.flag("params.certify")?;
    if certify && ctx.mode == Mode::Float {
        return Err(CliError::Mode(
            "collision certification needs exact arithmetic; rerun with --mode=exact".into(),
        ));
    }
    let depth = ctx.config.ranged("params.depth", 10_000usize, 1, 10_000_000)?;
    let verdict = match ctx.mode {
        Mode::Float => ctx.iet::<f64>()?.keane_check(depth),
        Mode::Exact => ctx.iet::<Rational>()?.keane_check(depth),
    };
    let mut table = Table::new(&["verdict", "step", "from", "hits", "exact"]);
    let mut report_row = |verdict: &str, step: Option<usize>, from: Option<usize>, hits: Option<usize>, exact: bool| {
        let cell = |v: Option<usize>| v.map_or(String::new(), |v| v.to_string());
        table.push(vec![verdict.into(), cell(step), cell(from), cell(hits), exact.to_string()]);
    };
    let (passed, step, from, hits, exact) = match verdict {
        KeaneVerdict::Pass { .. } => (true, None, None, None, false),
        KeaneVerdict::Collision { step, from, hits, exact } => (false, Some(step), Some(from), Some(hits), exact),
        KeaneVerdict::Reducible { prefix } => (false, None, Some(prefix), None, true),
    };
    let label = match verdict {
        KeaneVerdict::Pass { .. } => "pass",
        KeaneVerdict::Collision { .. } => "collision",
        KeaneVerdict::Reducible { .. } => "reducible",
    };
    report_row(label, step, from, hits, exact);
    let mut report = Report::new(table, Plot::points(2, 4, "step", "hit discontinuity"));
    report.metric("depth", depth);
    report.metric("passed", passed);
    report.metric("collision_step", step);
    report.metric("collision_from", from);
    report.metric("collision_hits", hits);
    report.metric("exact", exact);
    match verdict {
        KeaneVerdict::Collision { exact: false, .. } => report.flag("collision_within_tolerance"),
        KeaneVerdict::Collision { exact: true, .. } => report.flag("collision_certified"),
        KeaneVerdict::Reducible { .. } => report.flag("reducible"),
        KeaneVerdict::Pass { .. } => {}
    }
    Ok(report)
}

pub fn weakmix(ctx: &mut Context) -> Result<Report, CliError> {
    ctx.float_only("weakmix")?;
    let iet = ctx.iet::<f64>()?;
    let samples = ctx.config.ranged("params.samples", 100_000usize, 1, 100_000_000)?;
    let thetas = if ctx.config.has("params.thetas") {
        ctx.config.grid("params.thetas", None)?
    } else {
        uniform_theta_grid(ctx.config.ranged("params.theta_grid", 10_000usize, 1, 1_000_000)?)
    };
    let threshold = ctx.config.ranged("params.threshold", 0.2f64, 0.0, 1.0)?;
    let x0 = ctx.config.parsed_or("params.x0", 0.0f64)?;
    let spectrum = weak_mix_statistic(&iet, &thetas, samples, x0)
        .map_err(|e| CliError::config(ctx.config.line("params.x0"), "params.x0", e.to_string()))?;
    let mut table = Table::new(&["theta", "statistic"]);
    for (t, v) in spectrum.thetas.iter().zip(&spectrum.values) {
        table.push(vec![real(*t), real(*v)]);
    }
    let mut report = Report::new(table, Plot::lines(1, 2, "theta", "S(theta)"));
    report.metric("samples", samples);
    report.metric("grid_points", thetas.len());
    report.metric("max_statistic", spectrum.max);
    report.metric("argmax_theta", spectrum.argmax);
    if spectrum.max > threshold {
        report.flag("max_above_threshold");
    }
    Ok(report)
}
