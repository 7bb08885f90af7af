use horolab::traintrack::WeightSystem;

use super::Context;
use crate::error::CliError;
use crate::report::{real, Plot, Report, Table};

pub fn track(ctx: &mut Context) -> Result<Report, CliError> {
    ctx.float_only("track")?;
    let t = ctx.track()?;
    let q = ctx.config.ranged("params.q", 100i64, 1, 1_000_000_000)?;
    let target = match ctx.config.get("params.weights") {
        Some(entry) => Some(WeightSystem(
            entry
                .value
                .split_whitespace()
                .map(|w| w.parse::<f64>().map_err(|_| CliError::config(entry.line, "params.weights", format!("`{w}` is not a weight"))))
                .collect::<Result<_, _>>()?,
        )),
        None => t.weights().cloned(),
    };
    let approx = match &target {
        Some(w) => Some(t.rational_approximation(w, q).map_err(|e| CliError::config(ctx.config.line("params.q"), "params.q", e.to_string()))?),
        None => None,
    };
    let defects = target.as_ref().map(|w| t.switch_defects(&w.0));
    let mut table = Table::new(&["branch", "tail", "head", "length", "weight", "numerator"]);
    for b in 0..t.branch_count() {
        table.push(vec![
            b.to_string(),
            t.tail(b).to_string(),
            t.head(b).to_string(),
            real(t.lengths()[b]),
            target.as_ref().map_or(String::new(), |w| real(w.0[b])),
            approx.as_ref().map_or(String::new(), |a| a.numerators[b].to_string()),
        ]);
    }
    let mut report = Report::new(table, Plot::points(1, 4, "branch", "length"));
    report.metric("branches", t.branch_count());
    report.metric("switches", t.switches().len());
    report.metric("recurrent", t.is_recurrent());
    report.metric("carried", t.is_carried());
    report.metric(
        "max_switch_defect",
        defects.map(|d| d.into_iter().fold(0.0f64, |m, x| m.max(x.abs()))),
    );
    report.metric("denominator", approx.as_ref().map(|a| a.denominator));
    report.metric("integer_switch_defect", approx.as_ref().map(|a| t.integer_switch_defect(&a.numerators)));
    if target.is_none() {
        report.flag("no_weights");
    }
    if !t.is_recurrent() {
        report.flag("not_recurrent");
    }
    Ok(report)
}

fn length_grid(ctx: &Context, default: &[f64]) -> Result<Vec<f64>, CliError> {
    let grid = ctx.config.grid("params.lengths", Some(default.to_vec()))?;
    if grid.iter().any(|&l| !(l > 0.0 && l <= 200.0)) {
        return Err(CliError::config(ctx.config.line("params.lengths"), "params.lengths", "lengths must lie in (0, 200]"));
    }
    Ok(grid)
}

pub fn routes(ctx: &mut Context) -> Result<Report, CliError> {
    ctx.float_only("routes")?;
    let t = ctx.track()?;
    let grid = length_grid(ctx, &[2.0, 4.0, 6.0, 8.0, 10.0, 12.0])?;
    let mut table = Table::new(&["L", "count", "almost_embedded"]);
    let (mut max_count, mut max_embedded) = (0u128, 0u128);
    for &l in &grid {
        let stats = t.route_stats(l);
        max_count = max_count.max(stats.total);
        max_embedded = max_embedded.max(stats.almost_embedded);
        table.push(vec![real(l), stats.total.to_string(), stats.almost_embedded.to_string()]);
    }
    let mut plot = Plot::lines(1, 2, "L", "N(L)");
    plot.series.push((1, 3, "lines"));
    plot.logscale_y = true;
    let mut report = Report::new(table, plot);
    report.metric("lengths", grid.len());
    report.metric("max_count", max_count as u64);
    report.metric("max_almost_embedded", max_embedded as u64);
    Ok(report)
}

pub fn dimension(ctx: &mut Context) -> Result<Report, CliError> {
    ctx.float_only("dimension")?;
    let t = ctx.track()?;
    let grid = length_grid(ctx, &[10.0, 20.0, 30.0])?;
    let empty = |e: horolab::Error| CliError::config(ctx.config.line("params.lengths"), "params.lengths", e.to_string());
    let mut table = Table::new(&["L", "count", "dimension"]);
    let mut dims = Vec::with_capacity(grid.len());
    for &l in &grid {
        let d = t.dimension_estimate(l).map_err(empty)?;
        dims.push(d);
        table.push(vec![real(l), t.count_routes(l).to_string(), real(d)]);
    }
    let (growth, degree) = if grid.len() >= 2 {
        (Some(t.growth_exponent(&grid).map_err(empty)?), Some(t.polynomial_degree(&grid).map_err(empty)?))
    } else {
        (None, None)
    };
    let nonincreasing = dims.windows(2).all(|w| w[1] <= w[0]);
    let mut report = Report::new(table, Plot::lines(1, 3, "L", "ln N(L) / L"));
    report.metric("lengths", grid.len());
    report.metric("dimension_at_max", dims.last().copied());
    report.metric("growth_exponent", growth);
    report.metric("polynomial_degree", degree);
    report.metric("nonincreasing", nonincreasing);
    if !nonincreasing {
        report.flag("dimension_increases");
    }
    Ok(report)
}
