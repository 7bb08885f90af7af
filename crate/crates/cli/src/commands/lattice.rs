use horolab::fuchsian::{LatticeFilter, SurfaceGroup};
use horolab::GroupElement;

use super::Context;
use crate::error::CliError;
use crate::report::{real, Plot, Report, Table};

fn radii(ctx: &Context, key: &str, default: usize, max: usize) -> Result<Vec<usize>, CliError> {
    let Some(entry) = ctx.config.get(key) else {
        return Ok(vec![default]);
    };
    let values = entry
        .value
        .split_whitespace()
        .map(|t| t.parse::<usize>().map_err(|_| CliError::config(entry.line, key, format!("`{t}` is not a radius"))))
        .collect::<Result<Vec<usize>, _>>()?;
    if values.is_empty() {
        return Err(CliError::config(entry.line, key, "no radius given"));
    }
    if let Some(r) = values.iter().find(|&&r| r > max) {
        return Err(CliError::config(entry.line, key, format!("radius {r} exceeds the limit {max}")));
    }
    Ok(values)
}

fn filter(ctx: &Context) -> Result<LatticeFilter, CliError> {
    match ctx.config.get("params.filter") {
        None => Ok(LatticeFilter::Kernel),
        Some(e) => match e.value.as_str() {
            "kernel" => Ok(LatticeFilter::Kernel),
            "full" => Ok(LatticeFilter::Full),
            other => Err(CliError::config(e.line, "params.filter", format!("`{other}` is not `full` or `kernel`"))),
        },
    }
}

pub fn kappa(ctx: &mut Context) -> Result<Report, CliError> {
    ctx.float_only("kappa")?;
    let group = ctx.group()?;
    let radii = radii(ctx, "params.radii", 6, 10)?;
    let mut table = Table::new(&["R", "kappa", "witness", "phi", "translation_length"]);
    let mut last = None;
    for &r in &radii {
        let estimate = group
            .kappa_estimate(r)
            .map_err(|e| CliError::config(ctx.config.line("params.radii"), "params.radii", e.to_string()))?;
        table.push(vec![
            r.to_string(),
            real(estimate.kappa),
            group.format_word(&estimate.witness.letters),
            estimate.witness.phi.to_string(),
            real(estimate.witness.translation_length()),
        ]);
        last = Some(estimate);
    }
    let last = last.expect("at least one radius");
    let mut report = Report::new(table, Plot::lines(1, 2, "R", "kappa_R"));
    report.metric("kappa", last.kappa);
    report.metric("witness_phi", last.witness.phi);
    report.metric("witness_length", last.witness.len());
    report.metric("translation_length", last.witness.translation_length());
    report.metric("words_examined", last.words_examined);
    let kappas: Vec<f64> = table_column(&report.table, 1);
    if kappas.windows(2).any(|w| w[1] < w[0]) {
        report.flag("radii_not_sorted");
    }
    Ok(report)
}

fn table_column(table: &Table, col: usize) -> Vec<f64> {
    table.rows.iter().map(|r| r[col].parse().unwrap_or(f64::NAN)).collect()
}

pub fn qm(ctx: &mut Context) -> Result<Report, CliError> {
    ctx.float_only("qm")?;
    let group = ctx.group()?;
    let x = ctx.frame("input.frame", &group, "axis a1")?;
    let times = ctx.config.grid("params.times", Some((0..=40).map(|k| 0.5 * k as f64).collect()))?;
    let radius = ctx.config.ranged("params.radius", 6usize, 0, 10)?;
    let curve = group
        .qm_defect(&x, &times, radius, filter(ctx)?)
        .map_err(|e| CliError::config(ctx.config.line("params.times"), "params.times", e.to_string()))?;
    let mut table = Table::new(&["t", "defect", "flag"]);
    for p in &curve.points {
        let flag = if p.radius_limited { "radius_limited" } else { "certified" };
        table.push(vec![real(p.t), real(p.defect), flag.into()]);
    }
    let limited = curve.points.iter().filter(|p| p.radius_limited).count();
    let mut report = Report::new(table, Plot::lines(1, 2, "t", "D(t)"));
    report.metric("radius", radius);
    report.metric("sup_defect", curve.sup());
    report.metric("radius_limited_points", limited);
    report.metric("min_defect", curve.points.iter().map(|p| p.defect).fold(f64::INFINITY, f64::min));
    if limited > 0 {
        report.flag("radius_limited");
    }
    Ok(report)
}

pub fn delta_spectrum(ctx: &mut Context) -> Result<Report, CliError> {
    ctx.float_only("delta-spectrum")?;
    let group = ctx.group()?;
    let h = ctx.frame("input.basepoint", &group, "random")?;
    let radius = ctx.config.ranged("params.radius", 4usize, 1, 8)?;
    let spectrum = group.delta_spectrum(&h, radius);
    let mut table = Table::new(&["r", "word", "phi"]);
    for e in &spectrum.entries {
        table.push(vec![real(e.r), group.format_word(&e.letters), e.phi.to_string()]);
    }
    let nonnegative = spectrum.entries.iter().filter(|e| e.r >= 0.0).count();
    let mut plot = Plot::points(0, 1, "rank", "r");
    plot.series = vec![(0, 1, "points")];
    let mut report = Report::new(table, plot);
    report.metric("radius", radius);
    report.metric("entries", spectrum.entries.len());
    report.metric("omega_count", spectrum.omega_count);
    report.metric("min_r", spectrum.entries.first().map(|e| e.r));
    report.metric("max_r", spectrum.entries.last().map(|e| e.r));
    report.metric(
        "nonnegative_fraction",
        (!spectrum.entries.is_empty()).then(|| nonnegative as f64 / spectrum.entries.len() as f64),
    );
    if spectrum.omega_count > 0 {
        report.flag("omega_cell_elements");
    }
    Ok(report)
}

fn partner(ctx: &mut Context, group: &SurfaceGroup, x: &GroupElement) -> Result<GroupElement, CliError> {
    let key = "input.y";
    let base = match ctx.config.get(key) {
        Some(e) if e.value.starts_with("stable") => {
            let s: f64 = e.value["stable".len()..]
                .trim()
                .parse()
                .map_err(|_| CliError::config(e.line, key, "`stable` takes one real"))?;
            GroupElement::stable(s) * *x
        }
        _ => ctx.frame(key, group, "random")?,
    };
    match ctx.config.get("input.y_right") {
        None => Ok(base),
        Some(e) => {
            let letters = group
                .parse_word(&e.value)
                .map_err(|err| CliError::config(e.line, "input.y_right", err.to_string()))?;
            Ok(base * group.word_matrix(&letters))
        }
    }
}

pub fn proximality(ctx: &mut Context) -> Result<Report, CliError> {
    ctx.float_only("proximality")?;
    let group = ctx.group()?;
    let x = ctx.frame("input.x", &group, "random")?;
    let y = partner(ctx, &group, &x)?;
    let times = ctx.config.grid("params.times", Some((0..=20).map(|k| 0.5 * k as f64).collect()))?;
    let radius = ctx.config.ranged("params.radius", 2usize, 0, 6)?;
    let scan = group
        .proximality_scan(&x, &y, &times, radius)
        .map_err(|e| CliError::config(ctx.config.line("params.times"), "params.times", e.to_string()))?;
    let mut table = Table::new(&["t", "distance"]);
    for (t, d) in &scan.per_time {
        table.push(vec![real(*t), real(*d)]);
    }
    let mut plot = Plot::lines(1, 2, "t", "min distance");
    plot.logscale_y = true;
    let mut report = Report::new(table, plot);
    report.metric("inf_distance", scan.inf_distance);
    report.metric("time", scan.time);
    report.metric("ell", scan.ell);
    report.metric("witness_length", scan.witness.len());
    report.metric("omega_samples", scan.omega_samples);
    if scan.omega_samples > 0 {
        report.flag("omega_cell_samples");
    }
    Ok(report)
}
