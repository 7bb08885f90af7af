use horolab::suspension::{BusemannValue, CoverPoint, Direction, FlatRay, FlowOutcome};
use horolab::{Rational, Scalar, TranslationSurface};

use super::{Context, Mode};
use crate::error::CliError;
use crate::report::{real, Plot, Report, Table};

fn surface<S: Scalar>(ctx: &Context) -> Result<TranslationSurface<S>, CliError> {
    let iet = ctx.iet::<S>()?;
    let roof: S = ctx.scalar("input.roof", "1")?;
    if !roof.is_positive_strict() {
        return Err(CliError::config(ctx.config.line("input.roof"), "input.roof", "roof must be positive"));
    }
    TranslationSurface::suspend(iet, roof).map_err(|e| {
        let key = if ctx.config.has("input.iet") { "input.iet" } else { "input.permutation" };
        CliError::config(ctx.config.line(key), key, e.to_string())
    })
}

pub fn suspend(ctx: &mut Context) -> Result<Report, CliError> {
    match ctx.mode {
        Mode::Float => suspend_in::<f64>(ctx),
        Mode::Exact => suspend_in::<Rational>(ctx),
    }
}

fn suspend_in<S: Scalar>(ctx: &mut Context) -> Result<Report, CliError> {
    let s = surface::<S>(ctx)?;
    let mut table = Table::new(&["class", "angle_multiple", "singular", "x", "y", "members"]);
    let mut points: Vec<_> = s.cone_points().into_iter().chain(s.marked_points()).collect();
    points.sort_by_key(|p| p.class);
    for p in &points {
        let members: Vec<String> = s.vertex_classes()[p.class].members.iter().map(ToString::to_string).collect();
        table.push(vec![
            p.class.to_string(),
            p.angle_multiple.to_string(),
            (p.angle_multiple != 1).to_string(),
            real(p.x.to_f64()),
            real(p.y.to_f64()),
            members.join(" "),
        ]);
    }
    let mut report = Report::new(table, Plot::points(5, 2, "height on the left side", "cone angle / 2pi"));
    report.metric("genus", s.genus());
    report.metric("euler_characteristic", s.euler_characteristic());
    report.metric("cone_points", s.cone_points().len());
    report.metric("marked_points", s.marked_points().len());
    report.metric("gauss_bonnet_excess", s.gauss_bonnet_excess());
    report.metric("vertex_classes", s.vertex_classes().len());
    if s.gauss_bonnet_excess() != 2 * i64::from(s.genus()) - 2 {
        report.flag("gauss_bonnet_violated");
    }
    Ok(report)
}

fn start_point<S: Scalar>(ctx: &Context, s: &TranslationSurface<S>) -> Result<CoverPoint<S>, CliError> {
    let entry = ctx.config.require("params.start")?;
    let bad = |msg: String| CliError::config(entry.line, "params.start", msg);
    let tokens: Vec<&str> = entry.value.split_whitespace().collect();
    let [sheet, x, y] = tokens[..] else {
        return Err(bad("expected `sheet x y`".into()));
    };
    let sheet: i64 = sheet.parse().map_err(|_| bad(format!("`{sheet}` is not a sheet index")))?;
    let coord = |t: &str| S::parse(t).ok_or_else(|| bad(format!("`{t}` is not a coordinate")));
    s.point(sheet, coord(x)?, coord(y)?).map_err(|e| bad(e.to_string()))
}

/// Directions from `params.theta`/`params.thetas` (float) or Pythagorean triples `a b h; ...`.
fn directions<S: Scalar>(ctx: &Context, single: bool) -> Result<Vec<(f64, Direction<S>)>, CliError> {
    let key = if single { "params.direction" } else { "params.directions" };
    if let Some(entry) = ctx.config.get(key) {
        return entry
            .value
            .split(';')
            .map(|triple| {
                let bad = |msg: String| CliError::config(entry.line, key, msg);
                let nums = triple
                    .split_whitespace()
                    .map(|t| t.parse::<i64>().map_err(|_| bad(format!("`{t}` is not an integer"))))
                    .collect::<Result<Vec<i64>, _>>()?;
                let [a, b, h] = nums[..] else {
                    return Err(bad(format!("`{}` is not a triple `a b h`", triple.trim())));
                };
                let d = Direction::<S>::pythagorean(a, b, h).map_err(|e| bad(e.to_string()))?;
                Ok(((b as f64).atan2(a as f64), d))
            })
            .collect();
    }
    let angle_key = if single { "params.theta" } else { "params.thetas" };
    if ctx.mode == Mode::Exact {
        if ctx.config.has(angle_key) {
            return Err(CliError::Mode(format!(
                "`{angle_key}` gives an irrational direction; use `{key} = a b h` in exact mode"
            )));
        }
        return Err(CliError::config(0, key, "required in exact mode"));
    }
    let default = if single { vec![0.0] } else { vec![0.0, 0.25, 1.0471975511965976] };
    Ok(ctx
        .config
        .grid(angle_key, Some(default))?
        .into_iter()
        .map(|theta| {
            let component = |v: f64| S::from_f64(v).expect("grid values are finite");
            (theta, Direction::new(component(theta.cos()), component(theta.sin())).expect("unit vector"))
        })
        .collect())
}

fn times<S: Scalar>(ctx: &Context) -> Result<Vec<S>, CliError> {
    let key = "params.times";
    let entry = ctx.config.require(key)?;
    let values: Vec<S> = if entry.value.contains(':') {
        ctx.float_only("a `start:stop:count` time grid")?;
        ctx.config
            .grid(key, None)?
            .into_iter()
            .map(|t| S::from_f64(t).expect("grid values are finite"))
            .collect()
    } else {
        entry
            .value
            .split_whitespace()
            .map(|t| S::parse(t).ok_or_else(|| CliError::config(entry.line, key, format!("`{t}` is not a time"))))
            .collect::<Result<_, _>>()?
    };
    if values.iter().any(|t| *t < S::zero()) {
        return Err(CliError::config(entry.line, key, "times must be nonnegative"));
    }
    Ok(values)
}

pub fn flow(ctx: &mut Context) -> Result<Report, CliError> {
    match ctx.mode {
        Mode::Float => flow_in::<f64>(ctx),
        Mode::Exact => flow_in::<Rational>(ctx),
    }
}

fn flow_in<S: Scalar>(ctx: &mut Context) -> Result<Report, CliError> {
    let s = surface::<S>(ctx)?;
    let start = start_point(ctx, &s)?;
    let (_, direction) = directions::<S>(ctx, true)?.remove(0);
    let times = times::<S>(ctx)?;
    let mut header = vec!["t", "status", "sheet", "x", "y", "tau", "hit_time"];
    if S::EXACT {
        header.extend(["x_exact", "y_exact"]);
    }
    let mut table = Table::new(&header);
    let (mut arrived, mut final_sheet, mut final_tau, mut first_hit) = (0usize, start.sheet, start.tau(s.roof()).to_f64(), None);
    for t in &times {
        let outcome = s
            .straight_flow(&start, &direction, t)
            .map_err(|e| CliError::config(ctx.config.line("params.start"), "params.start", e.to_string()))?;
        let (status, point, hit) = match outcome {
            FlowOutcome::Arrived(p) => ("arrived", p, None),
            FlowOutcome::SingularityHit { time, at } => ("singularity", at, Some(time.to_f64())),
        };
        let mut row = vec![
            real(t.to_f64()),
            status.to_string(),
            point.sheet.to_string(),
            real(point.x.to_f64()),
            real(point.y.to_f64()),
            real(point.tau(s.roof()).to_f64()),
            hit.map_or(String::new(), real),
        ];
        if S::EXACT {
            row.extend([point.x.to_record(), point.y.to_record()]);
        }
        table.push(row);
        match hit {
            None => {
                arrived += 1;
                final_sheet = point.sheet;
                final_tau = point.tau(s.roof()).to_f64();
            }
            Some(h) => {
                first_hit.get_or_insert(h);
            }
        }
    }
    let mut report = Report::new(table, Plot::lines(1, 6, "t", "tau"));
    report.metric("steps", times.len());
    report.metric("arrived", arrived);
    report.metric("final_sheet", final_sheet);
    report.metric("final_tau", final_tau);
    report.metric("hit_time", first_hit);
    if first_hit.is_some() {
        report.flag("singularity_hit");
    }
    Ok(report)
}

pub fn beta(ctx: &mut Context) -> Result<Report, CliError> {
    match ctx.mode {
        Mode::Float => beta_in::<f64>(ctx),
        Mode::Exact => beta_in::<Rational>(ctx),
    }
}

fn describe<S: Scalar>(value: &BusemannValue<S>) -> (&'static str, f64) {
    match value {
        BusemannValue::Finite(v) => ("finite", v.to_f64()),
        BusemannValue::NegInfinity { decay_rate } => ("neg_infinity", *decay_rate),
        BusemannValue::PosInfinity { growth_rate } => ("pos_infinity", *growth_rate),
        BusemannValue::Separatrix { time } => ("separatrix", time.to_f64()),
    }
}

fn beta_in<S: Scalar>(ctx: &mut Context) -> Result<Report, CliError> {
    let s = surface::<S>(ctx)?;
    let start = start_point(ctx, &s)?;
    let depth = ctx.config.ranged("params.depth", horolab::suspension::DEFAULT_LEAF_DEPTH, 1, 10_000_000)?;
    let rays = directions::<S>(ctx, false)?;
    let mut table = Table::new(&["theta", "plus_kind", "plus_value", "minus_kind", "minus_value"]);
    let (mut finite, mut neg, mut separatrix) = (0usize, 0usize, 0usize);
    for (theta, direction) in &rays {
        let ray = FlatRay {
            start: start.clone(),
            direction: direction.clone(),
        };
        let start_error = |e: horolab::Error| CliError::config(ctx.config.line("params.start"), "params.start", e.to_string());
        let plus = s.beta_plus_with_depth(&ray, depth).map_err(start_error)?;
        let minus = s.beta_minus_with_depth(&ray, depth).map_err(start_error)?;
        let (pk, pv) = describe(&plus);
        let (mk, mv) = describe(&minus);
        match pk {
            "finite" => finite += 1,
            "neg_infinity" => neg += 1,
            "separatrix" => separatrix += 1,
            _ => {}
        }
        table.push(vec![real(*theta), pk.into(), real(pv), mk.into(), real(mv)]);
    }
    let mut report = Report::new(table, Plot::points(1, 3, "theta", "beta+ value or decay rate"));
    report.metric("rays", rays.len());
    report.metric("finite", finite);
    report.metric("neg_infinity", neg);
    report.metric("separatrix", separatrix);
    if separatrix > 0 {
        report.flag("separatrix_ray");
    }
    Ok(report)
}
