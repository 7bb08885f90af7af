//! Run artifacts: a CSV table, a JSON summary and an optional gnuplot script.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

use crate::error::CliError;

/// Fixed-width scientific notation with 17 significant digits.
pub fn real(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

#[derive(Clone, Debug)]
pub struct Plot {
    pub xlabel: String,
    pub ylabel: String,
    /// `(x column, y column, style)`, 1-based.
    pub series: Vec<(usize, usize, &'static str)>,
    pub logscale_y: bool,
}

impl Plot {
    pub fn lines(x: usize, y: usize, xlabel: &str, ylabel: &str) -> Self {
        Self {
            xlabel: xlabel.into(),
            ylabel: ylabel.into(),
            series: vec![(x, y, "lines")],
            logscale_y: false,
        }
    }

    pub fn points(x: usize, y: usize, xlabel: &str, ylabel: &str) -> Self {
        Self {
            series: vec![(x, y, "points")],
            ..Self::lines(x, y, xlabel, ylabel)
        }
    }

    fn script(&self, csv_name: &str, title: &str) -> String {
        let mut out = String::new();
        out.push_str("set datafile separator ','\n");
        out.push_str("set key autotitle columnhead\n");
        out.push_str(&format!("set title '{title}'\n"));
        out.push_str(&format!("set xlabel '{}'\n", self.xlabel));
        out.push_str(&format!("set ylabel '{}'\n", self.ylabel));
        if self.logscale_y {
            out.push_str("set logscale y\n");
        }
        let series: Vec<String> = self
            .series
            .iter()
            .map(|(x, y, style)| format!("'{csv_name}' using {x}:{y} with {style}"))
            .collect();
        out.push_str(&format!("plot {}\n", series.join(", \\\n     ")));
        out
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub table: Table,
    pub metrics: Map<String, Value>,
    pub flags: Vec<String>,
    pub plot: Plot,
}

impl Report {
    pub fn new(table: Table, plot: Plot) -> Self {
        Self {
            table,
            metrics: Map::new(),
            flags: Vec::new(),
            plot,
        }
    }

    pub fn metric(&mut self, key: &str, value: impl Into<Value>) {
        self.metrics.insert(key.to_string(), value.into());
    }

    pub fn flag(&mut self, flag: impl Into<String>) {
        let flag = flag.into();
        if !self.flags.contains(&flag) {
            self.flags.push(flag);
        }
    }
}

pub fn summary(subcommand: &str, echo: &BTreeMap<String, String>, report: &Report, runtime_ms: u128) -> Value {
    json!({
        "subcommand": subcommand,
        "config_echo": echo,
        "metrics": report.metrics,
        "flags": report.flags,
        "runtime_ms": runtime_ms as u64,
    })
}

fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Writes `<name>.csv`, `<name>.json` and, when asked, `<name>.plt` into `dir`.
pub fn write_artifacts(dir: &Path, name: &str, report: &Report, summary: &Value, plot: bool) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(dir).map_err(io_error(dir))?;
    let csv_path = dir.join(format!("{name}.csv"));
    let mut writer = csv::Writer::from_path(&csv_path).map_err(|e| CliError::Io {
        path: csv_path.clone(),
        source: e.into(),
    })?;
    let to_io = |e: csv::Error| CliError::Io {
        path: csv_path.clone(),
        source: e.into(),
    };
    writer.write_record(&report.table.header).map_err(to_io)?;
    for row in &report.table.rows {
        writer.write_record(row).map_err(to_io)?;
    }
    writer.flush().map_err(io_error(&csv_path))?;
    let json_path = dir.join(format!("{name}.json"));
    let text = serde_json::to_string_pretty(summary).expect("summary is plain JSON");
    fs::write(&json_path, text + "\n").map_err(io_error(&json_path))?;
    let mut written = vec![csv_path, json_path];
    if plot {
        let plt_path = dir.join(format!("{name}.plt"));
        fs::write(&plt_path, report.plot.script(&format!("{name}.csv"), name)).map_err(io_error(&plt_path))?;
        written.push(plt_path);
    }
    Ok(written)
}
