//! Sectioned `key = value` experiment configs.
//!
//! ```text
//! # comment
//! [input]
//! iet = 4; 1 1.414 1.732 2.236; 4 3 2 1
//! [params]
//! depth = 10000
//! ```
//!
//! Keys are addressed as `section.key`. Every value remembers its line so
//! errors can point back at it.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Display;
use std::str::FromStr;

use crate::error::CliError;

pub const SECTIONS: [&str; 4] = ["input", "params", "output", "run"];

#[derive(Clone, Debug, PartialEq)]
pub struct Entry {
    pub value: String,
    pub line: usize,
}

#[derive(Debug, Default)]
pub struct Config {
    entries: BTreeMap<String, Entry>,
    used: RefCell<BTreeSet<String>>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut entries = BTreeMap::new();
        let mut section: Option<String> = None;
        for (index, raw) in text.lines().enumerate() {
            let line = index + 1;
            let content = raw.split_once('#').map_or(raw, |(before, _)| before).trim();
            if content.is_empty() {
                continue;
            }
            if let Some(name) = content.strip_prefix('[') {
                let name = name
                    .strip_suffix(']')
                    .ok_or_else(|| CliError::config(line, "section", format!("unterminated header `{content}`")))?
                    .trim();
                if !SECTIONS.contains(&name) {
                    return Err(CliError::config(
                        line,
                        "section",
                        format!("unknown section `{name}`, expected one of {}", SECTIONS.join(", ")),
                    ));
                }
                section = Some(name.to_string());
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| CliError::config(line, "entry", format!("expected `key = value`, found `{content}`")))?;
            let key = key.trim();
            if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(CliError::config(line, "entry", format!("invalid key `{key}`")));
            }
            let section = section
                .as_deref()
                .ok_or_else(|| CliError::config(line, key, "entry appears before any section header"))?;
            let full = format!("{section}.{key}");
            let entry = Entry {
                value: value.trim().to_string(),
                line,
            };
            if let Some(previous) = entries.insert(full.clone(), entry) {
                return Err(CliError::config(line, &full, format!("already set on line {}", previous.line)));
            }
        }
        Ok(Self {
            entries,
            used: RefCell::default(),
        })
    }

    pub fn get(&self, key: &str) -> Option<&Entry> {
        let entry = self.entries.get(key)?;
        self.used.borrow_mut().insert(key.to_string());
        Some(entry)
    }

    pub fn has(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    pub fn require(&self, key: &str) -> Result<&Entry, CliError> {
        self.get(key)
            .ok_or_else(|| CliError::config(0, key, "required but missing"))
    }

    /// Line number of `key`, or 0 when absent.
    pub fn line(&self, key: &str) -> usize {
        self.entries.get(key).map_or(0, |e| e.line)
    }

    pub fn parsed<T>(&self, key: &str) -> Result<Option<T>, CliError>
    where
        T: FromStr,
        T::Err: Display,
    {
        self.get(key)
            .map(|e| {
                e.value
                    .parse::<T>()
                    .map_err(|err| CliError::config(e.line, key, format!("`{}`: {err}", e.value)))
            })
            .transpose()
    }

    pub fn parsed_or<T>(&self, key: &str, default: T) -> Result<T, CliError>
    where
        T: FromStr,
        T::Err: Display,
    {
        Ok(self.parsed(key)?.unwrap_or(default))
    }

    /// Parses `key` and checks it lies in `[lo, hi]`.
    pub fn ranged<T>(&self, key: &str, default: T, lo: T, hi: T) -> Result<T, CliError>
    where
        T: FromStr + PartialOrd + Display + Copy,
        T::Err: Display,
    {
        let value = self.parsed_or(key, default)?;
        if !(lo <= value && value <= hi) {
            return Err(CliError::config(
                self.line(key),
                key,
                format!("{value} is outside the allowed range [{lo}, {hi}]"),
            ));
        }
        Ok(value)
    }

    pub fn flag(&self, key: &str) -> Result<bool, CliError> {
        match self.get(key) {
            None => Ok(false),
            Some(e) => match e.value.as_str() {
                "true" | "yes" | "1" => Ok(true),
                "false" | "no" | "0" => Ok(false),
                other => Err(CliError::config(e.line, key, format!("`{other}` is not a boolean"))),
            },
        }
    }

    /// Whitespace-separated reals, or `start:stop:count` for an inclusive uniform grid.
    pub fn grid(&self, key: &str, default: Option<Vec<f64>>) -> Result<Vec<f64>, CliError> {
        let Some(entry) = self.get(key) else {
            return default.ok_or_else(|| CliError::config(0, key, "required but missing"));
        };
        let bad = |msg: String| CliError::config(entry.line, key, msg);
        let values = if let Some((start, rest)) = entry.value.split_once(':') {
            let (stop, count) = rest
                .split_once(':')
                .ok_or_else(|| bad("expected `start:stop:count`".into()))?;
            let number = |t: &str| t.trim().parse::<f64>().map_err(|_| bad(format!("`{t}` is not a number")));
            let (start, stop) = (number(start)?, number(stop)?);
            let count: usize = count
                .trim()
                .parse()
                .map_err(|_| bad(format!("`{count}` is not a count")))?;
            if count < 2 {
                return Err(bad("a range needs at least two points".into()));
            }
            (0..count)
                .map(|k| start + (stop - start) * k as f64 / (count - 1) as f64)
                .collect()
        } else {
            entry
                .value
                .split_whitespace()
                .map(|t| t.parse::<f64>().map_err(|_| bad(format!("`{t}` is not a number"))))
                .collect::<Result<Vec<f64>, _>>()?
        };
        if values.is_empty() {
            return Err(bad("grid is empty".into()));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(bad(format!("{v} is not finite")));
        }
        Ok(values)
    }

    /// Every entry as `section.key -> value`.
    pub fn echo(&self) -> BTreeMap<String, String> {
        self.entries
            .iter()
            .map(|(k, e)| (k.clone(), e.value.clone()))
            .collect()
    }

    pub fn unused(&self) -> Vec<String> {
        let used = self.used.borrow();
        self.entries
            .keys()
            .filter(|k| !used.contains(*k))
            .cloned()
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sections_and_comments() {
        let c = Config::parse("# top\n[input]\niet = 2; 1 2; 2 1  # swap\n\n[params]\ndepth=5\n").unwrap();
        assert_eq!(c.get("input.iet").unwrap().value, "2; 1 2; 2 1");
        assert_eq!(c.parsed::<usize>("params.depth").unwrap(), Some(5));
        assert_eq!(c.line("params.depth"), 6);
    }

    #[test]
    fn errors_carry_lines() {
        let err = Config::parse("[input]\nnonsense\n").unwrap_err();
        assert_eq!(err.to_string(), "line 2: field `entry`: expected `key = value`, found `nonsense`");
        assert!(Config::parse("depth = 3\n").is_err());
        assert!(Config::parse("[inputs]\n").is_err());
        assert!(Config::parse("[params]\na = 1\na = 2\n").is_err());
        let c = Config::parse("[params]\ndepth = -3\n").unwrap();
        let err = c.parsed::<usize>("params.depth").unwrap_err();
        assert!(err.to_string().starts_with("line 2: field `params.depth`"));
    }

    #[test]
    fn grids() {
        let c = Config::parse("[params]\na = 0:1:5\nb = 1 2.5 4\nc = 1:2\n").unwrap();
        assert_eq!(c.grid("params.a", None).unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(c.grid("params.b", None).unwrap(), vec![1.0, 2.5, 4.0]);
        assert!(c.grid("params.c", None).is_err());
        assert_eq!(c.grid("params.d", Some(vec![3.0])).unwrap(), vec![3.0]);
    }

    #[test]
    fn ranges_and_unused() {
        let c = Config::parse("[params]\nradius = 40\nextra = 1\n").unwrap();
        assert!(c.ranged("params.radius", 4usize, 0, 10).is_err());
        assert_eq!(c.unused(), vec!["params.extra".to_string()]);
    }
}
