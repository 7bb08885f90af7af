//! Subcommands. Each reads its inputs from the config and returns a [`Report`].

mod dynamics;
mod flat;
mod lattice;
mod tracks;

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use horolab::fuchsian::SurfaceGroup;
use horolab::iet::{Iet, Permutation};
use horolab::traintrack::TrainTrack;
use horolab::{GroupElement, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::Config;
use crate::error::CliError;
use crate::report::Report;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Float,
    Exact,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Float => "float",
            Mode::Exact => "exact",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Subcommand {
    IetOrbit,
    Keane,
    Weakmix,
    Suspend,
    Flow,
    Beta,
    Track,
    Routes,
    Dimension,
    Kappa,
    Qm,
    DeltaSpectrum,
    Proximality,
}

impl Subcommand {
    pub fn name(self) -> &'static str {
        match self {
            Subcommand::IetOrbit => "iet-orbit",
            Subcommand::Keane => "keane",
            Subcommand::Weakmix => "weakmix",
            Subcommand::Suspend => "suspend",
            Subcommand::Flow => "flow",
            Subcommand::Beta => "beta",
            Subcommand::Track => "track",
            Subcommand::Routes => "routes",
            Subcommand::Dimension => "dimension",
            Subcommand::Kappa => "kappa",
            Subcommand::Qm => "qm",
            Subcommand::DeltaSpectrum => "delta-spectrum",
            Subcommand::Proximality => "proximality",
        }
    }

    /// Metric keys written to the JSON summary.
    pub fn metric_keys(self) -> &'static [&'static str] {
        match self {
            Subcommand::IetOrbit => &["steps", "final_x", "total_length", "intervals_visited"],
            Subcommand::Keane => &["depth", "passed", "collision_step", "collision_from", "collision_hits", "exact"],
            Subcommand::Weakmix => &["samples", "grid_points", "max_statistic", "argmax_theta"],
            Subcommand::Suspend => &["genus", "euler_characteristic", "cone_points", "marked_points", "gauss_bonnet_excess", "vertex_classes"],
            Subcommand::Flow => &["steps", "arrived", "final_sheet", "final_tau", "hit_time"],
            Subcommand::Beta => &["rays", "finite", "neg_infinity", "separatrix"],
            Subcommand::Track => &["branches", "switches", "recurrent", "carried", "max_switch_defect", "denominator", "integer_switch_defect"],
            Subcommand::Routes => &["lengths", "max_count", "max_almost_embedded"],
            Subcommand::Dimension => &["lengths", "dimension_at_max", "growth_exponent", "polynomial_degree", "nonincreasing"],
            Subcommand::Kappa => &["kappa", "witness_phi", "witness_length", "translation_length", "words_examined"],
            Subcommand::Qm => &["radius", "sup_defect", "radius_limited_points", "min_defect"],
            Subcommand::DeltaSpectrum => &["radius", "entries", "omega_count", "min_r", "max_r", "nonnegative_fraction"],
            Subcommand::Proximality => &["inf_distance", "time", "ell", "witness_length", "omega_samples"],
        }
    }

    pub fn run(self, ctx: &mut Context) -> Result<Report, CliError> {
        match self {
            Subcommand::IetOrbit => dynamics::iet_orbit(ctx),
            Subcommand::Keane => dynamics::keane(ctx),
            Subcommand::Weakmix => dynamics::weakmix(ctx),
            Subcommand::Suspend => flat::suspend(ctx),
            Subcommand::Flow => flat::flow(ctx),
            Subcommand::Beta => flat::beta(ctx),
            Subcommand::Track => tracks::track(ctx),
            Subcommand::Routes => tracks::routes(ctx),
            Subcommand::Dimension => tracks::dimension(ctx),
            Subcommand::Kappa => lattice::kappa(ctx),
            Subcommand::Qm => lattice::qm(ctx),
            Subcommand::DeltaSpectrum => lattice::delta_spectrum(ctx),
            Subcommand::Proximality => lattice::proximality(ctx),
        }
    }
}

pub struct Context<'a> {
    pub config: &'a Config,
    pub mode: Mode,
    pub rng: ChaCha8Rng,
    /// Directory against which relative input paths resolve.
    pub base_dir: PathBuf,
}

impl<'a> Context<'a> {
    pub fn new(config: &'a Config, mode: Mode, seed: u64, base_dir: &Path) -> Self {
        Self {
            config,
            mode,
            rng: ChaCha8Rng::seed_from_u64(seed),
            base_dir: base_dir.to_path_buf(),
        }
    }

    pub fn float_only(&self, what: &str) -> Result<(), CliError> {
        match self.mode {
            Mode::Float => Ok(()),
            Mode::Exact => Err(CliError::Mode(format!("{what} runs in float mode only"))),
        }
    }

    /// The IET from `input.iet`, or from `input.permutation` and `input.lengths`.
    pub fn iet<S: Scalar>(&self) -> Result<Iet<S>, CliError> {
        let config = self.config;
        if let Some(entry) = config.get("input.iet") {
            return Iet::parse_record(&entry.value).map_err(|e| match e {
                horolab::Error::Parse { field, message, .. } => {
                    CliError::config(entry.line, "input.iet", format!("{field}: {message}"))
                }
                other => CliError::config(entry.line, "input.iet", other.to_string()),
            });
        }
        let perm_entry = config.require("input.permutation")?;
        let images = perm_entry
            .value
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| CliError::config(perm_entry.line, "input.permutation", format!("`{t}` is not an image")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let permutation = Permutation::new(&images)
            .map_err(|e| CliError::config(perm_entry.line, "input.permutation", e.to_string()))?;
        let len_entry = config.require("input.lengths")?;
        let lengths = len_entry
            .value
            .split_whitespace()
            .map(|t| {
                S::parse(t).ok_or_else(|| CliError::config(len_entry.line, "input.lengths", format!("`{t}` is not a length")))
            })
            .collect::<Result<Vec<S>, _>>()?;
        Iet::new(lengths, permutation).map_err(|e| CliError::config(len_entry.line, "input.lengths", e.to_string()))
    }

    pub fn scalar<S: Scalar>(&self, key: &str, default: &str) -> Result<S, CliError> {
        let (text, line) = match self.config.get(key) {
            Some(e) => (e.value.as_str(), e.line),
            None => (default, 0),
        };
        S::parse(text).ok_or_else(|| CliError::config(line, key, format!("`{text}` is not a number")))
    }

    pub fn path(&self, key: &str) -> Option<(PathBuf, usize)> {
        self.config.get(key).map(|e| (self.base_dir.join(&e.value), e.line))
    }

    pub fn read_file(&self, key: &str) -> Result<Option<String>, CliError> {
        match self.path(key) {
            None => Ok(None),
            Some((path, line)) => std::fs::read_to_string(&path)
                .map(Some)
                .map_err(|e| CliError::config(line, key, format!("{}: {e}", path.display()))),
        }
    }

    /// `input.track_file`, a named control track, or the permutation track of the IET.
    pub fn track(&self) -> Result<TrainTrack, CliError> {
        if let Some(text) = self.read_file("input.track_file")? {
            let line = self.config.line("input.track_file");
            return TrainTrack::parse_dump(&text).map_err(|e| CliError::config(line, "input.track_file", e.to_string()));
        }
        if let Some(entry) = self.config.get("input.track") {
            let lengths_entry = self.config.require("input.branch_lengths")?;
            let lengths = lengths_entry
                .value
                .split_whitespace()
                .map(|t| {
                    t.parse::<f64>()
                        .map_err(|_| CliError::config(lengths_entry.line, "input.branch_lengths", format!("`{t}` is not a length")))
                })
                .collect::<Result<Vec<f64>, _>>()?;
            let want = |n: usize| {
                if lengths.len() == n {
                    Ok(())
                } else {
                    Err(CliError::config(
                        lengths_entry.line,
                        "input.branch_lengths",
                        format!("`{}` needs {n} lengths, found {}", entry.value, lengths.len()),
                    ))
                }
            };
            let built = match entry.value.as_str() {
                "single_loop" => want(1).map(|_| TrainTrack::single_loop(lengths[0])),
                "figure_eight" => want(2).map(|_| TrainTrack::figure_eight(lengths[0], lengths[1])),
                "loop_with_spur" => want(2).map(|_| TrainTrack::loop_with_spur(lengths[0], lengths[1])),
                other => {
                    return Err(CliError::config(
                        entry.line,
                        "input.track",
                        format!("unknown track `{other}`, expected single_loop, figure_eight or loop_with_spur"),
                    ))
                }
            }?;
            return built.map_err(|e| CliError::config(lengths_entry.line, "input.branch_lengths", e.to_string()));
        }
        let iet = self.iet::<f64>()?;
        TrainTrack::from_permutation(&iet).map_err(|e| CliError::config(self.iet_line(), "input.permutation", e.to_string()))
    }

    fn iet_line(&self) -> usize {
        self.config.line("input.iet").max(self.config.line("input.permutation"))
    }

    /// `input.group_file` or the octagon group, with `input.phi` overriding the weights.
    pub fn group(&self) -> Result<SurfaceGroup, CliError> {
        let base = match self.read_file("input.group_file")? {
            Some(text) => {
                let line = self.config.line("input.group_file");
                SurfaceGroup::parse_record(&text).map_err(|e| CliError::config(line, "input.group_file", e.to_string()))?
            }
            None => SurfaceGroup::octagon(),
        };
        let Some(entry) = self.config.get("input.phi") else {
            return Ok(base);
        };
        let weights = entry
            .value
            .split_whitespace()
            .map(|t| t.parse::<i64>().map_err(|_| CliError::config(entry.line, "input.phi", format!("`{t}` is not an integer"))))
            .collect::<Result<Vec<i64>, _>>()?;
        SurfaceGroup::new(base.labels().to_vec(), base.generators().to_vec(), base.relator().to_vec(), weights)
            .map_err(|e| CliError::config(entry.line, "input.phi", e.to_string()))
    }

    pub fn random_frame(&mut self) -> GroupElement {
        loop {
            let e: [f64; 4] = std::array::from_fn(|_| self.rng.random_range(-2.0..2.0));
            if e[0] * e[3] - e[1] * e[2] > 0.1 {
                if let Ok(g) = GroupElement::new(e[0], e[1], e[2], e[3]) {
                    return g;
                }
            }
        }
    }

    /// Frame from `identity`, `random`, `matrix a b c d` or `axis <word>`.
    pub fn frame(&mut self, key: &str, group: &SurfaceGroup, default: &str) -> Result<GroupElement, CliError> {
        let (text, line) = match self.config.get(key) {
            Some(e) => (e.value.clone(), e.line),
            None => (default.to_string(), 0),
        };
        let bad = |msg: String| CliError::config(line, key, msg);
        let mut tokens = text.split_whitespace();
        match tokens.next() {
            Some("identity") => Ok(GroupElement::IDENTITY),
            Some("random") => Ok(self.random_frame()),
            Some("matrix") => {
                let entries = tokens
                    .map(|t| t.parse::<f64>().map_err(|_| bad(format!("`{t}` is not a number"))))
                    .collect::<Result<Vec<f64>, _>>()?;
                let [a, b, c, d] = entries[..] else {
                    return Err(bad("`matrix` takes four entries".into()));
                };
                GroupElement::new(a, b, c, d).map_err(|e| bad(e.to_string()))
            }
            Some("axis") => {
                let letters = group
                    .parse_word(&tokens.collect::<Vec<_>>().join(" "))
                    .map_err(|e| bad(e.to_string()))?;
                group
                    .word_matrix(&letters)
                    .axis_frame()
                    .ok_or_else(|| bad("word is not hyperbolic".into()))
            }
            _ => Err(bad(format!(
                "`{text}` is not a frame; use identity, random, matrix a b c d or axis <word>"
            ))),
        }
    }
}
