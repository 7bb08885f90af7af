use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_horolab");

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn run(subcommand: &str, config: &Path, out: &Path, extra: &[&str]) -> Output {
    Command::new(BIN)
        .arg(subcommand)
        .arg(config)
        .arg("--out-dir")
        .arg(out)
        .args(extra)
        .output()
        .expect("binary runs")
}

fn summary(out: &Path, subcommand: &str) -> Value {
    let text = fs::read_to_string(out.join(format!("{subcommand}.json"))).unwrap();
    serde_json::from_str(&text).unwrap()
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let path = dir.join("run.conf");
    fs::write(&path, text).unwrap();
    path
}

const SCHEMA: [(&str, &[&str]); 13] = [
    ("iet-orbit", &["steps", "final_x", "total_length", "intervals_visited"]),
    ("keane", &["depth", "passed", "collision_step", "collision_from", "collision_hits", "exact"]),
    ("weakmix", &["samples", "grid_points", "max_statistic", "argmax_theta"]),
    ("suspend", &["genus", "euler_characteristic", "cone_points", "marked_points", "gauss_bonnet_excess", "vertex_classes"]),
    ("flow", &["steps", "arrived", "final_sheet", "final_tau", "hit_time"]),
    ("beta", &["rays", "finite", "neg_infinity", "separatrix"]),
    ("track", &["branches", "switches", "recurrent", "carried", "max_switch_defect", "denominator", "integer_switch_defect"]),
    ("routes", &["lengths", "max_count", "max_almost_embedded"]),
    ("dimension", &["lengths", "dimension_at_max", "growth_exponent", "polynomial_degree", "nonincreasing"]),
    ("kappa", &["kappa", "witness_phi", "witness_length", "translation_length", "words_examined"]),
    ("qm", &["radius", "sup_defect", "radius_limited_points", "min_defect"]),
    ("delta-spectrum", &["radius", "entries", "omega_count", "min_r", "max_r", "nonnegative_fraction"]),
    ("proximality", &["inf_distance", "time", "ell", "witness_length", "omega_samples"]),
];

#[test]
fn every_subcommand_matches_its_schema() {
    let out = tempfile::tempdir().unwrap();
    for (name, keys) in SCHEMA {
        let config = configs().join(format!("{name}.conf"));
        let result = run(name, &config, out.path(), &["--plot"]);
        assert!(result.status.success(), "{name}: {}", String::from_utf8_lossy(&result.stderr));
        let json = summary(out.path(), name);
        assert_eq!(json["subcommand"], name);
        let mut found: Vec<&str> = json["metrics"].as_object().unwrap().keys().map(String::as_str).collect();
        let mut expected = keys.to_vec();
        found.sort_unstable();
        expected.sort_unstable();
        assert_eq!(found, expected, "{name}");
        assert!(json["runtime_ms"].is_u64());
        assert!(json["flags"].is_array());
        assert!(json["config_echo"]["run.seed"].is_string());
        assert!(out.path().join(format!("{name}.plt")).exists());
        let csv = fs::read_to_string(out.path().join(format!("{name}.csv"))).unwrap();
        assert!(csv.lines().count() >= 2, "{name} wrote no rows");
    }
}

#[test]
fn swap_suspends_to_a_torus() {
    let out = tempfile::tempdir().unwrap();
    let result = run("suspend", &configs().join("suspend.conf"), out.path(), &[]);
    assert!(result.status.success());
    let json = summary(out.path(), "suspend");
    assert_eq!(json["metrics"]["genus"], 1);
    assert_eq!(json["metrics"]["cone_points"], 0);
    let csv = fs::read_to_string(out.path().join("suspend.csv")).unwrap();
    assert!(csv.lines().skip(1).all(|l| l.split(',').nth(2) == Some("false")));
}

#[test]
fn dimension_estimates_decrease() {
    let out = tempfile::tempdir().unwrap();
    assert!(run("dimension", &configs().join("dimension.conf"), out.path(), &[]).status.success());
    let csv = fs::read_to_string(out.path().join("dimension.csv")).unwrap();
    let dims: Vec<f64> = csv.lines().skip(1).map(|l| l.split(',').nth(2).unwrap().parse().unwrap()).collect();
    assert_eq!(dims.len(), 3);
    assert!(dims[0] > dims[1] && dims[1] > dims[2]);
}

#[test]
fn repeated_image_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "[input]\npermutation = 2 2 1\nlengths = 1 1 1\n");
    let result = run("suspend", &config, dir.path(), &[]);
    assert_eq!(result.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&result.stderr);
    assert!(stderr.contains("line 2: field `input.permutation`"), "{stderr}");
}

#[test]
fn unknown_values_are_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    for text in [
        "[input]\npermutation = 2 1\nlengths = 1 x\n",
        "[params\n",
        "[input]\npermutation = 2 1\nlengths = 1 2\n[params]\nsteps = -4\n",
        "[input]\npermutation = 2 1\nlengths = 1 2\n[run]\nmode = fuzzy\n",
    ] {
        let config = write_config(dir.path(), text);
        let result = run("iet-orbit", &config, dir.path(), &[]);
        assert_eq!(result.status.code(), Some(2), "{text}");
        assert!(String::from_utf8_lossy(&result.stderr).contains("field `"));
    }
}

#[test]
fn certification_in_float_mode_is_a_mode_violation() {
    let dir = tempfile::tempdir().unwrap();
    let config = configs().join("keane-quarters.conf");
    let result = run("keane", &config, dir.path(), &["--mode", "float"]);
    assert_eq!(result.status.code(), Some(3));
    let result = run("keane", &config, dir.path(), &[]);
    assert!(result.status.success());
    let json = summary(dir.path(), "keane");
    assert_eq!(json["metrics"]["exact"], true);
    assert_eq!(json["metrics"]["passed"], false);
}

#[test]
fn float_only_subcommands_reject_exact_mode() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["weakmix", "routes", "kappa", "qm"] {
        let result = run(name, &configs().join(format!("{name}.conf")), dir.path(), &["--mode", "exact"]);
        assert_eq!(result.status.code(), Some(3), "{name}");
    }
}

#[test]
fn fixed_seed_reproduces_outputs() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for name in ["delta-spectrum", "proximality", "iet-orbit", "flow"] {
        let config = configs().join(format!("{name}.conf"));
        assert!(run(name, &config, a.path(), &["--seed", "42"]).status.success());
        assert!(run(name, &config, b.path(), &["--seed", "42"]).status.success());
        let csv = |d: &Path| fs::read(d.join(format!("{name}.csv"))).unwrap();
        assert_eq!(csv(a.path()), csv(b.path()), "{name}");
        assert_eq!(summary(a.path(), name)["metrics"], summary(b.path(), name)["metrics"]);
    }
    let c = tempfile::tempdir().unwrap();
    let config = configs().join("delta-spectrum.conf");
    assert!(run("delta-spectrum", &config, c.path(), &["--seed", "43"]).status.success());
    let csv = |d: &Path| fs::read(d.join("delta-spectrum.csv")).unwrap();
    assert_ne!(csv(a.path()), csv(c.path()));
}

#[test]
fn group_file_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let record = horolab::fuchsian::SurfaceGroup::octagon().to_record();
    fs::write(dir.path().join("octagon.group"), &record).unwrap();
    let config = write_config(dir.path(), "[input]\ngroup_file = octagon.group\n[params]\nradii = 1 2\n");
    let result = run("kappa", &config, dir.path(), &[]);
    assert!(result.status.success(), "{}", String::from_utf8_lossy(&result.stderr));
    let from_file = summary(dir.path(), "kappa")["metrics"]["kappa"].as_f64().unwrap();
    let direct = horolab::fuchsian::SurfaceGroup::octagon().kappa_estimate(2).unwrap().kappa;
    assert_eq!(from_file, direct);
}
