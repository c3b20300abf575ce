//! Run configuration: an optional JSON file merged with command-line flags.
//!
//! Flags always win over file values. Validation happens once, after the merge.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::Deserialize;

use fthbi::calibrate::FitMetric;
use fthbi::{ExponentSpec, FractionalOrder, FrontMode, ProblemKind};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Problem {
    Subdiffusion,
    Drift,
}

impl From<Problem> for ProblemKind {
    fn from(p: Problem) -> Self {
        match p {
            Problem::Subdiffusion => ProblemKind::Subdiffusion,
            Problem::Drift => ProblemKind::Drift,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Rule {
    Hyperbolic,
    Invexp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    #[default]
    Eta,
    X,
    T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    #[default]
    MaxAbs,
    Rms,
}

impl From<Metric> for FitMetric {
    fn from(m: Metric) -> Self {
        match m {
            Metric::MaxAbs => FitMetric::MaxAbs,
            Metric::Rms => FitMetric::Rms,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Front {
    #[default]
    Recompute,
    Frozen,
}

impl From<Front> for FrontMode {
    fn from(f: Front) -> Self {
        match f {
            Front::Recompute => FrontMode::Recompute,
            Front::Frozen => FrontMode::Frozen,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    One(f64),
    Many(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
enum ExponentEntry {
    Value(f64),
    Rule(Rule),
}

/// JSON file layout. Every field is optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    command: Option<String>,
    problem: Option<Problem>,
    mu: Option<OneOrMany>,
    exponents: Option<Vec<ExponentEntry>>,
    n0: Option<f64>,
    front: Option<Front>,
    sweep: Option<Axis>,
    grid: Option<Grid>,
    x: Option<f64>,
    time: Option<f64>,
    coeff: Option<f64>,
    clamp: Option<bool>,
    metric: Option<Metric>,
    format: Option<Format>,
    output_path: Option<PathBuf>,
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// JSON run configuration; flags override its values
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub problem: Option<Problem>,
    /// Fractional order in (0, 1); repeat for a sweep
    #[arg(long, value_name = "MU")]
    pub mu: Vec<f64>,
    /// Constant profile exponent; repeatable
    #[arg(long, value_name = "N")]
    pub exponent: Vec<f64>,
    /// Variable-order exponent rule (drift only)
    #[arg(long, value_enum)]
    pub exponent_rule: Option<Rule>,
    /// Base exponent of the variable-order rule
    #[arg(long)]
    pub n0: Option<f64>,
    /// Front position for variable-order rules
    #[arg(long, value_enum)]
    pub front: Option<Front>,
    /// Variable swept by `profile`
    #[arg(long, value_enum)]
    pub sweep: Option<Axis>,
    #[arg(long, allow_negative_numbers = true)]
    pub eta_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub eta_max: Option<f64>,
    #[arg(long)]
    pub eta_step: Option<f64>,
    /// Fixed position for a time sweep
    #[arg(long)]
    pub x: Option<f64>,
    /// Fixed time for a space sweep
    #[arg(long)]
    pub time: Option<f64>,
    /// Diffusivity a (subdiffusion) or drift velocity V
    #[arg(long)]
    pub coeff: Option<f64>,
    /// Clamp the profile to zero past the front (default)
    #[arg(long, conflicts_with = "raw")]
    pub clamp: bool,
    /// Evaluate (1 - η/λ)^n wherever it is real
    #[arg(long)]
    pub raw: bool,
    #[arg(long, value_enum)]
    pub metric: Option<Metric>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

/// Merged and validated configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub problem: ProblemKind,
    /// `None` when neither the file nor the flags name an order.
    pub mu: Option<Vec<FractionalOrder>>,
    pub exponents: Vec<ExponentSpec>,
    pub front: FrontMode,
    pub sweep: Axis,
    pub grid: Option<Grid>,
    pub x: Option<f64>,
    pub time: Option<f64>,
    pub coeff: f64,
    pub clamp: bool,
    pub metric: FitMetric,
    pub format: Format,
    pub output_path: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(command: &str, flags: &Flags) -> Result<Self, CliError> {
        let file = match &flags.config {
            Some(path) => read_file(path)?,
            None => FileConfig::default(),
        };
        if let Some(c) = &file.command {
            if c != command {
                return Err(CliError::Config(format!("config file is for command `{c}`, not `{command}`")));
            }
        }
        merge(file, flags)
    }

    /// Single order for commands that do not sweep μ.
    pub fn single_mu(&self) -> Result<Option<FractionalOrder>, CliError> {
        match self.mu.as_deref() {
            None | Some([]) => Ok(None),
            Some([m]) => Ok(Some(*m)),
            Some(_) => Err(CliError::Config("this command takes a single --mu".into())),
        }
    }
}

fn read_file(path: &Path) -> Result<FileConfig, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn merge(file: FileConfig, flags: &Flags) -> Result<RunConfig, CliError> {
    let problem = flags.problem.or(file.problem).unwrap_or(Problem::Subdiffusion).into();

    let mu_values = if !flags.mu.is_empty() {
        Some(flags.mu.clone())
    } else {
        file.mu.map(|m| match m {
            OneOrMany::One(v) => vec![v],
            OneOrMany::Many(v) => v,
        })
    };
    let mu = mu_values.map(|v| v.into_iter().map(FractionalOrder::new).collect::<Result<Vec<_>, _>>()).transpose()?;

    let n0 = check_finite("n0", flags.n0.or(file.n0).unwrap_or(1.0))?;
    let entries: Vec<ExponentEntry> = if !flags.exponent.is_empty() || flags.exponent_rule.is_some() {
        let mut e: Vec<ExponentEntry> = flags.exponent.iter().map(|&n| ExponentEntry::Value(n)).collect();
        e.extend(flags.exponent_rule.map(ExponentEntry::Rule));
        e
    } else {
        file.exponents.unwrap_or_default()
    };
    let exponents = entries
        .into_iter()
        .map(|e| match e {
            ExponentEntry::Value(n) => ExponentSpec::fixed(n),
            ExponentEntry::Rule(Rule::Hyperbolic) => ExponentSpec::hyperbolic(n0),
            ExponentEntry::Rule(Rule::Invexp) => ExponentSpec::inverse_exponential(n0),
        })
        .collect::<Result<Vec<_>, _>>()?;
    if problem == ProblemKind::Subdiffusion && exponents.iter().any(ExponentSpec::is_variable) {
        return Err(CliError::Config("variable-order exponent rules apply to the drift problem only".into()));
    }

    let grid = match (flags.eta_min, flags.eta_max, flags.eta_step, file.grid) {
        (None, None, None, g) => g,
        (min, max, step, g) => {
            let base = g.or(default_grid(flags.sweep.or(file.sweep).unwrap_or_default()));
            let pick = |flag: Option<f64>, from: Option<f64>, name: &str| {
                flag.or(from).ok_or_else(|| CliError::Config(format!("missing --eta-{name}")))
            };
            Some(Grid {
                min: pick(min, base.map(|b| b.min), "min")?,
                max: pick(max, base.map(|b| b.max), "max")?,
                step: pick(step, base.map(|b| b.step), "step")?,
            })
        }
    };
    if let Some(g) = grid {
        if !(g.min.is_finite() && g.max.is_finite() && g.step.is_finite()) || !(g.min < g.max) || !(g.step > 0.0) {
            return Err(CliError::Config(format!("grid needs min < max and step > 0, got {g:?}")));
        }
    }

    let coeff = check_finite("coeff", flags.coeff.or(file.coeff).unwrap_or(1.0))?;
    if !(coeff > 0.0) {
        return Err(CliError::Config(format!("coeff must be positive, got {coeff}")));
    }
    let x = flags.x.or(file.x).map(|v| check_finite("x", v)).transpose()?;
    let time = flags.time.or(file.time).map(|v| check_finite("time", v)).transpose()?;
    let clamp = if flags.raw {
        false
    } else if flags.clamp {
        true
    } else {
        file.clamp.unwrap_or(true)
    };

    Ok(RunConfig {
        problem,
        mu,
        exponents,
        front: flags.front.or(file.front).unwrap_or_default().into(),
        sweep: flags.sweep.or(file.sweep).unwrap_or_default(),
        grid,
        x,
        time,
        coeff,
        clamp,
        metric: flags.metric.or(file.metric).unwrap_or_default().into(),
        format: flags.format.or(file.format).unwrap_or_default(),
        output_path: flags.out.clone().or(file.output_path),
    })
}

/// Grid used by `profile` when none is given.
pub fn default_grid(axis: Axis) -> Option<Grid> {
    Some(match axis {
        Axis::Eta => Grid { min: 0.0, max: 6.0, step: 0.05 },
        Axis::X | Axis::T => Grid { min: 0.0, max: 2.0, step: 0.05 },
    })
}

fn check_finite(name: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Config(format!("{name} must be finite")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(json: &str) -> FileConfig {
        serde_json::from_str(json).unwrap()
    }

    #[test]
    fn flags_override_file() {
        let file =
            parse(r#"{"mu": [0.2, 0.3], "coeff": 2.0, "format": "json", "exponents": [1.5, "hyperbolic"], "n0": 1.2}"#);
        let flags = Flags { mu: vec![0.5], format: Some(Format::Csv), ..Flags::default() };
        let cfg = merge(file, &flags).unwrap_err();
        // hyperbolic rule with the default subdiffusion problem is rejected
        assert!(matches!(cfg, CliError::Config(_)));

        let file = parse(
            r#"{"problem": "drift", "mu": [0.2, 0.3], "coeff": 2.0, "format": "json", "exponents": [1.5, "hyperbolic"], "n0": 1.2}"#,
        );
        let cfg = merge(file, &flags).unwrap();
        assert_eq!(cfg.mu.unwrap(), vec![FractionalOrder::new(0.5).unwrap()]);
        assert_eq!(cfg.coeff, 2.0);
        assert_eq!(cfg.format, Format::Csv);
        assert_eq!(cfg.exponents, vec![ExponentSpec::Fixed(1.5), ExponentSpec::Hyperbolic(1.2)]);
    }

    #[test]
    fn scalar_or_list_mu() {
        let cfg = merge(parse(r#"{"mu": 0.4}"#), &Flags::default()).unwrap();
        assert_eq!(cfg.mu.unwrap().len(), 1);
        let cfg = merge(parse(r#"{"mu": []}"#), &Flags::default()).unwrap();
        assert_eq!(cfg.mu, Some(vec![]));
        let cfg = merge(FileConfig::default(), &Flags::default()).unwrap();
        assert_eq!(cfg.mu, None);
    }

    #[test]
    fn invalid_values_are_config_errors() {
        for json in [
            r#"{"mu": 1.5}"#,
            r#"{"grid": {"min": 1.0, "max": 0.5, "step": 0.1}}"#,
            r#"{"grid": {"min": 0.0, "max": 1.0, "step": 0.0}}"#,
            r#"{"coeff": -1.0}"#,
            r#"{"exponents": [0.5]}"#,
        ] {
            assert!(merge(parse(json), &Flags::default()).is_err(), "{json}");
        }
        assert!(serde_json::from_str::<FileConfig>(r#"{"bogus": 1}"#).is_err());
    }

    #[test]
    fn partial_grid_flags_fill_from_default() {
        let flags = Flags { eta_max: Some(2.1), eta_step: Some(0.01), ..Flags::default() };
        let cfg = merge(FileConfig::default(), &flags).unwrap();
        assert_eq!(cfg.grid, Some(Grid { min: 0.0, max: 2.1, step: 0.01 }));
    }

    #[test]
    fn raw_and_clamp() {
        let cfg = merge(parse(r#"{"clamp": false}"#), &Flags::default()).unwrap();
        assert!(!cfg.clamp);
        let cfg = merge(parse(r#"{"clamp": false}"#), &Flags { clamp: true, ..Flags::default() }).unwrap();
        assert!(cfg.clamp);
        let cfg = merge(FileConfig::default(), &Flags { raw: true, ..Flags::default() }).unwrap();
        assert!(!cfg.clamp);
    }
}
