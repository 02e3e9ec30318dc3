use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::experiments::{Ladder, Solver, StudyConfig};
use crate::greens::{ForcingCase, ReactionCase};
use crate::iteration::NonlinearMethod;
use crate::noise::{HurstIndex, SamplerMethod};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Config(format!(
                "unknown format `{other}`; valid names: csv, json"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    SampleNoise,
    Solve,
    Converge,
    Verify,
}

impl fmt::Display for CommandKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CommandKind::SampleNoise => "sample-noise",
            CommandKind::Solve => "solve",
            CommandKind::Converge => "converge",
            CommandKind::Verify => "verify",
        })
    }
}

/// Flags shared by every subcommand. Everything is optional so that a
/// configuration file can fill the gaps; flags win over the file.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Hurst index in (0, 1/2]
    #[arg(long)]
    pub hurst: Option<f64>,
    /// Number of cells
    #[arg(long)]
    pub n: Option<usize>,
    /// Level ladder `n0:levels` (sizes n0, 2 n0, ..., one entry per level)
    #[arg(long)]
    pub ladder: Option<String>,
    /// Monte Carlo samples
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Reaction term: zero, linear:<lambda>, sin, sqrt-clip
    #[arg(long = "f")]
    pub reaction: Option<String>,
    /// Forcing: zero, one, sinpi
    #[arg(long = "g")]
    pub forcing: Option<String>,
    /// fem, greens or both
    #[arg(long)]
    pub solver: Option<String>,
    /// Output file; standard output when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub format: Option<Format>,
    /// Worker threads (0: one per core)
    #[arg(long)]
    pub threads: Option<usize>,
    /// Reference grid is 2^extra times finer than the finest level
    #[arg(long)]
    pub extra: Option<usize>,
    /// Increment sampler: cholesky or circulant
    #[arg(long)]
    pub sampler: Option<String>,
    /// Nonlinear iteration: auto, picard or newton
    #[arg(long)]
    pub method: Option<String>,
    /// Residual tolerance of the nonlinear solvers
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_iters: Option<usize>,
    /// key=value file with defaults for any of the flags above
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Fully resolved command-line configuration, echoed into reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CliConfig {
    pub command: CommandKind,
    pub hurst: HurstIndex,
    pub n: usize,
    pub ladder: Ladder,
    pub samples: usize,
    pub seed: u64,
    pub reaction: ReactionCase,
    pub forcing: ForcingCase,
    pub solver: Solver,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub threads: usize,
    pub extra: usize,
    pub sampler: SamplerMethod,
    pub method: NonlinearMethod,
    pub tol: f64,
    pub max_iters: usize,
}

fn parse_sampler(s: &str) -> Result<SamplerMethod> {
    match s.trim() {
        "cholesky" => Ok(SamplerMethod::Cholesky),
        "circulant" => Ok(SamplerMethod::Circulant),
        other => Err(Error::Config(format!(
            "unknown sampler `{other}`; valid names: cholesky, circulant"
        ))),
    }
}

/// Reads a flat `key=value` file; blank lines and `#` comments are skipped.
pub fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config_text(&text)
}

pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            Error::Config(format!(
                "line {}: expected key=value, got `{line}`",
                lineno + 1
            ))
        })?;
        let key = k.trim().replace('_', "-");
        out.insert(key, v.trim().to_string());
    }
    Ok(out)
}

const KNOWN_KEYS: [&str; 16] = [
    "hurst",
    "n",
    "ladder",
    "samples",
    "seed",
    "f",
    "g",
    "solver",
    "out",
    "format",
    "threads",
    "extra",
    "sampler",
    "method",
    "tol",
    "max-iters",
];

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("invalid value `{value}` for `{key}`")))
}

impl CliConfig {
    /// Merges flags over an optional configuration file over the defaults
    /// for `command`, validating every value.
    pub fn resolve(command: CommandKind, args: &CommonArgs) -> Result<Self> {
        let file = match &args.config {
            Some(path) => read_config_file(path)?,
            None => BTreeMap::new(),
        };
        if let Some(unknown) = file.keys().find(|k| !KNOWN_KEYS.contains(&k.as_str())) {
            return Err(Error::Config(format!(
                "unknown key `{unknown}` in configuration file"
            )));
        }
        let pick = |flag: Option<String>, key: &str| flag.or_else(|| file.get(key).cloned());

        let hurst = match pick(args.hurst.map(|v| v.to_string()), "hurst") {
            Some(v) => parse_value::<f64>("hurst", &v)?,
            None => 0.25,
        };
        let default_samples = match command {
            CommandKind::SampleNoise => 10_000,
            CommandKind::Solve => 1,
            CommandKind::Converge => 200,
            CommandKind::Verify => 10_000,
        };
        let defaults = StudyConfig::default();
        let config = CliConfig {
            command,
            hurst: HurstIndex::new(hurst)?,
            n: match pick(args.n.map(|v| v.to_string()), "n") {
                Some(v) => parse_value("n", &v)?,
                None => 64,
            },
            ladder: match pick(args.ladder.clone(), "ladder") {
                Some(v) => v.parse()?,
                None => defaults.ladder,
            },
            samples: match pick(args.samples.map(|v| v.to_string()), "samples") {
                Some(v) => parse_value("samples", &v)?,
                None => default_samples,
            },
            seed: match pick(args.seed.map(|v| v.to_string()), "seed") {
                Some(v) => parse_value("seed", &v)?,
                None => defaults.seed,
            },
            reaction: match pick(args.reaction.clone(), "f") {
                Some(v) => v.parse()?,
                None => defaults.reaction,
            },
            forcing: match pick(args.forcing.clone(), "g") {
                Some(v) => v.parse()?,
                None => defaults.forcing,
            },
            solver: match pick(args.solver.clone(), "solver") {
                Some(v) => v.parse()?,
                None => Solver::Fem,
            },
            out: pick(args.out.as_ref().map(|p| p.display().to_string()), "out").map(PathBuf::from),
            format: match pick(
                args.format.map(|f| format!("{f:?}").to_lowercase()),
                "format",
            ) {
                Some(v) => v.parse()?,
                None => Format::Csv,
            },
            threads: match pick(args.threads.map(|v| v.to_string()), "threads") {
                Some(v) => parse_value("threads", &v)?,
                None => 0,
            },
            extra: match pick(args.extra.map(|v| v.to_string()), "extra") {
                Some(v) => parse_value("extra", &v)?,
                None => defaults.extra,
            },
            sampler: match pick(args.sampler.clone(), "sampler") {
                Some(v) => parse_sampler(&v)?,
                None => defaults.sampler,
            },
            method: match pick(args.method.clone(), "method") {
                Some(v) => v.parse()?,
                None => defaults.method,
            },
            tol: match pick(args.tol.map(|v| v.to_string()), "tol") {
                Some(v) => parse_value("tol", &v)?,
                None => defaults.tol,
            },
            max_iters: match pick(args.max_iters.map(|v| v.to_string()), "max-iters") {
                Some(v) => parse_value("max-iters", &v)?,
                None => defaults.max_iters,
            },
        };
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Config("n must be at least 1".into()));
        }
        if self.command == CommandKind::Solve && self.n < 2 {
            return Err(Error::Config("solve needs n >= 2".into()));
        }
        if matches!(self.command, CommandKind::Converge | CommandKind::Verify) && self.samples < 2 {
            return Err(Error::Config("need at least 2 samples".into()));
        }
        self.reaction.build()?;
        if self.command == CommandKind::Converge {
            self.study().validate()?;
        }
        Ok(())
    }

    pub fn study(&self) -> StudyConfig {
        StudyConfig {
            hurst: self.hurst,
            reaction: self.reaction,
            forcing: self.forcing,
            ladder: self.ladder,
            extra: self.extra,
            samples: self.samples,
            seed: self.seed,
            solver: self.solver,
            sampler: self.sampler,
            tol: self.tol,
            max_iters: self.max_iters,
            method: self.method,
            max_failures: 0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_text_parsing() {
        let map = parse_config_text("# study\nhurst = 0.3\n\nmax_iters=20\n").unwrap();
        assert_eq!(map["hurst"], "0.3");
        assert_eq!(map["max-iters"], "20");
        assert!(parse_config_text("hurst 0.3").is_err());
    }

    #[test]
    fn flags_resolve_with_defaults() {
        let args = CommonArgs {
            hurst: Some(0.5),
            reaction: Some("sqrt-clip".into()),
            ..CommonArgs::default()
        };
        let c = CliConfig::resolve(CommandKind::Converge, &args).unwrap();
        assert_eq!(c.hurst.value(), 0.5);
        assert_eq!(c.reaction, ReactionCase::SqrtClip);
        assert_eq!(c.samples, 200);
        assert_eq!(c.ladder.sizes(), vec![16, 32, 64, 128]);
    }

    #[test]
    fn invalid_values_are_rejected_before_running() {
        let bad = |args: CommonArgs| CliConfig::resolve(CommandKind::Converge, &args).is_err();
        assert!(bad(CommonArgs {
            hurst: Some(0.7),
            ..Default::default()
        }));
        assert!(bad(CommonArgs {
            reaction: Some("cubic".into()),
            ..Default::default()
        }));
        assert!(bad(CommonArgs {
            reaction: Some("linear:3".into()),
            ..Default::default()
        }));
        assert!(bad(CommonArgs {
            samples: Some(1),
            ..Default::default()
        }));
        assert!(bad(CommonArgs {
            ladder: Some("16-4".into()),
            ..Default::default()
        }));
    }
}
