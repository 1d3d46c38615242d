//! Experiment configuration: a flat `key = value` file.
//!
//! ```text
//! # reference grid at n = 1000 only
//! input_sizes      = 1000
//! color_fractions  = 1%, 2%, 5%
//! buffer_fractions = 0.01, 0.02, 0.05
//! distributions    = all
//! strategies       = bw, rc, picky
//! trials           = 50
//! base_seed        = 1
//! format           = csv
//! output           = results.csv
//! parallelism      = 8
//! ```
//!
//! Lists are comma-separated. In `distributions`, an item that is only
//! `key=value` continues the previous spec, so `negbinomial:p=0.3,r=5`
//! reads as one entry. `all` expands to the sixteen reference specs.
//! Keys that are absent take the reference-experiment defaults.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rebuf_core::{DatasetGrid, DistributionSpec, StrategyKind};

use crate::error::{CliError, Result};

/// Output encoding of the experiment runner.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    /// One CSV row per (cell, strategy).
    Csv,
    /// Rows plus the per-distribution summary as one JSON document.
    Json,
}

impl FromStr for OutputFormat {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(CliError::Config(format!("unknown format '{other}'"))),
        }
    }
}

/// Everything the experiment runner needs.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Grid axes, trial count and base seed.
    pub grid: DatasetGrid,
    /// Strategies evaluated on every cell, in column order.
    pub strategies: Vec<StrategyKind>,
    /// Destination; stdout when `None`.
    pub output: Option<PathBuf>,
    /// Encoding.
    pub format: OutputFormat,
    /// Worker threads.
    pub parallelism: usize,
}

/// Seed used when neither the config nor the environment provides one.
pub const DEFAULT_BASE_SEED: u64 = 1;

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            grid: DatasetGrid::paper_defaults(DEFAULT_BASE_SEED),
            strategies: vec![
                StrategyKind::BoundedWaste,
                StrategyKind::RandomChoice,
                StrategyKind::Picky,
            ],
            output: None,
            format: OutputFormat::Csv,
            parallelism: std::thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }
}

fn split_list(value: &str) -> impl Iterator<Item = &str> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty())
}

fn parse_fraction(s: &str) -> Option<f64> {
    match s.strip_suffix('%') {
        Some(pct) => pct.trim().parse::<f64>().ok().map(|p| p / 100.0),
        None => s.parse().ok(),
    }
}

/// Parses a distribution list (`all` for the sixteen reference specs),
/// gluing bare `key=value` items onto the previous spec.
pub fn parse_distributions(value: &str) -> rebuf_core::Result<Vec<DistributionSpec>> {
    if value.trim().eq_ignore_ascii_case("all") {
        return Ok(DistributionSpec::paper_set());
    }
    let mut raw: Vec<String> = Vec::new();
    for item in split_list(value) {
        let continues = !item.contains(':') && item.contains('=');
        match raw.last_mut() {
            Some(prev) if continues => {
                prev.push(',');
                prev.push_str(item);
            }
            _ => raw.push(item.to_string()),
        }
    }
    raw.iter().map(|s| s.parse()).collect()
}

impl RunConfig {
    /// Parses config text on top of the defaults.
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let mut cfg = RunConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
                continue;
            }
            let err = |message: String| CliError::Parse {
                path: path.to_path_buf(),
                line: i + 1,
                message,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err("expected 'key = value'".into()))?;
            let (key, value) = (key.trim(), value.trim());
            let list_of = |what: &str| -> Result<Vec<usize>> {
                split_list(value)
                    .map(|s| s.parse().map_err(|_| err(format!("bad {what} '{s}'"))))
                    .collect()
            };
            let fractions = || -> Result<Vec<f64>> {
                split_list(value)
                    .map(|s| parse_fraction(s).ok_or_else(|| err(format!("bad fraction '{s}'"))))
                    .collect()
            };
            match key {
                "input_sizes" => cfg.grid.input_sizes = list_of("input size")?,
                "color_fractions" => cfg.grid.color_fractions = fractions()?,
                "buffer_fractions" => cfg.grid.buffer_fractions = fractions()?,
                "distributions" => {
                    cfg.grid.distributions =
                        parse_distributions(value).map_err(|e| err(e.to_string()))?
                }
                "strategies" => {
                    cfg.strategies = split_list(value)
                        .map(|s| s.parse::<StrategyKind>().map_err(|e| err(e.to_string())))
                        .collect::<Result<_>>()?
                }
                "trials" => {
                    cfg.grid.trials = value.parse().map_err(|_| err("bad trials".into()))?
                }
                "base_seed" => {
                    cfg.grid.base_seed = value.parse().map_err(|_| err("bad base_seed".into()))?
                }
                "parallelism" => {
                    cfg.parallelism = value.parse().map_err(|_| err("bad parallelism".into()))?
                }
                "format" => cfg.format = value.parse().map_err(|e: CliError| err(e.to_string()))?,
                "output" => cfg.output = Some(PathBuf::from(value)),
                other => return Err(err(format!("unknown key '{other}'"))),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads and parses a config file.
    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        RunConfig::parse(&text, path)
    }

    /// Checks cross-field constraints.
    pub fn validate(&self) -> Result<()> {
        self.grid
            .validate()
            .map_err(|e| CliError::Config(e.to_string()))?;
        if self.strategies.is_empty() {
            return Err(CliError::Config("no strategies selected".into()));
        }
        if self.parallelism == 0 {
            return Err(CliError::Config("parallelism must be at least 1".into()));
        }
        Ok(())
    }
}
