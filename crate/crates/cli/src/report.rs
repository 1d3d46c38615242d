//! CSV and JSON encodings of experiment results.
//!
//! Both formats carry the base seed: CSV as a leading `# base_seed=...`
//! comment line, JSON as a top-level field. Floats are written with six
//! significant digits so the bytes do not depend on the platform's float
//! printing.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::config::{OutputFormat, RunConfig};
use crate::error::{CliError, Result};
use crate::runner::{ResultRow, SummaryRow};

/// CSV column names, in order.
pub const CSV_HEADER: [&str; 10] = [
    "distribution",
    "params",
    "n",
    "sigma",
    "k",
    "strategy",
    "trials",
    "mean_switch_ratio",
    "mean_excess_run",
    "degenerate",
];

/// Formats `x` with six significant digits, trailing zeros removed.
pub fn sig6(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x == 0.0 {
        return "0".into();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (5 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Writes rows as CSV, preceded by the base-seed comment.
pub fn write_csv<W: Write>(mut out: W, rows: &[ResultRow], base_seed: u64) -> Result<()> {
    writeln!(out, "# base_seed={base_seed}").map_err(|e| CliError::io("<csv>", e))?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            r.distribution.clone(),
            r.params.clone(),
            r.n.to_string(),
            r.sigma.to_string(),
            r.k.to_string(),
            r.strategy.to_string(),
            r.trials.to_string(),
            sig6(r.mean_switch_ratio),
            sig6(r.mean_excess_run),
            r.degenerate.to_string(),
        ])?;
    }
    w.flush().map_err(|e| CliError::io("<csv>", e))?;
    Ok(())
}

#[derive(Serialize)]
struct JsonRow<'a> {
    distribution: &'a str,
    params: &'a str,
    n: usize,
    sigma: usize,
    k: usize,
    strategy: String,
    trials: usize,
    mean_switch_ratio: String,
    mean_excess_run: String,
    degenerate: usize,
}

#[derive(Serialize)]
struct JsonEntry {
    strategy: String,
    mean_switch_ratio: String,
    best_cases: usize,
    mean_excess_run: String,
}

#[derive(Serialize)]
struct JsonSummary<'a> {
    distribution: &'a str,
    cells: usize,
    ties: usize,
    strategies: Vec<JsonEntry>,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    base_seed: u64,
    trials: usize,
    rows: Vec<JsonRow<'a>>,
    summary: Vec<JsonSummary<'a>>,
}

/// Writes rows and summary as one pretty-printed JSON document. Floats
/// are strings in the same six-digit form as the CSV.
pub fn write_json<W: Write>(
    mut out: W,
    rows: &[ResultRow],
    summary: &[SummaryRow],
    base_seed: u64,
    trials: usize,
) -> Result<()> {
    let report = JsonReport {
        base_seed,
        trials,
        rows: rows
            .iter()
            .map(|r| JsonRow {
                distribution: &r.distribution,
                params: &r.params,
                n: r.n,
                sigma: r.sigma,
                k: r.k,
                strategy: r.strategy.to_string(),
                trials: r.trials,
                mean_switch_ratio: sig6(r.mean_switch_ratio),
                mean_excess_run: sig6(r.mean_excess_run),
                degenerate: r.degenerate,
            })
            .collect(),
        summary: summary
            .iter()
            .map(|s| JsonSummary {
                distribution: &s.distribution,
                cells: s.cells,
                ties: s.ties,
                strategies: s
                    .strategies
                    .iter()
                    .map(|e| JsonEntry {
                        strategy: e.strategy.to_string(),
                        mean_switch_ratio: sig6(e.mean_switch_ratio),
                        best_cases: e.best_cases,
                        mean_excess_run: sig6(e.mean_excess_run),
                    })
                    .collect(),
            })
            .collect(),
    };
    serde_json::to_writer_pretty(&mut out, &report)?;
    writeln!(out).map_err(|e| CliError::io("<json>", e))?;
    Ok(())
}

/// Renders the summary as a plain-text table, one block per distribution.
pub fn format_summary(summary: &[SummaryRow]) -> String {
    let mut s = String::new();
    for row in summary {
        s.push_str(&format!("{} ({} cells", row.distribution, row.cells));
        if row.ties > 0 {
            s.push_str(&format!(", {} tied", row.ties));
        }
        s.push_str(")\n");
        for e in &row.strategies {
            s.push_str(&format!(
                "  {:<6} ratio {:.3}  best {:>3}  excess {:.3}\n",
                e.strategy.to_string(),
                e.mean_switch_ratio,
                e.best_cases,
                e.mean_excess_run
            ));
        }
    }
    s
}

/// Encodes results in the configured format to the configured destination
/// (stdout when none).
pub fn emit(cfg: &RunConfig, rows: &[ResultRow], summary: &[SummaryRow]) -> Result<()> {
    let mut buf = Vec::new();
    match cfg.format {
        OutputFormat::Csv => write_csv(&mut buf, rows, cfg.grid.base_seed)?,
        OutputFormat::Json => {
            write_json(&mut buf, rows, summary, cfg.grid.base_seed, cfg.grid.trials)?
        }
    }
    match &cfg.output {
        Some(path) => fs::write(path, &buf).map_err(|e| CliError::io(path.as_path(), e)),
        None => std::io::stdout()
            .write_all(&buf)
            .map_err(|e| CliError::io(Path::new("<stdout>"), e)),
    }
}
