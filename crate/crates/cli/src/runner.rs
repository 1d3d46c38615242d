//! Runs every (cell, trial, strategy) of a grid and aggregates the results.
//!
//! Each trial's input is sampled from the cell's data-set seed, so all
//! strategies and all buffer sizes of a data set see the same sequences.
//! Cells run on a rayon pool; results are collected by cell index and
//! returned in grid order whatever the execution order was.

use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::Serialize;

use rebuf_core::gen::strategy_seed;
use rebuf_core::{
    aggregate, count_switches, grid_expand, sample_sequence, simulate, CellMetrics, ExperimentCell,
    StrategyKind, TrialResult,
};

use crate::config::RunConfig;
use crate::error::{CliError, Result};

/// One output row: a cell evaluated with one strategy.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRow {
    /// Distribution family, e.g. `zipf`.
    pub distribution: String,
    /// Parameters, e.g. `a=1.1`.
    pub params: String,
    /// Input length.
    pub n: usize,
    /// Colors.
    pub sigma: usize,
    /// Buffer size.
    pub k: usize,
    /// Strategy name.
    pub strategy: StrategyKind,
    /// Trials run.
    pub trials: usize,
    /// Mean output/input switch ratio.
    pub mean_switch_ratio: f64,
    /// Mean skipped items per input item.
    pub mean_excess_run: f64,
    /// Trials left out of the ratio mean.
    pub degenerate: usize,
    /// Index of the cell in grid order.
    #[serde(skip)]
    pub cell: usize,
}

/// Runs one trial of `cell` for every strategy.
pub fn run_trial(
    cell: &ExperimentCell,
    trial: usize,
    strategies: &[StrategyKind],
) -> Result<Vec<TrialResult>> {
    let seed = cell.trial_seed(trial);
    let input = sample_sequence(&cell.distribution, cell.n, cell.sigma, seed)?;
    let switches_in = count_switches(&input);
    strategies
        .iter()
        .map(|&kind| {
            let r = simulate(&input, cell.k, kind, Some(strategy_seed(seed, kind.name())))?;
            Ok(TrialResult {
                switches_in,
                switches_out: count_switches(&r.output),
                skipped: r.skipped_count,
                n: cell.n,
            })
        })
        .collect()
}

/// All trials of one cell, one [`CellMetrics`] per strategy.
pub fn run_cell(cell: &ExperimentCell, strategies: &[StrategyKind]) -> Result<Vec<CellMetrics>> {
    let mut per_strategy: Vec<Vec<TrialResult>> =
        vec![Vec::with_capacity(cell.trials); strategies.len()];
    for trial in 0..cell.trials {
        for (slot, result) in per_strategy
            .iter_mut()
            .zip(run_trial(cell, trial, strategies)?)
        {
            slot.push(result);
        }
    }
    per_strategy
        .iter()
        .map(|rows| aggregate(rows).map_err(CliError::from))
        .collect()
}

/// Runs `cells` on `parallelism` threads. `progress` is called with the
/// number of finished cells after each one completes.
pub fn run_cells(
    cells: &[ExperimentCell],
    strategies: &[StrategyKind],
    parallelism: usize,
    progress: &(dyn Fn(usize, usize) + Sync),
) -> Result<Vec<ResultRow>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism.max(1))
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    let done = AtomicUsize::new(0);
    let per_cell: Vec<Result<Vec<ResultRow>>> = pool.install(|| {
        cells
            .par_iter()
            .map(|cell| {
                let metrics = run_cell(cell, strategies)?;
                progress(done.fetch_add(1, Ordering::Relaxed) + 1, cells.len());
                let kind = cell.distribution.kind();
                Ok(strategies
                    .iter()
                    .zip(metrics)
                    .map(|(&strategy, m)| ResultRow {
                        distribution: kind.name().to_string(),
                        params: cell.distribution.params(),
                        n: cell.n,
                        sigma: cell.sigma,
                        k: cell.k,
                        strategy,
                        trials: m.trials,
                        mean_switch_ratio: m.mean_switch_ratio,
                        mean_excess_run: m.mean_excess_run,
                        degenerate: m.degenerate,
                        cell: cell.index,
                    })
                    .collect())
            })
            .collect()
    });
    let mut rows = Vec::with_capacity(cells.len() * strategies.len());
    for r in per_cell {
        rows.extend(r?);
    }
    Ok(rows)
}

/// Expands the grid and runs it.
pub fn run_experiment(
    cfg: &RunConfig,
    progress: &(dyn Fn(usize, usize) + Sync),
) -> Result<Vec<ResultRow>> {
    cfg.validate()?;
    let cells = grid_expand(&cfg.grid);
    run_cells(&cells, &cfg.strategies, cfg.parallelism, progress)
}

/// Per-distribution, per-strategy aggregate in the layout of the summary
/// table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryEntry {
    /// Strategy.
    pub strategy: StrategyKind,
    /// Mean of the cell means.
    pub mean_switch_ratio: f64,
    /// Cells where this strategy had the smallest mean ratio.
    pub best_cases: usize,
    /// Mean of the cell excess runs.
    pub mean_excess_run: f64,
}

/// Summary of one distribution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    /// Full spec string.
    pub distribution: String,
    /// Cells of this distribution.
    pub cells: usize,
    /// Cells where several strategies tied for best.
    pub ties: usize,
    /// One entry per strategy, in config order.
    pub strategies: Vec<SummaryEntry>,
}

fn spec_label(row: &ResultRow) -> String {
    if row.params.is_empty() {
        row.distribution.clone()
    } else {
        format!("{}:{}", row.distribution, row.params)
    }
}

/// Strategies with the smallest mean ratio in each cell. Cells whose ratios
/// are all NaN award nobody.
pub fn best_per_cell(rows: &[ResultRow]) -> Vec<(usize, Vec<StrategyKind>)> {
    let mut out: Vec<(usize, Vec<StrategyKind>)> = Vec::new();
    for chunk in rows.chunk_by(|a, b| a.cell == b.cell) {
        let best = chunk
            .iter()
            .map(|r| r.mean_switch_ratio)
            .filter(|x| !x.is_nan())
            .fold(f64::INFINITY, f64::min);
        let winners = chunk
            .iter()
            .filter(|r| r.mean_switch_ratio == best)
            .map(|r| r.strategy)
            .collect();
        out.push((chunk[0].cell, winners));
    }
    out
}

/// Builds the per-distribution summary from grid-ordered rows.
pub fn summarize(rows: &[ResultRow], strategies: &[StrategyKind]) -> Vec<SummaryRow> {
    let best: std::collections::HashMap<usize, Vec<StrategyKind>> =
        best_per_cell(rows).into_iter().collect();
    let mut order: Vec<String> = Vec::new();
    for r in rows {
        let label = spec_label(r);
        if !order.contains(&label) {
            order.push(label);
        }
    }
    order
        .into_iter()
        .map(|label| {
            let mine: Vec<&ResultRow> = rows.iter().filter(|r| spec_label(r) == label).collect();
            let mut cells: Vec<usize> = mine.iter().map(|r| r.cell).collect();
            cells.dedup();
            let ties = cells.iter().filter(|c| best[c].len() > 1).count();
            let entries = strategies
                .iter()
                .map(|&s| {
                    let of: Vec<&&ResultRow> = mine.iter().filter(|r| r.strategy == s).collect();
                    let finite: Vec<f64> = of
                        .iter()
                        .map(|r| r.mean_switch_ratio)
                        .filter(|x| !x.is_nan())
                        .collect();
                    SummaryEntry {
                        strategy: s,
                        mean_switch_ratio: finite.iter().sum::<f64>() / finite.len().max(1) as f64,
                        best_cases: cells.iter().filter(|c| best[c].contains(&s)).count(),
                        mean_excess_run: of.iter().map(|r| r.mean_excess_run).sum::<f64>()
                            / of.len().max(1) as f64,
                    }
                })
                .collect();
            SummaryRow {
                distribution: label,
                cells: cells.len(),
                ties,
                strategies: entries,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rebuf_core::{DatasetGrid, DistributionSpec};

    fn tiny(trials: usize) -> RunConfig {
        RunConfig {
            grid: DatasetGrid {
                input_sizes: vec![200],
                color_fractions: vec![0.05],
                buffer_fractions: vec![0.05, 0.1],
                distributions: vec![DistributionSpec::Uniform, DistributionSpec::Zipf { a: 2.0 }],
                trials,
                base_seed: 3,
            },
            parallelism: 2,
            ..RunConfig::default()
        }
    }

    #[test]
    fn rows_in_grid_order() {
        let rows = run_experiment(&tiny(2), &|_, _| {}).unwrap();
        assert_eq!(rows.len(), 4 * 3);
        let cells: Vec<usize> = rows.iter().map(|r| r.cell).collect();
        assert_eq!(cells, [0, 0, 0, 1, 1, 1, 2, 2, 2, 3, 3, 3]);
        assert!(rows.iter().all(|r| r.trials == 2));
        assert!(rows
            .iter()
            .filter(|r| r.strategy != StrategyKind::Picky)
            .all(|r| r.mean_excess_run == 0.0));
    }

    #[test]
    fn parallelism_does_not_change_results() {
        let mut a = tiny(3);
        a.parallelism = 1;
        let mut b = tiny(3);
        b.parallelism = 4;
        assert_eq!(
            run_experiment(&a, &|_, _| {}).unwrap(),
            run_experiment(&b, &|_, _| {}).unwrap()
        );
    }

    #[test]
    fn summary_counts_best_cases() {
        let cfg = tiny(2);
        let rows = run_experiment(&cfg, &|_, _| {}).unwrap();
        let summary = summarize(&rows, &cfg.strategies);
        assert_eq!(summary.len(), 2);
        for s in &summary {
            assert_eq!(s.cells, 2);
            let awarded: usize = s.strategies.iter().map(|e| e.best_cases).sum();
            assert!(awarded >= s.cells);
        }
    }

    #[test]
    fn exact_ties_award_everyone() {
        let row = |cell, strategy, ratio| ResultRow {
            distribution: "uniform".into(),
            params: String::new(),
            n: 10,
            sigma: 2,
            k: 2,
            strategy,
            trials: 1,
            mean_switch_ratio: ratio,
            mean_excess_run: 0.0,
            degenerate: 0,
            cell,
        };
        let rows = [
            row(0, StrategyKind::BoundedWaste, 0.5),
            row(0, StrategyKind::Picky, 0.5),
            row(1, StrategyKind::BoundedWaste, 0.6),
            row(1, StrategyKind::Picky, 0.4),
        ];
        let best = best_per_cell(&rows);
        assert_eq!(best[0].1, [StrategyKind::BoundedWaste, StrategyKind::Picky]);
        assert_eq!(best[1].1, [StrategyKind::Picky]);
        let s = summarize(&rows, &[StrategyKind::BoundedWaste, StrategyKind::Picky]);
        assert_eq!(s[0].ties, 1);
        assert_eq!(s[0].strategies[1].best_cases, 2);
    }
}
