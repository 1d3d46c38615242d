//! Switch counts and the two reported ratios.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::color::ColorSequence;
use crate::error::{Error, Result};

/// Adjacent pairs with different colors.
pub fn count_switches(seq: &ColorSequence) -> usize {
    seq.as_slice().windows(2).filter(|w| w[0] != w[1]).count()
}

/// Output switches over input switches; lower is better.
pub fn switch_ratio(input: &ColorSequence, output: &ColorSequence) -> Result<f64> {
    let before = count_switches(input);
    if before == 0 {
        return Err(Error::DegenerateInput("input has no color switches"));
    }
    Ok(count_switches(output) as f64 / before as f64)
}

/// Skipped items over input length.
pub fn excess_run(skipped: usize, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::DegenerateInput("empty input"));
    }
    Ok(skipped as f64 / n as f64)
}

/// Raw numbers of one trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialResult {
    /// Switches in the input.
    pub switches_in: usize,
    /// Switches in the output.
    pub switches_out: usize,
    /// Items sent back to the input tail.
    pub skipped: usize,
    /// Input length.
    pub n: usize,
}

impl TrialResult {
    /// Ratio, or `None` when the input had no switches.
    pub fn switch_ratio(&self) -> Option<f64> {
        (self.switches_in > 0).then(|| self.switches_out as f64 / self.switches_in as f64)
    }

    /// Excess run, 0 for an empty input.
    pub fn excess_run(&self) -> f64 {
        excess_run(self.skipped, self.n).unwrap_or(0.0)
    }
}

/// Means over the trials of one cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellMetrics {
    /// Mean switch ratio over non-degenerate trials (NaN if there are none).
    pub mean_switch_ratio: f64,
    /// Mean excess run over all trials.
    pub mean_excess_run: f64,
    /// Number of trials aggregated.
    pub trials: usize,
    /// Trials whose input had no switches; left out of the ratio mean.
    pub degenerate: usize,
    /// The raw trials, in trial order.
    pub per_trial: Vec<TrialResult>,
}

/// Arithmetic means over `rows`.
pub fn aggregate(rows: &[TrialResult]) -> Result<CellMetrics> {
    if rows.is_empty() {
        return Err(Error::EmptyAggregate);
    }
    let ratios: Vec<f64> = rows.iter().filter_map(TrialResult::switch_ratio).collect();
    let mean_switch_ratio = if ratios.is_empty() {
        f64::NAN
    } else {
        ratios.iter().sum::<f64>() / ratios.len() as f64
    };
    let mean_excess_run = rows.iter().map(TrialResult::excess_run).sum::<f64>() / rows.len() as f64;
    Ok(CellMetrics {
        mean_switch_ratio,
        mean_excess_run,
        trials: rows.len(),
        degenerate: rows.len() - ratios.len(),
        per_trial: rows.to_vec(),
    })
}
