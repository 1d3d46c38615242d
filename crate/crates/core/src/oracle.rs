//! Exact offline minimum number of output blocks, for small instances.
//!
//! Searches over lazy schedules: the buffer is always refilled before a
//! choice, a chosen color is emitted completely, and newly arriving items of
//! the chosen color are forwarded until none is left. Any schedule can be made
//! lazy without adding switches, so the minimum over lazy schedules is the
//! optimum.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use crate::color::{ColorId, ColorSequence};
use crate::error::{Error, Result};

/// Size limits for [`optimal_blocks_with_limits`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    /// Longest accepted input.
    pub max_n: usize,
    /// Most distinct colors accepted.
    pub max_sigma: usize,
}

/// Hard ceiling on `max_sigma`; the memo key stores counts in a fixed array.
pub const MAX_ORACLE_SIGMA: usize = 8;

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_n: 18,
            max_sigma: 6,
        }
    }
}

/// Search state: input position, buffered count per color, last color.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct OracleState {
    position: u16,
    counts: [u8; MAX_ORACLE_SIGMA],
    last: u8,
}

struct Solver<'a> {
    items: &'a [u8],
    k: usize,
    memo: BTreeMap<OracleState, u16>,
}

impl Solver<'_> {
    fn fill(&self, state: &mut OracleState) {
        let mut total: usize = state.counts.iter().map(|&c| c as usize).sum();
        while total < self.k && (state.position as usize) < self.items.len() {
            state.counts[self.items[state.position as usize] as usize] += 1;
            state.position += 1;
            total += 1;
        }
    }

    /// Blocks needed to finish from a filled state with no item of `last`
    /// buffered.
    fn solve(&mut self, state: OracleState) -> u16 {
        if state.counts.iter().all(|&c| c == 0) {
            return 0;
        }
        if let Some(&v) = self.memo.get(&state) {
            return v;
        }
        let mut best = u16::MAX;
        for color in 0..MAX_ORACLE_SIGMA {
            if state.counts[color] == 0 {
                continue;
            }
            let mut next = state;
            next.last = color as u8 + 1;
            loop {
                next.counts[color] = 0;
                self.fill(&mut next);
                if next.counts[color] == 0 {
                    break;
                }
            }
            best = best.min(1 + self.solve(next));
        }
        self.memo.insert(state, best);
        best
    }
}

/// Minimum number of same-color blocks any buffer schedule with `k` slots
/// can produce from `input`, within the default limits.
pub fn optimal_blocks(input: &ColorSequence, k: usize) -> Result<usize> {
    optimal_blocks_with_limits(input, k, OracleLimits::default())
}

/// [`optimal_blocks`] with explicit limits (`max_sigma` at most
/// [`MAX_ORACLE_SIGMA`], `max_n` at most 255).
pub fn optimal_blocks_with_limits(
    input: &ColorSequence,
    k: usize,
    limits: OracleLimits,
) -> Result<usize> {
    if k == 0 {
        return Err(Error::InvalidCapacity);
    }
    let max_sigma = limits.max_sigma.min(MAX_ORACLE_SIGMA);
    let max_n = limits.max_n.min(255);
    if input.len() > max_n {
        return Err(Error::InstanceTooLarge(format!(
            "n = {} exceeds {}",
            input.len(),
            max_n
        )));
    }
    let mut dense: Vec<ColorId> = input.iter().copied().collect();
    dense.sort_unstable();
    dense.dedup();
    if dense.len() > max_sigma {
        return Err(Error::InstanceTooLarge(format!(
            "sigma = {} exceeds {}",
            dense.len(),
            max_sigma
        )));
    }
    let items: Vec<u8> = input
        .iter()
        .map(|c| dense.binary_search(c).unwrap_or_default() as u8)
        .collect();

    let mut solver = Solver {
        items: &items,
        k,
        memo: BTreeMap::new(),
    };
    let mut start = OracleState {
        position: 0,
        counts: [0; MAX_ORACLE_SIGMA],
        last: 0,
    };
    solver.fill(&mut start);
    Ok(solver.solve(start) as usize)
}

/// Distinct colors in `input`; no schedule can beat one block per color.
pub fn blocks_lower_bound(input: &ColorSequence) -> usize {
    crate::lemma::profile(input).sigma
}
