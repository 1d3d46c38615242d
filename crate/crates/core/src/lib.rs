//! Reordering buffer management with uniform switch cost.
//!
//! A stream of colored items passes through a buffer of `k` slots; a strategy
//! decides which color to emit next so that the output contains as few color
//! switches as possible. This crate holds everything that does not need an
//! operating system:
//!
//! - [`engine`]: the lazy buffer state machine and its step trace,
//! - [`strategies`]: MCF, Bounded Waste, Random Choice and Picky,
//! - [`lemma`]: minimum buffer size for which MCF cannot split a color,
//! - [`oracle`]: exact offline block minimum for small instances,
//! - [`gen`]: truncated discrete distributions and the experiment grid,
//! - [`metrics`]: switch counting, switch ratio, excess run, aggregation.
//!
//! File formats, the experiment runner and the command line live in the
//! `rebuf` crate.

#![no_std]
#![warn(missing_docs)]

extern crate alloc;

pub mod color;
pub mod engine;
pub mod error;
pub mod gen;
pub mod lemma;
pub mod metrics;
pub mod oracle;
pub mod strategies;

pub use color::{ColorId, ColorSequence};
pub use engine::{
    buffer_view, replay, simulate, simulate_with, BufferState, ColorEntry, Replay,
    SimulationResult, Stage, StrategyView, TraceEvent, TraceKind,
};
pub use error::{Error, Result};
pub use gen::{
    dataset_seed, grid_expand, sample_sequence, strategy_seed, trial_seed, DatasetGrid,
    DistributionKind, DistributionSpec, ExperimentCell, Sampler,
};
pub use lemma::{k_min, k_min_branches, predicate_p, profile, KMin, SequenceProfile};
pub use metrics::{aggregate, count_switches, excess_run, switch_ratio, CellMetrics, TrialResult};
pub use oracle::{blocks_lower_bound, optimal_blocks, optimal_blocks_with_limits, OracleLimits};
pub use strategies::{
    bw_select, mcf_select, picky_decide, rc_select, BoundedWaste, BwState, MostCommonFirst, Picky,
    PickyState, RandomChoice, Strategy, StrategyDecision, StrategyKind,
};
