//! Error type shared by every module.

use alloc::string::String;

/// Errors raised by the simulation core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Color identifiers start at 1.
    #[error("invalid color id {0}, colors start at 1")]
    InvalidColor(u32),
    /// An item lies outside the declared color universe.
    #[error("color {color} outside universe 1..={sigma}")]
    ColorOutOfRange {
        /// Offending color.
        color: u32,
        /// Declared universe size.
        sigma: u32,
    },
    /// Buffer capacity must be positive.
    #[error("buffer capacity must be at least 1")]
    InvalidCapacity,
    /// A strategy named a color that is not in the buffer.
    #[error("strategy chose color {0}, which is not in the buffer")]
    IllegalDecision(u32),
    /// Skips are reserved for skip-capable strategies while input remains.
    #[error("skip not permitted: {0}")]
    SkipNotPermitted(&'static str),
    /// A strategy was consulted on an empty buffer.
    #[error("strategy consulted with an empty buffer")]
    EmptyBuffer,
    /// Random Choice needs a seed.
    #[error("strategy {0} is randomized and needs a seed")]
    MissingSeed(&'static str),
    /// Profile with no colors.
    #[error("profile needs at least one color")]
    InvalidProfile,
    /// The exact solver refuses instances above its limits.
    #[error("instance too large for the exact solver: {0}")]
    InstanceTooLarge(String),
    /// Distribution parameters out of range or unparsable.
    #[error("invalid distribution spec: {0}")]
    InvalidSpec(String),
    /// Ratio undefined for this input.
    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),
    /// Aggregation over nothing.
    #[error("cannot aggregate zero trials")]
    EmptyAggregate,
    /// Unknown strategy name.
    #[error("unknown strategy '{0}' (expected mcf, bw, rc or picky)")]
    UnknownStrategy(String),
}

/// Result alias for this crate.
pub type Result<T, E = Error> = core::result::Result<T, E>;
