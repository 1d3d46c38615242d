//! Color selection strategies.
//!
//! All deterministic tie-breaks go to the color whose oldest buffered item
//! arrived first, so runs are reproducible and follow buffer order.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use core::fmt;
use core::str::FromStr;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::color::ColorId;
use crate::engine::StrategyView;
use crate::error::{Error, Result};

/// What a strategy asks the engine to do.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrategyDecision {
    /// Emit every buffered item of this color and make it the output color.
    SelectColor(ColorId),
    /// Send the newest buffered item of this color to the input tail.
    SkipOne(ColorId),
}

/// A color selection policy driven by the engine.
pub trait Strategy: Send {
    /// Which registered strategy this is.
    fn kind(&self) -> StrategyKind;

    /// Called when the buffer is non-empty and holds no item of the current
    /// output color.
    fn decide(&mut self, view: &StrategyView<'_>) -> Result<StrategyDecision>;

    /// Whether the engine honors [`StrategyDecision::SkipOne`].
    fn can_skip(&self) -> bool {
        false
    }

    /// Notification that `items` of `color` were just emitted.
    fn on_emit(&mut self, _color: ColorId, _items: usize) {}
}

/// The registered strategies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum StrategyKind {
    /// Most Common First.
    Mcf,
    /// Bounded Waste.
    BoundedWaste,
    /// Random Choice.
    RandomChoice,
    /// Picky.
    Picky,
}

impl StrategyKind {
    /// Every variant, in CLI order.
    pub const ALL: [StrategyKind; 4] = [
        StrategyKind::Mcf,
        StrategyKind::BoundedWaste,
        StrategyKind::RandomChoice,
        StrategyKind::Picky,
    ];

    /// Name used on the command line and in result files.
    pub fn name(self) -> &'static str {
        match self {
            StrategyKind::Mcf => "mcf",
            StrategyKind::BoundedWaste => "bw",
            StrategyKind::RandomChoice => "rc",
            StrategyKind::Picky => "picky",
        }
    }

    /// Only Random Choice draws random numbers.
    pub fn is_randomized(self) -> bool {
        matches!(self, StrategyKind::RandomChoice)
    }

    /// Only Picky skips.
    pub fn is_skip_capable(self) -> bool {
        matches!(self, StrategyKind::Picky)
    }

    /// Fresh per-run strategy state.
    pub fn build(self, seed: Option<u64>) -> Result<Box<dyn Strategy>> {
        Ok(match self {
            StrategyKind::Mcf => Box::new(MostCommonFirst),
            StrategyKind::BoundedWaste => Box::new(BoundedWaste::default()),
            StrategyKind::RandomChoice => {
                let seed = seed.ok_or(Error::MissingSeed("rc"))?;
                Box::new(RandomChoice::from_seed(seed))
            }
            StrategyKind::Picky => Box::new(Picky::default()),
        })
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StrategyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        StrategyKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownStrategy(s.into()))
    }
}

/// Selects the most frequent buffered color.
pub fn mcf_select(view: &StrategyView<'_>) -> Result<StrategyDecision> {
    view.most_frequent()
        .map(|(c, _)| StrategyDecision::SelectColor(c))
        .ok_or(Error::EmptyBuffer)
}

/// Most Common First.
#[derive(Debug, Clone, Copy, Default)]
pub struct MostCommonFirst;

impl Strategy for MostCommonFirst {
    fn kind(&self) -> StrategyKind {
        StrategyKind::Mcf
    }

    fn decide(&mut self, view: &StrategyView<'_>) -> Result<StrategyDecision> {
        mcf_select(view)
    }
}

/// Bounded Waste penalty accumulators.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BwState {
    /// Accumulated waste per color. Colors that left the buffer keep theirs.
    pub penalties: BTreeMap<ColorId, u64>,
}

/// One Bounded Waste decision.
///
/// Every buffered color is charged its current count, then the color with
/// the largest accumulated charge is selected (ties: larger count, then
/// oldest arrival) and its charge is cleared.
pub fn bw_select(view: &StrategyView<'_>, state: &mut BwState) -> Result<StrategyDecision> {
    let mut best: Option<(ColorId, u64, usize, u64)> = None;
    for (c, entry) in view.entries() {
        let p = state.penalties.entry(c).or_insert(0);
        *p += entry.count as u64;
        let candidate = (c, *p, entry.count, entry.oldest_arrival);
        let better = match best {
            None => true,
            Some((_, bp, bc, ba)) => {
                (*p, entry.count, core::cmp::Reverse(entry.oldest_arrival))
                    > (bp, bc, core::cmp::Reverse(ba))
            }
        };
        if better {
            best = Some(candidate);
        }
    }
    let (chosen, ..) = best.ok_or(Error::EmptyBuffer)?;
    state.penalties.insert(chosen, 0);
    Ok(StrategyDecision::SelectColor(chosen))
}

/// Bounded Waste.
#[derive(Debug, Clone, Default)]
pub struct BoundedWaste {
    state: BwState,
}

impl BoundedWaste {
    /// Current accumulators.
    pub fn state(&self) -> &BwState {
        &self.state
    }
}

impl Strategy for BoundedWaste {
    fn kind(&self) -> StrategyKind {
        StrategyKind::BoundedWaste
    }

    fn decide(&mut self, view: &StrategyView<'_>) -> Result<StrategyDecision> {
        bw_select(view, &mut self.state)
    }
}

/// Uniform draw over the distinct buffered colors (ascending id order).
pub fn rc_select<R: RngCore + ?Sized>(
    view: &StrategyView<'_>,
    rng: &mut R,
) -> Result<StrategyDecision> {
    let n = view.distinct();
    if n == 0 {
        return Err(Error::EmptyBuffer);
    }
    let pick = rng.random_range(0..n);
    let (c, _) = view.entries().nth(pick).ok_or(Error::EmptyBuffer)?;
    Ok(StrategyDecision::SelectColor(c))
}

/// Random Choice with its own ChaCha8 stream.
#[derive(Debug, Clone)]
pub struct RandomChoice {
    rng: ChaCha8Rng,
}

impl RandomChoice {
    /// Seeds the generator.
    pub fn from_seed(seed: u64) -> Self {
        RandomChoice {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl Strategy for RandomChoice {
    fn kind(&self) -> StrategyKind {
        StrategyKind::RandomChoice
    }

    fn decide(&mut self, view: &StrategyView<'_>) -> Result<StrategyDecision> {
        rc_select(view, &mut self.rng)
    }
}

/// Picky's per-round skip budget.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PickyState {
    /// Skips made since the last emission.
    pub exit_counter: usize,
}

/// Smallest count a color needs to be selectable twice without splitting:
/// `2 * ceil(k / distinct)`.
pub fn picky_threshold(k: usize, distinct: usize) -> usize {
    2 * k.div_ceil(distinct.max(1))
}

/// One Picky decision.
///
/// While the most frequent color reaches `2 * ceil(k / σ′)` the buffer is
/// too small for the colors it holds, so the newest item of the least
/// frequent color goes back to the input, at most as many times in a row as
/// there are items still queued. Otherwise the most frequent color is
/// selected.
pub fn picky_decide(view: &StrategyView<'_>, state: &mut PickyState) -> Result<StrategyDecision> {
    let (top, top_count) = view.most_frequent().ok_or(Error::EmptyBuffer)?;
    let threshold = picky_threshold(view.capacity(), view.distinct());
    if top_count >= threshold
        && !view.input_exhausted()
        && state.exit_counter < view.input_remaining()
    {
        if let Some((rare, _)) = view.least_frequent() {
            state.exit_counter += 1;
            return Ok(StrategyDecision::SkipOne(rare));
        }
    }
    Ok(StrategyDecision::SelectColor(top))
}

/// Picky.
#[derive(Debug, Clone, Default)]
pub struct Picky {
    state: PickyState,
}

impl Picky {
    /// Current skip budget state.
    pub fn state(&self) -> PickyState {
        self.state
    }
}

impl Strategy for Picky {
    fn kind(&self) -> StrategyKind {
        StrategyKind::Picky
    }

    fn decide(&mut self, view: &StrategyView<'_>) -> Result<StrategyDecision> {
        picky_decide(view, &mut self.state)
    }

    fn can_skip(&self) -> bool {
        true
    }

    fn on_emit(&mut self, _color: ColorId, _items: usize) {
        self.state.exit_counter = 0;
    }
}
