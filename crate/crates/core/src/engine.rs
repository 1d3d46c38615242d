//! The lazy reordering buffer.
//!
//! [`simulate_with`] drives a [`Strategy`] through an input sequence. Each
//! round the buffer is refilled from the head of the input; items of the
//! current output color are forwarded without asking the strategy; only when
//! the buffer is full (or the input is exhausted) and holds no item of the
//! current color is the strategy consulted. It either selects a color, which
//! empties that color from the buffer, or (Picky only) sends the newest item
//! of a color back to the tail of the input.
//!
//! Every step is recorded as a [`TraceEvent`]; [`replay`] re-executes a trace
//! against the original input to recover the buffer contents at each stage
//! and the permutation that maps output positions to input positions.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::color::{ColorId, ColorSequence};
use crate::error::{Error, Result};
use crate::strategies::{Strategy, StrategyDecision, StrategyKind};

/// Per-color bookkeeping inside the buffer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ColorEntry {
    /// Items of this color currently buffered.
    pub count: usize,
    /// Arrival index of the oldest buffered item of this color.
    pub oldest_arrival: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Slot {
    color: ColorId,
    arrival: u64,
    origin: usize,
}

/// The size-`k` reordering buffer: items in arrival order plus a per-color
/// histogram kept in lockstep with them.
#[derive(Debug, Clone)]
pub struct BufferState {
    capacity: usize,
    slots: VecDeque<Slot>,
    counts: BTreeMap<ColorId, ColorEntry>,
    next_arrival: u64,
}

impl BufferState {
    /// An empty buffer of `capacity` slots.
    pub fn new(capacity: usize) -> Result<Self> {
        if capacity == 0 {
            return Err(Error::InvalidCapacity);
        }
        Ok(BufferState {
            capacity,
            slots: VecDeque::with_capacity(capacity),
            counts: BTreeMap::new(),
            next_arrival: 0,
        })
    }

    /// Builds a buffer holding `colors` in the given arrival order.
    ///
    /// Handy for handing a fixed snapshot to a strategy. Fails if there are
    /// more items than slots.
    pub fn with_contents(capacity: usize, colors: &[ColorId]) -> Result<Self> {
        let mut buffer = BufferState::new(capacity)?;
        if colors.len() > capacity {
            return Err(Error::InvalidCapacity);
        }
        for (i, &c) in colors.iter().enumerate() {
            buffer.push(c, i);
        }
        Ok(buffer)
    }

    /// Slot count `k`.
    pub fn capacity(&self) -> usize {
        self.capacity
    }

    /// Items currently buffered.
    pub fn occupancy(&self) -> usize {
        self.slots.len()
    }

    /// True when no slot is free.
    pub fn is_full(&self) -> bool {
        self.slots.len() == self.capacity
    }

    /// True when the buffer holds nothing.
    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    /// Buffered items of `color`.
    pub fn count(&self, color: ColorId) -> usize {
        self.counts.get(&color).map_or(0, |e| e.count)
    }

    /// Number of distinct buffered colors.
    pub fn distinct(&self) -> usize {
        self.counts.len()
    }

    /// Buffered colors in ascending id order.
    pub fn entries(&self) -> impl Iterator<Item = (ColorId, ColorEntry)> + '_ {
        self.counts.iter().map(|(&c, &e)| (c, e))
    }

    /// Buffered colors in arrival order, oldest first.
    pub fn arrival_order(&self) -> impl Iterator<Item = ColorId> + '_ {
        self.slots.iter().map(|s| s.color)
    }

    fn push(&mut self, color: ColorId, origin: usize) {
        debug_assert!(self.slots.len() < self.capacity);
        let arrival = self.next_arrival;
        self.next_arrival += 1;
        self.slots.push_back(Slot {
            color,
            arrival,
            origin,
        });
        self.counts
            .entry(color)
            .and_modify(|e| e.count += 1)
            .or_insert(ColorEntry {
                count: 1,
                oldest_arrival: arrival,
            });
        self.debug_check();
    }

    /// Removes every item of `color`, returning their input origins in
    /// arrival order.
    fn take_color(&mut self, color: ColorId) -> Vec<usize> {
        let mut taken = Vec::with_capacity(self.count(color));
        self.slots.retain(|s| {
            if s.color == color {
                taken.push(s.origin);
                false
            } else {
                true
            }
        });
        self.counts.remove(&color);
        self.debug_check();
        taken
    }

    /// Removes the most recently arrived item of `color`.
    fn take_newest(&mut self, color: ColorId) -> Option<Slot> {
        let pos = self.slots.iter().rposition(|s| s.color == color)?;
        let slot = self.slots.remove(pos)?;
        match self.counts.get_mut(&color) {
            Some(e) if e.count > 1 => e.count -= 1,
            _ => {
                self.counts.remove(&color);
            }
        }
        self.debug_check();
        Some(slot)
    }

    #[inline]
    fn debug_check(&self) {
        #[cfg(debug_assertions)]
        {
            assert!(self.slots.len() <= self.capacity);
            let mut hist: BTreeMap<ColorId, ColorEntry> = BTreeMap::new();
            let mut last = None;
            for s in &self.slots {
                assert!(last.is_none_or(|a| a < s.arrival), "arrivals out of order");
                last = Some(s.arrival);
                hist.entry(s.color)
                    .and_modify(|e| e.count += 1)
                    .or_insert(ColorEntry {
                        count: 1,
                        oldest_arrival: s.arrival,
                    });
            }
            assert_eq!(hist, self.counts, "histogram out of sync with slots");
        }
    }
}

/// Read-only snapshot handed to a strategy at each consultation.
#[derive(Debug, Clone, Copy)]
pub struct StrategyView<'a> {
    buffer: &'a BufferState,
    input_remaining: usize,
    current: Option<ColorId>,
}

impl<'a> StrategyView<'a> {
    /// View of `buffer` with `input_remaining` items still queued.
    pub fn new(buffer: &'a BufferState, input_remaining: usize) -> Self {
        StrategyView {
            buffer,
            input_remaining,
            current: None,
        }
    }

    fn with_current(mut self, current: Option<ColorId>) -> Self {
        self.current = current;
        self
    }

    /// Buffer capacity `k`.
    pub fn capacity(&self) -> usize {
        self.buffer.capacity()
    }

    /// Items in the buffer.
    pub fn occupancy(&self) -> usize {
        self.buffer.occupancy()
    }

    /// Distinct colors in the buffer (σ′).
    pub fn distinct(&self) -> usize {
        self.buffer.distinct()
    }

    /// Buffered items of `color`.
    pub fn count(&self, color: ColorId) -> usize {
        self.buffer.count(color)
    }

    /// Colors with their counts, ascending by id.
    pub fn entries(&self) -> impl Iterator<Item = (ColorId, ColorEntry)> + 'a {
        self.buffer.entries()
    }

    /// Buffered items' colors, oldest first.
    pub fn arrival_order(&self) -> impl Iterator<Item = ColorId> + 'a {
        self.buffer.arrival_order()
    }

    /// Items still waiting in the input, including re-queued ones.
    pub fn input_remaining(&self) -> usize {
        self.input_remaining
    }

    /// True once the input queue is empty.
    pub fn input_exhausted(&self) -> bool {
        self.input_remaining == 0
    }

    /// The last selected output color, if any.
    pub fn current_color(&self) -> Option<ColorId> {
        self.current
    }

    /// Highest count; ties go to the color whose oldest item arrived first.
    pub fn most_frequent(&self) -> Option<(ColorId, usize)> {
        self.buffer
            .counts
            .iter()
            .min_by_key(|(_, e)| (core::cmp::Reverse(e.count), e.oldest_arrival))
            .map(|(&c, e)| (c, e.count))
    }

    /// Lowest count; ties go to the color whose oldest item arrived first.
    pub fn least_frequent(&self) -> Option<(ColorId, usize)> {
        self.buffer
            .counts
            .iter()
            .min_by_key(|(_, e)| (e.count, e.oldest_arrival))
            .map(|(&c, e)| (c, e.count))
    }
}

/// Read-only view of `state` for a strategy.
pub fn buffer_view(state: &BufferState, input_remaining: usize) -> StrategyView<'_> {
    StrategyView::new(state, input_remaining)
}

/// Kinds of recorded steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TraceKind {
    /// Items moved from the input head into the buffer.
    Fill,
    /// Items of the current output color forwarded without a decision.
    ForwardCurrentColor,
    /// Strategy selected a color while input remained.
    Select,
    /// Newest item of a color sent back to the input tail.
    Skip,
    /// Strategy selected a color after the input was exhausted.
    Drain,
}

/// One recorded step.
///
/// `input_remaining` and `buffer_occupancy` describe the moment of the
/// decision for `Select`, `Drain`, `Skip` and `ForwardCurrentColor`
/// (before anything moves), and the state after the move for `Fill`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEvent {
    /// Step kind.
    pub kind: TraceKind,
    /// Color acted on; `None` for fills.
    pub color: Option<ColorId>,
    /// Number of items moved by this step.
    pub items: usize,
    /// Items left in the input queue.
    pub input_remaining: usize,
    /// Items in the buffer.
    pub buffer_occupancy: usize,
}

/// Everything a run produces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationResult {
    /// Emitted items in order.
    pub output: ColorSequence,
    /// Items routed back to the input tail.
    pub skipped_count: usize,
    /// Step trace.
    pub trace: Vec<TraceEvent>,
    /// One entry per strategy selection: the color and whether the buffer
    /// was full at that moment.
    pub full_buffer_selections: Vec<(ColorId, bool)>,
}

/// Runs `kind` over `input` with buffer size `k`.
///
/// `seed` is required for Random Choice and ignored by the deterministic
/// strategies.
pub fn simulate(
    input: &ColorSequence,
    k: usize,
    kind: StrategyKind,
    seed: Option<u64>,
) -> Result<SimulationResult> {
    if k == 0 {
        return Err(Error::InvalidCapacity);
    }
    let mut strategy = kind.build(seed)?;
    simulate_with(input, k, strategy.as_mut())
}

/// Runs an arbitrary strategy over `input` with buffer size `k`.
pub fn simulate_with(
    input: &ColorSequence,
    k: usize,
    strategy: &mut dyn Strategy,
) -> Result<SimulationResult> {
    let mut buffer = BufferState::new(k)?;
    let mut queue: VecDeque<(ColorId, usize)> = input
        .iter()
        .copied()
        .enumerate()
        .map(|(i, c)| (c, i))
        .collect();
    let mut output = Vec::with_capacity(input.len());
    let mut trace = Vec::new();
    let mut selections = Vec::new();
    let mut skipped_count = 0;
    let mut current: Option<ColorId> = None;
    let skip_capable = strategy.can_skip();

    loop {
        let mut moved = 0;
        while !buffer.is_full() {
            let Some((c, origin)) = queue.pop_front() else {
                break;
            };
            buffer.push(c, origin);
            moved += 1;
        }
        if moved > 0 {
            trace.push(TraceEvent {
                kind: TraceKind::Fill,
                color: None,
                items: moved,
                input_remaining: queue.len(),
                buffer_occupancy: buffer.occupancy(),
            });
        }

        if let Some(c) = current {
            let present = buffer.count(c);
            if present > 0 {
                trace.push(TraceEvent {
                    kind: TraceKind::ForwardCurrentColor,
                    color: Some(c),
                    items: present,
                    input_remaining: queue.len(),
                    buffer_occupancy: buffer.occupancy(),
                });
                buffer.take_color(c);
                output.extend(core::iter::repeat_n(c, present));
                strategy.on_emit(c, present);
                continue;
            }
        }

        if buffer.is_empty() {
            debug_assert!(queue.is_empty());
            break;
        }

        let view = StrategyView::new(&buffer, queue.len()).with_current(current);
        match strategy.decide(&view)? {
            StrategyDecision::SelectColor(c) => {
                let present = buffer.count(c);
                if present == 0 {
                    return Err(Error::IllegalDecision(c.get()));
                }
                let kind = if queue.is_empty() {
                    TraceKind::Drain
                } else {
                    TraceKind::Select
                };
                trace.push(TraceEvent {
                    kind,
                    color: Some(c),
                    items: present,
                    input_remaining: queue.len(),
                    buffer_occupancy: buffer.occupancy(),
                });
                selections.push((c, buffer.is_full()));
                buffer.take_color(c);
                output.extend(core::iter::repeat_n(c, present));
                current = Some(c);
                strategy.on_emit(c, present);
            }
            StrategyDecision::SkipOne(c) => {
                if !skip_capable {
                    return Err(Error::SkipNotPermitted("strategy is not skip-capable"));
                }
                if queue.is_empty() {
                    return Err(Error::SkipNotPermitted("input is exhausted"));
                }
                trace.push(TraceEvent {
                    kind: TraceKind::Skip,
                    color: Some(c),
                    items: 1,
                    input_remaining: queue.len(),
                    buffer_occupancy: buffer.occupancy(),
                });
                let slot = buffer
                    .take_newest(c)
                    .ok_or(Error::IllegalDecision(c.get()))?;
                queue.push_back((slot.color, slot.origin));
                skipped_count += 1;
            }
        }
    }

    Ok(SimulationResult {
        output: ColorSequence::from(output),
        skipped_count,
        trace,
        full_buffer_selections: selections,
    })
}

/// Contents of input, buffer and output after one trace step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stage {
    /// The step that produced this stage; `None` for the initial stage.
    pub event: Option<TraceEvent>,
    /// Queued input, head first.
    pub input: Vec<ColorId>,
    /// Buffered items, oldest first.
    pub buffer: Vec<ColorId>,
    /// Output so far.
    pub output: Vec<ColorId>,
}

/// Result of re-executing a trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Replay {
    /// Initial stage followed by one stage per event.
    pub stages: Vec<Stage>,
    /// `origins[i]` is the input index of the item emitted at position `i`.
    pub origins: Vec<usize>,
}

/// Re-executes `trace` against `input` without consulting any strategy.
///
/// Checks every event against the reconstructed state and fails with
/// [`Error::IllegalDecision`] on a step that could not have happened.
pub fn replay(input: &ColorSequence, capacity: usize, trace: &[TraceEvent]) -> Result<Replay> {
    let mut queue: VecDeque<(ColorId, usize)> = input
        .iter()
        .copied()
        .enumerate()
        .map(|(i, c)| (c, i))
        .collect();
    let mut buffer: Vec<(ColorId, usize)> = Vec::with_capacity(capacity);
    let mut output: Vec<(ColorId, usize)> = Vec::with_capacity(input.len());
    let snapshot = |event, queue: &VecDeque<(ColorId, usize)>, buffer: &[_], output: &[_]| Stage {
        event,
        input: queue.iter().map(|&(c, _)| c).collect(),
        buffer: buffer.iter().map(|&(c, _): &(ColorId, usize)| c).collect(),
        output: output.iter().map(|&(c, _): &(ColorId, usize)| c).collect(),
    };
    let mut stages = Vec::with_capacity(trace.len() + 1);
    stages.push(snapshot(None, &queue, &buffer, &output));

    for ev in trace {
        let bad = || Error::IllegalDecision(ev.color.map_or(0, ColorId::get));
        match ev.kind {
            TraceKind::Fill => {
                for _ in 0..ev.items {
                    let item = queue.pop_front().ok_or_else(bad)?;
                    buffer.push(item);
                }
                if buffer.len() > capacity {
                    return Err(Error::InvalidCapacity);
                }
            }
            TraceKind::ForwardCurrentColor | TraceKind::Select | TraceKind::Drain => {
                let c = ev.color.ok_or_else(bad)?;
                let before = output.len();
                buffer.retain(|&item| {
                    if item.0 == c {
                        output.push(item);
                        false
                    } else {
                        true
                    }
                });
                if output.len() - before != ev.items {
                    return Err(bad());
                }
            }
            TraceKind::Skip => {
                let c = ev.color.ok_or_else(bad)?;
                let pos = buffer.iter().rposition(|&(b, _)| b == c).ok_or_else(bad)?;
                queue.push_back(buffer.remove(pos));
            }
        }
        stages.push(snapshot(Some(*ev), &queue, &buffer, &output));
    }

    Ok(Replay {
        stages,
        origins: output.iter().map(|&(_, o)| o).collect(),
    })
}
