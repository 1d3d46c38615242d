//! Item colors and color sequences.

use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

/// Identifier of an item color. Colors are positive integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct ColorId(u32);

impl ColorId {
    /// Returns `None` for zero.
    pub const fn new(value: u32) -> Option<Self> {
        if value == 0 {
            None
        } else {
            Some(ColorId(value))
        }
    }

    /// The raw identifier, always `>= 1`.
    pub const fn get(self) -> u32 {
        self.0
    }
}

impl TryFrom<u32> for ColorId {
    type Error = crate::Error;

    fn try_from(value: u32) -> Result<Self, Self::Error> {
        ColorId::new(value).ok_or(crate::Error::InvalidColor(value))
    }
}

impl From<ColorId> for u32 {
    fn from(c: ColorId) -> u32 {
        c.0
    }
}

impl fmt::Display for ColorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An ordered stream of colored items.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ColorSequence(Vec<ColorId>);

impl ColorSequence {
    /// Empty sequence.
    pub const fn new() -> Self {
        ColorSequence(Vec::new())
    }

    /// Builds a sequence from raw integers, rejecting zero.
    pub fn from_values<I>(values: I) -> crate::Result<Self>
    where
        I: IntoIterator<Item = u32>,
    {
        values
            .into_iter()
            .map(ColorId::try_from)
            .collect::<crate::Result<Vec<_>>>()
            .map(ColorSequence)
    }

    /// Number of items.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// True when there are no items.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The items as a slice.
    pub fn as_slice(&self) -> &[ColorId] {
        &self.0
    }

    /// Raw integer values, mostly for assertions and printing.
    pub fn values(&self) -> Vec<u32> {
        self.0.iter().map(|c| c.get()).collect()
    }

    /// Iterator over the items.
    pub fn iter(&self) -> core::slice::Iter<'_, ColorId> {
        self.0.iter()
    }

    /// Appends an item.
    pub fn push(&mut self, color: ColorId) {
        self.0.push(color);
    }

    /// Checks every item against the universe `1..=sigma`.
    pub fn check_universe(&self, sigma: u32) -> crate::Result<()> {
        match self.0.iter().find(|c| c.get() > sigma) {
            Some(c) => Err(crate::Error::ColorOutOfRange {
                color: c.get(),
                sigma,
            }),
            None => Ok(()),
        }
    }

    /// Number of maximal runs of equal colors.
    pub fn blocks(&self) -> usize {
        if self.0.is_empty() {
            0
        } else {
            crate::metrics::count_switches(self) + 1
        }
    }

    /// Consumes the sequence.
    pub fn into_vec(self) -> Vec<ColorId> {
        self.0
    }
}

impl From<Vec<ColorId>> for ColorSequence {
    fn from(items: Vec<ColorId>) -> Self {
        ColorSequence(items)
    }
}

impl FromIterator<ColorId> for ColorSequence {
    fn from_iter<I: IntoIterator<Item = ColorId>>(iter: I) -> Self {
        ColorSequence(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a ColorSequence {
    type Item = &'a ColorId;
    type IntoIter = core::slice::Iter<'a, ColorId>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl core::ops::Index<usize> for ColorSequence {
    type Output = ColorId;

    fn index(&self, i: usize) -> &ColorId {
        &self.0[i]
    }
}

impl fmt::Display for ColorSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Shorthand used throughout tests: `seq(&[1, 2, 2])`.
///
/// Panics on a zero entry.
pub fn seq(values: &[u32]) -> ColorSequence {
    ColorSequence::from_values(values.iter().copied()).expect("color ids are positive")
}
