//! Minimum buffer size for which MCF never splits a color.
//!
//! With `σ` colors, MCF selecting only from a full buffer needs each selected
//! color to hold at least `ceil(k/σ)` items. A color can only be split if the
//! most frequent color has `2·ceil(k/σ)` items and the runner-up has
//! `ceil(k/σ)`; [`predicate_p`] tests exactly that, and [`k_min`] is the
//! first `k` where it fails.

use alloc::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::color::{ColorId, ColorSequence};
use crate::error::{Error, Result};

/// Color histogram summary of a sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceProfile {
    /// Distinct colors.
    pub sigma: usize,
    /// Count of the most frequent color.
    pub o1: usize,
    /// Count of the second most frequent color, 0 with fewer than 2 colors.
    pub o2: usize,
    /// Count per color.
    pub histogram: BTreeMap<ColorId, usize>,
}

/// Histogram and top-two counts of `input`.
pub fn profile(input: &ColorSequence) -> SequenceProfile {
    let mut histogram = BTreeMap::new();
    for &c in input {
        *histogram.entry(c).or_insert(0usize) += 1;
    }
    let (mut o1, mut o2) = (0, 0);
    for &n in histogram.values() {
        if n > o1 {
            o2 = o1;
            o1 = n;
        } else if n > o2 {
            o2 = n;
        }
    }
    SequenceProfile {
        sigma: histogram.len(),
        o1,
        o2,
        histogram,
    }
}

/// True when a split color is still possible with buffer size `k`:
/// `2·ceil(k/σ) <= o1 && ceil(k/σ) <= o2`.
pub fn predicate_p(k: usize, o1: usize, o2: usize, sigma: usize) -> Result<bool> {
    if sigma == 0 {
        return Err(Error::InvalidProfile);
    }
    let share = k.div_ceil(sigma);
    Ok(2 * share <= o1 && share <= o2)
}

/// `k_min` and the two candidates it is the minimum of.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KMin {
    /// `min(by_o1, by_o2)`.
    pub k_min: usize,
    /// Smallest `k` with `2·ceil(k/σ) > o1`.
    pub by_o1: usize,
    /// Smallest `k` with `ceil(k/σ) > o2`.
    pub by_o2: usize,
}

/// Both branches of the minimum buffer size.
///
/// The smallest `k` with `ceil(k/σ) >= t` is `σ(t-1)+1`; the first branch
/// needs `t = floor(o1/2)+1`, the second `t = o2+1`.
pub fn k_min_branches(o1: usize, o2: usize, sigma: usize) -> Result<KMin> {
    if sigma == 0 {
        return Err(Error::InvalidProfile);
    }
    let by_o1 = sigma * (o1 / 2) + 1;
    let by_o2 = sigma * o2 + 1;
    Ok(KMin {
        k_min: by_o1.min(by_o2),
        by_o1,
        by_o2,
    })
}

/// Smallest buffer size that makes [`predicate_p`] false.
pub fn k_min(o1: usize, o2: usize, sigma: usize) -> Result<usize> {
    k_min_branches(o1, o2, sigma).map(|b| b.k_min)
}

impl SequenceProfile {
    /// [`k_min`] for this profile; 1 for the empty sequence.
    pub fn k_min(&self) -> usize {
        k_min(self.o1, self.o2, self.sigma.max(1)).unwrap_or(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::color::seq;

    #[test]
    fn profile_examples() {
        let p = profile(&seq(&[
            1, 1, 2, 2, 1, 3, 1, 1, 2, 2, 3, 3, 3, 1, 2, 2, 3, 3, 1,
        ]));
        assert_eq!((p.sigma, p.o1, p.o2), (3, 7, 6));
        let p = profile(&seq(&[
            1, 2, 3, 1, 2, 3, 3, 3, 3, 2, 2, 1, 1, 2, 2, 1, 1, 2, 3, 4, 4, 3, 2,
        ]));
        assert_eq!((p.sigma, p.o1, p.o2), (4, 8, 7));
        let p = profile(&seq(&[]));
        assert_eq!((p.sigma, p.o1, p.o2), (0, 0, 0));
        let p = profile(&seq(&[4, 4]));
        assert_eq!((p.sigma, p.o1, p.o2), (1, 2, 0));
    }

    #[test]
    fn predicate_examples() {
        assert_eq!(predicate_p(10, 7, 6, 3), Ok(false));
        assert_eq!(predicate_p(9, 7, 6, 3), Ok(true));
        assert_eq!(predicate_p(1, 1, 0, 1), Ok(false));
        assert_eq!(predicate_p(1, 1, 0, 0), Err(Error::InvalidProfile));
    }

    #[test]
    fn k_min_examples() {
        assert_eq!(
            k_min_branches(7, 6, 3),
            Ok(KMin {
                k_min: 10,
                by_o1: 10,
                by_o2: 19
            })
        );
        assert_eq!(
            k_min_branches(8, 7, 4),
            Ok(KMin {
                k_min: 17,
                by_o1: 17,
                by_o2: 29
            })
        );
        assert_eq!(k_min(1, 1, 2), Ok(1));
        assert_eq!(k_min(5, 0, 1), Ok(1));
        assert_eq!(k_min(1, 1, 0), Err(Error::InvalidProfile));
    }
}
