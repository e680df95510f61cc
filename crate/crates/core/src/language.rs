//! Factor language of the orbit closure of ξ, occurrence scans and gaps.
//!
//! The language of `X` is the set of all windows of ξ over all integer
//! positions: every point of `X` is a limit of shifts of ξ, so each of its
//! windows is already a window of ξ.
//!
//! Stopping rule for horizon growth. Write ξ on `[0, ∞)` as copies of
//! `ω_{L+1}` separated by zero gaps of length at least `L+1`. A window of
//! length `L` then either sits inside one copy, or meets a single gap and reads
//! (suffix of `ω_{L+1}`)·0^a or 0^a·(prefix of `ω_{L+1}`), or is all zeros.
//! All of those already occur in `ξ(-L) … ξ(ℓ_{L+2} - 1)`, since `ω_{L+2}`
//! contains `ω_{L+1} 0^{L+1} ω_{L+1}` and the left tail supplies the zero
//! prefixes. So the factor set is final from horizon `L+2` on, and
//! [`factors_stabilized`] refuses to stop before it.

use std::collections::{BTreeSet, HashSet};
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::omega::{omega_length, xi_segment, LengthTable};
use crate::{exact, Error, Limits, Result, Word};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorSet {
    pub length: usize,
    pub words: BTreeSet<Word>,
    pub horizon_n: u32,
    pub stabilized: bool,
}

impl FactorSet {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.words.contains(w)
    }
}

/// Distinct windows of length `length` in `text`.
pub(crate) fn windows_of(text: &Word, length: usize) -> BTreeSet<Word> {
    if text.len() < length {
        return BTreeSet::new();
    }
    let count = text.len() - length + 1;
    if length <= 64 {
        let mut seen = HashSet::new();
        for j in 0..count {
            seen.insert(text.read_u64(j, length));
        }
        seen.into_iter()
            .map(|bits| Word::from_bits(bits as u128, length))
            .collect()
    } else {
        (0..count).map(|j| text.slice(j, j + length)).collect()
    }
}

/// All distinct windows `ξ(j)…ξ(j+L-1)` for `j ∈ [-L, ℓ_h - L]`.
pub fn factors(length: usize, horizon_n: u32, limits: &Limits) -> Result<FactorSet> {
    if length == 0 {
        return Err(Error::InvalidArgument("factor length must be positive".into()));
    }
    let horizon_len = omega_length(horizon_n)?;
    if horizon_len < length as u128 {
        return Err(Error::InvalidArgument(format!(
            "horizon omega_{horizon_n} is shorter than the factor length {length}"
        )));
    }
    let text = xi_segment(-(length as i128), horizon_len as i128 - 1, limits)?;
    Ok(FactorSet {
        length,
        words: windows_of(&text, length),
        horizon_n,
        stabilized: false,
    })
}

/// Grows the horizon until two consecutive factor sets agree at a horizon of
/// at least `L+2`; returns the set and that horizon.
pub fn factors_stabilized(length: usize, limits: &Limits) -> Result<(FactorSet, u32)> {
    if length == 0 {
        return Err(Error::InvalidArgument("factor length must be positive".into()));
    }
    let start = LengthTable::global().enclosing(length as u128 - 1);
    let mut prev = factors(length, start, limits)?;
    for h in start + 1..=limits.max_horizon_n {
        let cur = match factors(length, h, limits) {
            Ok(cur) => cur,
            Err(Error::CapExceeded { .. }) => break,
            Err(e) => return Err(e),
        };
        if cur.words == prev.words && h as usize >= length + 2 {
            return Ok((FactorSet { stabilized: true, ..cur }, h));
        }
        prev = cur;
    }
    Err(Error::NotStabilized {
        length,
        horizon_n: prev.horizon_n,
        partial: Box::new(prev),
    })
}

/// Number of distinct factors of length `L` in the language.
pub fn factor_complexity(length: usize, limits: &Limits) -> Result<usize> {
    factors_stabilized(length, limits).map(|(set, _)| set.len())
}

/// Largest spacing between consecutive occurrences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Gap {
    Bounded(#[serde(with = "exact")] i128),
    /// Fewer than two occurrences inside the range.
    UnboundedWithinRange,
}

impl Gap {
    pub fn at_least(&self, bound: i128) -> bool {
        match *self {
            Gap::Bounded(g) => g >= bound,
            Gap::UnboundedWithinRange => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OccurrenceReport {
    pub word: Word,
    #[serde(with = "exact")]
    pub lo: i128,
    #[serde(with = "exact")]
    pub hi: i128,
    /// Start indices in `[lo, hi]`, increasing.
    #[serde(with = "exact::vec")]
    pub positions: Vec<i128>,
    /// Largest difference of consecutive positions; range edges are not counted.
    pub max_gap: Gap,
    /// `first - lo`, reported apart from `max_gap`.
    #[serde(with = "exact::option")]
    pub leading_gap: Option<i128>,
    /// `hi - last`.
    #[serde(with = "exact::option")]
    pub trailing_gap: Option<i128>,
}

impl OccurrenceReport {
    fn from_positions(word: Word, lo: i128, hi: i128, positions: Vec<i128>) -> Self {
        let max_gap = positions
            .windows(2)
            .map(|p| p[1] - p[0])
            .max()
            .map_or(Gap::UnboundedWithinRange, Gap::Bounded);
        OccurrenceReport {
            leading_gap: positions.first().map(|&p| p - lo),
            trailing_gap: positions.last().map(|&p| hi - p),
            word,
            lo,
            hi,
            positions,
            max_gap,
        }
    }

    /// Largest gap with the range edges counted as sentinel occurrences.
    pub fn max_gap_with_edges(&self) -> i128 {
        match self.positions.as_slice() {
            [] => self.hi - self.lo + 1,
            _ => {
                let interior = match self.max_gap {
                    Gap::Bounded(g) => g,
                    Gap::UnboundedWithinRange => 0,
                };
                interior
                    .max(self.leading_gap.unwrap_or(0))
                    .max(self.trailing_gap.unwrap_or(0))
            }
        }
    }
}

const BLOCK: i128 = 1 << 20;

/// Every start `j ∈ [lo, hi]` where ξ reads `w`.
///
/// Text is generated in blocks and fed to a shift-and matcher (bit-parallel,
/// words of at most 64 symbols); longer words fall back to direct comparison.
pub fn occurrences(w: &Word, lo: i128, hi: i128, limits: &Limits) -> Result<OccurrenceReport> {
    let mut positions = Vec::new();
    scan_matches(w, lo, hi, limits, |j| {
        positions.push(j);
        ControlFlow::Continue(())
    })?;
    Ok(OccurrenceReport::from_positions(w.clone(), lo, hi, positions))
}

/// Smallest start `j ∈ [lo, hi]` where ξ reads `w`.
pub fn first_occurrence(w: &Word, lo: i128, hi: i128, limits: &Limits) -> Result<Option<i128>> {
    let mut found = None;
    scan_matches(w, lo, hi, limits, |j| {
        found = Some(j);
        ControlFlow::Break(())
    })?;
    Ok(found)
}

/// Streams match starts in increasing order until `on_match` breaks.
fn scan_matches(
    w: &Word,
    lo: i128,
    hi: i128,
    limits: &Limits,
    mut on_match: impl FnMut(i128) -> ControlFlow<()>,
) -> Result<()> {
    if w.is_empty() {
        return Err(Error::InvalidArgument("empty pattern".into()));
    }
    if lo > hi {
        return Err(Error::InvalidArgument(format!("empty range [{lo}, {hi}]")));
    }
    let m = w.len() as i128;
    let text_end = hi.checked_add(m - 1).ok_or(Error::IndexOverflow("occurrence range"))?;
    let span = hi.checked_sub(lo).map(|d| d as u128 + w.len() as u128).unwrap_or(u128::MAX);
    limits.check(span)?;

    if w.len() <= 64 {
        let mut masks = [0u64; 2];
        for (j, s) in w.iter().enumerate() {
            masks[s as usize] |= 1 << j;
        }
        let hit = 1u64 << (w.len() - 1);
        let mut state = 0u64;
        let mut start = lo;
        loop {
            let end = text_end.min(start.saturating_add(BLOCK - 1));
            let block = xi_segment(start, end, limits)?;
            for k in 0..block.len() {
                state = ((state << 1) | 1) & masks[block.get(k) as usize];
                if state & hit != 0 && on_match(start + k as i128 - (m - 1)).is_break() {
                    return Ok(());
                }
            }
            if end == text_end {
                return Ok(());
            }
            start = end + 1;
        }
    } else {
        let mut start = lo;
        loop {
            let end = hi.min(start.saturating_add(BLOCK - 1));
            let block = xi_segment(start, end + m - 1, limits)?;
            for k in 0..=(end - start) as usize {
                if w.matches_at(&block, k) && on_match(start + k as i128).is_break() {
                    return Ok(());
                }
            }
            if end == hi {
                return Ok(());
            }
            start = end + 1;
        }
    }
}

/// Largest spacing of consecutive occurrences of `w` in `[lo, hi]`.
pub fn max_gap(w: &Word, lo: i128, hi: i128, limits: &Limits) -> Result<Gap> {
    let report = occurrences(w, lo, hi, limits)?;
    if report.positions.is_empty() {
        return Err(Error::NoOccurrence { word: w.to_string(), lo, hi });
    }
    Ok(report.max_gap)
}
