//! Return times, recurrence classification and limit-set languages.
//!
//! A shift `n` is a return of `x` at radius `N` when `x(n+i) = x(i)` for all
//! `|i| ≤ N`. Positive recurrence needs positive returns at every radius,
//! negative recurrence negative ones.
//!
//! Finite scans only ever produce evidence, except in one situation. When a
//! point is identically zero on a half-line and the centre window holds a 1 at
//! coordinate `c`, a return in the direction of that half-line has to move the
//! 1 somewhere non-zero, which leaves finitely many candidate shifts. Checking
//! all of them settles the question, and the outcome is reported as proved
//! rather than observed.

mod claims;

pub use claims::{verify_claim, ClaimId, ClaimReport, ClaimSpec, ClaimStatus};

use std::ops::ControlFlow;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::language::{first_occurrence, windows_of, FactorSet};
use crate::omega::LengthTable;
use crate::{exact, Error, Limits, PointDescriptor, Result, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Positive,
    Negative,
}

impl Direction {
    fn sign(self) -> i128 {
        match self {
            Direction::Positive => 1,
            Direction::Negative => -1,
        }
    }

    pub fn opposite(self) -> Direction {
        match self {
            Direction::Positive => Direction::Negative,
            Direction::Negative => Direction::Positive,
        }
    }
}

/// Which limit set a language approximation targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitDirection {
    Omega,
    Alpha,
}

/// Least `m > 0` with `ξ(m)…ξ(m+k) = 0^k 1`, searched over `m ≤ horizon`.
pub fn find_m(k: u32, horizon: i128, limits: &Limits) -> Result<i128> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    if horizon < 1 {
        return Err(Error::NotFoundWithinHorizon { horizon });
    }
    let mut pattern = Word::zeros(k as usize);
    pattern.push(1);
    first_occurrence(&pattern, 1, horizon, limits)?.ok_or(Error::NotFoundWithinHorizon { horizon })
}

/// Returns found by a scan, with a flag for when the list is provably complete.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReturnScan {
    #[serde(with = "exact::vec")]
    pub returns: Vec<i128>,
    /// True when every candidate beyond the scanned range is ruled out, so the
    /// list holds all returns in this direction (up to `count`).
    pub complete: bool,
}

const FIRST_CHUNK: i128 = 1 << 12;
const MAX_CHUNK: i128 = 1 << 22;

/// Visits `n = ±1, ±2, …` up to `|n| ≤ reach` in order of increasing `|n|`,
/// passing the point materialized around each `n`: `f(n, chunk, offset)` where
/// `chunk` symbol `offset` is coordinate `n - radius`.
fn for_each_shift(
    p: &PointDescriptor,
    radius: i128,
    dir: Direction,
    reach: i128,
    limits: &Limits,
    mut f: impl FnMut(i128, &Word, usize) -> ControlFlow<()>,
) -> Result<()> {
    let mut k0: i128 = 1;
    let mut chunk = FIRST_CHUNK;
    while k0 <= reach {
        let k1 = reach.min(k0.saturating_add(chunk - 1));
        let (lo, hi) = match dir {
            Direction::Positive => (k0 - radius, k1 + radius),
            Direction::Negative => (-k1 - radius, -k0 + radius),
        };
        let seg = p.segment(lo, hi, limits)?;
        for k in k0..=k1 {
            let n = dir.sign() * k;
            let offset = (n - radius - lo) as usize;
            if f(n, &seg, offset).is_break() {
                return Ok(());
            }
        }
        k0 = k1 + 1;
        chunk = (chunk * 2).min(MAX_CHUNK);
    }
    Ok(())
}

/// Largest `|n|` a return toward `dir` can have, when the point vanishes on
/// that side and `centre` (coordinates `-radius..=radius`) contains a 1.
fn structural_reach(p: &PointDescriptor, centre: &Word, radius: i128, dir: Direction) -> Option<i128> {
    let ones = || (0..centre.len()).filter(|&k| centre.get(k) == 1).map(|k| k as i128 - radius);
    match dir {
        // n + c ≤ z for the rightmost 1 at c
        Direction::Positive => {
            let z = p.zero_above()?;
            let c = ones().max()?;
            Some((z - c).max(0))
        }
        // n + c ≥ z for the leftmost 1 at c
        Direction::Negative => {
            let z = p.zero_below()?;
            let c = ones().min()?;
            Some((c - z).max(0))
        }
    }
}

/// Up to `count` shifts `n` of sign `dir`, multiples of `power`, with
/// `x(n+i) = x(i)` for `|i| ≤ radius`, scanning `|n| ≤ horizon` outward.
pub fn return_scan(
    p: &PointDescriptor,
    radius: u32,
    dir: Direction,
    power: u32,
    horizon: i128,
    count: usize,
    limits: &Limits,
) -> Result<ReturnScan> {
    if power == 0 {
        return Err(Error::InvalidArgument("power must be at least 1".into()));
    }
    let r = radius as i128;
    let width = 2 * radius as usize + 1;
    let centre = p.segment(-r, r, limits)?;
    let bound = structural_reach(p, &centre, r, dir);
    let reach = bound.map_or(horizon, |b| b.min(horizon)).max(0);
    let complete = bound.is_some_and(|b| b <= horizon);

    let mut returns = Vec::new();
    if count > 0 {
        let packed = (width <= 128).then(|| centre.window(0, width));
        for_each_shift(p, r, dir, reach, limits, |n, seg, off| {
            if n % power as i128 != 0 {
                return ControlFlow::Continue(());
            }
            let hit = match packed {
                Some(bits) => seg.window(off, width) == bits,
                None => centre.matches_at(seg, off),
            };
            if hit {
                returns.push(n);
                if returns.len() >= count {
                    return ControlFlow::Break(());
                }
            }
            ControlFlow::Continue(())
        })?;
    }
    Ok(ReturnScan { returns, complete })
}

/// Plain list form of [`return_scan`].
pub fn return_times(
    p: &PointDescriptor,
    radius: u32,
    dir: Direction,
    power: u32,
    horizon: i128,
    count: usize,
    limits: &Limits,
) -> Result<Vec<i128>> {
    return_scan(p, radius, dir, power, horizon, count, limits).map(|s| s.returns)
}

/// What a directional scan established for one radius.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReturnOutcome {
    /// Smallest `|n|` return.
    Found(#[serde(with = "exact")] i128),
    /// All candidates were ruled out; no return exists.
    ProvedNone,
    NoneWithinHorizon,
}

impl ReturnOutcome {
    pub fn found(&self) -> Option<i128> {
        match *self {
            ReturnOutcome::Found(n) => Some(n),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RadiusOutcome {
    pub radius: u32,
    pub positive: ReturnOutcome,
    pub negative: ReturnOutcome,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    PositivelyRecurrentEvidence,
    NegativelyRecurrentEvidence,
    Both,
    NoneWithinHorizon,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecurrenceReport {
    pub point: PointDescriptor,
    /// Largest radius tested; the return lists below are returns at this radius.
    pub window_radius: u32,
    #[serde(with = "exact::vec")]
    pub positive_returns: Vec<i128>,
    #[serde(with = "exact::vec")]
    pub negative_returns: Vec<i128>,
    #[serde(with = "exact")]
    pub horizon: i128,
    pub verdict: Verdict,
    /// Per-radius first returns, radius 1 through `window_radius`.
    pub radii: Vec<RadiusOutcome>,
    pub structural_note: Option<String>,
}

/// First return of every radius `1..=max_radius` toward `dir` in one pass.
///
/// Each shift gets an agreement radius (distance to the nearest mismatch
/// minus one); a shift with agreement radius `r` is the first return of every
/// still-open radius up to `r`. Open radii are always a suffix, and the
/// structural reach only shrinks as the radius grows, so the pass stops as
/// soon as the next open radius is out of reach.
fn first_returns(
    p: &PointDescriptor,
    max_radius: u32,
    dir: Direction,
    horizon: i128,
    limits: &Limits,
) -> Result<Vec<ReturnOutcome>> {
    let rmax = max_radius as i128;
    if max_radius > 63 {
        return (1..=max_radius)
            .map(|r| {
                let scan = return_scan(p, r, dir, 1, horizon, 1, limits)?;
                Ok(match scan.returns.first() {
                    Some(&n) => ReturnOutcome::Found(n),
                    None if scan.complete => ReturnOutcome::ProvedNone,
                    None => ReturnOutcome::NoneWithinHorizon,
                })
            })
            .collect();
    }
    let width = 2 * max_radius as usize + 1;
    let centre = p.segment(-rmax, rmax, limits)?;
    let centre_bits = centre.window(0, width);
    // reach[r] for r in 0..=max_radius
    let reach: Vec<Option<i128>> = (0..=max_radius)
        .map(|r| {
            let inner = centre.slice((rmax - r as i128) as usize, (rmax + r as i128) as usize + 1);
            structural_reach(p, &inner, r as i128, dir)
        })
        .collect();
    let left_mask = (1u128 << max_radius) - 1;

    let mut first = vec![None; max_radius as usize + 1];
    let mut open = 1u32;
    let scan_reach = match reach[1] {
        Some(b) => b.min(horizon),
        None => horizon,
    };
    for_each_shift(p, rmax, dir, scan_reach.max(0), limits, |n, seg, off| {
        if reach[open as usize].is_some_and(|b| n.abs() > b) {
            return ControlFlow::Break(());
        }
        let diff = seg.window(off, width) ^ centre_bits;
        let agree = if diff == 0 {
            max_radius
        } else {
            let right = diff >> max_radius;
            let right_dist = if right == 0 { u32::MAX } else { right.trailing_zeros() };
            let left = diff & left_mask;
            let left_dist = if left == 0 { u32::MAX } else { max_radius - (127 - left.leading_zeros()) };
            right_dist.min(left_dist).saturating_sub(1)
        };
        while open <= agree.min(max_radius) {
            first[open as usize] = Some(n);
            open += 1;
        }
        if open > max_radius {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;

    Ok((1..=max_radius)
        .map(|r| match first[r as usize] {
            Some(n) => ReturnOutcome::Found(n),
            None => match reach[r as usize] {
                Some(b) if b <= horizon => ReturnOutcome::ProvedNone,
                _ => ReturnOutcome::NoneWithinHorizon,
            },
        })
        .collect())
}

fn structural_note(p: &PointDescriptor, radii: &[RadiusOutcome]) -> Option<String> {
    let proved = |pick: fn(&RadiusOutcome) -> ReturnOutcome| {
        radii.iter().find(|o| pick(o) == ReturnOutcome::ProvedNone).map(|o| o.radius)
    };
    let mut notes = Vec::new();
    if let Some(r) = proved(|o| o.positive) {
        notes.push(format!(
            "no positive return exists for radius >= {r}: {p} vanishes on coordinates above {} \
             while the centre window holds a 1, and every remaining candidate shift was checked",
            p.zero_above().map_or_else(String::new, |z| z.to_string())
        ));
    }
    if let Some(r) = proved(|o| o.negative) {
        notes.push(format!(
            "no negative return exists for radius >= {r}: {p} vanishes on coordinates below {} \
             while the centre window holds a 1, and every remaining candidate shift was checked",
            p.zero_below().map_or_else(String::new, |z| z.to_string())
        ));
    }
    (!notes.is_empty()).then(|| notes.join("; "))
}

/// Runs both directions for every radius up to `max_radius` and aggregates a verdict.
pub fn classify_point(
    p: &PointDescriptor,
    max_radius: u32,
    horizon: i128,
    limits: &Limits,
) -> Result<RecurrenceReport> {
    if max_radius == 0 {
        return Err(Error::InvalidArgument("window radius must be at least 1".into()));
    }
    let pos = first_returns(p, max_radius, Direction::Positive, horizon, limits)?;
    let neg = first_returns(p, max_radius, Direction::Negative, horizon, limits)?;
    let radii: Vec<RadiusOutcome> = (1..=max_radius)
        .zip(pos.into_iter().zip(neg))
        .map(|(radius, (positive, negative))| RadiusOutcome { radius, positive, negative })
        .collect();

    let all_pos = radii.iter().all(|o| o.positive.found().is_some());
    let all_neg = radii.iter().all(|o| o.negative.found().is_some());
    let verdict = match (all_pos, all_neg) {
        (true, true) => Verdict::Both,
        (true, false) => Verdict::PositivelyRecurrentEvidence,
        (false, true) => Verdict::NegativelyRecurrentEvidence,
        (false, false) => Verdict::NoneWithinHorizon,
    };
    let last = radii.last().expect("max_radius >= 1");
    Ok(RecurrenceReport {
        point: *p,
        window_radius: max_radius,
        positive_returns: last.positive.found().into_iter().collect(),
        negative_returns: last.negative.found().into_iter().collect(),
        horizon,
        verdict,
        structural_note: structural_note(p, &radii),
        radii,
    })
}

/// [`classify_point`] over many descriptors; results keep the input order.
pub fn classify_points(
    points: &[PointDescriptor],
    max_radius: u32,
    horizon: i128,
    limits: &Limits,
) -> Result<Vec<RecurrenceReport>> {
    points
        .par_iter()
        .map(|p| classify_point(p, max_radius, horizon, limits))
        .collect()
}

/// Test ladder of bounds used by [`limit_factors`].
pub fn limit_ladder(horizon: i128) -> [i128; 3] {
    [horizon / 8, horizon / 4, horizon / 2]
}

/// Length-`L` words seen beyond every bound of the ladder.
///
/// A word belongs to the result when it occurs at some start in `[B, horizon]`
/// (omega) or `[-horizon, -B]` (alpha) for each `B` in [`limit_ladder`]. This
/// is an outer approximation of the language of the limit set. `horizon_n` of
/// the result is the smallest `n` with `ℓ_n > horizon`.
pub fn limit_factors(
    p: &PointDescriptor,
    length: usize,
    dir: LimitDirection,
    horizon: i128,
    limits: &Limits,
) -> Result<FactorSet> {
    if length == 0 {
        return Err(Error::InvalidArgument("factor length must be positive".into()));
    }
    if horizon < 8 {
        return Err(Error::InvalidArgument("horizon must be at least 8".into()));
    }
    let l = length as i128;
    let mut result: Option<std::collections::BTreeSet<Word>> = None;
    for bound in limit_ladder(horizon) {
        let (lo, hi) = match dir {
            LimitDirection::Omega => (bound, horizon + l - 1),
            LimitDirection::Alpha => (-horizon, -bound + l - 1),
        };
        let words = windows_of(&p.segment(lo, hi, limits)?, length);
        result = Some(match result {
            None => words,
            Some(prev) => prev.intersection(&words).cloned().collect(),
        });
    }
    Ok(FactorSet {
        length,
        words: result.unwrap_or_default(),
        horizon_n: LengthTable::global().enclosing(horizon as u128),
        stabilized: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::omega::omega_length;
    use proptest::prelude::*;
    use PointDescriptor::*;

    fn lim() -> Limits {
        Limits::default()
    }

    /// Per-shift check against lazy evaluation, independent of chunking.
    fn naive_returns(p: &PointDescriptor, radius: i128, dir: Direction, power: i128, horizon: i128, count: usize) -> Vec<i128> {
        (1..=horizon)
            .map(|k| dir.sign() * k)
            .filter(|n| n % power == 0)
            .filter(|&n| (-radius..=radius).all(|i| p.at(n + i) == p.at(i)))
            .take(count)
            .collect()
    }

    #[test]
    fn find_m_examples() {
        assert_eq!(find_m(1, 100, &lim()).unwrap(), 1);
        assert_eq!(find_m(2, 100, &lim()).unwrap(), 3);
        assert_eq!(find_m(3, 100, &lim()).unwrap(), 8);
        assert_eq!(find_m(4, 100, &lim()).unwrap(), 19);
        assert!(matches!(find_m(6, 50, &lim()), Err(Error::NotFoundWithinHorizon { horizon: 50 })));
        assert!(find_m(0, 50, &lim()).is_err());
    }

    #[test]
    fn find_m_within_two_levels_up() {
        for k in 1..=20 {
            let horizon = omega_length(k + 2).unwrap() as i128;
            let m = find_m(k, horizon, &lim()).unwrap();
            for t in 0..k as i128 {
                assert_eq!(crate::xi_at(m + t), 0);
            }
            assert_eq!(crate::xi_at(m + k as i128), 1);
        }
    }

    #[test]
    fn return_examples() {
        assert_eq!(return_times(&XiShift(0), 1, Direction::Positive, 1, 100, 1, &lim()).unwrap(), vec![2]);
        let zero = return_times(&Zero, 100, Direction::Negative, 7, 70, 100, &lim()).unwrap();
        assert_eq!(zero, (1..=10).map(|k| -7 * k).collect::<Vec<_>>());
        let refl = return_scan(&XiReflectShift(0), 1, Direction::Positive, 1, 1 << 20, 5, &lim()).unwrap();
        assert!(refl.returns.is_empty());
        assert!(refl.complete);
        // xi:0 has no negative returns at radius 1: the left tail is all zero
        let left = return_scan(&XiShift(0), 1, Direction::Negative, 1, 1 << 20, 5, &lim()).unwrap();
        assert!(left.returns.is_empty() && left.complete);
    }

    #[test]
    fn scan_matches_naive() {
        let points = [Zero, XiShift(0), XiShift(7), XiShift(-5), XiReflectShift(0), XiReflectShift(4), XiReflectShift(-9)];
        for p in points {
            for radius in [0, 1, 3, 6] {
                for dir in [Direction::Positive, Direction::Negative] {
                    for power in [1, 2, 3] {
                        let fast = return_times(&p, radius, dir, power, 3000, 6, &lim()).unwrap();
                        let slow = naive_returns(&p, radius as i128, dir, power as i128, 3000, 6);
                        assert_eq!(fast, slow, "{p} r={radius} {dir:?} p={power}");
                    }
                }
            }
        }
    }

    #[test]
    fn wide_windows_use_word_comparison() {
        let got = return_times(&XiShift(0), 70, Direction::Positive, 1, 1 << 12, 1, &lim()).unwrap();
        assert_eq!(got, naive_returns(&XiShift(0), 70, Direction::Positive, 1, 1 << 12, 1));
    }

    #[test]
    fn classify_examples() {
        let h = omega_length(20).unwrap() as i128;
        let zero = classify_point(&Zero, 4, h, &lim()).unwrap();
        assert_eq!(zero.verdict, Verdict::Both);

        let xi = classify_point(&XiShift(0), 4, h, &lim()).unwrap();
        assert_eq!(xi.verdict, Verdict::PositivelyRecurrentEvidence);
        assert_eq!(xi.radii[0].positive, ReturnOutcome::Found(2));
        assert_eq!(xi.radii[0].negative, ReturnOutcome::ProvedNone);

        let r = classify_point(&XiReflectShift(0), 4, h, &lim()).unwrap();
        assert_eq!(r.verdict, Verdict::NegativelyRecurrentEvidence);
        assert_eq!(r.radii[0].negative, ReturnOutcome::Found(-2));
        assert!(r.radii.iter().all(|o| o.positive == ReturnOutcome::ProvedNone));
        assert!(r.structural_note.as_deref().unwrap().contains("no positive return"));
    }

    #[test]
    fn classify_agrees_with_per_radius_scans() {
        let h = 1 << 14;
        for p in [XiShift(0), XiShift(3), XiShift(-4), XiReflectShift(2), XiReflectShift(-6), Zero] {
            let report = classify_point(&p, 9, h, &lim()).unwrap();
            for o in &report.radii {
                for (dir, outcome) in [(Direction::Positive, o.positive), (Direction::Negative, o.negative)] {
                    let scan = return_scan(&p, o.radius, dir, 1, h, 1, &lim()).unwrap();
                    match outcome {
                        ReturnOutcome::Found(n) => assert_eq!(scan.returns, vec![n]),
                        ReturnOutcome::ProvedNone => assert!(scan.returns.is_empty() && scan.complete),
                        ReturnOutcome::NoneWithinHorizon => assert!(scan.returns.is_empty() && !scan.complete),
                    }
                }
            }
        }
    }

    #[test]
    fn returns_replay() {
        let h = omega_length(14).unwrap() as i128;
        for p in [XiShift(2), XiReflectShift(-3)] {
            let report = classify_point(&p, 8, h, &lim()).unwrap();
            for o in &report.radii {
                for n in [o.positive.found(), o.negative.found()].into_iter().flatten() {
                    let r = o.radius as i128;
                    assert!((-r..=r).all(|i| p.at(n + i) == p.at(i)));
                }
            }
        }
    }

    #[test]
    fn limit_factor_examples() {
        let h = 1 << 12;
        let alpha = limit_factors(&XiShift(0), 2, LimitDirection::Alpha, h, &lim()).unwrap();
        assert_eq!(alpha.words.iter().map(|w| w.to_string()).collect::<Vec<_>>(), ["00"]);
        let zero = limit_factors(&Zero, 3, LimitDirection::Omega, h, &lim()).unwrap();
        assert_eq!(zero.words.iter().map(|w| w.to_string()).collect::<Vec<_>>(), ["000"]);
        let omega = limit_factors(&XiShift(0), 2, LimitDirection::Omega, h, &lim()).unwrap();
        assert_eq!(omega.words.iter().map(|w| w.to_string()).collect::<Vec<_>>(), ["00", "01", "10"]);
    }

    fn descriptor() -> impl Strategy<Value = PointDescriptor> {
        prop_oneof![
            Just(Zero),
            (-40i128..40).prop_map(XiShift),
            (-40i128..40).prop_map(XiReflectShift),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn reflection_swaps_directions(p in descriptor(), radius in 0u32..6, power in 1u32..4) {
            let q = p.reflect().unwrap();
            let fwd = return_times(&p, radius, Direction::Positive, power, 2000, 5, &lim()).unwrap();
            let back = return_times(&q, radius, Direction::Negative, power, 2000, 5, &lim()).unwrap();
            prop_assert_eq!(fwd, back.into_iter().map(|n| -n).collect::<Vec<_>>());
        }
    }
}
