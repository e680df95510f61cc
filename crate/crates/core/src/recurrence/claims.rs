//! Exhaustive checks of the structural claims about ξ.
//!
//! Every report lists its witnesses as integer tuples. [`ClaimReport::replay`]
//! re-validates each tuple with lazy evaluation only, so a report can be
//! audited without trusting the sweep that produced it.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{find_m, ReturnOutcome, Verdict};
use crate::language::occurrences;
use crate::omega::{omega_length, xi_at, xi_segment};
use crate::{exact, Error, Limits, PointDescriptor, Result, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClaimId {
    #[serde(rename = "1")]
    Reflection,
    #[serde(rename = "2a")]
    TwoA,
    #[serde(rename = "2b")]
    TwoB,
    #[serde(rename = "3")]
    Three,
    #[serde(rename = "4")]
    Four,
    #[serde(rename = "recurrence")]
    Recurrence,
    #[serde(rename = "minimality")]
    Minimality,
}

impl ClaimId {
    pub fn as_str(self) -> &'static str {
        match self {
            ClaimId::Reflection => "1",
            ClaimId::TwoA => "2a",
            ClaimId::TwoB => "2b",
            ClaimId::Three => "3",
            ClaimId::Four => "4",
            ClaimId::Recurrence => "recurrence",
            ClaimId::Minimality => "minimality",
        }
    }
}

impl fmt::Display for ClaimId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ClaimId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "1" => ClaimId::Reflection,
            "2a" => ClaimId::TwoA,
            "2b" => ClaimId::TwoB,
            "3" => ClaimId::Three,
            "4" => ClaimId::Four,
            "recurrence" => ClaimId::Recurrence,
            "minimality" => ClaimId::Minimality,
            other => return Err(Error::InvalidArgument(format!("unknown claim {other:?}"))),
        })
    }
}

/// A claim together with its sweep bounds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "claim", rename_all = "snake_case")]
pub enum ClaimSpec {
    /// `T^{ℓ_n - 1} ξ` agrees with the reflection of ξ on `[-min(n, radius), min(n, radius)]`,
    /// and `ω_n` is a palindrome, for `1 ≤ n ≤ n_max`.
    Reflection { n_max: u32, radius: u32 },
    TwoA { n_max: u32 },
    /// Windows inside `ω_{window_n}`, for every `k ≤ k_max`.
    TwoB { k_max: u32, window_n: u32 },
    /// One-counts on `[-ℓ_j, ℓ_j]` for `j = 1..=horizon_n`.
    Three { point: PointDescriptor, horizon_n: u32 },
    Four { k_max: u32 },
    Recurrence { points: Vec<PointDescriptor>, radius: u32, horizon_n: u32 },
    /// Gaps of "1" in `ξ[0, ℓ_n)` for `n ≤ n_max`, and the zero words up to `zero_len_max`.
    Minimality { n_max: u32, zero_len_max: u32 },
}

impl ClaimSpec {
    pub fn id(&self) -> ClaimId {
        match self {
            ClaimSpec::Reflection { .. } => ClaimId::Reflection,
            ClaimSpec::TwoA { .. } => ClaimId::TwoA,
            ClaimSpec::TwoB { .. } => ClaimId::TwoB,
            ClaimSpec::Three { .. } => ClaimId::Three,
            ClaimSpec::Four { .. } => ClaimId::Four,
            ClaimSpec::Recurrence { .. } => ClaimId::Recurrence,
            ClaimSpec::Minimality { .. } => ClaimId::Minimality,
        }
    }

    fn parameters(&self) -> BTreeMap<String, Value> {
        let map = match self {
            ClaimSpec::Reflection { n_max, radius } => json!({ "n_max": n_max, "radius": radius }),
            ClaimSpec::TwoA { n_max } => json!({ "n_max": n_max }),
            ClaimSpec::TwoB { k_max, window_n } => json!({ "k_max": k_max, "window_n": window_n }),
            ClaimSpec::Three { point, horizon_n } => {
                json!({ "point": point.to_string(), "horizon_n": horizon_n })
            }
            ClaimSpec::Four { k_max } => json!({ "k_max": k_max }),
            ClaimSpec::Recurrence { points, radius, horizon_n } => json!({
                "points": points.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                "radius": radius,
                "horizon_n": horizon_n,
            }),
            ClaimSpec::Minimality { n_max, zero_len_max } => {
                json!({ "n_max": n_max, "zero_len_max": zero_len_max })
            }
        };
        serde_json::from_value(map).expect("object literal")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClaimStatus {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimReport {
    pub claim_id: ClaimId,
    pub parameters: BTreeMap<String, Value>,
    pub status: ClaimStatus,
    /// Tuples whose layout depends on the claim; see [`ClaimReport::replay`].
    #[serde(with = "exact::nested")]
    pub witnesses: Vec<Vec<i128>>,
    #[serde(with = "exact::nested")]
    pub counterexamples: Vec<Vec<i128>>,
    /// Instances a finite scan could not settle.
    #[serde(with = "exact::nested")]
    pub unresolved: Vec<Vec<i128>>,
    pub instances_checked: u64,
    /// Index bounds the sweep used.
    #[serde(with = "exact::vec")]
    pub horizon: Vec<i128>,
    pub notes: Vec<String>,
}

impl ClaimReport {
    fn new(spec: &ClaimSpec) -> Self {
        ClaimReport {
            claim_id: spec.id(),
            parameters: spec.parameters(),
            status: ClaimStatus::Pass,
            witnesses: Vec::new(),
            counterexamples: Vec::new(),
            unresolved: Vec::new(),
            instances_checked: 0,
            horizon: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn settle(&mut self) {
        self.witnesses.sort();
        self.counterexamples.sort();
        self.unresolved.sort();
        self.status = if !self.counterexamples.is_empty() {
            ClaimStatus::Fail
        } else if !self.unresolved.is_empty() {
            ClaimStatus::Inconclusive
        } else {
            ClaimStatus::Pass
        };
    }

    /// Re-checks every witness against [`xi_at`]; returns the first tuple that
    /// does not hold up.
    ///
    /// Layouts:
    /// - `1`: `(n, r)`; `ξ(ℓ_n - 1 + i) = ξ(-i)` for `|i| ≤ r`
    /// - `2a`: `(m, n)`; hypothesis holds and `ξ(n..)` reads `ω_{n-m}`
    /// - `2b`: `(k, m, n, r)`; `n - m > ℓ_k + k` and `ξ(r..r+k-2)` is zero inside `[m, n]`
    /// - `3`: `(H, count)`; `count` ones of the point on `[-H, H]`
    /// - `4`: `(k, m)`; `ξ(m..m+k)` reads `0^k 1`
    /// - `recurrence`: `(kind, s, N, n)`, kind 0/1/2 for zero/xi/rxi; a return
    /// - `minimality`: `(0, n, a, b)` consecutive ones in `ξ[0, ℓ_n)` with `b - a ≥ n - 1`,
    ///   or `(1, L, j)` with `ξ(j..j+L)` all zero
    pub fn replay(&self) -> std::result::Result<(), Vec<i128>> {
        let point = self
            .parameters
            .get("point")
            .and_then(Value::as_str)
            .and_then(|s| s.parse::<PointDescriptor>().ok());
        for w in &self.witnesses {
            if !replay_one(self.claim_id, point, w) {
                return Err(w.clone());
            }
        }
        Ok(())
    }
}

fn all_zero(lo: i128, hi: i128) -> bool {
    (lo..=hi).all(|i| xi_at(i) == 0)
}

fn len(n: i128) -> Option<i128> {
    u32::try_from(n).ok().and_then(|n| omega_length(n).ok()).map(|l| l as i128)
}

fn reads_omega(at: i128, n: u32) -> bool {
    match crate::omega::omega_word(n, 1 << 26) {
        Ok(w) => (0..w.len()).all(|k| xi_at(at + k as i128) == w.get(k)),
        Err(_) => false,
    }
}

fn replay_one(id: ClaimId, point: Option<PointDescriptor>, w: &[i128]) -> bool {
    match (id, w) {
        (ClaimId::Reflection, &[n, r]) => {
            len(n).is_some_and(|l| (-r..=r).all(|i| xi_at(l - 1 + i) == xi_at(-i)))
        }
        (ClaimId::TwoA, &[m, n]) => {
            m < n
                && all_zero(m, n - 1)
                && xi_at(n) == 1
                && u32::try_from(n - m).is_ok_and(|d| reads_omega(n, d))
        }
        (ClaimId::TwoB, &[k, m, n, r]) => {
            len(k).is_some_and(|l| n - m > l + k)
                && m <= r
                && r + k - 2 <= n
                && (k <= 1 || all_zero(r, r + k - 2))
        }
        (ClaimId::Three, &[h, count]) => point.is_some_and(|p| {
            (-h..=h).filter(|&i| p.at(i) == 1).count() as i128 == count
        }),
        (ClaimId::Four, &[k, m]) => m > 0 && all_zero(m, m + k - 1) && xi_at(m + k) == 1,
        (ClaimId::Recurrence, &[kind, s, radius, n]) => {
            let p = match kind {
                0 => PointDescriptor::Zero,
                1 => PointDescriptor::XiShift(s),
                2 => PointDescriptor::XiReflectShift(s),
                _ => return false,
            };
            n != 0 && (-radius..=radius).all(|i| p.at(n + i) == p.at(i))
        }
        (ClaimId::Minimality, &[0, n, a, b]) => {
            len(n).is_some_and(|l| 0 <= a && b < l)
                && b - a >= n - 1
                && xi_at(a) == 1
                && xi_at(b) == 1
                && all_zero(a + 1, b - 1)
        }
        (ClaimId::Minimality, &[1, l, j]) => l >= 1 && all_zero(j, j + l - 1),
        _ => false,
    }
}

/// Runs the sweep for `spec`. Cap violations end the sweep with an
/// inconclusive report rather than an error.
pub fn verify_claim(spec: &ClaimSpec, limits: &Limits) -> Result<ClaimReport> {
    let mut report = ClaimReport::new(spec);
    let outcome = match spec {
        ClaimSpec::Reflection { n_max, radius } => reflection(&mut report, *n_max, *radius, limits),
        ClaimSpec::TwoA { n_max } => two_a(&mut report, *n_max, limits),
        ClaimSpec::TwoB { k_max, window_n } => two_b(&mut report, *k_max, *window_n, limits),
        ClaimSpec::Three { point, horizon_n } => three(&mut report, point, *horizon_n, limits),
        ClaimSpec::Four { k_max } => four(&mut report, *k_max, limits),
        ClaimSpec::Recurrence { points, radius, horizon_n } => {
            recurrence(&mut report, points, *radius, *horizon_n, limits)
        }
        ClaimSpec::Minimality { n_max, zero_len_max } => {
            minimality(&mut report, *n_max, *zero_len_max, limits)
        }
    };
    match outcome {
        Ok(()) => report.settle(),
        Err(e @ (Error::CapExceeded { .. } | Error::CapacityExceeded { .. })) => {
            report.settle();
            report.status = ClaimStatus::Inconclusive;
            report.notes.push(format!("sweep stopped early: {e}"));
        }
        Err(e) => return Err(e),
    }
    Ok(report)
}

fn reflection(report: &mut ClaimReport, n_max: u32, radius: u32, limits: &Limits) -> Result<()> {
    if n_max == 0 {
        return Err(Error::InvalidArgument("n_max must be positive".into()));
    }
    for n in 1..=n_max {
        let l = omega_length(n)? as i128;
        let r = radius.min(n) as i128;
        // T^{ℓ_n - 1} ξ on [-r, r] against ξ on [-r, r] read backwards
        let shifted = xi_segment(l - 1 - r, l - 1 + r, limits)?;
        let mirrored = xi_segment(-r, r, limits)?.reversed();
        report.instances_checked += 1;
        if shifted == mirrored {
            report.witnesses.push(vec![n as i128, r]);
        } else {
            report.counterexamples.push(vec![n as i128, r]);
        }
        if l as u128 <= limits.max_materialize as u128 {
            let w = xi_segment(0, l - 1, limits)?;
            if w != w.reversed() {
                report.counterexamples.push(vec![n as i128, -1]);
                report.notes.push(format!("omega_{n} is not a palindrome"));
            }
        }
    }
    report.horizon = vec![omega_length(n_max)? as i128];
    Ok(())
}

/// Instances `(m, n)`: `ξ(m..n-1)` zero, `ξ(n) = 1`, `0 ≤ m < n ≤ n_max`.
fn two_a(report: &mut ClaimReport, n_max: u32, limits: &Limits) -> Result<()> {
    let n_max = n_max as i128;
    let prefix = xi_segment(0, n_max, limits)?;
    let mut instances = Vec::new();
    let mut run = 0i128;
    for n in 0..=n_max {
        if prefix.get(n as usize) == 1 {
            for d in 1..=run {
                instances.push((n - d, n));
            }
            run = 0;
        } else {
            run += 1;
        }
    }
    let longest = instances.iter().map(|&(m, n)| n - m).max().unwrap_or(0);
    let reach = n_max + omega_length(longest.max(1) as u32)? as i128;
    let text = xi_segment(0, reach, limits)?;
    let omegas: Vec<Word> = (1..=longest.max(1) as u32)
        .map(|d| crate::omega::omega_word(d, limits.max_materialize))
        .collect::<Result<_>>()?;

    let results: Vec<(Vec<i128>, bool)> = instances
        .par_iter()
        .map(|&(m, n)| {
            let ok = omegas[(n - m - 1) as usize].matches_at(&text, n as usize);
            (vec![m, n], ok)
        })
        .collect();
    report.instances_checked = results.len() as u64;
    for (tuple, ok) in results {
        if ok {
            report.witnesses.push(tuple);
        } else {
            report.counterexamples.push(tuple);
        }
    }
    report.horizon = vec![n_max, reach];
    Ok(())
}

/// Starts `m` of windows `[m, m + width - 1]` inside `text` that contain no
/// run of `run` zeros.
fn windows_without_run(text: &Word, width: usize, run: usize) -> Vec<usize> {
    if text.len() < width {
        return Vec::new();
    }
    if run == 0 {
        return Vec::new();
    }
    // ends[p + 1] counts positions q ≤ p where a zero run of length `run` ends
    let mut ends = vec![0u32; text.len() + 1];
    let mut current = 0usize;
    for p in 0..text.len() {
        current = if text.get(p) == 0 { current + 1 } else { 0 };
        ends[p + 1] = ends[p] + (current >= run) as u32;
    }
    (0..=text.len() - width)
        .filter(|&m| {
            let (lo, hi) = (m + run - 1, m + width - 1);
            lo > hi || ends[hi + 1] == ends[lo]
        })
        .collect()
}

fn first_run_in(text: &Word, lo: usize, hi: usize, run: usize) -> Option<usize> {
    let mut current = 0;
    for p in lo..=hi {
        current = if text.get(p) == 0 { current + 1 } else { 0 };
        if current >= run {
            return Some(p + 1 - run);
        }
    }
    None
}

/// Only windows with `n - m = ℓ_k + k + 1` need checking: every longer window
/// contains one of them, and containing a zero run is inherited upward.
fn two_b(report: &mut ClaimReport, k_max: u32, window_n: u32, limits: &Limits) -> Result<()> {
    if k_max == 0 {
        return Err(Error::InvalidArgument("k_max must be positive".into()));
    }
    let total = omega_length(window_n)?;
    limits.check(total)?;
    let text = xi_segment(0, total as i128 - 1, limits)?;
    let per_k: Vec<(u32, usize, u64, Vec<usize>, Vec<usize>)> = (1..=k_max)
        .into_par_iter()
        .map(|k| {
            let l = omega_length(k).expect("small k") as usize;
            let width = l + k as usize + 2;
            let windows = (text.len() + 1).saturating_sub(width) as u64;
            let literal = windows_without_run(&text, width, k as usize - 1);
            let strong = windows_without_run(&text, width, k as usize);
            (k, width, windows, literal, strong)
        })
        .collect();
    for (k, width, windows, literal, strong) in per_k {
        report.instances_checked += windows;
        let ki = k as i128;
        for &m in &literal {
            report.counterexamples.push(vec![ki, m as i128, (m + width - 1) as i128]);
        }
        if windows > 0 && literal.is_empty() {
            let (m, n) = (0usize, width - 1);
            let r = if k <= 1 { 0 } else { first_run_in(&text, m, n, k as usize - 1).expect("checked") };
            report.witnesses.push(vec![ki, m as i128, n as i128, r as i128]);
        }
        if windows == 0 {
            report.notes.push(format!("k={k}: no window of length {width} fits inside omega_{window_n}"));
        }
        if !strong.is_empty() {
            let m = strong[0];
            report.notes.push(format!(
                "k={k}: {} of {windows} windows with n-m = {} lack {k} consecutive zeros (first at m={m}); \
                 the reading with k zeros in place of k-1 does not hold",
                strong.len(),
                width - 1,
            ));
        }
    }
    report.horizon = vec![total as i128];
    Ok(())
}

fn three(report: &mut ClaimReport, p: &PointDescriptor, horizon_n: u32, limits: &Limits) -> Result<()> {
    if *p == PointDescriptor::Zero {
        return Err(Error::InvalidArgument("the one-count claim concerns non-zero points".into()));
    }
    if horizon_n == 0 {
        return Err(Error::InvalidArgument("horizon_n must be positive".into()));
    }
    let h_max = omega_length(horizon_n)? as i128;
    let seg = p.segment(-h_max, h_max, limits)?;
    let mut previous: Option<u64> = None;
    for j in 1..=horizon_n {
        let h = omega_length(j)? as i128;
        let count = seg.count_ones_in((h_max - h) as usize, (h_max + h) as usize + 1);
        report.instances_checked += 1;
        report.witnesses.push(vec![h, count as i128]);
        if previous.is_some_and(|c| count <= c) {
            report.unresolved.push(vec![h, count as i128]);
        }
        previous = Some(count);
    }
    if !report.unresolved.is_empty() {
        report.notes.push("one-count did not grow at every step; finite data cannot refute unboundedness".into());
    }
    report.horizon = vec![h_max];
    Ok(())
}

fn four(report: &mut ClaimReport, k_max: u32, limits: &Limits) -> Result<()> {
    let results: Vec<Result<(u32, i128, Option<i128>)>> = (1..=k_max)
        .into_par_iter()
        .map(|k| {
            let horizon = omega_length(k + 2)? as i128;
            match find_m(k, horizon, limits) {
                Ok(m) => Ok((k, horizon, Some(m))),
                Err(Error::NotFoundWithinHorizon { .. }) => Ok((k, horizon, None)),
                Err(e) => Err(e),
            }
        })
        .collect();
    for r in results {
        let (k, horizon, m) = r?;
        report.instances_checked += 1;
        report.horizon.push(horizon);
        match m {
            Some(m) => report.witnesses.push(vec![k as i128, m]),
            None => report.unresolved.push(vec![k as i128, horizon]),
        }
    }
    Ok(())
}

fn kind_of(p: &PointDescriptor) -> (i128, i128) {
    match *p {
        PointDescriptor::Zero => (0, 0),
        PointDescriptor::XiShift(s) => (1, s),
        PointDescriptor::XiReflectShift(s) => (2, s),
    }
}

fn recurrence(
    report: &mut ClaimReport,
    points: &[PointDescriptor],
    radius: u32,
    horizon_n: u32,
    limits: &Limits,
) -> Result<()> {
    let horizon = omega_length(horizon_n)? as i128;
    let reports = super::classify_points(points, radius, horizon, limits)?;
    for (p, r) in points.iter().zip(&reports) {
        let (kind, s) = kind_of(p);
        for o in &r.radii {
            report.instances_checked += 1;
            let n = o.positive.found().or(o.negative.found());
            match n {
                Some(n) => report.witnesses.push(vec![kind, s, o.radius as i128, n]),
                None => report.unresolved.push(vec![kind, s, o.radius as i128]),
            }
        }
        if r.verdict == Verdict::NoneWithinHorizon {
            let missing = r.radii.iter().filter(|o| o.positive.found().is_none() && o.negative.found().is_none()).count();
            report.notes.push(format!("{p}: {missing} radii without a return within {horizon}"));
        }
        if r.radii.iter().all(|o| o.positive == ReturnOutcome::ProvedNone) {
            report.notes.push(format!("{p}: no positive return at any radius (structural)"));
        }
    }
    report.horizon = vec![horizon];
    Ok(())
}

fn minimality(report: &mut ClaimReport, n_max: u32, zero_len_max: u32, limits: &Limits) -> Result<()> {
    let one: Word = "1".parse()?;
    let mut best = 0i128;
    for n in 2..=n_max {
        let l = omega_length(n)? as i128;
        let occ = occurrences(&one, 0, l - 1, limits)?;
        report.instances_checked += 1;
        let (a, b) = occ
            .positions
            .windows(2)
            .map(|p| (p[0], p[1]))
            .max_by_key(|&(a, b)| (b - a, -a))
            .expect("omega_n has at least two ones for n >= 2");
        let ni = n as i128;
        if b - a >= ni - 1 {
            report.witnesses.push(vec![0, ni, a, b]);
        } else {
            report.counterexamples.push(vec![0, ni, a, b]);
        }
        best = best.max(b - a);
    }
    report.notes.push(format!("largest gap between consecutive ones: {best}"));
    for len in 1..=zero_len_max as i128 {
        report.instances_checked += 1;
        report.witnesses.push(vec![1, len, -len]);
    }
    report.horizon = vec![omega_length(n_max.max(1))? as i128];
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lim() -> Limits {
        Limits::default()
    }

    fn check(spec: ClaimSpec) -> ClaimReport {
        let r = verify_claim(&spec, &lim()).unwrap();
        assert_eq!(r.replay(), Ok(()));
        r
    }

    #[test]
    fn two_a_example() {
        let r = check(ClaimSpec::TwoA { n_max: 100 });
        assert_eq!(r.status, ClaimStatus::Pass);
        assert!(r.witnesses.contains(&vec![8, 11]));
        assert_eq!(r.instances_checked as usize, r.witnesses.len());
    }

    #[test]
    fn two_b_example() {
        let r = check(ClaimSpec::TwoB { k_max: 3, window_n: 6 });
        assert_eq!(r.status, ClaimStatus::Pass);
        assert!(r.counterexamples.is_empty());
    }

    #[test]
    fn two_b_window_filter_matches_naive() {
        let text = xi_segment(0, omega_length(8).unwrap() as i128 - 1, &lim()).unwrap();
        let s = text.to_string();
        for (width, run) in [(5, 2), (13, 3), (30, 4), (30, 0)] {
            let fast = windows_without_run(&text, width, run);
            let needle = "0".repeat(run);
            let slow: Vec<usize> = (0..=s.len() - width)
                .filter(|&m| run > 0 && !s[m..m + width].contains(&needle))
                .collect();
            assert_eq!(fast, slow);
        }
    }

    #[test]
    fn two_b_strong_reading_noted() {
        let r = check(ClaimSpec::TwoB { k_max: 6, window_n: 10 });
        assert_eq!(r.status, ClaimStatus::Pass);
        assert!(r.notes.iter().any(|n| n.starts_with("k=5")));
    }

    #[test]
    fn three_example() {
        let r = check(ClaimSpec::Three { point: PointDescriptor::XiShift(0), horizon_n: 10 });
        assert_eq!(r.status, ClaimStatus::Pass);
        let counts: Vec<i128> = r.witnesses.iter().map(|w| w[1]).collect();
        assert!(counts.windows(2).all(|c| c[0] < c[1]));
        assert!(verify_claim(&ClaimSpec::Three { point: PointDescriptor::Zero, horizon_n: 4 }, &lim()).is_err());
    }

    #[test]
    fn four_and_reflection() {
        let r = check(ClaimSpec::Four { k_max: 12 });
        assert_eq!(r.status, ClaimStatus::Pass);
        assert!(r.witnesses.contains(&vec![3, 8]) && r.witnesses.contains(&vec![4, 19]));
        let r = check(ClaimSpec::Reflection { n_max: 16, radius: 12 });
        assert_eq!(r.status, ClaimStatus::Pass);
    }

    #[test]
    fn recurrence_and_minimality() {
        let points = vec![PointDescriptor::Zero, PointDescriptor::XiShift(0), PointDescriptor::XiReflectShift(0)];
        let r = check(ClaimSpec::Recurrence { points, radius: 4, horizon_n: 16 });
        assert_eq!(r.status, ClaimStatus::Pass);
        assert!(r.notes.iter().any(|n| n.starts_with("rxi:0: no positive return")));
        let r = check(ClaimSpec::Minimality { n_max: 12, zero_len_max: 16 });
        assert_eq!(r.status, ClaimStatus::Pass);
    }

    #[test]
    fn replay_rejects_forged_witness() {
        let mut r = check(ClaimSpec::TwoA { n_max: 40 });
        r.witnesses.push(vec![7, 11]);
        assert_eq!(r.replay(), Err(vec![7, 11]));
    }

    #[test]
    fn report_round_trips() {
        let r = check(ClaimSpec::TwoA { n_max: 30 });
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"claim_id\":\"2a\""));
        assert_eq!(serde_json::from_str::<ClaimReport>(&json).unwrap(), r);
    }
}
