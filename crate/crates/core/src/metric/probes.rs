//! Sampling probes for expansivity, local stable sets and contraction rates.
//!
//! Samples come from a ChaCha8 generator keyed by the seed, with stream `i`
//! reserved for sample `i`, so a sample does not depend on how work is split
//! across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    distance, first_disagreement, stable_entry_time, stable_membership, unstable_membership, Dyadic,
    MetricValue, Point,
};
use crate::{exact, Error, Limits, PointDescriptor, Result};

pub(crate) fn rng_for(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Shape of randomly drawn points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleSpec {
    pub count: usize,
    /// Shifts are drawn from `[-max_shift, max_shift]`.
    pub max_shift: i64,
    pub max_flips: usize,
    /// Flips are drawn from `[-flip_span, flip_span]`.
    pub flip_span: i64,
}

impl Default for SampleSpec {
    fn default() -> Self {
        SampleSpec { count: 1000, max_shift: 64, max_flips: 3, flip_span: 64 }
    }
}

fn random_descriptor(rng: &mut ChaCha8Rng, max_shift: i64) -> PointDescriptor {
    let s = rng.random_range(-max_shift..=max_shift) as i128;
    match rng.random_range(0..5) {
        0 => PointDescriptor::Zero,
        1 | 2 => PointDescriptor::XiShift(s),
        _ => PointDescriptor::XiReflectShift(s),
    }
}

fn random_point(rng: &mut ChaCha8Rng, spec: &SampleSpec) -> Point {
    let mut p = Point::from(random_descriptor(rng, spec.max_shift));
    for _ in 0..rng.random_range(0..=spec.max_flips) {
        p.toggle(rng.random_range(-spec.flip_span..=spec.flip_span) as i128);
    }
    p
}

/// Toggles `count` distinct coordinates of `p` drawn from `[lo, hi]`.
fn toggle_distinct(rng: &mut ChaCha8Rng, p: &Point, count: usize, lo: i128, hi: i128) -> Point {
    let mut chosen = std::collections::BTreeSet::new();
    while chosen.len() < count.min((hi - lo + 1) as usize) {
        chosen.insert(rng.random_range(lo..=hi));
    }
    let mut q = p.clone();
    for j in chosen {
        q.toggle(j);
    }
    q
}

pub fn sample_points(seed: u64, spec: &SampleSpec) -> Vec<Point> {
    (0..spec.count).map(|i| random_point(&mut rng_for(seed, i as u64), spec)).collect()
}

/// Distinct pairs: half share a base and differ in finitely many coordinates,
/// half are drawn independently.
pub fn sample_pairs(seed: u64, spec: &SampleSpec) -> Vec<(Point, Point)> {
    (0..spec.count)
        .map(|i| {
            let mut rng = rng_for(seed, i as u64);
            let x = random_point(&mut rng, spec);
            let span = spec.flip_span as i128;
            let y = if rng.random_bool(0.5) {
                let k = rng.random_range(1..=3);
                toggle_distinct(&mut rng, &x, k, -span, span)
            } else {
                let y = random_point(&mut rng, spec);
                if y == x {
                    toggle_distinct(&mut rng, &y, 1, -span, span)
                } else {
                    y
                }
            };
            (x, y)
        })
        .collect()
}

fn exponent(d: Dyadic, what: &str) -> Result<u32> {
    match d.neg_log2() {
        Some(e) if (0..=1 << 16).contains(&e) => Ok(e as u32),
        _ => Err(Error::InvalidArgument(format!("{what} must be 2^-e with 0 <= e <= 65536, got {d}"))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpansivityWitness {
    pub index: usize,
    #[serde(with = "exact")]
    pub n: i128,
    pub distance: Dyadic,
    /// The pair differs in finitely many known coordinates and `n` is the
    /// multiple of the power nearest one of them.
    pub structural: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpansivityReport {
    pub c: Dyadic,
    pub power: u32,
    pub shift_budget: u64,
    pub pairs: usize,
    pub witnesses: Vec<ExpansivityWitness>,
    /// Pairs with no witness inside the budget.
    pub failures: Vec<usize>,
    pub min_witness_distance: Option<Dyadic>,
}

/// Multiple of `p` nearest `j`, the lower one on ties.
fn nearest_multiple(j: i128, p: i128) -> i128 {
    p * (j + (p - 1) / 2).div_euclid(p)
}

fn expansive_witness(
    index: usize,
    x: &Point,
    y: &Point,
    c: Dyadic,
    power: u32,
    shift_budget: u64,
    limits: &Limits,
) -> Result<Option<ExpansivityWitness>> {
    if x.same_as(y) {
        return Err(Error::PairEqual);
    }
    let p = power as i128;
    let res = c.neg_log2().map_or(0, |e| e.max(0) as u64) + 1;
    let check = |n: i128| -> Result<Option<Dyadic>> {
        let d = distance(&x.shift(n)?, &y.shift(n)?, res, limits)?;
        Ok((d.certified && d.value > c).then_some(d.value))
    };
    let structural = x.base == y.base;
    if let Some(j) = first_disagreement(x, y, shift_budget, limits)? {
        let n = nearest_multiple(j, p);
        if n.unsigned_abs() <= shift_budget as u128 {
            if let Some(d) = check(n)? {
                return Ok(Some(ExpansivityWitness { index, n, distance: d, structural }));
            }
        }
    }
    // the shortcut was too coarse for `c`; fall back to a direct search
    let budget = shift_budget as i128 / p;
    for k in 0..=budget {
        for n in [-k * p, k * p] {
            if let Some(d) = check(n)? {
                return Ok(Some(ExpansivityWitness { index, n, distance: d, structural: false }));
            }
            if k == 0 {
                break;
            }
        }
    }
    Ok(None)
}

/// For each pair, a multiple `n` of `power` with `|n| ≤ shift_budget` and
/// `d(T^n x, T^n y) > c`.
pub fn expansivity_probe(
    pairs: &[(Point, Point)],
    c: Dyadic,
    power: u32,
    shift_budget: u64,
    limits: &Limits,
) -> Result<ExpansivityReport> {
    if power == 0 {
        return Err(Error::InvalidArgument("power must be at least 1".into()));
    }
    if c >= Dyadic::ONE {
        return Err(Error::InvalidArgument("c must be below 1".into()));
    }
    let found: Vec<(usize, Option<ExpansivityWitness>)> = pairs
        .par_iter()
        .enumerate()
        .map(|(i, (x, y))| Ok((i, expansive_witness(i, x, y, c, power, shift_budget, limits)?)))
        .collect::<Result<_>>()?;
    let mut witnesses = Vec::new();
    let mut failures = Vec::new();
    for (i, w) in found {
        match w {
            Some(w) => witnesses.push(w),
            None => failures.push(i),
        }
    }
    let min_witness_distance = witnesses.iter().map(|w| w.distance).min();
    Ok(ExpansivityReport { c, power, shift_budget, pairs: pairs.len(), witnesses, failures, min_witness_distance })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Stable,
    Unstable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StableProbeReport {
    pub seed: u64,
    pub samples: usize,
    pub max_exponent: u32,
    /// Samples where the definition and the closed form disagree.
    pub mismatches: Vec<usize>,
    /// Samples where the entry time into the local stable set was wrong.
    pub decomposition_failures: Vec<usize>,
    pub members: usize,
}

/// Cross-checks the closed form of `W^s_ε` and `W^u_ε` against the definition
/// on pairs differing near the cutoff, and the entry time `n` after which
/// `T^n y ∈ W^s_ε(T^n x)`.
pub fn stable_probe(seed: u64, spec: &SampleSpec, max_exponent: u32, limits: &Limits) -> Result<StableProbeReport> {
    let span = spec.flip_span as i128;
    let rows: Vec<(bool, bool, bool)> = (0..spec.count)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(seed, i as u64);
            let x = random_point(&mut rng, spec);
            let k = rng.random_range(0..=2);
            let y = toggle_distinct(&mut rng, &x, k, -span, span);
            let e = rng.random_range(0..=max_exponent);
            let horizon = (2 * span + e as i128 + 2) as u64;
            let s = stable_membership(&x, &y, e, horizon, limits)?;
            let u = unstable_membership(&x, &y, e, horizon, limits)?;
            let ok = s.certified && u.certified;
            let n0 = stable_entry_time(&x, &y, e, limits)?.expect("shared base");
            let at = stable_membership(&x.shift(n0)?, &y.shift(n0)?, e, horizon, limits)?;
            let before = if n0 > 0 {
                stable_membership(&x.shift(n0 - 1)?, &y.shift(n0 - 1)?, e, horizon, limits)?.closed_form
            } else {
                false
            };
            Ok((ok, at.closed_form && at.definition && !before, s.closed_form))
        })
        .collect::<Result<_>>()?;
    Ok(StableProbeReport {
        seed,
        samples: spec.count,
        max_exponent,
        mismatches: rows.iter().enumerate().filter(|(_, r)| !r.0).map(|(i, _)| i).collect(),
        decomposition_failures: rows.iter().enumerate().filter(|(_, r)| !r.1).map(|(i, _)| i).collect(),
        members: rows.iter().filter(|r| r.2).count(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HyperbolicFailure {
    pub side: Side,
    pub index: usize,
    pub n: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HyperbolicReport {
    pub seed: u64,
    pub a: Dyadic,
    pub lambda: Dyadic,
    pub gamma: Dyadic,
    pub budget: u32,
    pub pairs_per_side: usize,
    pub checks: u64,
    /// Checks where the inequality held with equality.
    pub equalities: u64,
    pub failures: Vec<HyperbolicFailure>,
}

/// Builds pairs in the `γ`-local stable (unstable) set and checks
/// `d(T^{±n} x, T^{±n} y) ≤ a λ^n d(x, y)` for `n ≤ budget`.
pub fn hyperbolic_probe(
    seed: u64,
    spec: &SampleSpec,
    a: Dyadic,
    lambda: Dyadic,
    gamma: Dyadic,
    budget: u32,
    limits: &Limits,
) -> Result<HyperbolicReport> {
    let g = exponent(gamma, "gamma")? as i128;
    let span = spec.flip_span as i128;
    let res = (g + span + budget as i128 + 1) as u64;
    let rows: Vec<(u64, u64, Vec<HyperbolicFailure>)> = (0..2 * spec.count)
        .into_par_iter()
        .map(|t| {
            let (side, index) = if t < spec.count { (Side::Stable, t) } else { (Side::Unstable, t - spec.count) };
            let mut rng = rng_for(seed, t as u64);
            let x = random_point(&mut rng, spec);
            let k = rng.random_range(1..=3);
            let (y, dir) = match side {
                Side::Stable => (toggle_distinct(&mut rng, &x, k, -g - span, -g), 1),
                Side::Unstable => (toggle_distinct(&mut rng, &x, k, g, g + span), -1),
            };
            let d0 = distance(&x, &y, res, limits)?.value;
            let mut checks = 0;
            let mut equalities = 0;
            let mut failures = Vec::new();
            for n in 0..=budget {
                let shift = dir * n as i128;
                let d = distance(&x.shift(shift)?, &y.shift(shift)?, res, limits)?;
                let bound = a * lambda.powi(n as i64) * d0;
                checks += 1;
                if !d.certified || d.value > bound {
                    failures.push(HyperbolicFailure { side, index, n });
                } else if d.value == bound {
                    equalities += 1;
                }
            }
            Ok((checks, equalities, failures))
        })
        .collect::<Result<_>>()?;
    Ok(HyperbolicReport {
        seed,
        a,
        lambda,
        gamma,
        budget,
        pairs_per_side: spec.count,
        checks: rows.iter().map(|r| r.0).sum(),
        equalities: rows.iter().map(|r| r.1).sum(),
        failures: rows.into_iter().flat_map(|r| r.2).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub seed: u64,
    pub a: Dyadic,
    pub n: u32,
    pub delta: Dyadic,
    pub budget: u32,
    pub samples: usize,
    /// Samples with `x = y`, which the inequalities say nothing about.
    pub skipped: usize,
    pub checks: u64,
    /// `(sample, i)`; `i = -1` marks the backward expansion inequality.
    pub failures: Vec<(usize, i64)>,
}

/// Checks `d(T^{-N} x, T^{-N} y) ≥ A d(x, y)` and
/// `d(T^{iN} x, T^{iN} y) ≤ A^{-i} d(x, y)` for `y` in the `δ`-stable set of
/// `x` under `T^N`. Pairs agree on `[-k + 1, ∞)` with `k ≥ max(N, e)`.
pub fn fn_scaling_probe(
    seed: u64,
    spec: &SampleSpec,
    a: Dyadic,
    n: u32,
    delta: Dyadic,
    budget: u32,
    limits: &Limits,
) -> Result<ScalingReport> {
    let log_a = match a {
        Dyadic::Pow2(k) if k >= 0 => k as u32,
        _ => return Err(Error::InvalidArgument(format!("A must be a power of two at least 1, got {a}"))),
    };
    if n < log_a {
        return Err(Error::InvalidArgument(format!("N = {n} is below log2 A = {log_a}")));
    }
    let e = exponent(delta, "delta")?;
    if e == 0 {
        return Err(Error::InvalidArgument("delta must be at most 1/2".into()));
    }
    let k = n.max(e) as i128;
    let span = spec.flip_span as i128;
    let res = (k + span + (budget as i128 + 1) * n as i128 + 1) as u64;
    let step = n as i128;
    let rows: Vec<Option<(u64, Vec<(usize, i64)>)>> = (0..spec.count)
        .into_par_iter()
        .map(|index| {
            let mut rng = rng_for(seed, index as u64);
            let x = random_point(&mut rng, spec);
            let count = if rng.random_range(0..8) == 0 { 0 } else { rng.random_range(1..=3) };
            let y = toggle_distinct(&mut rng, &x, count, -k - span, -k);
            if x.same_as(&y) {
                return Ok(None);
            }
            let d0 = distance(&x, &y, res, limits)?.value;
            let mut failures = Vec::new();
            let back = distance(&x.shift(-step)?, &y.shift(-step)?, res, limits)?;
            if !back.certified || back.value < a * d0 {
                failures.push((index, -1));
            }
            for i in 0..=budget as i64 {
                let d = distance(&x.shift(i as i128 * step)?, &y.shift(i as i128 * step)?, res, limits)?;
                if !d.certified || d.value > a.powi(-i) * d0 {
                    failures.push((index, i));
                }
            }
            Ok(Some((budget as u64 + 2, failures)))
        })
        .collect::<Result<_>>()?;
    Ok(ScalingReport {
        seed,
        a,
        n,
        delta,
        budget,
        samples: spec.count,
        skipped: rows.iter().filter(|r| r.is_none()).count(),
        checks: rows.iter().flatten().map(|r| r.0).sum(),
        failures: rows.into_iter().flatten().flat_map(|r| r.1).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub seed: u64,
    pub delta: Dyadic,
    pub a: Dyadic,
    pub budget: u32,
    pub triples: usize,
    /// `y, z ∈ W^s_{δ/2}(x)` but `z ∉ W^s_δ(y)` within the budget.
    pub lemma_failures: Vec<usize>,
    /// Backward expansion by `A` failed.
    pub expansion_failures: Vec<usize>,
    /// Triples whose preimages were within `δ/2`, so the last implication applied.
    pub preimage_checked: usize,
    pub preimage_failures: Vec<usize>,
}

/// Triples `y, z ∈ W^s_{δ/2}(x)` built by toggling coordinates below `-e`
/// where `δ = 2^(-e)`. Checks, for `n ≤ budget`:
/// `z ∈ W^s_δ(y)`; `d(T^{-1} y, T^{-1} z) ≥ A d(y, z)`; and for
/// `y' = T^{-1} y`, `z' = T^{-1} z` with `d(y', z') ≤ δ/2`, `z' ∈ W^s_δ(y')`.
pub fn lemma_probe(
    seed: u64,
    spec: &SampleSpec,
    delta: Dyadic,
    a: Dyadic,
    budget: u32,
    limits: &Limits,
) -> Result<LemmaReport> {
    let e = exponent(delta, "delta")?;
    if e >= 4096 {
        return Err(Error::Construction(format!("delta/2 = 2^-{} is below the sampling resolution", e + 1)));
    }
    let half = e as i128 + 1;
    let span = spec.flip_span as i128;
    let res = (half + span + budget as i128 + 2) as u64;
    let within = |u: &Point, v: &Point, bound: Dyadic| -> Result<bool> {
        for n in 0..=budget as i128 {
            let d = distance(&u.shift(n)?, &v.shift(n)?, res, limits)?;
            if !d.certified || d.value > bound {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let rows: Vec<(bool, bool, Option<bool>)> = (0..spec.count)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(seed, i as u64);
            let x = random_point(&mut rng, spec);
            let ky = rng.random_range(0..=3);
            let y = toggle_distinct(&mut rng, &x, ky, -half - span, -half);
            let z = if rng.random_range(0..6) == 0 {
                y.clone()
            } else {
                let kz = rng.random_range(0..=3);
                toggle_distinct(&mut rng, &x, kz, -half - span, -half)
            };
            let lemma = within(&y, &z, delta)?;
            let dyz = distance(&y, &z, res, limits)?.value;
            let back = distance(&y.shift(-1)?, &z.shift(-1)?, res, limits)?.value;
            let expansion = back >= a * dyz;
            let (yp, zp) = (y.shift(-1)?, z.shift(-1)?);
            let preimage = if distance(&yp, &zp, res, limits)?.value <= delta * Dyadic::HALF {
                Some(within(&yp, &zp, delta)?)
            } else {
                None
            };
            Ok((lemma, expansion, preimage))
        })
        .collect::<Result<_>>()?;
    let failing = |f: &dyn Fn(&(bool, bool, Option<bool>)) -> bool| -> Vec<usize> {
        rows.iter().enumerate().filter(|(_, r)| f(r)).map(|(i, _)| i).collect()
    };
    Ok(LemmaReport {
        seed,
        delta,
        a,
        budget,
        triples: spec.count,
        lemma_failures: failing(&|r| !r.0),
        expansion_failures: failing(&|r| !r.1),
        preimage_checked: rows.iter().filter(|r| r.2.is_some()).count(),
        preimage_failures: failing(&|r| r.2 == Some(false)),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Trend {
    /// The infimum kept shrinking as the horizon grew: proximal evidence.
    Decreasing,
    /// Unchanged across the ladder.
    Flat,
    /// Equal points.
    Zero,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistalityPair {
    pub index: usize,
    /// `(H, inf_{|n| ≤ H} d(T^n x, T^n y))` for the ladder `H = 1, 2, 4, …, horizon`.
    pub infima: Vec<(u64, MetricValue)>,
    pub trend: Trend,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistalityReport {
    pub horizon: u64,
    pub pairs: Vec<DistalityPair>,
    pub proximal: usize,
}

fn ladder(horizon: u64) -> Vec<u64> {
    let mut v: Vec<u64> = std::iter::successors(Some(1u64), |h| h.checked_mul(2)).take_while(|&h| h < horizon).collect();
    v.push(horizon.max(1));
    v
}

/// `inf_{|n| ≤ H} d(T^n x, T^n y)` for `H` up to `horizon`.
fn infima(x: &Point, y: &Point, horizon: u64, limits: &Limits) -> Result<Vec<(u64, MetricValue)>> {
    let steps = ladder(horizon);
    if x.same_as(y) {
        let zero = MetricValue { value: Dyadic::Zero, certified: true };
        return Ok(steps.into_iter().map(|h| (h, zero)).collect());
    }
    let h = horizon as i128;
    // d(T^n x, T^n y) = 2^-(distance from n to the nearest disagreement)
    let reach = 2 * h + 1;
    let xs = x.segment(-reach, reach, limits)?;
    let ys = y.segment(-reach, reach, limits)?;
    let len = xs.len();
    let diff: Vec<bool> = (0..len).map(|k| xs.get(k) != ys.get(k)).collect();
    let mut left = vec![None; len];
    let mut last = None;
    for k in 0..len {
        if diff[k] {
            last = Some(k);
        }
        left[k] = last;
    }
    let mut right = vec![None; len];
    last = None;
    for k in (0..len).rev() {
        if diff[k] {
            last = Some(k);
        }
        right[k] = last;
    }
    let gap_at = |n: i128| -> Option<u64> {
        let k = (n + reach) as usize;
        let l = left[k].map(|j| (k - j) as u64);
        let r = right[k].map(|j| (j - k) as u64);
        match (l, r) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    };
    let window = (h + 1) as u64;
    let mut out = Vec::new();
    let mut worst: u64 = 0;
    let mut certified = true;
    let mut done: i128 = -1;
    for step in steps {
        let s = step as i128;
        for m in (done + 1)..=s {
            for n in [-m, m] {
                match gap_at(n) {
                    Some(g) if g <= window => worst = worst.max(g),
                    _ => {
                        certified = false;
                        worst = worst.max(window);
                    }
                }
            }
        }
        done = s;
        out.push((step, MetricValue { value: Dyadic::inv_pow2(worst as i64), certified }));
    }
    Ok(out)
}

/// Tracks the infimum of the orbit distance over growing symmetric horizons.
pub fn distality_probe(pairs: &[(Point, Point)], horizon: u64, limits: &Limits) -> Result<DistalityReport> {
    let rows: Vec<DistalityPair> = pairs
        .par_iter()
        .enumerate()
        .map(|(index, (x, y))| {
            let infima = infima(x, y, horizon, limits)?;
            let first = infima.first().map(|r| r.1.value);
            let last = infima.last().map(|r| r.1.value);
            let trend = match (first, last) {
                (Some(Dyadic::Zero), _) => Trend::Zero,
                (Some(a), Some(b)) if b < a => Trend::Decreasing,
                _ => Trend::Flat,
            };
            Ok(DistalityPair { index, infima, trend })
        })
        .collect::<Result<_>>()?;
    Ok(DistalityReport {
        horizon,
        proximal: rows.iter().filter(|r| r.trend == Trend::Decreasing).count(),
        pairs: rows,
    })
}
