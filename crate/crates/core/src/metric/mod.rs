//! The first-disagreement metric on the full shift.
//!
//! `d(x, y) = 2^(-k)` where `k` is the least `|i|` with `x(i) ≠ y(i)`, and
//! `d(x, x) = 0`. Every value is a power of two, so all arithmetic below is
//! exact.
//!
//! For `ε = 2^(-e)` the local stable set is
//! `W^s_ε(x) = { y : x(j) = y(j) for all j ≥ 1 - e }` when `e ≥ 1`, and the whole
//! space when `e = 0`: `d(T^n x, T^n y) ≤ 2^(-e)` says the points agree on
//! `[n - e + 1, n + e - 1]`, and the union of those windows over `n ≥ 0` is
//! `[1 - e, ∞)`. The unstable set is the mirror image, `j ≤ e - 1`.

mod potp;
mod probes;

pub use potp::{potp_probe, PotpReport, PotpTrial, PseudoOrbit};
pub use probes::{
    distality_probe, expansivity_probe, fn_scaling_probe, hyperbolic_probe, lemma_probe, sample_pairs,
    sample_points, stable_probe, DistalityReport, ExpansivityReport, ExpansivityWitness, HyperbolicReport,
    LemmaReport, SampleSpec, ScalingReport, Side, StableProbeReport, Trend,
};

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{exact, Error, Limits, PointDescriptor, Result};

/// Zero or an exact power of two.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dyadic {
    Zero,
    /// `2^k`.
    Pow2(i64),
}

impl Dyadic {
    pub const ONE: Dyadic = Dyadic::Pow2(0);
    pub const HALF: Dyadic = Dyadic::Pow2(-1);

    /// `2^(-e)`.
    pub fn inv_pow2(e: i64) -> Dyadic {
        Dyadic::Pow2(-e)
    }

    pub fn powi(self, n: i64) -> Dyadic {
        match self {
            Dyadic::Pow2(a) => Dyadic::Pow2(a * n),
            Dyadic::Zero if n == 0 => Dyadic::ONE,
            Dyadic::Zero => Dyadic::Zero,
        }
    }

    /// The `e` with `self = 2^(-e)`.
    pub fn neg_log2(self) -> Option<i64> {
        match self {
            Dyadic::Pow2(k) => Some(-k),
            Dyadic::Zero => None,
        }
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Dyadic::Zero, Dyadic::Zero) => Ordering::Equal,
            (Dyadic::Zero, _) => Ordering::Less,
            (_, Dyadic::Zero) => Ordering::Greater,
            (Dyadic::Pow2(a), Dyadic::Pow2(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Dyadic::Zero => f.write_str("0"),
            Dyadic::Pow2(k) if (0..63).contains(&k) => write!(f, "{}", 1u64 << k),
            Dyadic::Pow2(k) if (-63..0).contains(&k) => write!(f, "1/{}", 1u64 << -k),
            Dyadic::Pow2(k) => write!(f, "2^{k}"),
        }
    }
}

impl std::ops::Mul for Dyadic {
    type Output = Dyadic;

    #[allow(clippy::suspicious_arithmetic_impl)] // exponents add
    fn mul(self, other: Dyadic) -> Dyadic {
        match (self, other) {
            (Dyadic::Pow2(a), Dyadic::Pow2(b)) => Dyadic::Pow2(a + b),
            _ => Dyadic::Zero,
        }
    }
}

impl Serialize for Dyadic {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Dyadic {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl FromStr for Dyadic {
    type Err = Error;

    /// Accepts `0`, `2^k`, a power of two such as `4`, or `1/2^j` such as `1/8`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("{s:?} is not zero or a power of two"));
        let s = s.trim();
        if s == "0" {
            return Ok(Dyadic::Zero);
        }
        if let Some(exp) = s.strip_prefix("2^") {
            return exp.parse().map(Dyadic::Pow2).map_err(|_| bad());
        }
        let log2 = |t: &str| -> Result<i64> {
            let v: u64 = t.parse().map_err(|_| bad())?;
            if v.is_power_of_two() {
                Ok(v.trailing_zeros() as i64)
            } else {
                Err(bad())
            }
        };
        match s.strip_prefix("1/") {
            Some(den) => Ok(Dyadic::Pow2(-log2(den)?)),
            None => Ok(Dyadic::Pow2(log2(s)?)),
        }
    }
}

/// A distance, exact when `certified`, otherwise an upper bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricValue {
    pub value: Dyadic,
    pub certified: bool,
}

/// A representable point with finitely many coordinates toggled.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Point {
    pub base: PointDescriptor,
    /// Coordinates whose symbol is flipped relative to `base`.
    #[serde(with = "flip_serde")]
    pub flips: BTreeSet<i128>,
}

mod flip_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BTreeSet<i128>, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|&x| exact::Int(x)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BTreeSet<i128>, D::Error> {
        Ok(Vec::<exact::Int>::deserialize(d)?.into_iter().map(|i| i.0).collect())
    }
}

impl From<PointDescriptor> for Point {
    fn from(base: PointDescriptor) -> Self {
        Point { base, flips: BTreeSet::new() }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.base)?;
        for j in &self.flips {
            write!(f, "^{j}")?;
        }
        Ok(())
    }
}

impl FromStr for Point {
    type Err = Error;

    /// `<descriptor>` followed by any number of `^<coordinate>` flips, e.g. `xi:0^3^-2`.
    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split('^');
        let base: PointDescriptor = parts.next().unwrap_or_default().parse()?;
        let mut p = Point::from(base);
        for part in parts {
            let j: i128 = part
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad flip coordinate {part:?}")))?;
            p.toggle(j);
        }
        Ok(p)
    }
}

/// Where the disagreements of two points end on the right.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extent {
    Equal,
    /// The largest disagreement coordinate.
    Finite(i128),
    /// Disagreements at arbitrarily large coordinates.
    Unbounded,
}

impl Point {
    pub fn with_flips(base: PointDescriptor, flips: impl IntoIterator<Item = i128>) -> Point {
        let mut p = Point::from(base);
        for j in flips {
            p.toggle(j);
        }
        p
    }

    pub fn toggle(&mut self, j: i128) {
        if !self.flips.remove(&j) {
            self.flips.insert(j);
        }
    }

    pub fn at(&self, i: i128) -> u8 {
        self.base.at(i) ^ self.flips.contains(&i) as u8
    }

    /// `T^by` applied to the point.
    pub fn shift(&self, by: i128) -> Result<Point> {
        let flips = self
            .flips
            .iter()
            .map(|&j| j.checked_sub(by).ok_or(Error::IndexOverflow("flip coordinate")))
            .collect::<Result<_>>()?;
        Ok(Point { base: self.base.shift(by)?, flips })
    }

    pub fn reflect(&self) -> Result<Point> {
        let flips = self
            .flips
            .iter()
            .map(|&j| j.checked_neg().ok_or(Error::IndexOverflow("flip coordinate")))
            .collect::<Result<_>>()?;
        Ok(Point { base: self.base.reflect()?, flips })
    }

    pub fn segment(&self, lo: i128, hi: i128, limits: &Limits) -> Result<crate::Word> {
        let mut w = self.base.segment(lo, hi, limits)?;
        for &j in self.flips.range(lo..=hi) {
            let k = (j - lo) as usize;
            w.set(k, w.get(k) ^ 1);
        }
        Ok(w)
    }

    /// Points are equal exactly when their bases and flip sets are: distinct
    /// bases differ on infinitely many coordinates, so finitely many flips
    /// cannot reconcile them.
    pub fn same_as(&self, other: &Point) -> bool {
        self == other
    }

    /// Largest coordinate at which the points disagree.
    pub fn last_disagreement(&self, other: &Point, limits: &Limits) -> Result<Extent> {
        if self.base == other.base {
            return Ok(self.flips.symmetric_difference(&other.flips).max().map_or(Extent::Equal, |&j| Extent::Finite(j)));
        }
        // distinct bases: the right tails agree only if both vanish there
        let tail = |p: &Point| match p.base {
            PointDescriptor::Zero => Some(None),
            PointDescriptor::XiReflectShift(_) => Some(p.base.zero_above()),
            PointDescriptor::XiShift(_) => None,
        };
        let (Some(a), Some(b)) = (tail(self), tail(other)) else {
            return Ok(Extent::Unbounded);
        };
        let tails = a.into_iter().chain(b).max().expect("two distinct bases cannot both be zero");
        let flips = self.flips.iter().chain(&other.flips).copied().max();
        let top = flips.map_or(tails, |f| f.max(tails));
        // the base with the higher tail has a 1 there and the other a 0, so a
        // disagreement is found at or above `tails` unless flips repair it;
        // below that only a short scan is needed in practice
        let lo = tails.checked_sub(4096).ok_or(Error::IndexOverflow("scan range"))?;
        let xs = self.segment(lo, top, limits)?;
        let ys = other.segment(lo, top, limits)?;
        for k in (0..xs.len()).rev() {
            if xs.get(k) != ys.get(k) {
                return Ok(Extent::Finite(lo + k as i128));
            }
        }
        Err(Error::Construction(format!("no disagreement of {self} and {other} found near their tails")))
    }
}

/// Coordinate of least `|i| ≤ resolution` where the points differ.
pub fn first_disagreement(x: &Point, y: &Point, resolution: u64, limits: &Limits) -> Result<Option<i128>> {
    let res = resolution as i128;
    if x.base == y.base {
        return Ok(x
            .flips
            .symmetric_difference(&y.flips)
            .copied()
            .filter(|j| j.abs() <= res)
            .min_by_key(|&j| (j.abs(), j)));
    }
    let mut r: i128 = 32;
    let mut checked: i128 = -1;
    loop {
        let r_now = r.min(res);
        let xs = x.segment(-r_now, r_now, limits)?;
        let ys = y.segment(-r_now, r_now, limits)?;
        for d in (checked + 1)..=r_now {
            for i in [-d, d] {
                let k = (i + r_now) as usize;
                if xs.get(k) != ys.get(k) {
                    return Ok(Some(i));
                }
            }
        }
        if r_now == res {
            return Ok(None);
        }
        checked = r_now;
        r = r.saturating_mul(4);
    }
}

/// `d(x, y)` searched over `|i| ≤ resolution`.
///
/// Equal points give a certified 0. When no disagreement lies in the window the
/// result is the uncertified bound `2^(-resolution)`.
pub fn distance(x: &Point, y: &Point, resolution: u64, limits: &Limits) -> Result<MetricValue> {
    if x.same_as(y) {
        return Ok(MetricValue { value: Dyadic::Zero, certified: true });
    }
    Ok(match first_disagreement(x, y, resolution, limits)? {
        Some(i) => MetricValue { value: Dyadic::inv_pow2(i.unsigned_abs() as i64), certified: true },
        None => MetricValue { value: Dyadic::inv_pow2(resolution as i64), certified: false },
    })
}

/// Result of checking `y ∈ W^s_ε(x)` two ways.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StableCheck {
    /// Agreement on `j ≥ 1 - e`, decided structurally.
    pub closed_form: bool,
    /// `d(T^n x, T^n y) ≤ ε` for every `n ∈ [0, horizon]`.
    pub definition: bool,
    /// The horizon was long enough for the two to be compared.
    pub certified: bool,
}

/// Membership of `y` in the `ε = 2^(-e)` local stable set of `x`.
pub fn stable_membership(x: &Point, y: &Point, e: u32, horizon: u64, limits: &Limits) -> Result<StableCheck> {
    let closed_form = e == 0
        || match x.last_disagreement(y, limits)? {
            Extent::Equal => true,
            Extent::Finite(j) => j < 1 - e as i128,
            Extent::Unbounded => false,
        };
    let eps = Dyadic::inv_pow2(e as i64);
    let mut definition = true;
    for n in 0..=horizon as i128 {
        let d = distance(&x.shift(n)?, &y.shift(n)?, e as u64, limits)?;
        if d.value > eps {
            definition = false;
            break;
        }
    }
    Ok(StableCheck { closed_form, definition, certified: closed_form == definition })
}

/// Membership in the local unstable set, via reflection.
pub fn unstable_membership(x: &Point, y: &Point, e: u32, horizon: u64, limits: &Limits) -> Result<StableCheck> {
    stable_membership(&x.reflect()?, &y.reflect()?, e, horizon, limits)
}

/// Least `n ≥ 0` with `T^n y ∈ W^s_ε(T^n x)`, for `y` in the global stable set of `x`.
pub fn stable_entry_time(x: &Point, y: &Point, e: u32, limits: &Limits) -> Result<Option<i128>> {
    Ok(match x.last_disagreement(y, limits)? {
        Extent::Equal => Some(0),
        Extent::Finite(_) if e == 0 => Some(0),
        Extent::Finite(j) => Some((j + e as i128).max(0)),
        Extent::Unbounded => None,
    })
}
