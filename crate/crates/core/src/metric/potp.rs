//! Pseudo-orbits and the search for tracing points.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::probes::rng_for;
use super::{Dyadic, Point};
use crate::language::first_occurrence;
use crate::recurrence::{return_times, Direction};
use crate::{Error, Limits, PointDescriptor, Result, Word};

/// Points `x_0, …, x_{L-1}` with `d(T x_i, x_{i+1}) < δ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PseudoOrbit {
    pub points: Vec<Point>,
    pub delta: Dyadic,
}

/// `d(u, v) < 2^(-e)` exactly when the points agree on `|i| ≤ e`.
fn agree_on(u: &Point, v: &Point, e: i128, limits: &Limits) -> Result<bool> {
    if u == v {
        return Ok(true);
    }
    Ok(u.segment(-e, e, limits)? == v.segment(-e, e, limits)?)
}

impl PseudoOrbit {
    /// Validates every step against `delta`.
    pub fn new(points: Vec<Point>, delta: Dyadic, limits: &Limits) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Construction("a pseudo-orbit needs at least one point".into()));
        }
        for (i, w) in points.windows(2).enumerate() {
            let image = w[0].shift(1)?;
            let ok = match delta.neg_log2() {
                None => image == w[1],
                Some(e) if e < 0 => true,
                Some(e) => agree_on(&image, &w[1], e as i128, limits)?,
            };
            if !ok {
                return Err(Error::Construction(format!("step {i} jumps by at least {delta}")));
            }
        }
        Ok(PseudoOrbit { points, delta })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The symbols an `ε`-tracing point `z` must show on `[-e, L - 1 + e]`:
    /// `d(T^i z, x_i) < 2^(-e)` pins `z(i + j) = x_i(j)` for `|j| ≤ e`.
    /// `None` when two steps demand different symbols, in which case no point
    /// at all traces the orbit.
    pub fn tracing_constraint(&self, e: u32, limits: &Limits) -> Result<Option<Word>> {
        let e = e as i128;
        let total = self.points.len() + 2 * e as usize;
        let mut word = Word::zeros(total);
        let mut known = vec![false; total];
        for (i, x) in self.points.iter().enumerate() {
            let seg = x.segment(-e, e, limits)?;
            for k in 0..seg.len() {
                let at = i + k;
                let s = seg.get(k);
                if known[at] && word.get(at) != s {
                    return Ok(None);
                }
                known[at] = true;
                word.set(at, s);
            }
        }
        Ok(Some(word))
    }
}

/// Outcome of the tracing search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "outcome")]
pub enum Trace {
    Traced { tracer: PointDescriptor },
    /// No descriptor with shift in the searched range traces the orbit; other
    /// points may.
    Untraced,
    /// The steps contradict each other, so nothing traces the orbit.
    Impossible,
}

/// Searches `zero`, `xi:s` and `rxi:s` with `|s| ≤ search` for a point
/// `z` with `d(T^i z, x_i) < 2^(-e)` for every `i`, preferring `zero` and then
/// the smallest `|s|`.
pub fn trace(orbit: &PseudoOrbit, e: u32, search: i128, limits: &Limits) -> Result<Trace> {
    let Some(target) = orbit.tracing_constraint(e, limits)? else {
        return Ok(Trace::Impossible);
    };
    if target.is_all_zero() {
        return Ok(Trace::Traced { tracer: PointDescriptor::Zero });
    }
    let e = e as i128;
    let l = orbit.len() as i128;
    // xi:s reads ξ(s + t) for t ∈ [-e, l - 1 + e]: target starts at s - e
    let mut best: Option<PointDescriptor> = None;
    if let Some(q) = first_occurrence(&target, -search - e, search - e, limits)? {
        best = Some(PointDescriptor::XiShift(q + e));
    }
    // rxi:s reads ξ(-s - t): the reversed target starts at -s - (l - 1 + e)
    let reversed = target.reversed();
    if let Some(q) = first_occurrence(&reversed, -search - l + 1 - e, search - l + 1 - e, limits)? {
        let s = -q - (l - 1 + e);
        let cand = PointDescriptor::XiReflectShift(s);
        let key = |p: &PointDescriptor| match *p {
            PointDescriptor::XiShift(s) | PointDescriptor::XiReflectShift(s) => s.abs(),
            PointDescriptor::Zero => 0,
        };
        if best.is_none_or(|b| key(&cand) < key(&b)) {
            best = Some(cand);
        }
    }
    Ok(best.map_or(Trace::Untraced, |tracer| Trace::Traced { tracer }))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PotpTrial {
    pub index: usize,
    pub start: Point,
    pub jumps: usize,
    pub trace: Trace,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PotpReport {
    pub seed: u64,
    pub delta: Dyadic,
    pub epsilon: Dyadic,
    pub length: usize,
    pub search: u64,
    pub trials: Vec<PotpTrial>,
    pub traced: usize,
    pub untraced: usize,
    pub impossible: usize,
}

/// One pseudo-orbit: true orbit steps with occasional jumps. A jump either
/// toggles coordinates outside the central `log2(1/δ)` window, or moves to
/// another shift of the same descriptor whose central window matches (a
/// return). Steps failing validation fall back to the true image.
fn build_orbit(seed: u64, index: usize, delta_e: i128, length: usize, limits: &Limits) -> Result<(PseudoOrbit, usize)> {
    let mut rng = rng_for(seed, index as u64);
    let s = rng.random_range(-64i128..=64);
    let start = match rng.random_range(0..5) {
        0 => PointDescriptor::Zero,
        1 | 2 => PointDescriptor::XiShift(s),
        _ => PointDescriptor::XiReflectShift(s),
    };
    let mut points = vec![Point::from(start)];
    let mut jumps = 0;
    while points.len() < length {
        let image = points.last().expect("non-empty").shift(1)?;
        let mut next = image.clone();
        if rng.random_bool(0.3) {
            if rng.random_bool(0.5) {
                for _ in 0..rng.random_range(1..=2) {
                    let off = delta_e + 1 + rng.random_range(0..8);
                    next.toggle(if rng.random_bool(0.5) { off } else { -off });
                }
            } else if image.base != PointDescriptor::Zero {
                let dir = if rng.random_bool(0.5) { Direction::Positive } else { Direction::Negative };
                let found = return_times(&image.base, delta_e as u32, dir, 1, 1 << 16, 3, limits)?;
                if !found.is_empty() {
                    let n = found[rng.random_range(0..found.len())];
                    next = Point::from(image.base.shift(n)?);
                }
            }
            if next != image {
                if agree_on(&image, &next, delta_e, limits)? {
                    jumps += 1;
                } else {
                    next = image;
                }
            }
        }
        points.push(next);
    }
    Ok((PseudoOrbit::new(points, Dyadic::inv_pow2(delta_e as i64), limits)?, jumps))
}

/// Builds `trials` pseudo-orbits of the given length and searches the
/// descriptor family for an `ε`-tracing point of each.
pub fn potp_probe(
    seed: u64,
    delta: Dyadic,
    epsilon: Dyadic,
    length: usize,
    trials: usize,
    search: u64,
    limits: &Limits,
) -> Result<PotpReport> {
    let exp = |d: Dyadic, what: &str| match d.neg_log2() {
        Some(e) if (0..=4096).contains(&e) => Ok(e),
        _ => Err(Error::InvalidArgument(format!("{what} must be 2^-e with 0 <= e <= 4096"))),
    };
    let de = exp(delta, "delta")? as i128;
    let ee = exp(epsilon, "epsilon")? as u32;
    if length == 0 {
        return Err(Error::InvalidArgument("length must be positive".into()));
    }
    limits.check(length as u128 + 2 * ee as u128 + 2 * search as u128)?;
    let rows: Vec<PotpTrial> = (0..trials)
        .into_par_iter()
        .map(|index| {
            let (orbit, jumps) = build_orbit(seed, index, de, length, limits)?;
            let trace = trace(&orbit, ee, search as i128, limits)?;
            Ok(PotpTrial { index, start: orbit.points[0].clone(), jumps, trace })
        })
        .collect::<Result<_>>()?;
    let count = |f: fn(&Trace) -> bool| rows.iter().filter(|t| f(&t.trace)).count();
    Ok(PotpReport {
        seed,
        delta,
        epsilon,
        length,
        search,
        traced: count(|t| matches!(t, Trace::Traced { .. })),
        untraced: count(|t| matches!(t, Trace::Untraced)),
        impossible: count(|t| matches!(t, Trace::Impossible)),
        trials: rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use PointDescriptor::*;

    fn lim() -> Limits {
        Limits::default()
    }

    fn true_orbit(p: PointDescriptor, len: usize) -> Vec<Point> {
        (0..len as i128).map(|i| Point::from(p.shift(i).unwrap())).collect()
    }

    fn traces(orbit: &PseudoOrbit, z: PointDescriptor, e: i128) -> bool {
        orbit.points.iter().enumerate().all(|(i, x)| {
            let zi = Point::from(z.shift(i as i128).unwrap());
            (-e..=e).all(|j| zi.at(j) == x.at(j))
        })
    }

    #[test]
    fn true_orbits_are_traced() {
        for p in [XiShift(5), XiReflectShift(-3), Zero, XiShift(-40)] {
            let orbit = PseudoOrbit::new(true_orbit(p, 30), Dyadic::Zero, &lim()).unwrap();
            match trace(&orbit, 3, 1 << 12, &lim()).unwrap() {
                Trace::Traced { tracer } => assert!(traces(&orbit, tracer, 3), "{p} traced by {tracer}"),
                other => panic!("{p}: {other:?}"),
            }
        }
    }

    /// True orbit of `p` with coordinate `j` of `x_at` toggled and the jump carried forward.
    fn jumped(p: PointDescriptor, len: usize, at: usize, j: i128) -> Vec<Point> {
        let mut pts = true_orbit(p, at + 1);
        pts[at].toggle(j);
        while pts.len() < len {
            let next = pts.last().unwrap().shift(1).unwrap();
            pts.push(next);
        }
        pts
    }

    #[test]
    fn construction_rejects_large_jumps() {
        assert!(PseudoOrbit::new(jumped(XiShift(0), 6, 2, 1), Dyadic::inv_pow2(2), &lim()).is_err());
        assert!(PseudoOrbit::new(jumped(XiShift(0), 6, 2, 3), Dyadic::inv_pow2(2), &lim()).is_ok());
        let mut pts = true_orbit(XiShift(0), 4);
        pts[2].toggle(3);
        // x_3 is the image of the unmodified x_2, not of the jumped one
        assert!(PseudoOrbit::new(pts, Dyadic::inv_pow2(2), &lim()).is_err());
    }

    #[test]
    fn conflicting_steps_are_impossible() {
        // x_3 changes z(0), which x_0..x_2 already pin at ε = 2^-3
        let orbit = PseudoOrbit::new(jumped(XiShift(0), 6, 3, -3), Dyadic::inv_pow2(2), &lim()).unwrap();
        assert_eq!(trace(&orbit, 3, 1 << 10, &lim()).unwrap(), Trace::Impossible);
        let loose = PseudoOrbit::new(jumped(XiShift(0), 6, 3, 3), Dyadic::inv_pow2(2), &lim()).unwrap();
        assert_ne!(trace(&loose, 3, 1 << 10, &lim()).unwrap(), Trace::Impossible);
    }

    #[test]
    fn probe_results_replay() {
        let r = potp_probe(17, Dyadic::inv_pow2(3), Dyadic::inv_pow2(2), 40, 24, 1 << 14, &lim()).unwrap();
        assert_eq!(r.traced + r.untraced + r.impossible, 24);
        assert!(r.traced > 0);
        assert!(r.trials.iter().any(|t| t.jumps > 0));
        for t in &r.trials {
            if let Trace::Traced { tracer } = t.trace {
                let (orbit, _) = build_orbit(17, t.index, 3, 40, &lim()).unwrap();
                assert!(traces(&orbit, tracer, 2));
            }
        }
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(serde_json::from_str::<PotpReport>(&json).unwrap(), r);
    }
}
