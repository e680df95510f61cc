use std::fmt::Write as _;

use recurshift::language::{factor_complexity, factors, factors_stabilized, occurrences, Gap};
use recurshift::metric::{
    distality_probe, distance, expansivity_probe, fn_scaling_probe, hyperbolic_probe, lemma_probe, potp_probe,
    sample_pairs, stable_membership, stable_probe, unstable_membership, Dyadic, Point, SampleSpec,
};
use recurshift::recurrence::{classify_point, limit_factors, verify_claim, ClaimId, ClaimSpec, LimitDirection, Verdict};
use recurshift::report::Status;
use recurshift::{omega_length, omega_word, Error, Limits, PointDescriptor, Result, Word};
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::*;

/// What a command produced, before rendering.
pub struct Outcome {
    pub status: Status,
    pub seed: Option<u64>,
    pub witnesses: Vec<Value>,
    pub result: Value,
    pub text: String,
}

impl Outcome {
    fn new(result: impl Serialize, text: String) -> Self {
        Outcome {
            status: Status::Pass,
            seed: None,
            witnesses: Vec::new(),
            result: to_value(result),
            text,
        }
    }
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("reports serialize to plain JSON")
}

fn point(s: &str) -> Result<PointDescriptor> {
    s.parse()
}

fn dyadic(s: &str) -> Result<Dyadic> {
    s.parse()
}

pub fn run(command: &Command, seed: u64, limits: &Limits) -> Result<Outcome> {
    match command {
        Command::Gen(a) => gen(a, limits),
        Command::Query(a) => query(a),
        Command::Factors(a) => factors_cmd(a, limits),
        Command::Occurrences(a) => occurrences_cmd(a, limits),
        Command::Verify(a) => verify(a, limits),
        Command::Classify(a) => classify(a, limits),
        Command::Metric(a) => metric(a, limits),
        Command::Probe(a) => probe(&a.kind, seed, limits),
    }
}

fn gen(a: &GenArgs, limits: &Limits) -> Result<Outcome> {
    let word = match (a.omega, a.from, a.to) {
        (Some(n), _, _) => omega_word(n, limits.max_materialize)?,
        (None, Some(lo), Some(hi)) => point(&a.point)?.segment(lo, hi, limits)?,
        _ => return Err(Error::InvalidArgument("gen needs --omega N or --from A --to B".into())),
    };
    let text = format!("{word}\n");
    Ok(Outcome::new(json!({ "length": word.len(), "word": word }), text))
}

fn query(a: &QueryArgs) -> Result<Outcome> {
    let p = point(&a.point)?;
    let symbols: Vec<u8> = a.indices.iter().map(|&i| p.at(i)).collect();
    let text = symbols.iter().map(|s| format!("{s}\n")).collect();
    let rows: Vec<Value> = a
        .indices
        .iter()
        .zip(&symbols)
        .map(|(&i, &s)| json!({ "index": recurshift::exact::Int(i), "symbol": s }))
        .collect();
    Ok(Outcome::new(json!({ "point": p, "symbols": rows }), text))
}

fn factors_cmd(a: &FactorsArgs, limits: &Limits) -> Result<Outcome> {
    let set = match a.limit {
        Some(dir) => {
            let dir = match dir {
                LimitArg::Omega => LimitDirection::Omega,
                LimitArg::Alpha => LimitDirection::Alpha,
            };
            limit_factors(&point(&a.point)?, a.length, dir, a.horizon, limits)?
        }
        None => match a.horizon_n {
            Some(h) => factors(a.length, h, limits)?,
            None => factors_stabilized(a.length, limits)?.0,
        },
    };
    let mut text = String::new();
    for w in &set.words {
        writeln!(text, "{w}").unwrap();
    }
    writeln!(text, "# {} factors of length {}", set.len(), set.length).unwrap();
    let mut out = Outcome::new(&set, text);
    if a.limit.is_none() && a.horizon_n.is_none() {
        out.result["complexity"] = json!(factor_complexity(a.length, limits)?);
    }
    Ok(out)
}

fn occurrences_cmd(a: &OccurrencesArgs, limits: &Limits) -> Result<Outcome> {
    let word: Word = a.word.parse()?;
    let report = occurrences(&word, a.lo, a.hi, limits)?;
    let gap = match report.max_gap {
        Gap::Bounded(g) => g.to_string(),
        Gap::UnboundedWithinRange => "unbounded within range".into(),
    };
    let text = format!(
        "{} occurrences of {} in [{}, {}]\nfirst: {}\nmax gap: {gap}\nmax gap with edges: {}\n",
        report.positions.len(),
        word,
        a.lo,
        a.hi,
        report.positions.first().map_or("none".into(), |p| p.to_string()),
        report.max_gap_with_edges(),
    );
    Ok(Outcome::new(&report, text))
}

fn claim_spec(a: &VerifyArgs) -> Result<ClaimSpec> {
    let id: ClaimId = a.claim.parse()?;
    Ok(match id {
        ClaimId::Reflection => ClaimSpec::Reflection { n_max: a.n_max.unwrap_or(20), radius: a.radius.unwrap_or(16) },
        ClaimId::TwoA => ClaimSpec::TwoA { n_max: a.n_max.unwrap_or(2000) },
        ClaimId::TwoB => ClaimSpec::TwoB { k_max: a.k_max.unwrap_or(8), window_n: a.window_n.unwrap_or(12) },
        ClaimId::Three => ClaimSpec::Three {
            point: point(a.point.as_deref().unwrap_or("xi:0"))?,
            horizon_n: a.horizon_n.unwrap_or(10),
        },
        ClaimId::Four => ClaimSpec::Four { k_max: a.k_max.unwrap_or(20) },
        ClaimId::Recurrence => {
            let points = if a.points.is_empty() {
                vec![PointDescriptor::Zero, PointDescriptor::XiShift(0), PointDescriptor::XiReflectShift(0)]
            } else {
                a.points.iter().map(|p| point(p)).collect::<Result<_>>()?
            };
            ClaimSpec::Recurrence { points, radius: a.radius.unwrap_or(8), horizon_n: a.horizon_n.unwrap_or(20) }
        }
        ClaimId::Minimality => ClaimSpec::Minimality {
            n_max: a.n_max.unwrap_or(24),
            zero_len_max: a.zero_len_max.unwrap_or(64),
        },
    })
}

fn verify(a: &VerifyArgs, limits: &Limits) -> Result<Outcome> {
    let spec = claim_spec(a)?;
    let report = verify_claim(&spec, limits)?;
    let mut text = format!(
        "claim {}: {:?}\ninstances checked: {}\nwitnesses: {}\ncounterexamples: {}\nunresolved: {}\n",
        report.claim_id,
        report.status,
        report.instances_checked,
        report.witnesses.len(),
        report.counterexamples.len(),
        report.unresolved.len(),
    )
    .to_lowercase();
    for c in report.counterexamples.iter().take(10) {
        writeln!(text, "counterexample: {c:?}").unwrap();
    }
    for n in &report.notes {
        writeln!(text, "note: {n}").unwrap();
    }
    let mut out = Outcome::new(&report, text);
    out.status = report.status.into();
    out.witnesses = report.witnesses.iter().map(|w| to_witness(w)).collect();
    Ok(out)
}

fn to_witness(w: &[i128]) -> Value {
    to_value(w.iter().map(|&x| recurshift::exact::Int(x)).collect::<Vec<_>>())
}

fn classify(a: &ClassifyArgs, limits: &Limits) -> Result<Outcome> {
    let p = point(&a.point)?;
    let horizon = omega_length(a.horizon_n)? as i128;
    let report = classify_point(&p, a.window, horizon, limits)?;
    let verdict = to_value(report.verdict);
    let mut text = format!("point: {p}\nverdict: {}\n", verdict.as_str().unwrap_or_default());
    for o in &report.radii {
        let show = |r: recurshift::recurrence::ReturnOutcome| match r {
            recurshift::recurrence::ReturnOutcome::Found(n) => n.to_string(),
            recurshift::recurrence::ReturnOutcome::ProvedNone => "none (proved)".into(),
            recurshift::recurrence::ReturnOutcome::NoneWithinHorizon => "none within horizon".into(),
        };
        writeln!(text, "N={}: positive {}, negative {}", o.radius, show(o.positive), show(o.negative)).unwrap();
    }
    if let Some(note) = &report.structural_note {
        writeln!(text, "note: {note}").unwrap();
    }
    let mut out = Outcome::new(&report, text);
    out.witnesses = report
        .radii
        .iter()
        .flat_map(|o| [o.positive.found(), o.negative.found()].into_iter().flatten().map(move |n| (o.radius, n)))
        .map(|(r, n)| to_witness(&[r as i128, n]))
        .collect();
    if report.verdict == Verdict::NoneWithinHorizon {
        out.status = Status::Inconclusive;
    }
    Ok(out)
}

fn metric(a: &MetricArgs, limits: &Limits) -> Result<Outcome> {
    let x: Point = a.x.parse()?;
    let y: Point = a.y.parse()?;
    let d = distance(&x, &y, a.resolution, limits)?;
    let mut text = format!(
        "d({x}, {y}) = {}{}\n",
        if d.certified { "" } else { "<= " },
        d.value
    );
    let mut result = json!({ "x": x, "y": y, "distance": d });
    if let Some(eps) = &a.epsilon {
        let eps = dyadic(eps)?;
        let e = match eps.neg_log2() {
            Some(e) if (0..=1 << 16).contains(&e) => e as u32,
            _ => return Err(Error::InvalidArgument("epsilon must be 2^-e with e >= 0".into())),
        };
        let s = stable_membership(&x, &y, e, a.horizon, limits)?;
        let u = unstable_membership(&x, &y, e, a.horizon, limits)?;
        writeln!(text, "stable at {eps}: {} (definition {}, certified {})", s.closed_form, s.definition, s.certified).unwrap();
        writeln!(text, "unstable at {eps}: {} (definition {}, certified {})", u.closed_form, u.definition, u.certified).unwrap();
        result["stable"] = to_value(s);
        result["unstable"] = to_value(u);
    }
    Ok(Outcome::new(result, text))
}

fn spec(s: &SampleArgs) -> SampleSpec {
    SampleSpec { count: s.samples, max_shift: s.max_shift, max_flips: s.max_flips, flip_span: s.flip_span }
}

fn failing(empty: bool) -> Status {
    if empty {
        Status::Pass
    } else {
        Status::Fail
    }
}

fn probe(kind: &ProbeKind, seed: u64, limits: &Limits) -> Result<Outcome> {
    let mut out = match kind {
        ProbeKind::Expansivity { sample, c, power, shift_budget } => {
            let pairs = sample_pairs(seed, &spec(sample));
            let r = expansivity_probe(&pairs, dyadic(c)?, *power, *shift_budget, limits)?;
            let text = format!(
                "expansivity c={} power={}: {} of {} pairs separated, smallest witness distance {}\n",
                r.c,
                r.power,
                r.witnesses.len(),
                r.pairs,
                r.min_witness_distance.map_or("-".into(), |d| d.to_string()),
            );
            let mut out = Outcome::new(&r, text);
            out.witnesses = r.witnesses.iter().map(|w| to_witness(&[w.index as i128, w.n])).collect();
            // no witness inside the budget is not a disproof
            out.status = if r.failures.is_empty() { Status::Pass } else { Status::Inconclusive };
            out
        }
        ProbeKind::Stable { sample, max_exponent } => {
            let r = stable_probe(seed, &spec(sample), *max_exponent, limits)?;
            let text = format!(
                "stable sets: {} samples, {} members, {} mismatches, {} entry-time failures\n",
                r.samples,
                r.members,
                r.mismatches.len(),
                r.decomposition_failures.len()
            );
            let mut out = Outcome::new(&r, text);
            out.status = failing(r.mismatches.is_empty() && r.decomposition_failures.is_empty());
            out
        }
        ProbeKind::Hyperbolic { sample, a, lambda, gamma, budget } => {
            let r = hyperbolic_probe(seed, &spec(sample), dyadic(a)?, dyadic(lambda)?, dyadic(gamma)?, *budget, limits)?;
            let text = format!(
                "hyperbolic a={} lambda={}: {} checks, {} with equality, {} failures\n",
                r.a,
                r.lambda,
                r.checks,
                r.equalities,
                r.failures.len()
            );
            let mut out = Outcome::new(&r, text);
            out.status = failing(r.failures.is_empty());
            out
        }
        ProbeKind::Scaling { sample, a, n, delta, budget } => {
            let r = fn_scaling_probe(seed, &spec(sample), dyadic(a)?, *n, dyadic(delta)?, *budget, limits)?;
            let text = format!(
                "scaling A={} N={}: {} checks, {} skipped, {} failures\n",
                r.a,
                r.n,
                r.checks,
                r.skipped,
                r.failures.len()
            );
            let mut out = Outcome::new(&r, text);
            out.status = failing(r.failures.is_empty());
            out
        }
        ProbeKind::Lemma { sample, delta, a, budget } => {
            let r = lemma_probe(seed, &spec(sample), dyadic(delta)?, dyadic(a)?, *budget, limits)?;
            let text = format!(
                "lemma delta={} A={}: {} triples, {} stability failures, {} expansion failures, {} of {} preimage checks failed\n",
                r.delta,
                r.a,
                r.triples,
                r.lemma_failures.len(),
                r.expansion_failures.len(),
                r.preimage_failures.len(),
                r.preimage_checked
            );
            let mut out = Outcome::new(&r, text);
            out.status = failing(
                r.lemma_failures.is_empty() && r.expansion_failures.is_empty() && r.preimage_failures.is_empty(),
            );
            out
        }
        ProbeKind::Distality { sample, horizon } => {
            let pairs = sample_pairs(seed, &spec(sample));
            let r = distality_probe(&pairs, *horizon, limits)?;
            let text = format!("distality: {} of {} pairs show a shrinking infimum\n", r.proximal, r.pairs.len());
            Outcome::new(&r, text)
        }
        ProbeKind::Potp { delta, epsilon, length, trials, search } => {
            let r = potp_probe(seed, dyadic(delta)?, dyadic(epsilon)?, *length, *trials, *search, limits)?;
            let text = format!(
                "pseudo-orbits: {} traced, {} untraced within the searched family, {} contradictory\n",
                r.traced, r.untraced, r.impossible
            );
            let mut out = Outcome::new(&r, text);
            out.status = if r.untraced + r.impossible == 0 { Status::Pass } else { Status::Inconclusive };
            out
        }
    };
    out.seed = Some(seed);
    Ok(out)
}
