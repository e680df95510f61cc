//! Acceptance suite. Prints one PASS/FAIL line per criterion.
//!
//! Two criteria cannot be met as stated. Their lines read FAIL; the process
//! still exits 0 when the failure is exactly the one predicted by the
//! analysis printed alongside it, and exits 1 on anything else.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use recurshift::language::{factor_complexity, factors_stabilized};
use recurshift::metric::{
    distance, expansivity_probe, fn_scaling_probe, hyperbolic_probe, lemma_probe, sample_pairs, Dyadic, Point,
    SampleSpec,
};
use recurshift::recurrence::{classify_point, find_m, verify_claim, ClaimSpec, ClaimStatus, RecurrenceReport};
use recurshift::{omega_length, omega_word, xi_segment, Limits, PointDescriptor, Word};
use serde_json::{json, Value};

const SEED: u64 = 20240611;
const DISPLAY: &str = "1010010100010100101000001010010100010100101";

struct Outcome {
    pass: bool,
    /// Set when the criterion is unattainable as stated and the failure
    /// matches the analysis exactly.
    explained: bool,
    detail: String,
    report: Value,
}

impl Outcome {
    fn new(pass: bool, detail: String, report: Value) -> Self {
        Outcome { pass, explained: false, detail, report }
    }
}

fn lim() -> Limits {
    Limits::default()
}

/// ω_n built directly from the recursion, one byte per symbol.
fn naive_omega(n: u32) -> Vec<u8> {
    let mut w = vec![1u8];
    for k in 1..n {
        let mut next = w.clone();
        next.extend(std::iter::repeat_n(0, k as usize));
        next.extend_from_slice(&w);
        w = next;
    }
    w
}

fn bits(s: &[u8]) -> String {
    s.iter().map(|&b| char::from(b'0' + b)).collect()
}

fn claim(spec: ClaimSpec) -> (recurshift::recurrence::ClaimReport, bool) {
    let r = verify_claim(&spec, &lim()).expect("sweep runs");
    let replays = r.replay().is_ok();
    (r, replays)
}

fn c1_word_fidelity() -> Outcome {
    let o2 = omega_word(2, u64::MAX).unwrap().to_string();
    let o3 = omega_word(3, u64::MAX).unwrap().to_string();
    let l5 = omega_length(5).unwrap();
    let o4 = omega_word(4, u64::MAX).unwrap().to_string();
    let expected = format!("{o4}0000{o4}");
    let prefix = xi_segment(0, l5 as i128 - 1, &lim()).unwrap().to_string();
    let oracle = bits(&naive_omega(5));
    let definitional = o2 == "101" && o3 == "10100101" && l5 == 42 && prefix == expected && prefix == oracle;

    let shown = xi_segment(-4, DISPLAY.len() as i128 - 1, &lim()).unwrap().to_string();
    let display = format!("0000{DISPLAY}");
    let first_diff = shown.bytes().zip(display.bytes()).position(|(a, b)| a != b).map(|p| p as i128 - 4);
    // the printed string has five zeros between the copies of ω_4 where the
    // recursion gives four
    let display_is_typo = DISPLAY == format!("{o4}00000{o4}") && first_diff == Some(23);

    let mut out = Outcome::new(
        definitional && first_diff.is_none(),
        format!(
            "omega_2={o2} omega_3={o3}; xi[0,{l5}) = omega_4 0^4 omega_4: {}; printed display ({} symbols) \
             first differs from xi at coordinate {}: it reads omega_4 0^5 omega_4, inconsistent with the recursion",
            definitional,
            DISPLAY.len(),
            first_diff.map_or("-".into(), |d| d.to_string())
        ),
        json!({ "omega_2": o2, "omega_3": o3, "prefix": prefix }),
    );
    out.explained = definitional && display_is_typo;
    out
}

fn c2_length_law() -> Outcome {
    let mut ok = true;
    let mut oracle: u128 = 1;
    for n in 1..=40u32 {
        let l = omega_length(n).unwrap();
        let closed = 3 * (1u128 << (n - 1)) - n as u128 - 1;
        ok &= l == oracle && l == closed;
        if n >= 3 {
            ok &= l >= 1u128 << n;
        }
        if n < 40 {
            ok &= omega_length(n + 1).unwrap() == 2 * l + n as u128;
        }
        oracle = 2 * oracle + n as u128;
    }
    Outcome::new(
        ok,
        format!("l_n = 2 l_(n-1) + (n-1) = 3*2^(n-1) - n - 1 >= 2^n for 3 <= n <= 40; l_40 = {}", omega_length(40).unwrap()),
        json!({ "l_40": omega_length(40).unwrap().to_string() }),
    )
}

fn c3_two_a() -> Outcome {
    let (r, replays) = claim(ClaimSpec::TwoA { n_max: 2000 });
    Outcome::new(
        r.status == ClaimStatus::Pass && r.counterexamples.is_empty() && replays && r.instances_checked > 0,
        format!("{} instances, {} counterexamples", r.instances_checked, r.counterexamples.len()),
        serde_json::to_value(&r).unwrap(),
    )
}

fn c4_two_b() -> Outcome {
    let (r, replays) = claim(ClaimSpec::TwoB { k_max: 8, window_n: 12 });
    Outcome::new(
        r.status == ClaimStatus::Pass && r.counterexamples.is_empty() && replays,
        format!(
            "{} windows, {} counterexamples for the k-1 reading; {} notes on the k-zeros reading",
            r.instances_checked,
            r.counterexamples.len(),
            r.notes.len()
        ),
        serde_json::to_value(&r).unwrap(),
    )
}

fn c5_find_m() -> Outcome {
    let text = naive_omega(22);
    let mut ok = true;
    let mut found = Vec::new();
    for k in 1..=20u32 {
        let horizon = omega_length(k + 2).unwrap() as i128;
        let m = match find_m(k, horizon, &lim()) {
            Ok(m) => m,
            Err(_) => {
                ok = false;
                continue;
            }
        };
        let mut pattern = vec![0u8; k as usize];
        pattern.push(1);
        let first = text[1..].windows(k as usize + 1).position(|w| w == pattern).map(|p| p as i128 + 1);
        ok &= first == Some(m) && m <= horizon;
        found.push(json!([k, m]));
    }
    let (r, replays) = claim(ClaimSpec::Four { k_max: 20 });
    ok &= r.status == ClaimStatus::Pass && replays;
    Outcome::new(
        ok,
        format!("k = 1..=20 found within l_(k+2), each the first match in a naive scan; m(20) = {}", found.last().map_or(Value::Null, |v| v[1].clone())),
        json!({ "m": found, "claim": r }),
    )
}

fn c6_points() -> Vec<PointDescriptor> {
    let mut pts = vec![PointDescriptor::Zero];
    for s in -10..=10 {
        pts.push(PointDescriptor::XiShift(s));
        pts.push(PointDescriptor::XiReflectShift(s));
    }
    pts
}

/// Radii that cannot return within ℓ_26: the window holds a zero run of
/// length N - s (resp. N + s) adjacent to a 1, the other direction is
/// blocked by the zero tail, and ξ has no run of 26 zeros followed by a 1
/// before ℓ_26.
fn predicted_unreachable(p: &PointDescriptor, radius: i128) -> bool {
    match *p {
        PointDescriptor::Zero => false,
        PointDescriptor::XiShift(s) => radius - s >= 26,
        PointDescriptor::XiReflectShift(s) => radius + s >= 26,
    }
}

fn c6_recurrence() -> Outcome {
    let horizon = omega_length(26).unwrap() as i128;
    let points = c6_points();
    let reports: Vec<RecurrenceReport> =
        points.iter().map(|p| classify_point(p, 32, horizon, &lim()).unwrap()).collect();
    let mut total = 0;
    let mut missing = Vec::new();
    let mut mismatched = 0;
    for (p, r) in points.iter().zip(&reports) {
        for o in &r.radii {
            total += 1;
            let ok = o.positive.found().is_some() || o.negative.found().is_some();
            if !ok {
                missing.push(format!("{p}/{}", o.radius));
            }
            if ok == predicted_unreachable(p, o.radius as i128) {
                mismatched += 1;
            }
        }
    }
    let rxi0 = &reports[points.iter().position(|p| *p == PointDescriptor::XiReflectShift(0)).unwrap()];
    let rxi0_structural = rxi0.radii.iter().all(|o| o.positive == recurshift::recurrence::ReturnOutcome::ProvedNone)
        && rxi0.structural_note.as_deref().is_some_and(|n| n.contains("no positive return"));
    // a window reading 0^26 then a 1 first recurs at the first such run after 0
    let m26 = find_m(26, omega_length(27).unwrap() as i128, &lim()).ok();

    let mut out = Outcome::new(
        missing.is_empty() && rxi0_structural,
        format!(
            "{} of {total} (point, radius) pairs return within l_26 = {horizon}; {} do not, all with N - s >= 26 \
             (N + s for rxi) ({} off-prediction); 0^26 1 first occurs at m = {}, so the earliest such return is m + 26; rxi:0 certified non-positively-recurrent: {}",
            total - missing.len(),
            missing.len(),
            mismatched,
            m26.map_or("?".into(), |m| m.to_string()),
            rxi0_structural
        ),
        serde_json::to_value(&reports).unwrap(),
    );
    out.explained = rxi0_structural && mismatched == 0 && m26.is_some_and(|m| m + 26 > horizon);
    out
}

fn c7_minimality() -> Outcome {
    let (r, replays) = claim(ClaimSpec::Minimality { n_max: 24, zero_len_max: 64 });
    let mut trend = true;
    let one: Word = "1".parse().unwrap();
    for n in 2..=24u32 {
        let l = omega_length(n).unwrap() as i128;
        let occ = recurshift::language::occurrences(&one, 0, l - 1, &lim()).unwrap();
        let gap = occ.positions.windows(2).map(|w| w[1] - w[0]).max().unwrap();
        trend &= gap > n as i128 - 1;
    }
    let zeros = (1..=64).all(|len| xi_segment(-len, -1, &lim()).unwrap().is_all_zero());
    Outcome::new(
        r.status == ClaimStatus::Pass && replays && trend && zeros,
        format!(
            "max gap of \"1\" in xi[0, l_n) >= n - 1 for n <= 24 ({}); 0^L in the language for L <= 64: {}",
            r.notes.join("; "),
            zeros
        ),
        serde_json::to_value(&r).unwrap(),
    )
}

fn c8_language() -> Outcome {
    let mut ok = true;
    let mut sizes = Vec::new();
    let omega16 = naive_omega(16);
    for len in 1..=12usize {
        let (set, _) = factors_stabilized(len, &lim()).unwrap();
        let mut text = vec![0u8; len];
        text.extend_from_slice(&omega16);
        let oracle: std::collections::BTreeSet<String> = text.windows(len).map(bits).collect();
        let got: std::collections::BTreeSet<String> = set.words.iter().map(|w| w.to_string()).collect();
        ok &= got == oracle;
        sizes.push(set.len());
    }
    let c2 = factor_complexity(2, &lim()).unwrap();
    let no_11 = (2..=16).all(|len| {
        factors_stabilized(len, &lim()).unwrap().0.words.iter().all(|w| !w.to_string().contains("11"))
    });
    Outcome::new(
        ok && c2 == 3 && no_11,
        format!("complexity for L = 1..=12: {sizes:?}; p(2) = {c2}; \"11\" absent up to L = 16: {no_11}"),
        json!({ "complexity": sizes, "p2": c2 }),
    )
}

/// d(x, y) by reading coordinates outward from 0.
fn oracle_distance(x: &Point, y: &Point, reach: i128) -> Option<Dyadic> {
    (0..=reach).find(|&i| x.at(i) != y.at(i) || x.at(-i) != y.at(-i)).map(|i| Dyadic::inv_pow2(i as i64))
}

fn c9_metric() -> Outcome {
    let limits = lim();
    let spec = SampleSpec { count: 10_000, ..SampleSpec::default() };
    let pairs = sample_pairs(SEED, &spec);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut violations = 0;
    let mut oracle_mismatch = 0;
    for (x, y) in &pairs {
        let mut z = x.clone();
        z.toggle(rng.random_range(-80..=80));
        let d = |a: &Point, b: &Point| distance(a, b, 512, &limits).unwrap();
        let (xy, yz, xz) = (d(x, y), d(y, &z), d(x, &z));
        if !(xy.certified && yz.certified && xz.certified) || xz.value > xy.value.max(yz.value) {
            violations += 1;
        }
        if oracle_distance(x, y, 512) != Some(xy.value) {
            oracle_mismatch += 1;
        }
    }

    let few = SampleSpec { count: 1000, ..SampleSpec::default() };
    let exp_pairs = sample_pairs(SEED, &few);
    let exp1 = expansivity_probe(&exp_pairs, Dyadic::HALF, 1, 4096, &limits).unwrap();
    let mut powers = Vec::new();
    let mut literal_half = Vec::new();
    for p in [2u32, 3, 5] {
        let c = Dyadic::inv_pow2(p as i64 / 2 + 1);
        let r = expansivity_probe(&exp_pairs, c, p, 4096, &limits).unwrap();
        let half = expansivity_probe(&exp_pairs, Dyadic::HALF, p, 4096, &limits).unwrap();
        literal_half.push(half.failures.len());
        powers.push(r);
    }
    let hyper = hyperbolic_probe(SEED, &few, Dyadic::ONE, Dyadic::HALF, Dyadic::ONE, 16, &limits).unwrap();
    let scaling: Vec<_> = [(2, 1), (4, 2), (8, 3)]
        .iter()
        .map(|&(a, n)| fn_scaling_probe(SEED, &few, Dyadic::Pow2(n as i64), n, Dyadic::HALF, 8, &limits).map(|r| (a, r)))
        .collect::<Result<_, _>>()
        .unwrap();
    let lemma = lemma_probe(SEED, &few, Dyadic::HALF, Dyadic::Pow2(1), 16, &limits).unwrap();

    let pass = violations == 0
        && oracle_mismatch == 0
        && exp1.failures.is_empty()
        && powers.iter().all(|r| r.failures.is_empty())
        && hyper.failures.is_empty()
        && hyper.checks > 0
        && scaling.iter().all(|(_, r)| r.failures.is_empty() && r.checks > 0)
        && lemma.lemma_failures.is_empty();
    Outcome::new(
        pass,
        format!(
            "ultrametric violations {violations}/{} (oracle mismatches {oracle_mismatch}); expansivity c=1/2 failures {}; \
             T^p with c_p = 2^-(p/2+1), p in {{2,3,5}}: failures {:?} (with c=1/2: {:?}); hyperbolic {} checks, {} failures; \
             scaling failures {:?}; lemma failures {}",
            pairs.len(),
            exp1.failures.len(),
            powers.iter().map(|r| r.failures.len()).collect::<Vec<_>>(),
            literal_half,
            hyper.checks,
            hyper.failures.len(),
            scaling.iter().map(|(a, r)| (*a, r.failures.len())).collect::<Vec<_>>(),
            lemma.lemma_failures.len()
        ),
        json!({
            "ultrametric_violations": violations,
            "expansivity": exp1,
            "powers": powers,
            "hyperbolic": hyper,
            "scaling": scaling.iter().map(|(_, r)| r).collect::<Vec<_>>(),
            "lemma": lemma,
        }),
    )
}

type Criterion = (u32, &'static str, Duration, fn() -> Outcome);

fn criteria() -> Vec<Criterion> {
    let s = Duration::from_secs;
    vec![
        (1, "word fidelity", s(1), c1_word_fidelity),
        (2, "length law", s(1), c2_length_law),
        (3, "claim 2(a) sweep", s(60), c3_two_a),
        (4, "claim 2(b) sweep", s(120), c4_two_b),
        (5, "claim 4 find_m", s(60), c5_find_m),
        (6, "pointwise recurrence", s(300), c6_recurrence),
        (7, "non-minimality", s(60), c7_minimality),
        (8, "language oracle", s(60), c8_language),
        (9, "metric suite", s(120), c9_metric),
    ]
}

fn main() -> ExitCode {
    let mut first_reports = Vec::new();
    let mut unexpected = 0;
    for (id, name, budget, run) in criteria() {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let pass = out.pass && elapsed <= budget;
        let verdict = if pass { "PASS" } else { "FAIL" };
        let timing = format!("{:.2}s of {}s", elapsed.as_secs_f64(), budget.as_secs());
        println!("[{verdict}] {id:>2} {name} ({timing}): {}", out.detail);
        if !pass {
            if out.explained && elapsed <= budget {
                println!("       unattainable as stated; the failure matches the analysis above");
            } else {
                unexpected += 1;
            }
        }
        if id >= 3 {
            first_reports.push(serde_json::to_string(&out.report).unwrap());
        }
    }

    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(2).build().unwrap();
    let second: Vec<String> = pool.install(|| {
        criteria()
            .into_iter()
            .filter(|c| c.0 >= 3)
            .map(|c| serde_json::to_string(&(c.3)().report).unwrap())
            .collect()
    });
    let differing: Vec<u32> =
        (3..=9).zip(first_reports.iter().zip(&second)).filter(|(_, (a, b))| a != b).map(|(id, _)| id).collect();
    let pass = differing.is_empty();
    println!(
        "[{}] 10 determinism ({:.2}s): criteria 3-9 rerun on a 2-thread pool, {} of 7 JSON reports byte-identical{}",
        if pass { "PASS" } else { "FAIL" },
        start.elapsed().as_secs_f64(),
        7 - differing.len(),
        if pass { String::new() } else { format!("; differing: {differing:?}") }
    );
    if !pass {
        unexpected += 1;
    }

    if unexpected == 0 {
        println!("acceptance: every failure is accounted for");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {unexpected} unexpected failure(s)");
        ExitCode::FAILURE
    }
}
