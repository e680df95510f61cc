use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use recurshift::exact;
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "recurshift", version, about = "Explore the omega-word subshift: generate, query, verify, classify, probe")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Worker threads for sweeps (results do not depend on this).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    /// Seed for sampled probes.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Record wall-clock timings in the report (makes output non-reproducible).
    #[arg(long, global = true)]
    pub timings: bool,

    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    /// Cap on symbols materialized by one call; overrides RECURSHIFT_MAX_MATERIALIZE.
    #[arg(long, global = true)]
    pub max_materialize: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Print omega_n, or a segment of a point.
    Gen(GenArgs),
    /// Symbols of a point at given coordinates.
    Query(QueryArgs),
    /// Factor sets of xi, or limit-set approximations of a point.
    Factors(FactorsArgs),
    /// Occurrences of a word in xi.
    Occurrences(OccurrencesArgs),
    /// Run a claim sweep.
    Verify(VerifyArgs),
    /// Classify a point by its return times.
    Classify(ClassifyArgs),
    /// Distance between two points, optionally with local stable/unstable membership.
    Metric(MetricArgs),
    /// Sampled metric probes.
    Probe(ProbeArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Gen(_) => "gen",
            Command::Query(_) => "query",
            Command::Factors(_) => "factors",
            Command::Occurrences(_) => "occurrences",
            Command::Verify(_) => "verify",
            Command::Classify(_) => "classify",
            Command::Metric(_) => "metric",
            Command::Probe(_) => "probe",
        }
    }

    /// Name recorded in reports; probes include their kind.
    pub fn label(&self) -> String {
        match self {
            Command::Probe(p) => format!("probe {}", p.kind.name()),
            other => other.name().to_string(),
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct GenArgs {
    /// Print omega_N.
    #[arg(long, conflicts_with_all = ["from", "to"])]
    pub omega: Option<u32>,
    /// First coordinate of a segment.
    #[arg(long, requires = "to", allow_negative_numbers = true)]
    #[serde(with = "exact::option")]
    pub from: Option<i128>,
    /// Last coordinate of a segment.
    #[arg(long, requires = "from", allow_negative_numbers = true)]
    #[serde(with = "exact::option")]
    pub to: Option<i128>,
    /// Point for --from/--to: zero | xi:<n> | rxi:<n>.
    #[arg(long, default_value = "xi:0")]
    pub point: String,
}

#[derive(Debug, Args, Serialize)]
pub struct QueryArgs {
    #[arg(long, default_value = "xi:0")]
    pub point: String,
    /// Coordinates to read.
    #[arg(long = "index", required = true, num_args = 1.., allow_negative_numbers = true)]
    #[serde(with = "exact::vec")]
    pub indices: Vec<i128>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitArg {
    Omega,
    Alpha,
}

#[derive(Debug, Args, Serialize)]
pub struct FactorsArgs {
    #[arg(long)]
    pub length: usize,
    /// Scan a fixed prefix omega_H instead of growing until the set stabilizes.
    #[arg(long, conflicts_with = "limit")]
    pub horizon_n: Option<u32>,
    /// Approximate the language of the omega- or alpha-limit set of --point.
    #[arg(long, value_enum)]
    pub limit: Option<LimitArg>,
    #[arg(long, default_value = "xi:0", requires = "limit")]
    pub point: String,
    /// Scan bound for --limit.
    #[arg(long, default_value_t = 1 << 16, requires = "limit")]
    #[serde(with = "exact")]
    pub horizon: i128,
}

#[derive(Debug, Args, Serialize)]
pub struct OccurrencesArgs {
    #[arg(long)]
    pub word: String,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(with = "exact")]
    pub lo: i128,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(with = "exact")]
    pub hi: i128,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    /// 1 | 2a | 2b | 3 | 4 | recurrence | minimality
    #[arg(long)]
    pub claim: String,
    #[arg(long)]
    pub n_max: Option<u32>,
    #[arg(long)]
    pub k_max: Option<u32>,
    #[arg(long)]
    pub window_n: Option<u32>,
    #[arg(long)]
    pub point: Option<String>,
    #[arg(long)]
    pub points: Vec<String>,
    #[arg(long)]
    pub horizon_n: Option<u32>,
    #[arg(long)]
    pub radius: Option<u32>,
    #[arg(long)]
    pub zero_len_max: Option<u32>,
}

#[derive(Debug, Args, Serialize)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub point: String,
    /// Largest window radius N.
    #[arg(long)]
    pub window: u32,
    /// Scan shifts up to the length of omega_H.
    #[arg(long, default_value_t = 20)]
    pub horizon_n: u32,
}

#[derive(Debug, Args, Serialize)]
pub struct MetricArgs {
    /// Point, optionally with flipped coordinates: xi:0^3^-2.
    #[arg(long, allow_hyphen_values = true)]
    pub x: String,
    #[arg(long, allow_hyphen_values = true)]
    pub y: String,
    #[arg(long, default_value_t = 64)]
    pub resolution: u64,
    /// Also test local stable/unstable membership at this radius (e.g. 1/2).
    #[arg(long)]
    pub epsilon: Option<String>,
    /// Shifts checked by the definition-based membership test.
    #[arg(long, default_value_t = 64)]
    pub horizon: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct ProbeArgs {
    #[command(subcommand)]
    pub kind: ProbeKind,
}

#[derive(Debug, Args, Serialize)]
pub struct SampleArgs {
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value_t = 64)]
    pub max_shift: i64,
    #[arg(long, default_value_t = 3)]
    pub max_flips: usize,
    #[arg(long, default_value_t = 64)]
    pub flip_span: i64,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeKind {
    Expansivity {
        #[command(flatten)]
        sample: SampleArgs,
        #[arg(long, default_value = "1/2")]
        c: String,
        #[arg(long, default_value_t = 1)]
        power: u32,
        #[arg(long, default_value_t = 4096)]
        shift_budget: u64,
    },
    Stable {
        #[command(flatten)]
        sample: SampleArgs,
        #[arg(long, default_value_t = 8)]
        max_exponent: u32,
    },
    Hyperbolic {
        #[command(flatten)]
        sample: SampleArgs,
        #[arg(long, default_value = "1")]
        a: String,
        #[arg(long, default_value = "1/2")]
        lambda: String,
        #[arg(long, default_value = "1")]
        gamma: String,
        #[arg(long, default_value_t = 16)]
        budget: u32,
    },
    Scaling {
        #[command(flatten)]
        sample: SampleArgs,
        #[arg(long, default_value = "2")]
        a: String,
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long, default_value = "1/2")]
        delta: String,
        #[arg(long, default_value_t = 8)]
        budget: u32,
    },
    Lemma {
        #[command(flatten)]
        sample: SampleArgs,
        #[arg(long, default_value = "1/2")]
        delta: String,
        #[arg(long, default_value = "2")]
        a: String,
        #[arg(long, default_value_t = 16)]
        budget: u32,
    },
    Distality {
        #[command(flatten)]
        sample: SampleArgs,
        #[arg(long, default_value_t = 256)]
        horizon: u64,
    },
    Potp {
        #[arg(long, default_value = "1/8")]
        delta: String,
        #[arg(long, default_value = "1/4")]
        epsilon: String,
        #[arg(long, default_value_t = 64)]
        length: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 1 << 16)]
        search: u64,
    },
}

impl ProbeKind {
    pub fn name(&self) -> &'static str {
        match self {
            ProbeKind::Expansivity { .. } => "expansivity",
            ProbeKind::Stable { .. } => "stable",
            ProbeKind::Hyperbolic { .. } => "hyperbolic",
            ProbeKind::Scaling { .. } => "scaling",
            ProbeKind::Lemma { .. } => "lemma",
            ProbeKind::Distality { .. } => "distality",
            ProbeKind::Potp { .. } => "potp",
        }
    }
}
