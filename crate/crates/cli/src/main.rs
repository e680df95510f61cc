mod args;
mod commands;

use std::collections::BTreeMap;
use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;
use recurshift::report::{Envelope, Status};
use recurshift::{Error, Limits};
use serde_json::json;

use args::{Cli, Format};

const USAGE_ERROR: u8 = 3;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::CapExceeded { .. }
        | Error::CapacityExceeded { .. }
        | Error::NotStabilized { .. }
        | Error::NotFoundWithinHorizon { .. }
        | Error::NoOccurrence { .. } => Status::Inconclusive.exit_code() as u8,
        _ => USAGE_ERROR,
    }
}

fn emit(cli: &Cli, body: &str) -> std::io::Result<()> {
    match &cli.output {
        Some(path) => std::fs::write(path, body),
        None => std::io::stdout().write_all(body.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(USAGE_ERROR),
            };
        }
    };
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(USAGE_ERROR);
        }
    }
    let mut limits = Limits::from_env();
    if let Some(cap) = cli.max_materialize {
        limits = limits.with_max_materialize(cap);
    }
    let config = json!({ "parameters": cli.command, "limits": limits });

    let start = Instant::now();
    let outcome = commands::run(&cli.command, cli.seed, &limits);
    let mut timings = BTreeMap::new();
    if cli.timings {
        timings.insert("total".to_string(), start.elapsed().as_millis() as u64);
    }

    let (envelope, text, code) = match outcome {
        Ok(out) => {
            let code = out.status.exit_code() as u8;
            let env = Envelope {
                command: cli.command.label(),
                config,
                seed: out.seed,
                status: out.status,
                witnesses: out.witnesses,
                timings_ms: timings,
                result: out.result,
            };
            (env, out.text, code)
        }
        Err(e) => {
            let code = exit_code(&e);
            eprintln!("error: {e}");
            if code == USAGE_ERROR {
                eprintln!("run `recurshift {} --help` for usage", cli.command.name());
                return ExitCode::from(code);
            }
            let env = Envelope {
                command: cli.command.label(),
                config,
                seed: None,
                status: Status::Inconclusive,
                witnesses: Vec::new(),
                timings_ms: timings,
                result: json!({ "error": e.to_string() }),
            };
            (env, String::new(), code)
        }
    };

    let body = match cli.format {
        Format::Json => envelope.to_json() + "\n",
        Format::Text => text,
    };
    if let Err(e) = emit(&cli, &body) {
        eprintln!("error: cannot write report: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(code)
}
