mod commands;
mod input;
mod sectors;

use anyhow::{Context, Result};
use clap::Parser;
use serde::Serialize;
use serde_json::Value;
use std::io::Write;
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Debug, Parser, Serialize)]
#[command(name = "klein-lattice", version, about = "Exact lattice, cone and cohomology computations for Klein actions")]
struct Cli {
    /// Report destination; `-` is stdout.
    #[arg(long, global = true, default_value = "-")]
    out: String,
    /// Seed recorded in every report and used by sampling commands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: commands::Command,
}

/// What a command hands back before it is wrapped into a report.
pub struct Outcome {
    pub result: Value,
    pub completeness: Value,
    /// False when the command ran but the property it checks failed.
    pub verified: bool,
}

impl Outcome {
    pub fn certified(result: impl Serialize) -> Result<Self> {
        Ok(Outcome { result: serde_json::to_value(result)?, completeness: certified(), verified: true })
    }

    pub fn with(result: impl Serialize, completeness: impl Serialize, verified: bool) -> Result<Self> {
        Ok(Outcome { result: serde_json::to_value(result)?, completeness: serde_json::to_value(completeness)?, verified })
    }
}

pub fn certified() -> Value {
    serde_json::json!({ "kind": "certified" })
}

pub fn bounded(depth: usize) -> Value {
    serde_json::json!({ "kind": "bounded_search", "depth": depth })
}

#[derive(Serialize)]
struct Report<'a> {
    request: Value,
    seed: u64,
    completeness: &'a Value,
    verified: bool,
    timing_ms: u128,
    result: &'a Value,
}

/// Writes through a temporary sibling file and a rename, so readers never
/// see a partial report.
pub fn write_atomic(path: &str, bytes: &[u8]) -> Result<()> {
    if path == "-" {
        let mut stdout = std::io::stdout().lock();
        stdout.write_all(bytes)?;
        return Ok(stdout.flush()?);
    }
    let target = Path::new(path);
    let dir = target.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = target.file_name().with_context(|| format!("{path} is not a file path"))?;
    let tmp = dir.join(format!(".{}.{}.tmp", name.to_string_lossy(), std::process::id()));
    std::fs::write(&tmp, bytes).with_context(|| format!("writing {}", tmp.display()))?;
    std::fs::rename(&tmp, target).with_context(|| format!("moving report into {path}"))?;
    Ok(())
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("KLEIN_LATTICE_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .with_context(|| format!("KLEIN_LATTICE_THREADS must be a positive integer, got {v:?}"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<bool> {
    configure_threads()?;
    let start = Instant::now();
    let outcome = commands::dispatch(&cli.command, cli.seed)?;
    let timing_ms = start.elapsed().as_millis();
    let (command, subcommand) = cli.command.names();
    let request = serde_json::json!({
        "command": command,
        "subcommand": subcommand,
        "args": cli.command.args()?,
    });
    let report = Report {
        request,
        seed: cli.seed,
        completeness: &outcome.completeness,
        verified: outcome.verified,
        timing_ms,
        result: &outcome.result,
    };
    let mut bytes = serde_json::to_vec_pretty(&report)?;
    bytes.push(b'\n');
    write_atomic(&cli.out, &bytes)?;
    Ok(outcome.verified)
}

fn main() -> ExitCode {
    // clap exits with 2 on usage errors; that code is reserved for failed checks.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            if commands::is_verification_failure(&e) {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
