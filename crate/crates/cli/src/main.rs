//! `lvar`: runs one JSON scenario and writes the result document.
//!
//! Exit codes: 0 success, 2 schema or input error, 3 contract error,
//! 4 numeric non-convergence. Errors go to stderr as JSON with a `reason`.

mod error;
mod run;
mod scenario;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;

use error::CliError;
use scenario::{Command, Format, GridOverrides};

#[derive(Debug, Parser)]
#[command(name = "lvar", version, about = "Lambda VaR scenario runner")]
struct Args {
    /// Scenario file (JSON).
    #[arg(long)]
    scenario: PathBuf,
    /// Cross-check against the brute-force oracles.
    #[arg(long)]
    oracle: bool,
    #[arg(long)]
    grid_x: Option<f64>,
    #[arg(long)]
    grid_y: Option<f64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write here instead of stdout; replaced atomically.
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long, env = "LVAR_THREADS", hide = true)]
    threads: Option<usize>,
}

fn write_atomic(path: &Path, body: &str) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(body.as_bytes()).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

fn execute(args: &Args) -> Result<(), CliError> {
    if let Some(n) = args.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(|e| CliError::Io(e.to_string()))?;
    }
    if let Some(out) = &args.output {
        if out == &args.scenario {
            return Err(CliError::Schema("output would overwrite the scenario".into()));
        }
    }
    let text = std::fs::read_to_string(&args.scenario)
        .map_err(|e| CliError::Io(format!("{}: {e}", args.scenario.display())))?;
    let s = scenario::parse(&text)?;
    let flags = GridOverrides {
        x_resolution: args.grid_x,
        y_resolution: args.grid_y,
        sample_count: args.samples,
        seed: args.seed,
    };
    let (grid, explicit_seed) = scenario::grid(&s.grid, &flags)?;
    let default_format = if s.command == Command::Curve {
        Format::Csv
    } else {
        Format::Json
    };
    let opts = run::Options {
        oracle: args.oracle,
        grid,
        explicit_seed,
        format: args.format.or(s.format).unwrap_or(default_format),
    };
    let body = run::run(&s, &opts)?;
    match &args.output {
        Some(path) => write_atomic(path, &body),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code())
        }
    }
}
