//! Command-line front end.
//!
//! Exit codes: `run` returns 0 when the mission is done, 2 on abort, 3 on
//! timeout and 1 on any other error; `validate` and `summarize` return 0 or 1;
//! usage errors return 64.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser, Subcommand};

use super::{load_scenario_file, resolve_scenario_path, run_to_dir, summarize};

pub const EXIT_USAGE: i32 = 64;
pub const OUT_DIR_ENV: &str = "HADAL_OUT_DIR";
const DEFAULT_OUT_DIR: &str = "hadal-out";

#[derive(Debug, Parser)]
#[command(name = "hadal-sim", version, about = "Hadal AUV recovery-mission simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a scenario and write logs.
    Run {
        /// Scenario file, or a directory containing scenario.toml.
        scenario: PathBuf,
        /// Override the sensor noise seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Log directory (default: $HADAL_OUT_DIR, then the scenario's logs.dir, then ./hadal-out/<name>).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override max_sim_time [s].
        #[arg(long = "max-time")]
        max_time: Option<f64>,
    },
    /// Recompute error series and the phase timeline from a log directory.
    Summarize { log_dir: PathBuf },
    /// Check a scenario without running it.
    Validate { scenario: PathBuf },
}

fn usage_error(message: &str) -> i32 {
    let mut cmd = Cli::command();
    let err = cmd.error(ErrorKind::InvalidValue, message);
    let _ = err.print();
    EXIT_USAGE
}

/// Parses `args` (including the program name) and executes the command.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
        }
    };
    match cli.command {
        Command::Run {
            scenario,
            seed,
            out,
            max_time,
        } => run(&scenario, seed, out, max_time),
        Command::Summarize { log_dir } => match summarize(&log_dir) {
            Ok(summary) => print_json(&summary),
            Err(e) => {
                eprintln!("error: {e}");
                1
            }
        },
        Command::Validate { scenario } => match load_scenario_file(&scenario) {
            Ok(cfg) => {
                println!("ok: {} ({})", cfg.name, resolve_scenario_path(&scenario).display());
                0
            }
            Err(e) => {
                eprintln!("error: {e}");
                1
            }
        },
    }
}

fn print_json<T: serde::Serialize>(value: &T) -> i32 {
    match serde_json::to_string_pretty(value) {
        Ok(text) => {
            let mut stdout = std::io::stdout().lock();
            let _ = writeln!(stdout, "{text}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn run(scenario: &Path, seed: Option<u64>, out: Option<PathBuf>, max_time: Option<f64>) -> i32 {
    if !resolve_scenario_path(scenario).is_file() {
        return usage_error(&format!("scenario not found: {}", scenario.display()));
    }
    let mut cfg = match load_scenario_file(scenario) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    if let Some(seed) = seed {
        cfg.sensors.rng_seed = seed;
    }
    if let Some(t) = max_time {
        cfg.max_sim_time = t;
    }
    if let Err(e) = cfg.validate() {
        eprintln!("error: invalid scenario: {e}");
        return 1;
    }
    let dir = out
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .or_else(|| cfg.logs.dir.clone())
        .unwrap_or_else(|| Path::new(DEFAULT_OUT_DIR).join(&cfg.name));
    match run_to_dir(&cfg, &dir) {
        Ok(summary) => {
            eprintln!("logs: {}", dir.display());
            match print_json(&summary) {
                0 => summary.outcome.exit_code(),
                code => code,
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn missing_scenario_is_usage_error() {
        assert_eq!(run_cli(["hadal-sim", "run"]), EXIT_USAGE);
        assert_eq!(run_cli(["hadal-sim", "bogus"]), EXIT_USAGE);
    }
}
