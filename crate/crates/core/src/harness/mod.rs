//! Scenario files, the simulation loop, logs and the command line.

pub mod cli;
mod log;
mod scenario;
mod sim;
mod summary;

pub use log::{read_csv, write_logs, CsvTable, LogKind, LogRecord, LogSink, LogWriter, NullSink, JSONL_FILE};
pub use scenario::{
    load_scenario, load_scenario_file, resolve_scenario_path, LogConfig, ObjectConfig, ScenarioConfig, ScenarioError,
    ThrusterConfig,
};
pub use sim::{run_simulation, run_to_dir, Outcome, RunSummary, SimError, Simulation, META_FILE, SUMMARY_FILE};
pub use summary::{summarize, LogSummary, SummarizeError, ERRORS_FILE, TIMELINE_FILE};
