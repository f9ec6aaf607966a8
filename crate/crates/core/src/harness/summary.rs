use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

use super::log::{read_csv, CsvTable, LogKind};

pub const ERRORS_FILE: &str = "errors.csv";
pub const TIMELINE_FILE: &str = "phase_timeline.csv";

#[derive(Debug, Error)]
pub enum SummarizeError {
    #[error("incomplete log: {0}")]
    IncompleteLog(String),
    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

/// Statistics recovered from a log directory.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LogSummary {
    pub control_ticks: usize,
    pub sim_time: f64,
    pub final_ins_error: f64,
    pub max_ins_error: f64,
    pub terminal_error: [f64; 3],
    pub waypoints_captured: usize,
    pub grasp_attempts: usize,
    pub phase_transitions: usize,
    /// Phase after the last transition, `descend` if none was logged.
    pub final_phase: String,
}

fn load(dir: &Path, kind: LogKind) -> Result<CsvTable, SummarizeError> {
    let path = dir.join(kind.file_name());
    read_csv(&path).map_err(|source| SummarizeError::Io { path, source })
}

fn numeric(table: &CsvTable, kind: LogKind) -> Result<Vec<Vec<f64>>, SummarizeError> {
    if table.header.join(",") != kind.header() {
        return Err(SummarizeError::IncompleteLog(format!(
            "{} header mismatch",
            kind.name()
        )));
    }
    table
        .numeric()
        .map_err(|e| SummarizeError::IncompleteLog(format!("{}: {e}", kind.name())))
}

fn write_file(path: PathBuf, body: &str) -> Result<(), SummarizeError> {
    fs::File::create(&path)
        .and_then(|mut f| f.write_all(body.as_bytes()))
        .map_err(|source| SummarizeError::Io { path, source })
}

/// Pairs truth and INS rows tick by tick, writes `errors.csv` (INS minus
/// truth per axis and its norm) and `phase_timeline.csv`, and returns the
/// aggregate statistics.
pub fn summarize(dir: &Path) -> Result<LogSummary, SummarizeError> {
    let truth = numeric(&load(dir, LogKind::Truth)?, LogKind::Truth)?;
    let ins = numeric(&load(dir, LogKind::Ins)?, LogKind::Ins)?;
    if truth.len() != ins.len() {
        return Err(SummarizeError::IncompleteLog(format!(
            "{} truth rows but {} ins rows",
            truth.len(),
            ins.len()
        )));
    }

    let mut errors = String::from("time,err_north,err_east,err_down,err_norm\n");
    let mut max_norm: f64 = 0.0;
    let mut last = [0.0; 3];
    let mut last_norm = 0.0;
    for (i, (t, e)) in truth.iter().zip(&ins).enumerate() {
        if t[0] != e[0] {
            return Err(SummarizeError::IncompleteLog(format!(
                "row {i}: truth at t={} paired with ins at t={}",
                t[0], e[0]
            )));
        }
        let d = [e[1] - t[1], e[2] - t[2], e[3] - t[3]];
        let norm = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
        errors.push_str(&format!("{},{},{},{},{}\n", t[0], d[0], d[1], d[2], norm));
        max_norm = max_norm.max(norm);
        last = d;
        last_norm = norm;
    }
    write_file(dir.join(ERRORS_FILE), &errors)?;

    let phases = load(dir, LogKind::Phase)?;
    let mut timeline = String::from("time,from,to,event,time_in_from\n");
    let mut entered = 0.0;
    for row in &phases.rows {
        if row.len() != 4 {
            return Err(SummarizeError::IncompleteLog("malformed phase row".into()));
        }
        let time: f64 = row[0]
            .parse()
            .map_err(|_| SummarizeError::IncompleteLog("bad phase time".into()))?;
        timeline.push_str(&format!(
            "{},{},{},{},{}\n",
            row[0],
            row[1],
            row[2],
            row[3],
            time - entered
        ));
        entered = time;
    }
    write_file(dir.join(TIMELINE_FILE), &timeline)?;

    let grasps = load(dir, LogKind::Grasp)?;
    let action = grasps.column("action").unwrap_or(1);
    let attempts = grasps
        .rows
        .iter()
        .filter(|r| matches!(r.get(action).map(String::as_str), Some("attach" | "reject")))
        .count();

    Ok(LogSummary {
        control_ticks: truth.len(),
        sim_time: truth.last().map_or(0.0, |r| r[0]),
        final_ins_error: last_norm,
        max_ins_error: max_norm,
        terminal_error: last,
        waypoints_captured: load(dir, LogKind::Waypoint)?.rows.len(),
        grasp_attempts: attempts,
        phase_transitions: phases.rows.len(),
        final_phase: phases
            .rows
            .last()
            .map_or_else(|| "descend".to_string(), |r| r[2].clone()),
    })
}
