//! Structured run logs: one CSV per record kind plus an interleaved JSONL stream.
//!
//! Floats are written with Rust's shortest round-trip formatting, so parsing a
//! CSV cell back with `str::parse::<f64>` reproduces the logged value exactly.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::control::THRUSTER_COUNT;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LogKind {
    Truth,
    Ins,
    Wrench,
    Thrusters,
    Joints,
    Phase,
    Detection,
    Grasp,
    Waypoint,
}

impl LogKind {
    pub const ALL: [Self; 9] = [
        Self::Truth,
        Self::Ins,
        Self::Wrench,
        Self::Thrusters,
        Self::Joints,
        Self::Phase,
        Self::Detection,
        Self::Grasp,
        Self::Waypoint,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Truth => "truth",
            Self::Ins => "ins",
            Self::Wrench => "wrench",
            Self::Thrusters => "thrusters",
            Self::Joints => "joints",
            Self::Phase => "phase",
            Self::Detection => "detection",
            Self::Grasp => "grasp",
            Self::Waypoint => "waypoint",
        }
    }

    pub fn header(self) -> &'static str {
        match self {
            Self::Truth => "time,north,east,down,yaw,vx,vy,vz,yaw_rate",
            Self::Ins => "time,north,east,down,yaw,vn,ve,vd",
            Self::Wrench => "time,fx,fy,fz,tau_yaw",
            Self::Thrusters => "time,u1,u2,u3,u4,u5,u6,u7,u8",
            Self::Joints => "time,q1,q2,q3,qd1,qd2,qd3,q1_ref,q2_ref,q3_ref",
            Self::Phase => "time,from,to,event",
            Self::Detection => "time,offset_north,offset_east,offset_down",
            Self::Grasp => "time,action,gap,attached",
            Self::Waypoint => "time,index,north,east,down,yaw",
        }
    }

    pub fn file_name(self) -> String {
        format!("{}.csv", self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LogRecord {
    /// True pose and NED velocity.
    Truth {
        time: f64,
        north: f64,
        east: f64,
        down: f64,
        yaw: f64,
        vx: f64,
        vy: f64,
        vz: f64,
        yaw_rate: f64,
    },
    Ins {
        time: f64,
        north: f64,
        east: f64,
        down: f64,
        yaw: f64,
        vn: f64,
        ve: f64,
        vd: f64,
    },
    /// Body wrench produced by the clamped thrusts.
    Wrench {
        time: f64,
        fx: f64,
        fy: f64,
        fz: f64,
        tau_yaw: f64,
    },
    Thrusters {
        time: f64,
        u: [f64; THRUSTER_COUNT],
    },
    Joints {
        time: f64,
        q: [f64; 3],
        q_dot: [f64; 3],
        q_ref: [f64; 3],
    },
    Phase {
        time: f64,
        from: String,
        to: String,
        event: String,
    },
    Detection {
        time: f64,
        offset: [f64; 3],
    },
    /// `action` is `attach`, `reject` or `release`.
    Grasp {
        time: f64,
        action: String,
        gap: f64,
        attached: bool,
    },
    Waypoint {
        time: f64,
        index: usize,
        north: f64,
        east: f64,
        down: f64,
        yaw: f64,
    },
}

fn join(time: f64, values: &[f64]) -> String {
    let mut row = time.to_string();
    for v in values {
        row.push(',');
        row.push_str(&v.to_string());
    }
    row
}

impl LogRecord {
    pub fn kind(&self) -> LogKind {
        match self {
            Self::Truth { .. } => LogKind::Truth,
            Self::Ins { .. } => LogKind::Ins,
            Self::Wrench { .. } => LogKind::Wrench,
            Self::Thrusters { .. } => LogKind::Thrusters,
            Self::Joints { .. } => LogKind::Joints,
            Self::Phase { .. } => LogKind::Phase,
            Self::Detection { .. } => LogKind::Detection,
            Self::Grasp { .. } => LogKind::Grasp,
            Self::Waypoint { .. } => LogKind::Waypoint,
        }
    }

    pub fn time(&self) -> f64 {
        match self {
            Self::Truth { time, .. }
            | Self::Ins { time, .. }
            | Self::Wrench { time, .. }
            | Self::Thrusters { time, .. }
            | Self::Joints { time, .. }
            | Self::Phase { time, .. }
            | Self::Detection { time, .. }
            | Self::Grasp { time, .. }
            | Self::Waypoint { time, .. } => *time,
        }
    }

    /// CSV row matching [`LogKind::header`].
    pub fn csv_row(&self) -> String {
        match self {
            Self::Truth {
                time,
                north,
                east,
                down,
                yaw,
                vx,
                vy,
                vz,
                yaw_rate,
            } => join(*time, &[*north, *east, *down, *yaw, *vx, *vy, *vz, *yaw_rate]),
            Self::Ins {
                time,
                north,
                east,
                down,
                yaw,
                vn,
                ve,
                vd,
            } => join(*time, &[*north, *east, *down, *yaw, *vn, *ve, *vd]),
            Self::Wrench {
                time,
                fx,
                fy,
                fz,
                tau_yaw,
            } => join(*time, &[*fx, *fy, *fz, *tau_yaw]),
            Self::Thrusters { time, u } => join(*time, u),
            Self::Joints { time, q, q_dot, q_ref } => {
                let mut v = Vec::with_capacity(9);
                v.extend_from_slice(q);
                v.extend_from_slice(q_dot);
                v.extend_from_slice(q_ref);
                join(*time, &v)
            }
            Self::Phase { time, from, to, event } => format!("{time},{from},{to},{event}"),
            Self::Detection { time, offset } => join(*time, offset),
            Self::Grasp {
                time,
                action,
                gap,
                attached,
            } => format!("{time},{action},{gap},{}", u8::from(*attached)),
            Self::Waypoint {
                time,
                index,
                north,
                east,
                down,
                yaw,
            } => format!("{time},{index},{}", join(*north, &[*east, *down, *yaw])),
        }
    }
}

/// Destination for log records.
pub trait LogSink {
    fn record(&mut self, record: &LogRecord) -> io::Result<()>;

    fn finish(&mut self) -> io::Result<()> {
        Ok(())
    }
}

impl LogSink for Vec<LogRecord> {
    fn record(&mut self, record: &LogRecord) -> io::Result<()> {
        self.push(record.clone());
        Ok(())
    }
}

/// Discards everything.
#[derive(Debug, Default, Clone, Copy)]
pub struct NullSink;

impl LogSink for NullSink {
    fn record(&mut self, _: &LogRecord) -> io::Result<()> {
        Ok(())
    }
}

/// Streams records into `<dir>/<kind>.csv` and `<dir>/records.jsonl`.
pub struct LogWriter {
    dir: PathBuf,
    csv: Vec<BufWriter<File>>,
    jsonl: BufWriter<File>,
}

pub const JSONL_FILE: &str = "records.jsonl";

impl LogWriter {
    /// Creates `dir` if needed and writes every CSV header.
    pub fn create(dir: &Path) -> io::Result<Self> {
        std::fs::create_dir_all(dir)?;
        let mut csv = Vec::with_capacity(LogKind::ALL.len());
        for kind in LogKind::ALL {
            let mut w = BufWriter::new(File::create(dir.join(kind.file_name()))?);
            writeln!(w, "{}", kind.header())?;
            csv.push(w);
        }
        Ok(Self {
            dir: dir.to_path_buf(),
            csv,
            jsonl: BufWriter::new(File::create(dir.join(JSONL_FILE))?),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }
}

impl LogSink for LogWriter {
    fn record(&mut self, record: &LogRecord) -> io::Result<()> {
        let index = LogKind::ALL.iter().position(|k| *k == record.kind()).unwrap_or(0);
        writeln!(self.csv[index], "{}", record.csv_row())?;
        serde_json::to_writer(&mut self.jsonl, record)?;
        self.jsonl.write_all(b"\n")
    }

    fn finish(&mut self) -> io::Result<()> {
        for w in &mut self.csv {
            w.flush()?;
        }
        self.jsonl.flush()
    }
}

/// Writes a complete record list to `dir`.
pub fn write_logs(dir: &Path, records: &[LogRecord]) -> io::Result<()> {
    let mut w = LogWriter::create(dir)?;
    for r in records {
        w.record(r)?;
    }
    w.finish()
}

/// A CSV file split into its header and string cells.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    /// Parses every cell of a numeric table.
    pub fn numeric(&self) -> Result<Vec<Vec<f64>>, std::num::ParseFloatError> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|c| c.parse::<f64>()).collect())
            .collect()
    }
}

pub fn read_csv(path: &Path) -> io::Result<CsvTable> {
    let reader = BufReader::new(File::open(path)?);
    let mut lines = reader.lines();
    let header = match lines.next() {
        Some(line) => line?.split(',').map(str::to_string).collect(),
        None => Vec::new(),
    };
    let mut rows = Vec::new();
    for line in lines {
        let line = line?;
        if !line.is_empty() {
            rows.push(line.split(',').map(str::to_string).collect());
        }
    }
    Ok(CsvTable { header, rows })
}
