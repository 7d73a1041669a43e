//! Time-stamped population-state series shared by the agent engine and the
//! mean-field integrator, with their CSV + JSON sidecar format.
//!
//! The CSV header is fixed as `t,theta_b,theta_r`. Numbers are written with
//! Rust's shortest round-trip formatting, so a given trajectory always
//! serialises to the same bytes.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ModelParams, PopulationState};

pub const CSV_HEADER: &str = "t,theta_b,theta_r";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Agent,
    MeanField,
    External,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryMeta {
    pub source: Source,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub params: Option<ModelParams>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_nodes: Option<usize>,
    /// Agent runs: steps between samples. Mean-field runs: leave empty.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub record_stride: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step_h: Option<f64>,
}

impl TrajectoryMeta {
    pub fn external() -> Self {
        TrajectoryMeta {
            source: Source::External,
            params: None,
            seed: None,
            n_nodes: None,
            record_stride: None,
            step_h: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub state: PopulationState,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub meta: TrajectoryMeta,
}

impl Trajectory {
    pub fn new(meta: TrajectoryMeta) -> Self {
        Trajectory {
            samples: Vec::new(),
            meta,
        }
    }

    /// Appends a sample. Samples must arrive with strictly increasing `t`.
    pub fn push(&mut self, t: f64, state: PopulationState) {
        debug_assert!(
            self.samples.last().is_none_or(|s| s.t < t),
            "trajectory times must increase strictly"
        );
        self.samples.push(Sample { t, state });
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn first(&self) -> Option<&Sample> {
        self.samples.first()
    }

    pub fn last(&self) -> Option<&Sample> {
        self.samples.last()
    }

    pub fn terminal(&self) -> Option<PopulationState> {
        self.last().map(|s| s.state)
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.t)
    }

    /// Piecewise-constant value at `t`: the last sample at or before `t`.
    pub fn state_at(&self, t: f64) -> Option<PopulationState> {
        let idx = self.samples.partition_point(|s| s.t <= t);
        idx.checked_sub(1).map(|i| self.samples[i].state)
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::with_capacity(32 * (self.samples.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for s in &self.samples {
            out.push_str(&format!("{},{},{}\n", s.t, s.state.theta_b, s.state.theta_r));
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(fs::File::create(path)?);
        w.write_all(self.to_csv_string().as_bytes())?;
        w.flush()?;
        Ok(())
    }

    /// Writes `<stem>.csv` and `<stem>.json` (the metadata sidecar).
    pub fn write_with_sidecar(&self, csv_path: &Path) -> Result<()> {
        self.write_csv(csv_path)?;
        let sidecar = csv_path.with_extension("json");
        fs::write(sidecar, serde_json::to_string_pretty(&self.meta)? + "\n")?;
        Ok(())
    }

    /// Reads a trajectory CSV. A sidecar `<stem>.json` next to it is used for
    /// the metadata when present.
    pub fn read_csv(path: &Path) -> Result<Trajectory> {
        let text = fs::read_to_string(path)?;
        let sidecar = path.with_extension("json");
        let meta = match fs::read_to_string(&sidecar) {
            Ok(s) => serde_json::from_str(&s).unwrap_or_else(|_| TrajectoryMeta::external()),
            Err(_) => TrajectoryMeta::external(),
        };
        Self::parse_csv(&text, path, meta)
    }

    pub fn parse_csv(text: &str, path: &Path, meta: TrajectoryMeta) -> Result<Trajectory> {
        let err = |line: usize, message: String| Error::Parse {
            path: path.to_path_buf(),
            line,
            message,
        };
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, h)) if h.trim() == CSV_HEADER => {}
            Some((_, h)) => return Err(err(1, format!("expected header `{CSV_HEADER}`, found `{h}`"))),
            None => return Err(err(1, "empty file".into())),
        }
        let mut traj = Trajectory::new(meta);
        for (i, line) in lines {
            let line_no = i + 1;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 3 {
                return Err(err(line_no, format!("expected 3 fields, found {}", fields.len())));
            }
            let mut vals = [0.0; 3];
            for (slot, f) in vals.iter_mut().zip(&fields) {
                *slot = f
                    .parse::<f64>()
                    .map_err(|_| err(line_no, format!("`{f}` is not a number")))?;
            }
            if let Some(prev) = traj.last() {
                if vals[0] <= prev.t {
                    return Err(err(line_no, format!("time {} does not increase", vals[0])));
                }
            }
            for &v in &vals[1..] {
                if !(0.0..=1.0).contains(&v) {
                    return Err(err(line_no, format!("state component {v} outside [0, 1]")));
                }
            }
            traj.push(vals[0], PopulationState::new(vals[1], vals[2]));
        }
        if traj.is_empty() {
            return Err(Error::EmptyTrajectory);
        }
        Ok(traj)
    }
}
