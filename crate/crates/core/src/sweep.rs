//! Parameter grids and homophily scans.
//!
//! Every cell is an independent task evaluated on the rayon pool. Cells are
//! collected by index, and stochastic cells draw from a seed derived from the
//! base seed and the cell index, so results do not depend on the number of
//! workers. A cell that cannot be evaluated is recorded as failed with a
//! reason; it never aborts the sweep.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::network_for;
use crate::meanfield::{integrate, IntegrationConfig};
use crate::model::{classify_regime, ModelParams, PopulationState, Regime, Topology, DEFAULT_REGIME_TOL};
use crate::seed;
use crate::sim::{InitMode, Simulation};

/// Quantities a sweep axis can vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    Alpha,
    Beta,
    Delta,
    RedFraction,
    Homophily,
    Theta0B,
    Theta0R,
    /// `alpha / beta`. Sets `alpha = ratio * beta`; if that exceeds 1 the
    /// pair becomes `(1, 1 / ratio)`. Without inertia only the ratio matters.
    LoveHateRatio,
    /// `r / (1 - r)`, the red-to-blue size ratio.
    RedOdds,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::Alpha => "alpha",
            SweepParam::Beta => "beta",
            SweepParam::Delta => "delta",
            SweepParam::RedFraction => "red_fraction",
            SweepParam::Homophily => "homophily",
            SweepParam::Theta0B => "theta0_b",
            SweepParam::Theta0R => "theta0_r",
            SweepParam::LoveHateRatio => "love_hate_ratio",
            SweepParam::RedOdds => "red_odds",
        }
    }

    /// Legal range as (min, max, min inclusive, max inclusive).
    fn domain(self) -> (f64, f64, bool, bool) {
        match self {
            SweepParam::Alpha | SweepParam::Beta | SweepParam::Delta | SweepParam::Theta0B | SweepParam::Theta0R => {
                (0.0, 1.0, true, true)
            }
            SweepParam::RedFraction | SweepParam::Homophily => (0.0, 1.0, false, false),
            SweepParam::LoveHateRatio => (0.0, f64::INFINITY, true, false),
            SweepParam::RedOdds => (0.0, f64::INFINITY, false, false),
        }
    }

    fn contains(self, x: f64) -> bool {
        let (lo, hi, lo_in, hi_in) = self.domain();
        let above = if lo_in { x >= lo } else { x > lo };
        let below = if hi_in { x <= hi } else { x < hi };
        x.is_finite() && above && below
    }

    fn describe_domain(self) -> String {
        let (lo, hi, lo_in, hi_in) = self.domain();
        let hi = if hi.is_infinite() { "inf".to_string() } else { hi.to_string() };
        format!("{}{lo}, {hi}{}", if lo_in { '[' } else { '(' }, if hi_in { ']' } else { ')' })
    }

    fn apply(self, value: f64, params: ModelParams, theta0: PopulationState) -> Result<(ModelParams, PopulationState)> {
        let mut theta = theta0;
        let params = match self {
            SweepParam::Alpha => params.with_alpha(value)?,
            SweepParam::Beta => params.with_beta(value)?,
            SweepParam::Delta => params.with_delta(value)?,
            SweepParam::RedFraction => params.with_red_fraction(value)?,
            SweepParam::Homophily => params.with_homophily(value)?,
            SweepParam::Theta0B => {
                theta.theta_b = value;
                params
            }
            SweepParam::Theta0R => {
                theta.theta_r = value;
                params
            }
            SweepParam::LoveHateRatio => {
                let alpha = value * params.beta();
                if alpha <= 1.0 {
                    params.with_alpha(alpha)?
                } else {
                    params.with_alpha(1.0)?.with_beta(1.0 / value)?
                }
            }
            SweepParam::RedOdds => params.with_red_fraction(value / (1.0 + value))?,
        };
        Ok((params, theta))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepAxis {
    pub param: SweepParam,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl SweepAxis {
    pub fn new(param: SweepParam, min: f64, max: f64, steps: usize) -> Self {
        SweepAxis { param, min, max, steps }
    }

    /// Evenly spaced values from `min` to `max` inclusive.
    pub fn values(&self) -> Vec<f64> {
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.max
                } else {
                    self.min + (self.max - self.min) * i as f64 / last
                }
            })
            .collect()
    }

    fn validate(&self) -> Result<()> {
        let p = self.param;
        if self.steps < 2 {
            return Err(Error::InvalidSweep(format!("axis {}: steps = {} must be at least 2", p.name(), self.steps)));
        }
        if !(self.min <= self.max) {
            return Err(Error::InvalidSweep(format!("axis {}: min {} exceeds max {}", p.name(), self.min, self.max)));
        }
        for x in [self.min, self.max] {
            if !p.contains(x) {
                return Err(Error::InvalidSweep(format!(
                    "axis {}: {x} outside legal range {}",
                    p.name(),
                    p.describe_domain()
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepMode {
    Classify,
    IntegrateEndpoint,
    SimulateEndpoint,
}

/// Agent-engine settings for `SimulateEndpoint` cells.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimOptions {
    pub n_nodes: usize,
    pub horizon_t: f64,
    pub init_mode: InitMode,
}

impl Default for SimOptions {
    fn default() -> Self {
        SimOptions {
            n_nodes: 1000,
            horizon_t: 30.0,
            init_mode: InitMode::Quota,
        }
    }
}

fn default_tol() -> f64 {
    DEFAULT_REGIME_TOL
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    #[serde(default)]
    pub axes: Vec<SweepAxis>,
    /// Values of every parameter not on an axis.
    pub params: ModelParams,
    pub theta0: PopulationState,
    pub mode: SweepMode,
    #[serde(default)]
    pub sim: SimOptions,
    #[serde(default)]
    pub integration: IntegrationConfig,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_tol")]
    pub regime_tol: f64,
}

impl SweepSpec {
    pub fn new(params: ModelParams, theta0: PopulationState, mode: SweepMode) -> Self {
        SweepSpec {
            axes: Vec::new(),
            params,
            theta0,
            mode,
            sim: SimOptions::default(),
            integration: IntegrationConfig::default(),
            seed: 0,
            regime_tol: DEFAULT_REGIME_TOL,
        }
    }

    pub fn with_axis(mut self, axis: SweepAxis) -> Self {
        self.axes.push(axis);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.axes.len() > 2 {
            return Err(Error::InvalidSweep(format!("at most 2 axes, got {}", self.axes.len())));
        }
        if self.axes.len() == 2 && self.axes[0].param == self.axes[1].param {
            return Err(Error::InvalidSweep("both axes vary the same parameter".into()));
        }
        for a in &self.axes {
            a.validate()?;
        }
        for (name, v) in [("theta0.theta_b", self.theta0.theta_b), ("theta0.theta_r", self.theta0.theta_r)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidSweep(format!("{name} = {v} outside [0, 1]")));
            }
        }
        if !(self.regime_tol >= 0.0) {
            return Err(Error::InvalidSweep(format!("regime_tol = {} must be non-negative", self.regime_tol)));
        }
        if self.mode == SweepMode::SimulateEndpoint {
            if self.sim.n_nodes < 2 {
                return Err(Error::InvalidSweep(format!("sim.n_nodes = {} must be at least 2", self.sim.n_nodes)));
            }
            if !(self.sim.horizon_t > 0.0 && self.sim.horizon_t.is_finite()) {
                return Err(Error::InvalidSweep(format!("sim.horizon_t = {} must be positive", self.sim.horizon_t)));
            }
        }
        if self.mode == SweepMode::IntegrateEndpoint {
            self.integration.validate()?;
        }
        Ok(())
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(|a| a.steps).collect()
    }

    pub fn cell_count(&self) -> usize {
        self.shape().iter().product()
    }

    /// Axis coordinates of cell `index` (row-major, first axis outermost).
    pub fn coords(&self, index: usize) -> Vec<f64> {
        let mut rem = index;
        let mut idx = vec![0; self.axes.len()];
        for (k, a) in self.axes.iter().enumerate().rev() {
            idx[k] = rem % a.steps;
            rem /= a.steps;
        }
        self.axes.iter().zip(idx).map(|(a, i)| a.values()[i]).collect()
    }

    /// Seed of cell `index`: `derive(derive(seed, ROLE_SWEEP), index)`.
    pub fn cell_seed(&self, index: usize) -> u64 {
        seed::derive(seed::derive(self.seed, seed::ROLE_SWEEP), index as u64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellOutcome {
    /// Present whenever the cell has no inertia.
    pub regime: Option<Regime>,
    /// Present in the integrate and simulate modes.
    pub endpoint: Option<PopulationState>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub index: usize,
    pub coords: Vec<f64>,
    pub seed: Option<u64>,
    pub outcome: std::result::Result<CellOutcome, String>,
    /// Wall-clock cost. Kept out of every export so outputs stay reproducible.
    pub runtime: Duration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub spec: SweepSpec,
    pub cells: Vec<Cell>,
}

/// Evaluates one parameter point under `mode`.
pub fn evaluate_point(
    params: &ModelParams,
    theta0: PopulationState,
    mode: SweepMode,
    spec_sim: &SimOptions,
    integration: &IntegrationConfig,
    regime_tol: f64,
    cell_seed: u64,
) -> Result<CellOutcome> {
    let regime = if params.delta() == 0.0 {
        Some(classify_regime(params, regime_tol)?)
    } else {
        None
    };
    let endpoint = match mode {
        SweepMode::Classify => {
            if regime.is_none() {
                classify_regime(params, regime_tol)?;
            }
            None
        }
        SweepMode::IntegrateEndpoint => integrate(theta0, params, integration)?.terminal(),
        SweepMode::SimulateEndpoint => {
            let net = network_for(params, spec_sim.n_nodes, seed::derive(cell_seed, seed::ROLE_GRAPH))?;
            let mut sim = Simulation::new(&net, *params, theta0, spec_sim.init_mode, seed::derive(cell_seed, seed::ROLE_SIM));
            Some(sim.advance(spec_sim.horizon_t))
        }
    };
    Ok(CellOutcome { regime, endpoint })
}

pub fn phase_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    let stochastic = spec.mode == SweepMode::SimulateEndpoint;
    let cells = (0..spec.cell_count())
        .into_par_iter()
        .map(|index| {
            let started = Instant::now();
            let coords = spec.coords(index);
            let cell_seed = spec.cell_seed(index);
            let outcome = spec
                .axes
                .iter()
                .zip(&coords)
                .try_fold((spec.params, spec.theta0), |(p, t), (axis, &v)| axis.param.apply(v, p, t))
                .and_then(|(p, t)| {
                    evaluate_point(&p, t, spec.mode, &spec.sim, &spec.integration, spec.regime_tol, cell_seed)
                })
                .map_err(|e| e.to_string());
            Cell {
                index,
                coords,
                seed: stochastic.then_some(cell_seed),
                outcome,
                runtime: started.elapsed(),
            }
        })
        .collect();
    Ok(SweepResult {
        spec: spec.clone(),
        cells,
    })
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl SweepResult {
    pub fn csv_header(&self) -> String {
        let mut cols: Vec<&str> = self.spec.axes.iter().map(|a| a.param.name()).collect();
        cols.extend(["regime", "theta_b", "theta_r", "seed", "error"]);
        cols.join(",")
    }

    /// One row per cell in index order. Error messages have commas replaced
    /// so that rows keep a fixed column count.
    pub fn to_csv_string(&self) -> String {
        let mut out = self.csv_header();
        out.push('\n');
        for c in &self.cells {
            for x in &c.coords {
                write!(out, "{x},").unwrap();
            }
            let (regime, b, r, err) = match &c.outcome {
                Ok(o) => (
                    o.regime.map(|g| g.label()).unwrap_or(""),
                    o.endpoint.map(|e| e.theta_b),
                    o.endpoint.map(|e| e.theta_r),
                    String::new(),
                ),
                Err(e) => ("", None, None, e.replace(',', ";")),
            };
            writeln!(
                out,
                "{regime},{},{},{},{err}",
                fmt_opt(b),
                fmt_opt(r),
                c.seed.map(|s| s.to_string()).unwrap_or_default()
            )
            .unwrap();
        }
        out
    }

    pub fn failures(&self) -> usize {
        self.cells.iter().filter(|c| c.outcome.is_err()).count()
    }

    pub fn regime_counts(&self) -> BTreeMap<&'static str, usize> {
        let mut m = BTreeMap::new();
        for c in &self.cells {
            if let Ok(CellOutcome { regime: Some(g), .. }) = c.outcome {
                *m.entry(g.label()).or_insert(0) += 1;
            }
        }
        m
    }

    /// Summary written next to the CSV. Deterministic: no timings.
    pub fn manifest(&self, csv_name: &str) -> serde_json::Value {
        serde_json::json!({
            "spec": self.spec,
            "shape": self.spec.shape(),
            "cells": self.cells.len(),
            "failures": self.failures(),
            "regime_counts": self.regime_counts(),
            "csv": csv_name,
        })
    }

    /// Regimes laid out as `grid[i][j]` for a two-axis sweep (`i` along the
    /// first axis); `None` for failed or unclassified cells.
    pub fn regime_grid(&self) -> Option<Vec<Vec<Option<Regime>>>> {
        let shape = self.spec.shape();
        if shape.len() != 2 {
            return None;
        }
        let mut grid = vec![vec![None; shape[1]]; shape[0]];
        for c in &self.cells {
            let (i, j) = (c.index / shape[1], c.index % shape[1]);
            grid[i][j] = c.outcome.as_ref().ok().and_then(|o| o.regime);
        }
        Some(grid)
    }

    pub fn total_runtime(&self) -> Duration {
        self.cells.iter().map(|c| c.runtime).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub rho: f64,
    pub regime: Option<Regime>,
    pub endpoint: Option<PopulationState>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Options for [`homophily_scan`] beyond the parameters themselves.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ScanOptions {
    pub sim: SimOptions,
    pub integration: IntegrationConfig,
    pub seed: u64,
}

/// Evaluates `params` on the two-block topology at each homophily value, in
/// the given order. Point `i` uses the sweep seed of index `i`.
pub fn homophily_scan(
    params: &ModelParams,
    rho_values: &[f64],
    theta0: PopulationState,
    mode: SweepMode,
    options: &ScanOptions,
) -> Vec<ScanPoint> {
    let base = params.with_topology(Topology::StochasticBlock);
    let root = seed::derive(options.seed, seed::ROLE_SWEEP);
    rho_values
        .par_iter()
        .enumerate()
        .map(|(i, &rho)| {
            let res = base.with_homophily(rho).and_then(|p| {
                evaluate_point(
                    &p,
                    theta0,
                    mode,
                    &options.sim,
                    &options.integration,
                    DEFAULT_REGIME_TOL,
                    seed::derive(root, i as u64),
                )
            });
            match res {
                Ok(o) => ScanPoint {
                    rho,
                    regime: o.regime,
                    endpoint: o.endpoint,
                    error: None,
                },
                Err(e) => ScanPoint {
                    rho,
                    regime: None,
                    endpoint: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect()
}

/// Adjacent scan points whose regimes differ: `(rho_a, rho_b, regime_a, regime_b)`.
pub fn regime_changes(points: &[ScanPoint]) -> Vec<(f64, f64, Regime, Regime)> {
    points
        .windows(2)
        .filter_map(|w| match (w[0].regime, w[1].regime) {
            (Some(a), Some(b)) if a != b => Some((w[0].rho, w[1].rho, a, b)),
            _ => None,
        })
        .collect()
}

pub fn scan_to_csv_string(points: &[ScanPoint]) -> String {
    let mut out = String::from("rho,regime,theta_b,theta_r,error\n");
    for p in points {
        writeln!(
            out,
            "{},{},{},{},{}",
            p.rho,
            p.regime.map(|g| g.label()).unwrap_or(""),
            fmt_opt(p.endpoint.map(|e| e.theta_b)),
            fmt_opt(p.endpoint.map(|e| e.theta_r)),
            p.error.as_deref().unwrap_or("").replace(',', ";")
        )
        .unwrap();
    }
    out
}
