//! Deterministic limit dynamics: integration of the discontinuous mean-field
//! ODE, stationary-state detection, a perturbation stability probe, and the
//! sup-distance between trajectories.
//!
//! The integrator is fixed-step forward Euler with event location. The drift
//! is constant in its indicator pattern, so whenever an Euler step would
//! carry a moving group across the edge of its hold band the step is cut at
//! the crossing (found exactly, since the indicator arguments are affine
//! along the step). A group landed on its locus holds until the other group
//! moves it off, which is the transversal crossing of the Filippov solution.
//! The one reachable non-crossing intersection is the symmetric approach to
//! `(0.5, 0.5)` in the non-partisan regime, where both groups land together
//! and the state stays put.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{drift_with_slack, indicator_arguments, pull, ModelParams, PopulationState, Pull};
use crate::trajectory::{Source, Trajectory, TrajectoryMeta};

/// Width added to the hold band so that states placed on a locus by event
/// location are recognised as on it despite rounding.
pub const LOCUS_SLACK: f64 = 1e-12;

/// Cap on event-located sub-steps inside one grid step.
const MAX_SUBSTEPS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct IntegrationConfig {
    pub step_h: f64,
    pub horizon_t: f64,
    /// Drift magnitude at or below which a state counts as stationary.
    pub stationary_tol: f64,
    pub clamp: bool,
    /// Keep every `record_every`-th grid point (event points and the final
    /// state are always kept).
    pub record_every: usize,
}

impl Default for IntegrationConfig {
    fn default() -> Self {
        IntegrationConfig {
            step_h: 1e-3,
            horizon_t: 30.0,
            stationary_tol: 1e-9,
            clamp: true,
            record_every: 1,
        }
    }
}

impl IntegrationConfig {
    pub fn with_horizon(self, horizon_t: f64) -> Self {
        IntegrationConfig { horizon_t, ..self }
    }

    pub fn with_step(self, step_h: f64) -> Self {
        IntegrationConfig { step_h, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step_h > 0.0 && self.step_h <= 1.0) {
            return Err(Error::InvalidConfig(format!("step_h = {} must lie in (0, 1]", self.step_h)));
        }
        if !(self.horizon_t >= self.step_h) || !self.horizon_t.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "horizon_t = {} must be finite and at least step_h = {}",
                self.horizon_t, self.step_h
            )));
        }
        if !(self.stationary_tol >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "stationary_tol = {} must be non-negative",
                self.stationary_tol
            )));
        }
        if self.record_every == 0 {
            return Err(Error::InvalidConfig("record_every must be at least 1".into()));
        }
        Ok(())
    }

    fn grid_steps(&self) -> u64 {
        let x = self.horizon_t / self.step_h;
        let r = x.round();
        if (x - r).abs() <= 1e-9 * r.max(1.0) {
            r as u64
        } else {
            x.ceil() as u64
        }
    }
}

/// Drift used by the integrator and the stationarity checks.
pub fn banded_drift(state: &PopulationState, params: &ModelParams) -> [f64; 2] {
    drift_with_slack(state, params, LOCUS_SLACK)
}

fn norm(v: [f64; 2]) -> f64 {
    v[0].hypot(v[1])
}

/// Fraction of the step `state -> state + dt * f` after which the first
/// moving group reaches the edge of its hold band, or `None` if no group does.
fn first_crossing(state: &PopulationState, f: [f64; 2], dt: f64, params: &ModelParams) -> Option<f64> {
    let delta = params.delta();
    let start = indicator_arguments(state, params);
    let end_state = PopulationState {
        theta_b: state.theta_b + dt * f[0],
        theta_r: state.theta_r + dt * f[1],
    };
    let end = indicator_arguments(&end_state, params);
    let mut best: Option<f64> = None;
    for g in 0..2 {
        let edge = match pull(start[g], delta, LOCUS_SLACK) {
            Pull::TowardOne if end[g] <= delta => delta,
            Pull::TowardZero if end[g] >= -delta => -delta,
            _ => continue,
        };
        let s = (start[g] - edge) / (start[g] - end[g]);
        if s > 0.0 && s < 1.0 {
            best = Some(best.map_or(s, |b: f64| b.min(s)));
        }
    }
    best
}

fn advance(state: &PopulationState, f: [f64; 2], dt: f64, clamp: bool) -> PopulationState {
    let (b, r) = (state.theta_b + dt * f[0], state.theta_r + dt * f[1]);
    if clamp {
        PopulationState::new(b, r)
    } else {
        PopulationState { theta_b: b, theta_r: r }
    }
}

/// Integrates the mean-field dynamics from `theta0` over `cfg.horizon_t`.
pub fn integrate(theta0: PopulationState, params: &ModelParams, cfg: &IntegrationConfig) -> Result<Trajectory> {
    cfg.validate()?;
    let mut traj = Trajectory::new(TrajectoryMeta {
        source: Source::MeanField,
        params: Some(*params),
        seed: None,
        n_nodes: None,
        record_stride: None,
        step_h: Some(cfg.step_h),
    });
    let mut state = theta0;
    let mut t = 0.0;
    traj.push(t, state);
    let steps = cfg.grid_steps();
    for k in 1..=steps {
        let target = if k == steps { cfg.horizon_t } else { k as f64 * cfg.step_h };
        let mut sub = 0;
        while t < target {
            let dt = target - t;
            let f = banded_drift(&state, params);
            if f == [0.0, 0.0] {
                t = target;
                break;
            }
            let cut = if sub < MAX_SUBSTEPS {
                first_crossing(&state, f, dt, params)
            } else {
                None
            };
            match cut {
                Some(s) => {
                    let dt_cut = s * dt;
                    let t_cut = t + dt_cut;
                    state = advance(&state, f, dt_cut, cfg.clamp);
                    if t_cut >= target {
                        t = target;
                        break;
                    }
                    t = t_cut;
                    if traj.last().is_some_and(|l| l.t < t) {
                        traj.push(t, state);
                    }
                    sub += 1;
                }
                None => {
                    state = advance(&state, f, dt, cfg.clamp);
                    t = target;
                }
            }
        }
        if (k % cfg.record_every as u64 == 0 || k == steps) && traj.last().is_some_and(|l| l.t < target) {
            traj.push(target, state);
        }
    }
    Ok(traj)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Stability {
    Stable,
    Unstable,
    Indeterminate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StationaryReport {
    /// Terminal point of the trajectory.
    pub point: PopulationState,
    /// Start of the first stretch of at least one time unit over which the
    /// drift stayed at or below the tolerance; `None` if never reached.
    pub reached_at: Option<f64>,
    /// Filled in only when a stability probe was run.
    pub stability: Option<Stability>,
}

pub fn find_stationary(traj: &Trajectory, params: &ModelParams, cfg: &IntegrationConfig) -> Result<StationaryReport> {
    let point = traj.terminal().ok_or(Error::EmptyTrajectory)?;
    let mut run_start: Option<f64> = None;
    let mut reached_at = None;
    for s in &traj.samples {
        if norm(banded_drift(&s.state, params)) <= cfg.stationary_tol {
            let start = *run_start.get_or_insert(s.t);
            if s.t - start >= 1.0 {
                reached_at = Some(start);
                break;
            }
        } else {
            run_start = None;
        }
    }
    Ok(StationaryReport {
        point,
        reached_at,
        stability: None,
    })
}

/// Thresholds of the perturbation probe.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeConfig {
    pub eps: f64,
    pub horizon_t: f64,
    /// Stable if every perturbed run ends within `return_fraction * eps`.
    pub return_fraction: f64,
    /// Unstable if any perturbed run strays beyond `diverge_factor * eps`.
    pub diverge_factor: f64,
    /// Largest drift norm accepted as stationary.
    pub stationary_tol: f64,
    pub step_h: f64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig {
            eps: 1e-3,
            horizon_t: 5.0,
            return_fraction: 0.5,
            diverge_factor: 10.0,
            stationary_tol: 1e-9,
            step_h: 1e-3,
        }
    }
}

/// Probes a stationary point with the four axis-aligned `+-eps` perturbations.
pub fn stability_probe(point: &PopulationState, params: &ModelParams, eps: f64) -> Result<Stability> {
    stability_probe_with(point, params, &ProbeConfig { eps, ..ProbeConfig::default() })
}

pub fn stability_probe_with(point: &PopulationState, params: &ModelParams, probe: &ProbeConfig) -> Result<Stability> {
    if norm(banded_drift(point, params)) > probe.stationary_tol {
        return Err(Error::NonStationary(point.theta_b, point.theta_r));
    }
    let cfg = IntegrationConfig {
        step_h: probe.step_h,
        horizon_t: probe.horizon_t,
        ..IntegrationConfig::default()
    };
    let eps = probe.eps;
    let starts = [
        PopulationState::new(point.theta_b + eps, point.theta_r),
        PopulationState::new(point.theta_b - eps, point.theta_r),
        PopulationState::new(point.theta_b, point.theta_r + eps),
        PopulationState::new(point.theta_b, point.theta_r - eps),
    ];
    let mut all_return = true;
    let mut any_diverge = false;
    for start in starts {
        let traj = integrate(start, params, &cfg)?;
        let end = traj.terminal().expect("integration records the initial state");
        if end.distance(point) > probe.return_fraction * eps {
            all_return = false;
        }
        if traj.samples.iter().any(|s| s.state.distance(point) > probe.diverge_factor * eps) {
            any_diverge = true;
        }
    }
    Ok(if any_diverge {
        Stability::Unstable
    } else if all_return {
        Stability::Stable
    } else {
        Stability::Indeterminate
    })
}

/// Supremum of the Euclidean state gap over the union of both sample grids
/// inside the common time range, each path read piecewise-constant.
pub fn sup_distance(a: &Trajectory, b: &Trajectory) -> Result<f64> {
    let (a0, a1) = (a.first().ok_or(Error::EmptyTrajectory)?.t, a.last().unwrap().t);
    let (b0, b1) = (b.first().ok_or(Error::EmptyTrajectory)?.t, b.last().unwrap().t);
    let (lo, hi) = (a0.max(b0), a1.min(b1));
    if lo > hi {
        return Err(Error::DisjointTimeRanges(a0, a1, b0, b1));
    }
    let (mut i, mut j) = (0usize, 0usize);
    let (sa, sb) = (&a.samples, &b.samples);
    // Position each cursor at the last sample at or before `lo`.
    while i + 1 < sa.len() && sa[i + 1].t <= lo {
        i += 1;
    }
    while j + 1 < sb.len() && sb[j + 1].t <= lo {
        j += 1;
    }
    let mut worst = sa[i].state.distance(&sb[j].state);
    loop {
        let next_a = sa.get(i + 1).map(|s| s.t).filter(|&t| t <= hi);
        let next_b = sb.get(j + 1).map(|s| s.t).filter(|&t| t <= hi);
        match (next_a, next_b) {
            (None, None) => break,
            (Some(ta), Some(tb)) if ta == tb => {
                i += 1;
                j += 1;
            }
            (Some(ta), Some(tb)) if ta < tb => i += 1,
            (Some(_), Some(_)) => j += 1,
            (Some(_), None) => i += 1,
            (None, Some(_)) => j += 1,
        }
        worst = worst.max(sa[i].state.distance(&sb[j].state));
    }
    Ok(worst)
}
