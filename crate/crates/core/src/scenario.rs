//! Named, version-pinned scenarios. Definitions are the JSON files under
//! `scenarios/`, compiled into the crate. Each run in a scenario yields a
//! mean-field trajectory and, unless disabled, an agent-engine trajectory on a
//! network of the configured size.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::network_for;
use crate::meanfield::{integrate, IntegrationConfig};
use crate::model::{ModelParams, PopulationState};
use crate::seed;
use crate::sim::{InitMode, Simulation};
use crate::trajectory::Trajectory;

const BUILTIN: &[(&str, &str)] = &[
    ("tipping-minority-flip", include_str!("../scenarios/tipping-minority-flip.json")),
    ("majority-flip", include_str!("../scenarios/majority-flip.json")),
    ("minority-reversal", include_str!("../scenarios/minority-reversal.json")),
    ("breaking-unity", include_str!("../scenarios/breaking-unity.json")),
    ("homophily-flip", include_str!("../scenarios/homophily-flip.json")),
    ("large-alpha", include_str!("../scenarios/large-alpha.json")),
    ("large-beta", include_str!("../scenarios/large-beta.json")),
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioRunSpec {
    pub label: String,
    pub params: ModelParams,
    pub theta0: PopulationState,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_limit: Option<PopulationState>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub description: String,
    /// Why the pinned parameters produce the described behaviour.
    pub derivation: String,
    #[serde(default)]
    pub integration: IntegrationConfig,
    pub n_nodes: usize,
    pub seed: u64,
    /// Sampling interval of agent trajectories, in units of t.
    pub record_dt: f64,
    #[serde(default)]
    pub init_mode: InitMode,
    pub runs: Vec<ScenarioRunSpec>,
}

pub fn scenario_names() -> Vec<&'static str> {
    BUILTIN.iter().map(|(n, _)| *n).collect()
}

pub fn load_scenario(name: &str) -> Result<Scenario> {
    let (_, text) = BUILTIN
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::UnknownScenario(name.to_string()))?;
    Ok(serde_json::from_str(text)?)
}

/// Overrides applied on top of a scenario file.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct ScenarioOptions {
    pub n_nodes: Option<usize>,
    pub seed: Option<u64>,
    /// Skip the agent-engine runs.
    pub mean_field_only: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioRun {
    pub spec: ScenarioRunSpec,
    pub mean_field: Trajectory,
    pub stochastic: Option<Trajectory>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioBundle {
    pub scenario: Scenario,
    pub runs: Vec<ScenarioRun>,
}

impl Scenario {
    /// Seed of run `i`, derived like a sweep cell.
    pub fn run_seed(&self, base: u64, i: usize) -> u64 {
        seed::derive(seed::derive(base, seed::ROLE_SWEEP), i as u64)
    }

    pub fn run(&self, options: &ScenarioOptions) -> Result<ScenarioBundle> {
        let n = options.n_nodes.unwrap_or(self.n_nodes);
        let base = options.seed.unwrap_or(self.seed);
        if !options.mean_field_only && n < 2 {
            return Err(Error::TooFewNodes(n));
        }
        if !(self.record_dt > 0.0) {
            return Err(Error::InvalidConfig(format!("record_dt = {} must be positive", self.record_dt)));
        }
        let stride = ((self.record_dt * n as f64).round() as u64).max(1);
        // Runs go one at a time: dense two-block networks at full size are
        // large, and holding several at once is not worth the speed-up.
        let mut runs = Vec::with_capacity(self.runs.len());
        for (i, spec) in self.runs.iter().enumerate() {
            let mean_field = integrate(spec.theta0, &spec.params, &self.integration)?;
            let stochastic = if options.mean_field_only {
                None
            } else {
                let run_seed = self.run_seed(base, i);
                let net = network_for(&spec.params, n, seed::derive(run_seed, seed::ROLE_GRAPH))?;
                let mut sim = Simulation::new(
                    &net,
                    spec.params,
                    spec.theta0,
                    self.init_mode,
                    seed::derive(run_seed, seed::ROLE_SIM),
                );
                Some(sim.run(self.integration.horizon_t, stride))
            };
            runs.push(ScenarioRun {
                spec: spec.clone(),
                mean_field,
                stochastic,
            });
        }
        Ok(ScenarioBundle {
            scenario: self.clone(),
            runs,
        })
    }
}

pub fn scenario_suite(name: &str, options: &ScenarioOptions) -> Result<ScenarioBundle> {
    load_scenario(name)?.run(options)
}

/// True if the largest value sits strictly inside the series and exceeds
/// both end values.
pub fn has_interior_maximum(values: &[f64]) -> bool {
    if values.len() < 3 {
        return false;
    }
    let (imax, vmax) = values
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
    imax > 0 && imax < values.len() - 1 && vmax > values[0] && vmax > values[values.len() - 1]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_builtin_parses_and_has_runs() {
        for name in scenario_names() {
            let s = load_scenario(name).unwrap();
            assert_eq!(s.name, name);
            assert!(!s.runs.is_empty());
        }
        assert!(matches!(load_scenario("no-such"), Err(Error::UnknownScenario(_))));
    }

    #[test]
    fn mean_field_limits_match_pinned_expectations() {
        let opts = ScenarioOptions {
            mean_field_only: true,
            ..Default::default()
        };
        for name in scenario_names() {
            let bundle = scenario_suite(name, &opts).unwrap();
            for run in &bundle.runs {
                let end = run.mean_field.terminal().unwrap();
                let want = run.spec.expected_limit.unwrap();
                assert!(end.sup_norm_distance(&want) < 1e-6, "{name}/{}: {end:?} vs {want:?}", run.spec.label);
                assert!(run.stochastic.is_none());
            }
        }
    }

    #[test]
    fn minority_flip_is_non_monotone() {
        let opts = ScenarioOptions {
            mean_field_only: true,
            ..Default::default()
        };
        let b = scenario_suite("tipping-minority-flip", &opts).unwrap();
        let blue: Vec<f64> = b.runs[0].mean_field.samples.iter().map(|s| s.state.theta_b).collect();
        assert!(has_interior_maximum(&blue));
        let b = scenario_suite("majority-flip", &opts).unwrap();
        let blue: Vec<f64> = b.runs[0].mean_field.samples.iter().map(|s| s.state.theta_b).collect();
        assert!(!has_interior_maximum(&blue));
    }

    #[test]
    fn small_stochastic_runs_are_seeded() {
        let opts = ScenarioOptions {
            n_nodes: Some(300),
            seed: Some(5),
            mean_field_only: false,
        };
        let a = scenario_suite("large-alpha", &opts).unwrap();
        let b = scenario_suite("large-alpha", &opts).unwrap();
        assert_eq!(a, b);
        let t = a.runs[0].stochastic.as_ref().unwrap();
        assert_eq!(t.meta.n_nodes, Some(300));
        assert_eq!(t.meta.record_stride, Some(3));
    }
}
